#pragma once

#include <string>
#include <utility>
#include <vector>

#include "npdg/game_model.hpp"
#include "npdg/riccati.hpp"
#include "npdg/types.hpp"

namespace npdg {

struct Trajectory {
  std::vector<double> grid;
  std::vector<Vector> states;
  Vector x0;
};

struct BoundReport {
  std::vector<double> grid;
  std::vector<double> error;
  std::vector<double> bound;
  std::vector<double> margin;
  bool holds = false;
  double delta_star_used = 0.0;

  // Inputs and intermediate quantities, echoed so the report stands alone.
  Vector x0;
  std::size_t players = 0;
  double bp_norm = 0.0;
  double ac_nash_norm = 0.0;
  double ac_pot_norm = 0.0;
  double deltaK_norm = 0.0;
  std::vector<double> per_player_distance;

  double max_margin() const;
  /// Index of the largest trajectory error.
  std::size_t argmax_error() const;
};

struct PiecewiseDelta {
  std::vector<std::pair<double, double>> partition;
  std::vector<double> deltas;
  bool monotone_decreasing = false;
};

/// Absolute slack in error <= bound.
inline constexpr double kBoundSlack = 1e-12;

/// e^M by scaling and squaring with the degree-13 Pade approximant.
Matrix matrix_exponential(const Matrix& m);

/// Uniform grid of `points` samples on [t0, t1].
std::vector<double> uniform_grid(double t0, double t1, std::size_t points);

/// x(t_k) = e^{Ac t_k} x0, each point computed independently.
Trajectory simulate_closed_loop(const Matrix& ac, const Vector& x0, const std::vector<double>& grid);

/// Classical RK4 with `substeps` uniform steps per grid interval.
Trajectory rk4_reference(const Matrix& ac, const Vector& x0, const std::vector<double>& grid,
                         int substeps);

std::vector<double> trajectory_error(const Trajectory& traj_pot, const Trajectory& traj_nash);

/// ||x0|| ||B^p|| N t exp(t max(||A^p_c||, ||A*_c||)) delta*
double c_npdg_bound(double t, const Vector& x0, const Matrix& bp, std::size_t players,
                    const Matrix& ac_nash, const Matrix& ac_pot, double delta_star);

struct VerifyOptions {
  CoupledOptions coupled;
  CareOptions care;
};

/// Solves both games, simulates both closed loops from x0 and checks the
/// trajectory error against C_NPDG(t) delta* on every grid point.
BoundReport verify_bound(const GameSpec& game, const PotentialSpec& pot, const Vector& x0,
                         const std::vector<double>& grid, const VerifyOptions& options = {});

/// `pieces` equal, contiguous intervals covering [t0, t1].
std::vector<std::pair<double, double>> uniform_partition(double t0, double t1, std::size_t pieces);

/// Delta_k = delta* times the largest state norm of either trajectory over
/// interval k (grid points inside the closed interval).
PiecewiseDelta piecewise_delta(const Trajectory& traj_pot, const Trajectory& traj_nash,
                               double delta_star,
                               const std::vector<std::pair<double, double>>& partition);

}  // namespace npdg
