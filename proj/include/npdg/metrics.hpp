#pragma once

#include <vector>

#include "npdg/game_model.hpp"
#include "npdg/types.hpp"

namespace npdg {

struct Trajectory;

inline constexpr double kExactnessTolerance = 1e-8;

/// d_i = ||B^i^T P^p - B^i^T P^i||_2 and their maximum.
struct DistanceReport {
  std::vector<double> per_player;
  double delta_star = 0.0;
  bool is_exact = false;
  double tolerance_used = kExactnessTolerance;
};

/// Closed-loop matrix error and the chain of estimates bounding its norm.
struct DeltaKReport {
  Matrix deltaK;
  double norm2 = 0.0;

  // The fields below are filled by deltaK_bound_chain only.
  /// ||F~||_2 and ||F~||_F for F~ = B^p^T P^p - R^p P_stack.
  double f_spectral = 0.0;
  double f_frobenius = 0.0;
  /// ||row block i of F~||_2 per player, and N * max of them.
  std::vector<double> f_block_norms;
  double f_block_surrogate = 0.0;
  /// ||R^p_i R^{ii}^{-1} B^i^T P^i||_2 >= ||B^i^T P^i||_2 per player, with
  /// R^p_i the column block of R^p belonging to u^i.
  std::vector<bool> scaling_condition_per_player;
  bool scaling_condition = false;
  double rp_norm = 0.0;
  double rp_inverse_norm = 0.0;
  double bp_norm = 0.0;
  double delta_star = 0.0;
  /// ||B^p||_2 * N * delta_star
  double chain_value = 0.0;
};

DistanceReport delta_star(const GameSpec& game, const std::vector<Matrix>& p,
                          const PotentialSpec& pot, const Matrix& pp,
                          double exact_tol = kExactnessTolerance);

/// Solves both Riccati problems with default options and compares them.
bool is_exact_potential(const GameSpec& game, const PotentialSpec& pot,
                        double tol = kExactnessTolerance);

/// sigma_d^i(t_k) = ||B^i^T P^p x^p(t_k) - B^i^T P^i x*(t_k)||_2, one series
/// per player.
std::vector<std::vector<double>> dd_trajectory(const GameSpec& game, const std::vector<Matrix>& p,
                                               const Matrix& pp, const Trajectory& traj_pot,
                                               const Trajectory& traj_nash);

/// Delta K = A*_c - A^p_c with its spectral norm.
DeltaKReport closed_loop_matrix_error(const Matrix& ac_nash, const Matrix& ac_pot);

/// Full chain of estimates ||Delta K|| <= ||B^p|| ||F~|| <= ||B^p|| N delta*.
/// Requires ||R^p||_2 > 1 (see normalize_potential_scaling).
DeltaKReport deltaK_bound_chain(const GameSpec& game, const PotentialSpec& pot,
                                const std::vector<Matrix>& p, const Matrix& pp);

}  // namespace npdg
