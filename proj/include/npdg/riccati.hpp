#pragma once

#include <optional>
#include <vector>

#include "npdg/game_model.hpp"
#include "npdg/types.hpp"

namespace npdg {

/// Stabilizing Riccati matrices (one per player, or the single P^p).
struct RiccatiSolution {
  std::vector<Matrix> P;
  std::vector<double> residual_norms;
  int iterations = 0;
  bool converged = false;
  /// Max residual after each outer iteration (coupled solver only).
  std::vector<double> residual_history;
};

struct ClosedLoop {
  Matrix Ac;
  std::vector<Matrix> gains;
  bool stable = false;
};

struct CareOptions {
  double tol = 1e-9;
  int max_iter = 50;
};

struct CoupledOptions {
  double tol = 1e-9;
  int max_iter = 200;
  double damping = 0.5;
  /// Inner Newton-Kleinman budget per best-response solve.
  int inner_max_iter = 50;
  double divergence_limit = 1e12;
};

/// ||A^T P + P A - P B R^{-1} B^T P + Q||_2
double care_residual(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r,
                     const Matrix& p);

/// Gain K with A - B K Hurwitz. Zero if A already is; otherwise Bass's
/// shifted-Lyapunov construction restricted to the controllable subspace.
/// Throws NotStabilizable when no such gain is found.
Matrix stabilizing_gain(const Matrix& a, const Matrix& b);

/// Stabilizing solution of the continuous-time algebraic Riccati equation
/// by Newton-Kleinman iteration. `initial_gain` is used when it stabilizes
/// (A, B); otherwise `stabilizing_gain` supplies the start.
RiccatiSolution solve_care(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r,
                           const CareOptions& options = {},
                           const std::optional<Matrix>& initial_gain = std::nullopt);

/// Per-player stationarity residual of the coupled Riccati system
///   Q^i + A^T P^i + P^i A - P^i S_i P^i
///     - sum_{j != i} (P^i S_j P^j + P^j S_j P^i - P^j B^j R^{jj}^{-1} R^{ij} R^{jj}^{-1} B^j^T P^j)
/// with S_j = B^j R^{jj}^{-1} B^j^T.
std::vector<double> coupled_residuals(const GameSpec& game, const std::vector<Matrix>& p);

/// Feedback Nash equilibrium by damped iterated best response: each player
/// solves a CARE against the other players' frozen gains, then the gains are
/// relaxed toward the best responses.
RiccatiSolution solve_coupled_riccati(const GameSpec& game, const CoupledOptions& options = {});

/// CARE of the potential problem (A, B^p, Q^p, R^p).
RiccatiSolution solve_potential(const GameSpec& game, const PotentialSpec& pot,
                                const CareOptions& options = {});

/// A*_c = A - sum_i B^i R^{ii}^{-1} B^i^T P^i
ClosedLoop closed_loop_nash(const GameSpec& game, const std::vector<Matrix>& p);

/// A^p_c = A - B^p R^p^{-1} B^p^T P^p
ClosedLoop closed_loop_potential(const Matrix& a, const PotentialSpec& pot, const Matrix& pp);

}  // namespace npdg
