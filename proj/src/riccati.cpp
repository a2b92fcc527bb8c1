#include "npdg/riccati.hpp"

#include <algorithm>
#include <string>

#include "npdg/error.hpp"
#include "npdg/linalg.hpp"

namespace npdg {

namespace {

Matrix solve_spd(const Matrix& r, const Matrix& rhs) {
  Eigen::LLT<Eigen::MatrixXd> llt{Eigen::MatrixXd(r)};
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::kInvalidArgument, "input penalty is not positive definite");
  }
  return llt.solve(Eigen::MatrixXd(rhs));
}

// Pseudo-inverse of a symmetric positive semi-definite matrix, dropping
// eigenvalues below a relative threshold.
Matrix psd_pseudo_inverse(const Matrix& x) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig{Eigen::MatrixXd(linalg::symmetrize(x))};
  const Eigen::VectorXd& values = eig.eigenvalues();
  const Eigen::MatrixXd& vectors = eig.eigenvectors();
  const double cutoff = 1e-10 * std::max(values.cwiseAbs().maxCoeff(), 1e-300);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(values.size());
  for (Index k = 0; k < values.size(); ++k) {
    if (values(k) > cutoff) {
      inv(k) = 1.0 / values(k);
    }
  }
  return vectors * inv.asDiagonal() * vectors.transpose();
}

void check_care_shapes(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r) {
  const Index n = a.rows();
  if (a.cols() != n || b.rows() != n || q.rows() != n || q.cols() != n || r.rows() != b.cols() ||
      r.cols() != b.cols()) {
    throw Error(ErrorKind::kDimensionMismatch, "CARE operands have inconsistent shapes");
  }
}

// A polishing step past the tolerance is kept only if it shrinks the
// residual by at least this factor.
constexpr double kPolishRatio = 0.5;
// The damped outer iteration converges only linearly.
constexpr double kCoupledPolishRatio = 0.9;

bool stabilizes(const Matrix& a, const Matrix& b, const Matrix& k) {
  return k.rows() == b.cols() && k.cols() == a.rows() && k.allFinite() &&
         linalg::is_hurwitz(a - b * k);
}

}  // namespace

double care_residual(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r,
                     const Matrix& p) {
  check_care_shapes(a, b, q, r);
  const Matrix gain = solve_spd(r, b.transpose() * p);
  const Matrix res = a.transpose() * p + p * a - p * b * gain + q;
  return linalg::spectral_norm(res);
}

Matrix stabilizing_gain(const Matrix& a, const Matrix& b) {
  const Index n = a.rows();
  if (linalg::is_hurwitz(a)) {
    return Matrix::Zero(b.cols(), n);
  }
  // Shift so that -(A + beta I) is Hurwitz, then solve
  //   (A + beta I) X + X (A + beta I)^T = 2 B B^T.
  // K = B^T X^+ places the controllable modes at real part -beta.
  const double beta = linalg::spectral_norm(a) + 1.0;
  const Matrix shifted = a + beta * Matrix::Identity(n, n);
  const Matrix x = linalg::solve_lyapunov(-shifted.transpose(), 2.0 * b * b.transpose());
  const Matrix gain = b.transpose() * psd_pseudo_inverse(x);
  if (!stabilizes(a, b, gain)) {
    throw Error(ErrorKind::kNotStabilizable, "no stabilizing feedback gain for (A, B)");
  }
  return gain;
}

RiccatiSolution solve_care(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r,
                           const CareOptions& options, const std::optional<Matrix>& initial_gain) {
  check_care_shapes(a, b, q, r);
  Matrix gain = initial_gain && stabilizes(a, b, *initial_gain) ? *initial_gain
                                                                 : stabilizing_gain(a, b);

  RiccatiSolution solution;
  Matrix p = Matrix::Zero(a.rows(), a.rows());
  double residual = 0.0;
  for (int it = 1; it <= options.max_iter; ++it) {
    const Matrix closed = a - b * gain;
    Matrix next = linalg::solve_lyapunov(closed, q + gain.transpose() * r * gain);
    if (!next.allFinite()) {
      throw Error(ErrorKind::kNotStabilizable, "Newton-Kleinman iterate lost stability");
    }
    const double next_residual = care_residual(a, b, q, r, next);
    // Once within tolerance, keep polishing only while the residual still
    // drops clearly; the round-off floor is otherwise reached.
    if (solution.converged && !(next_residual < kPolishRatio * residual)) {
      break;
    }
    p = std::move(next);
    residual = next_residual;
    gain = solve_spd(r, b.transpose() * p);
    solution.iterations = it;
    if (residual <= options.tol) {
      solution.converged = true;
    }
  }
  if (!solution.converged) {
    throw Error(ErrorKind::kMaxIterations, "CARE residual " + std::to_string(residual) +
                                               " above tolerance after " +
                                               std::to_string(options.max_iter) + " iterations");
  }
  if (!linalg::is_hurwitz(a - b * gain)) {
    throw Error(ErrorKind::kNotStabilizable, "CARE solution is not stabilizing");
  }
  solution.P.push_back(std::move(p));
  solution.residual_norms.push_back(residual);
  return solution;
}

std::vector<double> coupled_residuals(const GameSpec& game, const std::vector<Matrix>& p) {
  const std::size_t count = game.num_players();
  if (p.size() != count) {
    throw Error(ErrorKind::kDimensionMismatch, "one Riccati matrix per player expected");
  }
  for (const auto& pi : p) {
    if (pi.rows() != game.n || pi.cols() != game.n) {
      throw Error(ErrorKind::kDimensionMismatch, "Riccati matrix has wrong shape");
    }
  }
  // gains[j] = R^{jj}^{-1} B^j^T P^j, so S_j P^j = B^j gains[j].
  std::vector<Matrix> gains(count);
  for (std::size_t j = 0; j < count; ++j) {
    gains[j] = solve_spd(game.own_penalty(j), game.players[j].B.transpose() * p[j]);
  }

  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Matrix& pi = p[i];
    Matrix res = game.players[i].Q + game.A.transpose() * pi + pi * game.A -
                 pi * game.players[i].B * gains[i];
    for (std::size_t j = 0; j < count; ++j) {
      if (j == i) {
        continue;
      }
      const Matrix bk = game.players[j].B * gains[j];
      res -= pi * bk + bk.transpose() * pi;
      res += gains[j].transpose() * game.cross_penalty(i, j) * gains[j];
    }
    out[i] = linalg::spectral_norm(res);
  }
  return out;
}

RiccatiSolution solve_coupled_riccati(const GameSpec& game, const CoupledOptions& options) {
  if (!(options.damping > 0.0 && options.damping <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "damping must lie in (0, 1]");
  }
  const std::size_t count = game.num_players();
  const Index n = game.n;
  if (count == 0) {
    throw Error(ErrorKind::kInvalidArgument, "game has no players");
  }

  // Start from the zero profile when A is Hurwitz; otherwise split a joint
  // stabilizing gain for (A, B^p) across the players.
  std::vector<Matrix> gains(count);
  {
    const auto [bp, widths] = aggregate_inputs(game);
    const Matrix joint = stabilizing_gain(game.A, bp);
    Index offset = 0;
    for (std::size_t i = 0; i < count; ++i) {
      gains[i] = joint.middleRows(offset, widths[i]);
      offset += widths[i];
    }
  }

  const CareOptions inner{options.tol, options.inner_max_iter};
  RiccatiSolution solution;
  std::vector<Matrix> p(count, Matrix::Zero(n, n));
  std::vector<Matrix> best(count);
  std::vector<Matrix> accepted;

  for (int it = 1; it <= options.max_iter; ++it) {
    for (std::size_t i = 0; i < count; ++i) {
      Matrix drift = game.A;
      Matrix cost = game.players[i].Q;
      for (std::size_t j = 0; j < count; ++j) {
        if (j == i) {
          continue;
        }
        drift -= game.players[j].B * gains[j];
        cost += gains[j].transpose() * game.cross_penalty(i, j) * gains[j];
      }
      const Matrix& own = game.own_penalty(i);
      RiccatiSolution response =
          solve_care(drift, game.players[i].B, linalg::symmetrize(cost), own, inner, gains[i]);
      p[i] = std::move(response.P.front());
      best[i] = solve_spd(own, game.players[i].B.transpose() * p[i]);
    }
    for (std::size_t i = 0; i < count; ++i) {
      gains[i] = (1.0 - options.damping) * gains[i] + options.damping * best[i];
      if (!p[i].allFinite() || p[i].cwiseAbs().maxCoeff() > options.divergence_limit) {
        throw Error(ErrorKind::kDiverged, "Riccati iterate of player " + std::to_string(i + 1) +
                                              " exceeds the divergence limit");
      }
    }

    std::vector<double> residuals = coupled_residuals(game, p);
    const double worst = *std::max_element(residuals.begin(), residuals.end());
    if (solution.converged && !(worst < kCoupledPolishRatio * solution.residual_history.back())) {
      p = std::move(accepted);
      break;
    }
    solution.residual_norms = std::move(residuals);
    solution.residual_history.push_back(worst);
    solution.iterations = it;
    if (worst <= options.tol) {
      solution.converged = true;
    }
    accepted = p;
  }
  if (!solution.converged) {
    throw Error(ErrorKind::kMaxIterations,
                "coupled Riccati iteration did not reach tolerance in " +
                    std::to_string(options.max_iter) + " outer iterations");
  }
  if (!closed_loop_nash(game, p).stable) {
    throw Error(ErrorKind::kNotStabilizable, "Nash closed loop is not Hurwitz");
  }
  solution.P = std::move(p);
  return solution;
}

RiccatiSolution solve_potential(const GameSpec& game, const PotentialSpec& pot,
                                const CareOptions& options) {
  return solve_care(game.A, pot.Bp, pot.Qp, pot.Rp, options);
}

ClosedLoop closed_loop_nash(const GameSpec& game, const std::vector<Matrix>& p) {
  if (p.size() != game.num_players()) {
    throw Error(ErrorKind::kDimensionMismatch, "one Riccati matrix per player expected");
  }
  ClosedLoop loop;
  loop.Ac = game.A;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Matrix& b = game.players[i].B;
    loop.gains.push_back(solve_spd(game.own_penalty(i), b.transpose() * p[i]));
    loop.Ac -= b * loop.gains.back();
  }
  loop.stable = linalg::is_hurwitz(loop.Ac);
  return loop;
}

ClosedLoop closed_loop_potential(const Matrix& a, const PotentialSpec& pot, const Matrix& pp) {
  if (pot.Bp.rows() != a.rows() || pp.rows() != a.rows() || pp.cols() != a.cols()) {
    throw Error(ErrorKind::kDimensionMismatch, "potential closed loop operands mismatch");
  }
  ClosedLoop loop;
  loop.gains.push_back(solve_spd(pot.Rp, pot.Bp.transpose() * pp));
  loop.Ac = a - pot.Bp * loop.gains.back();
  loop.stable = linalg::is_hurwitz(loop.Ac);
  return loop;
}

}  // namespace npdg
