#include "npdg/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "npdg/error.hpp"
#include "npdg/linalg.hpp"
#include "npdg/metrics.hpp"

namespace npdg {

namespace {

void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) {
    throw Error(ErrorKind::kGridInvalid, "time grid is empty");
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!std::isfinite(grid[k])) {
      throw Error(ErrorKind::kGridInvalid, "time grid has non-finite entries");
    }
    if (k > 0 && !(grid[k] > grid[k - 1])) {
      throw Error(ErrorKind::kGridInvalid, "time grid must be strictly increasing");
    }
  }
}

void check_system(const Matrix& ac, const Vector& x0) {
  if (ac.rows() != ac.cols() || ac.rows() != x0.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "closed loop and initial state disagree in size");
  }
}

}  // namespace

double BoundReport::max_margin() const {
  return margin.empty() ? 0.0 : *std::max_element(margin.begin(), margin.end());
}

std::size_t BoundReport::argmax_error() const {
  return static_cast<std::size_t>(std::max_element(error.begin(), error.end()) - error.begin());
}

Matrix matrix_exponential(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::kDimensionMismatch, "matrix exponential needs a square matrix");
  }
  if (!m.allFinite()) {
    throw Error(ErrorKind::kNonFinite, "matrix exponential of a non-finite matrix");
  }
  const Index n = m.rows();
  if (n == 0) {
    return m;
  }
  constexpr double kTheta13 = 5.371920351148152;
  constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                          1187353796428800.0,  129060195264000.0,   10559470521600.0,
                          670442572800.0,      33522128640.0,       1323241920.0,
                          40840800.0,          960960.0,            16380.0,
                          182.0,               1.0};

  const double norm = linalg::spectral_norm(m);
  int squarings = 0;
  if (norm > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
  }
  const Matrix a = m / std::ldexp(1.0, squarings);
  const Matrix id = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;

  const Matrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                         b[3] * a2 + b[1] * id;
  const Matrix u = a * u_inner;
  const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
                   b[2] * a2 + b[0] * id;

  Matrix r = Eigen::MatrixXd(v - u).partialPivLu().solve(Eigen::MatrixXd(v + u));
  for (int s = 0; s < squarings; ++s) {
    r = r * r;
  }
  return r;
}

std::vector<double> uniform_grid(double t0, double t1, std::size_t points) {
  if (points < 2 || !(t1 > t0)) {
    throw Error(ErrorKind::kGridInvalid, "uniform grid needs t1 > t0 and at least two points");
  }
  std::vector<double> grid(points);
  const double step = (t1 - t0) / static_cast<double>(points - 1);
  for (std::size_t k = 0; k < points; ++k) {
    grid[k] = t0 + step * static_cast<double>(k);
  }
  grid.back() = t1;
  return grid;
}

Trajectory simulate_closed_loop(const Matrix& ac, const Vector& x0,
                                const std::vector<double>& grid) {
  check_grid(grid);
  check_system(ac, x0);
  Trajectory traj{grid, {}, x0};
  traj.states.reserve(grid.size());
  for (double t : grid) {
    traj.states.push_back(t == 0.0 ? x0 : Vector(matrix_exponential(ac * t) * x0));
  }
  return traj;
}

Trajectory rk4_reference(const Matrix& ac, const Vector& x0, const std::vector<double>& grid,
                         int substeps) {
  check_grid(grid);
  check_system(ac, x0);
  if (substeps < 1) {
    throw Error(ErrorKind::kInvalidArgument, "substeps must be at least 1");
  }
  Trajectory traj{grid, {x0}, x0};
  Vector x = x0;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double h = (grid[k] - grid[k - 1]) / substeps;
    for (int s = 0; s < substeps; ++s) {
      const Vector k1 = ac * x;
      const Vector k2 = ac * (x + 0.5 * h * k1);
      const Vector k3 = ac * (x + 0.5 * h * k2);
      const Vector k4 = ac * (x + h * k3);
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    traj.states.push_back(x);
  }
  return traj;
}

std::vector<double> trajectory_error(const Trajectory& traj_pot, const Trajectory& traj_nash) {
  if (traj_pot.grid != traj_nash.grid || traj_pot.states.size() != traj_nash.states.size()) {
    throw Error(ErrorKind::kGridMismatch, "trajectories are sampled on different grids");
  }
  std::vector<double> err;
  err.reserve(traj_pot.states.size());
  for (std::size_t k = 0; k < traj_pot.states.size(); ++k) {
    if (traj_pot.states[k].size() != traj_nash.states[k].size()) {
      throw Error(ErrorKind::kDimensionMismatch, "trajectory states differ in dimension");
    }
    err.push_back((traj_pot.states[k] - traj_nash.states[k]).norm());
  }
  return err;
}

double c_npdg_bound(double t, const Vector& x0, const Matrix& bp, std::size_t players,
                    const Matrix& ac_nash, const Matrix& ac_pot, double delta_star) {
  if (t < 0.0) {
    throw Error(ErrorKind::kInvalidArgument, "time must be non-negative");
  }
  if (delta_star < 0.0) {
    throw Error(ErrorKind::kInvalidArgument, "delta* must be non-negative");
  }
  if (t == 0.0 || delta_star == 0.0) {
    return 0.0;
  }
  const double rate = std::max(linalg::spectral_norm(ac_pot), linalg::spectral_norm(ac_nash));
  return x0.norm() * linalg::spectral_norm(bp) * static_cast<double>(players) * t *
         std::exp(t * rate) * delta_star;
}

BoundReport verify_bound(const GameSpec& game, const PotentialSpec& pot, const Vector& x0,
                         const std::vector<double>& grid, const VerifyOptions& options) {
  check_grid(grid);
  if (x0.size() != game.n) {
    throw Error(ErrorKind::kDimensionMismatch, "initial state has the wrong dimension");
  }
  if (grid.front() < 0.0) {
    throw Error(ErrorKind::kGridInvalid, "bound is stated for t >= 0");
  }
  const RiccatiSolution nash = solve_coupled_riccati(game, options.coupled);
  const RiccatiSolution potential = solve_potential(game, pot, options.care);
  const Matrix& pp = potential.P.front();
  const DistanceReport distance = delta_star(game, nash.P, pot, pp);
  const ClosedLoop nash_loop = closed_loop_nash(game, nash.P);
  const ClosedLoop pot_loop = closed_loop_potential(game.A, pot, pp);

  const Trajectory traj_nash = simulate_closed_loop(nash_loop.Ac, x0, grid);
  const Trajectory traj_pot = simulate_closed_loop(pot_loop.Ac, x0, grid);

  BoundReport report;
  report.grid = grid;
  report.error = trajectory_error(traj_pot, traj_nash);
  report.delta_star_used = distance.delta_star;
  report.per_player_distance = distance.per_player;
  report.x0 = x0;
  report.players = game.num_players();
  report.bp_norm = linalg::spectral_norm(pot.Bp);
  report.ac_nash_norm = linalg::spectral_norm(nash_loop.Ac);
  report.ac_pot_norm = linalg::spectral_norm(pot_loop.Ac);
  report.deltaK_norm = closed_loop_matrix_error(nash_loop.Ac, pot_loop.Ac).norm2;

  report.holds = true;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double bound = c_npdg_bound(grid[k], x0, pot.Bp, report.players, nash_loop.Ac,
                                      pot_loop.Ac, distance.delta_star);
    const double err = report.error[k];
    report.bound.push_back(bound);
    // Errors at rounding level count as zero (covers 0/0 at t = 0).
    report.margin.push_back(err <= kBoundSlack ? 0.0 : err / (bound + kBoundSlack));
    if (!(err <= bound + kBoundSlack)) {
      report.holds = false;
    }
  }
  return report;
}

std::vector<std::pair<double, double>> uniform_partition(double t0, double t1, std::size_t pieces) {
  if (pieces < 1 || !(t1 > t0)) {
    throw Error(ErrorKind::kPartitionInvalid, "partition needs t1 > t0 and at least one piece");
  }
  std::vector<std::pair<double, double>> out;
  const double width = (t1 - t0) / static_cast<double>(pieces);
  for (std::size_t k = 0; k < pieces; ++k) {
    const double start = k == 0 ? t0 : out.back().second;
    const double end = k + 1 == pieces ? t1 : t0 + width * static_cast<double>(k + 1);
    out.emplace_back(start, end);
  }
  return out;
}

PiecewiseDelta piecewise_delta(const Trajectory& traj_pot, const Trajectory& traj_nash,
                               double delta_star,
                               const std::vector<std::pair<double, double>>& partition) {
  if (traj_pot.grid != traj_nash.grid) {
    throw Error(ErrorKind::kGridMismatch, "trajectories are sampled on different grids");
  }
  if (delta_star < 0.0) {
    throw Error(ErrorKind::kInvalidArgument, "delta* must be non-negative");
  }
  const auto& grid = traj_pot.grid;
  if (partition.empty() || grid.empty()) {
    throw Error(ErrorKind::kPartitionInvalid, "empty partition or trajectory");
  }
  constexpr double kTimeTol = 1e-12;
  const double span = std::max(1.0, std::abs(grid.back()));
  if (std::abs(partition.front().first - grid.front()) > kTimeTol * span ||
      std::abs(partition.back().second - grid.back()) > kTimeTol * span) {
    throw Error(ErrorKind::kPartitionInvalid, "partition does not cover the trajectory grid");
  }
  for (std::size_t k = 0; k < partition.size(); ++k) {
    if (!(partition[k].second > partition[k].first)) {
      throw Error(ErrorKind::kPartitionInvalid, "partition interval is empty or reversed");
    }
    if (k > 0 && std::abs(partition[k].first - partition[k - 1].second) > kTimeTol * span) {
      throw Error(ErrorKind::kPartitionInvalid, "partition intervals have a gap or overlap");
    }
  }

  PiecewiseDelta out;
  out.partition = partition;
  for (const auto& [start, end] : partition) {
    double peak = -1.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (grid[k] >= start - kTimeTol * span && grid[k] <= end + kTimeTol * span) {
        peak = std::max({peak, traj_pot.states[k].norm(), traj_nash.states[k].norm()});
      }
    }
    if (peak < 0.0) {
      throw Error(ErrorKind::kPartitionInvalid, "partition interval contains no grid point");
    }
    out.deltas.push_back(delta_star * peak);
  }
  out.monotone_decreasing = true;
  for (std::size_t k = 1; k < out.deltas.size(); ++k) {
    if (out.deltas[k] > out.deltas[k - 1] + 1e-12) {
      out.monotone_decreasing = false;
    }
  }
  return out;
}

}  // namespace npdg
