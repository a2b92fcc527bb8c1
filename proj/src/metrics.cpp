#include "npdg/metrics.hpp"

#include <algorithm>

#include "npdg/error.hpp"
#include "npdg/linalg.hpp"
#include "npdg/riccati.hpp"
#include "npdg/simulation.hpp"

namespace npdg {

namespace {

void check_layout(const GameSpec& game, const std::vector<Matrix>& p, const PotentialSpec& pot,
                  const Matrix& pp) {
  if (pot.blocks != game.input_widths()) {
    throw Error(ErrorKind::kBlockMismatch, "potential block layout does not match the players");
  }
  if (p.size() != game.num_players()) {
    throw Error(ErrorKind::kBlockMismatch, "one Riccati matrix per player expected");
  }
  if (pp.rows() != game.n || pp.cols() != game.n || pot.Bp.rows() != game.n ||
      pot.Bp.cols() != pot.total_inputs()) {
    throw Error(ErrorKind::kDimensionMismatch, "potential operands have wrong shape");
  }
}

}  // namespace

DistanceReport delta_star(const GameSpec& game, const std::vector<Matrix>& p,
                          const PotentialSpec& pot, const Matrix& pp, double exact_tol) {
  check_layout(game, p, pot, pp);
  DistanceReport report;
  report.tolerance_used = exact_tol;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Matrix bt = game.players[i].B.transpose();
    report.per_player.push_back(linalg::spectral_norm(bt * pp - bt * p[i]));
  }
  report.delta_star = *std::max_element(report.per_player.begin(), report.per_player.end());
  report.is_exact = report.delta_star <= exact_tol;
  return report;
}

bool is_exact_potential(const GameSpec& game, const PotentialSpec& pot, double tol) {
  const RiccatiSolution nash = solve_coupled_riccati(game);
  const RiccatiSolution potential = solve_potential(game, pot);
  return delta_star(game, nash.P, pot, potential.P.front(), tol).is_exact;
}

std::vector<std::vector<double>> dd_trajectory(const GameSpec& game, const std::vector<Matrix>& p,
                                               const Matrix& pp, const Trajectory& traj_pot,
                                               const Trajectory& traj_nash) {
  if (traj_pot.grid != traj_nash.grid) {
    throw Error(ErrorKind::kGridMismatch, "trajectories are sampled on different grids");
  }
  if (p.size() != game.num_players()) {
    throw Error(ErrorKind::kDimensionMismatch, "one Riccati matrix per player expected");
  }
  std::vector<std::vector<double>> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Matrix bt = game.players[i].B.transpose();
    const Matrix pot_map = bt * pp;
    const Matrix own_map = bt * p[i];
    out[i].reserve(traj_pot.grid.size());
    for (std::size_t k = 0; k < traj_pot.grid.size(); ++k) {
      out[i].push_back((pot_map * traj_pot.states[k] - own_map * traj_nash.states[k]).norm());
    }
  }
  return out;
}

DeltaKReport closed_loop_matrix_error(const Matrix& ac_nash, const Matrix& ac_pot) {
  if (ac_nash.rows() != ac_pot.rows() || ac_nash.cols() != ac_pot.cols()) {
    throw Error(ErrorKind::kDimensionMismatch, "closed loops have different shapes");
  }
  DeltaKReport report;
  report.deltaK = ac_nash - ac_pot;
  report.norm2 = linalg::spectral_norm(report.deltaK);
  return report;
}

DeltaKReport deltaK_bound_chain(const GameSpec& game, const PotentialSpec& pot,
                                const std::vector<Matrix>& p, const Matrix& pp) {
  check_layout(game, p, pot, pp);
  const double rp_norm = linalg::spectral_norm(pot.Rp);
  if (!(rp_norm > 1.0)) {
    throw Error(ErrorKind::kNotNormalized, "||R^p||_2 must exceed 1; normalize the potential");
  }

  const ClosedLoop nash = closed_loop_nash(game, p);
  const ClosedLoop potential = closed_loop_potential(game.A, pot, pp);
  DeltaKReport report = closed_loop_matrix_error(nash.Ac, potential.Ac);

  const std::size_t count = game.num_players();
  const Index total = pot.total_inputs();
  // Stacked Nash gains R^{ii}^{-1} B^i^T P^i.
  Matrix stacked(total, game.n);
  for (std::size_t i = 0; i < count; ++i) {
    stacked.middleRows(pot.block_offset(i), pot.blocks[i]) = nash.gains[i];
  }
  const Matrix f = pot.Bp.transpose() * pp - pot.Rp * stacked;
  report.f_spectral = linalg::spectral_norm(f);
  report.f_frobenius = linalg::frobenius_norm(f);

  double worst_block = 0.0;
  report.scaling_condition = true;
  for (std::size_t i = 0; i < count; ++i) {
    const Index offset = pot.block_offset(i);
    const Index width = pot.blocks[i];
    const double block = linalg::spectral_norm(f.middleRows(offset, width));
    report.f_block_norms.push_back(block);
    worst_block = std::max(worst_block, block);

    const Matrix own = game.players[i].B.transpose() * p[i];
    const double lhs = linalg::spectral_norm(pot.Rp.middleCols(offset, width) * nash.gains[i]);
    const bool ok = lhs >= linalg::spectral_norm(own) * (1.0 - 1e-12);
    report.scaling_condition_per_player.push_back(ok);
    report.scaling_condition = report.scaling_condition && ok;
  }
  report.f_block_surrogate = static_cast<double>(count) * worst_block;

  report.rp_norm = rp_norm;
  report.rp_inverse_norm =
      linalg::spectral_norm(Matrix(Eigen::MatrixXd(pot.Rp).inverse()));
  report.bp_norm = linalg::spectral_norm(pot.Bp);
  report.delta_star = delta_star(game, p, pot, pp).delta_star;
  report.chain_value = report.bp_norm * static_cast<double>(count) * report.delta_star;
  return report;
}

}  // namespace npdg
