#include "npdg/game_model.hpp"

#include <numeric>

#include "npdg/error.hpp"
#include "npdg/linalg.hpp"

namespace npdg {

namespace {

std::string one_based(std::size_t i) { return std::to_string(i + 1); }

std::string penalty_name(std::size_t i, std::size_t j) {
  if (i < 9 && j < 9) {
    return "R^{" + one_based(i) + one_based(j) + "}";
  }
  return "R^{" + one_based(i) + "," + one_based(j) + "}";
}

bool is_diagonal(const Matrix& m) {
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (r != c && m(r, c) != 0.0) {
        return false;
      }
    }
  }
  return true;
}

double min_symmetric_eigenvalue(const Matrix& m) {
  if (m.size() == 0) {
    return 0.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(Eigen::MatrixXd(linalg::symmetrize(m)),
                                                        Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

// Positive (semi-)definiteness. Diagonal matrices are judged on their
// diagonal exactly; general ones on their symmetric eigenvalues.
bool is_psd(const Matrix& m) {
  if (is_diagonal(m)) {
    return (m.diagonal().array() >= 0.0).all();
  }
  if (!linalg::is_symmetric(m)) {
    return false;
  }
  return min_symmetric_eigenvalue(m) >= -1e-12 * (1.0 + m.cwiseAbs().maxCoeff());
}

bool is_pd(const Matrix& m) {
  if (m.size() == 0) {
    return true;
  }
  if (is_diagonal(m)) {
    return (m.diagonal().array() > 0.0).all();
  }
  if (!linalg::is_symmetric(m)) {
    return false;
  }
  return Eigen::LLT<Eigen::MatrixXd>(Eigen::MatrixXd(linalg::symmetrize(m))).info() ==
         Eigen::Success;
}

void check_shape(ValidationReport& report, const std::string& path, const std::string& name,
                 const Matrix& m, Index rows, Index cols) {
  if (m.rows() != rows || m.cols() != cols) {
    report.add(path, "shape",
               name + " has shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                   ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
  }
}

}  // namespace

const Matrix& GameSpec::own_penalty(std::size_t i) const {
  const auto& r = players.at(i).R;
  const auto it = r.find(i);
  if (it == r.end()) {
    throw Error(ErrorKind::kInvalidArgument, "player " + one_based(i) + " has no R^{ii}");
  }
  return it->second;
}

Matrix GameSpec::cross_penalty(std::size_t i, std::size_t j) const {
  const auto& r = players.at(i).R;
  const auto it = r.find(j);
  if (it != r.end()) {
    return it->second;
  }
  const Index pj = players.at(j).inputs();
  return Matrix::Zero(pj, pj);
}

std::vector<Index> GameSpec::input_widths() const {
  std::vector<Index> widths;
  widths.reserve(players.size());
  for (const auto& p : players) {
    widths.push_back(p.inputs());
  }
  return widths;
}

Index PotentialSpec::total_inputs() const {
  return std::accumulate(blocks.begin(), blocks.end(), Index{0});
}

Index PotentialSpec::block_offset(std::size_t i) const {
  return std::accumulate(blocks.begin(), blocks.begin() + static_cast<std::ptrdiff_t>(i), Index{0});
}

void ValidationReport::add(std::string path, std::string rule, std::string message) {
  ok = false;
  violations.push_back({std::move(path), std::move(rule), std::move(message)});
}

ValidationReport validate_game(const GameSpec& spec, const ValidationOptions& options) {
  ValidationReport report;
  const Index n = spec.n;
  if (n < 1) {
    report.add("n", "positive", "state dimension must be at least 1");
  }
  if (spec.players.empty()) {
    report.add("players", "nonempty", "game needs at least one player");
  }
  check_shape(report, "A", "A", spec.A, n, n);
  if (!linalg::all_finite(spec.A)) {
    report.add("A", "finite", "A has non-finite entries");
  }

  const std::size_t count = spec.players.size();
  for (std::size_t i = 0; i < count; ++i) {
    const PlayerSpec& player = spec.players[i];
    const std::string base = "players[" + one_based(i) + "]";
    const std::string qname = "Q^{" + one_based(i) + "}";

    if (player.B.rows() != n) {
      report.add(base + ".B", "shape",
                 "B^{" + one_based(i) + "} has " + std::to_string(player.B.rows()) +
                     " rows, expected " + std::to_string(n));
    }
    if (!linalg::all_finite(player.B)) {
      report.add(base + ".B", "finite", "B^{" + one_based(i) + "} has non-finite entries");
    }

    check_shape(report, base + ".Q", qname, player.Q, n, n);
    if (player.Q.rows() == player.Q.cols()) {
      if (!options.allow_nondiagonal && !is_diagonal(player.Q)) {
        report.add(base + ".Q", "diagonal", qname + " not diagonal");
      }
      if (!linalg::all_finite(player.Q) || !is_psd(player.Q)) {
        report.add(base + ".Q", "psd", qname + " not positive semi-definite");
      }
    }

    if (player.R.find(i) == player.R.end()) {
      report.add(base + ".R", "present", penalty_name(i, i) + " missing");
    }
    for (const auto& [j, r] : player.R) {
      const std::string path = base + ".R." + one_based(j);
      const std::string rname = penalty_name(i, j);
      if (j >= count) {
        report.add(path, "player", rname + " refers to an unknown player");
        continue;
      }
      const Index pj = spec.players[j].inputs();
      check_shape(report, path, rname, r, pj, pj);
      if (r.rows() != r.cols()) {
        continue;
      }
      if (!options.allow_nondiagonal && !is_diagonal(r)) {
        report.add(path, "diagonal", rname + " not diagonal");
      }
      if (j == i) {
        if (!linalg::all_finite(r) || !is_pd(r)) {
          report.add(path, "pd", rname + " not positive definite");
        }
      } else if (!linalg::all_finite(r) || !is_psd(r)) {
        report.add(path, "psd", rname + " not positive semi-definite");
      }
    }
  }
  return report;
}

ValidationReport validate_potential(const GameSpec& game, const PotentialSpec& pot) {
  ValidationReport report;
  const Index n = game.n;
  const auto widths = game.input_widths();
  if (pot.blocks != widths) {
    report.add("potential.blocks", "layout", "block widths do not match the players' inputs");
  }
  const Index p = std::accumulate(widths.begin(), widths.end(), Index{0});
  check_shape(report, "potential.Bp", "B^p", pot.Bp, n, p);
  check_shape(report, "potential.Qp", "Q^p", pot.Qp, n, n);
  check_shape(report, "potential.Rp", "R^p", pot.Rp, p, p);
  if (pot.Qp.rows() == pot.Qp.cols() && (!linalg::all_finite(pot.Qp) || !is_psd(pot.Qp))) {
    report.add("potential.Qp", "psd", "Q^p not positive semi-definite");
  }
  if (pot.Rp.rows() == pot.Rp.cols() && (!linalg::all_finite(pot.Rp) || !is_pd(pot.Rp))) {
    report.add("potential.Rp", "pd", "R^p not positive definite");
  }
  return report;
}

std::pair<Matrix, std::vector<Index>> aggregate_inputs(const GameSpec& game) {
  std::vector<Index> widths = game.input_widths();
  const Index p = std::accumulate(widths.begin(), widths.end(), Index{0});
  Matrix bp(game.n, p);
  Index offset = 0;
  for (std::size_t i = 0; i < game.players.size(); ++i) {
    const Matrix& b = game.players[i].B;
    if (b.rows() != game.n) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "B^{" + one_based(i) + "} has " + std::to_string(b.rows()) + " rows, expected " +
                      std::to_string(game.n));
    }
    bp.middleCols(offset, b.cols()) = b;
    offset += b.cols();
  }
  return {std::move(bp), std::move(widths)};
}

GameSpec rescale_player_cost(const GameSpec& game, std::size_t i, double kappa) {
  if (!(kappa > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "scaling factor must be positive");
  }
  if (i >= game.players.size()) {
    throw Error(ErrorKind::kInvalidArgument, "player index out of range");
  }
  GameSpec out = game;
  PlayerSpec& player = out.players[i];
  player.Q *= kappa;
  for (auto& [j, r] : player.R) {
    r *= kappa;
  }
  return out;
}

PotentialSpec rescale_potential_cost(const PotentialSpec& pot, double kappa) {
  if (!(kappa > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "scaling factor must be positive");
  }
  PotentialSpec out = pot;
  out.Qp *= kappa;
  out.Rp *= kappa;
  return out;
}

std::pair<PotentialSpec, double> normalize_potential_scaling(const PotentialSpec& pot) {
  const double target = 1.0 + kPotentialNormMargin;
  const double norm = linalg::spectral_norm(pot.Rp);
  if (norm >= target) {
    return {pot, 1.0};
  }
  const double kappa = target / norm;
  return {rescale_potential_cost(pot, kappa), kappa};
}

}  // namespace npdg
