#include "npdg/family.hpp"

#include <cmath>
#include <sstream>

#include "npdg/error.hpp"
#include "npdg/linalg.hpp"
#include "npdg/rng.hpp"

namespace npdg {

namespace {

Matrix uniform_matrix(Xoshiro256& rng, Index rows, Index cols, double lo, double hi) {
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      m(r, c) = rng.uniform(lo, hi);
    }
  }
  return m;
}

Matrix uniform_diagonal(Xoshiro256& rng, Index size, double lo, double hi) {
  Matrix m = Matrix::Zero(size, size);
  for (Index k = 0; k < size; ++k) {
    m(k, k) = rng.uniform(lo, hi);
  }
  return m;
}

// Shifting by the logarithmic norm keeps the block contractive, which also
// bounds its eigenvalue real parts by -margin.
Matrix stable_block(Xoshiro256& rng, Index size, double margin) {
  const Matrix m = uniform_matrix(rng, size, size, -1.0, 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sym(Eigen::MatrixXd(linalg::symmetrize(m)),
                                                     Eigen::EigenvaluesOnly);
  const double lognorm = sym.eigenvalues().maxCoeff();
  return m - (lognorm + margin) * Matrix::Identity(size, size);
}

}  // namespace

void validate_params(const FamilyParams& params) {
  if (params.n_per_block < 1) {
    throw Error(ErrorKind::kInvalidArgument, "n_per_block must be at least 1");
  }
  if (params.players < 1) {
    throw Error(ErrorKind::kInvalidArgument, "family needs at least one player");
  }
  if (params.inputs_per_player < 1) {
    throw Error(ErrorKind::kInvalidArgument, "inputs_per_player must be at least 1");
  }
  if (!(params.delta >= 0.0) || !std::isfinite(params.delta)) {
    throw Error(ErrorKind::kInvalidArgument, "coupling delta must be finite and non-negative");
  }
  if (!(params.stability_margin > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "stability margin must be positive");
  }
}

std::string family_label(const FamilyParams& params) {
  std::ostringstream out;
  out.precision(17);
  out << "family(n_per_block=" << params.n_per_block << ",players=" << params.players
      << ",inputs=" << params.inputs_per_player << ",delta=" << params.delta
      << ",seed=" << params.seed << ",margin=" << params.stability_margin << ")";
  return out.str();
}

Family generate_family(const FamilyParams& params) {
  validate_params(params);
  const std::size_t count = params.players;
  const Index nb = params.n_per_block;
  const Index m = params.inputs_per_player;
  const Index n = nb * static_cast<Index>(count);

  Family family;
  GameSpec& game = family.game;
  game.n = n;
  game.label = family_label(params);
  game.A = Matrix::Zero(n, n);

  PotentialSpec& pot = family.potential;
  pot.Qp = Matrix::Zero(n, n);
  pot.Rp = Matrix::Zero(m * static_cast<Index>(count), m * static_cast<Index>(count));

  for (std::size_t b = 0; b < count; ++b) {
    const std::uint64_t base = 4 * static_cast<std::uint64_t>(b);
    const Index off = nb * static_cast<Index>(b);
    auto rng_a = Xoshiro256::substream(params.seed, base);
    auto rng_b = Xoshiro256::substream(params.seed, base + 1);
    auto rng_q = Xoshiro256::substream(params.seed, base + 2);
    auto rng_r = Xoshiro256::substream(params.seed, base + 3);

    game.A.block(off, off, nb, nb) = stable_block(rng_a, nb, params.stability_margin);

    PlayerSpec player;
    player.B = Matrix::Zero(n, m);
    player.B.middleRows(off, nb) = uniform_matrix(rng_b, nb, m, -1.0, 1.0);
    player.Q = Matrix::Zero(n, n);
    player.Q.block(off, off, nb, nb) = uniform_diagonal(rng_q, nb, 0.5, 2.0);
    player.R[b] = uniform_diagonal(rng_r, m, 1.0, 2.0);

    pot.Qp += player.Q;
    pot.Rp.block(m * static_cast<Index>(b), m * static_cast<Index>(b), m, m) = player.R[b];
    game.players.push_back(std::move(player));
  }

  if (count > 1 && params.delta > 0.0) {
    auto rng_g = Xoshiro256::substream(params.seed, 4 * static_cast<std::uint64_t>(count));
    Matrix g = uniform_matrix(rng_g, n, n, -1.0, 1.0);
    for (std::size_t b = 0; b < count; ++b) {
      const Index off = nb * static_cast<Index>(b);
      g.block(off, off, nb, nb).setZero();
    }
    g /= linalg::spectral_norm(g);
    game.A += params.delta * g;
  }

  auto [bp, blocks] = aggregate_inputs(game);
  pot.Bp = std::move(bp);
  pot.blocks = std::move(blocks);
  return family;
}

}  // namespace npdg
