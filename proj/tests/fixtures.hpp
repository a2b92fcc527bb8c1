#pragma once

#include <cmath>
#include <vector>

#include "npdg/game_model.hpp"
#include "oracles.hpp"

namespace npdg::fixtures {

inline Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

/// Scalar N-player game x' = a x + sum b u^i with costs q x^2 + r (u^i)^2.
inline GameSpec scalar_game(double a, double b, double q, double r, std::size_t players) {
  GameSpec game;
  game.n = 1;
  game.A = scalar(a);
  for (std::size_t i = 0; i < players; ++i) {
    PlayerSpec p;
    p.B = scalar(b);
    p.Q = scalar(q);
    p.R[i] = scalar(r);
    game.players.push_back(p);
  }
  return game;
}

/// Identical-interest pair: a = 0, b = q = r = 1, potential with the shared
/// cost q = 1 and R^p = I.
inline std::pair<GameSpec, PotentialSpec> scalar_pair() {
  GameSpec game = scalar_game(0.0, 1.0, 1.0, 1.0, 2);
  PotentialSpec pot;
  pot.Bp = Matrix::Ones(1, 2);
  pot.Qp = scalar(1.0);
  pot.Rp = Matrix::Identity(2, 2);
  pot.blocks = {1, 1};
  return {game, pot};
}

/// Potential equal to the single player's own cost.
inline PotentialSpec self_potential(const GameSpec& game) {
  PotentialSpec pot;
  pot.Bp = game.players[0].B;
  pot.Qp = game.players[0].Q;
  pot.Rp = game.own_penalty(0);
  pot.blocks = {game.players[0].inputs()};
  return pot;
}

struct Block {
  Matrix A;
  Matrix B;
  Matrix Q;
  Matrix R;
};

struct DecoupledGame {
  GameSpec game;
  PotentialSpec potential;
  std::vector<Block> blocks;
  std::vector<Index> offsets;
};

/// Block-decoupled game built with the test RNG: player i owns block i of
/// the state, its input acts only there and its cost only weighs it.
inline DecoupledGame decoupled_game(std::uint64_t seed, const std::vector<Index>& sizes,
                                    Index inputs = 1) {
  oracle::TestRng rng(seed);
  DecoupledGame out;
  Index n = 0;
  for (Index s : sizes) {
    out.offsets.push_back(n);
    n += s;
  }
  out.game.n = n;
  out.game.A = Matrix::Zero(n, n);
  const Index p = inputs * static_cast<Index>(sizes.size());
  out.potential.Qp = Matrix::Zero(n, n);
  out.potential.Rp = Matrix::Zero(p, p);
  out.potential.Bp = Matrix::Zero(n, p);
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const Index s = sizes[i];
    const Index off = out.offsets[i];
    Block blk;
    blk.A = rng.hurwitz(s, 0.3);
    blk.B = rng.matrix(s, inputs);
    blk.Q = Matrix::Zero(s, s);
    for (Index k = 0; k < s; ++k) {
      blk.Q(k, k) = rng.uniform(0.5, 2.0);
    }
    blk.R = Matrix::Zero(inputs, inputs);
    for (Index k = 0; k < inputs; ++k) {
      blk.R(k, k) = rng.uniform(0.5, 2.0);
    }
    out.game.A.block(off, off, s, s) = blk.A;
    PlayerSpec player;
    player.B = Matrix::Zero(n, inputs);
    player.B.middleRows(off, s) = blk.B;
    player.Q = Matrix::Zero(n, n);
    player.Q.block(off, off, s, s) = blk.Q;
    player.R[i] = blk.R;
    out.game.players.push_back(player);
    out.potential.Qp.block(off, off, s, s) = blk.Q;
    out.potential.Rp.block(inputs * static_cast<Index>(i), inputs * static_cast<Index>(i), inputs,
                           inputs) = blk.R;
    out.potential.Bp.block(off, inputs * static_cast<Index>(i), s, inputs) = blk.B;
    out.potential.blocks.push_back(inputs);
    out.blocks.push_back(blk);
  }
  return out;
}

/// P embedded into the (off, off) diagonal block of an n x n zero matrix.
inline Matrix embed(const Matrix& block, Index off, Index n) {
  Matrix out = Matrix::Zero(n, n);
  out.block(off, off, block.rows(), block.cols()) = block;
  return out;
}

}  // namespace npdg::fixtures
