#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "npdg/types.hpp"

namespace npdg {

/// One player of an LQ game: input matrix, state penalty and the input
/// penalties R^{ij} keyed by the (0-based) index j of the penalized player.
/// Cross penalties that are absent are zero.
struct PlayerSpec {
  Matrix B;
  Matrix Q;
  std::map<std::size_t, Matrix> R;

  Index inputs() const { return B.cols(); }
};

/// N-player infinite-horizon LQ differential game with shared dynamics
/// x' = A x + sum_i B^i u^i.
struct GameSpec {
  Index n = 0;
  Matrix A;
  std::vector<PlayerSpec> players;
  std::string label;

  std::size_t num_players() const { return players.size(); }

  /// R^{ii} of player i.
  const Matrix& own_penalty(std::size_t i) const;

  /// R^{ij}, or a p_j x p_j zero matrix when player i does not penalize u^j.
  Matrix cross_penalty(std::size_t i, std::size_t j) const;

  std::vector<Index> input_widths() const;
};

/// Candidate potential game: one optimal control problem over the
/// aggregated input u^p = [u^1; ...; u^N].
struct PotentialSpec {
  Matrix Bp;
  Matrix Qp;
  Matrix Rp;
  std::vector<Index> blocks;

  Index total_inputs() const;
  /// First column of player i's block in u^p.
  Index block_offset(std::size_t i) const;
};

struct Violation {
  std::string path;
  std::string rule;
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;

  void add(std::string path, std::string rule, std::string message);
};

struct ValidationOptions {
  /// Skip the diagonal-structure check on Q and R.
  bool allow_nondiagonal = false;
};

ValidationReport validate_game(const GameSpec& spec, const ValidationOptions& options = {});

/// Checks the potential against the game it is paired with: block layout,
/// shapes, Qp >= 0 and Rp > 0.
ValidationReport validate_potential(const GameSpec& game, const PotentialSpec& pot);

/// B^p = [B^1 ... B^N] and the per-player widths.
std::pair<Matrix, std::vector<Index>> aggregate_inputs(const GameSpec& game);

/// J~^i = kappa J^i: scales Q^i and every R^{ij} of player i.
GameSpec rescale_player_cost(const GameSpec& game, std::size_t i, double kappa);

PotentialSpec rescale_potential_cost(const PotentialSpec& pot, double kappa);

inline constexpr double kPotentialNormMargin = 1e-6;

/// Rescales the potential so that ||R^p||_2 >= 1 + 1e-6. Returns the scaled
/// potential together with the factor used (1 when nothing had to change).
std::pair<PotentialSpec, double> normalize_potential_scaling(const PotentialSpec& pot);

}  // namespace npdg
