#pragma once

#include <cstdint>
#include <string>

#include "npdg/game_model.hpp"

namespace npdg {

/// Knobs of the near-potential game generator.
struct FamilyParams {
  Index n_per_block = 2;
  std::size_t players = 2;
  /// Coupling strength; delta = 0 gives an exact potential game.
  double delta = 0.0;
  std::uint64_t seed = 1;
  /// Open-loop blocks have eigenvalue real parts <= -stability_margin.
  double stability_margin = 0.5;
  Index inputs_per_player = 1;
};

struct Family {
  GameSpec game;
  PotentialSpec potential;
};

/// Throws InvalidArgument on out-of-range parameters.
void validate_params(const FamilyParams& params);

/// N block-decoupled single-player subsystems plus coupling delta * G in the
/// off-diagonal blocks of A. Player i owns state block i and penalizes only
/// that block; R^{ii} has diagonal entries in [1, 2) and cross penalties are
/// zero. The potential is the sum cost with B^p = [B^1 ... B^N].
///
/// Substreams per seed: 4b (A block b), 4b+1 (B^b), 4b+2 (Q^b), 4b+3 (R^{bb}),
/// 4N (coupling G).
Family generate_family(const FamilyParams& params);

std::string family_label(const FamilyParams& params);

}  // namespace npdg
