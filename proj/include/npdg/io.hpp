#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "npdg/game_model.hpp"
#include "npdg/metrics.hpp"
#include "npdg/riccati.hpp"
#include "npdg/simulation.hpp"
#include "npdg/sweep.hpp"

namespace npdg::io {

using Json = nlohmann::json;

struct GameFile {
  GameSpec game;
  std::optional<PotentialSpec> potential;
};

/// Strict reader for the game document
///   {"n", "A", "players": [{"B", "Q", "R": {"1": ..., ...}}], "potential": {"Qp", "Rp"}}
/// plus the optional keys "label" and "potential.Bp". Player indices are
/// 1-based in the file. Unknown keys are rejected. Errors carry the field
/// path, or the line and column for malformed JSON.
GameFile parse_game(std::string_view text);
GameFile load_game(const std::string& path);

Json game_to_json(const GameSpec& game, const PotentialSpec* potential = nullptr);

Json matrix_to_json(const Matrix& m);
Json to_json(const ValidationReport& report);
Json to_json(const RiccatiSolution& solution);
Json to_json(const DistanceReport& report);
Json to_json(const DeltaKReport& report);
Json to_json(const BoundReport& report);
Json to_json(const PiecewiseDelta& piecewise);
Json to_json(const SweepReport& report);

/// Decimal with 17 significant digits.
std::string format_double(double value);

/// Header `t,error,bound,margin`.
std::string bound_report_csv(const BoundReport& report);
/// Header `k,t_start,t_end,delta_k` (k is 1-based).
std::string piecewise_csv(const PiecewiseDelta& piecewise);
/// Header `delta_in,delta_star,max_error,bound_at_max,holds`.
std::string sweep_csv(const SweepReport& report);

void write_text(const std::string& path, const std::string& text);

}  // namespace npdg::io
