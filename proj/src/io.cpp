#include "npdg/io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "npdg/error.hpp"

namespace npdg::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw Error(ErrorKind::kParse, path + ": " + message);
}

void reject_unknown_keys(const Json& object, const std::string& path,
                         const std::set<std::string>& allowed) {
  for (const auto& [key, value] : object.items()) {
    if (allowed.count(key) == 0) {
      fail(path.empty() ? key : path + "." + key, "unknown key");
    }
  }
}

const Json& require(const Json& object, const std::string& path, const std::string& key) {
  const auto it = object.find(key);
  if (it == object.end()) {
    fail(path.empty() ? key : path + "." + key, "missing required key");
  }
  return *it;
}

Matrix parse_matrix(const Json& value, const std::string& path) {
  if (!value.is_array() || value.empty()) {
    fail(path, "expected a non-empty array of rows");
  }
  const std::size_t rows = value.size();
  std::size_t cols = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    const Json& row = value[r];
    const std::string row_path = path + "[" + std::to_string(r) + "]";
    if (!row.is_array() || row.empty()) {
      fail(row_path, "expected a non-empty array of numbers");
    }
    if (r == 0) {
      cols = row.size();
    } else if (row.size() != cols) {
      fail(row_path, "row has " + std::to_string(row.size()) + " entries, expected " +
                         std::to_string(cols));
    }
  }
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const Json& entry = value[r][c];
      if (!entry.is_number()) {
        fail(path + "[" + std::to_string(r) + "][" + std::to_string(c) + "]", "expected a number");
      }
      m(static_cast<Index>(r), static_cast<Index>(c)) = entry.get<double>();
    }
  }
  return m;
}

std::size_t parse_player_key(const std::string& key, const std::string& path) {
  std::size_t used = 0;
  unsigned long index = 0;
  try {
    index = std::stoul(key, &used);
  } catch (const std::exception&) {
    fail(path, "player key '" + key + "' is not a 1-based index");
  }
  if (used != key.size() || index < 1) {
    fail(path, "player key '" + key + "' is not a 1-based index");
  }
  return index - 1;
}

}  // namespace

GameFile parse_game(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::kParse, std::string("malformed JSON (") + e.what() + ")");
  }
  if (!doc.is_object()) {
    fail("<root>", "expected a JSON object");
  }
  reject_unknown_keys(doc, "", {"n", "A", "players", "potential", "label"});

  GameFile file;
  GameSpec& game = file.game;
  const Json& n = require(doc, "", "n");
  if (!n.is_number_integer() || n.get<long long>() < 1) {
    fail("n", "expected a positive integer");
  }
  game.n = static_cast<Index>(n.get<long long>());
  game.A = parse_matrix(require(doc, "", "A"), "A");
  if (const auto it = doc.find("label"); it != doc.end()) {
    if (!it->is_string()) {
      fail("label", "expected a string");
    }
    game.label = it->get<std::string>();
  }

  const Json& players = require(doc, "", "players");
  if (!players.is_array() || players.empty()) {
    fail("players", "expected a non-empty array");
  }
  for (std::size_t i = 0; i < players.size(); ++i) {
    const std::string path = "players[" + std::to_string(i + 1) + "]";
    const Json& entry = players[i];
    if (!entry.is_object()) {
      fail(path, "expected an object");
    }
    reject_unknown_keys(entry, path, {"B", "Q", "R"});
    PlayerSpec player;
    player.B = parse_matrix(require(entry, path, "B"), path + ".B");
    player.Q = parse_matrix(require(entry, path, "Q"), path + ".Q");
    const Json& r = require(entry, path, "R");
    if (!r.is_object() || r.empty()) {
      fail(path + ".R", "expected an object keyed by 1-based player index");
    }
    for (const auto& [key, value] : r.items()) {
      const std::string rpath = path + ".R." + key;
      const std::size_t j = parse_player_key(key, rpath);
      if (j >= players.size()) {
        fail(rpath, "refers to player " + key + " of " + std::to_string(players.size()));
      }
      player.R[j] = parse_matrix(value, rpath);
    }
    game.players.push_back(std::move(player));
  }

  if (const auto it = doc.find("potential"); it != doc.end()) {
    const Json& pot_json = *it;
    if (!pot_json.is_object()) {
      fail("potential", "expected an object");
    }
    reject_unknown_keys(pot_json, "potential", {"Qp", "Rp", "Bp"});
    PotentialSpec pot;
    pot.Qp = parse_matrix(require(pot_json, "potential", "Qp"), "potential.Qp");
    pot.Rp = parse_matrix(require(pot_json, "potential", "Rp"), "potential.Rp");
    for (std::size_t i = 0; i < game.players.size(); ++i) {
      if (game.players[i].B.rows() != game.n) {
        fail("players[" + std::to_string(i + 1) + "].B",
             "has " + std::to_string(game.players[i].B.rows()) + " rows, expected n = " +
                 std::to_string(game.n));
      }
    }
    auto [bp, blocks] = aggregate_inputs(game);
    pot.blocks = std::move(blocks);
    if (const auto bp_it = pot_json.find("Bp"); bp_it != pot_json.end()) {
      pot.Bp = parse_matrix(*bp_it, "potential.Bp");
    } else {
      pot.Bp = std::move(bp);
    }
    file.potential = std::move(pot);
  }
  return file;
}

GameFile load_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kParse, "cannot open '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_game(buffer.str());
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) {
      row.push_back(m(r, c));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Json game_to_json(const GameSpec& game, const PotentialSpec* potential) {
  Json doc;
  doc["n"] = game.n;
  if (!game.label.empty()) {
    doc["label"] = game.label;
  }
  doc["A"] = matrix_to_json(game.A);
  Json players = Json::array();
  for (const PlayerSpec& player : game.players) {
    Json entry;
    entry["B"] = matrix_to_json(player.B);
    entry["Q"] = matrix_to_json(player.Q);
    Json r = Json::object();
    for (const auto& [j, m] : player.R) {
      r[std::to_string(j + 1)] = matrix_to_json(m);
    }
    entry["R"] = std::move(r);
    players.push_back(std::move(entry));
  }
  doc["players"] = std::move(players);
  if (potential != nullptr) {
    doc["potential"] = {{"Bp", matrix_to_json(potential->Bp)},
                        {"Qp", matrix_to_json(potential->Qp)},
                        {"Rp", matrix_to_json(potential->Rp)}};
  }
  return doc;
}

Json to_json(const ValidationReport& report) {
  Json violations = Json::array();
  for (const Violation& v : report.violations) {
    violations.push_back({{"path", v.path}, {"rule", v.rule}, {"message", v.message}});
  }
  return {{"ok", report.ok}, {"violations", std::move(violations)}};
}

Json to_json(const RiccatiSolution& solution) {
  Json p = Json::array();
  for (const Matrix& m : solution.P) {
    p.push_back(matrix_to_json(m));
  }
  return {{"P", std::move(p)},
          {"residual_norms", solution.residual_norms},
          {"iterations", solution.iterations},
          {"converged", solution.converged},
          {"residual_history", solution.residual_history}};
}

Json to_json(const DistanceReport& report) {
  return {{"per_player", report.per_player},
          {"delta_star", report.delta_star},
          {"is_exact", report.is_exact},
          {"tolerance_used", report.tolerance_used}};
}

Json to_json(const DeltaKReport& report) {
  return {{"deltaK", matrix_to_json(report.deltaK)},
          {"norm2", report.norm2},
          {"f_spectral", report.f_spectral},
          {"f_frobenius", report.f_frobenius},
          {"f_block_norms", report.f_block_norms},
          {"f_block_surrogate", report.f_block_surrogate},
          {"scaling_condition_per_player", report.scaling_condition_per_player},
          {"scaling_condition", report.scaling_condition},
          {"rp_norm", report.rp_norm},
          {"rp_inverse_norm", report.rp_inverse_norm},
          {"bp_norm", report.bp_norm},
          {"delta_star", report.delta_star},
          {"chain_value", report.chain_value}};
}

Json to_json(const BoundReport& report) {
  std::vector<double> x0(report.x0.data(), report.x0.data() + report.x0.size());
  return {{"grid", report.grid},
          {"error", report.error},
          {"bound", report.bound},
          {"margin", report.margin},
          {"holds", report.holds},
          {"delta_star_used", report.delta_star_used},
          {"x0", x0},
          {"players", report.players},
          {"bp_norm", report.bp_norm},
          {"ac_nash_norm", report.ac_nash_norm},
          {"ac_pot_norm", report.ac_pot_norm},
          {"deltaK_norm", report.deltaK_norm},
          {"per_player_distance", report.per_player_distance}};
}

Json to_json(const PiecewiseDelta& piecewise) {
  Json intervals = Json::array();
  for (const auto& [start, end] : piecewise.partition) {
    intervals.push_back({start, end});
  }
  return {{"partition", std::move(intervals)},
          {"deltas", piecewise.deltas},
          {"monotone_decreasing", piecewise.monotone_decreasing}};
}

Json to_json(const SweepReport& report) {
  Json rows = Json::array();
  for (const SweepRow& row : report.rows) {
    Json entry = {{"delta_in", row.delta_in},     {"delta_star", row.delta_star},
                  {"max_error", row.max_error},   {"bound_at_max", row.bound_at_max},
                  {"holds", row.holds},           {"ok", row.ok}};
    if (!row.ok) {
      entry["failure"] = row.failure;
    }
    rows.push_back(std::move(entry));
  }
  const FamilyParams& p = report.params;
  return {{"params",
           {{"n_per_block", p.n_per_block},
            {"players", p.players},
            {"inputs_per_player", p.inputs_per_player},
            {"seed", p.seed},
            {"stability_margin", p.stability_margin}}},
          {"rows", std::move(rows)},
          {"fit",
           {{"slope", report.fit.slope},
            {"intercept", report.fit.intercept},
            {"r_squared", report.fit.r_squared},
            {"points", report.fit.points}}},
          {"failed", report.failed}};
}

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string bound_report_csv(const BoundReport& report) {
  std::string out = "t,error,bound,margin\n";
  for (std::size_t k = 0; k < report.grid.size(); ++k) {
    out += format_double(report.grid[k]) + "," + format_double(report.error[k]) + "," +
           format_double(report.bound[k]) + "," + format_double(report.margin[k]) + "\n";
  }
  return out;
}

std::string piecewise_csv(const PiecewiseDelta& piecewise) {
  std::string out = "k,t_start,t_end,delta_k\n";
  for (std::size_t k = 0; k < piecewise.deltas.size(); ++k) {
    out += std::to_string(k + 1) + "," + format_double(piecewise.partition[k].first) + "," +
           format_double(piecewise.partition[k].second) + "," +
           format_double(piecewise.deltas[k]) + "\n";
  }
  return out;
}

std::string sweep_csv(const SweepReport& report) {
  std::string out = "delta_in,delta_star,max_error,bound_at_max,holds\n";
  for (const SweepRow& row : report.rows) {
    out += format_double(row.delta_in) + "," + format_double(row.delta_star) + "," +
           format_double(row.max_error) + "," + format_double(row.bound_at_max) + "," +
           (row.ok && row.holds ? "true" : "false") + "\n";
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::kInvalidArgument, "cannot write '" + path + "'");
  }
  out << text;
}

}  // namespace npdg::io
