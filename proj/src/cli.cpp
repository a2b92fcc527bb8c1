#include "npdg/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "npdg/error.hpp"
#include "npdg/family.hpp"
#include "npdg/io.hpp"
#include "npdg/linalg.hpp"
#include "npdg/metrics.hpp"
#include "npdg/riccati.hpp"
#include "npdg/simulation.hpp"
#include "npdg/sweep.hpp"

namespace npdg {

namespace {

std::string sci(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.6e", value);
  return buffer;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) {
        throw std::invalid_argument(item);
      }
    } catch (const std::exception&) {
      throw Error(ErrorKind::kInvalidArgument, what + ": '" + item + "' is not a number");
    }
  }
  if (values.empty()) {
    throw Error(ErrorKind::kInvalidArgument, what + " is empty");
  }
  return values;
}

// "a,b,c" or "log:lo:hi:count"
std::vector<double> parse_delta_grid(const std::string& text) {
  if (text.rfind("log:", 0) == 0) {
    std::vector<double> parts;
    std::stringstream stream(text.substr(4));
    std::string item;
    while (std::getline(stream, item, ':')) {
      parts.push_back(parse_list(item, "--grid").front());
    }
    if (parts.size() != 3 || parts[2] < 2) {
      throw Error(ErrorKind::kInvalidArgument, "--grid log form is log:lo:hi:count");
    }
    return log_grid(parts[0], parts[1], static_cast<std::size_t>(parts[2]));
  }
  return parse_list(text, "--grid");
}

std::string matrix_text(const Matrix& m, const std::string& indent) {
  std::string out;
  for (Index r = 0; r < m.rows(); ++r) {
    out += indent;
    for (Index c = 0; c < m.cols(); ++c) {
      out += (c == 0 ? "" : " ") + io::format_double(m(r, c));
    }
    out += "\n";
  }
  return out;
}

struct SolverFlags {
  double tol = 1e-9;
  int max_iter = 200;
  double damping = 0.5;

  void attach(CLI::App* app) {
    app->add_option("--tol", tol, "Residual tolerance (spectral norm)")->check(CLI::PositiveNumber);
    app->add_option("--max-iter", max_iter, "Outer iteration budget")->check(CLI::PositiveNumber);
    app->add_option("--damping", damping, "Gain relaxation factor in (0, 1]")
        ->check(CLI::Range(1e-12, 1.0));
  }

  CoupledOptions coupled() const {
    CoupledOptions o;
    o.tol = tol;
    o.max_iter = max_iter;
    o.damping = damping;
    return o;
  }

  CareOptions care() const { return CareOptions{tol, 50}; }
};

struct Loaded {
  GameSpec game;
  PotentialSpec potential;
};

// Reads and validates; the potential is mandatory unless `need_potential`
// is false.
std::optional<Loaded> load_checked(const std::string& path, bool allow_nondiagonal,
                                   bool need_potential, std::ostream& err) {
  io::GameFile file = io::load_game(path);
  ValidationReport report = validate_game(file.game, {allow_nondiagonal});
  if (report.ok && file.potential) {
    report = validate_potential(file.game, *file.potential);
  }
  if (!report.ok) {
    for (const auto& v : report.violations) {
      err << "invalid: " << v.path << ": " << v.message << "\n";
    }
    return std::nullopt;
  }
  if (need_potential && !file.potential) {
    err << "invalid: potential: missing required key\n";
    return std::nullopt;
  }
  Loaded loaded{std::move(file.game), {}};
  if (file.potential) {
    loaded.potential = std::move(*file.potential);
  }
  return loaded;
}

Vector parse_x0(const std::string& text, Index n) {
  if (text.empty()) {
    return Vector::Ones(n) / std::sqrt(static_cast<double>(n));
  }
  const std::vector<double> values = parse_list(text, "--x0");
  if (static_cast<Index>(values.size()) != n) {
    throw Error(ErrorKind::kDimensionMismatch,
                "--x0 has " + std::to_string(values.size()) + " entries, expected " +
                    std::to_string(n));
  }
  return Eigen::Map<const Vector>(values.data(), n);
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) {
    return *flag;
  }
  if (const char* env = std::getenv("NPDG_SEED"); env != nullptr && *env != '\0') {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(ErrorKind::kInvalidArgument, "NPDG_SEED is not an unsigned integer");
    }
  }
  return 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Near-potential LQ differential game toolkit", "npdg"};
  app.require_subcommand(1);

  bool json = false;
  bool allow_nondiagonal = false;
  std::string file;
  SolverFlags solver;

  auto add_common = [&](CLI::App* sub, bool with_file, bool with_solver) {
    if (with_file) {
      sub->add_option("file", file, "Game JSON file")->required();
      sub->add_flag("--allow-nondiagonal", allow_nondiagonal,
                    "Accept non-diagonal Q and R matrices");
    }
    if (with_solver) {
      solver.attach(sub);
    }
    sub->add_flag("--json", json, "Machine-readable JSON output");
  };

  CLI::App* validate = app.add_subcommand("validate", "Check a game file against the model rules");
  add_common(validate, true, false);

  CLI::App* solve = app.add_subcommand("solve", "Solve the coupled and potential Riccati equations");
  add_common(solve, true, true);

  CLI::App* distance = app.add_subcommand("distance", "Per-player distances and delta*");
  add_common(distance, true, true);
  bool chain = false;
  distance->add_flag("--chain", chain, "Also report the Delta K bound chain");

  std::string x0_text;
  double t_end = 2.0;
  std::size_t points = 201;
  std::string csv_path;
  auto add_sim = [&](CLI::App* sub) {
    sub->add_option("--x0", x0_text, "Initial state, comma separated (default: unit all-ones)");
    sub->add_option("--t-end", t_end, "Horizon end")->check(CLI::PositiveNumber);
    sub->add_option("--points", points, "Grid points")->check(CLI::Range(2, 1000000));
    sub->add_option("--csv", csv_path, "Write CSV to this file");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "Simulate both closed loops");
  add_common(simulate, true, true);
  add_sim(simulate);

  CLI::App* verify = app.add_subcommand("verify", "Check the trajectory error bound");
  add_common(verify, true, true);
  add_sim(verify);
  std::size_t pieces = 0;
  std::string pieces_csv;
  verify->add_option("--pieces", pieces, "Piecewise delta over this many equal intervals");
  verify->add_option("--pieces-csv", pieces_csv, "Write piecewise delta CSV to this file");

  FamilyParams params;
  std::optional<std::uint64_t> seed;
  auto add_family = [&](CLI::App* sub) {
    sub->add_option("--n", params.n_per_block, "State dimension per player block")
        ->check(CLI::PositiveNumber);
    sub->add_option("--players", params.players, "Number of players")->check(CLI::PositiveNumber);
    sub->add_option("--inputs", params.inputs_per_player, "Inputs per player")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "RNG seed (fallback: NPDG_SEED, then 1)");
    sub->add_option("--margin", params.stability_margin, "Open-loop stability margin")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* sweep = app.add_subcommand("sweep", "Sweep the coupling strength of a generated family");
  add_common(sweep, false, true);
  add_family(sweep);
  std::string grid_text = "log:1e-4:1e-1:7";
  std::string x0_mode = "ones";
  sweep->add_option("--grid", grid_text, "Deltas: a,b,c or log:lo:hi:count");
  sweep->add_option("--x0-mode", x0_mode, "ones or random-unit");
  sweep->add_option("--horizon", t_end, "Horizon end")->check(CLI::PositiveNumber);
  sweep->add_option("--points", points, "Grid points")->check(CLI::Range(2, 1000000));
  sweep->add_option("--csv", csv_path, "Write CSV to this file");

  CLI::App* generate = app.add_subcommand("generate", "Write a generated game file");
  add_family(generate);
  generate->add_option("--delta", params.delta, "Coupling strength")->check(CLI::NonNegativeNumber);
  std::string output;
  generate->add_option("-o,--output", output, "Output path (default: stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    if (!app.get_subcommands().empty()) {
      err << app.get_subcommands().front()->help();
    } else {
      err << app.help();
    }
    return kExitUsage;
  }

  try {
    if (validate->parsed()) {
      io::GameFile game_file = io::load_game(file);
      ValidationReport report = validate_game(game_file.game, {allow_nondiagonal});
      if (game_file.potential) {
        for (auto& v : validate_potential(game_file.game, *game_file.potential).violations) {
          report.add(v.path, v.rule, v.message);
        }
      }
      if (json) {
        out << io::to_json(report).dump(2) << "\n";
      } else if (report.ok) {
        out << "ok\n";
      } else {
        for (const auto& v : report.violations) {
          out << v.path << " [" << v.rule << "] " << v.message << "\n";
        }
      }
      return report.ok ? kExitOk : kExitValidation;
    }

    if (generate->parsed()) {
      params.seed = resolve_seed(seed);
      const Family family = generate_family(params);
      const std::string text = io::game_to_json(family.game, &family.potential).dump(2) + "\n";
      if (output.empty()) {
        out << text;
      } else {
        io::write_text(output, text);
        out << "wrote " << output << "\n";
      }
      return kExitOk;
    }

    if (sweep->parsed()) {
      params.seed = resolve_seed(seed);
      SweepOptions options;
      options.x0_mode = parse_x0_mode(x0_mode);
      options.horizon = t_end;
      options.points = points;
      options.verify.coupled = solver.coupled();
      options.verify.care = solver.care();
      const SweepReport report = sweep_delta(params, parse_delta_grid(grid_text), options);
      if (!csv_path.empty()) {
        io::write_text(csv_path, io::sweep_csv(report));
      }
      if (json) {
        out << io::to_json(report).dump(2) << "\n";
      } else {
        out << io::sweep_csv(report);
        out << "fit slope=" << sci(report.fit.slope) << " intercept=" << sci(report.fit.intercept)
            << " r_squared=" << io::format_double(report.fit.r_squared)
            << " points=" << report.fit.points << "\n";
        out << "failed=" << (report.failed ? "true" : "false") << "\n";
      }
      for (const SweepRow& row : report.rows) {
        if (!row.ok) {
          return kExitSolver;
        }
      }
      return kExitOk;
    }

    const bool needs_potential = !solve->parsed();
    std::optional<Loaded> loaded = load_checked(file, allow_nondiagonal, needs_potential, err);
    if (!loaded) {
      return kExitValidation;
    }
    const GameSpec& game = loaded->game;
    const PotentialSpec& pot = loaded->potential;

    if (solve->parsed()) {
      const RiccatiSolution nash = solve_coupled_riccati(game, solver.coupled());
      std::optional<RiccatiSolution> potential;
      if (pot.Rp.size() > 0) {
        potential = solve_potential(game, pot, solver.care());
      }
      if (json) {
        io::Json doc = {{"nash", io::to_json(nash)}};
        if (potential) {
          doc["potential"] = io::to_json(*potential);
        }
        out << doc.dump(2) << "\n";
        return kExitOk;
      }
      out << "nash iterations=" << nash.iterations << "\n";
      for (std::size_t i = 0; i < nash.P.size(); ++i) {
        out << "P^" << i + 1 << " residual=" << sci(nash.residual_norms[i]) << "\n"
            << matrix_text(nash.P[i], "  ");
      }
      if (potential) {
        out << "potential iterations=" << potential->iterations
            << " residual=" << sci(potential->residual_norms.front()) << "\n"
            << matrix_text(potential->P.front(), "  ");
      }
      return kExitOk;
    }

    const RiccatiSolution nash = solve_coupled_riccati(game, solver.coupled());
    const RiccatiSolution potential = solve_potential(game, pot, solver.care());
    const Matrix& pp = potential.P.front();

    if (distance->parsed()) {
      const DistanceReport report = delta_star(game, nash.P, pot, pp);
      std::optional<DeltaKReport> chain_report;
      double kappa = 1.0;
      if (chain) {
        auto [normalized, used] = normalize_potential_scaling(pot);
        kappa = used;
        const RiccatiSolution scaled = solve_potential(game, normalized, solver.care());
        chain_report = deltaK_bound_chain(game, normalized, nash.P, scaled.P.front());
      }
      if (json) {
        io::Json doc = io::to_json(report);
        if (chain_report) {
          doc["chain"] = io::to_json(*chain_report);
          doc["chain"]["kappa_used"] = kappa;
        }
        out << doc.dump(2) << "\n";
        return kExitOk;
      }
      out << "player  d_i\n";
      for (std::size_t i = 0; i < report.per_player.size(); ++i) {
        out << i + 1 << "       " << sci(report.per_player[i]) << "\n";
      }
      out << "delta_star " << sci(report.delta_star) << "\n";
      out << "is_exact " << (report.is_exact ? "true" : "false") << "\n";
      if (chain_report) {
        out << "kappa_used " << io::format_double(kappa) << "\n"
            << "deltaK_norm " << sci(chain_report->norm2) << "\n"
            << "f_spectral " << sci(chain_report->f_spectral) << "\n"
            << "f_frobenius " << sci(chain_report->f_frobenius) << "\n"
            << "f_block_surrogate " << sci(chain_report->f_block_surrogate) << "\n"
            << "scaling_condition " << (chain_report->scaling_condition ? "true" : "false")
            << "\n"
            << "chain_value " << sci(chain_report->chain_value) << "\n";
      }
      return kExitOk;
    }

    const Vector x0 = parse_x0(x0_text, game.n);
    const std::vector<double> grid = uniform_grid(0.0, t_end, points);

    if (simulate->parsed()) {
      const ClosedLoop nash_loop = closed_loop_nash(game, nash.P);
      const ClosedLoop pot_loop = closed_loop_potential(game.A, pot, pp);
      const Trajectory traj_nash = simulate_closed_loop(nash_loop.Ac, x0, grid);
      const Trajectory traj_pot = simulate_closed_loop(pot_loop.Ac, x0, grid);
      const std::vector<double> error = trajectory_error(traj_pot, traj_nash);
      if (json) {
        io::Json nash_states = io::Json::array();
        io::Json pot_states = io::Json::array();
        for (std::size_t k = 0; k < grid.size(); ++k) {
          const Vector& a = traj_nash.states[k];
          const Vector& b = traj_pot.states[k];
          nash_states.push_back(std::vector<double>(a.data(), a.data() + a.size()));
          pot_states.push_back(std::vector<double>(b.data(), b.data() + b.size()));
        }
        io::Json doc = {{"grid", grid},
                        {"nash", std::move(nash_states)},
                        {"potential", std::move(pot_states)},
                        {"error", error}};
        out << doc.dump(2) << "\n";
        return kExitOk;
      }
      std::string text = "t";
      for (Index j = 0; j < game.n; ++j) {
        text += ",x_nash_" + std::to_string(j + 1);
      }
      for (Index j = 0; j < game.n; ++j) {
        text += ",x_pot_" + std::to_string(j + 1);
      }
      text += ",error\n";
      for (std::size_t k = 0; k < grid.size(); ++k) {
        text += io::format_double(grid[k]);
        for (Index j = 0; j < game.n; ++j) {
          text += "," + io::format_double(traj_nash.states[k](j));
        }
        for (Index j = 0; j < game.n; ++j) {
          text += "," + io::format_double(traj_pot.states[k](j));
        }
        text += "," + io::format_double(error[k]) + "\n";
      }
      if (csv_path.empty()) {
        out << text;
      } else {
        io::write_text(csv_path, text);
        out << "wrote " << csv_path << "\n";
      }
      return kExitOk;
    }

    if (verify->parsed()) {
      VerifyOptions options{solver.coupled(), solver.care()};
      const BoundReport report = verify_bound(game, pot, x0, grid, options);
      std::optional<PiecewiseDelta> piecewise;
      if (pieces > 0) {
        const ClosedLoop nash_loop = closed_loop_nash(game, nash.P);
        const ClosedLoop pot_loop = closed_loop_potential(game.A, pot, pp);
        piecewise = piecewise_delta(simulate_closed_loop(pot_loop.Ac, x0, grid),
                                    simulate_closed_loop(nash_loop.Ac, x0, grid),
                                    report.delta_star_used,
                                    uniform_partition(grid.front(), grid.back(), pieces));
        if (!pieces_csv.empty()) {
          io::write_text(pieces_csv, io::piecewise_csv(*piecewise));
        }
      }
      if (!csv_path.empty()) {
        io::write_text(csv_path, io::bound_report_csv(report));
      }
      if (json) {
        io::Json doc = io::to_json(report);
        if (piecewise) {
          doc["piecewise"] = io::to_json(*piecewise);
        }
        out << doc.dump(2) << "\n";
        return kExitOk;
      }
      const std::size_t at = report.argmax_error();
      out << "holds=" << (report.holds ? "true" : "false") << "\n"
          << "delta_star=" << io::format_double(report.delta_star_used) << "\n"
          << "max_error=" << io::format_double(report.error[at]) << " at t="
          << io::format_double(report.grid[at]) << "\n"
          << "margin_end=" << io::format_double(report.margin.back()) << "\n"
          << "margin_max=" << io::format_double(report.max_margin()) << "\n";
      if (piecewise) {
        out << io::piecewise_csv(*piecewise)
            << "monotone_decreasing=" << (piecewise->monotone_decreasing ? "true" : "false")
            << "\n";
      }
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.is_solver_failure() ? kExitSolver : kExitValidation;
  }
  return kExitUsage;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) {
    args.emplace_back(argv[k]);
  }
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace npdg
