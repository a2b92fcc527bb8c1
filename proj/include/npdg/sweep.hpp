#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "npdg/family.hpp"
#include "npdg/simulation.hpp"

namespace npdg {

enum class X0Mode { kOnes, kRandomUnit };

X0Mode parse_x0_mode(const std::string& text);

/// All-ones or a seeded random direction, normalized to unit length.
/// Random directions use substream 4N + 1 of the family seed.
Vector initial_state(Index n, X0Mode mode, std::uint64_t seed, std::size_t players);

struct SweepRow {
  double delta_in = 0.0;
  double delta_star = 0.0;
  double max_error = 0.0;
  double bound_at_max = 0.0;
  bool holds = false;
  /// False when the pipeline threw for this row; `failure` says why.
  bool ok = false;
  std::string failure;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

struct SweepReport {
  FamilyParams params;
  std::vector<SweepRow> rows;
  LinearFit fit;
  bool failed = false;
};

struct SweepOptions {
  X0Mode x0_mode = X0Mode::kOnes;
  double horizon = 2.0;
  std::size_t points = 201;
  /// Rows used by the fit, taken from the smallest deltas. 0 means half the
  /// grid, rounded up.
  std::size_t fit_points = 0;
  VerifyOptions verify;
};

/// Ordinary least squares y = slope x + intercept.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// `count` log-spaced values on [lo, hi].
std::vector<double> log_grid(double lo, double hi, std::size_t count);

/// Runs generate -> solve -> distance -> simulate -> verify for each delta.
/// Per-row failures are recorded, not thrown.
SweepReport sweep_delta(const FamilyParams& params, const std::vector<double>& delta_grid,
                        const SweepOptions& options = {});

}  // namespace npdg
