#include "npdg/sweep.hpp"

#include <algorithm>
#include <cmath>

#include "npdg/error.hpp"
#include "npdg/rng.hpp"

namespace npdg {

X0Mode parse_x0_mode(const std::string& text) {
  if (text == "ones") {
    return X0Mode::kOnes;
  }
  if (text == "random-unit") {
    return X0Mode::kRandomUnit;
  }
  throw Error(ErrorKind::kInvalidArgument, "x0 mode must be 'ones' or 'random-unit'");
}

Vector initial_state(Index n, X0Mode mode, std::uint64_t seed, std::size_t players) {
  Vector x = Vector::Ones(n);
  if (mode == X0Mode::kRandomUnit) {
    auto rng = Xoshiro256::substream(seed, 4 * static_cast<std::uint64_t>(players) + 1);
    do {
      for (Index k = 0; k < n; ++k) {
        x(k) = rng.uniform(-1.0, 1.0);
      }
    } while (x.norm() == 0.0);
  }
  return x / x.norm();
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "fit needs matching, non-empty samples");
  }
  const double count = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  LinearFit fit;
  fit.points = x.size();
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double r = y[k] - (fit.slope * x[k] + fit.intercept);
    sse += r * r;
  }
  // A constant response that the line reproduces exactly counts as a perfect fit.
  fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : (sse == 0.0 ? 1.0 : 0.0);
  return fit;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) {
    throw Error(ErrorKind::kInvalidArgument, "log grid needs 0 < lo < hi and two points");
  }
  std::vector<double> out(count);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t k = 0; k < count; ++k) {
    out[k] = std::pow(10.0, a + (b - a) * static_cast<double>(k) / static_cast<double>(count - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

SweepReport sweep_delta(const FamilyParams& params, const std::vector<double>& delta_grid,
                        const SweepOptions& options) {
  validate_params(params);
  if (delta_grid.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "delta grid is empty");
  }
  for (std::size_t k = 0; k < delta_grid.size(); ++k) {
    if (!(delta_grid[k] >= 0.0) || (k > 0 && !(delta_grid[k] > delta_grid[k - 1]))) {
      throw Error(ErrorKind::kInvalidArgument, "delta grid must be non-negative and ascending");
    }
  }
  const std::vector<double> grid = uniform_grid(0.0, options.horizon, options.points);

  SweepReport report;
  report.params = params;
  for (double delta : delta_grid) {
    FamilyParams row_params = params;
    row_params.delta = delta;
    SweepRow row;
    row.delta_in = delta;
    try {
      const Family family = generate_family(row_params);
      const Vector x0 =
          initial_state(family.game.n, options.x0_mode, params.seed, params.players);
      const BoundReport bound = verify_bound(family.game, family.potential, x0, grid, options.verify);
      const std::size_t at = bound.argmax_error();
      row.delta_star = bound.delta_star_used;
      row.max_error = bound.error[at];
      row.bound_at_max = bound.bound[at];
      row.holds = bound.holds;
      row.ok = true;
    } catch (const Error& e) {
      row.failure = e.what();
    }
    if (!row.ok || !row.holds) {
      report.failed = true;
    }
    report.rows.push_back(std::move(row));
  }

  const std::size_t half = (report.rows.size() + 1) / 2;
  const std::size_t wanted = options.fit_points == 0 ? half : options.fit_points;
  std::vector<double> xs;
  std::vector<double> ys;
  for (const SweepRow& row : report.rows) {
    if (xs.size() == wanted) {
      break;
    }
    if (row.ok) {
      xs.push_back(row.delta_star);
      ys.push_back(row.max_error);
    }
  }
  if (!xs.empty()) {
    report.fit = fit_line(xs, ys);
  }
  return report;
}

}  // namespace npdg
