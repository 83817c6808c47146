#pragma once

// Regularity conditions licensing the equivalence theorem:
//   (*)  F_theta is C^1 on (0, inf) with 0 < F'_theta(t) < C(theta), C integrable;
//   (**) p(theta) = lim_{t->0} F'_theta(t) is positive and injective.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mrp/error.hpp"
#include "mrp/model.hpp"
#include "mrp/properties/mpp.hpp"
#include "mrp/report.hpp"
#include "mrp/stats.hpp"

namespace mrp {

struct RegularityRecord {
  double theta = 0.0;
  double lambda = 0.0;
  bool has_density = false;
  bool positive = false;
  bool bounded = false;
  bool smooth = false;  // continuity proxy plus F' = f on the grid
  double bound = 0.0;   // C(theta)
  double hazard = 0.0;  // p(theta)

  bool pass() const noexcept { return has_density && positive && bounded && smooth; }
};

struct RegularityReport {
  std::vector<RegularityRecord> records;
  bool density_absent = false;
  bool hazard_positive = false;
  bool hazard_injective = false;
  double dominating_mean = 0.0;  // Monte Carlo E[C(Theta)]
  bool dominating_mean_stable = false;
  bool pass = false;
  std::vector<std::string> notes;

  std::vector<double> hazards() const {
    std::vector<double> out;
    for (const auto& r : records) out.push_back(r.hazard);
    return out;
  }

  TestReport to_report() const {
    TestReport r;
    r.test = "regularity";
    r.inputs["theta_points"] = records.size();
    r.decision = pass ? "pass" : "fail";
    r.add("E[C(Theta)]", dominating_mean);
    for (const auto& rec : records) {
      if (!rec.has_density) continue;
      r.add("p[theta=" + detail::number(rec.theta) + "]", rec.hazard);
    }
    auto flag = [&](bool ok, const std::string& what) {
      if (!ok) r.notes.push_back(what);
    };
    flag(!density_absent, "density-absence: the interarrival law has no density");
    if (!density_absent) {
      bool pos = true, bnd = true, smooth = true;
      for (const auto& rec : records) {
        pos = pos && rec.positive;
        bnd = bnd && rec.bounded;
        smooth = smooth && rec.smooth;
      }
      flag(pos, "density not strictly positive on the grid");
      flag(bnd, "density exceeds C(theta) on the grid");
      flag(smooth, "cdf fails the continuous-differentiability proxy");
      flag(hazard_positive, "p(theta) not positive");
      flag(hazard_injective, "p(theta) not strictly monotone on the grid");
      flag(dominating_mean_stable, "Monte Carlo mean of C(Theta) does not stabilise");
    }
    r.notes.insert(r.notes.end(), notes.begin(), notes.end());
    return r;
  }
};

namespace detail {

// f must be continuous and equal to F' at every grid point.
inline bool smoothness_proxy(const InterarrivalKernel& k, double lambda, const std::vector<double>& t_grid) {
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    const double h = 1e-5 * t;
    const double numeric = (k.cdf(lambda, t + h) - k.cdf(lambda, t - h)) / (2.0 * h);
    const double f = k.pdf(lambda, t);
    if (std::abs(numeric - f) > 1e-4 * f + 1e-9) return false;
    if (i + 1 < t_grid.size()) {
      const double step = t_grid[i + 1] - t;
      const double jump = std::abs(k.pdf(lambda, t_grid[i + 1]) - f);
      const double jump_fine = std::abs(k.pdf(lambda, t + step / 8.0) - f);
      if (jump_fine > 0.5 * jump + 1e-12 * std::max(f, 1.0)) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Checks (*) and (**) on theta_grid x t_grid. Failures are report content.
///
/// Integrability of C under the mixing law is a Monte Carlo proxy: the running
/// mean of C(h(Theta)) at n/4, n/2 and n draws must agree within 10%. This
/// cannot certify integrability.
inline RegularityReport regularity_check(const MrpModel& model, std::vector<double> theta_grid,
                                         const std::vector<double>& t_grid, std::size_t mc_draws = 100000,
                                         std::uint64_t seed = 0) {
  if (theta_grid.empty() || t_grid.empty()) throw Error(ErrorKind::InvalidInput, "regularity grids must be nonempty");
  std::sort(theta_grid.begin(), theta_grid.end());
  theta_grid.erase(std::unique(theta_grid.begin(), theta_grid.end()), theta_grid.end());

  RegularityReport rep;
  rep.notes.push_back("integrability of C(Theta) is checked by a Monte Carlo proxy only");
  if (!model.kernel.has_density()) {
    rep.density_absent = true;
    for (double theta : theta_grid) {
      RegularityRecord rec;
      rec.theta = theta;
      rec.lambda = model.parameter(theta);
      rep.records.push_back(rec);
    }
    return rep;
  }

  for (double theta : theta_grid) {
    RegularityRecord rec;
    rec.theta = theta;
    rec.lambda = model.parameter(theta);
    rec.has_density = true;
    rec.bound = model.kernel.dominating_bound(rec.lambda);
    rec.hazard = model.kernel.hazard_at_zero(rec.lambda);
    rec.positive = true;
    rec.bounded = true;
    for (double t : t_grid) {
      const double f = model.kernel.pdf(rec.lambda, t);
      rec.positive = rec.positive && f > 0.0;
      rec.bounded = rec.bounded && f <= rec.bound;
    }
    rec.smooth = detail::smoothness_proxy(model.kernel, rec.lambda, t_grid);
    rep.records.push_back(rec);
  }

  rep.hazard_positive = std::all_of(rep.records.begin(), rep.records.end(), [](auto& r) { return r.hazard > 0.0; });
  rep.hazard_injective = true;
  int direction = 0;
  for (std::size_t i = 1; i < rep.records.size(); ++i) {
    const double a = rep.records[i - 1].hazard, b = rep.records[i].hazard;
    const int d = b > a ? 1 : (b < a ? -1 : 0);
    if (d == 0 || (direction != 0 && d != direction)) rep.hazard_injective = false;
    if (direction == 0) direction = d;
  }

  RandomStream rng(seed, 0, kRegularityStream);
  double sum = 0.0, quarter = 0.0, half = 0.0;
  for (std::size_t i = 1; i <= mc_draws; ++i) {
    sum += model.kernel.dominating_bound(model.parameter(model.mixing.sample(rng)));
    if (i == mc_draws / 4) quarter = sum / static_cast<double>(i);
    if (i == mc_draws / 2) half = sum / static_cast<double>(i);
  }
  rep.dominating_mean = sum / static_cast<double>(mc_draws);
  rep.dominating_mean_stable = std::isfinite(rep.dominating_mean) &&
                               std::abs(quarter - rep.dominating_mean) <= 0.1 * std::abs(rep.dominating_mean) &&
                               std::abs(half - rep.dominating_mean) <= 0.1 * std::abs(rep.dominating_mean);

  rep.pass = rep.hazard_positive && rep.hazard_injective && rep.dominating_mean_stable &&
             std::all_of(rep.records.begin(), rep.records.end(), [](auto& r) { return r.pass(); });
  return rep;
}

inline RegularityReport regularity_check(const MrpModel& model, double horizon) {
  return regularity_check(model, quantile_grid(model.mixing), default_t_grid(horizon));
}

}  // namespace mrp
