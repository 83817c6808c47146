#pragma once

// The multinomial property: given N_{t_m} = n, the increments over
// 0 = t_0 < t_1 < ... < t_m are multinomial(n, ((t_j - t_{j-1}) / t_m)_j).

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mrp/error.hpp"
#include "mrp/model.hpp"
#include "mrp/path.hpp"
#include "mrp/report.hpp"
#include "mrp/stats.hpp"

namespace mrp {

/// Multinomial probability of the increment vector `counts` with cell
/// probabilities (t_j - t_{j-1}) / t_m.
inline double multinomial_pmf(std::span<const double> times, std::span<const long> counts) {
  validate_times(times);
  if (times.size() != counts.size()) throw Error(ErrorKind::InvalidInput, "times and counts differ in length");
  const double tm = times.back();
  double coef = 1.0;
  double prob = 1.0;
  long partial = 0;
  double prev = 0.0;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    const long k = counts[j];
    if (k < 0) throw Error(ErrorKind::InvalidInput, "counts must be nonnegative");
    // coef *= C(partial + k, k), built factor by factor
    for (long i = 1; i <= k; ++i) coef = coef * static_cast<double>(partial + i) / static_cast<double>(i);
    partial += k;
    if (k > 0) prob *= std::pow((times[j] - prev) / tm, static_cast<double>(k));
    prev = times[j];
  }
  return coef * prob;
}

/// Right-hand side of the multinomial identity,
/// n!/prod kappa_j! prod ((t_j - t_{j-1})/t_m)^kappa_j * P(N_{t_m} = n).
inline double multinomial_rhs(const PartitionQuery& query, double p_n_at_tm) {
  query.validate();
  if (!(p_n_at_tm >= 0.0 && p_n_at_tm <= 1.0))
    throw Error(ErrorKind::InvalidInput, "P(N_{t_m} = n) must lie in [0, 1]");
  return multinomial_pmf(query.times, query.counts) * p_n_at_tm;
}

/// Calls visit(kappa) for every composition of n into m nonnegative parts.
inline void for_each_composition(long n, std::size_t m, const std::function<void(const std::vector<long>&)>& visit) {
  std::vector<long> kappa(m, 0);
  std::function<void(std::size_t, long)> rec = [&](std::size_t j, long left) {
    if (j + 1 == m) {
      kappa[j] = left;
      visit(kappa);
      return;
    }
    for (long k = 0; k <= left; ++k) {
      kappa[j] = k;
      rec(j + 1, left - k);
    }
  };
  if (m > 0) rec(0, n);
}

inline double composition_count(long n, std::size_t m) {
  // C(n + m - 1, m - 1)
  double c = 1.0;
  for (std::size_t i = 1; i < m; ++i) c = c * static_cast<double>(n + static_cast<long>(i)) / static_cast<double>(i);
  return c;
}

struct MultinomialOptions {
  double alpha = 0.01;
  std::size_t min_cell = 50;
  double min_expected = 5.0;
  double max_compositions = 2e6;
};

namespace detail {

inline std::string vec_str(const std::vector<long>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "]";
}

}  // namespace detail

/// Tests the multinomial property on an ensemble over the partition `times`.
///
/// Check 1: for every total n >= 1 observed at least min_cell times, a
/// chi-square goodness of fit of the increment vectors against the
/// multinomial law, combined over n by Fisher's method (the n-groups are
/// disjoint). Check 2: for every increment vector observed at least min_cell
/// times, a two-proportion z test of P(increments = kappa) against
/// multinomial_rhs, Bonferroni-combined. The decision uses the Bonferroni
/// combination of both checks.
inline TestReport multinomial_test(const PathEnsemble& ens, std::span<const double> times,
                                   const MultinomialOptions& opt = {}) {
  validate_times(times);
  const std::size_t m = times.size();
  const double total = static_cast<double>(ens.size());

  std::map<long, std::map<std::vector<long>, std::size_t>> by_total;
  std::map<long, std::size_t> total_counts;
  for (const auto& path : ens.paths) {
    auto kappa = increments(path, times);
    long n = 0;
    for (long k : kappa) n += k;
    ++by_total[n][kappa];
    ++total_counts[n];
  }

  TestReport r;
  r.test = "multinomial";
  r.inputs["times"] = std::vector<double>(times.begin(), times.end());
  r.inputs["n_paths"] = ens.size();
  r.inputs["horizon"] = ens.horizon;
  r.inputs["model"] = nlohmann::ordered_json::parse(ens.model.empty() ? "{}" : ens.model);
  r.inputs["min_cell"] = opt.min_cell;
  r.alpha = opt.alpha;
  r.seed = ens.seed;

  bool any_group = false;
  std::vector<double> chi_p;
  for (const auto& [n, vectors] : by_total) {
    const std::size_t nn = total_counts[n];
    if (n < 1 || nn < opt.min_cell) continue;
    any_group = true;
    if (m < 2) continue;
    if (composition_count(n, m) > opt.max_compositions) {
      r.notes.push_back("total n=" + std::to_string(n) + " skipped: too many compositions");
      continue;
    }
    std::vector<std::pair<double, double>> cells;  // (expected, observed)
    for_each_composition(n, m, [&](const std::vector<long>& kappa) {
      const double e = static_cast<double>(nn) * multinomial_pmf(times, kappa);
      auto it = vectors.find(kappa);
      const double o = it == vectors.end() ? 0.0 : static_cast<double>(it->second);
      cells.emplace_back(e, o);
    });
    std::stable_sort(cells.begin(), cells.end(), [](auto& a, auto& b) { return a.first > b.first; });
    std::vector<double> obs, exp;
    for (auto [e, o] : cells) {
      exp.push_back(e);
      obs.push_back(o);
    }
    const auto res = stats::chi_square_gof(obs, exp, opt.min_expected);
    if (res.cells < 2) continue;
    chi_p.push_back(res.p_value);
    r.add("chi2[n=" + std::to_string(n) + "]", res.statistic);
    r.add("chi2_p[n=" + std::to_string(n) + "]", res.p_value);
  }

  std::vector<double> z_p;
  for (const auto& [n, vectors] : by_total) {
    const double p_n = static_cast<double>(total_counts[n]) / total;
    for (const auto& [kappa, count] : vectors) {
      if (count < opt.min_cell) continue;
      const double lhs = static_cast<double>(count) / total;
      const double rhs = multinomial_rhs(PartitionQuery({times.begin(), times.end()}, kappa), p_n);
      const double z = stats::two_proportion_z(static_cast<double>(count), total, rhs * total, total);
      z_p.push_back(stats::normal_two_sided_p(z));
      const std::string tag = detail::vec_str(kappa);
      r.add("lhs" + tag, lhs, std::sqrt(lhs * (1.0 - lhs) / total));
      r.add("rhs" + tag, rhs);
      r.add("z" + tag, z);
    }
  }

  if (!any_group)
    throw Error(ErrorKind::InsufficientData, "no total count n >= 1 reaches " + std::to_string(opt.min_cell) + " paths");

  double p_chi = 1.0;
  if (!chi_p.empty()) {
    p_chi = stats::fisher_combine(chi_p);
    double fisher_stat = 0.0;
    for (double p : chi_p) fisher_stat += -2.0 * std::log(std::clamp(p, 1e-300, 1.0));
    r.statistic = fisher_stat;
    r.dof = 2.0 * static_cast<double>(chi_p.size());
  } else {
    r.notes.push_back("no conditional chi-square cell structure; check 1 is vacuous");
  }
  double p_direct = 1.0;
  if (!z_p.empty())
    p_direct = std::min(1.0, static_cast<double>(z_p.size()) * *std::min_element(z_p.begin(), z_p.end()));
  r.add("p_conditional_chi2", p_chi);
  r.add("p_direct_identity", p_direct);
  r.p_value = std::min(1.0, 2.0 * std::min(p_chi, p_direct));
  r.decision = *r.p_value < opt.alpha ? "reject" : "fail-to-reject";
  return r;
}

inline bool rejected(const TestReport& r) { return r.decision == "reject"; }

}  // namespace mrp
