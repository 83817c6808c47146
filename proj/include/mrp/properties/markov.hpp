#pragma once

// The Markov property: the law of N_{t_{m+1}} given N_{t_1}, ..., N_{t_m}
// depends on the history only through N_{t_m}.

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mrp/error.hpp"
#include "mrp/model.hpp"
#include "mrp/path.hpp"
#include "mrp/properties/multinomial.hpp"
#include "mrp/report.hpp"
#include "mrp/stats.hpp"

namespace mrp {

struct MarkovOptions {
  double alpha = 0.01;
  std::size_t min_history = 100;
  double min_expected = 5.0;
};

/// For each latest count n_m, the histories (n_1, ..., n_m) seen at least
/// min_history times form the rows of a contingency table over the next
/// increment N_{t_{m+1}} - n_m; the remaining paths with that n_m form one
/// extra row when they also reach min_history. Under the Markov property the
/// rows share one conditional law, which a chi-square homogeneity test checks.
/// Groups are disjoint, so their p-values are combined by Fisher's method.
///
/// A latest count with a single qualifying history has conditional law equal
/// to the law given n_m alone, and contributes no test.
inline TestReport markov_test(const PathEnsemble& ens, std::span<const double> times, const MarkovOptions& opt = {}) {
  validate_times(times);
  if (times.size() < 3)
    throw Error(ErrorKind::InvalidInput, "Markov test needs t_1 < ... < t_{m+1} with m >= 2");
  const std::size_t m = times.size() - 1;

  // latest count -> history -> next increment -> count
  std::map<long, std::map<std::vector<long>, std::map<long, std::size_t>>> groups;
  for (const auto& path : ens.paths) {
    auto counts = counts_at(path, times);
    const long next = counts[m] - counts[m - 1];
    counts.pop_back();
    const long latest = counts.back();
    ++groups[latest][counts][next];
  }

  TestReport r;
  r.test = "markov";
  r.inputs["times"] = std::vector<double>(times.begin(), times.end());
  r.inputs["n_paths"] = ens.size();
  r.inputs["horizon"] = ens.horizon;
  r.inputs["model"] = nlohmann::ordered_json::parse(ens.model.empty() ? "{}" : ens.model);
  r.inputs["min_history"] = opt.min_history;
  r.alpha = opt.alpha;
  r.seed = ens.seed;

  bool any_history = false;
  std::vector<double> group_p;
  double chi_total = 0.0, dof_total = 0.0;
  for (const auto& [latest, histories] : groups) {
    std::vector<std::map<long, std::size_t>> rows;
    std::map<long, std::size_t> rest;
    std::size_t rest_total = 0;
    std::map<long, std::size_t> pooled;
    std::size_t pooled_total = 0;
    for (const auto& [history, next] : histories) {
      std::size_t tot = 0;
      for (auto [k, c] : next) tot += c;
      for (auto [k, c] : next) pooled[k] += c;
      pooled_total += tot;
      if (tot >= opt.min_history) {
        any_history = true;
        rows.push_back(next);
        double mean = 0.0;
        for (auto [k, c] : next) mean += static_cast<double>(k * static_cast<long>(c));
        r.add("E[next|history=" + detail::vec_str(history) + "]", mean / static_cast<double>(tot));
      } else {
        for (auto [k, c] : next) rest[k] += c;
        rest_total += tot;
      }
    }
    if (rest_total >= opt.min_history) rows.push_back(rest);
    if (pooled_total >= opt.min_history) {
      double mean = 0.0;
      for (auto [k, c] : pooled) mean += static_cast<double>(k * static_cast<long>(c));
      r.add("E[next|latest=" + std::to_string(latest) + "]", mean / static_cast<double>(pooled_total));
    }
    if (rows.size() < 2) continue;

    long max_next = 0;
    for (const auto& row : rows) max_next = std::max(max_next, row.rbegin()->first);
    std::vector<std::vector<double>> table(rows.size(), std::vector<double>(static_cast<std::size_t>(max_next) + 1, 0.0));
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (auto [k, c] : rows[i]) table[i][static_cast<std::size_t>(k)] = static_cast<double>(c);
    const auto res = stats::chi_square_homogeneity(table, opt.min_expected);
    if (res.cells < 2) continue;
    group_p.push_back(res.p_value);
    chi_total += res.statistic;
    dof_total += res.dof;
    r.add("chi2_p[latest=" + std::to_string(latest) + "]", res.p_value);
  }

  if (!any_history)
    throw Error(ErrorKind::InsufficientData, "no history reaches " + std::to_string(opt.min_history) + " paths");

  if (group_p.empty()) {
    r.notes.push_back("every latest count has a single qualifying history; conditionals coincide");
    r.p_value = 1.0;
  } else {
    r.p_value = stats::fisher_combine(group_p);
    double fisher_stat = 0.0;
    for (double p : group_p) fisher_stat += -2.0 * std::log(std::clamp(p, 1e-300, 1.0));
    r.statistic = fisher_stat;
    r.dof = 2.0 * static_cast<double>(group_p.size());
    r.add("chi2_total", chi_total);
    r.add("chi2_total_dof", dof_total);
  }
  r.decision = *r.p_value < opt.alpha ? "reject" : "fail-to-reject";
  return r;
}

}  // namespace mrp
