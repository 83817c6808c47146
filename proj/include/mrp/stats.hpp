#pragma once

// Statistical primitives used by the property testers.

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "mrp/error.hpp"

namespace mrp::stats {

/// Sorted sample.
class EmpiricalSample {
 public:
  explicit EmpiricalSample(std::vector<double> values) : values_(std::move(values)) {
    std::sort(values_.begin(), values_.end());
  }

  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

/// Exact one-sample Kolmogorov-Smirnov distance sup_x |F_n(x) - F(x)|,
/// evaluated at the jump points. The left term uses F(x_i-), which equals
/// F(x_i) for continuous cdfs and keeps step cdfs exact.
template <class Cdf>
double ks_distance(const EmpiricalSample& sample, Cdf&& cdf) {
  const auto& xs = sample.values();
  if (xs.empty()) throw Error(ErrorKind::InvalidInput, "KS distance of an empty sample");
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size();) {
    std::size_t j = i + 1;
    while (j < xs.size() && xs[j] == xs[i]) ++j;
    const double f = cdf(xs[i]);
    const double f_left = cdf(std::nextafter(xs[i], -std::numeric_limits<double>::infinity()));
    d = std::max({d, std::abs(j / n - f), std::abs(i / n - f_left)});
    i = j;
  }
  return d;
}

/// Two-sample KS distance sup_x |F_a(x) - F_b(x)|.
inline double ks_two_sample(const EmpiricalSample& a, const EmpiricalSample& b) {
  const auto& x = a.values();
  const auto& y = b.values();
  if (x.empty() || y.empty()) throw Error(ErrorKind::InvalidInput, "KS distance of an empty sample");
  std::size_t i = 0, j = 0;
  double d = 0.0;
  const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    d = std::max(d, std::abs(i / nx - j / ny));
  }
  return d;
}

/// Asymptotic Kolmogorov survival P(sqrt(n) D_n > x).
inline double kolmogorov_sf(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.2) return 1.0;  // series needs many terms there; value is 1 to double precision
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

/// x with kolmogorov_sf(x) = alpha; 1.6276 at alpha = 0.01.
inline double kolmogorov_critical(double alpha) {
  double lo = 0.2, hi = 5.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (kolmogorov_sf(mid) > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Upper tail of the chi-square law with `dof` degrees of freedom.
inline double chi_square_p(double statistic, double dof) {
  if (!(dof > 0.0)) throw Error(ErrorKind::InvalidInput, "chi-square needs positive degrees of freedom");
  if (!(statistic > 0.0)) return 1.0;
  return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

/// Two-sided normal p-value for a z statistic.
inline double normal_two_sided_p(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

struct Interval {
  double lo;
  double hi;
};

/// Wilson score interval for a binomial proportion.
inline Interval wilson_ci(double successes, double n, double level) {
  if (!(n > 0.0)) throw Error(ErrorKind::InvalidInput, "Wilson interval needs n > 0");
  if (!(level > 0.0 && level < 1.0)) throw Error(ErrorKind::InvalidInput, "confidence level must lie in (0, 1)");
  const double z = std::sqrt(2.0) * boost::math::erf_inv(level);
  const double p = successes / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {centre - half, centre + half};
}

/// Pooled two-proportion z statistic. Counts may be fractional (expected counts).
inline double two_proportion_z(double k1, double n1, double k2, double n2) {
  if (!(n1 > 0.0) || !(n2 > 0.0)) throw Error(ErrorKind::InvalidInput, "two-proportion z needs positive sizes");
  const double p1 = k1 / n1, p2 = k2 / n2;
  const double p = (k1 + k2) / (n1 + n2);
  const double se = std::sqrt(p * (1.0 - p) * (1.0 / n1 + 1.0 / n2));
  if (se == 0.0) return 0.0;
  return (p1 - p2) / se;
}

/// Fisher's method: -2 sum ln p ~ chi-square(2k). p-values are clipped to
/// [1e-300, 1] before the log.
inline double fisher_combine(std::span<const double> p_values) {
  if (p_values.empty()) throw Error(ErrorKind::InvalidInput, "Fisher combination of no p-values");
  double stat = 0.0;
  for (double p : p_values) stat += -2.0 * std::log(std::clamp(p, 1e-300, 1.0));
  return chi_square_p(stat, 2.0 * static_cast<double>(p_values.size()));
}

struct ChiSquareResult {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
  std::size_t cells = 0;  // after pooling
};

/// Merges cells so that every pooled expected count is at least `min_expected`.
/// Cells are taken in the given order; an undersized tail joins the last bin.
inline std::vector<std::pair<double, double>> pool_cells(std::span<const double> observed,
                                                         std::span<const double> expected,
                                                         double min_expected = 5.0) {
  std::vector<std::pair<double, double>> bins;
  double o = 0.0, e = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    o += observed[i];
    e += expected[i];
    if (e >= min_expected) {
      bins.emplace_back(o, e);
      o = e = 0.0;
    }
  }
  if (e > 0.0 || o > 0.0) {
    if (bins.empty()) bins.emplace_back(o, e);
    else {
      bins.back().first += o;
      bins.back().second += e;
    }
  }
  return bins;
}

/// Pearson goodness of fit. Cells are pooled in order (callers sort them so
/// that neighbouring cells are alike); dof = pooled cells - 1.
inline ChiSquareResult chi_square_gof(std::span<const double> observed, std::span<const double> expected,
                                      double min_expected = 5.0) {
  if (observed.size() != expected.size()) throw Error(ErrorKind::InvalidInput, "cell count mismatch");
  auto bins = pool_cells(observed, expected, min_expected);
  ChiSquareResult r;
  r.cells = bins.size();
  if (bins.size() < 2) return r;
  for (auto [o, e] : bins) r.statistic += (o - e) * (o - e) / e;
  r.dof = static_cast<double>(bins.size() - 1);
  r.p_value = chi_square_p(r.statistic, r.dof);
  return r;
}

/// Pearson homogeneity test on an r x c table of counts (rows are samples).
/// Columns are pooled left to right until every expected count is at least
/// `min_expected`; dof = (r - 1)(c' - 1).
inline ChiSquareResult chi_square_homogeneity(const std::vector<std::vector<double>>& table,
                                              double min_expected = 5.0) {
  ChiSquareResult r;
  const std::size_t rows = table.size();
  if (rows < 2) return r;
  const std::size_t cols = table.front().size();
  std::vector<double> row_tot(rows, 0.0), col_tot(cols, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      row_tot[i] += table[i][j];
      col_tot[j] += table[i][j];
      total += table[i][j];
    }
  const double min_row = *std::min_element(row_tot.begin(), row_tot.end());
  if (!(min_row > 0.0)) return r;

  // Column groups: smallest expected count in a group is min_row * group_total / total.
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> current;
  double acc = 0.0;
  for (std::size_t j = 0; j < cols; ++j) {
    if (col_tot[j] == 0.0) continue;
    current.push_back(j);
    acc += col_tot[j];
    if (min_row * acc / total >= min_expected) {
      groups.push_back(std::move(current));
      current.clear();
      acc = 0.0;
    }
  }
  if (!current.empty()) {
    if (groups.empty()) groups.push_back(std::move(current));
    else groups.back().insert(groups.back().end(), current.begin(), current.end());
  }
  r.cells = groups.size();
  if (groups.size() < 2) return r;

  for (const auto& g : groups) {
    double gtot = 0.0;
    for (auto j : g) gtot += col_tot[j];
    for (std::size_t i = 0; i < rows; ++i) {
      double o = 0.0;
      for (auto j : g) o += table[i][j];
      const double e = row_tot[i] * gtot / total;
      r.statistic += (o - e) * (o - e) / e;
    }
  }
  r.dof = static_cast<double>((rows - 1) * (groups.size() - 1));
  r.p_value = chi_square_p(r.statistic, r.dof);
  return r;
}

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

inline MeanEstimate mean_and_se(std::span<const double> xs) {
  MeanEstimate m;
  m.n = xs.size();
  if (xs.empty()) return m;
  // Welford
  double mean = 0.0, m2 = 0.0;
  std::size_t k = 0;
  for (double x : xs) {
    ++k;
    const double d = x - mean;
    mean += d / static_cast<double>(k);
    m2 += d * (x - mean);
  }
  m.mean = mean;
  if (k > 1) m.std_error = std::sqrt(m2 / static_cast<double>(k - 1) / static_cast<double>(k));
  return m;
}

}  // namespace mrp::stats
