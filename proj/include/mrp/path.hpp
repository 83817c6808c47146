#pragma once

// Counting-process paths: arrival times, interarrival times and counts.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "mrp/error.hpp"

namespace mrp {

/// One realization of a counting process on [0, horizon].
///
/// T_0 = 0 is implicit. Every stored arrival is <= horizon and the first
/// arrival that is not stored lies strictly beyond the horizon, so counts are
/// exact everywhere on [0, horizon].
struct ArrivalPath {
  std::vector<double> theta;
  std::vector<double> arrivals;
  double horizon = 0.0;

  std::size_t size() const noexcept { return arrivals.size(); }
  bool operator==(const ArrivalPath&) const = default;
};

/// Partition 0 = t_0 < t_1 < ... < t_m with increment counts kappa_1..kappa_m.
struct PartitionQuery {
  std::vector<double> times;
  std::vector<long> counts;

  PartitionQuery() = default;
  PartitionQuery(std::vector<double> t, std::vector<long> k) : times(std::move(t)), counts(std::move(k)) {
    validate();
  }

  std::size_t cells() const noexcept { return times.size(); }

  long total() const noexcept {
    long n = 0;
    for (long k : counts) n += k;
    return n;
  }

  void validate() const {
    if (times.empty()) throw Error(ErrorKind::InvalidInput, "partition needs at least one time");
    if (!counts.empty() && counts.size() != times.size())
      throw Error(ErrorKind::InvalidInput, "partition times and counts differ in length");
    double prev = 0.0;
    for (double t : times) {
      if (!(t > prev)) throw Error(ErrorKind::InvalidInput, "partition times must be positive and strictly increasing");
      prev = t;
    }
    for (long k : counts)
      if (k < 0) throw Error(ErrorKind::InvalidInput, "partition counts must be nonnegative");
  }
};

inline void validate_times(std::span<const double> times) {
  double prev = 0.0;
  for (double t : times) {
    if (!(t > prev)) throw Error(ErrorKind::InvalidInput, "query times must be positive and strictly increasing");
    prev = t;
  }
}

/// Builds the path whose arrivals are the partial sums of `interarrivals`,
/// truncated at `horizon`.
///
/// The supplied interarrivals must reach the horizon: once the running sum is
/// >= horizon, every later arrival is known to exceed it.
inline ArrivalPath build_path(std::vector<double> theta, std::span<const double> interarrivals, double horizon) {
  if (!(horizon >= 0.0) || !std::isfinite(horizon))
    throw Error(ErrorKind::InvalidInput, "horizon must be finite and nonnegative");
  ArrivalPath path{std::move(theta), {}, horizon};
  double sum = 0.0;
  for (double w : interarrivals) {
    if (!(w > 0.0)) throw Error(ErrorKind::InvalidInput, "interarrival times must be positive");
    sum += w;
    if (sum > horizon) return path;
    path.arrivals.push_back(sum);
  }
  if (sum < horizon)
    throw Error(ErrorKind::IncompletePath, "interarrivals end at " + std::to_string(sum) +
                                               " before horizon " + std::to_string(horizon));
  return path;
}

/// N_t = #{n : T_n <= t}.
inline long count_at(const ArrivalPath& path, double t) {
  if (!(t >= 0.0)) throw Error(ErrorKind::InvalidInput, "time must be nonnegative");
  if (t > path.horizon)
    throw Error(ErrorKind::OutOfHorizon, "t=" + std::to_string(t) + " exceeds horizon " + std::to_string(path.horizon));
  auto it = std::upper_bound(path.arrivals.begin(), path.arrivals.end(), t);
  return static_cast<long>(it - path.arrivals.begin());
}

/// T_n for 1 <= n <= number of stored arrivals.
inline double arrival_of(const ArrivalPath& path, long n) {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "arrival index starts at 1");
  if (static_cast<std::size_t>(n) > path.arrivals.size())
    throw Error(ErrorKind::OutOfHorizon, "arrival " + std::to_string(n) + " lies beyond the horizon");
  return path.arrivals[static_cast<std::size_t>(n - 1)];
}

/// [N_{t_1} - N_{t_0}, ..., N_{t_m} - N_{t_{m-1}}] with t_0 = 0.
inline std::vector<long> increments(const ArrivalPath& path, std::span<const double> times) {
  validate_times(times);
  std::vector<long> out;
  out.reserve(times.size());
  long prev = 0;
  for (double t : times) {
    long n = count_at(path, t);
    out.push_back(n - prev);
    prev = n;
  }
  return out;
}

inline std::vector<long> increments(const ArrivalPath& path, const PartitionQuery& query) {
  return increments(path, std::span<const double>(query.times));
}

/// Counts N_{t_1}, ..., N_{t_m}.
inline std::vector<long> counts_at(const ArrivalPath& path, std::span<const double> times) {
  std::vector<long> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(count_at(path, t));
  return out;
}

// Text form:
//   theta=<v1,...,vd> horizon=<h>
//   <T_1>
//   ...
// Values use 17 significant digits, which round-trips doubles exactly.

inline std::string format_real(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

inline void write_path(std::ostream& os, const ArrivalPath& path) {
  os << "theta=";
  for (std::size_t i = 0; i < path.theta.size(); ++i) {
    if (i) os << ',';
    os << format_real(path.theta[i]);
  }
  os << " horizon=" << format_real(path.horizon) << '\n';
  for (double t : path.arrivals) os << format_real(t) << '\n';
}

namespace detail {

inline double parse_real(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidInput, "not a number: '" + s + "'");
  }
  if (used != s.size()) throw Error(ErrorKind::InvalidInput, "not a number: '" + s + "'");
  return v;
}

inline ArrivalPath parse_path_header(const std::string& line) {
  std::istringstream is(line);
  std::string theta_tok, horizon_tok;
  is >> theta_tok >> horizon_tok;
  if (theta_tok.rfind("theta=", 0) != 0 || horizon_tok.rfind("horizon=", 0) != 0)
    throw Error(ErrorKind::InvalidInput, "bad path header: '" + line + "'");
  ArrivalPath path;
  std::string values = theta_tok.substr(6);
  std::istringstream vs(values);
  std::string item;
  while (std::getline(vs, item, ','))
    if (!item.empty()) path.theta.push_back(parse_real(item));
  path.horizon = parse_real(horizon_tok.substr(8));
  return path;
}

inline void check_path(const ArrivalPath& path) {
  double prev = 0.0;
  for (double t : path.arrivals) {
    if (!(t > prev)) throw Error(ErrorKind::InvalidInput, "arrivals must be positive and strictly increasing");
    if (t > path.horizon) throw Error(ErrorKind::InvalidInput, "arrival beyond horizon");
    prev = t;
  }
}

}  // namespace detail

/// Reads every path in the stream. Blank lines are ignored.
inline std::vector<ArrivalPath> read_paths(std::istream& is) {
  std::vector<ArrivalPath> paths;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.rfind("theta=", 0) == 0) {
      if (!paths.empty()) detail::check_path(paths.back());
      paths.push_back(detail::parse_path_header(line));
    } else {
      if (paths.empty()) throw Error(ErrorKind::InvalidInput, "arrival line before any path header");
      paths.back().arrivals.push_back(detail::parse_real(line));
    }
  }
  if (!paths.empty()) detail::check_path(paths.back());
  return paths;
}

}  // namespace mrp
