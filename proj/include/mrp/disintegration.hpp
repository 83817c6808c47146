#pragma once

// Monte Carlo witnesses for the disintegration {P_theta}: consistency of the
// reparameterized family, and equality of the per-theta interarrival laws.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "mrp/error.hpp"
#include "mrp/model.hpp"
#include "mrp/path.hpp"
#include "mrp/stats.hpp"

namespace mrp {

/// A finite conjunction of count conditions N_t - N_s = k (s = 0 means N_t = k).
class EventPredicate {
 public:
  struct Atom {
    double s = 0.0;
    double t = 0.0;
    long k = 0;
  };

  EventPredicate() = default;
  explicit EventPredicate(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    for (const auto& a : atoms_)
      if (!(a.t > 0.0) || !(a.s >= 0.0) || !(a.s < a.t) || a.k < 0)
        throw Error(ErrorKind::InvalidInput, "event atoms need 0 <= s < t and k >= 0");
  }

  static EventPredicate count_equals(double t, long k) { return EventPredicate({{0.0, t, k}}); }

  EventPredicate operator&&(const EventPredicate& other) const {
    auto atoms = atoms_;
    atoms.insert(atoms.end(), other.atoms_.begin(), other.atoms_.end());
    return EventPredicate(std::move(atoms));
  }

  /// Parses "N(1)=0&N(2)-N(1)=1".
  static EventPredicate parse(const std::string& text) {
    std::vector<Atom> atoms;
    std::istringstream is(text);
    std::string part;
    while (std::getline(is, part, '&')) {
      part.erase(std::remove_if(part.begin(), part.end(), ::isspace), part.end());
      if (part.empty()) continue;
      Atom a;
      const auto eq = part.find('=');
      if (eq == std::string::npos) throw Error(ErrorKind::InvalidInput, "event atom without '=': " + part);
      const std::string lhs = part.substr(0, eq);
      const std::string rhs = part.substr(eq + 1);
      if (rhs.empty() || rhs.find_first_not_of("0123456789") != std::string::npos)
        throw Error(ErrorKind::InvalidInput, "event count must be a nonnegative integer: " + part);
      a.k = std::stol(rhs);
      auto read_time = [&](const std::string& s) {
        if (s.size() < 4 || s.rfind("N(", 0) != 0 || s.back() != ')')
          throw Error(ErrorKind::InvalidInput, "expected N(t) in event atom: " + part);
        return detail::parse_real(s.substr(2, s.size() - 3));
      };
      const auto minus = lhs.find(")-");
      if (minus == std::string::npos) {
        a.t = read_time(lhs);
      } else {
        a.t = read_time(lhs.substr(0, minus + 1));
        a.s = read_time(lhs.substr(minus + 2));
      }
      atoms.push_back(a);
    }
    if (atoms.empty()) throw Error(ErrorKind::InvalidInput, "empty event");
    return EventPredicate(std::move(atoms));
  }

  bool operator()(const ArrivalPath& path) const {
    for (const auto& a : atoms_) {
      const long base = a.s > 0.0 ? count_at(path, a.s) : 0;
      if (count_at(path, a.t) - base != a.k) return false;
    }
    return true;
  }

  double max_time() const {
    double m = 0.0;
    for (const auto& a : atoms_) m = std::max(m, a.t);
    return m;
  }

  std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (i) os << '&';
      os << "N(" << atoms_[i].t << ')';
      if (atoms_[i].s > 0.0) os << "-N(" << atoms_[i].s << ')';
      os << '=' << atoms_[i].k;
    }
    return os.str();
  }

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }

 private:
  std::vector<Atom> atoms_;
};

struct ConsistencyReport {
  std::string event;
  ClosedInterval interval;
  double conditional_side = 0.0;  // integral over B of Q_theta~(A) P_Theta~(d theta~)
  double conditional_se = 0.0;
  double joint_side = 0.0;        // P(A and Theta~ in B)
  double joint_se = 0.0;
  double mass = 0.0;              // P(Theta~ in B), joint draws
  double z = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

/// Estimates both sides of  int_B Q_{theta~}(A) P_{Theta~}(d theta~) = P(A and h(Theta) in B).
///
/// The left side draws theta~ from the push-forward law and simulates the
/// reparameterized renewal process at theta~; the right side simulates the
/// original model jointly. The two sides use independent streams.
inline ConsistencyReport check_consistency(const MrpModel& model, const EventPredicate& event, ClosedInterval b,
                                           std::size_t n, std::uint64_t seed, unsigned workers = 1) {
  if (n < 2) throw Error(ErrorKind::InvalidInput, "consistency check needs n >= 2");
  const MrpModel tilde = reparameterize(model);
  const double horizon = event.max_time();

  std::vector<double> cond(n), joint(n), in_b(n);
  parallel_for(n, workers, [&](std::size_t i) {
    RandomStream rc(seed, i, kConsistencyConditionalStream);
    const double theta_tilde = tilde.mixing.sample(rc);
    if (b.contains(theta_tilde)) {
      const auto path = sample_path_at(tilde.kernel, tilde.parameter(theta_tilde), {theta_tilde}, horizon, rc);
      cond[i] = event(path) ? 1.0 : 0.0;
    }
    RandomStream rj(seed, i, kConsistencyJointStream);
    const double theta = model.mixing.sample(rj);
    const double lambda = model.parameter(theta);
    const auto path = sample_path_at(model.kernel, lambda, {theta}, horizon, rj);
    in_b[i] = b.contains(lambda) ? 1.0 : 0.0;
    joint[i] = (in_b[i] > 0.0 && event(path)) ? 1.0 : 0.0;
  });

  ConsistencyReport r;
  r.event = event.describe();
  r.interval = b;
  r.n = n;
  r.seed = seed;
  const auto mass = stats::mean_and_se(in_b);
  r.mass = mass.mean;
  if (r.mass < 10.0 / static_cast<double>(n))
    throw Error(ErrorKind::InsufficientMass, "estimated P(Theta~ in B) = " + std::to_string(r.mass) +
                                                 " is below 10/n");
  const auto c = stats::mean_and_se(cond);
  const auto j = stats::mean_and_se(joint);
  r.conditional_side = c.mean;
  r.conditional_se = c.std_error;
  r.joint_side = j.mean;
  r.joint_se = j.std_error;
  const double se = std::hypot(c.std_error, j.std_error);
  r.z = se > 0.0 ? (c.mean - j.mean) / se : 0.0;
  return r;
}

struct KernelEqualityReport {
  std::size_t n_theta = 0;  // distinct parameter draws actually checked
  std::size_t n_per_theta = 0;
  double alpha = 0.01;
  double critical_distance = 0.0;  // Kolmogorov critical value / sqrt(n_per_theta)
  double max_distance = 0.0;
  double exceed_fraction = 0.0;
  std::vector<double> thetas;
  std::vector<double> distances;
  std::uint64_t seed = 0;
};

/// For n_theta draws of Theta, simulates n_per_theta interarrivals from the
/// conditional simulator at theta and measures the exact KS distance to
/// K(h(theta)). `sample_shift` perturbs the sampling parameter only; it
/// exists to measure the power of the check.
inline KernelEqualityReport kernel_equality_check(const MrpModel& model, std::size_t n_theta,
                                                  std::size_t n_per_theta, std::uint64_t seed,
                                                  double alpha = 0.01, double sample_shift = 0.0,
                                                  unsigned workers = 1) {
  if (n_theta < 1 || n_per_theta < 1) throw Error(ErrorKind::InvalidInput, "kernel check needs positive sizes");
  if (model.mixing.is_dirac()) n_theta = 1;
  KernelEqualityReport r;
  r.n_theta = n_theta;
  r.n_per_theta = n_per_theta;
  r.alpha = alpha;
  r.seed = seed;
  r.critical_distance = stats::kolmogorov_critical(alpha) / std::sqrt(static_cast<double>(n_per_theta));
  r.thetas.resize(n_theta);
  r.distances.resize(n_theta);
  parallel_for(n_theta, workers, [&](std::size_t j) {
    RandomStream rng(seed, j, kKernelEqualityStream);
    const double theta = model.mixing.sample(rng);
    const double lambda = model.parameter(theta);
    std::vector<double> draws(n_per_theta);
    for (auto& w : draws) w = model.kernel.sample(lambda + sample_shift, rng);
    r.thetas[j] = theta;
    r.distances[j] = stats::ks_distance(stats::EmpiricalSample(std::move(draws)),
                                        [&](double t) { return model.kernel.cdf(lambda, t); });
  });
  std::size_t exceed = 0;
  for (double d : r.distances) {
    r.max_distance = std::max(r.max_distance, d);
    if (d > r.critical_distance) ++exceed;
  }
  r.exceed_fraction = static_cast<double>(exceed) / static_cast<double>(n_theta);
  return r;
}

}  // namespace mrp
