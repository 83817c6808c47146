#pragma once

// Interarrival kernel families K(lambda): cdf, density, survival, sampler and
// the hazard at zero p(lambda) = lim_{t->0} F'_lambda(t).

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "mrp/error.hpp"
#include "mrp/random.hpp"

namespace mrp {

enum class KernelFamily {
  Exponential,        // F(t) = 1 - exp(-lambda t)
  ParetoUnitShape,    // F(t) = 1 - 1/(1 + lambda t), Lomax with shape 1 and scale 1/lambda
  GenGammaHalf,       // F(t) = 1 - (1 + sqrt(t/lambda)) exp(-sqrt(t/lambda))
  DeterministicUnit,  // point mass at 1, no density
};

inline std::string_view to_string(KernelFamily f) {
  switch (f) {
    case KernelFamily::Exponential: return "exp";
    case KernelFamily::ParetoUnitShape: return "pareto";
    case KernelFamily::GenGammaHalf: return "gengamma";
    case KernelFamily::DeterministicUnit: return "deterministic";
  }
  return "?";
}

inline KernelFamily kernel_family_from_string(std::string_view s) {
  if (s == "exp" || s == "exponential") return KernelFamily::Exponential;
  if (s == "pareto") return KernelFamily::ParetoUnitShape;
  if (s == "gengamma" || s == "gengamma-half") return KernelFamily::GenGammaHalf;
  if (s == "deterministic" || s == "unit") return KernelFamily::DeterministicUnit;
  throw Error(ErrorKind::InvalidInput, "unknown kernel family '" + std::string(s) + "'");
}

namespace detail {

// S(x) = (1 + x) e^{-x}, the GenGammaHalf survival in the variable x = sqrt(t/lambda).
inline double gengamma_survival(double x) { return (1.0 + x) * std::exp(-x); }

// 1 - (1 + x) e^{-x} without cancellation for small x.
inline double gengamma_cdf(double x) {
  if (x < 0.5) {
    // sum_{k>=2} (-1)^k (k-1) x^k / k!
    double term = x * x / 2.0;  // x^k / k! at k = 2
    double sum = 0.0;
    for (int k = 2; k < 30; ++k) {
      double add = (k % 2 == 0 ? 1.0 : -1.0) * (k - 1) * term;
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
      term *= x / (k + 1);
    }
    return sum;
  }
  return 1.0 - gengamma_survival(x);
}

}  // namespace detail

/// An interarrival-kernel family. Value type; all members are const and pure.
struct InterarrivalKernel {
  KernelFamily family = KernelFamily::Exponential;

  static constexpr double kGenGammaBracket = 50.0;
  static constexpr double kRootTolerance = 1e-12;
  static constexpr double kHazardStep = 1e-7;

  std::string name() const { return std::string(to_string(family)); }
  bool has_density() const noexcept { return family != KernelFamily::DeterministicUnit; }

  void check_parameter(double lambda) const {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
      throw Error(ErrorKind::Parameter, name() + " kernel needs a finite positive parameter, got " + std::to_string(lambda));
  }

  double cdf(double lambda, double t) const {
    check_parameter(lambda);
    if (t <= 0.0) return 0.0;
    switch (family) {
      case KernelFamily::Exponential: return -std::expm1(-lambda * t);
      case KernelFamily::ParetoUnitShape: return lambda * t / (1.0 + lambda * t);
      case KernelFamily::GenGammaHalf: return detail::gengamma_cdf(std::sqrt(t / lambda));
      case KernelFamily::DeterministicUnit: return t < 1.0 ? 0.0 : 1.0;
    }
    return 0.0;
  }

  /// G(t) = 1 - F(t).
  double survival(double lambda, double t) const {
    check_parameter(lambda);
    if (t <= 0.0) return 1.0;
    switch (family) {
      case KernelFamily::Exponential: return std::exp(-lambda * t);
      case KernelFamily::ParetoUnitShape: return 1.0 / (1.0 + lambda * t);
      case KernelFamily::GenGammaHalf: return detail::gengamma_survival(std::sqrt(t / lambda));
      case KernelFamily::DeterministicUnit: return t < 1.0 ? 1.0 : 0.0;
    }
    return 1.0;
  }

  double pdf(double lambda, double t) const {
    check_parameter(lambda);
    if (!has_density()) throw Error(ErrorKind::NoDensity, "deterministic unit kernel has no density");
    if (!(t > 0.0)) throw Error(ErrorKind::InvalidInput, "density is evaluated on (0, inf)");
    switch (family) {
      case KernelFamily::Exponential: return lambda * std::exp(-lambda * t);
      case KernelFamily::ParetoUnitShape: {
        double d = 1.0 + lambda * t;
        return lambda / (d * d);
      }
      case KernelFamily::GenGammaHalf: return std::exp(-std::sqrt(t / lambda)) / (2.0 * lambda);
      case KernelFamily::DeterministicUnit: break;
    }
    return 0.0;
  }

  /// G'(t) = -f(t).
  double survival_derivative(double lambda, double t) const { return -pdf(lambda, t); }

  /// Inverse cdf on (0, 1).
  double quantile(double lambda, double u) const {
    check_parameter(lambda);
    if (!(u > 0.0 && u < 1.0)) throw Error(ErrorKind::InvalidInput, "quantile level must lie in (0, 1)");
    switch (family) {
      case KernelFamily::Exponential: return -std::log1p(-u) / lambda;
      case KernelFamily::ParetoUnitShape: return u / ((1.0 - u) * lambda);
      case KernelFamily::GenGammaHalf: {
        // Solve (1 + x) e^{-x} = 1 - u on [0, 50]; then t = lambda x^2.
        const double target = 1.0 - u;
        auto f = [target](double x) { return detail::gengamma_survival(x) - target; };
        auto tol = [](double a, double b) { return std::abs(b - a) <= kRootTolerance; };
        std::uintmax_t iters = 200;
        auto [lo, hi] = boost::math::tools::toms748_solve(f, 0.0, kGenGammaBracket, f(0.0),
                                                          f(kGenGammaBracket), tol, iters);
        double x = 0.5 * (lo + hi);
        return lambda * x * x;
      }
      case KernelFamily::DeterministicUnit: return 1.0;
    }
    return 0.0;
  }

  double sample(double lambda, RandomStream& rng) const {
    if (family == KernelFamily::DeterministicUnit) {
      check_parameter(lambda);
      return 1.0;
    }
    return quantile(lambda, rng.uniform());
  }

  /// p(lambda) = lim_{t->0} f_lambda(t), from the closed form.
  double hazard_at_zero(double lambda) const {
    check_parameter(lambda);
    switch (family) {
      case KernelFamily::Exponential: return lambda;
      case KernelFamily::ParetoUnitShape: return lambda;
      case KernelFamily::GenGammaHalf: return 1.0 / (2.0 * lambda);
      case KernelFamily::DeterministicUnit: break;
    }
    throw Error(ErrorKind::RegularityViolation, "deterministic unit kernel has no density at 0+");
  }

  /// Forward differences g(h) = F(h)/h at h = 1e-7 and h/4, combined as
  /// 2 g(h/4) - g(h), which cancels a sqrt(h) term in g and leaves O(h).
  double hazard_at_zero_numeric(double lambda) const {
    check_parameter(lambda);
    if (!has_density())
      throw Error(ErrorKind::RegularityViolation, "deterministic unit kernel has no density at 0+");
    const double h = kHazardStep;
    const double coarse = cdf(lambda, h) / h;
    const double fine = cdf(lambda, h / 4) / (h / 4);
    return 2.0 * fine - coarse;
  }

  /// C(lambda) = sup_{t>0} f_lambda(t). Every density here is decreasing, so
  /// the supremum is the limit at 0+.
  double dominating_bound(double lambda) const { return hazard_at_zero(lambda); }
};

}  // namespace mrp
