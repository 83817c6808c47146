#pragma once

// Expectations over a mixing law by adaptive Gauss-Kronrod quadrature.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <functional>
#include <string>

#include "mrp/error.hpp"
#include "mrp/mixing.hpp"

namespace mrp {

struct QuadratureOptions {
  double abs_tol = 1e-9;
  double rel_tol = 1e-10;
  // Unbounded supports are truncated at these quantile levels.
  double tail_mass = 1e-8;
  unsigned max_depth = 18;
};

struct Integral {
  double value = 0.0;
  double error = 0.0;
};

namespace detail {

template <class F>
Integral integrate_interval(F&& f, double a, double b, const QuadratureOptions& opt) {
  double err = 0.0, l1 = 0.0;
  double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, opt.max_depth, opt.rel_tol,
                                                                            &err, &l1);
  if (!std::isfinite(v) || err > std::max(opt.abs_tol, 1e-7 * l1))
    throw Error(ErrorKind::Numeric, "quadrature on [" + std::to_string(a) + ", " + std::to_string(b) +
                                        "] did not converge: estimate " + std::to_string(v) + ", error " +
                                        std::to_string(err));
  return {v, err};
}

}  // namespace detail

/// E[f(Theta)] for Theta ~ law.
inline Integral expect(const MixingLaw& law, const std::function<double(double)>& f,
                       const QuadratureOptions& opt = {}) {
  return std::visit(
      [&](const auto& l) -> Integral {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, mixing::Gamma>) {
          const double lo = 0.0;
          const double hi = boost::math::gamma_q_inv(l.shape, opt.tail_mass) / l.rate;
          auto integrand = [&](double theta) {
            return l.rate * boost::math::gamma_p_derivative(l.shape, l.rate * theta) * f(theta);
          };
          return detail::integrate_interval(integrand, lo, hi, opt);
        } else if constexpr (std::is_same_v<T, mixing::Uniform>) {
          const double w = 1.0 / (l.hi - l.lo);
          auto integrand = [&](double theta) { return w * f(theta); };
          return detail::integrate_interval(integrand, l.lo, l.hi, opt);
        } else if constexpr (std::is_same_v<T, mixing::Dirac>) {
          return {f(l.at), 0.0};
        } else {
          return expect(*l.base, [&](double theta) { return f(l.map.apply(theta)); }, opt);
        }
      },
      law.variant());
}

}  // namespace mrp
