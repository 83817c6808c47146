#pragma once

// Integral identities that every regular Markov mixed renewal process
// satisfies. With G = G_{h(theta)}, p = p(h(theta)) and expectations over the
// mixing law, for all t, v > 0:
//   ratio:   E[-G(t+v) p] / E[G(v) G'(t)] = E[-G(t) p] / E[G'(t)] = 1
//   shift:   E[G(t+v) p^2] = E[-G(v) G'(t) p]
//   product: E[G(t) G(v) p^2] = E[-G(v) G'(t) p]
//   square:  E[(G'(t) + p G(t))^2] = 0
// All four hold pointwise in theta when G is exponential with rate p.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "mrp/error.hpp"
#include "mrp/model.hpp"
#include "mrp/properties/mpp.hpp"
#include "mrp/quadrature.hpp"
#include "mrp/report.hpp"

namespace mrp {

struct IdentityPoint {
  double t = 0.0;
  double v = 0.0;
  double ratio = 0.0;    // max |ratio - 1| over both ratios
  double shift = 0.0;    // |lhs - rhs|
  double product = 0.0;
  double square = 0.0;   // E[(G'(t) + p G(t))^2], signed
};

struct IdentityReport {
  std::vector<IdentityPoint> points;
  double max_ratio = 0.0;
  double max_shift = 0.0;
  double max_product = 0.0;
  double max_square = 0.0;
  double quad_tol = 0.0;

  TestReport to_report() const {
    TestReport r;
    r.test = "identities";
    r.inputs["quad_tol"] = quad_tol;
    r.inputs["grid_points"] = points.size();
    r.add("max_residual_ratio", max_ratio);
    r.add("max_residual_shift", max_shift);
    r.add("max_residual_product", max_product);
    r.add("max_residual_square", max_square);
    for (const auto& p : points)
      r.add("square[t=" + detail::number(p.t) + ",v=" + detail::number(p.v) + "]", p.square);
    r.statistic = std::max({max_ratio, max_shift, max_product, max_square});
    r.decision = *r.statistic <= 1e3 * quad_tol ? "identities-hold" : "identities-fail";
    return r;
  }
};

inline std::vector<std::pair<double, double>> default_identity_grid() {
  std::vector<std::pair<double, double>> grid;
  for (double t : {0.25, 0.5, 1.0, 1.5, 2.0})
    for (double v : {0.25, 0.5, 1.0, 2.0}) grid.emplace_back(t, v);
  return grid;
}

/// Evaluates the four residuals by adaptive quadrature over the mixing law.
inline IdentityReport integral_identities_check(const MrpModel& model,
                                             const std::vector<std::pair<double, double>>& grid,
                                             double quad_tol = 1e-9) {
  if (!model.kernel.has_density())
    throw Error(ErrorKind::RegularityViolation, model.kernel.name() + " kernel has no density");
  if (grid.empty()) throw Error(ErrorKind::InvalidInput, "identity grid must be nonempty");
  QuadratureOptions qopt;
  qopt.abs_tol = quad_tol;
  const auto& k = model.kernel;
  auto E = [&](auto&& g_of_lambda) {
    return expect(model.mixing, [&](double theta) { return g_of_lambda(model.parameter(theta)); }, qopt).value;
  };

  IdentityReport rep;
  rep.quad_tol = quad_tol;
  for (auto [t, v] : grid) {
    if (!(t > 0.0) || !(v > 0.0)) throw Error(ErrorKind::InvalidInput, "identity grid needs t, v > 0");
    IdentityPoint pt;
    pt.t = t;
    pt.v = v;
    const double num1 = E([&](double l) { return -k.survival(l, t + v) * k.hazard_at_zero(l); });
    const double den1 = E([&](double l) { return k.survival(l, v) * k.survival_derivative(l, t); });
    const double num2 = E([&](double l) { return -k.survival(l, t) * k.hazard_at_zero(l); });
    const double den2 = E([&](double l) { return k.survival_derivative(l, t); });
    pt.ratio = std::max(std::abs(num1 / den1 - 1.0), std::abs(num2 / den2 - 1.0));

    const double cross = E([&](double l) {
      return -k.survival(l, v) * k.survival_derivative(l, t) * k.hazard_at_zero(l);
    });
    const double e_lhs = E([&](double l) {
      const double p = k.hazard_at_zero(l);
      return k.survival(l, t + v) * p * p;
    });
    const double f_lhs = E([&](double l) {
      const double p = k.hazard_at_zero(l);
      return k.survival(l, t) * k.survival(l, v) * p * p;
    });
    pt.shift = std::abs(e_lhs - cross);
    pt.product = std::abs(f_lhs - cross);
    pt.square = E([&](double l) {
      const double r = k.survival_derivative(l, t) + k.hazard_at_zero(l) * k.survival(l, t);
      return r * r;
    });
    if (pt.square < -quad_tol)
      throw Error(ErrorKind::Numeric, "square identity residual " + std::to_string(pt.square) + " is below -quad_tol");
    rep.max_ratio = std::max(rep.max_ratio, pt.ratio);
    rep.max_shift = std::max(rep.max_shift, pt.shift);
    rep.max_product = std::max(rep.max_product, pt.product);
    rep.max_square = std::max(rep.max_square, pt.square);
    rep.points.push_back(pt);
  }
  return rep;
}

}  // namespace mrp
