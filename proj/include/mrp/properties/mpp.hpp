#pragma once

// Mixed-Poisson check: K(h(theta)) is exponential with rate p(h(theta))
// exactly when G_lambda(t) = exp(-p(lambda) t) for all t.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "mrp/error.hpp"
#include "mrp/model.hpp"
#include "mrp/report.hpp"

namespace mrp {

/// 50 log-spaced points in [1e-4 T, T/100) followed by 400 equal steps from T/100 to T.
inline std::vector<double> default_t_grid(double horizon) {
  if (!(horizon > 0.0)) throw Error(ErrorKind::InvalidInput, "t-grid needs a positive horizon");
  std::vector<double> grid;
  const double lo = 1e-4 * horizon, hi = horizon / 100.0;
  for (int i = 0; i < 50; ++i) grid.push_back(lo * std::pow(hi / lo, i / 50.0));
  for (int i = 0; i <= 400; ++i) grid.push_back(hi + (horizon - hi) * i / 400.0);
  return grid;
}

/// Mixing quantiles at k / (count + 1), duplicates removed (a Dirac law gives one point).
inline std::vector<double> quantile_grid(const MixingLaw& law, int count = 99) {
  std::vector<double> grid;
  for (int k = 1; k <= count; ++k) grid.push_back(law.quantile(static_cast<double>(k) / (count + 1)));
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

struct MppReport {
  std::vector<double> thetas;
  std::vector<double> lambdas;
  std::vector<double> hazards;
  std::vector<double> distances;  // d(theta) = max_t |G_lambda(t) - exp(-p t)|
  double max_distance = 0.0;
  double tol = 0.0;
  bool mixed_poisson = false;
  std::string rate_variable;  // description of Theta^ = p(h(Theta)) when mixed Poisson

  TestReport to_report() const {
    TestReport r;
    r.test = "mpp";
    r.inputs["tol"] = tol;
    r.inputs["theta_points"] = thetas.size();
    r.statistic = max_distance;
    r.decision = mixed_poisson ? "MPP" : "not-MPP";
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      std::ostringstream os;
      os.precision(6);
      os << "d[theta=" << thetas[i] << "]";
      r.add(os.str(), distances[i]);
    }
    if (mixed_poisson) r.notes.push_back("rate variable: " + rate_variable);
    return r;
  }
};

namespace detail {

inline std::string number(double x) {
  std::ostringstream os;
  os.precision(15);
  os << x;
  return os.str();
}

inline std::string map_expression(const ParameterMap& h) {
  switch (h.form()) {
    case MapForm::Identity: return "Theta";
    case MapForm::Affine: return number(h.slope()) + "*Theta+" + number(h.intercept());
    case MapForm::Reciprocal: return "1/Theta";
  }
  return "h(Theta)";
}

inline std::string hazard_expression(KernelFamily f, const std::string& arg) {
  switch (f) {
    case KernelFamily::Exponential:
    case KernelFamily::ParetoUnitShape: return arg;
    case KernelFamily::GenGammaHalf: return "1/(2*(" + arg + "))";
    case KernelFamily::DeterministicUnit: break;
  }
  return "p(" + arg + ")";
}

}  // namespace detail

/// Evaluates d(theta) on a quantile grid of the mixing law and declares the
/// process mixed Poisson when max d <= tol.
inline MppReport mpp_check(const MrpModel& model, const std::vector<double>& t_grid, double tol,
                           int quantiles = 99) {
  if (t_grid.empty()) throw Error(ErrorKind::InvalidInput, "mpp check needs a nonempty t-grid");
  if (!model.kernel.has_density())
    throw Error(ErrorKind::RegularityViolation, model.kernel.name() + " kernel has no hazard at zero");
  MppReport r;
  r.tol = tol;
  r.thetas = quantile_grid(model.mixing, quantiles);
  for (double theta : r.thetas) {
    const double lambda = model.parameter(theta);
    const double p = model.kernel.hazard_at_zero(lambda);
    double d = 0.0;
    for (double t : t_grid) d = std::max(d, std::abs(model.kernel.survival(lambda, t) - std::exp(-p * t)));
    r.lambdas.push_back(lambda);
    r.hazards.push_back(p);
    r.distances.push_back(d);
    r.max_distance = std::max(r.max_distance, d);
  }
  r.mixed_poisson = r.max_distance <= tol;
  r.rate_variable = "Theta^ = " + detail::hazard_expression(model.kernel.family, detail::map_expression(model.map));
  return r;
}

}  // namespace mrp
