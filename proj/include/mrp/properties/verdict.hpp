#pragma once

// Composite verdict: under regularity, the multinomial property, the Markov
// property and being mixed Poisson must agree. Without regularity only the
// unconditional implications MPP => multinomial => Markov are enforced.

#include <optional>
#include <string>
#include <vector>

#include "mrp/error.hpp"
#include "mrp/model.hpp"
#include "mrp/properties/markov.hpp"
#include "mrp/properties/mpp.hpp"
#include "mrp/properties/multinomial.hpp"
#include "mrp/properties/regularity.hpp"
#include "mrp/report.hpp"

namespace mrp {

struct VerdictConfig {
  std::size_t n_paths = 200000;
  double horizon = 4.0;
  std::uint64_t seed = 7;
  double alpha = 0.01;
  double mpp_tol = 1e-9;
  std::vector<double> multinomial_times{1.0, 2.0};
  std::vector<double> markov_times{1.0, 2.0, 3.0};
  unsigned workers = 1;
};

struct VerdictReport {
  RegularityReport regularity;
  std::optional<MppReport> mpp;
  std::string mpp_error;
  TestReport multinomial;
  TestReport markov;
  bool licensed = false;
  bool mpp_holds = false;
  bool multinomial_holds = false;
  bool markov_holds = false;
  std::string verdict;
  std::vector<std::string> anomalies;

  bool anomaly() const noexcept { return !anomalies.empty(); }

  TestReport to_report(const VerdictConfig& cfg, const MrpModel& model) const {
    TestReport r;
    r.test = "theorem_verdict";
    r.inputs["model"] = model.to_json();
    r.inputs["n_paths"] = cfg.n_paths;
    r.inputs["horizon"] = cfg.horizon;
    r.inputs["alpha"] = cfg.alpha;
    r.inputs["mpp_tol"] = cfg.mpp_tol;
    r.inputs["multinomial_times"] = cfg.multinomial_times;
    r.inputs["markov_times"] = cfg.markov_times;
    r.alpha = cfg.alpha;
    r.seed = cfg.seed;
    r.decision = verdict;
    r.add("regular", licensed ? 1.0 : 0.0);
    r.add("mpp", mpp_holds ? 1.0 : 0.0);
    r.add("multinomial", multinomial_holds ? 1.0 : 0.0);
    r.add("markov", markov_holds ? 1.0 : 0.0);
    r.anomalies = anomalies;
    if (!mpp_error.empty()) r.notes.push_back("mpp check: " + mpp_error);
    r.components.push_back(regularity.to_report());
    if (mpp) r.components.push_back(mpp->to_report());
    r.components.push_back(multinomial);
    r.components.push_back(markov);
    return r;
  }
};

namespace detail {
inline const char* yes_no(bool b) { return b ? "yes" : "no"; }
}  // namespace detail

inline VerdictReport theorem_verdict(const MrpModel& model, const VerdictConfig& cfg) {
  VerdictReport v;
  const auto t_grid = default_t_grid(cfg.horizon);
  v.regularity = regularity_check(model, quantile_grid(model.mixing), t_grid);
  v.licensed = v.regularity.pass;

  try {
    v.mpp = mpp_check(model, t_grid, cfg.mpp_tol);
    v.mpp_holds = v.mpp->mixed_poisson;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::RegularityViolation) throw;
    v.mpp_error = e.what();
    v.mpp_holds = false;
  }

  const auto ens = sample_ensemble(model, cfg.n_paths, cfg.horizon, cfg.seed, cfg.workers);
  MultinomialOptions mo;
  mo.alpha = cfg.alpha;
  v.multinomial = multinomial_test(ens, cfg.multinomial_times, mo);
  v.multinomial_holds = !rejected(v.multinomial);
  MarkovOptions ko;
  ko.alpha = cfg.alpha;
  v.markov = markov_test(ens, cfg.markov_times, ko);
  v.markov_holds = !rejected(v.markov);

  const std::string summary = std::string("Markov=") + detail::yes_no(v.markov_holds) +
                              ", MPP=" + detail::yes_no(v.mpp_holds) +
                              ", multinomial=" + detail::yes_no(v.multinomial_holds);
  if (v.licensed) {
    if (v.mpp_holds == v.multinomial_holds && v.multinomial_holds == v.markov_holds) {
      v.verdict = v.mpp_holds ? "equivalent, all positive" : "equivalent, all negative";
    } else {
      v.verdict = "theorem-violation anomaly";
      v.anomalies.push_back("regular model but the three properties disagree: " + summary);
    }
  } else {
    v.verdict = "equivalence not licensed: regularity failed; " + summary;
    if (v.mpp_holds && !v.multinomial_holds)
      v.anomalies.push_back("mixed Poisson but the multinomial property was rejected");
    if (v.multinomial_holds && !v.markov_holds)
      v.anomalies.push_back("multinomial property holds but the Markov property was rejected");
  }
  return v;
}

}  // namespace mrp
