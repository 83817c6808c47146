// mrp_lab: command-line front end for the mixed renewal process lab.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mrp/mrp.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 2, kData = 3, kNumeric = 4, kAnomaly = 5 };

struct RunConfig {
  std::string model_file;
  std::string preset;
  std::size_t n_paths = 200000;
  std::optional<double> horizon;
  std::uint64_t seed = 7;
  double alpha = 0.01;
  double tol = 1e-9;
  double quad_tol = 1e-9;
  std::string out;
  std::string format = "json";
  std::string plot;
  unsigned workers = 1;
  std::vector<double> times;
  std::string ensemble_file;
  std::string event;
  std::vector<double> interval;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

mrp::ModelConfig resolve_model(const RunConfig& rc) {
  if (!rc.model_file.empty() && !rc.preset.empty()) throw UsageError("--model and --preset are mutually exclusive");
  if (!rc.preset.empty()) {
    if (rc.preset != "a" && rc.preset != "b" && rc.preset != "c" && rc.preset != "deterministic")
      throw UsageError("unknown preset '" + rc.preset + "' (expected a, b, c or deterministic)");
    return mrp::preset(rc.preset);
  }
  if (rc.model_file.empty()) throw UsageError("a model is required: pass --model FILE or --preset NAME");
  std::ifstream in(rc.model_file);
  if (!in) throw mrp::Error(mrp::ErrorKind::InvalidInput, "cannot open model file " + rc.model_file);
  return mrp::parse_model_config(in);
}

double resolve_horizon(const RunConfig& rc, const mrp::ModelConfig& mc, double fallback) {
  const double h = rc.horizon ? *rc.horizon : (mc.horizon ? *mc.horizon : fallback);
  if (!(h > 0.0) || !std::isfinite(h)) throw UsageError("horizon must be positive");
  return h;
}

void check_common(const RunConfig& rc) {
  if (rc.n_paths < 1) throw UsageError("--paths must be at least 1");
  if (!(rc.alpha > 0.0 && rc.alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");
  if (rc.format != "json" && rc.format != "csv") throw UsageError("--format must be json or csv");
}

nlohmann::ordered_json run_inputs(const RunConfig& rc, const std::string& command, const mrp::MrpModel& model,
                                  double horizon) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["model"] = model.to_json();
  if (!rc.preset.empty()) j["preset"] = rc.preset;
  j["n_paths"] = rc.n_paths;
  j["horizon"] = horizon;
  j["seed"] = rc.seed;
  j["alpha"] = rc.alpha;
  j["tol"] = rc.tol;
  j["format"] = rc.format;
  return j;
}

std::string csv_value(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return "";
  return mrp::format_real(*v);
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_csv(std::ostream& os, const mrp::TestReport& r, const std::string& prefix = "") {
  if (prefix.empty()) os << "test,field,value,std_error\n";
  const std::string t = csv_quote(prefix + r.test);
  os << t << ",decision," << csv_quote(r.decision) << ",\n";
  os << t << ",statistic," << csv_value(r.statistic) << ",\n";
  os << t << ",dof," << csv_value(r.dof) << ",\n";
  os << t << ",p_value," << csv_value(r.p_value) << ",\n";
  os << t << ",alpha," << csv_value(r.alpha) << ",\n";
  os << t << ",seed," << r.seed << ",\n";
  for (const auto& e : r.estimates)
    os << t << "," << csv_quote(e.name) << "," << csv_value(e.value) << "," << csv_value(e.std_error) << "\n";
  for (const auto& a : r.anomalies) os << t << ",anomaly," << csv_quote(a) << ",\n";
  for (const auto& c : r.components) write_csv(os, c, prefix + r.test + "/");
}

void emit(const RunConfig& rc, const mrp::TestReport& r) {
  std::ostringstream body;
  if (rc.format == "csv")
    write_csv(body, r);
  else
    body << r.to_json().dump(2) << '\n';
  if (rc.out.empty()) {
    std::cout << body.str();
    return;
  }
  std::ofstream out(rc.out, std::ios::binary);
  if (!out) throw mrp::Error(mrp::ErrorKind::InvalidInput, "cannot write " + rc.out);
  out << body.str();
}

void write_plot(const std::string& file, const std::string& header,
                const std::vector<std::vector<double>>& rows) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw mrp::Error(mrp::ErrorKind::InvalidInput, "cannot write " + file);
  out << header << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << mrp::format_real(row[i]);
    out << '\n';
  }
}

mrp::PathEnsemble obtain_ensemble(const RunConfig& rc, const mrp::MrpModel& model, double horizon) {
  if (!rc.ensemble_file.empty()) {
    std::ifstream in(rc.ensemble_file);
    if (!in) throw mrp::Error(mrp::ErrorKind::InvalidInput, "cannot open ensemble " + rc.ensemble_file);
    return mrp::read_ensemble(in);
  }
  return mrp::sample_ensemble(model, rc.n_paths, horizon, rc.seed, rc.workers);
}

int cmd_simulate(const RunConfig& rc) {
  const auto mc = resolve_model(rc);
  const double horizon = resolve_horizon(rc, mc, 4.0);
  const auto ens = mrp::sample_ensemble(mc.model, rc.n_paths, horizon, rc.seed, rc.workers);
  if (rc.out.empty()) {
    mrp::write_ensemble(std::cout, ens);
  } else {
    std::ofstream out(rc.out, std::ios::binary);
    if (!out) throw mrp::Error(mrp::ErrorKind::InvalidInput, "cannot write " + rc.out);
    mrp::write_ensemble(out, ens);
  }
  return kOk;
}

int cmd_test(const RunConfig& rc, const std::string& which) {
  const auto mc = resolve_model(rc);
  const double horizon = resolve_horizon(rc, mc, 4.0);
  const auto ens = obtain_ensemble(rc, mc.model, horizon);
  mrp::TestReport r;
  if (which == "multinomial") {
    std::vector<double> times = rc.times;
    if (times.empty()) times = mc.multinomial_times.value_or(std::vector<double>{1.0, 2.0});
    mrp::MultinomialOptions opt;
    opt.alpha = rc.alpha;
    r = mrp::multinomial_test(ens, times, opt);
  } else {
    std::vector<double> times = rc.times;
    if (times.empty()) times = mc.markov_times.value_or(std::vector<double>{1.0, 2.0, 3.0});
    mrp::MarkovOptions opt;
    opt.alpha = rc.alpha;
    r = mrp::markov_test(ens, times, opt);
  }
  auto inputs = run_inputs(rc, "test " + which, mc.model, horizon);
  if (!rc.ensemble_file.empty()) inputs["ensemble"] = rc.ensemble_file;
  inputs["tester"] = r.inputs;
  r.inputs = inputs;
  r.seed = rc.seed;
  emit(rc, r);
  return kOk;
}

int cmd_check(const RunConfig& rc, const std::string& which) {
  const auto mc = resolve_model(rc);
  const double horizon = resolve_horizon(rc, mc, 4.0);
  const auto& model = mc.model;
  mrp::TestReport r;
  if (which == "mpp") {
    const auto grid = mrp::default_t_grid(horizon);
    const auto rep = mrp::mpp_check(model, grid, rc.tol);
    r = rep.to_report();
    if (!rc.plot.empty()) {
      const double theta = mrp::quantile_grid(model.mixing, 1).front();
      const double lambda = model.parameter(theta);
      const double p = model.kernel.hazard_at_zero(lambda);
      std::vector<std::vector<double>> rows;
      for (double t : grid) rows.push_back({t, model.kernel.survival(lambda, t), std::exp(-p * t)});
      write_plot(rc.plot, "t,survival,exponential", rows);
    }
  } else if (which == "regularity") {
    const auto rep = mrp::regularity_check(model, mrp::quantile_grid(model.mixing), mrp::default_t_grid(horizon),
                                           100000, rc.seed);
    r = rep.to_report();
  } else if (which == "identities") {
    const auto rep = mrp::integral_identities_check(model, mrp::default_identity_grid(), rc.quad_tol);
    r = rep.to_report();
    if (!rc.plot.empty()) {
      std::vector<std::vector<double>> rows;
      for (const auto& p : rep.points) rows.push_back({p.t, p.v, p.ratio, p.shift, p.product, p.square});
      write_plot(rc.plot, "t,v,ratio,shift,product,square", rows);
    }
  } else {
    if (rc.event.empty()) throw UsageError("check consistency needs --event");
    if (rc.interval.size() != 2) throw UsageError("check consistency needs --interval LO,HI");
    const auto event = mrp::EventPredicate::parse(rc.event);
    const mrp::ClosedInterval b{rc.interval[0], rc.interval[1]};
    const auto rep = mrp::check_consistency(model, event, b, rc.n_paths, rc.seed, rc.workers);
    r.test = "consistency";
    r.inputs["event"] = rep.event;
    r.inputs["interval"] = rc.interval;
    r.add("conditional_side", rep.conditional_side, rep.conditional_se);
    r.add("joint_side", rep.joint_side, rep.joint_se);
    r.add("mass", rep.mass);
    r.statistic = rep.z;
    r.p_value = mrp::stats::normal_two_sided_p(rep.z);
    r.alpha = rc.alpha;
    r.decision = *r.p_value < rc.alpha ? "inconsistent" : "consistent";
  }
  auto inputs = run_inputs(rc, "check " + which, model, horizon);
  inputs["checker"] = r.inputs;
  r.inputs = inputs;
  r.seed = rc.seed;
  emit(rc, r);
  return kOk;
}

int run_verdict(const RunConfig& rc, const mrp::ModelConfig& mc, const std::string& command) {
  mrp::VerdictConfig vc;
  vc.n_paths = rc.n_paths;
  vc.horizon = resolve_horizon(rc, mc, 4.0);
  vc.seed = rc.seed;
  vc.alpha = rc.alpha;
  vc.mpp_tol = rc.tol;
  vc.workers = rc.workers;
  if (mc.multinomial_times) vc.multinomial_times = *mc.multinomial_times;
  if (mc.markov_times) vc.markov_times = *mc.markov_times;
  const auto v = mrp::theorem_verdict(mc.model, vc);
  auto r = v.to_report(vc, mc.model);
  auto inputs = run_inputs(rc, command, mc.model, vc.horizon);
  inputs["multinomial_times"] = vc.multinomial_times;
  inputs["markov_times"] = vc.markov_times;
  r.inputs = inputs;
  emit(rc, r);
  if (v.anomaly()) {
    std::cerr << "anomaly: " << v.verdict << '\n';
    return kAnomaly;
  }
  return kOk;
}

int exit_code_for(mrp::ErrorKind kind) {
  return kind == mrp::ErrorKind::Numeric ? kNumeric : kData;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and verification lab for mixed renewal processes"};
  app.require_subcommand(1);
  RunConfig rc;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--model", rc.model_file, "Model config file")->check(CLI::ExistingFile);
    sub->add_option("--preset", rc.preset, "Example preset: a, b, c or deterministic");
    sub->add_option("--paths", rc.n_paths, "Number of simulated paths");
    sub->add_option("--horizon", rc.horizon, "Simulation horizon");
    sub->add_option("--seed", rc.seed, "Random seed");
    sub->add_option("--alpha", rc.alpha, "Significance level");
    sub->add_option("--tol", rc.tol, "Mixed-Poisson distance tolerance");
    sub->add_option("--quad-tol", rc.quad_tol, "Quadrature tolerance for the identities");
    sub->add_option("--out", rc.out, "Output file (default: stdout)");
    sub->add_option("--format", rc.format, "Report format: json or csv");
    sub->add_option("--workers", rc.workers, "Worker threads")->check(CLI::PositiveNumber);
  };

  auto* simulate = app.add_subcommand("simulate", "Simulate an ensemble of paths");
  add_common(simulate);

  std::string test_which;
  auto* test = app.add_subcommand("test", "Run a property tester on simulated paths");
  test->add_option("which", test_which, "multinomial or markov")
      ->required()
      ->check(CLI::IsMember({"multinomial", "markov"}));
  add_common(test);
  test->add_option("--times", rc.times, "Observation times")->delimiter(',');
  test->add_option("--ensemble", rc.ensemble_file, "Read paths from an ensemble file instead of simulating");

  std::string check_which;
  auto* check = app.add_subcommand("check", "Run an analytic or Monte Carlo checker");
  check->add_option("which", check_which, "mpp, regularity, identities or consistency")
      ->required()
      ->check(CLI::IsMember({"mpp", "regularity", "identities", "consistency"}));
  add_common(check);
  check->add_option("--event", rc.event, "Event, e.g. N(1)=0&N(2)-N(1)=1");
  check->add_option("--interval", rc.interval, "Parameter interval LO,HI")->delimiter(',');
  check->add_option("--plot", rc.plot, "Write a CSV series for plotting");

  auto* verdict = app.add_subcommand("verdict", "Run all checks and report the equivalence verdict");
  add_common(verdict);

  std::string example_name;
  auto* example = app.add_subcommand("example", "Run the verdict on an example preset");
  example->add_option("name", example_name, "a, b, c or deterministic")->required();
  add_common(example);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    check_common(rc);
    if (*simulate) return cmd_simulate(rc);
    if (*test) return cmd_test(rc, test_which);
    if (*check) return cmd_check(rc, check_which);
    if (*verdict) return run_verdict(rc, resolve_model(rc), "verdict");
    if (!rc.model_file.empty()) throw UsageError("example takes a preset, not --model");
    rc.preset = example_name;
    return run_verdict(rc, resolve_model(rc), "example " + example_name);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const mrp::Error& e) {
    std::cerr << e.what() << '\n';
    return exit_code_for(e.kind());
  }
}
