#pragma once

// Model configuration text and the built-in example presets.
//
// Grammar, one `key=value` per line, `#` starts a comment:
//   mixing=gamma:<shape>,<rate> | uniform:<lo>,<hi> | dirac:<theta0>
//   map=identity | affine:<a>,<b> | reciprocal
//   kernel=exp | pareto | gengamma | deterministic
//   multinomial_times=<t1>,<t2>,...        (optional)
//   markov_times=<t1>,<t2>,<t3>,...        (optional)
//   horizon=<T>                            (optional)

#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mrp/error.hpp"
#include "mrp/model.hpp"
#include "mrp/path.hpp"

namespace mrp {

struct ModelConfig {
  MrpModel model;
  std::optional<std::vector<double>> multinomial_times;
  std::optional<std::vector<double>> markov_times;
  std::optional<double> horizon;
};

namespace detail {

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

inline std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_real(item));
  }
  return out;
}

inline std::pair<std::string, std::vector<double>> split_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) return {trim(spec), {}};
  return {trim(spec.substr(0, colon)), parse_list(spec.substr(colon + 1))};
}

inline void expect_args(const std::string& what, const std::vector<double>& args, std::size_t n) {
  if (args.size() != n)
    throw Error(ErrorKind::InvalidInput, what + " expects " + std::to_string(n) + " parameter(s)");
}

}  // namespace detail

inline MixingLaw parse_mixing(const std::string& spec) {
  auto [name, args] = detail::split_spec(spec);
  if (name == "gamma") {
    detail::expect_args("gamma", args, 2);
    return MixingLaw::gamma(args[0], args[1]);
  }
  if (name == "uniform") {
    detail::expect_args("uniform", args, 2);
    return MixingLaw::uniform(args[0], args[1]);
  }
  if (name == "dirac") {
    detail::expect_args("dirac", args, 1);
    return MixingLaw::dirac(args[0]);
  }
  throw Error(ErrorKind::InvalidInput, "unknown mixing law '" + spec + "'");
}

inline ParameterMap parse_map(const std::string& spec) {
  auto [name, args] = detail::split_spec(spec);
  if (name == "identity") {
    detail::expect_args("identity", args, 0);
    return ParameterMap::identity();
  }
  if (name == "affine") {
    detail::expect_args("affine", args, 2);
    return ParameterMap::affine(args[0], args[1]);
  }
  if (name == "reciprocal") {
    detail::expect_args("reciprocal", args, 0);
    return ParameterMap::reciprocal();
  }
  throw Error(ErrorKind::InvalidInput, "unknown parameter map '" + spec + "'");
}

inline ModelConfig parse_model_config(std::istream& is) {
  ModelConfig cfg;
  bool have_mixing = false, have_map = false, have_kernel = false;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::InvalidInput, "line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key == "mixing") {
      cfg.model.mixing = parse_mixing(value);
      have_mixing = true;
    } else if (key == "map") {
      cfg.model.map = parse_map(value);
      have_map = true;
    } else if (key == "kernel") {
      cfg.model.kernel = InterarrivalKernel{kernel_family_from_string(value)};
      have_kernel = true;
    } else if (key == "multinomial_times") {
      cfg.multinomial_times = detail::parse_list(value);
    } else if (key == "markov_times") {
      cfg.markov_times = detail::parse_list(value);
    } else if (key == "horizon") {
      cfg.horizon = detail::parse_real(value);
    } else {
      throw Error(ErrorKind::InvalidInput, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (!have_mixing || !have_kernel)
    throw Error(ErrorKind::InvalidInput, "model config needs at least mixing= and kernel=");
  if (!have_map) cfg.model.map = ParameterMap::identity();
  return cfg;
}

inline ModelConfig parse_model_config(const std::string& text) {
  std::istringstream is(text);
  return parse_model_config(is);
}

/// Example presets:
///   a: Gamma(2,1) mixing, h(theta) = theta (affine 1,0), exponential kernel
///   b: Gamma(2,1) mixing, h(theta) = 1/theta, Pareto kernel
///   c: Uniform(1,2) mixing, identity map, GenGammaHalf kernel
///   deterministic: Dirac(1) mixing, deterministic unit kernel (N_t = floor(t))
inline ModelConfig preset(const std::string& name) {
  ModelConfig cfg;
  if (name == "a") {
    cfg.model = {MixingLaw::gamma(2.0, 1.0), ParameterMap::affine(1.0, 0.0), {KernelFamily::Exponential}};
  } else if (name == "b") {
    cfg.model = {MixingLaw::gamma(2.0, 1.0), ParameterMap::reciprocal(), {KernelFamily::ParetoUnitShape}};
  } else if (name == "c") {
    cfg.model = {MixingLaw::uniform(1.0, 2.0), ParameterMap::identity(), {KernelFamily::GenGammaHalf}};
  } else if (name == "deterministic") {
    cfg.model = {MixingLaw::dirac(1.0), ParameterMap::identity(), {KernelFamily::DeterministicUnit}};
    cfg.multinomial_times = std::vector<double>{0.5, 1.5, 2.5};
    cfg.markov_times = std::vector<double>{0.5, 1.5, 2.5};
  } else {
    throw Error(ErrorKind::InvalidInput, "unknown preset '" + name + "' (expected a, b, c or deterministic)");
  }
  return cfg;
}

}  // namespace mrp
