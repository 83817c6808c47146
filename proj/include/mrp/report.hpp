#pragma once

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mrp {

struct Estimate {
  std::string name;
  double value = 0.0;
  std::optional<double> std_error;
};

/// Common serialized form of every tester and checker. The JSON key set and
/// order are fixed; fields that do not apply are null.
struct TestReport {
  std::string test;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  std::vector<Estimate> estimates;
  std::optional<double> statistic;
  std::optional<double> dof;
  std::optional<double> p_value;
  std::optional<double> alpha;
  std::string decision;
  std::uint64_t seed = 0;
  std::vector<std::string> anomalies;
  std::vector<std::string> notes;
  std::vector<TestReport> components;

  void add(std::string name, double value, std::optional<double> se = std::nullopt) {
    estimates.push_back({std::move(name), value, se});
  }

  nlohmann::ordered_json to_json() const {
    auto opt = [](const std::optional<double>& v) -> nlohmann::ordered_json {
      if (!v || !std::isfinite(*v)) return nullptr;
      return *v;
    };
    nlohmann::ordered_json j;
    j["test"] = test;
    j["inputs"] = inputs;
    auto est = nlohmann::ordered_json::array();
    for (const auto& e : estimates) {
      nlohmann::ordered_json row;
      row["name"] = e.name;
      row["value"] = std::isfinite(e.value) ? nlohmann::ordered_json(e.value) : nlohmann::ordered_json(nullptr);
      row["std_error"] = opt(e.std_error);
      est.push_back(std::move(row));
    }
    j["estimates"] = std::move(est);
    j["statistic"] = opt(statistic);
    j["dof"] = opt(dof);
    j["p_value"] = opt(p_value);
    j["alpha"] = opt(alpha);
    j["decision"] = decision;
    j["seed"] = seed;
    j["anomalies"] = anomalies;
    j["notes"] = notes;
    if (!components.empty()) {
      auto comps = nlohmann::ordered_json::array();
      for (const auto& c : components) comps.push_back(c.to_json());
      j["components"] = std::move(comps);
    }
    return j;
  }
};

}  // namespace mrp
