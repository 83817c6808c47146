#pragma once

// Mixed renewal models as conditional simulators: draw Theta from the mixing
// law, set lambda = h(Theta), then draw i.i.d. interarrivals from K(lambda).

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "mrp/error.hpp"
#include "mrp/kernel.hpp"
#include "mrp/mixing.hpp"
#include "mrp/parallel.hpp"
#include "mrp/parameter_map.hpp"
#include "mrp/path.hpp"
#include "mrp/random.hpp"

namespace mrp {

// Stream purposes, so that different consumers of one seed never share draws.
enum StreamPurpose : std::uint64_t {
  kEnsembleStream = 1,
  kConsistencyJointStream = 2,
  kConsistencyConditionalStream = 3,
  kKernelEqualityStream = 4,
  kInjectivityStream = 5,
  kRegularityStream = 6,
  kValidationStream = 7,
};

struct MrpModel {
  MixingLaw mixing = MixingLaw::dirac(1.0);
  ParameterMap map = ParameterMap::identity();
  InterarrivalKernel kernel{};

  double parameter(double theta) const { return map.apply(theta); }

  nlohmann::ordered_json to_json() const {
    return {{"mixing", mixing.describe()}, {"map", map.describe()}, {"kernel", kernel.name()}};
  }

  std::string describe() const { return to_json().dump(); }
};

/// Checks on a sample of the mixing support that h(theta) lies in the
/// kernel's parameter domain.
inline void validate_model(const MrpModel& model, std::size_t draws = 1000, std::uint64_t seed = 0) {
  RandomStream rng(seed, 0, kValidationStream);
  for (std::size_t i = 0; i < draws; ++i) {
    const double theta = model.mixing.sample(rng);
    model.kernel.check_parameter(model.parameter(theta));
  }
}

inline constexpr std::size_t kMaxArrivalsPerPath = 50'000'000;

/// Simulates one path on [0, horizon] at a fixed kernel parameter lambda.
inline ArrivalPath sample_path_at(const InterarrivalKernel& kernel, double lambda, std::vector<double> theta,
                                  double horizon, RandomStream& rng) {
  kernel.check_parameter(lambda);
  ArrivalPath path{std::move(theta), {}, horizon};
  double sum = 0.0;
  for (;;) {
    const double w = kernel.sample(lambda, rng);
    double next = sum + w;
    // A draw below half an ulp of the running sum would duplicate an arrival.
    if (!(next > sum)) next = std::nextafter(sum, std::numeric_limits<double>::infinity());
    if (next > horizon) break;
    path.arrivals.push_back(next);
    sum = next;
    if (path.arrivals.size() > kMaxArrivalsPerPath)
      throw Error(ErrorKind::Numeric, "path exceeded " + std::to_string(kMaxArrivalsPerPath) + " arrivals");
  }
  return path;
}

/// Draws Theta, then a path from the renewal process K(h(Theta)).
inline ArrivalPath sample_path(const MrpModel& model, double horizon, RandomStream& rng) {
  const double theta = model.mixing.sample(rng);
  return sample_path_at(model.kernel, model.parameter(theta), {theta}, horizon, rng);
}

struct PathEnsemble {
  std::vector<ArrivalPath> paths;
  std::uint64_t seed = 0;
  std::string model;
  double horizon = 0.0;

  std::size_t size() const noexcept { return paths.size(); }
  bool operator==(const PathEnsemble&) const = default;
};

/// Path i is drawn from its own substream keyed by (seed, i), so the ensemble
/// is identical for every worker count.
inline PathEnsemble sample_ensemble(const MrpModel& model, std::size_t n_paths, double horizon, std::uint64_t seed,
                                    unsigned workers = 1) {
  if (n_paths < 1) throw Error(ErrorKind::InvalidInput, "ensemble needs at least one path");
  if (!(horizon >= 0.0) || !std::isfinite(horizon))
    throw Error(ErrorKind::InvalidInput, "horizon must be finite and nonnegative");
  PathEnsemble ens;
  ens.seed = seed;
  ens.model = model.describe();
  ens.horizon = horizon;
  ens.paths.resize(n_paths);
  parallel_for(n_paths, workers, [&](std::size_t i) {
    RandomStream rng(seed, i, kEnsembleStream);
    ens.paths[i] = sample_path(model, horizon, rng);
  });
  return ens;
}

/// The same process with the mixing law replaced by the push-forward of
/// Theta under h and the map replaced by the identity.
inline MrpModel reparameterize(const MrpModel& model, std::size_t support_draws = 2000) {
  RandomStream rng(0, 0, kInjectivityStream);
  std::vector<double> thetas(support_draws);
  for (auto& t : thetas) t = model.mixing.sample(rng);
  std::sort(thetas.begin(), thetas.end());
  thetas.erase(std::unique(thetas.begin(), thetas.end()), thetas.end());
  for (double t : thetas)
    if (!model.map.admissible(t))
      throw Error(ErrorKind::NullSet, "sampled theta=" + std::to_string(t) + " lies in the excluded set of h");
  if (!strictly_monotone_on(model.map, thetas))
    throw Error(ErrorKind::Injectivity, "h is not injective on the sampled mixing support");
  MrpModel out;
  out.mixing = MixingLaw::push_forward(model.mixing, model.map);
  out.map = ParameterMap::identity(model.map.image());
  out.kernel = model.kernel;
  return out;
}

// Ensemble text form: one JSON header line, then the paths in path text form.

inline void write_ensemble(std::ostream& os, const PathEnsemble& ens) {
  nlohmann::ordered_json header;
  header["model"] = nlohmann::ordered_json::parse(ens.model.empty() ? "{}" : ens.model);
  header["seed"] = ens.seed;
  header["n_paths"] = ens.paths.size();
  header["horizon"] = ens.horizon;
  os << header.dump() << '\n';
  for (const auto& p : ens.paths) write_path(os, p);
}

inline PathEnsemble read_ensemble(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorKind::InvalidInput, "empty ensemble stream");
  nlohmann::ordered_json header;
  try {
    header = nlohmann::ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("bad ensemble header: ") + e.what());
  }
  PathEnsemble ens;
  ens.model = header.value("model", nlohmann::ordered_json::object()).dump();
  ens.seed = header.value("seed", std::uint64_t{0});
  ens.horizon = header.value("horizon", 0.0);
  ens.paths = read_paths(is);
  if (ens.paths.size() != header.value("n_paths", ens.paths.size()))
    throw Error(ErrorKind::InvalidInput, "ensemble header announces a different number of paths");
  return ens;
}

}  // namespace mrp
