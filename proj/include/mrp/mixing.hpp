#pragma once

// Mixing laws mu = P_Theta for the structural parameter Theta.

#include <boost/math/special_functions/gamma.hpp>
#include <boost/random/gamma_distribution.hpp>

#include <cmath>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include "mrp/error.hpp"
#include "mrp/parameter_map.hpp"
#include "mrp/random.hpp"

namespace mrp {

class MixingLaw;

namespace mixing {

/// Gamma with shape alpha and rate beta (mean alpha / beta).
struct Gamma {
  double shape;
  double rate;
  bool operator==(const Gamma&) const = default;
};
struct Uniform {
  double lo;
  double hi;
  bool operator==(const Uniform&) const = default;
};
struct Dirac {
  double at;
  bool operator==(const Dirac&) const = default;
};
/// Law of h(Theta) for Theta ~ base.
struct PushForward {
  std::shared_ptr<const MixingLaw> base;
  ParameterMap map;
};

}  // namespace mixing

class MixingLaw {
 public:
  using Variant = std::variant<mixing::Gamma, mixing::Uniform, mixing::Dirac, mixing::PushForward>;

  static MixingLaw gamma(double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate))
      throw Error(ErrorKind::Parameter, "gamma mixing needs positive shape and rate");
    return MixingLaw(mixing::Gamma{shape, rate});
  }
  static MixingLaw uniform(double lo, double hi) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
      throw Error(ErrorKind::Parameter, "uniform mixing needs lo < hi");
    return MixingLaw(mixing::Uniform{lo, hi});
  }
  static MixingLaw dirac(double at) {
    if (!std::isfinite(at)) throw Error(ErrorKind::Parameter, "dirac mixing needs a finite atom");
    return MixingLaw(mixing::Dirac{at});
  }
  static MixingLaw push_forward(MixingLaw base, ParameterMap map) {
    return MixingLaw(mixing::PushForward{std::make_shared<const MixingLaw>(std::move(base)), std::move(map)});
  }

  const Variant& variant() const noexcept { return law_; }
  bool is_dirac() const noexcept {
    if (std::holds_alternative<mixing::Dirac>(law_)) return true;
    if (auto* pf = std::get_if<mixing::PushForward>(&law_)) return pf->base->is_dirac();
    return false;
  }

  double sample(RandomStream& rng) const {
    return std::visit(
        [&rng](const auto& law) -> double {
          using T = std::decay_t<decltype(law)>;
          if constexpr (std::is_same_v<T, mixing::Gamma>) {
            boost::random::gamma_distribution<double> dist(law.shape, 1.0 / law.rate);
            return dist(rng);
          } else if constexpr (std::is_same_v<T, mixing::Uniform>) {
            return law.lo + (law.hi - law.lo) * rng.uniform();
          } else if constexpr (std::is_same_v<T, mixing::Dirac>) {
            return law.at;
          } else {
            return law.map.apply(law.base->sample(rng));
          }
        },
        law_);
  }

  /// Closed interval hull of the support.
  OpenInterval support() const {
    return std::visit(
        [](const auto& law) -> OpenInterval {
          using T = std::decay_t<decltype(law)>;
          if constexpr (std::is_same_v<T, mixing::Gamma>) {
            return {0.0, std::numeric_limits<double>::infinity()};
          } else if constexpr (std::is_same_v<T, mixing::Uniform>) {
            return {law.lo, law.hi};
          } else if constexpr (std::is_same_v<T, mixing::Dirac>) {
            return {law.at, law.at};
          } else {
            auto s = law.base->support();
            if (s.lo == s.hi) {
              double v = law.map.apply(s.lo);
              return {v, v};
            }
            return law.map.image_of(s);
          }
        },
        law_);
  }

  /// Inverse cdf at level q in (0, 1).
  double quantile(double q) const {
    if (!(q > 0.0 && q < 1.0)) throw Error(ErrorKind::InvalidInput, "quantile level must lie in (0, 1)");
    return std::visit(
        [q](const auto& law) -> double {
          using T = std::decay_t<decltype(law)>;
          if constexpr (std::is_same_v<T, mixing::Gamma>) {
            return boost::math::gamma_p_inv(law.shape, q) / law.rate;
          } else if constexpr (std::is_same_v<T, mixing::Uniform>) {
            return law.lo + q * (law.hi - law.lo);
          } else if constexpr (std::is_same_v<T, mixing::Dirac>) {
            return law.at;
          } else {
            double base_q = law.map.increasing() ? q : 1.0 - q;
            return law.map.apply(law.base->quantile(base_q));
          }
        },
        law_);
  }

  /// Analytic mean where one exists in closed form.
  std::optional<double> mean() const {
    return std::visit(
        [](const auto& law) -> std::optional<double> {
          using T = std::decay_t<decltype(law)>;
          if constexpr (std::is_same_v<T, mixing::Gamma>) {
            return law.shape / law.rate;
          } else if constexpr (std::is_same_v<T, mixing::Uniform>) {
            return 0.5 * (law.lo + law.hi);
          } else if constexpr (std::is_same_v<T, mixing::Dirac>) {
            return law.at;
          } else {
            return std::nullopt;
          }
        },
        law_);
  }

  std::optional<double> variance() const {
    if (auto* g = std::get_if<mixing::Gamma>(&law_)) return g->shape / (g->rate * g->rate);
    if (auto* u = std::get_if<mixing::Uniform>(&law_)) return (u->hi - u->lo) * (u->hi - u->lo) / 12.0;
    if (std::holds_alternative<mixing::Dirac>(law_)) return 0.0;
    return std::nullopt;
  }

  std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    std::visit(
        [&os](const auto& law) {
          using T = std::decay_t<decltype(law)>;
          if constexpr (std::is_same_v<T, mixing::Gamma>) {
            os << "gamma:" << law.shape << ',' << law.rate;
          } else if constexpr (std::is_same_v<T, mixing::Uniform>) {
            os << "uniform:" << law.lo << ',' << law.hi;
          } else if constexpr (std::is_same_v<T, mixing::Dirac>) {
            os << "dirac:" << law.at;
          } else {
            os << "pushforward(" << law.base->describe() << ';' << law.map.describe() << ')';
          }
        },
        law_);
    return os.str();
  }

 private:
  explicit MixingLaw(Variant v) : law_(std::move(v)) {}
  Variant law_;
};

}  // namespace mrp
