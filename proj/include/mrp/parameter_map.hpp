#pragma once

// Parameter maps h: theta -> lambda, injective off an excluded null set L.

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "mrp/error.hpp"

namespace mrp {

/// Open interval (lo, hi); lo == hi never occurs.
struct OpenInterval {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double x) const noexcept { return x > lo && x < hi; }
  bool operator==(const OpenInterval&) const = default;
};

/// Closed interval [lo, hi]; a single point when lo == hi.
struct ClosedInterval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
  bool operator==(const ClosedInterval&) const = default;
};

enum class MapForm { Identity, Affine, Reciprocal };

class ParameterMap {
 public:
  ParameterMap() = default;

  static ParameterMap identity(OpenInterval domain = {}) {
    ParameterMap m;
    m.form_ = MapForm::Identity;
    m.domain_ = domain;
    return m;
  }

  /// h(theta) = a theta + b, a > 0, b >= 0.
  static ParameterMap affine(double a, double b, OpenInterval domain = {}) {
    if (a == 0.0) throw Error(ErrorKind::Injectivity, "affine map with a = 0 is constant");
    if (!(a > 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b))
      throw Error(ErrorKind::Parameter, "affine map needs a > 0 and b >= 0");
    ParameterMap m;
    m.form_ = MapForm::Affine;
    m.a_ = a;
    m.b_ = b;
    m.domain_ = domain;
    return m;
  }

  /// h(theta) = 1 / theta on a positive domain.
  static ParameterMap reciprocal(OpenInterval domain = {}) {
    if (!(domain.lo >= 0.0)) throw Error(ErrorKind::Parameter, "reciprocal map needs a positive domain");
    ParameterMap m;
    m.form_ = MapForm::Reciprocal;
    m.domain_ = domain;
    return m;
  }

  ParameterMap with_excluded(std::vector<ClosedInterval> excluded) const {
    ParameterMap m = *this;
    m.excluded_ = std::move(excluded);
    return m;
  }

  MapForm form() const noexcept { return form_; }
  double slope() const noexcept { return a_; }
  double intercept() const noexcept { return b_; }
  const OpenInterval& domain() const noexcept { return domain_; }
  const std::vector<ClosedInterval>& excluded() const noexcept { return excluded_; }

  bool increasing() const noexcept { return form_ != MapForm::Reciprocal; }

  bool in_null_set(double theta) const noexcept {
    for (const auto& iv : excluded_)
      if (iv.contains(theta)) return true;
    return false;
  }

  bool admissible(double theta) const noexcept { return domain_.contains(theta) && !in_null_set(theta); }

  double apply(double theta) const {
    if (!domain_.contains(theta))
      throw Error(ErrorKind::NullSet, "theta=" + std::to_string(theta) + " lies outside the map domain");
    if (in_null_set(theta))
      throw Error(ErrorKind::NullSet, "theta=" + std::to_string(theta) + " lies in the excluded null set");
    return raw(theta);
  }

  double invert(double lambda) const {
    if (!image().contains(lambda))
      throw Error(ErrorKind::NullSet, "lambda=" + std::to_string(lambda) + " lies outside the map image");
    double theta = 0.0;
    switch (form_) {
      case MapForm::Identity: theta = lambda; break;
      case MapForm::Affine: theta = (lambda - b_) / a_; break;
      case MapForm::Reciprocal: theta = 1.0 / lambda; break;
    }
    if (in_null_set(theta))
      throw Error(ErrorKind::NullSet, "lambda=" + std::to_string(lambda) + " is the image of the excluded null set");
    return theta;
  }

  /// h(domain), as an open interval.
  OpenInterval image() const { return image_of(domain_); }

  OpenInterval image_of(OpenInterval iv) const {
    double lo = raw(iv.lo), hi = raw(iv.hi);
    if (!increasing()) std::swap(lo, hi);
    return {lo, hi};
  }

  std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (form_) {
      case MapForm::Identity: os << "identity"; break;
      case MapForm::Affine: os << "affine:" << a_ << ',' << b_; break;
      case MapForm::Reciprocal: os << "reciprocal"; break;
    }
    return os.str();
  }

  bool operator==(const ParameterMap&) const = default;

 private:
  double raw(double theta) const noexcept {
    switch (form_) {
      case MapForm::Identity: return theta;
      case MapForm::Affine: return a_ * theta + b_;
      case MapForm::Reciprocal:
        if (theta == 0.0) return std::numeric_limits<double>::infinity();
        if (std::isinf(theta)) return 0.0;
        return 1.0 / theta;
    }
    return theta;
  }

  MapForm form_ = MapForm::Identity;
  double a_ = 1.0;
  double b_ = 0.0;
  OpenInterval domain_{};
  std::vector<ClosedInterval> excluded_{};
};

/// True when h is strictly monotone along the admissible points of `grid`
/// (taken in increasing order). Points in L or outside the domain are skipped.
template <class Map, class Range>
bool strictly_monotone_on(const Map& h, const Range& grid) {
  int direction = 0;
  bool have_prev = false;
  double prev_theta = 0.0, prev_value = 0.0;
  for (double theta : grid) {
    if (!h.admissible(theta)) continue;
    double v = h.apply(theta);
    if (have_prev && theta > prev_theta) {
      int d = v > prev_value ? 1 : (v < prev_value ? -1 : 0);
      if (d == 0) return false;
      if (direction == 0) direction = d;
      else if (d != direction) return false;
    }
    have_prev = true;
    prev_theta = theta;
    prev_value = v;
  }
  return true;
}

}  // namespace mrp
