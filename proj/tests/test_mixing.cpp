#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "mrp/mixing.hpp"
#include "mrp/parameter_map.hpp"
#include "mrp/quadrature.hpp"
#include "mrp/random.hpp"
#include "mrp/stats.hpp"

using namespace mrp;

TEST(ParameterMap, Examples) {
  EXPECT_DOUBLE_EQ(ParameterMap::affine(1, 0).apply(1.7), 1.7);
  const auto r = ParameterMap::reciprocal();
  EXPECT_DOUBLE_EQ(r.apply(2.0), 0.5);
  EXPECT_DOUBLE_EQ(r.invert(0.5), 2.0);
  const auto a = ParameterMap::affine(2, 1);
  EXPECT_DOUBLE_EQ(a.apply(3.0), 7.0);
  EXPECT_DOUBLE_EQ(a.invert(7.0), 3.0);
}

TEST(ParameterMap, Errors) {
  try {
    ParameterMap::affine(0, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Injectivity);
  }
  const auto h = ParameterMap::identity().with_excluded({{1.0, 2.0}});
  try {
    h.apply(1.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NullSet);
  }
  EXPECT_DOUBLE_EQ(h.apply(2.5), 2.5);
  EXPECT_THROW(ParameterMap::identity().apply(-1.0), Error);
}

TEST(ParameterMap, RoundTripAndMonotone) {
  RandomStream rng(3);
  std::vector<double> grid;
  for (int i = 1; i <= 2000; ++i) grid.push_back(i * 0.005);
  for (const auto& h : {ParameterMap::identity(), ParameterMap::affine(2.5, 0.3), ParameterMap::reciprocal()}) {
    EXPECT_TRUE(strictly_monotone_on(h, grid)) << h.describe();
    for (int i = 0; i < 1000; ++i) {
      const double theta = 10.0 * rng.uniform();
      ASSERT_NEAR(h.invert(h.apply(theta)), theta, 1e-12 * std::max(1.0, theta));
    }
  }
}

TEST(ParameterMap, Image) {
  const auto img = ParameterMap::reciprocal().image_of({1.0, 2.0});
  EXPECT_DOUBLE_EQ(img.lo, 0.5);
  EXPECT_DOUBLE_EQ(img.hi, 1.0);
  const auto aff = ParameterMap::affine(2, 1).image();
  EXPECT_DOUBLE_EQ(aff.lo, 1.0);
  EXPECT_TRUE(std::isinf(aff.hi));
}

TEST(MixingLaw, Examples) {
  RandomStream rng(5);
  EXPECT_EQ(MixingLaw::dirac(3.0).sample(rng), 3.0);
  const auto u = MixingLaw::uniform(1, 2);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.sample(rng);
    ASSERT_GT(x, 1.0);
    ASSERT_LT(x, 2.0);
  }
}

TEST(MixingLaw, GammaMeanOracle) {
  const auto g = MixingLaw::gamma(2, 1);
  RandomStream rng(6);
  const std::size_t n = 1000000;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += g.sample(rng);
  EXPECT_NEAR(s / n, 2.0, 4.0 * std::sqrt(2.0) / 1e3);
}

TEST(MixingLaw, ShapeRateParameterisation) {
  const auto g = MixingLaw::gamma(3, 2);
  EXPECT_DOUBLE_EQ(*g.mean(), 1.5);
  EXPECT_DOUBLE_EQ(*g.variance(), 0.75);
  EXPECT_THROW(MixingLaw::gamma(-1, 1), Error);
  EXPECT_THROW(MixingLaw::uniform(2, 1), Error);
}

TEST(MixingLaw, QuantileMatchesSampling) {
  for (const auto& law : {MixingLaw::gamma(2, 1), MixingLaw::uniform(1, 2),
                          MixingLaw::push_forward(MixingLaw::gamma(2, 1), ParameterMap::reciprocal())}) {
    RandomStream rng(7);
    std::vector<double> xs(20000);
    for (auto& x : xs) x = law.sample(rng);
    std::sort(xs.begin(), xs.end());
    for (double q : {0.05, 0.5, 0.95}) {
      const double emp = xs[static_cast<std::size_t>(q * xs.size())];
      EXPECT_NEAR(law.quantile(q), emp, 0.05 * std::max(1.0, std::abs(emp))) << law.describe() << " q=" << q;
    }
  }
}

TEST(MixingLaw, PushForwardSupport) {
  const auto pf = MixingLaw::push_forward(MixingLaw::uniform(1, 2), ParameterMap::reciprocal());
  const auto s = pf.support();
  EXPECT_DOUBLE_EQ(s.lo, 0.5);
  EXPECT_DOUBLE_EQ(s.hi, 1.0);
}

TEST(Quadrature, MomentsOfMixingLaws) {
  const auto g = MixingLaw::gamma(2, 1);
  EXPECT_NEAR(expect(g, [](double x) { return x; }).value, 2.0, 1e-6);
  EXPECT_NEAR(expect(g, [](double x) { return x * x; }).value, 6.0, 1e-5);
  const auto pf = MixingLaw::push_forward(g, ParameterMap::reciprocal());
  // E[1/Theta] = rate / (shape - 1) = 1
  EXPECT_NEAR(expect(pf, [](double x) { return x; }).value, 1.0, 1e-6);
  EXPECT_NEAR(expect(MixingLaw::uniform(1, 2), [](double x) { return x * x; }).value, 7.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(expect(MixingLaw::dirac(1.5), [](double x) { return 2 * x; }).value, 3.0);
}
