#include <gtest/gtest.h>

#include <sstream>
#include <vector>

#include "mrp/path.hpp"
#include "mrp/random.hpp"

using namespace mrp;

namespace {

ArrivalPath make(std::vector<double> arrivals, double horizon) {
  return ArrivalPath{{1.0}, std::move(arrivals), horizon};
}

ArrivalPath random_path(RandomStream& rng, double horizon) {
  std::vector<double> w;
  double s = 0.0;
  while (s <= horizon) {
    w.push_back(-std::log(rng.uniform()) / 3.0);
    s += w.back();
  }
  return build_path({1.0}, w, horizon);
}

}  // namespace

TEST(BuildPath, StopsAtFirstSumBeyondHorizon) {
  const std::vector<double> w{0.5, 0.7, 2.0};
  EXPECT_EQ(build_path({1.0}, w, 2.0).arrivals, (std::vector<double>{0.5, 1.2}));
}

TEST(BuildPath, EmptyAtZeroHorizon) {
  EXPECT_TRUE(build_path({1.0}, std::vector<double>{}, 0.0).arrivals.empty());
}

TEST(BuildPath, ArrivalOnHorizonIsKept) {
  const std::vector<double> w{1.0, 1.0, 1.0};
  EXPECT_EQ(build_path({1.0}, w, 3.0).arrivals, (std::vector<double>{1.0, 2.0, 3.0}));
}

TEST(BuildPath, Errors) {
  const std::vector<double> short_w{0.5, 0.5};
  EXPECT_THROW(build_path({1.0}, short_w, 2.0), Error);
  try {
    build_path({1.0}, short_w, 2.0);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IncompletePath);
  }
  const std::vector<double> bad{0.5, 0.0, 3.0};
  try {
    build_path({1.0}, bad, 2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
  }
}

TEST(CountAt, Examples) {
  EXPECT_EQ(count_at(make({}, 1.0), 0.0), 0);
  const auto p = make({0.5, 1.2, 3.0}, 3.5);
  EXPECT_EQ(count_at(p, 1.2), 2);
  EXPECT_EQ(count_at(p, 0.49), 0);
  EXPECT_EQ(count_at(p, 0.0), 0);
}

TEST(CountAt, BeyondHorizonThrows) {
  try {
    count_at(make({0.5}, 1.0), 1.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutOfHorizon);
  }
}

TEST(ArrivalOf, Examples) {
  EXPECT_DOUBLE_EQ(arrival_of(make({0.5, 1.2}, 2.0), 2), 1.2);
  EXPECT_DOUBLE_EQ(arrival_of(make({1.0, 2.0, 3.0}, 3.0), 1), 1.0);
  EXPECT_THROW(arrival_of(make({1.0}, 2.0), 2), Error);
  EXPECT_THROW(arrival_of(make({1.0}, 2.0), 0), Error);
}

TEST(Increments, Examples) {
  const std::vector<double> t{1, 2, 4};
  EXPECT_EQ(increments(make({0.5, 1.2, 3.0}, 4.0), t), (std::vector<long>{1, 1, 1}));
  const std::vector<double> t2{1, 2};
  EXPECT_EQ(increments(make({}, 2.0), t2), (std::vector<long>{0, 0}));
}

TEST(Increments, RejectsBadTimes) {
  const std::vector<double> t{2, 1};
  EXPECT_THROW(increments(make({}, 2.0), t), Error);
  const std::vector<double> t0{0, 1};
  EXPECT_THROW(increments(make({}, 2.0), t0), Error);
}

TEST(PathProperty, IncrementsSumToCount) {
  RandomStream rng(11);
  const std::vector<double> times{0.3, 1.1, 2.0, 4.5};
  for (int i = 0; i < 1000; ++i) {
    const auto p = random_path(rng, 5.0);
    long recount = 0;
    for (double a : p.arrivals) recount += a <= 4.5 ? 1 : 0;
    long sum = 0;
    for (long k : increments(p, times)) {
      EXPECT_GE(k, 0);
      sum += k;
    }
    ASSERT_EQ(sum, recount);
  }
}

TEST(PathProperty, CountArrivalDuality) {
  RandomStream rng(12);
  for (int i = 0; i < 10000; ++i) {
    const auto p = random_path(rng, 3.0);
    for (long n = 1; n <= static_cast<long>(p.size()); ++n) {
      const double tn = arrival_of(p, n);
      ASSERT_GE(count_at(p, tn), n);
      ASSERT_LT(count_at(p, std::nextafter(tn, 0.0)), n);
    }
    for (double t : {0.0, 0.7, 1.9, 3.0}) {
      const long n = count_at(p, t);
      if (n >= 1) ASSERT_LE(arrival_of(p, n), t);
      if (n < static_cast<long>(p.size())) ASSERT_GT(arrival_of(p, n + 1), t);
    }
  }
}

TEST(PathProperty, GridScanRecoversArrivals) {
  RandomStream rng(13);
  const double step = 1e-3;
  for (int i = 0; i < 50; ++i) {
    const auto p = random_path(rng, 2.0);
    std::vector<double> first(p.size() + 1, -1.0);
    for (int j = 0; j * step <= 2.0; ++j) {
      const double t = j * step;
      const long n = count_at(p, t);
      for (long m = 1; m <= n; ++m)
        if (first[m] < 0) first[m] = t;
    }
    for (long n = 1; n <= static_cast<long>(p.size()); ++n) {
      if (first[n] < 0) continue;
      EXPECT_NEAR(first[n], arrival_of(p, n), step);
    }
  }
}

TEST(PathIo, RoundTrip) {
  RandomStream rng(14);
  std::vector<ArrivalPath> paths;
  for (int i = 0; i < 20; ++i) paths.push_back(random_path(rng, 2.0));
  std::stringstream ss;
  for (const auto& p : paths) write_path(ss, p);
  EXPECT_EQ(read_paths(ss), paths);
}

TEST(PathIo, RejectsMalformed) {
  std::stringstream bad("theta=1 horizon=2\n1.5\n0.5\n");
  EXPECT_THROW(read_paths(bad), Error);
  std::stringstream beyond("theta=1 horizon=2\n2.5\n");
  EXPECT_THROW(read_paths(beyond), Error);
}

TEST(PartitionQuery, Validation) {
  EXPECT_THROW(PartitionQuery({1.0, 1.0}, {0, 0}), Error);
  EXPECT_THROW(PartitionQuery({1.0}, {0, 0}), Error);
  EXPECT_EQ(PartitionQuery({1.0, 2.0}, {2, 3}).total(), 5);
}
