#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "warpkit/averaging.hpp"
#include "warpkit/distances.hpp"
#include "warpkit/error.hpp"

using namespace warpkit;

namespace {

std::vector<TimeSeries> random_set(std::mt19937_64& g, std::size_t count, std::size_t length) {
  std::vector<TimeSeries> set;
  for (std::size_t i = 0; i < count; ++i) set.push_back(oracle::random_series(g, length));
  return set;
}

// Plain DBA: DTW paths from the textbook recursion, associates averaged with
// ordinary sums.
TimeSeries dba_oracle(const std::vector<TimeSeries>& set, TimeSeries proto, std::size_t iterations) {
  for (std::size_t it = 0; it < iterations; ++it) {
    std::vector<double> sum(proto.length(), 0.0);
    std::vector<double> count(proto.length(), 0.0);
    for (const auto& x : set) {
      std::vector<std::vector<double>> c(proto.length(), std::vector<double>(x.length()));
      for (std::size_t i = 0; i < proto.length(); ++i)
        for (std::size_t j = 0; j < x.length(); ++j) c[i][j] = oracle::point_cost(proto, i, x, j);
      for (const auto& [i, j] : oracle::dtw_plain(c).second) {
        sum[i] += x(j, 0);
        count[i] += 1;
      }
    }
    for (std::size_t t = 0; t < proto.length(); ++t) proto(t, 0) = sum[t] / count[t];
  }
  return proto;
}

double dtw_objective(const std::vector<TimeSeries>& set, const TimeSeries& p) {
  double s = 0.0;
  for (const auto& x : set) s += dtw(p, x).cost;
  return s;
}

void expect_close(const TimeSeries& a, const TimeSeries& b, double tol) {
  ASSERT_EQ(a.length(), b.length());
  ASSERT_EQ(a.channels(), b.channels());
  for (std::size_t t = 0; t < a.length(); ++t)
    for (std::size_t m = 0; m < a.channels(); ++m) EXPECT_NEAR(a(t, m), b(t, m), tol) << "t=" << t;
}

}  // namespace

TEST(Mean, Examples) {
  auto x = TimeSeries::univariate({1, -2, 3});
  std::vector<TimeSeries> one{x};
  EXPECT_EQ(arithmetic_mean(one).series, x);
  std::vector<TimeSeries> pm{x, TimeSeries::univariate({-1, 2, -3})};
  EXPECT_EQ(arithmetic_mean(pm).series, TimeSeries::univariate({0, 0, 0}));
  std::vector<TimeSeries> mid{TimeSeries::univariate({0, 0}), TimeSeries::univariate({2, 2})};
  EXPECT_EQ(arithmetic_mean(mid).series, TimeSeries::univariate({1, 1}));
  EXPECT_THROW(arithmetic_mean(std::vector<TimeSeries>{}), ArgumentError);
}

TEST(Dba, SingletonFixedPoint) {
  auto x = TimeSeries::univariate({0, 3, 1, 4, 1, 5});
  std::vector<TimeSeries> set{x};
  auto p = dba(set, x);
  EXPECT_EQ(p.series, x);
  EXPECT_EQ(p.iterations, 1u);
  EXPECT_TRUE(p.converged);
}

TEST(Dba, IdenticalCopiesRecovered) {
  std::mt19937_64 g(1);
  auto x = oracle::random_series(g, 24);
  std::vector<TimeSeries> set(5, x);
  auto init = x;
  std::normal_distribution<double> n(0.0, 0.01);
  for (std::size_t t = 0; t < init.length(); ++t) init(t, 0) += n(g);
  auto p = dba(set, init);
  expect_close(p.series, x, 1e-12);
  EXPECT_LE(p.objective_trace.back(), 1e-24);
}

TEST(Dba, MatchesPlainIteration) {
  std::mt19937_64 g(2);
  for (int trial = 0; trial < 10; ++trial) {
    auto set = random_set(g, 6, 12 + trial);
    BarycenterOptions o;
    o.max_iters = 4;
    o.tol = -1.0;
    o.guard_increase = false;
    auto p = dba(set, set[0], o);
    ASSERT_EQ(p.iterations, 4u);
    expect_close(p.series, dba_oracle(set, set[0], 4), 1e-9);
  }
}

TEST(Dba, UnequalLengthsKeepInitLength) {
  std::mt19937_64 g(3);
  std::vector<TimeSeries> set{oracle::random_series(g, 10), oracle::random_series(g, 14), oracle::random_series(g, 7)};
  auto p = dba(set, set[1]);
  EXPECT_EQ(p.series.length(), 14u);
}

TEST(Dba, BeatsMeanOnShiftedSpikes) {
  std::vector<double> a(20, 0.0);
  std::vector<double> b(20, 0.0);
  a[8] = 1.0;
  b[9] = 1.0;
  std::vector<TimeSeries> set{TimeSeries::univariate(a), TimeSeries::univariate(b)};
  auto mean = arithmetic_mean(set).series;
  auto p = dba(set, set[0]);
  EXPECT_LT(dtw_objective(set, p.series), dtw_objective(set, mean));
}

TEST(Dba, ObjectiveTraceMatchesRecomputation) {
  std::mt19937_64 g(4);
  auto set = random_set(g, 5, 16);
  auto p = dba(set);
  EXPECT_NEAR(p.objective_trace[p.iterations - p.rejected_steps], dtw_objective(set, p.series), 1e-9);
}

TEST(Dba, ObjectiveNonIncreasing) {
  std::mt19937_64 g(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto set = random_set(g, 8, 20);
    BarycenterOptions o;
    o.tol = 0.0;
    o.guard_increase = false;
    auto p = dba(set, set[trial % 8], o);
    for (std::size_t i = 1; i < p.objective_trace.size(); ++i)
      EXPECT_LE(p.objective_trace[i], p.objective_trace[i - 1] + 1e-9);
  }
}

TEST(Dba, PermutationInvariant) {
  std::mt19937_64 g(6);
  auto set = random_set(g, 7, 18);
  auto init = set[3];
  auto p = dba(set, init);
  std::vector<TimeSeries> rev(set.rbegin(), set.rend());
  auto q = dba(rev, init);
  expect_close(p.series, q.series, 1e-12);
}

TEST(ShapeDba, ReachZeroEqualsDba) {
  std::mt19937_64 g(7);
  for (int trial = 0; trial < 5; ++trial) {
    auto set = random_set(g, 6, 20);
    auto a = dba(set, set[0]);
    auto b = shape_dba(set, 0, set[0]);
    EXPECT_EQ(a.series, b.series);
    EXPECT_EQ(a.objective_trace, b.objective_trace);
    EXPECT_EQ(a.iterations, b.iterations);
  }
}

TEST(ShapeDba, PairOfCopies) {
  std::mt19937_64 g(8);
  auto x = oracle::random_series(g, 30);
  std::vector<TimeSeries> set{x, x};
  EXPECT_EQ(shape_dba(set, 5).series, x);
}

TEST(ShapeDba, BumpPrototypeStaysInRange) {
  std::vector<TimeSeries> set;
  for (int i = 0; i < 10; ++i) set.push_back(oracle::gaussian_bump(64, 22.0 + 2.0 * i, 4.0));
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& s : set) {
    lo = std::min(lo, s.min_value());
    hi = std::max(hi, s.max_value());
  }
  for (std::size_t r : {1u, 5u, 15u}) {
    auto p = shape_dba(set, r);
    EXPECT_GE(p.series.min_value(), lo - 1e-9);
    EXPECT_LE(p.series.max_value(), hi + 1e-9);
  }
}

TEST(ShapeDba, GuardKeepsAcceptedObjectiveMonotone) {
  std::mt19937_64 g(9);
  for (int trial = 0; trial < 10; ++trial) {
    auto set = random_set(g, 10, 32);
    auto p = shape_dba(set, 5);
    const std::size_t accepted = p.iterations - p.rejected_steps;
    for (std::size_t i = 1; i <= accepted; ++i) EXPECT_LE(p.objective_trace[i], p.objective_trace[i - 1]);
    EXPECT_LE(p.rejected_steps, 1u);
  }
}

TEST(ShapeDba, EqualLengthRequired) {
  std::mt19937_64 g(10);
  std::vector<TimeSeries> set{oracle::random_series(g, 10), oracle::random_series(g, 11)};
  EXPECT_THROW(shape_dba(set, 2, set[0]), ArgumentError);
}

TEST(RandomInit, Deterministic) {
  std::mt19937_64 g(11);
  auto set = random_set(g, 9, 5);
  EXPECT_EQ(random_init(set, 5), random_init(set, 5));
  bool differs = false;
  for (std::uint64_t s = 0; s < 20; ++s) differs |= !(random_init(set, s) == random_init(set, 0));
  EXPECT_TRUE(differs);
}

TEST(NeighborWeights, ClosedFormValues) {
  auto ref = TimeSeries::univariate({0, 0, 0});
  std::vector<TimeSeries> pool{TimeSeries::univariate({1, 1, 0}), TimeSeries::univariate({1, 0, 0})};
  auto nw = neighbor_weights(ref, pool, 2);
  EXPECT_EQ(nw.neighbor_indices, (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(nw.d_nn, 1.0);
  EXPECT_EQ(nw.weights[0], 0.5);
  EXPECT_DOUBLE_EQ(nw.weights[1], 0.25);
  EXPECT_THROW(neighbor_weights(ref, pool, 3), ArgumentError);
}

TEST(NeighborWeights, ZeroDistanceGetsOne) {
  auto ref = TimeSeries::univariate({0, 0, 0});
  std::vector<TimeSeries> pool{TimeSeries::univariate({1, 0, 0}), ref};
  auto nw = neighbor_weights(ref, pool, 2);
  EXPECT_EQ(nw.weights[0], 1.0);
  EXPECT_EQ(nw.weights[1], 0.5);
}

TEST(NeighborWeights, DecreasingInDistance) {
  std::mt19937_64 g(12);
  for (int trial = 0; trial < 20; ++trial) {
    auto ref = oracle::random_series(g, 15);
    auto pool = random_set(g, 12, 15);
    auto nw = neighbor_weights(ref, pool, 6);
    for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(nw.weights[i], std::exp(std::log(0.5) * nw.dtw_distances[i] / nw.d_nn));
    for (std::size_t i = 1; i < 6; ++i) {
      EXPECT_LE(nw.dtw_distances[i - 1], nw.dtw_distances[i]);
      if (nw.dtw_distances[i - 1] < nw.dtw_distances[i]) { EXPECT_GT(nw.weights[i - 1], nw.weights[i]); }
    }
  }
}

TEST(WeightedShapeDba, EqualWeightsMatchUnweighted) {
  std::mt19937_64 g(13);
  auto ref = oracle::random_series(g, 25);
  auto nbs = random_set(g, 4, 25);
  std::vector<double> ones(4, 1.0);
  auto w = weighted_shape_dba(ref, nbs, ones, 3);
  std::vector<TimeSeries> all{ref};
  all.insert(all.end(), nbs.begin(), nbs.end());
  auto u = shape_dba(all, 3, ref);
  EXPECT_EQ(w.series, u.series);
}

TEST(WeightedShapeDba, VanishingWeightsReturnReference) {
  std::mt19937_64 g(14);
  auto ref = oracle::random_series(g, 25);
  auto nbs = random_set(g, 5, 25);
  std::vector<double> tiny(5, 1e-9);
  expect_close(weighted_shape_dba(ref, nbs, tiny, 5).series, ref, 1e-6);
}

TEST(WeightedShapeDba, AlignedPairGivesWeightedMeans) {
  auto ref = TimeSeries::univariate({0, 0, 0, 0, 0});
  std::vector<TimeSeries> nb{TimeSeries::univariate({4, 4, 4, 4, 4})};
  std::vector<double> w1{1.0};
  std::vector<double> w3{3.0};
  EXPECT_EQ(weighted_shape_dba(ref, nb, w1, 2).series, TimeSeries::univariate({2, 2, 2, 2, 2}));
  EXPECT_EQ(weighted_shape_dba(ref, nb, w3, 2).series, TimeSeries::univariate({3, 3, 3, 3, 3}));
}

TEST(LabelWeights, MinMaxThenSum) {
  std::vector<double> w{1.0, 0.5};
  EXPECT_EQ(normalized_label_weights(w), (std::vector<double>{1.0, 0.0}));
  std::vector<double> w3{1.0, 0.5, 0.75};
  auto n3 = normalized_label_weights(w3);
  EXPECT_DOUBLE_EQ(n3[0], 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(n3[2], 1.0 / 3.0);
  std::vector<double> same{0.4, 0.4};
  EXPECT_EQ(normalized_label_weights(same), (std::vector<double>{0.5, 0.5}));
}

TEST(Extend, DoublesAndKeepsLabelsInRange) {
  std::mt19937_64 g(15);
  Dataset d;
  d.label_kind = LabelKind::real;
  std::uniform_real_distribution<double> u(0, 10);
  for (int i = 0; i < 8; ++i) {
    d.samples.push_back(oracle::random_series(g, 20));
    d.labels.push_back(u(g));
  }
  ExtendOptions o;
  o.neighbors = 3;
  o.reach = 2;
  auto e = extend_dataset(d, o);
  ASSERT_EQ(e.size(), 16u);
  const auto [lo, hi] = std::minmax_element(d.labels.begin(), d.labels.end());
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_EQ(e.samples[i], d.samples[i]);
    EXPECT_EQ(e.labels[i], d.labels[i]);
    EXPECT_GE(e.labels[8 + i], *lo);
    EXPECT_LE(e.labels[8 + i], *hi);
  }
}

TEST(Extend, SingleNeighborDegeneracy) {
  Dataset d;
  d.label_kind = LabelKind::real;
  d.samples = {TimeSeries::univariate({0, 1, 0}), TimeSeries::univariate({0, 2, 0}), TimeSeries::univariate({5, 5, 5})};
  d.labels = {1.0, 0.0, 0.5};
  ExtendOptions o;
  o.neighbors = 1;
  o.reach = 1;
  auto e = extend_dataset(d, o);
  EXPECT_EQ(e.labels[3], 1.0);
  EXPECT_EQ(e.labels[4], 0.0);
  d.labels = {2.0, 2.0, 2.0};
  e = extend_dataset(d, o);
  for (std::size_t i = 3; i < 6; ++i) EXPECT_EQ(e.labels[i], 2.0);
}

TEST(Extend, RequiresLabels) {
  Dataset d;
  d.samples = {TimeSeries::univariate({0, 1}), TimeSeries::univariate({1, 0})};
  EXPECT_THROW(extend_dataset(d, {}), ArgumentError);
}
