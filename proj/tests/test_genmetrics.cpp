#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>

#include "oracles.hpp"
#include "warpkit/error.hpp"
#include "warpkit/genmetrics.hpp"

using namespace warpkit;

namespace {

oracle::Rows gaussian_rows(std::mt19937_64& g, std::size_t n, std::size_t f, double shift = 0.0) {
  std::normal_distribution<double> nd(0.0, 1.0);
  oracle::Rows rows(n, std::vector<double>(f));
  for (auto& r : rows)
    for (auto& v : r) v = nd(g) + shift;
  return rows;
}

// Replays the documented draw rule: forward Fisher-Yates where position i
// swaps with i + u, u uniform in [0, n - i) by rejection on 64-bit words.
std::vector<std::size_t> replay_permutation(std::mt19937_64& e, std::size_t n) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::uint64_t range = n - i;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t v = e();
    while (v >= limit) v = e();
    std::swap(p[i], p[i + static_cast<std::size_t>(v % range)]);
  }
  return p;
}

double apd_replay(const oracle::Rows& v, std::size_t S, std::size_t R, std::uint64_t seed) {
  std::mt19937_64 e(seed);
  double total = 0.0;
  for (std::size_t r = 0; r < R; ++r) {
    auto p = replay_permutation(e, v.size());
    double s = 0.0;
    for (std::size_t i = 0; i < S; ++i) s += oracle::dist(v[p[i]], v[p[S + i]]);
    total += s / static_cast<double>(S);
  }
  return total / static_cast<double>(R);
}

std::size_t path_diagonal_sum(const WarpingPath& p) {
  std::size_t s = 0;
  for (const auto& st : p.steps()) s += st.i > st.j ? st.i - st.j : st.j - st.i;
  return s;
}

}  // namespace

TEST(LatentSet, Validation) {
  EXPECT_THROW(LatentSet(2, 2, {1, 2, 3}), ArgumentError);
  EXPECT_THROW(LatentSet(2, 1, {1, NAN}), ArgumentError);
  EXPECT_THROW(LatentSet(2, 1, {1, 2}, {1}), ArgumentError);
  auto v = LatentSet::from_rows({{1, 2}, {3, 4}, {5, 6}}, {0, 1, 0});
  EXPECT_EQ(v.row(1)[1], 4.0);
  std::vector<std::size_t> idx{2, 0};
  auto s = v.subset(idx);
  EXPECT_EQ(s.rows, 2u);
  EXPECT_EQ(s.row(0)[0], 5.0);
  EXPECT_EQ(s.labels, (std::vector<long long>{0, 0}));
}

TEST(ReferenceSplit, PartitionAndDeterminism) {
  std::mt19937_64 g(1);
  auto rows = gaussian_rows(g, 4, 1);
  for (std::size_t i = 0; i < 4; ++i) rows[i][0] = static_cast<double>(i);
  auto v = LatentSet::from_rows(rows);
  auto [a, b] = reference_split(v, 3);
  EXPECT_EQ(a.rows, 2u);
  EXPECT_EQ(b.rows, 2u);
  std::set<double> seen;
  for (std::size_t i = 0; i < 2; ++i) {
    seen.insert(a.row(i)[0]);
    seen.insert(b.row(i)[0]);
  }
  EXPECT_EQ(seen.size(), 4u);
  auto [a2, b2] = reference_split(v, 3);
  EXPECT_EQ(a.values, a2.values);

  auto big = LatentSet::from_rows(gaussian_rows(g, 21, 2));
  auto [c, d] = reference_split(big, 0);
  EXPECT_EQ(c.rows, 11u);
  EXPECT_EQ(d.rows, 10u);
  std::set<std::vector<double>> splits;
  for (std::uint64_t s = 0; s < 100; ++s) splits.insert(reference_split(big, s).first.values);
  EXPECT_GT(splits.size(), 90u);
  EXPECT_THROW(reference_split(LatentSet::from_rows({{1}, {2}, {3}}), 0), ArgumentError);
}

TEST(Fid, IdentityShiftAndScalar) {
  std::mt19937_64 g(2);
  auto rows = gaussian_rows(g, 60, 4);
  auto a = LatentSet::from_rows(rows);
  EXPECT_LE(std::abs(fid(a, a)), 1e-8);
  auto shifted = rows;
  const std::vector<double> m{0.5, -1.0, 2.0, 0.25};
  for (auto& r : shifted)
    for (std::size_t d = 0; d < 4; ++d) r[d] += m[d];
  EXPECT_NEAR(fid(a, LatentSet::from_rows(shifted)), 0.25 + 1.0 + 4.0 + 0.0625, 1e-9);

  GaussianSummary s1{1, {0.0}, {1.0}};
  GaussianSummary s2{1, {1.2}, {1.8}};
  EXPECT_NEAR(frechet_distance_squared(s1, s2), 1.44 + 1.0 + 1.8 - 2.0 * std::sqrt(1.8), 1e-12);
  EXPECT_NEAR(frechet_distance_squared(s1, s2), 1.5567, 1e-4);
}

TEST(Fid, SymmetricAndRegularized) {
  std::mt19937_64 g(3);
  auto a = LatentSet::from_rows(gaussian_rows(g, 40, 3));
  auto b = LatentSet::from_rows(gaussian_rows(g, 50, 3, 0.7));
  EXPECT_NEAR(fid(a, b), fid(b, a), 1e-9);
  auto small = LatentSet::from_rows(gaussian_rows(g, 4, 6));
  bool reg = false;
  auto s = summarize(small, &reg);
  EXPECT_TRUE(reg);
  EXPECT_LE(std::abs(fid(small, small)), 1e-8);
  EXPECT_EQ(s.covariance.size(), 36u);
}

TEST(Fid, CovarianceUsesUnbiasedDenominator) {
  auto v = LatentSet::from_rows({{1}, {2}, {3}, {6}});
  auto s = summarize(v);
  EXPECT_EQ(s.mean[0], 3.0);
  EXPECT_DOUBLE_EQ(s.covariance[0], (4.0 + 1.0 + 0.0 + 9.0) / 3.0);
}

TEST(Aog, Examples) {
  std::vector<long long> a{1, 2, 3, 4};
  std::vector<long long> b{1, 2, 0, 0};
  std::vector<long long> c{0, 0, 0, 0};
  EXPECT_EQ(aog(a, a), 1.0);
  EXPECT_EQ(aog(a, b), 0.5);
  EXPECT_EQ(aog(a, c), 0.0);
  EXPECT_THROW(aog(a, std::vector<long long>{1}), ArgumentError);
}

TEST(NeighborMetrics, MatchBruteForce) {
  std::mt19937_64 g(4);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t k = 1 + g() % 5;
    const std::size_t N = k + 1 + g() % (50 - k);
    const std::size_t G = k + 1 + g() % (50 - k);
    const std::size_t f = 1 + g() % 8;
    auto real = gaussian_rows(g, N, f);
    auto gen = gaussian_rows(g, G, f, 0.3);
    const auto o = oracle::neighbor_metrics(real, gen, k);
    const auto fi = knn_fidelity(LatentSet::from_rows(real), LatentSet::from_rows(gen), k);
    const auto di = knn_diversity(LatentSet::from_rows(real), LatentSet::from_rows(gen), k, 2);
    EXPECT_EQ(fi.precision, o.precision);
    EXPECT_EQ(fi.density, o.density);
    EXPECT_EQ(di.recall, o.recall);
    EXPECT_EQ(di.coverage, o.coverage);
  }
}

TEST(NeighborMetrics, OutlierConstruction) {
  auto real = LatentSet::from_rows({{0}, {1}, {2}, {3}, {100}});
  auto gen = LatentSet::from_rows({{1.4}, {1.6}, {60}, {70}});
  const auto fi = knn_fidelity(real, gen, 2);
  EXPECT_EQ(fi.precision, 1.0);
  EXPECT_EQ(fi.density, 1.25);
}

TEST(NeighborMetrics, CopiesAndFarAway) {
  std::mt19937_64 g(5);
  auto rows = gaussian_rows(g, 20, 3);
  auto v = LatentSet::from_rows(rows);
  auto fi = knn_fidelity(v, v, 3);
  auto di = knn_diversity(v, v, 3);
  EXPECT_EQ(fi.precision, 1.0);
  EXPECT_EQ(di.recall, 1.0);
  EXPECT_EQ(di.coverage, 1.0);
  EXPECT_EQ(fi.density, oracle::neighbor_metrics(rows, rows, 3).density);
  auto far = LatentSet::from_rows(gaussian_rows(g, 10, 3, 1000.0));
  auto ff = knn_fidelity(v, far, 3);
  EXPECT_EQ(ff.precision, 0.0);
  EXPECT_EQ(ff.density, 0.0);
  EXPECT_THROW(knn_fidelity(v, far, 20), ArgumentError);
}

TEST(NeighborMetrics, KthDistances) {
  auto v = LatentSet::from_rows({{0}, {1}, {3}, {7}});
  EXPECT_EQ(kth_neighbor_distances(v, 1), (std::vector<double>{1, 1, 2, 4}));
  EXPECT_EQ(kth_neighbor_distances(v, 2), (std::vector<double>{3, 2, 3, 6}));
}

TEST(Apd, Examples) {
  auto same = LatentSet::from_rows({{1, 1}, {1, 1}, {1, 1}, {1, 1}});
  EXPECT_EQ(apd(same, 2, 5, 0), 0.0);
  auto two = LatentSet::from_rows({{0, 0}, {3, 4}});
  EXPECT_EQ(apd(two, 1, 7, 9), 5.0);
  EXPECT_THROW(apd(two, 2, 1, 0), ArgumentError);
}

TEST(Apd, ReplayOracle) {
  std::mt19937_64 g(6);
  auto rows = gaussian_rows(g, 80, 5);
  auto v = LatentSet::from_rows(rows);
  for (std::uint64_t seed : {0u, 1u, 77u}) EXPECT_EQ(apd(v, 20, 10, seed), apd_replay(rows, 20, 10, seed));
}

TEST(Acpd, SingleClassEqualsApd) {
  std::mt19937_64 g(7);
  auto rows = gaussian_rows(g, 30, 3);
  auto labelled = LatentSet::from_rows(rows, std::vector<long long>(30, 4));
  EXPECT_EQ(acpd(labelled, 10, 5, 3), apd(LatentSet::from_rows(rows), 10, 5, 3));
}

TEST(Acpd, TwoClassReplay) {
  std::mt19937_64 g(8);
  auto rows = gaussian_rows(g, 25, 2);
  std::vector<long long> labels;
  for (std::size_t i = 0; i < 25; ++i) labels.push_back(i % 3 == 0 ? 7 : 2);
  auto v = LatentSet::from_rows(rows, labels);
  // Classes in ascending label order share one generator; each uses
  // min(S, size / 2) pairs.
  std::map<long long, oracle::Rows> classes;
  for (std::size_t i = 0; i < 25; ++i) classes[labels[i]].push_back(rows[i]);
  std::mt19937_64 e(5);
  const std::size_t S = 6;
  double total = 0.0;
  for (int r = 0; r < 4; ++r) {
    double per = 0.0;
    for (const auto& [label, members] : classes) {
      const std::size_t s = std::min(S, members.size() / 2);
      auto p = replay_permutation(e, members.size());
      double sum = 0.0;
      for (std::size_t i = 0; i < s; ++i) sum += oracle::dist(members[p[i]], members[p[s + i]]);
      per += sum / static_cast<double>(s);
    }
    total += per / static_cast<double>(classes.size());
  }
  EXPECT_EQ(acpd(v, S, 4, 5), total / 4.0);
}

TEST(Acpd, ZeroWithinClassesAndSkipsSmall) {
  auto v = LatentSet::from_rows({{0}, {0}, {0}, {0}, {5}, {5}, {5}, {5}, {9}}, {1, 1, 1, 1, 2, 2, 2, 2, 3});
  std::vector<long long> skipped;
  EXPECT_EQ(acpd(v, 20, 3, 0, &skipped), 0.0);
  EXPECT_EQ(skipped, (std::vector<long long>{3}));
  EXPECT_THROW(acpd(LatentSet::from_rows({{0}, {1}}), 1, 1, 0), ArgumentError);
}

TEST(Mms, ExamplesAndBruteForce) {
  auto real = LatentSet::from_rows({{0, 0}, {1, 0}, {5, 5}});
  auto copies = LatentSet::from_rows({{1, 0}, {5, 5}});
  EXPECT_EQ(mms(real, copies).generated, 0.0);
  auto single = LatentSet::from_rows({{0, 2}});
  EXPECT_EQ(mms(real, single).generated, 2.0);

  std::mt19937_64 g(9);
  for (int trial = 0; trial < 20; ++trial) {
    auto r = gaussian_rows(g, 2 + g() % 30, 3);
    auto q = gaussian_rows(g, 1 + g() % 30, 3);
    double gen = 0.0;
    for (const auto& x : q) {
      double best = INFINITY;
      for (const auto& y : r) best = std::min(best, oracle::dist(x, y));
      gen += best;
    }
    const auto nn1 = oracle::nnd(r, 1);
    double real_mean = 0.0;
    for (double d : nn1) real_mean += d;
    const auto m = mms(LatentSet::from_rows(r), LatentSet::from_rows(q));
    EXPECT_EQ(m.generated, gen / static_cast<double>(q.size()));
    EXPECT_EQ(m.real, real_mean / static_cast<double>(r.size()));
  }
}

TEST(Wpd, DiagonalDistanceIsPerpendicular) {
  for (std::size_t L = 1; L <= 6; ++L) {
    oracle::enumerate_paths(L, L, [&](const oracle::Path& p) {
      for (const auto& [i, j] : p) {
        const double foot = (static_cast<double>(i) + static_cast<double>(j)) / 2.0;
        const double perp = std::hypot(static_cast<double>(i) - foot, static_cast<double>(j) - foot);
        EXPECT_NEAR(diagonal_distance(i, j), perp, 1e-12);
      }
    });
  }
}

TEST(Wpd, OneStepShift) {
  auto x = TimeSeries::univariate({0, 0, 1, 0, 0, 0});
  auto y = TimeSeries::univariate({0, 0, 0, 1, 0, 0});
  // The best enumerated path, ties broken the same way as the library.
  double best = INFINITY;
  oracle::enumerate_paths(6, 6, [&](const oracle::Path& p) {
    double s = 0.0;
    for (const auto& [i, j] : p) s = oracle::point_cost(x, i, y, j) + s;
    best = std::min(best, s);
  });
  const auto a = dtw(x, y);
  EXPECT_EQ(a.cost, best);
  EXPECT_EQ(a.cost, 0.0);
  EXPECT_NEAR(wpd_distance(a.path), std::sqrt(2.0) / (2.0 * a.path.size()) * path_diagonal_sum(a.path), 1e-15);
  EXPECT_GT(wpd_distance(a.path), 0.0);
}

TEST(Wpd, IdenticalAndBounded) {
  std::mt19937_64 g(10);
  auto x = oracle::random_series(g, 16);
  std::vector<TimeSeries> same(8, x);
  EXPECT_EQ(wpd(same, 4, 3, 0), 0.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t L = 4 + g() % 20;
    std::vector<TimeSeries> set;
    for (int i = 0; i < 8; ++i) set.push_back(oracle::random_series(g, L));
    const double w = wpd(set, 4, 3, trial);
    EXPECT_GE(w, 0.0);
    EXPECT_LE(w, std::sqrt(2.0) / 4.0 * (static_cast<double>(L) + 1.0));
    EXPECT_EQ(w, wpd(set, 4, 3, trial, 3));
  }
}

TEST(Evaluate, ReportsEveryMetricWithParams) {
  std::mt19937_64 g(11);
  auto real_rows = gaussian_rows(g, 30, 4);
  auto gen_rows = gaussian_rows(g, 24, 4, 0.2);
  std::vector<long long> rl, gl, pred;
  for (std::size_t i = 0; i < 30; ++i) rl.push_back(static_cast<long long>(i % 2));
  for (std::size_t i = 0; i < 24; ++i) {
    gl.push_back(static_cast<long long>(i % 2));
    pred.push_back(i % 4 == 0 ? 1 - gl.back() : gl.back());
  }
  EvaluationInput in;
  in.real = LatentSet::from_rows(real_rows, rl);
  in.generated = LatentSet::from_rows(gen_rows, gl);
  in.predicted = pred;
  for (int i = 0; i < 6; ++i) {
    in.raw_real.push_back(oracle::random_series(g, 12));
    in.raw_generated.push_back(oracle::random_series(g, 12));
  }
  EvaluationOptions o;
  o.k = 3;
  std::vector<std::string> notes;
  auto rep = evaluate_generation(in, o, &notes);
  for (const char* name : {"fid", "precision", "density", "recall", "coverage", "apd", "acpd", "mms", "aog", "wpd"})
    EXPECT_TRUE(rep.count(name)) << name;
  EXPECT_EQ(rep["aog"].value, 0.75);
  EXPECT_EQ(rep["apd"].params["S"], 12.0);
  EXPECT_EQ(rep["apd"].params["S_real"], 15.0);
  EXPECT_EQ(rep["wpd"].params["S"], 3.0);
  EXPECT_EQ(rep["precision"].params["k"], 3.0);
  EXPECT_TRUE(rep["fid"].real_reference.has_value());
  auto again = evaluate_generation(in, o);
  EXPECT_EQ(again["apd"].value, rep["apd"].value);
  EXPECT_EQ(again["wpd"].value, rep["wpd"].value);
}
