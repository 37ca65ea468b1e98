#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <set>

#include "sgg/covering.hpp"
#include "sgg/errors.hpp"
#include "sgg/synthesis.hpp"

using namespace sgg;

TEST(Covering, WordCountFormula) {
  const GateSet& p = find_gateset("pauli_t");
  EXPECT_EQ(word_count(p, 0), 4u);
  EXPECT_EQ(word_count(p, 1), 16u);
  EXPECT_EQ(word_count(p, 2), 48u);
  EXPECT_EQ(word_count(p, 3), 144u);
  EXPECT_EQ(word_count(p, 6), 3888u);
  EXPECT_EQ(word_count(find_gateset("icosa60"), 4), 739364400u);
  EXPECT_EQ(word_count(find_gateset("v_gates"), 0), 1u);
  EXPECT_EQ(word_count(find_gateset("v_gates"), 3), 6u * 25u);
}

TEST(Covering, EnumeratePauli) {
  const GateSet& p = find_gateset("pauli_t");
  EXPECT_EQ(enumerate_words(p, 0).size(), 4u);
  EXPECT_EQ(enumerate_words(p, 1).size(), 16u);
  EXPECT_EQ(enumerate_words(p, 3).size(), 144u);
  for (const auto& q : enumerate_words(p, 2)) EXPECT_EQ(t_count(q, p), 2);
  EXPECT_THROW(enumerate_words(find_gateset("icosa60"), 3), InvalidArgument);
}

TEST(Covering, FreenessSmallT) {
  for (const auto& gs : catalog()) {
    int tmax = (gs.name == "pauli_t" || gs.name == "three_t") ? 6 : 4;
    for (int t = 0; t <= tmax; ++t) {
      if (word_count(gs, t) > 20000) break;
      EXPECT_EQ(enumerate_words(gs, t).size(), word_count(gs, t)) << gs.name << " t=" << t;
    }
  }
}

TEST(Covering, FloatCounterMatchesExact) {
  for (const char* name : {"pauli_t", "hurwitz_t", "clifford_t", "octa8", "three_t", "icosa60", "icosa12p", "icosa5"}) {
    const GateSet& gs = find_gateset(name);
    for (int t = 0; t <= 3 && word_count(gs, t) <= 20000; ++t)
      EXPECT_EQ(count_distinct_words(gs, t), enumerate_words(gs, t).size()) << name << " t=" << t;
  }
  EXPECT_THROW(count_distinct_words(find_gateset("hybrid6"), 2), Unsupported);
}

TEST(Covering, NonexamplesCollide) {
  for (const auto& gs : nonexamples()) {
    std::size_t exact = enumerate_words(gs, 2).size();
    EXPECT_LT(exact, word_count(gs, 2)) << gs.name;
    EXPECT_EQ(count_distinct_words(gs, 2), exact) << gs.name;
  }
}

TEST(Covering, SeparationBound) {
  // the gap between distinct coordinates shrinks like N(pi)^(-t/2)
  const GateSet& gs = find_gateset("icosa60");
  EXPECT_NEAR(separation_bound(gs, 4), 1.0 / (8.0 * 59 * 59), 1e-15);
  auto pts = to_points(enumerate_words(gs, 1));
  double gap = 1.0;
  for (std::size_t a = 0; a < pts.size(); a += 7)
    for (std::size_t b = a + 1; b < pts.size(); b += 3)
      for (int i = 0; i < 4; ++i) {
        double d = std::abs(std::abs(pts[a][i]) - std::abs(pts[b][i]));
        if (d > 1e-12) gap = std::min(gap, d);
      }
  EXPECT_GE(gap, separation_bound(gs, 1));
}

TEST(Covering, GoldenWordsAreFree) {
  const GateSet& v = find_gateset("v_gates");
  for (int t = 0; t <= 4; ++t) EXPECT_EQ(enumerate_words(v, t).size(), word_count(v, t));
}

TEST(Covering, InverseClosure) {
  EXPECT_TRUE(inverse_closed(enumerate_words(find_gateset("pauli_t"), 4), find_gateset("pauli_t")));
  EXPECT_TRUE(inverse_closed(enumerate_words(find_gateset("clifford_t"), 2), find_gateset("clifford_t")));
  EXPECT_TRUE(inverse_closed(enumerate_words(find_gateset("icosa60"), 1), find_gateset("icosa60")));
  EXPECT_TRUE(inverse_closed(enumerate_words(find_gateset("hybrid6"), 3), find_gateset("hybrid6")));
  // T-count 1 words alone are not closed once one is dropped
  auto w = enumerate_words(find_gateset("pauli_t"), 1);
  w.pop_back();
  EXPECT_FALSE(inverse_closed(w, find_gateset("pauli_t")));
}

TEST(Covering, HaarSampler) {
  Rng a(5), b(5);
  auto x = haar_points(100000, a);
  EXPECT_EQ(x, haar_points(100000, b));
  for (const auto& p : x) EXPECT_NEAR(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3], 1.0, 1e-12);
  MomentTest m = haar_moment_test(x);
  EXPECT_TRUE(m.pass) << m.mean_trace << " " << m.mean_trace_sq;
  // a sampler concentrated near the identity fails
  std::vector<Point> biased(x.begin(), x.begin() + 10000);
  for (auto& p : biased) p = {std::abs(p[0]) + 0.3, p[1], p[2], p[3]};
  EXPECT_FALSE(haar_moment_test(biased).pass);
}

TEST(Covering, BallVolumeMatchesSampling) {
  Rng rng(6);
  auto x = haar_points(200000, rng);
  const Point id{1, 0, 0, 0};
  for (double r : {0.1, 0.3, 0.5, 0.8}) {
    double hit = 0;
    for (const auto& p : x) hit += point_distance(p, id) <= r;
    double f = hit / static_cast<double>(x.size());
    double v = ball_volume(r);
    EXPECT_NEAR(f, v, 3 * std::sqrt(v * (1 - v) / static_cast<double>(x.size())) + 1e-4) << r;
  }
  EXPECT_EQ(ball_volume(0), 0.0);
  EXPECT_EQ(ball_volume(1), 1.0);
}

TEST(Covering, VpTreeMatchesBruteForce) {
  Rng rng(8);
  auto pts = haar_points(3000, rng);
  auto qs = haar_points(500, rng);
  VpTree tree(pts);
  for (const auto& q : qs) {
    double best = 2;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (point_distance(q, pts[i]) < best) {
        best = point_distance(q, pts[i]);
        arg = i;
      }
    auto [d, i] = tree.nearest(q);
    EXPECT_EQ(d, best);
    EXPECT_EQ(i, arg);
  }
  auto brute = nearest_distances(pts, qs);
  for (std::size_t i = 0; i < qs.size(); ++i) EXPECT_NEAR(brute[i], tree.nearest(qs[i]).first, 1e-12);
}

TEST(Covering, MinPairwiseBothPaths) {
  Rng rng(9);
  auto pts = haar_points(6000, rng);
  double tree = min_pairwise_distance(pts);
  std::vector<Point> head(pts.begin(), pts.begin() + 5000);
  EXPECT_LE(tree, min_pairwise_distance(head) + 1e-15);
  double brute = 2;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) brute = std::min(brute, point_distance(pts[i], pts[j]));
  EXPECT_NEAR(tree, brute, 1e-12);
}

TEST(Covering, IdentityHole) {
  const GateSet& gs = find_gateset("pauli_t");
  std::vector<Point> pts;
  // oracle: for a non-identity Lipschitz element of norm 3^t, x0^2 <= 3^t - 1
  double oracle = 2;
  for (int t = 0; t <= 6; ++t)
    for (const auto& q : enumerate_words(gs, t)) {
      pts.push_back(to_point(q));
      double n = std::pow(3.0, t), x0 = std::abs(q.x[0].a.get_d());
      if (x0 * x0 < n) oracle = std::min(oracle, std::sqrt(1 - x0 / std::sqrt(n)));
    }
  double d = identity_distance(pts);
  EXPECT_NEAR(d, oracle, 1e-12);
  EXPECT_GE(d, identity_hole_bound(gs, 6));
  EXPECT_NEAR(identity_hole_bound(gs, 6), 1 / std::sqrt(2 * 729.0) / 2, 1e-15);
}

TEST(Covering, ReportEmptySamples) {
  CoverReport r = covering_stats(find_gateset("pauli_t"), 2, 0, 1);
  EXPECT_EQ(r.num_points, 48u);
  EXPECT_TRUE(r.distance_quantiles.empty());
  EXPECT_EQ(r.max_sampled_hole, 0.0);
  EXPECT_NE(cover_report_to_json(r).find("\"schema\":1"), std::string::npos);
}

TEST(Covering, ReportRegression) {
  const GateSet& gs = find_gateset("pauli_t");
  CoverReport r = covering_stats(gs, 4, 10000, 7);
  const std::vector<std::pair<double, double>> golden{
      {0.01, 0.026620952225931842}, {0.1, 0.05800467298505541}, {0.25, 0.08218324542968661},
      {0.5, 0.11073072352725402},   {0.75, 0.14011581299226092}, {0.9, 0.17337027233095098},
      {0.99, 0.2283071085235807},   {1.0, 0.31419299612999335}};
  EXPECT_EQ(r.num_points, 432u);
  EXPECT_EQ(r.distance_quantiles, golden);
  EXPECT_EQ(r.max_sampled_hole, 0.31419299612999335);
  // worker count does not change the result
  setenv("SGF_THREADS", "3", 1);
  CoverReport again = covering_stats(gs, 4, 10000, 7);
  unsetenv("SGF_THREADS");
  EXPECT_EQ(cover_report_to_json(again), cover_report_to_json(r));
}

TEST(Covering, HoleProbe) {
  const GateSet& gs = find_gateset("pauli_t");
  Rng rng(10);
  EXPECT_GT(hole_probe(gs, 0, 100, rng), 0.0);
  // nested point sets on a fixed set of centers
  Rng crng(11);
  std::vector<Point> centers = haar_points(3000, crng);
  centers.push_back({1, 0, 0, 0});
  std::vector<Point> pts;
  double prev = 2;
  for (int t = 0; t <= 5; ++t) {
    auto v = to_points(enumerate_words(gs, t));
    pts.insert(pts.end(), v.begin(), v.end());
    auto mids = closest_pair_midpoints(pts, 200);
    double h = hole_radius(pts, centers);
    EXPECT_LE(h, prev) << t;
    prev = h;
    EXPECT_LE(mids.size(), 200u);
  }
}
