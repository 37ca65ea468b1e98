#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>
#include <set>

#include "sgg/errors.hpp"
#include "sgg/synthesis.hpp"

using namespace sgg;

namespace {

Quaternion zq(long a, long b, long c, long d) { return Quaternion::from_ints(a, b, c, d, RingId::Integers); }

Word random_word(const GateSet& gs, int t, Rng& rng) {
  Word w;
  w.gateset = gs.name;
  if (gs.is_super()) {
    std::vector<int> cs;
    for (int i = 0; i <= t; ++i) {
      int c;
      do c = static_cast<int>(rng() % gs.C.size());
      while (c == 0 && i > 0 && i < t);
      cs.push_back(c);
    }
    return make_super_word(gs, cs);
  }
  for (int i = 0; i < t; ++i) {
    int g;
    do g = static_cast<int>(rng() % gs.gens.size());
    while (i > 0 && gs.inverse[w.letters.back()] == g);
    w.letters.push_back(g);
  }
  w.tcount = t;
  return w;
}

std::array<double, 4> haar(Rng& rng) {
  std::normal_distribution<double> n;
  std::array<double, 4> v;
  double s = 0;
  for (auto& x : v) {
    x = n(rng);
    s += x * x;
  }
  for (auto& x : v) x /= std::sqrt(s);
  return v;
}

// Smallest T-count of a word within eps of the target, by enumerating every word with t <= tmax.
int brute_force_min_tcount(const GateSet& gs, const UnitaryMatrix& target, double eps, int tmax) {
  std::vector<UnitaryMatrix> cm;
  for (const auto& c : gs.C) cm.push_back(to_su2(c));
  UnitaryMatrix tm = to_su2(gs.T);
  int best = -1;
  std::function<void(const UnitaryMatrix&, int, int)> rec = [&](const UnitaryMatrix& m, int t, int last) {
    // m ends with some c; either stop here or append T c'
    if (pu2_distance(m, target) <= eps && (best < 0 || t < best)) best = t;
    if (t == tmax || (best >= 0 && t >= best)) return;
    UnitaryMatrix mt = mat_mul(m, tm);
    for (std::size_t c = 0; c < cm.size(); ++c) {
      (void)last;
      rec(mat_mul(mt, cm[c]), t + 1, static_cast<int>(c));
    }
  };
  // interior identities only shorten a word, so allowing them does not change the minimum
  for (std::size_t c = 0; c < cm.size(); ++c) rec(cm[c], 0, static_cast<int>(c));
  return best;
}

}  // namespace

TEST(Synthesis, TCountExamples) {
  const GateSet& gs = find_gateset("pauli_t");
  EXPECT_EQ(t_count(zq(0, 1, 0, 0), gs), 0);
  EXPECT_EQ(t_count(zq(0, 1, 1, 1), gs), 1);
  Quaternion T = zq(0, 1, 1, 1);
  Quaternion tit = multiply(multiply(T, zq(0, 1, 0, 0)), T);
  EXPECT_EQ(t_count(tit, gs), 2);
  EXPECT_EQ(reduced_norm(gs.canonical(tit)), QuadInt::of(9, RingId::Integers));
  EXPECT_THROW(t_count(zq(3, 2, 1, 1), gs), NotAMember);
}

TEST(Synthesis, ExactExamples) {
  const GateSet& gs = find_gateset("pauli_t");
  Word w = exact_synthesize(zq(0, 1, 1, 1), gs);
  EXPECT_EQ(w.letters, (std::vector<int>{0, Word::kT, 0}));
  EXPECT_EQ(w.tcount, 1);
  EXPECT_THROW(exact_synthesize(zq(3, 2, 1, 1), gs), NotAMember);
  EXPECT_THROW(exact_synthesize(zq(1, 1, 0, 0), gs), NotAMember);
  // i lies in the Lipschitz order but not in the group generated by the V-gates
  EXPECT_THROW(exact_synthesize(zq(0, 1, 0, 0), find_gateset("v_gates")), NotAMember);
  EXPECT_TRUE(exact_synthesize(zq(1, 0, 0, 0), find_gateset("v_gates")).letters.empty());
  // j+2k has norm 5 but is not a product of V-gates
  EXPECT_THROW(exact_synthesize(zq(0, 0, 1, 2), find_gateset("v_gates")), NotAMember);
}

TEST(Synthesis, RoundTripEveryGateSet) {
  Rng rng(11);
  for (const auto& gs : catalog())
    for (int it = 0; it < 150; ++it) {
      Word w = random_word(gs, static_cast<int>(rng() % 31), rng);
      Quaternion q = evaluate(w, gs);
      ASSERT_EQ(t_count(q, gs), w.tcount) << gs.name;
      ASSERT_EQ(exact_synthesize(q, gs), w) << gs.name << " " << word_to_string(w);
    }
}

TEST(Synthesis, RoundTripIgnoresScalars) {
  Rng rng(12);
  for (const char* name : {"clifford_t", "icosa60", "hybrid6"}) {
    const GateSet& gs = find_gateset(name);
    Word w = random_word(gs, 7, rng);
    Quaternion q = evaluate(w, gs);
    QuadInt s = gs.ring == RingId::Integers ? QuadInt::of(-6, gs.ring) : fundamental_unit(gs.ring) * 3;
    EXPECT_EQ(exact_synthesize(scale(q, s), gs), w) << name;
  }
}

TEST(Synthesis, WordsAreDistinctAtSmallT) {
  for (const char* name : {"pauli_t", "three_t", "hybrid6", "icosa5"}) {
    const GateSet& gs = find_gateset(name);
    std::set<std::string> seen;
    std::size_t words = 0;
    std::function<void(std::vector<int>&, int)> rec = [&](std::vector<int>& cs, int t) {
      if (static_cast<int>(cs.size()) == t + 1) {
        ++words;
        seen.insert(to_string(evaluate(make_super_word(gs, cs), gs)));
        return;
      }
      bool interior = !cs.empty() && static_cast<int>(cs.size()) < t;
      for (std::size_t c = interior ? 1 : 0; c < gs.C.size(); ++c) {
        cs.push_back(static_cast<int>(c));
        rec(cs, t);
        cs.pop_back();
      }
    };
    for (int t = 1; t <= 3; ++t) {
      std::vector<int> cs;
      rec(cs, t);
    }
    EXPECT_EQ(seen.size(), words) << name;
  }
}

TEST(Synthesis, ApproxDiagonalTrivialCases) {
  for (const auto& gs : catalog()) {
    auto r = approx_diagonal(0.0, 0.01, gs);
    ASSERT_TRUE(r.success) << gs.name;
    EXPECT_EQ(r.word.tcount, 0) << gs.name;
    EXPECT_NEAR(r.achieved_distance, 0.0, 1e-7) << gs.name;
    auto one = approx_diagonal(1.234, 1.0, gs);
    ASSERT_TRUE(one.success);
    EXPECT_EQ(one.word.tcount, 0);
  }
  EXPECT_THROW(approx_diagonal(0.3, 0.0, find_gateset("pauli_t")), InvalidArgument);
  EXPECT_THROW(approx_diagonal(0.3, 1.5, find_gateset("pauli_t")), InvalidArgument);
}

TEST(Synthesis, ApproxDiagonalVerifies) {
  Rng rng(13);
  std::uniform_real_distribution<double> ang(0, 4 * M_PI);
  for (const auto& gs : catalog())
    for (double eps : {0.1, 0.01}) {
      double theta = ang(rng);
      auto r = approx_diagonal(theta, eps, gs);
      ASSERT_TRUE(r.success) << gs.name << " " << theta << " " << eps;
      double d = pu2_distance(to_su2(evaluate(r.word, gs)), rz(theta));
      EXPECT_LE(d, eps) << gs.name;
      EXPECT_NEAR(d, r.achieved_distance, 1e-12);
      EXPECT_LE(r.word.tcount, default_max_tcount(eps, gs));
    }
}

TEST(Synthesis, ApproxDiagonalIsOptimalAtSmallScale) {
  const GateSet& gs = find_gateset("pauli_t");
  Rng rng(14);
  std::uniform_real_distribution<double> ang(0, 4 * M_PI);
  std::vector<double> thetas{0.7};
  for (int i = 0; i < 12; ++i) thetas.push_back(ang(rng));
  for (double theta : thetas) {
    auto r = approx_diagonal(theta, 0.25, gs);
    ASSERT_TRUE(r.success);
    int oracle = brute_force_min_tcount(gs, rz(theta), 0.25, 6);
    ASSERT_GE(oracle, 0);
    EXPECT_EQ(r.word.tcount, oracle) << theta;
  }
}

TEST(Synthesis, ZyzAnglesReconstruct) {
  Rng rng(15);
  for (int it = 0; it < 200; ++it) {
    auto q = haar(rng);
    auto [a, b, c] = zyz_angles(q);
    UnitaryMatrix m = mat_mul(mat_mul(rz(a), vector_to_su2({std::cos(b / 2), 0, -std::sin(b / 2), 0})), rz(c));
    EXPECT_LT(pu2_distance(m, vector_to_su2(q)), 1e-7);
    EXPECT_GE(b, 0);
    EXPECT_LE(b, M_PI + 1e-12);
  }
}

TEST(Synthesis, ApproxGeneral) {
  const GateSet& pauli = find_gateset("pauli_t");
  auto exact = approx_general(to_su2(pauli.T), 1e-3, pauli);
  ASSERT_TRUE(exact.success);
  EXPECT_EQ(exact.word.tcount, 1);

  auto diag = approx_general(rz(0.9), 0.05, pauli);
  auto single = approx_diagonal(0.9, 0.05, pauli);
  ASSERT_TRUE(diag.success && single.success);
  EXPECT_LE(diag.word.tcount, single.word.tcount);

  const GateSet& cl = find_gateset("clifford_t");
  Rng rng(16);
  for (int it = 0; it < 50; ++it) {
    UnitaryMatrix u = vector_to_su2(haar(rng));
    auto r = approx_general(u, 1e-2, cl);
    ASSERT_TRUE(r.success);
    EXPECT_LE(pu2_distance(to_su2(evaluate(r.word, cl)), u), 1e-2);
  }
  EXPECT_THROW(approx_general(rz(0.1), 0.1, find_gateset("three_t")), Unsupported);
  EXPECT_THROW(approx_general(rz(0.1), 0.1, find_gateset("v_gates")), Unsupported);
}

TEST(Synthesis, ConcatenateMatchesProduct) {
  Rng rng(17);
  const GateSet& gs = find_gateset("hurwitz_t");
  for (int it = 0; it < 50; ++it) {
    Word a = random_word(gs, static_cast<int>(rng() % 6), rng), b = random_word(gs, static_cast<int>(rng() % 6), rng);
    Word w = concatenate({a, b}, gs);
    EXPECT_EQ(evaluate(w, gs), gs.canonical(multiply(evaluate(a, gs), evaluate(b, gs))));
    EXPECT_LE(w.tcount, a.tcount + b.tcount);
  }
}

TEST(Synthesis, NormsArePiPowersTimesSquareUnits) {
  Rng rng(18);
  for (const auto& gs : catalog()) {
    if (gs.ring == RingId::Integers) continue;
    QuadInt pp = totally_positive_associate(gs.pi);
    for (int it = 0; it < 20; ++it) {
      Word w = random_word(gs, static_cast<int>(rng() % 12), rng);
      Quaternion q = evaluate(w, gs);
      QuadInt n = reduced_norm(q);
      auto u = exact_div(n, pow(pp, static_cast<unsigned>(w.tcount)));
      ASSERT_TRUE(u.has_value()) << gs.name;
      bool square = false;
      for (long m = -60; m <= 60 && !square; ++m) square = *u == unit_power(gs.ring, 2 * m);
      EXPECT_TRUE(square) << gs.name << " " << to_string(*u);
    }
  }
}
