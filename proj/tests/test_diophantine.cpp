#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "sgg/diophantine.hpp"

using namespace sgg;

namespace {

using Pair = std::pair<QuadInt, QuadInt>;

QuadInt Z(long v) { return QuadInt::of(v, RingId::Integers); }

bool representable_brute(long n) {
  for (long x = 0; x * x <= n; ++x) {
    long r = n - x * x;
    long y = std::lround(std::sqrt(static_cast<double>(r)));
    for (long t = std::max(0L, y - 1); t <= y + 1; ++t)
      if (t * t == r) return true;
  }
  return false;
}

long count_four_squares_brute(long n) {
  long count = 0;
  long b = static_cast<long>(std::sqrt(static_cast<double>(n))) + 1;
  for (long a = -b; a <= b; ++a)
    for (long c = -b; c <= b; ++c)
      for (long d = -b; d <= b; ++d) {
        long r = n - a * a - c * c - d * d;
        if (r < 0) continue;
        long e = std::lround(std::sqrt(static_cast<double>(r)));
        if (e * e == r) count += e == 0 ? 1 : 2;
      }
  return count;
}

long sigma(long n) {
  long s = 0;
  for (long d = 1; d <= n; ++d)
    if (n % d == 0) s += d;
  return s;
}

long double emb(const QuadInt& x, int which) {
  long double w = 0;
  if (x.ring == RingId::Sqrt2) w = which == 0 ? std::sqrt(2.0L) : -std::sqrt(2.0L);
  if (x.ring == RingId::Golden) w = which == 0 ? (1 + std::sqrt(5.0L)) / 2 : (1 - std::sqrt(5.0L)) / 2;
  return x.a.get_d() + x.b.get_d() * w;
}

// Ring elements x with |sigma_i(x)| <= bound_i.
std::vector<QuadInt> box(RingId r, long double b1, long double b2) {
  std::vector<QuadInt> out;
  long lim = static_cast<long>(b1 + b2) + 2;
  for (long a = -lim; a <= lim; ++a)
    for (long b = (r == RingId::Integers ? 0 : -lim); b <= (r == RingId::Integers ? 0 : lim); ++b) {
      QuadInt x(Int(a), Int(b), r);
      if (std::fabs(emb(x, 0)) <= b1 + 1e-9L && (r == RingId::Integers || std::fabs(emb(x, 1)) <= b2 + 1e-9L))
        out.push_back(x);
    }
  return out;
}

std::set<std::string> region_brute(const CapConstraint& c) {
  RingId r = c.n.ring;
  long double r1 = std::sqrt(emb(c.n, 0)), r2 = r == RingId::Integers ? 0 : std::sqrt(emb(c.n, 1));
  auto xs = box(r, r1, r2);
  std::set<std::string> out;
  long double th = (1 - c.epsilon / 2.0L) * r1;
  for (auto& x1 : xs)
    for (auto& x2 : xs) {
      long double u = c.xi1 * emb(x1, 0) + c.xi2 * emb(x2, 0);
      if (!(u > th)) continue;
      QuadInt m = c.n - x1 * x1 - x2 * x2;
      if (emb(m, 0) < -1e-9L) continue;
      if (r != RingId::Integers && emb(m, 1) < -1e-9L) continue;
      if (r == RingId::Integers ? sgn(m.a) < 0 : (embedding_sign(m, 0) < 0 || embedding_sign(m, 1) < 0)) continue;
      out.insert(to_string(x1) + " " + to_string(x2));
    }
  return out;
}

void expect_complete(const CapConstraint& c) {
  auto pts = cap_enumerate(c, 1000000);
  std::set<std::string> got;
  long double prev = INFINITY;
  for (auto& [x1, x2] : pts) {
    got.insert(to_string(x1) + " " + to_string(x2));
    long double u = c.xi1 * emb(x1, 0) + c.xi2 * emb(x2, 0);
    EXPECT_LE(u, prev + 1e-12L);
    prev = u;
  }
  EXPECT_EQ(got.size(), pts.size()) << "duplicates";
  auto want = region_brute(c);
  EXPECT_EQ(got, want) << to_string(c.n) << " eps " << c.epsilon;
  EXPECT_GE(want.size(), 3u) << "degenerate case";
}

}  // namespace

TEST(TwoSquares, Examples) {
  auto a = two_squares(Z(5));
  ASSERT_TRUE(a);
  EXPECT_EQ(a->first, Z(1));
  EXPECT_EQ(a->second, Z(2));
  EXPECT_FALSE(two_squares(Z(21)));
  auto b = two_squares(parse_quadint("3+2*w@sqrt2"));
  ASSERT_TRUE(b);
  EXPECT_EQ(b->first, parse_quadint("1+1*w@sqrt2"));
  EXPECT_TRUE(b->second.is_zero());
}

TEST(TwoSquares, IntegerCriterionMatchesBruteForce) {
  for (long n = 1; n <= 10000; ++n) {
    auto r = two_squares(Z(n));
    ASSERT_EQ(r.has_value(), representable_brute(n)) << n;
    if (r) ASSERT_EQ(r->first.a * r->first.a + r->second.a * r->second.a, n);
  }
}

TEST(TwoSquares, LargeIntegers) {
  Int p("1000000000000000000000000000057");
  auto r = two_squares(QuadInt(p * 25 * 9, Int(0), RingId::Integers));
  ASSERT_TRUE(r);
  EXPECT_EQ(r->first.a * r->first.a + r->second.a * r->second.a, p * 225);
  EXPECT_FALSE(two_squares(QuadInt(p * 3, Int(0), RingId::Integers)));
}

TEST(TwoSquares, RingsAgreeWithBruteForce) {
  for (RingId r : {RingId::Sqrt2, RingId::Golden}) {
    auto xs = box(r, 12, 12);
    std::set<std::string> sums;
    for (auto& x : xs)
      for (auto& y : xs) {
        QuadInt s = x * x + y * y;
        if (!s.is_zero() && emb(s, 0) <= 100 && emb(s, 1) <= 100) sums.insert(to_string(s));
      }
    int checked = 0, missed = 0;
    for (auto& n : box(r, 100, 100)) {
      if (!is_totally_positive(n) || emb(n, 0) > 100 || emb(n, 1) > 100) continue;
      ++checked;
      auto t = two_squares(n);
      bool expect = sums.count(to_string(n)) > 0;
      if (t) {
        EXPECT_EQ(t->first * t->first + t->second * t->second, n);
        EXPECT_TRUE(expect) << to_string(n);
      } else if (expect) {
        ++missed;
        ADD_FAILURE() << "missed representation of " << to_string(n);
      }
    }
    EXPECT_GT(checked, 100);
    EXPECT_EQ(missed, 0);
  }
}

TEST(Cornacchia, Examples) {
  EXPECT_EQ(cornacchia(Int(2)), std::make_pair(Int(1), Int(1)));
  EXPECT_EQ(cornacchia(Int(13)), std::make_pair(Int(2), Int(3)));
  EXPECT_EQ(cornacchia(Int(29)), std::make_pair(Int(2), Int(5)));
  EXPECT_THROW(cornacchia(Int(7)), NoSolution);
}

TEST(Cornacchia, AllSmallPrimes) {
  for (long p = 5; p < 10000; p += 4) {
    bool prime = true;
    for (long d = 2; d * d <= p; ++d)
      if (p % d == 0) prime = false;
    if (!prime) continue;
    auto [x, y] = cornacchia(Int(p));
    ASSERT_EQ(x * x + y * y, p);
    ASSERT_GT(x, 0);
    ASSERT_LE(x, y);
  }
}

TEST(FourSquares, Examples) {
  Rng rng(21);
  for (long n : {3L, 7L}) {
    auto s = four_squares(Int(n), rng);
    std::vector<long> v;
    for (auto& x : s.x) v.push_back(std::labs(x.a.get_si()));
    std::sort(v.begin(), v.end());
    if (n == 3) EXPECT_EQ(v, (std::vector<long>{0, 1, 1, 1}));
    if (n == 7) EXPECT_EQ(v, (std::vector<long>{1, 1, 1, 2}));
  }
  EXPECT_EQ(count_four_squares_brute(9), 104);
  EXPECT_EQ(count_four_squares_brute(9), 8 * sigma(9));
}

TEST(FourSquares, JacobiCountForOddN) {
  for (long n = 1; n <= 199; n += 2) ASSERT_EQ(count_four_squares_brute(n), 8 * sigma(n)) << n;
}

TEST(FourSquares, EverySolutionValidAndSeeded) {
  Rng rng(22);
  for (long n = 1; n < 3000; ++n) {
    auto s = four_squares(Int(n), rng);
    Int sum = 0;
    for (auto& x : s.x) sum += x.a * x.a;
    ASSERT_EQ(sum, n);
  }
  Int big("1000000000000000000000000000000000001");
  Rng a(5), b(5);
  auto s1 = four_squares(big, a), s2 = four_squares(big, b);
  for (int k = 0; k < 4; ++k) EXPECT_EQ(s1.x[k], s2.x[k]);
  Int sum = 0;
  for (auto& x : s1.x) sum += x.a * x.a;
  EXPECT_EQ(sum, big);
}

TEST(CapEnumerate, BoundaryPoint) {
  CapConstraint c{1.0, 0.0, 0.02, Z(25)};
  auto pts = cap_enumerate(c, 100);
  ASSERT_FALSE(pts.empty());
  EXPECT_EQ(pts[0].first, Z(5));
  EXPECT_EQ(pts[0].second, Z(0));
}

TEST(CapEnumerate, PostconditionArithmetic) {
  CapConstraint c{1.0, 0.0, 0.3, Z(6561)};
  auto pts = cap_enumerate(c, 1000000);
  long lo = static_cast<long>(std::ceil((1 - 0.15) * 81));
  std::set<std::pair<long, long>> scan;
  for (long x1 = -81; x1 <= 81; ++x1)
    for (long x2 = -81; x2 <= 81; ++x2)
      if (x1 * x1 + x2 * x2 <= 6561 && x1 > 0.85 * 81) scan.insert({x1, x2});
  std::set<std::pair<long, long>> got;
  for (auto& [a, b] : pts) {
    EXPECT_GE(a.a, lo);
    EXPECT_LE(a.a * a.a + b.a * b.a, 6561);
    got.insert({a.a.get_si(), b.a.get_si()});
  }
  EXPECT_EQ(got, scan);
}

TEST(CapEnumerate, CompleteOverIntegers) {
  expect_complete({1.0, 0.0, 0.3, Z(6561)});
  expect_complete({std::cos(0.7), std::sin(0.7), 0.05, Z(9973)});
  expect_complete({std::cos(2.5), std::sin(2.5), 1.2, Z(4000)});
  expect_complete({std::cos(-1.9), std::sin(-1.9), 0.02, Z(10000)});
  expect_complete({0.0, 1.0, 1.99, Z(997)});
}

TEST(CapEnumerate, CompleteOverRings) {
  // region defined by the strict cap inequality, so eps = 2 keeps the open half-disk
  expect_complete({1.0, 0.0, 2.0, parse_quadint("5-1*w@sqrt2")});
  expect_complete({std::cos(1.1), std::sin(1.1), 0.5, parse_quadint("115-50*w@sqrt2")});
  expect_complete({std::cos(0.3), std::sin(0.3), 1.5, parse_quadint("23@sqrt2")});
  expect_complete({std::cos(4.0), std::sin(4.0), 0.8, parse_quadint("7+5*w@phi")});
  expect_complete({std::cos(2.2), std::sin(2.2), 0.4, parse_quadint("74+115*w@phi")});
  expect_complete({1.0, 0.0, 1.9, parse_quadint("11@phi")});
}

TEST(CapEnumerate, BudgetTruncatesInOrder) {
  CapConstraint c{std::cos(0.4), std::sin(0.4), 0.5, Z(9000)};
  auto all = cap_enumerate(c, 1000000);
  auto few = cap_enumerate(c, 17);
  ASSERT_EQ(few.size(), 17u);
  for (std::size_t k = 0; k < few.size(); ++k) EXPECT_EQ(few[k], all[k]);
}

TEST(CapEnumerate, LargeNormStaysInRegion) {
  QuadInt n = pow(parse_quadint("5-1*w@sqrt2"), 14);
  CapConstraint c{std::cos(0.123), std::sin(0.123), 1e-4, n};
  auto pts = cap_enumerate(c, 200);
  ASSERT_FALSE(pts.empty());
  long double r1 = std::sqrt(emb(n, 0));
  for (auto& [x1, x2] : pts) {
    QuadInt m = n - x1 * x1 - x2 * x2;
    EXPECT_GE(embedding_sign(m, 0), 0);
    EXPECT_GE(embedding_sign(m, 1), 0);
    EXPECT_GT((c.xi1 * emb(x1, 0) + c.xi2 * emb(x2, 0)) / r1, 1 - 0.5e-4 - 1e-12);
  }
}

TEST(ApproxFourSquares, Examples) {
  Rng rng(31);
  auto s = approx_four_squares({1.0, 0.0, 0.02, Z(25)}, SquareMode::Factoring, 10000, rng);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->x[0], Z(5));
  for (int k = 1; k < 4; ++k) EXPECT_TRUE(s->x[k].is_zero());

  // threshold 0.85*sqrt13 ~ 3.06 exceeds every admissible x2, so the region is empty
  EXPECT_TRUE(region_brute({0.0, 1.0, 0.3, Z(13)}).empty());
  EXPECT_FALSE(approx_four_squares({0.0, 1.0, 0.3, Z(13)}, SquareMode::Factoring, 10000, rng));
  auto t = approx_four_squares({0.0, 1.0, 0.4, Z(13)}, SquareMode::Factoring, 10000, rng);
  ASSERT_TRUE(t);
  EXPECT_EQ(t->x[1], Z(3));
  EXPECT_LE(t->x[0].a * t->x[0].a, 4);

  CapConstraint c{std::cos(0.7), std::sin(0.7), 0.1, Z(729)};
  auto u = approx_four_squares(c, SquareMode::Factoring, 10000, rng);
  ASSERT_TRUE(u);
  EXPECT_GT((c.xi1 * u->x[0].a.get_d() + c.xi2 * u->x[1].a.get_d()) / 27, 0.95);
}

TEST(ApproxFourSquares, PrimeOnlyModeRequiresPrimeRemainder) {
  Rng rng(32);
  CapConstraint c{std::cos(1.3), std::sin(1.3), 0.01, Z(3 * 3 * 3 * 3 * 3 * 3 * 3 * 3 * 3 * 3 * 3 * 3)};
  auto s = approx_four_squares(c, SquareMode::PrimeOnly, 10000, rng);
  ASSERT_TRUE(s);
  Int m = c.n.a - s->x[0].a * s->x[0].a - s->x[1].a * s->x[1].a;
  EXPECT_TRUE(is_probable_prime(m));
  EXPECT_EQ(mpz_fdiv_ui(m.get_mpz_t(), 4), 1u);
}

TEST(ApproxFourSquares, RingSolutionsAreExact) {
  Rng rng(33);
  for (const char* base : {"5-1*w@sqrt2", "7+5*w@phi", "4-1*w@phi"}) {
    QuadInt n = pow(parse_quadint(base), 8);
    CapConstraint c{std::cos(0.9), std::sin(0.9), 0.05, n};
    auto s = approx_four_squares(c, SquareMode::Factoring, 10000, rng);
    ASSERT_TRUE(s) << base;
    QuadInt sum = s->x[0] * s->x[0] + s->x[1] * s->x[1] + s->x[2] * s->x[2] + s->x[3] * s->x[3];
    EXPECT_EQ(sum, n);
  }
}

TEST(ApproxFourSquares, Deterministic) {
  CapConstraint c{std::cos(2.0), std::sin(2.0), 0.01, pow(parse_quadint("7+5*w@phi"), 10)};
  Rng a(1), b(1);
  auto s1 = approx_four_squares(c, SquareMode::Factoring, 10000, a);
  auto s2 = approx_four_squares(c, SquareMode::Factoring, 10000, b);
  ASSERT_TRUE(s1 && s2);
  for (int k = 0; k < 4; ++k) EXPECT_EQ(s1->x[k], s2->x[k]);
}
