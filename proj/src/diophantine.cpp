#include "sgg/diophantine.hpp"

#include <algorithm>
#include <cmath>

namespace sgg {

namespace {

// x + y i over the ring of n.
struct Gauss {
  QuadInt re, im;
};

Gauss gmul(const Gauss& p, const Gauss& q) {
  return {p.re * q.re - p.im * q.im, p.re * q.im + p.im * q.re};
}

Gauss gsub(const Gauss& p, const Gauss& q) { return {p.re - q.re, p.im - q.im}; }

QuadInt gnorm(const Gauss& g) { return g.re * g.re + g.im * g.im; }

Int gsize(const Gauss& g) { return abs(norm(gnorm(g))); }

bool gzero(const Gauss& g) { return g.re.is_zero() && g.im.is_zero(); }

Gauss gpow(Gauss g, int e) {
  RingId r = g.re.ring;
  Gauss out{QuadInt::of(1, r), QuadInt::of(0, r)};
  while (e > 0) {
    if (e & 1) out = gmul(out, g);
    g = gmul(g, g);
    e >>= 1;
  }
  return out;
}

void floor_ceil(const Int& n, const Int& d, Int& lo, Int& hi) {
  mpz_fdiv_q(lo.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  hi = lo + 1;
}

// Remainder of a modulo b with the quotient rounded coordinate-wise (best of 16 neighbors).
std::optional<Gauss> grem(const Gauss& a, const Gauss& b) {
  RingId r = a.re.ring;
  QuadInt nb = gnorm(b);
  QuadInt nbc = conj(nb);
  Int den = norm(nb);
  if (sgn(den) < 0) {
    den = -den;
    nbc = -nbc;
  }
  Gauss num = gmul(a, Gauss{b.re, -b.im});
  QuadInt pr = num.re * nbc, pi = num.im * nbc;
  std::array<Int, 4> c{pr.a, pr.b, pi.a, pi.b};
  std::array<Int, 4> lo, hi;
  for (int k = 0; k < 4; ++k) floor_ceil(c[k], den, lo[k], hi[k]);
  std::vector<int> vary = (r == RingId::Integers) ? std::vector<int>{0, 2} : std::vector<int>{0, 1, 2, 3};
  std::optional<Gauss> best;
  Int best_size;
  for (int mask = 0; mask < (1 << vary.size()); ++mask) {
    std::array<Int, 4> q{0, 0, 0, 0};
    for (std::size_t k = 0; k < vary.size(); ++k) q[vary[k]] = (mask >> k) & 1 ? hi[vary[k]] : lo[vary[k]];
    Gauss quo{QuadInt(q[0], q[1], r), QuadInt(q[2], q[3], r)};
    Gauss rem = gsub(a, gmul(quo, b));
    Int s = gsize(rem);
    if (!best || s < best_size) {
      best = rem;
      best_size = s;
    }
  }
  if (best_size >= gsize(b)) return std::nullopt;
  return best;
}

std::optional<Gauss> ggcd(Gauss a, Gauss b) {
  for (int it = 0; it < 1000 && !gzero(b); ++it) {
    auto r = grem(a, b);
    if (!r) return std::nullopt;
    a = b;
    b = *r;
  }
  if (!gzero(b)) return std::nullopt;
  return a;
}

QuadInt sign_fix(const QuadInt& x) { return embedding_sign(x, 0) < 0 ? -x : x; }

// Element g of O_K[i] with N(g) an associate of the prime P, if the descent finds one.
std::optional<Gauss> split_prime(const QuadInt& P, Rng& rng) {
  RingId r = P.ring;
  Int np = abs(norm(P));
  Int p;
  bool inert = false;
  if (mpz_perfect_square_p(np.get_mpz_t()) && !is_probable_prime(np)) {
    p = sqrt(np);
    inert = true;
  } else {
    p = np;
  }
  std::vector<QuadInt> roots;
  if (p == 2) {
    roots.push_back(QuadInt::of(1, r));
  } else if (mpz_fdiv_ui(p.get_mpz_t(), 4) == 1) {
    roots.push_back(QuadInt(sqrt_minus_one_mod(p, rng), Int(0), r));
  } else if (inert) {
    // nu = t*sqrt(d) with t^2 = -1/d mod p
    Int d = (r == RingId::Sqrt2) ? 2 : 5;
    QuadInt s = (r == RingId::Sqrt2) ? QuadInt::omega(r) : QuadInt(Int(-1), Int(2), r);
    Int inv;
    mpz_invert(inv.get_mpz_t(), d.get_mpz_t(), p.get_mpz_t());
    Int target = (p - inv) % p;
    Int t = sqrt_mod(target, p, rng);
    roots.push_back(QuadInt(t, Int(0), r) * s);
  } else {
    return std::nullopt;
  }
  Gauss gp{P, QuadInt::of(0, r)};
  for (int attempt = 0; attempt < 8; ++attempt) {
    QuadInt nu = roots[0];
    if (attempt & 1) nu = -nu;
    if (attempt >= 2) nu = nu + QuadInt(p * random_below(Int(7), rng), Int(0), r);
    auto g = ggcd(gp, Gauss{nu, QuadInt::of(1, r)});
    if (!g) continue;
    auto u = exact_div(P, gnorm(*g));
    if (u && is_unit(*u)) return g;
  }
  return std::nullopt;
}

std::optional<std::pair<QuadInt, QuadInt>> two_squares_int(const Int& n) {
  if (sgn(n) < 0) return std::nullopt;
  RingId r = RingId::Integers;
  if (sgn(n) == 0) return std::make_pair(QuadInt::of(0, r), QuadInt::of(0, r));
  auto fac = factor_integer(n);
  for (auto& [p, e] : fac)
    if (mpz_fdiv_ui(p.get_mpz_t(), 4) == 3 && e % 2 == 1) return std::nullopt;
  Int x = 1, y = 0;
  auto mul = [&](const Int& a, const Int& b) {
    Int nx = x * a - y * b;
    y = x * b + y * a;
    x = nx;
  };
  for (auto& [p, e] : fac) {
    if (mpz_fdiv_ui(p.get_mpz_t(), 4) == 3) {
      Int s;
      mpz_pow_ui(s.get_mpz_t(), p.get_mpz_t(), e / 2);
      x *= s;
      y *= s;
      continue;
    }
    auto [a, b] = cornacchia(p);
    for (int k = 0; k < e; ++k) mul(a, b);
  }
  x = abs(x);
  y = abs(y);
  if (x > y) std::swap(x, y);
  if (x * x + y * y != n) throw InternalError("two_squares produced a wrong representation");
  return std::make_pair(QuadInt(x, Int(0), r), QuadInt(y, Int(0), r));
}

std::optional<std::pair<QuadInt, QuadInt>> two_squares_ring(const QuadInt& n) {
  RingId r = n.ring;
  if (n.is_zero()) return std::make_pair(QuadInt::of(0, r), QuadInt::of(0, r));
  if (!is_totally_positive(n)) return std::nullopt;
  Rng rng(0x25e ^ mpz_get_ui(n.a.get_mpz_t()) ^ (mpz_get_ui(n.b.get_mpz_t()) << 17));
  Gauss acc{QuadInt::of(1, r), QuadInt::of(0, r)};
  if (!is_unit(n)) {
    PrimeFactorization f = factor(n);
    for (auto& [P, e] : f.factors) {
      bool ramified2 = r == RingId::Sqrt2 && abs(norm(P)) == 2;
      if (ramified2) {
        // sqrt2^2 = 1 + 1; odd powers need (1+sqrt2+i), whose norm is sqrt2^3 times a unit
        if (e == 1) return std::nullopt;
        Gauss one_i{QuadInt::of(1, r), QuadInt::of(1, r)};
        acc = gmul(acc, gpow(one_i, e / 2 - (e % 2 ? 1 : 0)));
        if (e % 2) acc = gmul(acc, Gauss{QuadInt(Int(1), Int(1), r), QuadInt::of(1, r)});
        continue;
      }
      auto g = split_prime(P, rng);
      if (!g) {
        if (e % 2) return std::nullopt;
        acc = gmul(acc, Gauss{pow(P, static_cast<unsigned>(e / 2)), QuadInt::of(0, r)});
        continue;
      }
      acc = gmul(acc, gpow(*g, e));
    }
  }
  auto u = exact_div(n, gnorm(acc));
  if (!u || !is_unit(*u) || !is_totally_positive(*u)) return std::nullopt;
  long k = std::lround(log_abs_embedding(*u, 0) / (2.0 * log_fundamental_unit(r)));
  if (unit_power(r, 2 * k) != *u) return std::nullopt;
  QuadInt s = unit_power(r, k);
  QuadInt x = sign_fix(acc.re * s), y = sign_fix(acc.im * s);
  if (x * x + y * y != n) throw InternalError("two_squares produced a wrong representation");
  return std::make_pair(x, y);
}

long double ring_root(RingId r, int which) {
  switch (r) {
    case RingId::Sqrt2:
      return which == 0 ? std::sqrt(2.0L) : -std::sqrt(2.0L);
    case RingId::Golden:
      return which == 0 ? (1 + std::sqrt(5.0L)) / 2 : (1 - std::sqrt(5.0L)) / 2;
    default:
      return 0;
  }
}

// Real embedding of an element in long double.
long double embed_ld(const QuadInt& x, int which) {
  Real v = embed_real(x, which, 96);
  return mpfr_get_ld(v.get(), MPFR_RNDN);
}

// Columns of b (row-major, stride 4) reduced in place; u tracks the unimodular transform.
void lll(int d, std::array<long double, 16>& b, std::array<long double, 16>& u) {
  auto col_dot = [&](const std::array<long double, 16>& m, int i, const std::array<long double, 16>& n, int j) {
    long double s = 0;
    for (int k = 0; k < d; ++k) s += m[k * 4 + i] * n[k * 4 + j];
    return s;
  };
  u.fill(0);
  for (int i = 0; i < d; ++i) u[i * 4 + i] = 1;
  const long double delta = 0.99L;
  int k = 1;
  int guard = 0;
  while (k < d && guard++ < 10000) {
    std::array<long double, 16> bs{};
    std::array<long double, 16> mu{};
    std::array<long double, 4> bn{};
    for (int i = 0; i < d; ++i) {
      for (int r = 0; r < d; ++r) bs[r * 4 + i] = b[r * 4 + i];
      for (int j = 0; j < i; ++j) {
        mu[i * 4 + j] = col_dot(b, i, bs, j) / bn[j];
        for (int r = 0; r < d; ++r) bs[r * 4 + i] -= mu[i * 4 + j] * bs[r * 4 + j];
      }
      bn[i] = col_dot(bs, i, bs, i);
    }
    for (int j = k - 1; j >= 0; --j) {
      long double q = std::round(mu[k * 4 + j]);
      if (q == 0) continue;
      for (int r = 0; r < d; ++r) {
        b[r * 4 + k] -= q * b[r * 4 + j];
        u[r * 4 + k] -= q * u[r * 4 + j];
      }
      for (int l = 0; l <= j; ++l) mu[k * 4 + l] -= q * (l == j ? 1 : mu[j * 4 + l]);
    }
    if (bn[k] >= (delta - mu[k * 4 + k - 1] * mu[k * 4 + k - 1]) * bn[k - 1]) {
      ++k;
    } else {
      for (int r = 0; r < d; ++r) {
        std::swap(b[r * 4 + k], b[r * 4 + k - 1]);
        std::swap(u[r * 4 + k], u[r * 4 + k - 1]);
      }
      k = std::max(k - 1, 1);
    }
  }
}

}  // namespace

std::pair<Int, Int> cornacchia(const Int& p) {
  if (p == 2) return {Int(1), Int(1)};
  if (p < 2 || mpz_fdiv_ui(p.get_mpz_t(), 4) != 1) throw NoSolution("p is not 2 or 1 mod 4");
  Rng rng(0xc0c ^ mpz_get_ui(p.get_mpz_t()));
  Int a = p, b = sqrt_minus_one_mod(p, rng);
  if (2 * b < p) b = p - b;
  while (b * b > p) {
    Int t = a % b;
    a = b;
    b = t;
  }
  Int y2 = p - b * b;
  Int y = sqrt(y2);
  if (y * y != y2) throw InvalidArgument("cornacchia needs a prime");
  Int x = b;
  if (x > y) std::swap(x, y);
  return {x, y};
}

std::optional<std::pair<QuadInt, QuadInt>> two_squares(const QuadInt& n) {
  if (n.ring == RingId::Integers) return two_squares_int(n.a);
  return two_squares_ring(n);
}

FourSquareSolution four_squares(const Int& n, Rng& rng) {
  if (n < 1) throw InvalidArgument("four_squares needs n >= 1");
  RingId r = RingId::Integers;
  for (long it = 0; it < 10000000; ++it) {
    Int x3 = random_below(Int(sqrt(n)) + 1, rng);
    Int rest = n - x3 * x3;
    Int x4 = random_below(Int(sqrt(rest)) + 1, rng);
    Int m = rest - x4 * x4;
    bool quick = sgn(m) == 0 || m == 1 || m == 2 ||
                 (mpz_fdiv_ui(m.get_mpz_t(), 4) == 1 && is_probable_prime(m));
    // large composites are skipped; small ones are cheap to factor
    if (!quick && mpz_sizeinbase(m.get_mpz_t(), 2) > 40) continue;
    auto ts = two_squares_int(m);
    if (!ts) continue;
    FourSquareSolution s{{ts->first, ts->second, QuadInt(x3, Int(0), r), QuadInt(x4, Int(0), r)}};
    Int sum = 0;
    for (auto& v : s.x) sum += v.a * v.a;
    if (sum != n) throw InternalError("four_squares produced a wrong solution");
    return s;
  }
  throw InternalError("four_squares did not terminate");
}

bool enumerate_ellipsoid(int dim, const std::array<long double, 16>& b0, const std::array<long double, 4>& t,
                         long double r2, std::size_t limit,
                         const std::function<void(const std::array<long, 4>&)>& emit) {
  const int d = dim;
  std::array<long double, 16> b = b0, u{};
  lll(d, b, u);
  // Cholesky of the Gram matrix of the reduced columns
  long double g[4][4] = {};
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) g[i][j] += b[k * 4 + i] * b[k * 4 + j];
  long double rr[4][4] = {};
  for (int i = 0; i < d; ++i) {
    long double s = g[i][i];
    for (int k = 0; k < i; ++k) s -= rr[k][i] * rr[k][i];
    if (s <= 0) throw InternalError("degenerate lattice in enumeration");
    rr[i][i] = std::sqrt(s);
    for (int j = i + 1; j < d; ++j) {
      long double v = g[i][j];
      for (int k = 0; k < i; ++k) v -= rr[k][i] * rr[k][j];
      rr[i][j] = v / rr[i][i];
    }
  }
  // center: solve B y = t by least squares through the normal equations
  std::array<long double, 4> rhs{};
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) rhs[i] += b[k * 4 + i] * t[k];
  std::array<long double, 4> w{};
  for (int i = 0; i < d; ++i) {
    long double s = rhs[i];
    for (int k = 0; k < i; ++k) s -= rr[k][i] * w[k];
    w[i] = s / rr[i][i];
  }
  std::array<long double, 4> yc{};
  for (int i = d - 1; i >= 0; --i) {
    long double s = w[i];
    for (int k = i + 1; k < d; ++k) s -= rr[i][k] * yc[k];
    yc[i] = s / rr[i][i];
  }
  long double bound = r2 * (1 + 1e-9L) + 1e-12L;
  std::array<long double, 4> y{};
  std::size_t count = 0;
  bool ok = true;
  std::function<void(int, long double)> rec = [&](int i, long double left) {
    if (!ok) return;
    if (i < 0) {
      if (++count > limit) {
        ok = false;
        return;
      }
      std::array<long, 4> z{};
      for (int r = 0; r < d; ++r) {
        long double s = 0;
        for (int c = 0; c < d; ++c) s += u[r * 4 + c] * y[c];
        z[r] = std::llround(s);
      }
      emit(z);
      return;
    }
    long double c = yc[i];
    for (int j = i + 1; j < d; ++j) c -= rr[i][j] / rr[i][i] * (y[j] - yc[j]);
    long double q = rr[i][i] * rr[i][i];
    long double span = std::sqrt(std::max(left, 0.0L) / q);
    long double lo = std::ceil(c - span), hi = std::floor(c + span);
    for (long double v = lo; v <= hi && ok; v += 1) {
      y[i] = v;
      rec(i - 1, left - q * (v - c) * (v - c));
    }
  };
  rec(d - 1, bound);
  return ok;
}

CapEnumerator::CapEnumerator(CapConstraint c) : c_(std::move(c)) {
  RingId r = c_.n.ring;
  dim_ = (r == RingId::Integers) ? 2 : 4;
  w1_ = ring_root(r, 0);
  w2_ = ring_root(r, 1);
  if (c_.n.is_zero() || (r == RingId::Integers ? sgn(c_.n.a) < 0 : !is_totally_positive(c_.n))) {
    done_ = true;
    return;
  }
  r1_ = std::sqrt(embed_ld(c_.n, 0));
  r2_ = r == RingId::Integers ? 0 : std::sqrt(embed_ld(c_.n, 1));
  if (std::max(r1_, r2_) > 1e15L) throw Unsupported("cap enumeration needs sqrt(n) below 1e15");
  lo_ = std::max<long double>((1 - c_.epsilon / 2) * r1_, -r1_) - 1e-9L * (r1_ + 1);
  hi_ = r1_ * (1 + 1e-15L) + 1e-12L;
  width_ = hi_ - lo_;
}

std::pair<QuadInt, QuadInt> CapEnumerator::to_pair(const std::array<long, 4>& z) const {
  RingId r = c_.n.ring;
  if (dim_ == 2) return {QuadInt::of(z[0], r), QuadInt::of(z[1], r)};
  return {QuadInt(Int(z[0]), Int(z[1]), r), QuadInt(Int(z[2]), Int(z[3]), r)};
}

bool CapEnumerator::in_region(const std::pair<QuadInt, QuadInt>& p) const {
  const auto& [x1, x2] = p;
  QuadInt m = c_.n - x1 * x1 - x2 * x2;
  if (embedding_sign(m, 0) < 0) return false;
  if (c_.n.ring != RingId::Integers && embedding_sign(m, 1) < 0) return false;
  mpfr_prec_t prec = std::max<mpfr_prec_t>(embedding_precision(c_.n), 128) + 64;
  Real a = embed_real(x1, 0, prec), b = embed_real(x2, 0, prec), rt = embed_real(c_.n, 0, prec);
  mpfr_mul_d(a.get(), a.get(), c_.xi1, MPFR_RNDN);
  mpfr_mul_d(b.get(), b.get(), c_.xi2, MPFR_RNDN);
  mpfr_add(a.get(), a.get(), b.get(), MPFR_RNDN);
  mpfr_sqrt(rt.get(), rt.get(), MPFR_RNDN);
  Real th(prec);
  mpfr_set_d(th.get(), c_.epsilon, MPFR_RNDN);
  mpfr_div_ui(th.get(), th.get(), 2, MPFR_RNDN);
  mpfr_ui_sub(th.get(), 1, th.get(), MPFR_RNDN);
  mpfr_mul(rt.get(), rt.get(), th.get(), MPFR_RNDN);
  return mpfr_greater_p(a.get(), rt.get()) != 0;
}

bool CapEnumerator::fill_slab() {
  constexpr std::size_t kSlabLimit = 200000;
  const long double xi1 = c_.xi1, xi2 = c_.xi2;
  auto u_of = [&](const std::array<long, 4>& z) -> long double {
    if (dim_ == 2) return xi1 * z[0] + xi2 * z[1];
    return xi1 * (z[0] + z[1] * w1_) + xi2 * (z[2] + z[3] * w1_);
  };
  while (hi_ > lo_) {
    long double lo_s = std::max(lo_, hi_ - width_);
    long double mid = (lo_s + hi_) / 2;
    const long double min_width = 1e-9L * std::max<long double>(r1_, 1);
    long double half = std::max<long double>((hi_ - lo_s) / 2, min_width / 2);
    long double wv = lo_s >= 0 ? std::sqrt(std::max<long double>(r1_ * r1_ - lo_s * lo_s, 0)) : r1_;
    wv = std::max<long double>(wv, 1e-6L * (r1_ + 1));
    std::array<long double, 16> b{};
    std::array<long double, 4> t{mid / half, 0, 0, 0};
    if (dim_ == 2) {
      b[0] = xi1 / half;
      b[1] = xi2 / half;
      b[4] = -xi2 * shrink_ / wv;
      b[5] = xi1 * shrink_ / wv;
    } else {
      const long double row_u[4] = {xi1, xi1 * w1_, xi2, xi2 * w1_};
      const long double row_v[4] = {-xi2, -xi2 * w1_, xi1, xi1 * w1_};
      for (int k = 0; k < 4; ++k) {
        b[k] = row_u[k] / half;
        b[4 + k] = row_v[k] * shrink_ / wv;
      }
      b[8] = shrink_ / r2_;
      b[9] = w2_ * shrink_ / r2_;
      b[14] = shrink_ / r2_;
      b[15] = w2_ * shrink_ / r2_;
    }
    std::vector<Point> pts;
    bool ok = enumerate_ellipsoid(dim_, b, t, 3.0L, kSlabLimit, [&](const std::array<long, 4>& z) {
      long double u = u_of(z);
      if (u < lo_s || u >= hi_) return;
      pts.push_back({u, z});
    });
    if (!ok) {
      // below the precision floor the transverse directions are narrowed instead
      if (width_ > min_width)
        width_ = std::max(width_ / 2, min_width);
      else
        shrink_ *= 2;
      continue;
    }
    std::vector<Point> keep;
    const long double tol1 = 1e-15L * (r1_ * r1_ + 1), tol2 = 1e-15L * (r2_ * r2_ + 1);
    for (auto& p : pts) {
      // cheap rejection away from the boundary, exact test otherwise
      const auto& z = p.z;
      long double a1 = z[0] + z[1] * w1_, a2 = z[2] + z[3] * w1_;
      if (dim_ == 2) a1 = z[0], a2 = z[1];
      if (a1 * a1 + a2 * a2 > r1_ * r1_ + tol1) continue;
      if (dim_ == 4) {
        long double b1 = z[0] + z[1] * w2_, b2 = z[2] + z[3] * w2_;
        if (b1 * b1 + b2 * b2 > r2_ * r2_ + tol2) continue;
      }
      if (in_region(to_pair(z))) keep.push_back(p);
    }
    std::sort(keep.begin(), keep.end(), [](const Point& l, const Point& r) {
      if (l.u != r.u) return l.u > r.u;
      return l.z > r.z;
    });
    hi_ = lo_s;
    if (pts.size() < kSlabLimit / 8) {
      if (shrink_ > 1)
        shrink_ /= 2;
      else
        width_ *= 2;
    }
    if (!keep.empty()) {
      pending_ = std::move(keep);
      pos_ = 0;
      return true;
    }
  }
  done_ = true;
  return false;
}

std::optional<std::pair<QuadInt, QuadInt>> CapEnumerator::next() {
  while (pos_ >= pending_.size()) {
    if (done_ || !fill_slab()) return std::nullopt;
  }
  return to_pair(pending_[pos_++].z);
}

std::vector<std::pair<QuadInt, QuadInt>> cap_enumerate(const CapConstraint& c, std::size_t budget) {
  std::vector<std::pair<QuadInt, QuadInt>> out;
  CapEnumerator e(c);
  while (out.size() < budget) {
    auto p = e.next();
    if (!p) break;
    out.push_back(std::move(*p));
  }
  return out;
}

std::optional<FourSquareSolution> approx_four_squares(const CapConstraint& c, SquareMode mode,
                                                      std::size_t budget, Rng& rng) {
  (void)rng;
  CapEnumerator e(c);
  for (std::size_t i = 0; i < budget; ++i) {
    auto p = e.next();
    if (!p) return std::nullopt;
    QuadInt m = c.n - p->first * p->first - p->second * p->second;
    if (mode == SquareMode::PrimeOnly) {
      Int nm = abs(norm(m));
      if (mpz_fdiv_ui(nm.get_mpz_t(), 4) != 1 || !is_probable_prime(nm)) continue;
    }
    auto ts = two_squares(m);
    if (!ts) continue;
    FourSquareSolution s{{p->first, p->second, ts->first, ts->second}};
    QuadInt sum = s.x[0] * s.x[0] + s.x[1] * s.x[1] + s.x[2] * s.x[2] + s.x[3] * s.x[3];
    if (sum != c.n) throw InternalError("approx_four_squares produced a wrong solution");
    return s;
  }
  return std::nullopt;
}

}  // namespace sgg
