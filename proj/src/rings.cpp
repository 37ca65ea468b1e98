#include "sgg/rings.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <mutex>

namespace sgg {

namespace {

void check_same(const QuadInt& x, const QuadInt& y) {
  if (x.ring != y.ring) throw InvalidArgument("ring mismatch");
}

// Sign of u + v*sqrt(d).
int sign_surd(const Int& u, const Int& v, unsigned long d) {
  int su = sgn(u), sv = sgn(v);
  if (su >= 0 && sv >= 0) return (su > 0 || sv > 0) ? 1 : 0;
  if (su <= 0 && sv <= 0) return -1;
  Int lhs = u * u;
  Int rhs = v * v * d;
  int c = cmp(lhs, rhs);
  return su > 0 ? c : -c;
}

// Embedding written as (u + v*sqrt(d)) / den.
struct Surd {
  Int u, v;
  unsigned long d;
  double den;
};

Surd to_surd(const QuadInt& x, int which) {
  switch (x.ring) {
    case RingId::Integers:
      return {x.a, Int(0), 1, 1.0};
    case RingId::Sqrt2:
      return {x.a, which == 0 ? Int(x.b) : Int(-x.b), 2, 1.0};
    case RingId::Golden:
      return {Int(2 * x.a + x.b), which == 0 ? Int(x.b) : Int(-x.b), 5, 2.0};
  }
  return {};
}

double log_abs_mpz(const Int& z) {
  long e = 0;
  double m = mpz_get_d_2exp(&e, z.get_mpz_t());
  return std::log(std::fabs(m)) + static_cast<double>(e) * std::log(2.0);
}

const std::vector<unsigned long>& small_primes() {
  static std::vector<unsigned long> primes;
  static std::once_flag once;
  std::call_once(once, [] {
    const unsigned long limit = 1000000;
    std::vector<bool> sieve(limit + 1, true);
    sieve[0] = sieve[1] = false;
    for (unsigned long i = 2; i * i <= limit; ++i)
      if (sieve[i])
        for (unsigned long j = i * i; j <= limit; j += i) sieve[j] = false;
    for (unsigned long i = 2; i <= limit; ++i)
      if (sieve[i]) primes.push_back(i);
  });
  return primes;
}

Int pollard_brent(const Int& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1;; ++c) {
    Int y = 2, x, ys, q = 1, g = 1;
    unsigned long r = 1;
    const unsigned long m = 128;
    auto f = [&](const Int& v) {
      Int t = v * v + c;
      mpz_mod(t.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
      return t;
    };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = f(y);
      unsigned long k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          Int diff = abs(x - y);
          q = q * diff;
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        Int diff = abs(x - ys);
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_rec(const Int& n, std::vector<Int>& out) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    out.push_back(n);
    return;
  }
  Int d = pollard_brent(n);
  factor_rec(d, out);
  factor_rec(Int(n / d), out);
}

bool less_quad(const QuadInt& x, const QuadInt& y) {
  Int nx = abs(norm(x)), ny = abs(norm(y));
  if (nx != ny) return nx < ny;
  if (x.a != y.a) return x.a < y.a;
  return x.b < y.b;
}

}  // namespace

const char* ring_tag(RingId r) {
  switch (r) {
    case RingId::Integers:
      return "int";
    case RingId::Sqrt2:
      return "sqrt2";
    case RingId::Golden:
      return "phi";
  }
  return "?";
}

RingId parse_ring_tag(std::string_view tag) {
  if (tag == "int" || tag == "Z") return RingId::Integers;
  if (tag == "sqrt2") return RingId::Sqrt2;
  if (tag == "phi") return RingId::Golden;
  throw InvalidArgument("unknown ring tag: " + std::string(tag));
}

QuadInt::QuadInt(Int a_, Int b_, RingId r) : a(std::move(a_)), b(std::move(b_)), ring(r) {
  if (r == RingId::Integers && sgn(b) != 0) throw InvalidArgument("integer ring element with w part");
}

QuadInt QuadInt::of(long v, RingId r) { return QuadInt(Int(v), Int(0), r); }

QuadInt QuadInt::omega(RingId r) {
  if (r == RingId::Integers) throw InvalidArgument("integers have no w");
  return QuadInt(Int(0), Int(1), r);
}

bool operator==(const QuadInt& x, const QuadInt& y) {
  return x.ring == y.ring && x.a == y.a && x.b == y.b;
}

QuadInt operator+(const QuadInt& x, const QuadInt& y) {
  check_same(x, y);
  QuadInt r;
  r.ring = x.ring;
  r.a = x.a + y.a;
  r.b = x.b + y.b;
  return r;
}

QuadInt operator-(const QuadInt& x, const QuadInt& y) {
  check_same(x, y);
  QuadInt r;
  r.ring = x.ring;
  r.a = x.a - y.a;
  r.b = x.b - y.b;
  return r;
}

QuadInt operator-(const QuadInt& x) {
  QuadInt r;
  r.ring = x.ring;
  r.a = -x.a;
  r.b = -x.b;
  return r;
}

QuadInt operator*(const QuadInt& x, const QuadInt& y) {
  check_same(x, y);
  QuadInt r;
  r.ring = x.ring;
  switch (x.ring) {
    case RingId::Integers:
      r.a = x.a * y.a;
      break;
    case RingId::Sqrt2: {
      Int bd = x.b * y.b;
      r.a = x.a * y.a + 2 * bd;
      r.b = x.a * y.b + x.b * y.a;
      break;
    }
    case RingId::Golden: {
      Int bd = x.b * y.b;
      r.a = x.a * y.a + bd;
      r.b = x.a * y.b + x.b * y.a + bd;
      break;
    }
  }
  return r;
}

QuadInt operator*(const QuadInt& x, long s) {
  QuadInt r;
  r.ring = x.ring;
  r.a = x.a * s;
  r.b = x.b * s;
  return r;
}

QuadInt pow(const QuadInt& x, unsigned e) {
  QuadInt result = QuadInt::of(1, x.ring), base = x;
  while (e) {
    if (e & 1u) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

QuadInt conj(const QuadInt& x) {
  QuadInt r;
  r.ring = x.ring;
  switch (x.ring) {
    case RingId::Integers:
      r.a = x.a;
      break;
    case RingId::Sqrt2:
      r.a = x.a;
      r.b = -x.b;
      break;
    case RingId::Golden:
      r.a = x.a + x.b;
      r.b = -x.b;
      break;
  }
  return r;
}

Int norm(const QuadInt& x) {
  switch (x.ring) {
    case RingId::Integers:
      return x.a;
    case RingId::Sqrt2:
      return x.a * x.a - 2 * x.b * x.b;
    case RingId::Golden:
      return x.a * x.a + x.a * x.b - x.b * x.b;
  }
  return 0;
}

bool is_unit(const QuadInt& x) {
  Int n = norm(x);
  return n == 1 || n == -1;
}

int embedding_sign(const QuadInt& x, int which) {
  Surd s = to_surd(x, which);
  return sign_surd(s.u, s.v, s.d);
}

bool is_totally_positive(const QuadInt& x) {
  if (x.ring == RingId::Integers) return sgn(x.a) > 0;
  return embedding_sign(x, 0) > 0 && embedding_sign(x, 1) > 0;
}

double log_abs_embedding(const QuadInt& x, int which) {
  if (x.is_zero()) throw InvalidArgument("log of zero embedding");
  Surd s = to_surd(x, which);
  if (sgn(s.v) == 0) return log_abs_mpz(s.u) - std::log(s.den);
  if (sgn(s.u) == 0) return log_abs_mpz(s.v) + 0.5 * std::log(double(s.d)) - std::log(s.den);
  if (sgn(s.u) == sgn(s.v)) {
    double lu = log_abs_mpz(s.u), lv = log_abs_mpz(s.v) + 0.5 * std::log(double(s.d));
    double hi = std::max(lu, lv), lo = std::min(lu, lv);
    return hi + std::log1p(std::exp(lo - hi)) - std::log(s.den);
  }
  // Cancellation: |sigma_w| = |N| / |sigma_other| with the other free of cancellation.
  Int n = s.u * s.u - s.v * s.v * s.d;
  QuadInt other = x;
  double lo_other = log_abs_embedding(other, 1 - which);
  return log_abs_mpz(n) - 2.0 * std::log(s.den) - lo_other;
}

double embedding(const QuadInt& x, int which) {
  if (x.is_zero()) return 0.0;
  return embedding_sign(x, which) * std::exp(log_abs_embedding(x, which));
}

QuadInt fundamental_unit(RingId r) {
  switch (r) {
    case RingId::Integers:
      return QuadInt::of(1, r);
    case RingId::Sqrt2:
      return QuadInt(Int(1), Int(1), r);
    case RingId::Golden:
      return QuadInt(Int(0), Int(1), r);
  }
  return {};
}

QuadInt unit_power(RingId r, long m) {
  if (r == RingId::Integers) return QuadInt::of(1, r);
  QuadInt e = fundamental_unit(r);
  // Both fundamental units have norm -1, so eps^-1 = -conj(eps).
  QuadInt base = m >= 0 ? e : -conj(e);
  return pow(base, static_cast<unsigned>(m >= 0 ? m : -m));
}

double log_fundamental_unit(RingId r) {
  switch (r) {
    case RingId::Integers:
      return 0.0;
    case RingId::Sqrt2:
      return std::log(1.0 + std::sqrt(2.0));
    case RingId::Golden:
      return std::log((1.0 + std::sqrt(5.0)) / 2.0);
  }
  return 0.0;
}

std::optional<QuadInt> exact_div(const QuadInt& x, const QuadInt& y) {
  check_same(x, y);
  if (y.is_zero()) throw InvalidArgument("division by zero");
  if (x.ring == RingId::Integers) {
    if (!mpz_divisible_p(x.a.get_mpz_t(), y.a.get_mpz_t())) return std::nullopt;
    return QuadInt(Int(x.a / y.a), Int(0), x.ring);
  }
  QuadInt num = x * conj(y);
  Int d = norm(y);
  if (!mpz_divisible_p(num.a.get_mpz_t(), d.get_mpz_t()) ||
      !mpz_divisible_p(num.b.get_mpz_t(), d.get_mpz_t()))
    return std::nullopt;
  QuadInt q;
  q.ring = x.ring;
  mpz_divexact(q.a.get_mpz_t(), num.a.get_mpz_t(), d.get_mpz_t());
  mpz_divexact(q.b.get_mpz_t(), num.b.get_mpz_t(), d.get_mpz_t());
  return q;
}

bool divides(const QuadInt& d, const QuadInt& x) {
  if (d.is_zero()) return x.is_zero();
  return exact_div(x, d).has_value();
}

Int round_div(const Int& n, const Int& d) {
  Int nn = n, dd = d;
  if (sgn(dd) < 0) {
    nn = -nn;
    dd = -dd;
  }
  Int q, t = 2 * nn + dd, den = 2 * dd;
  mpz_fdiv_q(q.get_mpz_t(), t.get_mpz_t(), den.get_mpz_t());
  return q;
}

std::pair<QuadInt, QuadInt> divmod(const QuadInt& x, const QuadInt& y) {
  check_same(x, y);
  if (y.is_zero()) throw InvalidArgument("division by zero");
  QuadInt q;
  q.ring = x.ring;
  if (x.ring == RingId::Integers) {
    q.a = round_div(x.a, y.a);
  } else {
    QuadInt num = x * conj(y);
    Int d = norm(y);
    q.a = round_div(num.a, d);
    q.b = round_div(num.b, d);
  }
  QuadInt r = x - q * y;
  return {q, r};
}

QuadInt euclidean_gcd(const QuadInt& x, const QuadInt& y) {
  check_same(x, y);
  if (x.is_zero() && y.is_zero()) throw InvalidArgument("gcd(0, 0)");
  QuadInt u = x, v = y;
  while (!v.is_zero()) {
    QuadInt r = divmod(u, v).second;
    u = std::move(v);
    v = std::move(r);
  }
  return normalize_unit(u);
}

QuadInt normalize_unit(const QuadInt& x) {
  if (x.is_zero()) return x;
  if (x.ring == RingId::Integers) return QuadInt(abs(x.a), Int(0), x.ring);
  double l = log_abs_embedding(x, 0);
  double le = log_fundamental_unit(x.ring);
  long m = std::lround(-l / le);
  long best = m;
  double best_v = std::fabs(l + m * le);
  for (long c : {m - 1, m + 1}) {
    double v = std::fabs(l + c * le);
    if (v < best_v) {
      best_v = v;
      best = c;
    }
  }
  QuadInt r = x * unit_power(x.ring, best);
  if (embedding_sign(r, 0) < 0) r = -r;
  return r;
}

QuadInt PrimeFactorization::product() const {
  QuadInt r = unit;
  for (const auto& [p, e] : factors) r = r * pow(p, static_cast<unsigned>(e));
  return r;
}

bool is_probable_prime(const Int& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 64) > 0;
}

std::vector<std::pair<Int, int>> factor_integer(const Int& n0) {
  if (sgn(n0) <= 0) throw InvalidArgument("factor_integer needs a positive integer");
  std::vector<std::pair<Int, int>> out;
  if (is_probable_prime(n0)) {
    out.emplace_back(n0, 1);
    return out;
  }
  Int n = n0;
  bool cofactor_prime = false;
  for (unsigned long p : small_primes()) {
    if (n == 1) break;
    if (mpz_cmp_ui(n.get_mpz_t(), p * p) < 0) {
      cofactor_prime = true;
      break;
    }
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      int e = 0;
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
        mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
        ++e;
      }
      out.emplace_back(Int(p), e);
    }
  }
  if (n > 1) {
    std::vector<Int> big;
    if (cofactor_prime)
      big.push_back(n);
    else
      factor_rec(n, big);
    std::sort(big.begin(), big.end());
    for (const Int& p : big) {
      if (!out.empty() && out.back().first == p)
        ++out.back().second;
      else
        out.emplace_back(p, 1);
    }
  }
  return out;
}

Int random_below(const Int& n, Rng& rng) {
  // Rejection-free draw with 64 extra bits; bias is negligible.
  size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2) + 64;
  Int r = 0;
  for (size_t got = 0; got < bits; got += 64) {
    r <<= 64;
    std::uint64_t w = rng();
    Int wi;
    mpz_import(wi.get_mpz_t(), 1, 1, sizeof(w), 0, 0, &w);
    r += wi;
  }
  mpz_mod(r.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t());
  return r;
}

Int sqrt_mod(const Int& a0, const Int& p, Rng& rng) {
  Int a;
  mpz_mod(a.get_mpz_t(), a0.get_mpz_t(), p.get_mpz_t());
  if (a == 0) return 0;
  if (p == 2) return a;
  if (mpz_legendre(a.get_mpz_t(), p.get_mpz_t()) != 1) throw NoSolution("not a quadratic residue");
  // Tonelli-Shanks: p - 1 = q * 2^s.
  Int q = p - 1;
  unsigned long s = 0;
  while (mpz_even_p(q.get_mpz_t())) {
    q >>= 1;
    ++s;
  }
  Int z;
  do {
    z = random_below(p, rng);
  } while (z == 0 || mpz_legendre(z.get_mpz_t(), p.get_mpz_t()) != -1);
  Int c, r, t, e = (q + 1) / 2;
  mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
  mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
  mpz_powm(t.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
  unsigned long m = s;
  while (t != 1) {
    unsigned long i = 0;
    Int tt = t;
    while (tt != 1) {
      tt = tt * tt % p;
      ++i;
    }
    Int b = c;
    for (unsigned long k = 0; k + i + 1 < m; ++k) b = b * b % p;
    r = r * b % p;
    c = b * b % p;
    t = t * c % p;
    m = i;
  }
  return r;
}

Int sqrt_minus_one_mod(const Int& p, Rng& rng) {
  if (p == 2) return 1;
  if (p < 2 || mpz_fdiv_ui(p.get_mpz_t(), 4) != 1) throw NoSolution("p is not 2 or 1 mod 4");
  Int e = (p - 1) / 4, m1 = p - 1;
  for (;;) {
    Int z = random_below(p, rng);
    if (z == 0) continue;
    Int v;
    mpz_powm(v.get_mpz_t(), z.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    Int sq = v * v % p;
    if (sq == m1) return v;
  }
}

std::vector<std::pair<QuadInt, int>> primes_above(const Int& p, RingId r) {
  std::vector<std::pair<QuadInt, int>> out;
  if (r == RingId::Integers) {
    out.emplace_back(QuadInt(p, Int(0), r), 1);
    return out;
  }
  Rng rng(0x5eed ^ mpz_get_ui(p.get_mpz_t()));
  if (r == RingId::Sqrt2) {
    if (p == 2) {
      out.emplace_back(QuadInt::omega(r), 2);
      return out;
    }
    unsigned long m8 = mpz_fdiv_ui(p.get_mpz_t(), 8);
    if (m8 == 3 || m8 == 5) {
      out.emplace_back(QuadInt(p, Int(0), r), 1);
      return out;
    }
    Int s = sqrt_mod(Int(2), p, rng);
    QuadInt pi = euclidean_gcd(QuadInt(p, Int(0), r), QuadInt(s, Int(-1), r));
    out.emplace_back(pi, 1);
    out.emplace_back(normalize_unit(conj(pi)), 1);
  } else {
    if (p == 5) {
      out.emplace_back(normalize_unit(QuadInt(Int(-1), Int(2), r)), 2);
      return out;
    }
    unsigned long m5 = mpz_fdiv_ui(p.get_mpz_t(), 5);
    if (m5 == 2 || m5 == 3) {
      out.emplace_back(QuadInt(p, Int(0), r), 1);
      return out;
    }
    Int s = sqrt_mod(Int(5), p, rng);
    Int inv2;
    Int two = 2;
    mpz_invert(inv2.get_mpz_t(), two.get_mpz_t(), p.get_mpz_t());
    Int root = (1 + s) * inv2 % p;
    QuadInt pi = euclidean_gcd(QuadInt(p, Int(0), r), QuadInt(root, Int(-1), r));
    out.emplace_back(pi, 1);
    out.emplace_back(normalize_unit(conj(pi)), 1);
  }
  for (auto& [q, e] : out)
    if (is_unit(q)) throw InternalError("prime splitting produced a unit");
  return out;
}

PrimeFactorization factor(const QuadInt& x) {
  if (x.is_zero()) throw InvalidArgument("factor(0)");
  PrimeFactorization out;
  if (x.ring == RingId::Integers) {
    out.unit = QuadInt::of(sgn(x.a), x.ring);
    for (auto& [p, e] : factor_integer(abs(x.a))) out.factors.emplace_back(QuadInt(p, Int(0), x.ring), e);
    return out;
  }
  QuadInt rest = x;
  Int n = abs(norm(x));
  if (n != 1) {
    for (auto& [p, e] : factor_integer(n)) {
      for (auto& [pi, ep] : primes_above(p, x.ring)) {
        int k = 0;
        while (auto q = exact_div(rest, pi)) {
          rest = *q;
          ++k;
        }
        if (k > 0) out.factors.emplace_back(pi, k);
      }
    }
  }
  if (!is_unit(rest)) throw InternalError("factorization left a non-unit cofactor");
  std::sort(out.factors.begin(), out.factors.end(),
            [](const auto& l, const auto& r) { return less_quad(l.first, r.first); });
  out.unit = rest;
  return out;
}

std::string to_string(const QuadInt& x) {
  std::string s = x.a.get_str();
  if (x.ring != RingId::Integers) {
    s += sgn(x.b) < 0 ? "-" : "+";
    s += Int(abs(x.b)).get_str();
    s += "*w";
  }
  s += "@";
  s += ring_tag(x.ring);
  return s;
}

QuadInt parse_quadint(std::string_view text) {
  auto at = text.rfind('@');
  if (at == std::string_view::npos) throw InvalidArgument("missing ring tag in '" + std::string(text) + "'");
  return parse_quadint(text.substr(0, at), parse_ring_tag(text.substr(at + 1)));
}

QuadInt parse_quadint(std::string_view text, RingId r) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw InvalidArgument("empty ring element");
  Int a = 0, b = 0;
  size_t i = 0;
  bool seen = false;
  auto fail = [&] { throw InvalidArgument("malformed ring element '" + std::string(text) + "'"); };
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (seen) {
      fail();
    }
    size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    std::string digits = s.substr(i, j - i);
    i = j;
    bool is_w = false;
    if (i < s.size() && s[i] == '*') {
      ++i;
      if (i >= s.size() || s[i] != 'w' || digits.empty()) fail();
      is_w = true;
      ++i;
    } else if (i < s.size() && s[i] == 'w') {
      if (!digits.empty()) fail();
      is_w = true;
      ++i;
    }
    if (!is_w && digits.empty()) fail();
    Int v = digits.empty() ? Int(1) : Int(digits);
    if (sign < 0) v = -v;
    if (is_w)
      b += v;
    else
      a += v;
    seen = true;
  }
  if (r == RingId::Integers && b != 0) throw InvalidArgument("w part in an integer");
  return QuadInt(a, b, r);
}

Real::Real(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
Real::Real(const Real& o) {
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_set(v_, o.v_, MPFR_RNDN);
}
Real& Real::operator=(const Real& o) {
  if (this != &o) {
    mpfr_set_prec(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}
Real::~Real() { mpfr_clear(v_); }

mpfr_prec_t embedding_precision(const QuadInt& x) {
  size_t bits = std::max(mpz_sizeinbase(x.a.get_mpz_t(), 2), mpz_sizeinbase(x.b.get_mpz_t(), 2));
  return static_cast<mpfr_prec_t>(2 * bits + 64);
}

Real embed_real(const QuadInt& x, int which, mpfr_prec_t prec) {
  Surd s = to_surd(x, which);
  Real root(prec), out(prec);
  mpfr_sqrt_ui(root.get(), s.d, MPFR_RNDN);
  mpfr_mul_z(root.get(), root.get(), s.v.get_mpz_t(), MPFR_RNDN);
  mpfr_set_z(out.get(), s.u.get_mpz_t(), MPFR_RNDN);
  mpfr_add(out.get(), out.get(), root.get(), MPFR_RNDN);
  if (s.den != 1.0) mpfr_div_ui(out.get(), out.get(), 2, MPFR_RNDN);
  return out;
}

}  // namespace sgg
