#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sgg/errors.hpp"

namespace sgg {

using Int = mpz_class;
using Rng = std::mt19937_64;

enum class RingId : std::uint8_t { Integers, Sqrt2, Golden };

const char* ring_tag(RingId r);
RingId parse_ring_tag(std::string_view tag);

// a + b*w with w = sqrt(2) or phi; b is always 0 over the integers.
struct QuadInt {
  Int a;
  Int b;
  RingId ring = RingId::Integers;

  QuadInt() = default;
  QuadInt(Int a_, Int b_, RingId r);
  static QuadInt of(long v, RingId r);
  static QuadInt omega(RingId r);

  bool is_zero() const { return sgn(a) == 0 && sgn(b) == 0; }
  bool is_one() const { return a == 1 && sgn(b) == 0; }
};

bool operator==(const QuadInt& x, const QuadInt& y);
inline bool operator!=(const QuadInt& x, const QuadInt& y) { return !(x == y); }
QuadInt operator+(const QuadInt& x, const QuadInt& y);
QuadInt operator-(const QuadInt& x, const QuadInt& y);
QuadInt operator-(const QuadInt& x);
QuadInt operator*(const QuadInt& x, const QuadInt& y);
QuadInt operator*(const QuadInt& x, long s);
QuadInt pow(const QuadInt& x, unsigned e);

QuadInt conj(const QuadInt& x);
Int norm(const QuadInt& x);
bool is_unit(const QuadInt& x);
bool is_totally_positive(const QuadInt& x);

// Exact sign (-1, 0, 1) of the embedding w -> +root (which = 0) or the conjugate root (which = 1).
int embedding_sign(const QuadInt& x, int which);
// log |sigma_which(x)| in double precision, computed without cancellation. x != 0.
double log_abs_embedding(const QuadInt& x, int which);
double embedding(const QuadInt& x, int which);

QuadInt fundamental_unit(RingId r);
// eps^m for the fundamental unit (m may be negative); 1 over the integers.
QuadInt unit_power(RingId r, long m);
double log_fundamental_unit(RingId r);

std::optional<QuadInt> exact_div(const QuadInt& x, const QuadInt& y);
bool divides(const QuadInt& d, const QuadInt& x);
// Euclidean division with rounded quotient: x = q*y + r, |N(r)| < |N(y)|.
std::pair<QuadInt, QuadInt> divmod(const QuadInt& x, const QuadInt& y);
QuadInt euclidean_gcd(const QuadInt& x, const QuadInt& y);

// Associate with positive first embedding and minimal |log sigma_1|.
QuadInt normalize_unit(const QuadInt& x);

struct PrimeFactorization {
  QuadInt unit;
  std::vector<std::pair<QuadInt, int>> factors;

  QuadInt product() const;
};

bool is_probable_prime(const Int& n);
std::vector<std::pair<Int, int>> factor_integer(const Int& n);
PrimeFactorization factor(const QuadInt& x);
// Primes of the ring above the rational prime p, each with its exponent in p.
std::vector<std::pair<QuadInt, int>> primes_above(const Int& p, RingId r);

Int random_below(const Int& n, Rng& rng);
Int sqrt_mod(const Int& a, const Int& p, Rng& rng);
Int sqrt_minus_one_mod(const Int& p, Rng& rng);
Int round_div(const Int& n, const Int& d);

std::string to_string(const QuadInt& x);
QuadInt parse_quadint(std::string_view text);
QuadInt parse_quadint(std::string_view text, RingId r);

// Small RAII wrapper over mpfr_t for precision-controlled embeddings.
class Real {
 public:
  explicit Real(mpfr_prec_t prec);
  Real(const Real& o);
  Real& operator=(const Real& o);
  ~Real();
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

 private:
  mpfr_t v_;
};

Real embed_real(const QuadInt& x, int which, mpfr_prec_t prec);
// Precision rule for embeddings: twice the operand bit length plus 64.
mpfr_prec_t embedding_precision(const QuadInt& x);

}  // namespace sgg
