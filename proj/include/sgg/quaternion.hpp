#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "sgg/rings.hpp"

namespace sgg {

// (x0 + x1 i + x2 j + x3 k) / delta^dexp with delta = sqrt2 over Z[sqrt2] and 2 otherwise.
struct Quaternion {
  std::array<QuadInt, 4> x;
  int dexp = 0;
  RingId ring = RingId::Integers;

  Quaternion() = default;
  Quaternion(RingId r);
  static Quaternion scalar(const QuadInt& s);
  static Quaternion from_ints(long x0, long x1, long x2, long x3, RingId r, int dexp = 0);

  bool is_zero() const;
  // Strip common factors of delta from the numerators.
  void reduce();
};

bool operator==(const Quaternion& p, const Quaternion& q);
inline bool operator!=(const Quaternion& p, const Quaternion& q) { return !(p == q); }

int max_dexp(RingId r);
Quaternion hamilton(const Quaternion& p, const Quaternion& q);  // no denominator check
Quaternion multiply(const Quaternion& p, const Quaternion& q);
Quaternion conj(const Quaternion& q);
Quaternion operator-(const Quaternion& q);
Quaternion scale(const Quaternion& q, const QuadInt& s);
QuadInt reduced_norm(const Quaternion& q);
// Exact division by a ring scalar; throws if the result leaves the numerator lattice.
Quaternion divide_scalar(const Quaternion& q, const QuadInt& s);

std::string to_string(const Quaternion& q);
Quaternion parse_quaternion(std::string_view text);

struct QuaternionHash {
  std::size_t operator()(const Quaternion& q) const;
};

using Complex = std::complex<double>;
using UnitaryMatrix = std::array<Complex, 4>;  // row-major 2x2

UnitaryMatrix to_su2(const Quaternion& q, int precision_bits = 128);
UnitaryMatrix mat_mul(const UnitaryMatrix& a, const UnitaryMatrix& b);
UnitaryMatrix mat_adjoint(const UnitaryMatrix& a);
UnitaryMatrix identity_matrix();
double pu2_distance(const UnitaryMatrix& m, const UnitaryMatrix& n);
// Unit quaternion (x0..x3) of an SU(2) matrix after removing its determinant phase.
std::array<double, 4> su2_to_vector(const UnitaryMatrix& m);
UnitaryMatrix vector_to_su2(const std::array<double, 4>& v);
std::string matrix_to_string(const UnitaryMatrix& m);

enum class OrderId { Lipschitz, Hurwitz, OctaSqrt2, Icosian };

const char* order_name(OrderId id);
OrderId parse_order_name(std::string_view name);

struct Order {
  OrderId id;
  RingId ring;
  std::array<Quaternion, 4> basis;      // O_K-basis
  std::vector<Quaternion> unit_reps;    // units modulo ring scalars, sign-normalized
  int dmax = 0;                         // largest denominator exponent in the order
  std::array<std::array<QuadInt, 4>, 4> adj;  // adjugate of the basis numerator matrix
  QuadInt det;                          // its determinant

  // det * (coordinates of q * delta^s) for the smallest s >= 0 making the scaling integral.
  std::array<QuadInt, 4> scaled_coords(const Quaternion& q) const;
  bool contains(const Quaternion& q) const;
  std::optional<std::array<QuadInt, 4>> coords(const Quaternion& q) const;
  Quaternion from_coords(const std::array<QuadInt, 4>& c) const;
  // Content-1 representative of the K-line through q (no unit or sign normalization).
  Quaternion primitive(const Quaternion& q) const;
};

const Order& get_order(OrderId id);
std::vector<Quaternion> unit_group(OrderId id);
// Membership predicate for the icosians written with coordinates (a + b sqrt5)/2.
bool icosian_congruence_member(const Quaternion& q);

// Unique representative modulo nonzero ring scalars: primitive in the order,
// reduced norm u * pi^t * (extra primes) with u in {1, eps}, first nonzero
// coordinate with positive first embedding. known_primitive skips the content removal.
Quaternion canonicalize(const Quaternion& q, const Order& order, const QuadInt& pi,
                        const std::vector<QuadInt>& extra_primes = {}, bool known_primitive = false);
// Negates q unless its first nonzero coordinate has positive first embedding.
Quaternion sign_normalize(Quaternion q);

// Number of times p divides n exactly (n != 0).
int valuation(const QuadInt& n, const QuadInt& p);

}  // namespace sgg
