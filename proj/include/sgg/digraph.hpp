#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "sgg/gatesets.hpp"

namespace sgg {

// 2x2 matrix over F_q, row-major, entries in [0, q).
using Mat2 = std::array<std::int64_t, 4>;

Mat2 mat_mul_mod(const Mat2& a, const Mat2& b, std::int64_t q);
std::int64_t det_mod(const Mat2& a, std::int64_t q);
// PGL_2 representative: first nonzero entry in row-major order equal to 1.
Mat2 pgl_canonical(const Mat2& a, std::int64_t q);
bool is_square_mod(std::int64_t a, std::int64_t q);
// X^2 = Y^2 = -I and XY = -YX over F_q.
bool quaternion_relations_hold(const Mat2& x, const Mat2& y, std::int64_t q);

struct ModQSplitting {
  std::int64_t q = 0;
  RingId ring = RingId::Integers;
  std::int64_t omega = 0;  // image of sqrt2 or phi (0 over Z)
  Mat2 one, i, j, k;
  std::array<Mat2, 4> basis;  // images of the order basis
};

// Throws Unsupported when q is not prime, even, ramified or inert for the ring.
ModQSplitting split_mod_q(OrderId order, std::int64_t q);
Mat2 reduce_mod_q(const Quaternion& x, const ModQSplitting& sp);

struct CayleyDigraph {
  std::string gateset;
  std::int64_t q = 0;
  int k = 0;
  std::string group_tag;  // "PSL" or "PGL"
  bool full_quotient = false;  // vertex count is |PSL_2(F_q)| or |PGL_2(F_q)| as tagged
  std::vector<Mat2> generators;
  std::vector<Mat2> vertices;
  std::vector<std::vector<int>> adjacency;  // successors v * s for each generator s
};

// Vertices are reached from the identity by right multiplication with S = {T c : c != 1}.
CayleyDigraph build_cayley(const GateSet& gs, std::int64_t q);
// Same BFS for arbitrary invertible generators; group_tag is PSL when every determinant is a square.
CayleyDigraph cayley_from_generators(const std::vector<Mat2>& gens, std::int64_t q);
std::string cayley_header(const CayleyDigraph& d);
std::string edge_list(const CayleyDigraph& d);

struct Spectrum {
  std::vector<std::complex<double>> eigenvalues;
  double tolerance = 1e-6;
  bool converged = true;
  int first_valid = 0;  // eigenvalues before this index are unreliable when not converged
};

inline constexpr std::size_t kSpectrumLimit = 7000;

Spectrum spectrum(const std::vector<std::vector<int>>& adjacency);
Spectrum spectrum(const CayleyDigraph& d);
// Exact trace of A and of A^2.
std::pair<std::int64_t, std::int64_t> power_traces(const std::vector<std::vector<int>>& adjacency);

struct RamanujanReport {
  int k = 0;
  int trivial = 0;      // eigenvalues at k or -k
  int exceptional = 0;  // real eigenvalues at 1 or -1
  int bulk = 0;
  double max_bulk = 0;
  double bound = 0;  // sqrt(k)
  bool has_minus_k = false;
  bool regular = true;  // only checked by the adjacency overload
  bool pass = false;
};

RamanujanReport ramanujan_check(const Spectrum& s, int k, double tol = 1e-6);
// Also requires every in- and out-degree to be k.
RamanujanReport ramanujan_check(const std::vector<std::vector<int>>& adjacency, int k, double tol = 1e-6);

// Closed form for the norm of T_S^r on mean-zero functions.
double w_s_r(int k, int r);
// W^2 as an exact rational when the inner square root is an integer (always at r = 1).
std::optional<mpq_class> w_s_r_squared_exact(int k, int r);
// Maximum over |s| = 1 of the spectral norm of the r-th power of the 2x2 Iwahori block.
double numeric_w_s_r(int k, int r, int grid = 10000);

// Norm of (A/k)^r on functions with zero mean; A must be in- and out-regular of degree k.
double mean_zero_norm(const std::vector<std::vector<int>>& adjacency, int k, int r = 1);

}  // namespace sgg
