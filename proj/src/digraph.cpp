#include "sgg/digraph.hpp"

#include <dlfcn.h>
#include <lapacke.h>

#include <algorithm>
#include <cstdlib>
#include <cmath>
#include <deque>
#include <sstream>
#include <unordered_map>

#include "sgg/errors.hpp"

namespace sgg {

namespace {

std::int64_t md(std::int64_t a, std::int64_t q) {
  a %= q;
  return a < 0 ? a + q : a;
}

std::int64_t mod_mpz(const Int& a, std::int64_t q) {
  Int r = a % q;
  if (r < 0) r += q;
  return r.get_si();
}

std::int64_t pow_mod(std::int64_t b, std::int64_t e, std::int64_t q) {
  std::int64_t r = 1 % q;
  b = md(b, q);
  while (e > 0) {
    if (e & 1) r = r * b % q;
    b = b * b % q;
    e >>= 1;
  }
  return r;
}

std::int64_t inv_mod(std::int64_t a, std::int64_t q) {
  if (md(a, q) == 0) throw InvalidArgument("division by zero modulo q");
  return pow_mod(a, q - 2, q);
}

// smallest square root of a modulo the prime q, if any
std::optional<std::int64_t> sqrt_mod_small(std::int64_t a, std::int64_t q) {
  a = md(a, q);
  if (a == 0) return 0;
  if (!is_square_mod(a, q)) return std::nullopt;
  Rng rng(q);
  std::int64_t r = sqrt_mod(Int(a), Int(q), rng).get_si();
  return std::min(r, q - r);
}

std::uint64_t key(const Mat2& m) {
  return (static_cast<std::uint64_t>(m[0]) << 48) | (static_cast<std::uint64_t>(m[1]) << 32) |
         (static_cast<std::uint64_t>(m[2]) << 16) | static_cast<std::uint64_t>(m[3]);
}

std::int64_t reduce_scalar(const QuadInt& v, const ModQSplitting& sp) {
  return md(mod_mpz(v.a, sp.q) + mod_mpz(v.b, sp.q) * sp.omega, sp.q);
}

Mat2 lin(std::int64_t c0, std::int64_t c1, std::int64_t c2, std::int64_t c3, const ModQSplitting& sp) {
  Mat2 out{};
  for (int e = 0; e < 4; ++e)
    out[e] = md(c0 * sp.one[e] % sp.q + c1 * sp.i[e] % sp.q + c2 * sp.j[e] % sp.q + c3 * sp.k[e] % sp.q, sp.q);
  return out;
}

using DgeevFn = lapack_int (*)(int, char, char, lapack_int, double*, lapack_int, double*, double*, double*,
                               lapack_int, double*, lapack_int);
using DgesvdFn = lapack_int (*)(int, char, char, lapack_int, lapack_int, double*, lapack_int, double*, double*,
                                lapack_int, double*, lapack_int, double*);

struct Lapack {
  DgeevFn dgeev = nullptr;
  DgesvdFn dgesvd = nullptr;
};

// OpenBLAS picks its kernels when it is loaded, and the kernels it autodetects on some AVX-512
// hosts return wrong eigenvalues. LAPACKE is therefore loaded on first use, after pinning the
// AVX2 kernels unless the caller already chose a core type.
const Lapack& lapack() {
  static const Lapack l = [] {
    if (__builtin_cpu_supports("avx2")) setenv("OPENBLAS_CORETYPE", "Haswell", 0);
    void* h = dlopen("liblapacke.so.3", RTLD_NOW | RTLD_LOCAL);
    if (!h) h = dlopen("liblapacke.so", RTLD_NOW | RTLD_LOCAL);
    if (!h) throw InternalError(std::string("cannot load LAPACKE: ") + dlerror());
    Lapack out;
    out.dgeev = reinterpret_cast<DgeevFn>(dlsym(h, "LAPACKE_dgeev"));
    out.dgesvd = reinterpret_cast<DgesvdFn>(dlsym(h, "LAPACKE_dgesvd"));
    if (!out.dgeev || !out.dgesvd) throw InternalError("LAPACKE lacks dgeev or dgesvd");
    return out;
  }();
  return l;
}

// Spectral norm of a complex 2x2 matrix.
double norm2x2(const std::array<std::complex<double>, 4>& m) {
  double f = std::norm(m[0]) + std::norm(m[1]) + std::norm(m[2]) + std::norm(m[3]);
  double d = std::abs(m[0] * m[3] - m[1] * m[2]);
  return std::sqrt((f + std::sqrt(std::max(0.0, f * f - 4 * d * d))) / 2);
}

double block_norm(int k, int r, double theta) {
  using C = std::complex<double>;
  C s = std::polar(1.0, theta);
  double sk = std::sqrt(static_cast<double>(k));
  std::array<C, 4> m{s / sk, 0.0, static_cast<double>(k - 1) * s / static_cast<double>(k), 1.0 / (s * sk)};
  std::array<C, 4> p{1.0, 0.0, 0.0, 1.0};
  for (int e = 0; e < r; ++e)
    p = {p[0] * m[0] + p[1] * m[2], p[0] * m[1] + p[1] * m[3], p[2] * m[0] + p[3] * m[2], p[2] * m[1] + p[3] * m[3]};
  return norm2x2(p);
}

}  // namespace

Mat2 mat_mul_mod(const Mat2& a, const Mat2& b, std::int64_t q) {
  return {md(a[0] * b[0] + a[1] * b[2], q), md(a[0] * b[1] + a[1] * b[3], q), md(a[2] * b[0] + a[3] * b[2], q),
          md(a[2] * b[1] + a[3] * b[3], q)};
}

std::int64_t det_mod(const Mat2& a, std::int64_t q) { return md(a[0] * a[3] - a[1] * a[2], q); }

Mat2 pgl_canonical(const Mat2& a, std::int64_t q) {
  for (int e = 0; e < 4; ++e)
    if (md(a[e], q) != 0) {
      std::int64_t s = inv_mod(a[e], q);
      Mat2 out;
      for (int f = 0; f < 4; ++f) out[f] = md(a[f], q) * s % q;
      return out;
    }
  throw InvalidArgument("zero matrix has no PGL class");
}

bool is_square_mod(std::int64_t a, std::int64_t q) {
  a = md(a, q);
  if (a == 0) return true;
  return pow_mod(a, (q - 1) / 2, q) == 1;
}

bool quaternion_relations_hold(const Mat2& x, const Mat2& y, std::int64_t q) {
  Mat2 minus_one{q - 1, 0, 0, q - 1};
  Mat2 xy = mat_mul_mod(x, y, q), yx = mat_mul_mod(y, x, q);
  Mat2 neg_yx;
  for (int e = 0; e < 4; ++e) neg_yx[e] = md(-yx[e], q);
  return mat_mul_mod(x, x, q) == minus_one && mat_mul_mod(y, y, q) == minus_one && xy == neg_yx;
}

ModQSplitting split_mod_q(OrderId order, std::int64_t q) {
  if (q < 3 || q >= (1 << 15) || !is_probable_prime(Int(q)))
    throw Unsupported("modulus must be an odd prime below 2^15");
  ModQSplitting sp;
  sp.q = q;
  sp.ring = get_order(order).ring;
  if (sp.ring == RingId::Sqrt2) {
    auto r = sqrt_mod_small(2, q);
    if (!r) throw Unsupported("2 is not a square modulo q: the residue field is F_{q^2}");
    sp.omega = *r;
  } else if (sp.ring == RingId::Golden) {
    if (q == 5) throw Unsupported("5 ramifies in Z[phi]");
    auto r = sqrt_mod_small(5, q);
    if (!r) throw Unsupported("5 is not a square modulo q: the residue field is F_{q^2}");
    sp.omega = md((1 + *r) * inv_mod(2, q), q);
  }
  std::int64_t a = 0, b = -1;
  for (; a < q; ++a)
    if (auto r = sqrt_mod_small(-1 - a * a, q)) {
      b = *r;
      break;
    }
  if (b < 0) throw InternalError("no solution of a^2 + b^2 = -1");
  sp.one = {1, 0, 0, 1};
  sp.i = {0, q - 1, 1, 0};
  sp.j = {a, b, b, md(-a, q)};
  sp.k = mat_mul_mod(sp.i, sp.j, q);
  const Order& o = get_order(order);
  for (int m = 0; m < 4; ++m) sp.basis[m] = reduce_mod_q(o.basis[m], sp);
  return sp;
}

Mat2 reduce_mod_q(const Quaternion& x, const ModQSplitting& sp) {
  // denominator delta^dexp with delta = sqrt2 or 2
  std::int64_t delta = x.ring == RingId::Sqrt2 ? sp.omega : 2;
  std::int64_t dinv = inv_mod(pow_mod(delta, x.dexp, sp.q), sp.q);
  std::array<std::int64_t, 4> c;
  for (int e = 0; e < 4; ++e) c[e] = reduce_scalar(x.x[e], sp) * dinv % sp.q;
  return lin(c[0], c[1], c[2], c[3], sp);
}

CayleyDigraph build_cayley(const GateSet& gs, std::int64_t q) {
  if (!gs.is_super()) throw Unsupported("Cayley digraphs are built from S = {T c}");
  ModQSplitting sp = split_mod_q(gs.order, q);
  if (mod_mpz(norm(gs.pi), q) == 0) throw InvalidArgument("q divides the norm of pi");
  std::vector<Mat2> gens;
  for (std::size_t c = 1; c < gs.C.size(); ++c) gens.push_back(reduce_mod_q(multiply(gs.T, gs.C[c]), sp));
  CayleyDigraph d = cayley_from_generators(gens, q);
  d.gateset = gs.name;
  return d;
}

CayleyDigraph cayley_from_generators(const std::vector<Mat2>& gens, std::int64_t q) {
  CayleyDigraph d;
  d.q = q;
  bool all_square = true;
  for (const auto& m : gens) {
    std::int64_t det = det_mod(m, q);
    if (det == 0) throw InvalidArgument("generator is singular modulo q");
    all_square = all_square && is_square_mod(det, q);
    d.generators.push_back(pgl_canonical(m, q));
  }
  d.k = static_cast<int>(d.generators.size());
  d.group_tag = all_square ? "PSL" : "PGL";

  std::unordered_map<std::uint64_t, int> index;
  Mat2 id{1, 0, 0, 1};
  d.vertices.push_back(id);
  index[key(id)] = 0;
  for (std::size_t v = 0; v < d.vertices.size(); ++v) {
    std::vector<int> succ;
    for (const auto& s : d.generators) {
      Mat2 w = pgl_canonical(mat_mul_mod(d.vertices[v], s, q), q);
      auto [it, fresh] = index.emplace(key(w), static_cast<int>(d.vertices.size()));
      if (fresh) d.vertices.push_back(w);
      succ.push_back(it->second);
    }
    d.adjacency.push_back(std::move(succ));
  }
  const std::int64_t pgl = q * (q * q - 1);
  d.full_quotient = static_cast<std::int64_t>(d.vertices.size()) == (d.group_tag == "PSL" ? pgl / 2 : pgl);
  return d;
}

std::string cayley_header(const CayleyDigraph& d) {
  return d.group_tag + " " + std::to_string(d.k) + " " + std::to_string(d.vertices.size());
}

std::string edge_list(const CayleyDigraph& d) {
  std::ostringstream os;
  os << cayley_header(d) << "\n";
  for (std::size_t u = 0; u < d.adjacency.size(); ++u)
    for (int v : d.adjacency[u]) os << u << " " << v << "\n";
  return os.str();
}

Spectrum spectrum(const std::vector<std::vector<int>>& adjacency) {
  const std::size_t n = adjacency.size();
  if (n > kSpectrumLimit) throw Unsupported("spectrum is limited to 7000 vertices");
  Spectrum s;
  if (n == 0) return s;
  std::vector<double> a(n * n, 0.0), wr(n), wi(n);
  for (std::size_t u = 0; u < n; ++u)
    for (int v : adjacency[u]) a[static_cast<std::size_t>(v) * n + u] += 1.0;  // column-major A[u][v]
  const auto ln = static_cast<lapack_int>(n);
  lapack_int info = lapack().dgeev(LAPACK_COL_MAJOR, 'N', 'N', ln, a.data(), ln, wr.data(), wi.data(), nullptr, 1,
                                  nullptr, 1);
  if (info < 0) throw InternalError("dgeev rejected its arguments");
  if (info > 0) {
    s.converged = false;
    s.first_valid = static_cast<int>(info);
  }
  for (std::size_t e = 0; e < n; ++e) s.eigenvalues.emplace_back(wr[e], wi[e]);
  if (s.converged)
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), [](const auto& x, const auto& y) {
      return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
  return s;
}

Spectrum spectrum(const CayleyDigraph& d) { return spectrum(d.adjacency); }

std::pair<std::int64_t, std::int64_t> power_traces(const std::vector<std::vector<int>>& adjacency) {
  std::int64_t t1 = 0, t2 = 0;
  for (std::size_t u = 0; u < adjacency.size(); ++u)
    for (int v : adjacency[u]) {
      if (static_cast<std::size_t>(v) == u) ++t1;
      for (int w : adjacency[v])
        if (static_cast<std::size_t>(w) == u) ++t2;
    }
  return {t1, t2};
}

RamanujanReport ramanujan_check(const Spectrum& s, int k, double tol) {
  RamanujanReport r;
  r.k = k;
  r.bound = std::sqrt(static_cast<double>(k));
  const double kd = k;
  for (std::size_t e = static_cast<std::size_t>(s.first_valid); e < s.eigenvalues.size(); ++e) {
    const auto& l = s.eigenvalues[e];
    if (std::abs(l - kd) <= tol || std::abs(l + kd) <= tol) {
      ++r.trivial;
      if (std::abs(l + kd) <= tol) r.has_minus_k = true;
    } else if (std::abs(l.imag()) <= tol && (std::abs(l.real() - 1) <= tol || std::abs(l.real() + 1) <= tol)) {
      ++r.exceptional;
    } else {
      ++r.bulk;
      r.max_bulk = std::max(r.max_bulk, std::abs(l));
    }
  }
  r.pass = s.converged && r.max_bulk <= r.bound + tol;
  return r;
}

RamanujanReport ramanujan_check(const std::vector<std::vector<int>>& adjacency, int k, double tol) {
  RamanujanReport r = ramanujan_check(spectrum(adjacency), k, tol);
  std::vector<int> indeg(adjacency.size(), 0);
  for (const auto& succ : adjacency) {
    if (static_cast<int>(succ.size()) != k) r.regular = false;
    for (int v : succ) ++indeg[static_cast<std::size_t>(v)];
  }
  for (int x : indeg)
    if (x != k) r.regular = false;
  r.pass = r.pass && r.regular;
  return r;
}

double w_s_r(int k, int r) {
  if (k < 2 || r < 1) throw InvalidArgument("w_s_r needs k >= 2 and r >= 1");
  const double K = k, R = r, a = R * (K - 1);
  double num = a * std::sqrt(a * a + 4 * K) + a * a + 2 * K;
  return std::sqrt(num / (2 * std::pow(K, R + 1)));
}

std::optional<mpq_class> w_s_r_squared_exact(int k, int r) {
  if (k < 2 || r < 1) throw InvalidArgument("w_s_r needs k >= 2 and r >= 1");
  Int a = Int(r) * (k - 1);
  Int disc = a * a + 4 * k;
  if (!mpz_perfect_square_p(disc.get_mpz_t())) return std::nullopt;
  Int root = sqrt(disc);
  Int den;
  mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(r + 1));
  mpq_class w(a * root + a * a + 2 * k, 2 * den);
  w.canonicalize();
  return w;
}

double numeric_w_s_r(int k, int r, int grid) {
  if (k < 2 || r < 1 || grid < 3) throw InvalidArgument("numeric_w_s_r needs k >= 2, r >= 1, grid >= 3");
  const double h = 2 * M_PI / grid;
  int best = 0;
  double bv = -1;
  for (int g = 0; g < grid; ++g) {
    double v = block_norm(k, r, g * h);
    if (v > bv) {
      bv = v;
      best = g;
    }
  }
  // golden-section refinement around the best grid point
  const double gr = (std::sqrt(5.0) - 1) / 2;
  double lo = (best - 1) * h, hi = (best + 1) * h;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = block_norm(k, r, x1), f2 = block_norm(k, r, x2);
  for (int it = 0; it < 100 && hi - lo > 1e-13; ++it) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = block_norm(k, r, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = block_norm(k, r, x2);
    }
  }
  return std::max({bv, f1, f2});
}

double mean_zero_norm(const std::vector<std::vector<int>>& adjacency, int k, int r) {
  const std::size_t n = adjacency.size();
  if (n == 0) return 0;
  if (n > kSpectrumLimit) throw Unsupported("mean_zero_norm is limited to 7000 vertices");
  // column-major dense M = (A/k)^r, built by applying A to the identity r times
  std::vector<double> m(n * n, 0.0), next(n * n);
  for (std::size_t e = 0; e < n; ++e) m[e * n + e] = 1;
  for (int step = 0; step < r; ++step) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t col = 0; col < n; ++col)
      for (std::size_t u = 0; u < n; ++u) {
        double acc = 0;
        for (int v : adjacency[u]) acc += m[col * n + static_cast<std::size_t>(v)];
        next[col * n + u] = acc / k;
      }
    std::swap(m, next);
  }
  const double jn = 1.0 / static_cast<double>(n);
  for (auto& x : m) x -= jn;
  std::vector<double> sv(n), superb(n);
  const auto ln = static_cast<lapack_int>(n);
  lapack_int info = lapack().dgesvd(LAPACK_COL_MAJOR, 'N', 'N', ln, ln, m.data(), ln, sv.data(), nullptr, 1, nullptr,
                                   1, superb.data());
  if (info != 0) throw InternalError("dgesvd did not converge");
  return sv[0];
}

}  // namespace sgg
