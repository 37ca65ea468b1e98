#include "sgg/quaternion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>

namespace sgg {

namespace {

#include "unit_tables.inc"

bool delta_divides(const QuadInt& v) {
  if (v.ring == RingId::Sqrt2) return mpz_even_p(v.a.get_mpz_t());
  return mpz_even_p(v.a.get_mpz_t()) && mpz_even_p(v.b.get_mpz_t());
}

QuadInt div_delta(const QuadInt& v) {
  QuadInt r;
  r.ring = v.ring;
  if (v.ring == RingId::Sqrt2) {
    // (a + b w) / w = b + (a/2) w
    r.a = v.b;
    mpz_divexact_ui(r.b.get_mpz_t(), v.a.get_mpz_t(), 2);
  } else {
    mpz_divexact_ui(r.a.get_mpz_t(), v.a.get_mpz_t(), 2);
    mpz_divexact_ui(r.b.get_mpz_t(), v.b.get_mpz_t(), 2);
  }
  return r;
}

QuadInt mul_delta(const QuadInt& v, int times) {
  QuadInt r = v;
  for (int i = 0; i < times; ++i) {
    if (r.ring == RingId::Sqrt2) {
      QuadInt t;
      t.ring = r.ring;
      t.a = 2 * r.b;
      t.b = r.a;
      r = std::move(t);
    } else {
      r.a *= 2;
      r.b *= 2;
    }
  }
  return r;
}

QuadInt delta_power(RingId r, int e) { return mul_delta(QuadInt::of(1, r), e); }

std::string short_ring(const QuadInt& v) {
  if (v.ring == RingId::Integers || sgn(v.b) == 0) return v.a.get_str();
  std::string w = v.b == 1 ? "w" : (v.b == -1 ? "-w" : v.b.get_str() + "*w");
  if (sgn(v.a) == 0) return w;
  std::string s = v.a.get_str();
  if (w[0] != '-') s += "+";
  return s + w;
}

QuadInt det3(const std::array<std::array<QuadInt, 4>, 4>& m, int skip_r, int skip_c) {
  std::array<int, 3> rows{}, cols{};
  for (int i = 0, k = 0; i < 4; ++i)
    if (i != skip_r) rows[k++] = i;
  for (int i = 0, k = 0; i < 4; ++i)
    if (i != skip_c) cols[k++] = i;
  auto e = [&](int r, int c) -> const QuadInt& { return m[rows[r]][cols[c]]; };
  return e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) -
         e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)) +
         e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
}

std::array<QuadInt, 4> numerators_at(const Quaternion& q, int d) {
  std::array<QuadInt, 4> out;
  for (int i = 0; i < 4; ++i) out[i] = mul_delta(q.x[i], d - q.dexp);
  return out;
}

// Row-reduce a generating set of O_K^4 into a triangular O_K-basis.
std::vector<std::array<QuadInt, 4>> hnf_rows(std::vector<std::array<QuadInt, 4>> rows) {
  size_t r = 0;
  for (int c = 0; c < 4 && r < rows.size(); ++c) {
    for (;;) {
      size_t best = rows.size();
      Int best_n;
      for (size_t i = r; i < rows.size(); ++i) {
        if (rows[i][c].is_zero()) continue;
        Int n = abs(norm(rows[i][c]));
        if (best == rows.size() || n < best_n) {
          best = i;
          best_n = n;
        }
      }
      if (best == rows.size()) break;
      std::swap(rows[r], rows[best]);
      bool others = false;
      for (size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][c].is_zero()) continue;
        QuadInt q = divmod(rows[i][c], rows[r][c]).first;
        for (int k = 0; k < 4; ++k) rows[i][k] = rows[i][k] - q * rows[r][k];
        if (!rows[i][c].is_zero()) others = true;
      }
      if (!others) {
        ++r;
        break;
      }
    }
  }
  rows.resize(r);
  return rows;
}

Order build_order(OrderId id) {
  Order o;
  o.id = id;
  std::vector<std::string> texts;
  for (const char* s : kLipschitzUnits) texts.emplace_back(s);
  switch (id) {
    case OrderId::Lipschitz:
      o.ring = RingId::Integers;
      break;
    case OrderId::Hurwitz:
      o.ring = RingId::Integers;
      for (const char* s : kHurwitzExtra) texts.emplace_back(s);
      break;
    case OrderId::OctaSqrt2:
      o.ring = RingId::Sqrt2;
      for (const char* s : kHurwitzExtra) texts.emplace_back(s);
      for (const char* s : kOctaExtra) texts.emplace_back(s);
      break;
    case OrderId::Icosian:
      o.ring = RingId::Golden;
      for (const char* s : kHurwitzExtra) texts.emplace_back(s);
      for (const char* s : kIcosianExtra) texts.emplace_back(s);
      break;
  }
  for (auto& t : texts) {
    Quaternion q = parse_quaternion(t);
    if (q.ring != o.ring) {
      // Rational units are listed over Z; lift them to the order's ring.
      Quaternion l(o.ring);
      for (int i = 0; i < 4; ++i) l.x[i] = QuadInt(q.x[i].a, Int(0), o.ring);
      l.dexp = q.dexp;
      if (o.ring == RingId::Sqrt2) l.dexp *= 2;  // 2 = (sqrt2)^2
      l.reduce();
      q = l;
    }
    o.unit_reps.push_back(q);
    o.dmax = std::max(o.dmax, q.dexp);
  }
  std::vector<std::array<QuadInt, 4>> gens;
  for (auto& u : o.unit_reps) gens.push_back(numerators_at(u, o.dmax));
  auto rows = hnf_rows(gens);
  if (rows.size() != 4) throw InternalError("order units do not span a lattice of rank 4");
  std::array<std::array<QuadInt, 4>, 4> m;
  for (int i = 0; i < 4; ++i) {
    m[i] = rows[i];
    Quaternion b(o.ring);
    b.x = rows[i];
    b.dexp = o.dmax;
    b.reduce();
    o.basis[i] = b;
  }
  o.det = QuadInt::of(0, o.ring);
  for (int c = 0; c < 4; ++c) {
    QuadInt cof = det3(m, 0, c);
    o.det = (c % 2 == 0) ? o.det + m[0][c] * cof : o.det - m[0][c] * cof;
  }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      QuadInt cof = det3(m, i, j);
      o.adj[j][i] = ((i + j) % 2 == 0) ? cof : -cof;
    }
  return o;
}

}  // namespace

Quaternion::Quaternion(RingId r) : ring(r) {
  for (auto& v : x) v = QuadInt::of(0, r);
}

Quaternion Quaternion::scalar(const QuadInt& s) {
  Quaternion q(s.ring);
  q.x[0] = s;
  return q;
}

Quaternion Quaternion::from_ints(long x0, long x1, long x2, long x3, RingId r, int dexp) {
  Quaternion q(r);
  q.x = {QuadInt::of(x0, r), QuadInt::of(x1, r), QuadInt::of(x2, r), QuadInt::of(x3, r)};
  q.dexp = dexp;
  q.reduce();
  return q;
}

bool Quaternion::is_zero() const {
  return x[0].is_zero() && x[1].is_zero() && x[2].is_zero() && x[3].is_zero();
}

void Quaternion::reduce() {
  if (is_zero()) {
    dexp = 0;
    return;
  }
  while (dexp > 0 && delta_divides(x[0]) && delta_divides(x[1]) && delta_divides(x[2]) &&
         delta_divides(x[3])) {
    for (auto& v : x) v = div_delta(v);
    --dexp;
  }
}

bool operator==(const Quaternion& p, const Quaternion& q) {
  return p.ring == q.ring && p.dexp == q.dexp && p.x == q.x;
}

int max_dexp(RingId r) { return r == RingId::Sqrt2 ? 2 : 1; }

Quaternion hamilton(const Quaternion& p, const Quaternion& q) {
  if (p.ring != q.ring) throw InvalidArgument("quaternion ring mismatch");
  // (out, left, right, sign) for each term of the product, accumulated in place
  static constexpr int kTerms[16][4] = {{0, 0, 0, 1},  {0, 1, 1, -1}, {0, 2, 2, -1}, {0, 3, 3, -1},
                                        {1, 0, 1, 1},  {1, 1, 0, 1},  {1, 2, 3, 1},  {1, 3, 2, -1},
                                        {2, 0, 2, 1},  {2, 1, 3, -1}, {2, 2, 0, 1},  {2, 3, 1, 1},
                                        {3, 0, 3, 1},  {3, 1, 2, 1},  {3, 2, 1, -1}, {3, 3, 0, 1}};
  Quaternion r(p.ring);
  mpz_class bd;
  for (const auto& t : kTerms) {
    const QuadInt& x = p.x[t[1]];
    const QuadInt& y = q.x[t[2]];
    QuadInt& z = r.x[t[0]];
    auto acc = t[3] > 0 ? mpz_addmul : mpz_submul;
    acc(z.a.get_mpz_t(), x.a.get_mpz_t(), y.a.get_mpz_t());
    if (p.ring == RingId::Integers) continue;
    mpz_mul(bd.get_mpz_t(), x.b.get_mpz_t(), y.b.get_mpz_t());
    // w^2 = 2 for sqrt2, phi^2 = phi + 1
    if (p.ring == RingId::Sqrt2) {
      (t[3] > 0 ? mpz_addmul_ui : mpz_submul_ui)(z.a.get_mpz_t(), bd.get_mpz_t(), 2);
    } else {
      (t[3] > 0 ? mpz_add : mpz_sub)(z.a.get_mpz_t(), z.a.get_mpz_t(), bd.get_mpz_t());
      (t[3] > 0 ? mpz_add : mpz_sub)(z.b.get_mpz_t(), z.b.get_mpz_t(), bd.get_mpz_t());
    }
    acc(z.b.get_mpz_t(), x.a.get_mpz_t(), y.b.get_mpz_t());
    acc(z.b.get_mpz_t(), x.b.get_mpz_t(), y.a.get_mpz_t());
  }
  r.dexp = p.dexp + q.dexp;
  r.reduce();
  return r;
}

Quaternion multiply(const Quaternion& p, const Quaternion& q) {
  Quaternion r = hamilton(p, q);
  if (r.dexp > max_dexp(r.ring)) throw InternalError("product leaves the allowed denominators");
  return r;
}

Quaternion conj(const Quaternion& q) {
  Quaternion r = q;
  for (int i = 1; i < 4; ++i) r.x[i] = -r.x[i];
  return r;
}

Quaternion operator-(const Quaternion& q) {
  Quaternion r = q;
  for (auto& v : r.x) v = -v;
  return r;
}

Quaternion scale(const Quaternion& q, const QuadInt& s) {
  Quaternion r = q;
  for (auto& v : r.x) v = v * s;
  r.reduce();
  return r;
}

Quaternion divide_scalar(const Quaternion& q, const QuadInt& s) {
  Quaternion r = q;
  for (auto& v : r.x) {
    auto d = exact_div(v, s);
    if (!d) throw InvalidArgument("quaternion not divisible by scalar");
    v = *d;
  }
  r.reduce();
  return r;
}

QuadInt reduced_norm(const Quaternion& q) {
  QuadInt s = q.x[0] * q.x[0] + q.x[1] * q.x[1] + q.x[2] * q.x[2] + q.x[3] * q.x[3];
  QuadInt d = delta_power(q.ring, 2 * q.dexp);
  auto n = exact_div(s, d);
  if (!n) throw InvalidArgument("reduced norm is not integral");
  return *n;
}

std::string to_string(const Quaternion& q) {
  std::string s;
  for (int i = 0; i < 4; ++i) {
    if (i) s += ",";
    s += short_ring(q.x[i]);
  }
  s += "/";
  s += short_ring(delta_power(q.ring, q.dexp));
  s += "@";
  s += ring_tag(q.ring);
  return s;
}

Quaternion parse_quaternion(std::string_view text) {
  auto at = text.rfind('@');
  if (at == std::string_view::npos) throw InvalidArgument("missing ring tag in quaternion");
  RingId r = parse_ring_tag(text.substr(at + 1));
  std::string_view body = text.substr(0, at);
  auto slash = body.rfind('/');
  std::string_view nums = body, den = "1";
  if (slash != std::string_view::npos) {
    nums = body.substr(0, slash);
    den = body.substr(slash + 1);
  }
  Quaternion q(r);
  size_t start = 0;
  for (int i = 0; i < 4; ++i) {
    size_t comma = nums.find(',', start);
    if ((comma == std::string_view::npos) != (i == 3)) throw InvalidArgument("quaternion needs 4 coordinates");
    q.x[i] = parse_quadint(nums.substr(start, comma == std::string_view::npos ? nums.size() - start : comma - start), r);
    start = comma + 1;
  }
  std::string dtext(den);
  QuadInt d = dtext == "sqrt2" ? QuadInt::omega(RingId::Sqrt2) : parse_quadint(dtext, r);
  if (d.ring != r) throw InvalidArgument("denominator ring mismatch");
  int e = 0;
  QuadInt one = QuadInt::of(1, r);
  while (d != one) {
    if (e > 64 || d.is_zero() || !delta_divides(d)) throw InvalidArgument("unsupported quaternion denominator");
    d = div_delta(d);
    ++e;
  }
  q.dexp = e;
  q.reduce();
  return q;
}

std::size_t QuaternionHash::operator()(const Quaternion& q) const {
  std::size_t h = static_cast<std::size_t>(q.dexp) * 0x9e3779b97f4a7c15ULL;
  auto mix = [&](const Int& z) {
    std::size_t v = mpz_size(z.get_mpz_t()) ? mpz_getlimbn(z.get_mpz_t(), 0) : 0;
    v ^= static_cast<std::size_t>(sgn(z) + 2) << 56;
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  for (const auto& v : q.x) {
    mix(v.a);
    mix(v.b);
  }
  return h;
}

UnitaryMatrix to_su2(const Quaternion& q, int precision_bits) {
  if (q.is_zero()) throw InvalidArgument("to_su2 of zero quaternion");
  mpfr_prec_t prec = std::max<mpfr_prec_t>(precision_bits, 53);
  for (const auto& v : q.x) prec = std::max(prec, embedding_precision(v));
  std::array<Real, 4> e{Real(prec), Real(prec), Real(prec), Real(prec)};
  Real n(prec), t(prec);
  mpfr_set_ui(n.get(), 0, MPFR_RNDN);
  for (int i = 0; i < 4; ++i) {
    e[i] = embed_real(q.x[i], 0, prec);
    mpfr_sqr(t.get(), e[i].get(), MPFR_RNDN);
    mpfr_add(n.get(), n.get(), t.get(), MPFR_RNDN);
  }
  mpfr_sqrt(n.get(), n.get(), MPFR_RNDN);
  std::array<double, 4> v{};
  for (int i = 0; i < 4; ++i) {
    mpfr_div(t.get(), e[i].get(), n.get(), MPFR_RNDN);
    v[i] = t.to_double();
  }
  return vector_to_su2(v);
}

UnitaryMatrix vector_to_su2(const std::array<double, 4>& v) {
  return {Complex(v[0], v[1]), Complex(v[2], v[3]), Complex(-v[2], v[3]), Complex(v[0], -v[1])};
}

std::array<double, 4> su2_to_vector(const UnitaryMatrix& m) {
  Complex det = m[0] * m[3] - m[1] * m[2];
  Complex ph = std::sqrt(det);
  if (std::abs(ph) == 0.0) throw InvalidArgument("singular matrix");
  Complex a = m[0] / ph, b = m[1] / ph;
  std::array<double, 4> v{a.real(), a.imag(), b.real(), b.imag()};
  double s = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
  for (auto& c : v) c /= s;
  return v;
}

UnitaryMatrix mat_mul(const UnitaryMatrix& a, const UnitaryMatrix& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}

UnitaryMatrix mat_adjoint(const UnitaryMatrix& a) {
  return {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])};
}

UnitaryMatrix identity_matrix() { return {Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(1, 0)}; }

double pu2_distance(const UnitaryMatrix& m, const UnitaryMatrix& n) {
  Complex tr = std::conj(m[0]) * n[0] + std::conj(m[1]) * n[1] + std::conj(m[2]) * n[2] +
               std::conj(m[3]) * n[3];
  double d2 = 1.0 - std::abs(tr) / 2.0;
  return std::sqrt(std::clamp(d2, 0.0, 1.0));
}

std::string matrix_to_string(const UnitaryMatrix& m) {
  std::string s;
  char buf[96];
  for (int i = 0; i < 4; ++i) {
    std::snprintf(buf, sizeof buf, "%s%.17g%+.17gi", i ? " " : "", m[i].real(), m[i].imag());
    s += buf;
  }
  return s;
}

const char* order_name(OrderId id) {
  switch (id) {
    case OrderId::Lipschitz:
      return "Lipschitz";
    case OrderId::Hurwitz:
      return "Hurwitz";
    case OrderId::OctaSqrt2:
      return "OctaSqrt2";
    case OrderId::Icosian:
      return "Icosian";
  }
  return "?";
}

OrderId parse_order_name(std::string_view name) {
  for (OrderId id : {OrderId::Lipschitz, OrderId::Hurwitz, OrderId::OctaSqrt2, OrderId::Icosian})
    if (name == order_name(id)) return id;
  throw InvalidArgument("unknown order: " + std::string(name));
}

std::array<QuadInt, 4> Order::scaled_coords(const Quaternion& q) const {
  if (q.ring != ring) throw InvalidArgument("quaternion ring does not match order");
  int s = std::max(0, q.dexp - dmax);
  std::array<QuadInt, 4> num;
  for (int i = 0; i < 4; ++i) num[i] = mul_delta(q.x[i], dmax - q.dexp + s);
  std::array<QuadInt, 4> c;
  for (int m = 0; m < 4; ++m) {
    QuadInt acc = QuadInt::of(0, ring);
    for (int n = 0; n < 4; ++n) acc = acc + num[n] * adj[n][m];
    c[m] = acc;
  }
  return c;
}

std::optional<std::array<QuadInt, 4>> Order::coords(const Quaternion& q) const {
  if (q.dexp > dmax) return std::nullopt;
  auto c = scaled_coords(q);
  for (auto& v : c) {
    auto d = exact_div(v, det);
    if (!d) return std::nullopt;
    v = *d;
  }
  return c;
}

bool Order::contains(const Quaternion& q) const { return coords(q).has_value(); }

Quaternion Order::from_coords(const std::array<QuadInt, 4>& c) const {
  Quaternion r(ring);
  r.dexp = dmax;
  for (int m = 0; m < 4; ++m) {
    auto num = numerators_at(basis[m], dmax);
    for (int i = 0; i < 4; ++i) r.x[i] = r.x[i] + c[m] * num[i];
  }
  r.reduce();
  return r;
}

Quaternion Order::primitive(const Quaternion& q) const {
  if (q.is_zero()) throw InvalidArgument("zero quaternion");
  auto c = scaled_coords(q);
  // the content's norm divides every coordinate norm; when their gcd is |N(det)| the content is det
  Int ng = 0;
  for (auto& v : c) mpz_gcd(ng.get_mpz_t(), ng.get_mpz_t(), Int(abs(norm(v))).get_mpz_t());
  if (ng == Int(abs(norm(det)))) {
    for (auto& v : c) v = *exact_div(v, det);
    return from_coords(c);
  }
  QuadInt g = QuadInt::of(0, ring);
  for (auto& v : c)
    if (!v.is_zero()) g = g.is_zero() ? v : euclidean_gcd(g, v);
  for (auto& v : c) v = *exact_div(v, g);
  return from_coords(c);
}

const Order& get_order(OrderId id) {
  static std::array<Order, 4> orders;
  static std::once_flag once;
  std::call_once(once, [] {
    for (OrderId o : {OrderId::Lipschitz, OrderId::Hurwitz, OrderId::OctaSqrt2, OrderId::Icosian})
      orders[static_cast<int>(o)] = build_order(o);
    for (auto& o : orders) {
      for (auto& u : o.unit_reps)
        if (!is_unit(reduced_norm(u)) || !o.contains(u)) throw InternalError("bad literal unit");
      for (auto& u : o.unit_reps)
        for (auto& v : o.unit_reps) {
          Quaternion w = canonicalize(multiply(u, v), o, QuadInt::of(1, o.ring));
          if (std::find(o.unit_reps.begin(), o.unit_reps.end(), w) == o.unit_reps.end())
            throw InternalError(std::string("unit list not closed for ") + order_name(o.id));
        }
    }
  });
  return orders[static_cast<int>(id)];
}

std::vector<Quaternion> unit_group(OrderId id) { return get_order(id).unit_reps; }

bool icosian_congruence_member(const Quaternion& q) {
  if (q.ring != RingId::Golden) return false;
  // numerator p + r*phi over 2^dexp equals (A + B sqrt5)/2 with A = (2p + r)/2^dexp, B = r/2^dexp.
  std::array<Int, 4> A, B;
  Int den = Int(1) << q.dexp;
  for (int m = 0; m < 4; ++m) {
    Int a = 2 * q.x[m].a + q.x[m].b, b = q.x[m].b;
    if (!mpz_divisible_p(a.get_mpz_t(), den.get_mpz_t()) || !mpz_divisible_p(b.get_mpz_t(), den.get_mpz_t()))
      return false;
    A[m] = a / den;
    B[m] = b / den;
  }
  auto odd = [](const Int& v) { return mpz_odd_p(v.get_mpz_t()) != 0; };
  const Int &a = A[0], &b = B[0], &c = A[1], &d = B[1], &e = A[2], &f = B[2], &g = A[3], &h = B[3];
  if (odd(a + c + e + g) || odd(b + d + f + h)) return false;
  bool same = odd(c) == odd(b) && odd(e) == odd(d) && odd(a) == odd(f);
  bool shifted = odd(c) != odd(b) && odd(e) != odd(d) && odd(a) != odd(f);
  return same || shifted;
}

int valuation(const QuadInt& n, const QuadInt& p) {
  if (n.is_zero()) throw InvalidArgument("valuation of zero");
  if (is_unit(p)) return 0;
  int v = 0;
  QuadInt r = n;
  while (auto q = exact_div(r, p)) {
    r = *q;
    ++v;
  }
  return v;
}

Quaternion canonicalize(const Quaternion& q, const Order& order, const QuadInt& pi,
                        const std::vector<QuadInt>& extra_primes, bool known_primitive) {
  if (q.is_zero()) throw InvalidArgument("canonicalize of zero quaternion");
  Quaternion p = known_primitive ? q : order.primitive(q);
  if (order.ring != RingId::Integers) {
    QuadInt n = reduced_norm(p);
    QuadInt r = n;
    auto strip = [&](const QuadInt& f) {
      if (is_unit(f)) return;
      while (auto d = exact_div(r, f)) r = *d;
    };
    strip(pi);
    for (auto& e : extra_primes) strip(e);
    double le = log_fundamental_unit(order.ring);
    long m;
    if (is_unit(r)) {
      long j = std::lround(log_abs_embedding(r, 0) / le);
      m = j >= 0 ? j / 2 : -((-j + 1) / 2);
    } else {
      double L = log_abs_embedding(n, 0) - log_abs_embedding(n, 1);
      m = std::lround(L / (4.0 * le));
    }
    if (m != 0) p = scale(p, unit_power(order.ring, -m));
  }
  return sign_normalize(std::move(p));
}

Quaternion sign_normalize(Quaternion q) {
  for (const auto& v : q.x) {
    int s = embedding_sign(v, 0);
    if (s == 0) continue;
    return s < 0 ? -q : q;
  }
  return q;
}

}  // namespace sgg
