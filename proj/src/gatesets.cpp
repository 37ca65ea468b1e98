#include "sgg/gatesets.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <json.hpp>
#include <mutex>
#include <unordered_set>

#include "sgg/errors.hpp"

namespace sgg {

namespace {

QuadInt qi(long a, long b, RingId r) { return QuadInt(Int(a), Int(b), r); }

Quaternion quat(std::array<QuadInt, 4> x, int dexp) {
  Quaternion q(x[0].ring);
  q.x = std::move(x);
  q.dexp = dexp;
  q.reduce();
  return q;
}

std::array<QuadInt, 4> numerators(const Quaternion& q, int d) {
  std::array<QuadInt, 4> out = q.x;
  QuadInt delta = q.ring == RingId::Sqrt2 ? qi(0, 1, q.ring) : QuadInt::of(2, q.ring);
  for (int i = q.dexp; i < d; ++i)
    for (auto& v : out) v = v * delta;
  return out;
}

bool is_scalar(const Quaternion& q) { return q.x[1].is_zero() && q.x[2].is_zero() && q.x[3].is_zero(); }

// n with every extra prime removed is a unit
bool unit_up_to(const QuadInt& n, const std::vector<QuadInt>& primes) {
  QuadInt r = n;
  for (const auto& p : primes)
    while (auto d = exact_div(r, p)) r = *d;
  return is_unit(r);
}

}  // namespace

QuadInt totally_positive_associate(const QuadInt& pi) {
  if (pi.ring == RingId::Integers) return QuadInt::of(Int(abs(pi.a)).get_si(), pi.ring);
  QuadInt e = fundamental_unit(pi.ring);
  for (const QuadInt& u : {QuadInt::of(1, pi.ring), QuadInt::of(-1, pi.ring), e, -e})
    if (is_totally_positive(u * pi)) return u * pi;
  throw Unsupported("no totally positive associate of " + to_string(pi));
}

namespace {

double embed_component(const Quaternion& q, int i, int s) {
  double v = embedding(q.x[i], s);
  if (q.dexp == 0) return v;
  double d = q.ring == RingId::Sqrt2 ? (s == 0 ? std::sqrt(2.0) : -std::sqrt(2.0)) : 2.0;
  return v / std::pow(d, q.dexp);
}

// All x in the order with reduced norm exactly n (totally positive), one of each pair +-x.
std::vector<Quaternion> elements_of_norm(const GateSet& gs, const QuadInt& n) {
  const Order& o = gs.order_ref();
  const bool quad = o.ring != RingId::Integers;
  const int dim = quad ? 8 : 4;
  const int emb = quad ? 2 : 1;
  std::vector<Quaternion> basis;
  for (int m = 0; m < 4; ++m) basis.push_back(o.basis[m]);
  if (quad)
    for (int m = 0; m < 4; ++m) basis.push_back(scale(o.basis[m], QuadInt::omega(o.ring)));
  Eigen::MatrixXd M(4 * emb, dim);
  for (int a = 0; a < dim; ++a)
    for (int s = 0; s < emb; ++s)
      for (int i = 0; i < 4; ++i) M(s * 4 + i, a) = embed_component(basis[a], i, s);
  Eigen::MatrixXd G = M.transpose() * M;
  Eigen::MatrixXd R = G.llt().matrixU();
  double target1 = embedding(n, 0);
  double bound = quad ? target1 + embedding(n, 1) : target1;
  bound += 1e-6 * (1 + bound);

  std::vector<Quaternion> out;
  std::vector<long> z(dim, 0);
  Eigen::VectorXd zv(dim);
  std::function<void(int, double)> rec = [&](int i, double used) {
    if (i < 0) {
      bool positive = false;
      for (int a = 0; a < dim; ++a)
        if (z[a] != 0) {
          positive = z[a] > 0;
          break;
        }
      if (!positive) return;
      for (int a = 0; a < dim; ++a) zv(a) = static_cast<double>(z[a]);
      if (quad && std::fabs((M.topRows(4) * zv).squaredNorm() - target1) > 1e-6 * (1 + target1)) return;
      std::array<QuadInt, 4> c;
      for (int m = 0; m < 4; ++m) c[m] = qi(z[m], quad ? z[m + 4] : 0, o.ring);
      Quaternion x = o.from_coords(c);
      if (reduced_norm(x) == n) out.push_back(x);
      return;
    }
    double center = 0;
    for (int j = i + 1; j < dim; ++j) center -= R(i, j) * static_cast<double>(z[j]);
    center /= R(i, i);
    double room = (bound - used) / (R(i, i) * R(i, i));
    if (room < 0) return;
    double w = std::sqrt(room);
    long lo = static_cast<long>(std::ceil(center - w - 1e-12)), hi = static_cast<long>(std::floor(center + w + 1e-12));
    for (long v = lo; v <= hi; ++v) {
      z[i] = v;
      double t = R(i, i) * (static_cast<double>(v) - center);
      rec(i - 1, used + t * t);
    }
    z[i] = 0;
  };
  rec(dim - 1, 0.0);
  return out;
}

void add_check(ValidationReport& r, std::string name, bool pass, std::string detail = {}) {
  r.checks.push_back({std::move(name), pass, std::move(detail)});
}

std::size_t element_order(const Quaternion& a, const GateSet& gs) {
  Quaternion one = gs.canonical(Quaternion::scalar(QuadInt::of(1, gs.ring)));
  Quaternion p = gs.canonical(a);
  for (std::size_t n = 1; n <= 120; ++n) {
    if (p == one) return n;
    p = gs.canonical(multiply(p, a));
  }
  return 0;
}

// Dihedral subgroup of order 2n inside the unit group; the first one in sorted order.
std::vector<Quaternion> dihedral_subgroup(const GateSet& gs, std::size_t n) {
  std::vector<Quaternion> units = gs.order_ref().unit_reps;
  std::sort(units.begin(), units.end(), quaternion_less);
  for (const auto& a : units) {
    if (element_order(a, gs) != n) continue;
    for (const auto& b : units) {
      if (element_order(b, gs) != 2) continue;
      if (gs.canonical(multiply(multiply(b, a), conj(b))) == gs.canonical(conj(a))) {
        auto g = generate_group({a, b}, gs);
        if (g.size() == 2 * n) return g;
      }
    }
  }
  throw InternalError("no dihedral subgroup found");
}

void finish(GateSet& gs) {
  gs.k = Int(abs(gs.ring == RingId::Integers ? gs.pi.a : norm(gs.pi))).get_si();
  Quaternion one = gs.canonical(Quaternion::scalar(QuadInt::of(1, gs.ring)));
  if (gs.is_super()) {
    for (auto& c : gs.C) c = gs.canonical(c);
    gs.T = gs.canonical(gs.T);
    std::sort(gs.C.begin(), gs.C.end(), [&](const Quaternion& p, const Quaternion& q) {
      if ((p == one) != (q == one)) return p == one;
      return quaternion_less(p, q);
    });
    for (const auto& c : gs.C) gs.matrices.push_back(to_su2(c));
    gs.matrices.push_back(to_su2(gs.T));
  } else {
    for (auto& g : gs.gens) g = gs.canonical(g);
    gs.inverse.assign(gs.gens.size(), -1);
    for (std::size_t a = 0; a < gs.gens.size(); ++a)
      for (std::size_t b = 0; b < gs.gens.size(); ++b)
        if (is_scalar(hamilton(gs.gens[a], gs.gens[b]))) gs.inverse[a] = static_cast<int>(b);
    for (const auto& g : gs.gens) gs.matrices.push_back(to_su2(g));
  }
}

GateSet super_set(std::string name, OrderId order, QuadInt pi, std::vector<Quaternion> C, Quaternion T,
                  std::string description) {
  GateSet gs;
  gs.name = std::move(name);
  gs.kind = GateSetKind::Super;
  gs.order = order;
  gs.ring = pi.ring;
  gs.pi = std::move(pi);
  gs.C = std::move(C);
  gs.T = std::move(T);
  gs.description = std::move(description);
  return gs;
}

GateSet golden_set(std::string name, OrderId order, QuadInt pi, std::vector<Quaternion> gens, std::string description) {
  GateSet gs;
  gs.name = std::move(name);
  gs.kind = GateSetKind::Golden;
  gs.order = order;
  gs.ring = pi.ring;
  gs.pi = std::move(pi);
  gs.gens = std::move(gens);
  gs.description = std::move(description);
  return gs;
}

// Fills C from generators when C holds generators only.
void close_C(GateSet& gs) { gs.C = generate_group(gs.C, gs); }

std::vector<GateSet> build_catalog() {
  const RingId Z = RingId::Integers, S = RingId::Sqrt2, F = RingId::Golden;
  auto zq = [](long a, long b, long c, long d, int e = 0) { return Quaternion::from_ints(a, b, c, d, RingId::Integers, e); };
  std::vector<GateSet> out;

  out.push_back(super_set("pauli_t", OrderId::Lipschitz, QuadInt::of(3, Z), unit_group(OrderId::Lipschitz),
                          zq(0, 1, 1, 1), "Pauli group with T = i+j+k over the Lipschitz order, p = 3"));
  out.push_back(super_set("hurwitz_t", OrderId::Hurwitz, QuadInt::of(11, Z), unit_group(OrderId::Hurwitz),
                          zq(0, 3, 1, 1), "tetrahedral group with T = 3i+j+k over the Hurwitz order, p = 11"));
  out.push_back(super_set("clifford_t", OrderId::OctaSqrt2, qi(5, -1, S), unit_group(OrderId::OctaSqrt2),
                          quat({QuadInt::of(0, S), qi(1, 1, S), QuadInt::of(1, S), qi(-2, 1, S)}, 1),
                          "octahedral group over Z[sqrt2], P = (5-sqrt2), k = 23"));
  out.push_back(super_set("octa8", OrderId::OctaSqrt2, qi(3, -1, S),
                          {quat({QuadInt::of(0, S), QuadInt::of(0, S), QuadInt::of(0, S), QuadInt::of(1, S)}, 0),
                           quat({QuadInt::of(1, S), QuadInt::of(-1, S), QuadInt::of(0, S), QuadInt::of(0, S)}, 1)},
                          quat({QuadInt::of(0, S), qi(-1, 1, S), qi(0, 1, S), QuadInt::of(1, S)}, 1),
                          "dihedral group of order 8 over Z[sqrt2], P over 7"));
  out.push_back(super_set("three_t", OrderId::OctaSqrt2, qi(0, 1, S),
                          {quat({QuadInt::of(1, S), QuadInt::of(1, S), QuadInt::of(1, S), QuadInt::of(1, S)}, 2)},
                          quat({QuadInt::of(0, S), QuadInt::of(0, S), qi(-1, 1, S), QuadInt::of(1, S)}, 1),
                          "cyclic group of order 3 over Z[sqrt2], ramified P = (sqrt2)"));
  {
    GateSet h = super_set("hybrid6", OrderId::Lipschitz, QuadInt::of(5, Z), {zq(1, 1, 1, 1), zq(0, 1, -1, 0)},
                          zq(0, 0, 1, 2), "Sym3 from scaled generators 1+i+j+k and i-j with T = j+2k, p = 5");
    h.extra_primes = {QuadInt::of(2, Z)};
    out.push_back(std::move(h));
  }
  out.push_back(super_set("icosa60", OrderId::Icosian, qi(7, 5, F), unit_group(OrderId::Icosian),
                          quat({QuadInt::of(0, F), qi(2, 1, F), QuadInt::of(1, F), QuadInt::of(1, F)}, 0),
                          "icosahedral group over Z[phi], P = (7+5phi), k = 59"));
  out.push_back(super_set("icosa12p", OrderId::Icosian, qi(4, -1, F),
                          {quat({QuadInt::of(1, F), QuadInt::of(1, F), QuadInt::of(1, F), QuadInt::of(1, F)}, 1),
                           quat({QuadInt::of(0, F), QuadInt::of(1, F), qi(1, -1, F), qi(0, 1, F)}, 1)},
                          quat({QuadInt::of(0, F), qi(-1, 1, F), QuadInt::of(1, F), QuadInt::of(1, F)}, 0),
                          "tetrahedral subgroup of the icosians, P = (4-phi), k = 11"));
  out.push_back(super_set("icosa5", OrderId::Icosian, QuadInt::of(2, F),
                          {quat({qi(0, 1, F), qi(-1, 1, F), QuadInt::of(1, F), QuadInt::of(0, F)}, 1)},
                          quat({QuadInt::of(0, F), QuadInt::of(0, F), QuadInt::of(1, F), QuadInt::of(1, F)}, 0),
                          "cyclic group of order 5 over Z[phi], inert P = (2)"));
  for (auto& gs : out) {
    close_C(gs);
    finish(gs);
  }

  out.push_back(golden_set("v_gates", OrderId::Lipschitz, QuadInt::of(5, Z),
                           {zq(1, 2, 0, 0), zq(1, -2, 0, 0), zq(1, 0, 2, 0), zq(1, 0, -2, 0), zq(1, 0, 0, 2),
                            zq(1, 0, 0, -2)},
                           "V-gates 1+-2i, 1+-2j, 1+-2k, p = 5"));
  out.push_back(golden_set("p3_involutions", OrderId::Lipschitz, QuadInt::of(3, Z),
                           {zq(0, 1, 1, 1), zq(0, 1, -1, 1), zq(0, 1, 1, -1), zq(0, 1, -1, -1)},
                           "four involutions of norm 3, p = 3"));
  for (std::size_t i = out.size() - 2; i < out.size(); ++i) finish(out[i]);
  return out;
}

std::vector<GateSet> build_nonexamples() {
  const RingId F = RingId::Golden;
  std::vector<GateSet> out;
  GateSet a = super_set("nonexample_sqrt5", OrderId::Icosian, qi(-1, 2, F), {},
                        quat({QuadInt::of(0, F), QuadInt::of(1, F), qi(0, 1, F), QuadInt::of(0, F)}, 0),
                        "Sym3 in the icosahedral group with T = i+phi j, ramified P = (sqrt5)");
  a.C = dihedral_subgroup(a, 3);
  GateSet b = super_set("nonexample_3", OrderId::Icosian, QuadInt::of(3, F), {},
                        quat({QuadInt::of(0, F), QuadInt::of(1, F), QuadInt::of(1, F), QuadInt::of(1, F)}, 0),
                        "Dih5 in the icosahedral group with T = i+j+k, inert P = (3)");
  b.C = dihedral_subgroup(b, 5);
  out.push_back(std::move(a));
  out.push_back(std::move(b));
  for (auto& gs : out) finish(gs);
  return out;
}

}  // namespace

Quaternion GateSet::canonical(const Quaternion& q) const { return canonicalize(q, order_ref(), pi, extra_primes); }

bool quaternion_less(const Quaternion& p, const Quaternion& q) {
  if (p.dexp == q.dexp) {
    for (int i = 0; i < 4; ++i) {
      if (p.x[i].a != q.x[i].a) return p.x[i].a < q.x[i].a;
      if (p.x[i].b != q.x[i].b) return p.x[i].b < q.x[i].b;
    }
    return false;
  }
  int d = std::max(p.dexp, q.dexp);
  auto a = numerators(p, d), b = numerators(q, d);
  for (int i = 0; i < 4; ++i) {
    if (a[i].a != b[i].a) return a[i].a < b[i].a;
    if (a[i].b != b[i].b) return a[i].b < b[i].b;
  }
  return false;
}

const std::vector<GateSet>& catalog() {
  static const std::vector<GateSet> c = build_catalog();
  return c;
}

const std::vector<GateSet>& nonexamples() {
  static const std::vector<GateSet> c = build_nonexamples();
  return c;
}

const GateSet& find_gateset(std::string_view name) {
  for (const auto* list : {&catalog(), &nonexamples()})
    for (const auto& gs : *list)
      if (gs.name == name) return gs;
  throw InvalidArgument("unknown gate set: " + std::string(name));
}

bool pi_divides(const Quaternion& q, const GateSet& gs) {
  auto c = gs.order_ref().coords(q);
  if (!c) throw InvalidArgument("quaternion is not in the " + std::string(order_name(gs.order)) + " order");
  for (const auto& v : *c)
    if (!divides(gs.pi, v)) return false;
  return true;
}

bool same_neighbor(const Quaternion& q, const Quaternion& r, const GateSet& gs) {
  return pi_divides(multiply(q, conj(r)), gs);
}

std::vector<Quaternion> generate_group(const std::vector<Quaternion>& gens, const GateSet& gs) {
  std::vector<Quaternion> out{gs.canonical(Quaternion::scalar(QuadInt::of(1, gs.ring)))};
  std::unordered_set<Quaternion, QuaternionHash> seen(out.begin(), out.end());
  for (std::size_t i = 0; i < out.size(); ++i)
    for (const auto& g : gens) {
      Quaternion p = gs.canonical(multiply(out[i], g));
      if (seen.insert(p).second) {
        out.push_back(p);
        if (out.size() > 240) throw InvalidArgument("generated group is not finite modulo scalars");
      }
    }
  return out;
}

bool ValidationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

bool ValidationReport::passed(std::string_view name) const {
  for (const auto& c : checks)
    if (c.name == name) return c.pass;
  throw InvalidArgument("no check named " + std::string(name));
}

ValidationReport validate(const GateSet& gs) {
  ValidationReport r;
  r.gateset = gs.name;
  const Order& o = gs.order_ref();
  // letters: the elements whose neighbor classes must be distinct and exhaustive
  std::vector<Quaternion> letters;
  if (gs.is_super())
    for (const auto& c : gs.C) letters.push_back(multiply(gs.T, c));
  else
    letters = gs.gens;

  bool members = o.contains(gs.T) || !gs.is_super();
  for (const auto& c : gs.C) members = members && o.contains(c);
  for (const auto& g : gs.gens) members = members && o.contains(g);
  add_check(r, "members", members);
  if (!members) return r;

  const std::size_t want = static_cast<std::size_t>(gs.k) + 1;
  if (gs.is_super()) {
    add_check(r, "C_size", gs.C.size() == want, std::to_string(gs.C.size()) + " vs " + std::to_string(want));
    add_check(r, "C_identity_first", !gs.C.empty() && is_scalar(gs.C[0]));
    bool closed = generate_group(gs.C, gs).size() == gs.C.size();
    add_check(r, "C_closed", closed);
    bool norms = true;
    for (const auto& c : gs.C) norms = norms && unit_up_to(reduced_norm(c), gs.extra_primes);
    add_check(r, "C_norms", norms);
    auto q = exact_div(reduced_norm(gs.T), gs.pi);
    add_check(r, "T_norm", q && is_unit(*q), to_string(reduced_norm(gs.T)));
    add_check(r, "T_involution", is_scalar(hamilton(gs.T, gs.T)));
  } else {
    add_check(r, "gens_count", gs.gens.size() == want, std::to_string(gs.gens.size()) + " vs " + std::to_string(want));
    bool inv = std::none_of(gs.inverse.begin(), gs.inverse.end(), [](int v) { return v < 0; });
    add_check(r, "closed_under_inverse", inv);
    bool norms = true;
    for (const auto& g : gs.gens) {
      auto q = exact_div(reduced_norm(g), gs.pi);
      norms = norms && q && is_unit(*q);
    }
    add_check(r, "gen_norms", norms);
  }

  std::size_t clashes = 0;
  for (std::size_t a = 0; a < letters.size(); ++a)
    for (std::size_t b = a + 1; b < letters.size(); ++b)
      if (same_neighbor(letters[a], letters[b], gs)) ++clashes;
  add_check(r, "neighbors_distinct", clashes == 0, std::to_string(clashes) + " coinciding pairs");

  bool exhausted = true;
  if (gs.k <= 60) {
    auto elems = elements_of_norm(gs, totally_positive_associate(gs.pi));
    std::size_t unmatched = 0;
    std::vector<Quaternion> reps;
    for (const auto& x : elems) {
      bool hit = std::any_of(letters.begin(), letters.end(), [&](const Quaternion& l) { return same_neighbor(x, l, gs); });
      if (!hit) ++unmatched;
      if (std::none_of(reps.begin(), reps.end(), [&](const Quaternion& y) { return same_neighbor(x, y, gs); }))
        reps.push_back(x);
    }
    exhausted = unmatched == 0 && reps.size() == want;
    add_check(r, "neighbors_exhausted", exhausted,
              std::to_string(elems.size()) + " elements of norm pi, " + std::to_string(reps.size()) +
                  " neighbor classes, " + std::to_string(unmatched) + " unmatched");
  }
  add_check(r, "transitivity", clashes == 0 && exhausted && letters.size() == want);
  return r;
}

GateSet derive_golden_set(const GateSet& gs) {
  if (!gs.is_super()) throw InvalidArgument("derive_golden_set needs a Super gate set");
  GateSet g;
  g.name = gs.name + "_golden";
  g.kind = GateSetKind::Golden;
  g.ring = gs.ring;
  g.order = gs.order;
  g.pi = gs.pi;
  g.extra_primes = gs.extra_primes;
  for (const auto& c : gs.C) g.gens.push_back(multiply(multiply(c, gs.T), conj(c)));
  g.description = "conjugates c T c^-1 of " + gs.name;
  finish(g);
  return g;
}

bool operator==(const Word& a, const Word& b) {
  return a.gateset == b.gateset && a.letters == b.letters && a.tcount == b.tcount;
}

Word make_super_word(const GateSet& gs, const std::vector<int>& cs) {
  if (cs.empty()) throw InvalidArgument("a word needs at least one C letter");
  Word w;
  w.gateset = gs.name;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (i) w.letters.push_back(Word::kT);
    w.letters.push_back(cs[i]);
  }
  w.tcount = static_cast<int>(cs.size()) - 1;
  return w;
}

void check_word(const Word& w, const GateSet& gs) {
  if (w.gateset != gs.name) throw InvalidArgument("word belongs to " + w.gateset + ", not " + gs.name);
  const int n = static_cast<int>(w.letters.size());
  if (gs.is_super()) {
    if (n % 2 == 0) throw InvalidArgument("super word must have odd length");
    for (int i = 0; i < n; ++i) {
      int l = w.letters[i];
      if (i % 2 == 1) {
        if (l != Word::kT) throw InvalidArgument("expected T at position " + std::to_string(i));
        continue;
      }
      if (l < 0 || l >= static_cast<int>(gs.C.size())) throw InvalidArgument("C index out of range");
      if (l == 0 && i != 0 && i != n - 1) throw InvalidArgument("identity in the interior of a word");
    }
    if (w.tcount != n / 2) throw InvalidArgument("tcount does not match the word");
  } else {
    for (int i = 0; i < n; ++i) {
      int l = w.letters[i];
      if (l < 0 || l >= static_cast<int>(gs.gens.size())) throw InvalidArgument("generator index out of range");
      if (i > 0 && gs.inverse[w.letters[i - 1]] == l) throw InvalidArgument("word is not reduced");
    }
    if (w.tcount != n) throw InvalidArgument("tcount does not match the word");
  }
}

Quaternion evaluate(const Word& w, const GateSet& gs) {
  check_word(w, gs);
  Quaternion p = gs.canonical(Quaternion::scalar(QuadInt::of(1, gs.ring)));
  for (int l : w.letters) {
    const Quaternion& f = gs.is_super() ? (l == Word::kT ? gs.T : gs.C[l]) : gs.gens[l];
    p = gs.canonical(multiply(p, f));
  }
  return p;
}

std::string word_to_json(const Word& w) {
  nlohmann::json j;
  j["gateset"] = w.gateset;
  const GateSet& gs = find_gateset(w.gateset);
  std::vector<std::string> letters;
  for (int l : w.letters)
    letters.push_back(l == Word::kT ? "T" : (gs.is_super() ? "c" : "s") + std::to_string(l));
  j["word"] = letters;
  j["tcount"] = w.tcount;
  j["schema"] = 1;
  return j.dump();
}

std::string gateset_to_json(const GateSet& gs) {
  nlohmann::json j;
  j["name"] = gs.name;
  j["kind"] = gs.is_super() ? "super" : "golden";
  j["ring"] = ring_tag(gs.ring);
  j["order"] = order_name(gs.order);
  j["pi"] = to_string(gs.pi);
  j["k"] = gs.k;
  j["description"] = gs.description;
  const auto& src = gs.is_super() ? gs.C : gs.gens;
  std::vector<std::string> elems;
  for (const auto& q : src) elems.push_back(to_string(q));
  j[gs.is_super() ? "C" : "generators"] = elems;
  if (gs.is_super()) j["T"] = to_string(gs.T);
  nlohmann::json mats = nlohmann::json::array();
  for (std::size_t i = 0; i < gs.matrices.size(); ++i) {
    nlohmann::json m;
    m["label"] = i < src.size() ? (gs.is_super() ? "c" : "s") + std::to_string(i) : "T";
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& z : gs.matrices[i]) entries.push_back({z.real(), z.imag()});
    m["entries"] = entries;
    mats.push_back(m);
  }
  j["matrices"] = mats;
  return j.dump();
}

Word word_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad word JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("gateset") || !j.contains("word") || !j["word"].is_array())
    throw InvalidArgument("word JSON needs gateset and word");
  if (j.contains("schema") && j["schema"] != 1) throw InvalidArgument("unknown word schema");
  Word w;
  w.gateset = j["gateset"].get<std::string>();
  const GateSet& gs = find_gateset(w.gateset);
  const char prefix = gs.is_super() ? 'c' : 's';
  for (const auto& e : j["word"]) {
    if (!e.is_string()) throw InvalidArgument("word letters must be strings");
    std::string s = e.get<std::string>();
    if (s == "T") {
      w.letters.push_back(Word::kT);
      continue;
    }
    if (s.size() < 2 || s[0] != prefix || s.find_first_not_of("0123456789", 1) != std::string::npos)
      throw InvalidArgument("bad letter " + s);
    w.letters.push_back(std::stoi(s.substr(1)));
  }
  w.tcount = gs.is_super() ? static_cast<int>(w.letters.size()) / 2 : static_cast<int>(w.letters.size());
  if (j.contains("tcount") && j["tcount"].get<int>() != w.tcount) throw InvalidArgument("tcount does not match the word");
  check_word(w, gs);
  return w;
}

std::string word_to_string(const Word& w) {
  const GateSet& gs = find_gateset(w.gateset);
  std::string s;
  for (int l : w.letters) {
    if (!s.empty()) s += ' ';
    s += l == Word::kT ? "T" : (gs.is_super() ? "c" : "s") + std::to_string(l);
  }
  return s;
}

}  // namespace sgg
