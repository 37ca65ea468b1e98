#include "sgg/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <map>
#include <mutex>

#include "sgg/diophantine.hpp"
#include "sgg/errors.hpp"

namespace sgg {

namespace {

Quaternion one(const GateSet& gs) { return gs.canonical(Quaternion::scalar(QuadInt::of(1, gs.ring))); }

// delta^(2 dmax): the square of the common denominator of the order
QuadInt denominator_squared(const Order& o) {
  long d2 = o.ring == RingId::Sqrt2 ? (1L << o.dmax) : (1L << (2 * o.dmax));
  return QuadInt::of(d2, o.ring);
}

// Reduced norms to probe at level t, balanced across the two embeddings.
std::vector<QuadInt> level_norms(const GateSet& gs, int t) {
  QuadInt base = pow(totally_positive_associate(gs.pi), static_cast<unsigned>(t));
  std::vector<QuadInt> out{base};
  for (const auto& p : gs.extra_primes) {
    std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i)
      for (int e = 1; e <= 2; ++e) out.push_back(out[i] * pow(p, static_cast<unsigned>(e)));
  }
  if (gs.ring != RingId::Integers)
    for (auto& n : out) {
      double L = log_fundamental_unit(gs.ring);
      long m = std::lround((log_abs_embedding(n, 1) - log_abs_embedding(n, 0)) / (4 * L));
      if (m != 0) n = n * unit_power(gs.ring, 2 * m);
    }
  return out;
}

// Arithmetic in O_K / pi, which is F_p (split, ramified, or Z) or F_{p^2} (inert pi = p).
struct Residue {
  using E = std::array<long, 2>;
  long p = 0;
  int f = 1;
  long r = 0;  // image of the ring generator when f = 1
  RingId ring = RingId::Integers;

  E reduce(const QuadInt& x) const {
    long a = static_cast<long>(mpz_fdiv_ui(x.a.get_mpz_t(), p));
    long b = static_cast<long>(mpz_fdiv_ui(x.b.get_mpz_t(), p));
    if (f == 1) return {(a + b * r) % p, 0};
    return {a, b};
  }
  E mul(const E& x, const E& y) const {
    if (f == 1) return {x[0] * y[0] % p, 0};
    long ac = x[0] * y[0] % p, bd = x[1] * y[1] % p, mid = (x[0] * y[1] + x[1] * y[0]) % p;
    if (ring == RingId::Sqrt2) return {(ac + 2 * bd) % p, mid};
    return {(ac + bd) % p, (mid + bd) % p};
  }
};

Residue make_residue(const GateSet& gs) {
  Residue res;
  res.ring = gs.ring;
  if (gs.ring == RingId::Integers) {
    res.p = Int(abs(gs.pi.a)).get_si();
    return res;
  }
  Int n = abs(norm(gs.pi));
  if (is_probable_prime(n)) {
    res.p = n.get_si();
    Int b = gs.pi.b % n;
    if (b < 0) b += n;
    Int inv;
    mpz_invert(inv.get_mpz_t(), b.get_mpz_t(), n.get_mpz_t());
    Int r = (-gs.pi.a * inv) % n;
    if (r < 0) r += n;
    res.r = r.get_si();
    return res;
  }
  if (sgn(gs.pi.b) != 0) throw Unsupported("inert prime must be a rational integer");
  res.p = Int(abs(gs.pi.a)).get_si();
  res.f = 2;
  return res;
}

struct DescentTable {
  Residue res;
  std::vector<Quaternion> steps;  // conj(c) conj(T), or conj(g)
  // images mod pi of the order coordinates of basis[m] * steps[i], as [i][m][k]
  std::vector<std::array<std::array<Residue::E, 4>, 4>> mats;
};

const DescentTable& descent_table(const GateSet& gs) {
  static std::mutex mu;
  static std::map<std::string, DescentTable> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(gs.name);
  if (it != cache.end()) return it->second;
  DescentTable t;
  t.res = make_residue(gs);
  const Order& o = gs.order_ref();
  for (std::size_t i = 0; i < gs.letters(); ++i) {
    Quaternion s = gs.is_super() ? multiply(conj(gs.C[i]), conj(gs.T)) : conj(gs.gens[i]);
    std::array<std::array<Residue::E, 4>, 4> m{};
    for (int b = 0; b < 4; ++b) {
      auto c = o.coords(multiply(o.basis[b], s));
      if (!c) throw InternalError("descent factor leaves the order");
      for (int k = 0; k < 4; ++k) m[b][k] = t.res.reduce((*c)[k]);
    }
    t.steps.push_back(std::move(s));
    t.mats.push_back(m);
  }
  return cache.emplace(gs.name, std::move(t)).first->second;
}

bool has_pauli_group(const GateSet& gs) {
  if (!gs.is_super()) return false;
  for (int a = 1; a < 4; ++a) {
    std::array<long, 4> v{0, 0, 0, 0};
    v[a] = 1;
    Quaternion p = gs.canonical(Quaternion::from_ints(v[0], v[1], v[2], v[3], gs.ring));
    if (std::find(gs.C.begin(), gs.C.end(), p) == gs.C.end()) return false;
  }
  return true;
}

}  // namespace

int t_count(const Quaternion& q, const GateSet& gs) {
  if (q.is_zero()) throw InvalidArgument("t_count of zero");
  QuadInt n = reduced_norm(gs.canonical(q));
  for (const auto& p : gs.extra_primes)
    while (auto d = exact_div(n, p)) n = *d;
  int t = 0;
  while (auto d = exact_div(n, gs.pi)) {
    n = *d;
    ++t;
  }
  if (!is_unit(n)) throw NotAMember("reduced norm is not a unit times a power of pi");
  return t;
}

Word exact_synthesize(const Quaternion& q, const GateSet& gs) {
  if (q.ring != gs.ring || q.is_zero() || !gs.order_ref().contains(q))
    throw NotAMember("quaternion is not a nonzero element of the order");
  Quaternion cur = gs.canonical(q);
  int t = t_count(cur, gs);
  std::vector<int> rev;
  const std::size_t n = gs.letters();
  const DescentTable& tab = descent_table(gs);
  const Residue& res = tab.res;
  const Order& o = gs.order_ref();
  while (t > 0) {
    int found = -1, count = 0;
    auto cc = o.coords(cur);
    std::array<Residue::E, 4> cr;
    for (int m = 0; m < 4; ++m) cr[m] = res.reduce((*cc)[m]);
    for (std::size_t i = 0; i < n; ++i) {
      bool zero = true;
      for (int k = 0; k < 4 && zero; ++k) {
        Residue::E acc{0, 0};
        for (int m = 0; m < 4; ++m) {
          auto v = res.mul(cr[m], tab.mats[i][m][k]);
          acc = {(acc[0] + v[0]) % res.p, (acc[1] + v[1]) % res.p};
        }
        zero = acc[0] == 0 && acc[1] == 0;
      }
      if (zero) {
        ++count;
        found = static_cast<int>(i);
      }
    }
    if (count == 0) throw NotAMember("no letter descends at T-count " + std::to_string(t));
    if (count > 1) throw InternalError("descent is not unique at T-count " + std::to_string(t));
    Quaternion next = multiply(cur, tab.steps[found]);
    if (!pi_divides(next, gs)) throw InternalError("residue test disagrees with exact division");
    cur = gs.canonical(next);
    int nt = t_count(cur, gs);
    if (nt != t - 1) throw NotAMember("descent skipped a level");
    rev.push_back(found);
    t = nt;
  }
  Word w;
  w.gateset = gs.name;
  if (gs.is_super()) {
    auto it = std::find(gs.C.begin(), gs.C.end(), cur);
    if (it == gs.C.end()) throw NotAMember("remainder at T-count 0 is not in C");
    rev.push_back(static_cast<int>(it - gs.C.begin()));
    std::reverse(rev.begin(), rev.end());
    w = make_super_word(gs, rev);
  } else {
    if (cur != one(gs)) throw NotAMember("remainder at T-count 0 is not the identity");
    std::reverse(rev.begin(), rev.end());
    w.letters = rev;
    w.tcount = static_cast<int>(rev.size());
  }
  check_word(w, gs);
  return w;
}

int default_max_tcount(double eps, const GateSet& gs) {
  return static_cast<int>(std::ceil(6.0 * std::log(1.0 / (eps * eps)) / std::log(static_cast<double>(gs.k)))) + 24;
}

UnitaryMatrix rz(double theta) {
  return {std::polar(1.0, -theta / 2), Complex(0, 0), Complex(0, 0), std::polar(1.0, theta / 2)};
}

SynthesisResult approx_planar(const std::array<double, 4>& xi_in, int a, int b, double eps, const GateSet& gs,
                              const SynthesisOptions& opts) {
  if (!(eps > 0 && eps <= 1)) throw InvalidArgument("eps must lie in (0, 1]");
  if (a < 0 || b > 3 || a >= b) throw InvalidArgument("bad coordinate plane");
  std::array<double, 4> xi{};
  double len = std::hypot(xi_in[a], xi_in[b]);
  for (int i = 0; i < 4; ++i)
    if (i != a && i != b && std::fabs(xi_in[i]) > 1e-12) throw InvalidArgument("target leaves the coordinate plane");
  if (len < 1e-12) throw InvalidArgument("zero target");
  xi[a] = xi_in[a] / len;
  xi[b] = xi_in[b] / len;
  const UnitaryMatrix target = vector_to_su2(xi);
  int rest[2], r = 0;
  for (int i = 0; i < 4; ++i)
    if (i != a && i != b) rest[r++] = i;

  const Order& o = gs.order_ref();
  const QuadInt d2 = denominator_squared(o);
  const int max_t = opts.max_tcount >= 0 ? opts.max_tcount : default_max_tcount(eps, gs);
  SynthesisResult res;
  for (int t = 0; t <= max_t; ++t) {
    res.searched_to = t;
    bool found = false;
    std::size_t spent = 0;
    for (const QuadInt& n : level_norms(gs, t)) {
      CapConstraint c{xi[a], xi[b], std::min(2 * eps * eps, 1.999999), n * d2};
      std::optional<CapEnumerator> en;
      try {
        en.emplace(c);
      } catch (const Unsupported&) {
        return res;
      }
      bool hit = false;
      while (!hit && spent < opts.budget) {
        auto p = en->next();
        if (!p) break;
        ++spent;
        ++res.candidates;
        QuadInt m = c.n - p->first * p->first - p->second * p->second;
        auto sq = two_squares(m);
        if (!sq) continue;
        std::array<QuadInt, 2> uv{sq->first, sq->second};
        bool done_pair = false;
        for (int swap = 0; swap < 2 && !done_pair; ++swap)
          for (int s = 0; s < 4 && !done_pair; ++s) {
            Quaternion x(gs.ring);
            x.x[a] = p->first;
            x.x[b] = p->second;
            x.x[rest[0]] = (s & 1) ? -uv[swap] : uv[swap];
            x.x[rest[1]] = (s & 2) ? -uv[1 - swap] : uv[1 - swap];
            x.dexp = o.dmax;
            x.reduce();
            if (!o.contains(x)) continue;
            Word w;
            try {
              w = exact_synthesize(x, gs);
            } catch (const NotAMember&) {
              continue;
            }
            done_pair = hit = true;
            Quaternion e = evaluate(w, gs);
            double d = pu2_distance(to_su2(e), target);
            if (d <= eps && (!found || d < res.achieved_distance)) {
              res.success = found = true;
              res.word = w;
              res.element = e;
              res.achieved_distance = d;
            }
          }
      }  // the enumerator is best-first, so the first hit is the closest for this norm
    }
    if (found) return res;
  }
  return res;
}

SynthesisResult approx_diagonal(double theta, double eps, const GateSet& gs, const SynthesisOptions& opts) {
  return approx_planar({std::cos(theta / 2), -std::sin(theta / 2), 0, 0}, 0, 1, eps, gs, opts);
}

std::array<double, 3> zyz_angles(const std::array<double, 4>& q) {
  double cb = std::hypot(q[0], q[1]), sb = std::hypot(q[2], q[3]);
  double B = std::atan2(sb, cb);
  double S = std::atan2(-q[1], q[0]);
  double D = std::atan2(q[3], -q[2]);
  return {S + D, 2 * B, S - D};
}

Word concatenate(const std::vector<Word>& parts, const GateSet& gs) {
  Quaternion p = one(gs);
  for (const auto& w : parts) p = gs.canonical(multiply(p, evaluate(w, gs)));
  return exact_synthesize(p, gs);
}

namespace {

// Breadth-first over words of increasing T-count, stopping once `limit` words have been generated.
std::optional<Word> short_word_hit(const UnitaryMatrix& target, double eps, const GateSet& gs, std::size_t limit) {
  struct Node {
    UnitaryMatrix m;
    std::vector<int> letters;  // super: c_t ... c_0; golden: generators
  };
  const std::size_t n = gs.letters();
  std::vector<Node> level;
  if (gs.is_super()) {
    for (std::size_t c = 0; c < n; ++c) level.push_back({gs.matrices[c], {static_cast<int>(c)}});
  } else {
    level.push_back({identity_matrix(), {}});
  }
  std::size_t total = level.size();
  for (int t = 0;; ++t) {
    const Node* best = nullptr;
    double bd = eps;
    for (const auto& nd : level) {
      double d = pu2_distance(nd.m, target);
      if (d <= bd) {
        bd = d;
        best = &nd;
      }
    }
    if (best) {
      Word w;
      if (gs.is_super()) {
        w = make_super_word(gs, best->letters);
      } else {
        w.gateset = gs.name;
        w.letters = best->letters;
        w.tcount = t;
      }
      return w;
    }
    std::vector<Node> next;
    for (const auto& nd : level) {
      if (gs.is_super()) {
        if (t > 0 && nd.letters.back() == 0) continue;  // would become an interior identity
        UnitaryMatrix mt = mat_mul(nd.m, gs.matrices[n]);
        for (std::size_t c = 0; c < n; ++c) {
          Node x{mat_mul(mt, gs.matrices[c]), nd.letters};
          x.letters.push_back(static_cast<int>(c));
          next.push_back(std::move(x));
        }
      } else {
        for (std::size_t g = 0; g < n; ++g) {
          if (!nd.letters.empty() && gs.inverse[nd.letters.back()] == static_cast<int>(g)) continue;
          Node x{mat_mul(nd.m, gs.matrices[g]), nd.letters};
          x.letters.push_back(static_cast<int>(g));
          next.push_back(std::move(x));
        }
      }
    }
    total += next.size();
    if (next.empty() || total > limit) return std::nullopt;
    level = std::move(next);
  }
}

}  // namespace

SynthesisResult approx_general(const UnitaryMatrix& target, double eps, const GateSet& gs,
                               const SynthesisOptions& opts) {
  if (!has_pauli_group(gs)) throw Unsupported("approx_general needs the Pauli group i, j, k inside C");
  if (!(eps > 0 && eps <= 1)) throw InvalidArgument("eps must lie in (0, 1]");
  SynthesisResult res;
  if (auto w = short_word_hit(target, eps, gs, 20000)) {
    res.word = *w;
    res.element = evaluate(res.word, gs);
    res.achieved_distance = pu2_distance(to_su2(res.element), target);
    res.success = res.achieved_distance <= eps;
    res.searched_to = res.word.tcount;
    if (res.success) return res;
  }
  auto q = su2_to_vector(target);
  auto [a, b, c] = zyz_angles(q);
  auto zf = [](double t) { return std::array<double, 4>{std::cos(t / 2), -std::sin(t / 2), 0, 0}; };
  auto yf = [](double t) { return std::array<double, 4>{std::cos(t / 2), 0, -std::sin(t / 2), 0}; };
  struct Factor {
    std::array<double, 4> xi;
    int plane_b;
  };
  std::vector<Factor> factors;
  if (b < 1e-12) {
    factors = {{zf(a + c), 1}};
  } else if (M_PI - b < 1e-12) {
    factors = {{zf(a - c), 1}, {yf(M_PI), 2}};
  } else {
    factors = {{zf(a), 1}, {yf(b), 2}, {zf(c), 1}};
  }
  const double part_eps = eps / static_cast<double>(factors.size());
  res = {};
  std::vector<Word> words;
  for (const auto& f : factors) {
    SynthesisResult r = approx_planar(f.xi, 0, f.plane_b, part_eps, gs, opts);
    res.candidates += r.candidates;
    res.searched_to = std::max(res.searched_to, r.searched_to);
    if (!r.success) return res;
    words.push_back(r.word);
  }
  res.word = concatenate(words, gs);
  res.element = evaluate(res.word, gs);
  res.achieved_distance = pu2_distance(to_su2(res.element), target);
  res.success = res.achieved_distance <= eps;
  return res;
}

}  // namespace sgg
