#include "sgg/covering.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <unordered_set>

#include <json.hpp>

#include "sgg/errors.hpp"
#include "sgg/parallel.hpp"

namespace sgg {

namespace {

constexpr double kTol = 1e-9;

Point qmul(const Point& a, const Point& b) {
  return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
          a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
          a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
          a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}

double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]; }

// first coordinate that is not numerically zero becomes positive
void sign_normalize(Point& p) {
  for (double v : p)
    if (std::abs(v) > kTol) {
      if (v < 0)
        for (auto& x : p) x = -x;
      return;
    }
}

int tol_compare(const Point& a, const Point& b) {
  for (int i = 0; i < 4; ++i) {
    if (a[i] > b[i] + kTol) return 1;
    if (a[i] < b[i] - kTol) return -1;
  }
  return 0;
}

std::uint64_t checked_pow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (b != 0 && r > UINT64_MAX / b) throw InvalidArgument("word count overflows 64 bits");
    r *= b;
  }
  return r;
}

double uniform01(Rng& rng) { return (static_cast<double>(rng() >> 11) + 1.0) * 0x1p-53; }

}  // namespace

std::uint64_t word_count(const GateSet& gs, int t) {
  if (t < 0) throw InvalidArgument("tcount must be non-negative");
  std::uint64_t n = gs.letters();
  if (t == 0) return gs.is_super() ? n : 1;
  std::uint64_t head = gs.is_super() ? n * n : n;
  return head * checked_pow(n - 1, t - 1);
}

std::vector<Quaternion> enumerate_words(const GateSet& gs, int t) {
  const std::uint64_t total = word_count(gs, t);
  if (total > kEnumerationGuard) throw InvalidArgument("enumeration past the 10^6 guard");
  std::unordered_set<Quaternion, QuaternionHash> out;
  out.reserve(total);
  const int n = static_cast<int>(gs.letters());
  if (gs.is_super()) {
    // c_t T c_{t-1} ... T c_0 built left to right
    // prefixes end in T; a primitive prefix times a unit of the order stays primitive
    // a letter of norm exactly 1 leaves the norm, and with it the unit scaling, unchanged
    const bool units = gs.extra_primes.empty();
    std::vector<bool> norm_one;
    for (const auto& c : gs.C) norm_one.push_back(reduced_norm(c) == QuadInt::of(1, gs.ring));
    std::function<void(const Quaternion&, int)> rec = [&](const Quaternion& p, int depth) {
      Quaternion pc = gs.canonical(p);
      if (depth == t) {
        for (int c = 0; c < n; ++c) {
          Quaternion w = multiply(pc, gs.C[c]);
          out.insert(units && norm_one[c] ? sign_normalize(std::move(w))
                                          : canonicalize(w, gs.order_ref(), gs.pi, gs.extra_primes, units));
        }
        return;
      }
      for (int c = 1; c < n; ++c) rec(multiply(multiply(pc, gs.C[c]), gs.T), depth + 1);
    };
    if (t == 0) {
      out.insert(gs.C.begin(), gs.C.end());
    } else {
      for (int c = 0; c < n; ++c) rec(multiply(gs.C[c], gs.T), 1);
    }
  } else {
    std::function<void(const Quaternion&, int, int)> rec = [&](const Quaternion& p, int depth, int last) {
      if (depth == t) {
        out.insert(gs.canonical(p));
        return;
      }
      for (int g = 0; g < n; ++g)
        if (last < 0 || gs.inverse[last] != g) rec(multiply(p, gs.gens[g]), depth + 1, g);
    };
    rec(Quaternion::scalar(QuadInt::of(1, gs.ring)), 0, -1);
  }
  // sort on numerators at the order's largest denominator, computed once per element
  std::vector<Quaternion> elems;
  elems.reserve(out.size());
  while (!out.empty()) elems.push_back(std::move(out.extract(out.begin()).value()));
  const int dmax = gs.order_ref().dmax;
  const QuadInt delta = gs.ring == RingId::Sqrt2 ? QuadInt(0, 1, gs.ring) : QuadInt::of(2, gs.ring);
  std::vector<std::array<QuadInt, 4>> keys(elems.size());
  for (std::size_t i = 0; i < elems.size(); ++i) {
    keys[i] = elems[i].x;
    for (int e = elems[i].dexp; e < dmax; ++e)
      for (auto& v : keys[i]) v = v * delta;
  }
  std::vector<std::uint32_t> idx(elems.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<std::uint32_t>(i);
  std::sort(idx.begin(), idx.end(), [&](std::uint32_t x, std::uint32_t y) {
    const auto &a = keys[x], &b = keys[y];
    for (int i = 0; i < 4; ++i) {
      if (int c = cmp(a[i].a, b[i].a)) return c < 0;
      if (int c = cmp(a[i].b, b[i].b)) return c < 0;
    }
    return false;
  });
  std::vector<Quaternion> v;
  v.reserve(elems.size());
  for (auto i : idx) v.push_back(std::move(elems[i]));
  return v;
}

double separation_bound(const GateSet& gs, int t) {
  // coordinates lie in O_K / 2 for every catalog order
  if (gs.ring == RingId::Integers) {
    double n = std::pow(std::abs(gs.pi.a.get_d()), t);
    return 1.0 / (2.0 * std::sqrt(n));
  }
  double normpi = std::abs(norm(gs.pi).get_d());
  return 1.0 / (8.0 * std::pow(normpi, t / 2.0));
}

std::uint64_t count_distinct_words(const GateSet& gs, int t) {
  if (!gs.is_super()) throw Unsupported("count_distinct_words expects a Super gate set");
  if (!gs.extra_primes.empty()) throw Unsupported("count_distinct_words needs unit elements in C");
  if (separation_bound(gs, t) < 1e3 * kTol) throw Unsupported("separation too small for double precision");
  const std::size_t n = gs.C.size();
  std::vector<Point> cs, m;
  Point tp = to_point(gs.T);
  for (const auto& c : gs.C) cs.push_back(to_point(c));
  for (const auto& c : cs) m.push_back(qmul(tp, c));

  const std::uint64_t cosets = word_count(gs, t) / n;
  std::vector<Point> keys;
  keys.reserve(cosets);

  // canonical key of the left coset C s: lexicographic maximum of the sign-normalized c s
  auto key = [&](const Point& s) {
    double top = 0;
    for (const auto& c : cs) {
      double y0 = std::abs(c[0] * s[0] - c[1] * s[1] - c[2] * s[2] - c[3] * s[3]);
      top = std::max(top, y0);
    }
    Point best{};
    bool have = false;
    for (const auto& c : cs) {
      double y0 = std::abs(c[0] * s[0] - c[1] * s[1] - c[2] * s[2] - c[3] * s[3]);
      if (y0 < top - kTol) continue;
      Point y = qmul(c, s);
      sign_normalize(y);
      if (!have || tol_compare(y, best) > 0) best = y;
      have = true;
    }
    return best;
  };

  // suffixes T c_{t-1} T ... T c_0 with c_{t-1}, ..., c_1 non-identity
  std::function<void(const Point&, int)> rec = [&](const Point& s, int depth) {
    if (depth == t) {
      keys.push_back(key(s));
      return;
    }
    bool last = depth + 1 == t;
    for (std::size_t c = last ? 0 : 1; c < n; ++c) rec(qmul(s, m[c]), depth + 1);
  };
  rec(Point{1, 0, 0, 0}, 0);

  std::sort(keys.begin(), keys.end(), [](const Point& a, const Point& b) { return tol_compare(a, b) < 0; });
  std::uint64_t distinct = keys.empty() ? 0 : 1;
  for (std::size_t i = 1; i < keys.size(); ++i)
    if (tol_compare(keys[i - 1], keys[i]) != 0) ++distinct;
  return distinct * n;
}

Point to_point(const Quaternion& q) { return su2_to_vector(to_su2(q)); }

std::vector<Point> to_points(const std::vector<Quaternion>& qs) {
  std::vector<Point> out(qs.size());
  parallel_for(qs.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out[i] = to_point(qs[i]);
  });
  return out;
}

double point_distance(const Point& p, const Point& q) { return std::sqrt(std::max(0.0, 1.0 - std::abs(dot(p, q)))); }

double ball_volume(double r) {
  if (r <= 0) return 0;
  if (r >= 1) return 1;
  double a = std::acos(1 - r * r);  // angular radius on the 3-sphere
  return 2 * (a - std::sin(a) * std::cos(a)) / M_PI;
}

Point haar_point(Rng& rng) {
  // Box-Muller pairs; a normalized Gaussian 4-vector is uniform on the 3-sphere
  Point v;
  double s = 0;
  do {
    for (int i = 0; i < 4; i += 2) {
      double r = std::sqrt(-2 * std::log(uniform01(rng))), th = 2 * M_PI * uniform01(rng);
      v[i] = r * std::cos(th);
      v[i + 1] = r * std::sin(th);
    }
    s = std::sqrt(dot(v, v));
  } while (s < 1e-12);
  for (auto& x : v) x /= s;
  return v;
}

std::vector<Point> haar_points(std::size_t n, Rng& rng) {
  std::vector<Point> out(n);
  for (auto& p : out) p = haar_point(rng);
  return out;
}

VpTree::VpTree(std::vector<Point> pts) : pts_(std::move(pts)) {
  std::vector<std::size_t> ids(pts_.size());
  std::iota(ids.begin(), ids.end(), 0);
  nodes_.reserve(pts_.size());
  root_ = build(ids, 0, ids.size());
}

int VpTree::build(std::vector<std::size_t>& ids, std::size_t lo, std::size_t hi) {
  if (lo >= hi) return -1;
  // vantage point is the first index of the range; the rest is split at the median distance
  const std::size_t v = ids[lo];
  int me = static_cast<int>(nodes_.size());
  nodes_.push_back({v, 0.0});
  if (hi - lo == 1) return me;
  std::size_t mid = (lo + 1 + hi) / 2;
  auto by_dist = [&](std::size_t a, std::size_t b) {
    return point_distance(pts_[v], pts_[a]) < point_distance(pts_[v], pts_[b]);
  };
  std::nth_element(ids.begin() + static_cast<long>(lo + 1), ids.begin() + static_cast<long>(mid),
                   ids.begin() + static_cast<long>(hi), by_dist);
  nodes_[me].radius = point_distance(pts_[v], pts_[ids[mid]]);
  int in = build(ids, lo + 1, mid);
  int out = build(ids, mid, hi);
  nodes_[me].inside = in;
  nodes_[me].outside = out;
  return me;
}

void VpTree::search(int node, const Point& q, std::size_t skip, double& best, std::size_t& arg) const {
  if (node < 0) return;
  const Node& nd = nodes_[node];
  double d = point_distance(q, pts_[nd.idx]);
  if (nd.idx != skip && d < best) {
    best = d;
    arg = nd.idx;
  }
  if (d < nd.radius) {
    search(nd.inside, q, skip, best, arg);
    if (d + best >= nd.radius) search(nd.outside, q, skip, best, arg);
  } else {
    search(nd.outside, q, skip, best, arg);
    if (d - best <= nd.radius) search(nd.inside, q, skip, best, arg);
  }
}

std::pair<double, std::size_t> VpTree::nearest(const Point& q, std::size_t skip) const {
  double best = std::numeric_limits<double>::infinity();
  std::size_t arg = static_cast<std::size_t>(-1);
  search(root_, q, skip, best, arg);
  return {best, arg};
}

std::vector<double> nearest_distances(const std::vector<Point>& points, const std::vector<Point>& queries) {
  std::vector<double> out(queries.size(), std::numeric_limits<double>::infinity());
  if (points.empty()) return out;
  if (points.size() < 100000) {
    parallel_for(queries.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        double m = 0;
        for (const auto& p : points) m = std::max(m, std::abs(dot(p, queries[i])));
        out[i] = std::sqrt(std::max(0.0, 1.0 - m));
      }
    });
    return out;
  }
  VpTree tree(points);
  parallel_for(queries.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out[i] = tree.nearest(queries[i]).first;
  });
  return out;
}

double min_pairwise_distance(const std::vector<Point>& points) {
  double best = std::numeric_limits<double>::infinity();
  if (points.size() <= 5000) {
    double m = 0;
    for (std::size_t i = 0; i < points.size(); ++i)
      for (std::size_t j = i + 1; j < points.size(); ++j) m = std::max(m, std::abs(dot(points[i], points[j])));
    return points.size() < 2 ? best : std::sqrt(std::max(0.0, 1.0 - m));
  }
  VpTree tree(points);
  std::vector<double> d(points.size());
  parallel_for(points.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) d[i] = tree.nearest(points[i], i).first;
  });
  return *std::min_element(d.begin(), d.end());
}

double identity_distance(const std::vector<Point>& points) {
  const Point id{1, 0, 0, 0};
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : points) {
    double d = point_distance(p, id);
    // words are separated far beyond 1e-9, so this only drops the identity itself
    if (d > 1e-9) best = std::min(best, d);
  }
  return best;
}

double identity_hole_bound(const GateSet& gs, int t) {
  double s1 = embedding(pow(totally_positive_associate(gs.pi), static_cast<unsigned>(t)), 0);
  return 1.0 / std::sqrt(2 * s1) / 2;
}

CoverReport covering_stats(const GateSet& gs, int t, std::size_t samples, std::uint64_t seed) {
  CoverReport r;
  r.gateset = gs.name;
  r.tcount = t;
  r.seed = seed;
  std::vector<Point> pts = to_points(enumerate_words(gs, t));
  r.num_points = pts.size();
  r.sample_count = samples;
  r.min_pairwise_distance = min_pairwise_distance(pts);
  r.identity_distance = identity_distance(pts);
  Rng rng(seed);
  std::vector<Point> qs = haar_points(samples, rng);
  std::vector<double> d = nearest_distances(pts, qs);
  if (!d.empty()) {
    std::sort(d.begin(), d.end());
    for (double q : kReportQuantiles) {
      auto idx = static_cast<std::size_t>(std::floor(q * static_cast<double>(d.size() - 1)));
      r.distance_quantiles.emplace_back(q, d[idx]);
    }
    r.max_sampled_hole = d.back();
  }
  return r;
}

std::string cover_report_to_json(const CoverReport& r) {
  nlohmann::json j;
  j["schema"] = 1;
  j["gateset"] = r.gateset;
  j["tcount"] = r.tcount;
  j["num_points"] = r.num_points;
  j["sample_count"] = r.sample_count;
  j["seed"] = r.seed;
  j["distance_quantiles"] = nlohmann::json::array();
  for (const auto& [q, d] : r.distance_quantiles) j["distance_quantiles"].push_back({q, d});
  j["max_sampled_hole"] = r.max_sampled_hole;
  j["min_pairwise_distance"] = r.min_pairwise_distance;
  j["identity_distance"] = r.identity_distance;
  return j.dump();
}

double hole_radius(const std::vector<Point>& points, const std::vector<Point>& centers) {
  std::vector<double> d = nearest_distances(points, centers);
  return d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
}

std::vector<Point> closest_pair_midpoints(const std::vector<Point>& points, std::size_t count) {
  if (points.size() < 2) return {};
  VpTree tree(points);
  std::vector<std::pair<double, std::pair<std::size_t, std::size_t>>> pairs(points.size());
  parallel_for(points.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      auto [d, j] = tree.nearest(points[i], i);
      pairs[i] = {d, {std::min(i, j), std::max(i, j)}};
    }
  });
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  std::vector<Point> out;
  for (std::size_t k = 0; k < pairs.size() && out.size() < count; ++k) {
    const Point& p = points[pairs[k].second.first];
    const Point& q = points[pairs[k].second.second];
    double sgn = dot(p, q) < 0 ? -1.0 : 1.0;
    Point m;
    for (int i = 0; i < 4; ++i) m[i] = p[i] + sgn * q[i];
    double s = std::sqrt(dot(m, m));
    for (auto& x : m) x /= s;
    out.push_back(m);
  }
  return out;
}

double hole_probe(const GateSet& gs, int t, std::size_t direction_samples, Rng& rng) {
  std::uint64_t total = 0;
  for (int s = 0; s <= t; ++s) total += word_count(gs, s);
  if (total > kEnumerationGuard) throw InvalidArgument("enumeration past the 10^6 guard");
  std::vector<Point> pts;
  for (int s = 0; s <= t; ++s) {
    auto v = to_points(enumerate_words(gs, s));
    pts.insert(pts.end(), v.begin(), v.end());
  }
  std::vector<Point> centers{{1, 0, 0, 0}};
  auto mids = closest_pair_midpoints(pts, 200);
  centers.insert(centers.end(), mids.begin(), mids.end());
  auto rnd = haar_points(direction_samples, rng);
  centers.insert(centers.end(), rnd.begin(), rnd.end());
  return hole_radius(pts, centers);
}

bool inverse_closed(const std::vector<Quaternion>& qs, const GateSet& gs) {
  std::unordered_set<Quaternion, QuaternionHash> set(qs.begin(), qs.end());
  for (const auto& q : qs)
    if (!set.count(gs.canonical(conj(q)))) return false;
  return true;
}

MomentTest haar_moment_test(const std::vector<Point>& samples) {
  MomentTest m;
  if (samples.empty()) return m;
  const double n = static_cast<double>(samples.size());
  for (const auto& p : samples) {
    m.mean_trace += 2 * p[0];
    m.mean_trace_sq += 4 * p[0] * p[0];
  }
  m.mean_trace /= n;
  m.mean_trace_sq /= n;
  m.sigma = 1 / std::sqrt(n);
  m.pass = std::abs(m.mean_trace) <= 3 * m.sigma && std::abs(m.mean_trace_sq - 1) <= 3 * m.sigma;
  return m;
}

}  // namespace sgg
