#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sgg/gatesets.hpp"

namespace sgg {

using Point = std::array<double, 4>;  // unit quaternion, a PU(2) class up to sign

inline constexpr std::uint64_t kEnumerationGuard = 1000000;

// |C|^2 (|C|-1)^(t-1) for Super sets, |S| (|S|-1)^(t-1) for Golden sets; |C| (resp. 1) at t = 0.
std::uint64_t word_count(const GateSet& gs, int t);

// Distinct canonical elements of T-count exactly t, sorted. Throws InvalidArgument past the guard.
std::vector<Quaternion> enumerate_words(const GateSet& gs, int t);

// Number of distinct PU(2) classes among all Super words of T-count t, computed in floating point
// on left C-cosets. Exact as long as separation_bound(gs, t) is far above the rounding error.
std::uint64_t count_distinct_words(const GateSet& gs, int t);
// Lower bound on the gap between distinct coordinates of normalized words of T-count t.
double separation_bound(const GateSet& gs, int t);

Point to_point(const Quaternion& q);
std::vector<Point> to_points(const std::vector<Quaternion>& qs);
// PU(2) distance between unit quaternions.
double point_distance(const Point& p, const Point& q);
// Haar measure of a PU(2) ball of the given radius.
double ball_volume(double r);

Point haar_point(Rng& rng);
std::vector<Point> haar_points(std::size_t n, Rng& rng);

class VpTree {
 public:
  explicit VpTree(std::vector<Point> pts);
  // Distance to and index of the nearest point; `skip` excludes one index (self queries).
  std::pair<double, std::size_t> nearest(const Point& q, std::size_t skip = static_cast<std::size_t>(-1)) const;
  std::size_t size() const { return pts_.size(); }

 private:
  struct Node {
    std::size_t idx;
    double radius;
    int inside = -1;
    int outside = -1;
  };
  int build(std::vector<std::size_t>& ids, std::size_t lo, std::size_t hi);
  void search(int node, const Point& q, std::size_t skip, double& best, std::size_t& arg) const;
  std::vector<Point> pts_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

// Nearest distances from every query; brute force below 1e5 points, a vantage-point tree above.
std::vector<double> nearest_distances(const std::vector<Point>& points, const std::vector<Point>& queries);
double min_pairwise_distance(const std::vector<Point>& points);
// Smallest distance from the identity to a non-identity point.
double identity_distance(const std::vector<Point>& points);
// (2 sigma_1(pi+^t))^(-1/2) / 2: a lower bound for identity_distance over T-count <= t.
double identity_hole_bound(const GateSet& gs, int t);

struct CoverReport {
  std::string gateset;
  int tcount = 0;
  std::uint64_t num_points = 0;
  std::uint64_t sample_count = 0;
  std::uint64_t seed = 0;
  std::vector<std::pair<double, double>> distance_quantiles;
  double max_sampled_hole = 0;
  double min_pairwise_distance = 0;
  double identity_distance = 0;
};

inline const std::vector<double> kReportQuantiles{0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 1.0};

// Points are the words of T-count exactly t; samples are drawn from Rng(seed).
CoverReport covering_stats(const GateSet& gs, int t, std::size_t samples, std::uint64_t seed);
std::string cover_report_to_json(const CoverReport& r);

// Largest empty ball found at probe centers: the identity, midpoints of the 200 closest pairs,
// and `direction_samples` Haar-random centers. Points are all words of T-count <= t.
double hole_probe(const GateSet& gs, int t, std::size_t direction_samples, Rng& rng);
double hole_radius(const std::vector<Point>& points, const std::vector<Point>& centers);
// Midpoints of the `count` closest pairs (each point paired with its nearest neighbor).
std::vector<Point> closest_pair_midpoints(const std::vector<Point>& points, std::size_t count);

// Every canonical element's inverse is in the set.
bool inverse_closed(const std::vector<Quaternion>& qs, const GateSet& gs);

struct MomentTest {
  double mean_trace = 0;         // E[tr U], Haar value 0
  double mean_trace_sq = 0;      // E[|tr U|^2], Haar value 1
  double sigma = 0;              // standard error of both, 1/sqrt(n)
  bool pass = false;             // both within 3 sigma
};
MomentTest haar_moment_test(const std::vector<Point>& samples);

}  // namespace sgg
