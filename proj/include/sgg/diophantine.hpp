#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "sgg/rings.hpp"

namespace sgg {

// Region (xi1*x1 + xi2*x2)/sqrt(sigma_1 n) > 1 - eps/2 with x1^2 + x2^2 <= n at every embedding.
struct CapConstraint {
  double xi1 = 1.0;
  double xi2 = 0.0;
  double epsilon = 0.1;
  QuadInt n;
};

struct FourSquareSolution {
  std::array<QuadInt, 4> x;
};

enum class SquareMode { Factoring, PrimeOnly };

std::optional<std::pair<QuadInt, QuadInt>> two_squares(const QuadInt& n);
std::pair<Int, Int> cornacchia(const Int& p);
FourSquareSolution four_squares(const Int& n, Rng& rng);

// Pulls region points in order of decreasing xi1*x1 + xi2*x2. Complete unless a slab of
// relative width 1e-9 holds more than 2e5 lattice points; such slabs are sampled around
// the cap axis and the sigma_2 origin.
class CapEnumerator {
 public:
  explicit CapEnumerator(CapConstraint c);
  std::optional<std::pair<QuadInt, QuadInt>> next();

 private:
  struct Point {
    long double u;
    std::array<long, 4> z;
  };
  bool fill_slab();
  std::pair<QuadInt, QuadInt> to_pair(const std::array<long, 4>& z) const;
  bool in_region(const std::pair<QuadInt, QuadInt>& p) const;

  CapConstraint c_;
  int dim_;
  long double w1_ = 0, w2_ = 0;  // embeddings of the ring generator
  long double r1_ = 0, r2_ = 0;  // sqrt of sigma_1(n), sigma_2(n)
  long double lo_ = 0;           // cap threshold on u
  long double hi_ = 0;           // upper edge of the next slab
  long double width_ = 0;
  long double shrink_ = 1;       // > 1 only when a thinnest slab still overflows
  std::vector<Point> pending_;
  std::size_t pos_ = 0;
  bool done_ = false;
};

std::vector<std::pair<QuadInt, QuadInt>> cap_enumerate(const CapConstraint& c, std::size_t budget);

std::optional<FourSquareSolution> approx_four_squares(const CapConstraint& c, SquareMode mode,
                                                      std::size_t budget, Rng& rng);

// Integer points z with |B z - t|^2 <= r2; B is column-major dim x dim. Stops after limit points
// and returns false in that case.
bool enumerate_ellipsoid(int dim, const std::array<long double, 16>& b, const std::array<long double, 4>& t,
                         long double r2, std::size_t limit,
                         const std::function<void(const std::array<long, 4>&)>& emit);

}  // namespace sgg
