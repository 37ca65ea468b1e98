#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>

#include "sgg/gatesets.hpp"

namespace sgg {

struct SynthesisOptions {
  int max_tcount = -1;  // -1: ceil(6 log_k(1/eps^2)) + 24
  std::size_t budget = 10000;  // cap candidates per level
};

struct SynthesisResult {
  bool success = false;
  Word word;
  Quaternion element;
  double achieved_distance = std::numeric_limits<double>::infinity();
  int searched_from = 0;
  int searched_to = -1;
  std::size_t candidates = 0;
};

int t_count(const Quaternion& q, const GateSet& gs);
// Throws NotAMember when q is outside the group generated by the gate set.
Word exact_synthesize(const Quaternion& q, const GateSet& gs);

int default_max_tcount(double eps, const GateSet& gs);

// diag(e^{-i theta/2}, e^{i theta/2}) as a unit quaternion: (cos(theta/2), -sin(theta/2), 0, 0).
UnitaryMatrix rz(double theta);

// Best-first search for a word within eps of the unit quaternion xi, which must vanish
// outside the coordinates a < b.
SynthesisResult approx_planar(const std::array<double, 4>& xi, int a, int b, double eps, const GateSet& gs,
                              const SynthesisOptions& opts = {});
SynthesisResult approx_diagonal(double theta, double eps, const GateSet& gs, const SynthesisOptions& opts = {});
// Three planar factors Z Y Z, each to eps/3 (fewer when the middle angle degenerates).
SynthesisResult approx_general(const UnitaryMatrix& target, double eps, const GateSet& gs,
                               const SynthesisOptions& opts = {});

// Euler angles with q = e^{-a i/2} e^{-b j/2} e^{-c i/2} up to sign, b in [0, pi].
std::array<double, 3> zyz_angles(const std::array<double, 4>& q);

// Concatenation of words as group elements, re-reduced through exact synthesis.
Word concatenate(const std::vector<Word>& parts, const GateSet& gs);

}  // namespace sgg
