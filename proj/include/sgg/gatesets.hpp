#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sgg/quaternion.hpp"

namespace sgg {

enum class GateSetKind { Super, Golden };

struct GateSet {
  std::string name;
  GateSetKind kind = GateSetKind::Super;
  RingId ring = RingId::Integers;
  OrderId order = OrderId::Lipschitz;
  QuadInt pi;
  std::vector<QuadInt> extra_primes;  // norms of C may carry these (hybrid6 only)
  long k = 0;                         // |N(pi)|
  std::vector<Quaternion> C;          // canonical, C[0] is the identity
  Quaternion T;
  std::vector<Quaternion> gens;       // Golden generators, canonical
  std::vector<int> inverse;           // inverse[g] is the generator inverse to g modulo scalars
  std::vector<UnitaryMatrix> matrices;  // C then T, or the generators
  std::string description;

  bool is_super() const { return kind == GateSetKind::Super; }
  std::size_t letters() const { return is_super() ? C.size() : gens.size(); }
  Quaternion canonical(const Quaternion& q) const;
  const Order& order_ref() const { return get_order(order); }
};

// Catalog sets in a fixed order; Super sets first, then Golden sets.
const std::vector<GateSet>& catalog();
// The two non-transitive examples; validation reports a transitivity failure for both.
const std::vector<GateSet>& nonexamples();
// Searches the catalog and the nonexamples.
const GateSet& find_gateset(std::string_view name);

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ValidationReport {
  std::string gateset;
  std::vector<Check> checks;

  bool all_pass() const;
  // Throws if no check has this name.
  bool passed(std::string_view name) const;
};

ValidationReport validate(const GateSet& gs);

GateSet derive_golden_set(const GateSet& gs);

// pi times a unit chosen so that every embedding is positive.
QuadInt totally_positive_associate(const QuadInt& pi);

// q is divisible by pi in the order (q must lie in the order).
bool pi_divides(const Quaternion& q, const GateSet& gs);
// q * conj(r) divisible by pi: q and r give the same neighbor of the origin.
bool same_neighbor(const Quaternion& q, const Quaternion& r, const GateSet& gs);

// Closure of gens under multiplication modulo scalars.
std::vector<Quaternion> generate_group(const std::vector<Quaternion>& gens, const GateSet& gs);

// Lexicographic order on numerators at the order's largest denominator.
bool quaternion_less(const Quaternion& p, const Quaternion& q);

struct Word {
  static constexpr int kT = -1;
  std::string gateset;
  // Super: c_t T c_{t-1} ... T c_0, left to right, kT for T. Golden: generator indices.
  std::vector<int> letters;
  int tcount = 0;
};

bool operator==(const Word& a, const Word& b);

Word make_super_word(const GateSet& gs, const std::vector<int>& cs);  // cs = {c_t, ..., c_0}
Quaternion evaluate(const Word& w, const GateSet& gs);
// Throws InvalidArgument if the pattern or the interior letters are malformed.
void check_word(const Word& w, const GateSet& gs);

std::string word_to_json(const Word& w);
Word word_from_json(std::string_view text);
std::string word_to_string(const Word& w);

// Catalog entry with its elements and row-major matrices as [re, im] pairs.
std::string gateset_to_json(const GateSet& gs);

}  // namespace sgg
