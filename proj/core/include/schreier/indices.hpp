#pragma once
// Indices for indicator sequences over family compacta, the finite-order
// lower-l1 tree, and the alternation index of step functions on ordinal
// intervals.
//
//   oscillation    the n-th function is F |-> 1 if n is in F. A set survives
//                  lambda rounds of oscillation exactly when it survives
//                  lambda derivatives of the family, so the symbolic engine
//                  delegates to the derivative machinery. The direct engine
//                  instead applies the level-1 definition ("F together with
//                  any large n stays inside") level by level, probing one
//                  large index per level; indicator values make the answer
//                  independent of epsilon on (0,1), and for spreading
//                  families the probed predicate is monotone in the probe,
//                  which the symbolic-vs-direct tests pin down.
//   l1 tree        a finite-order tree of difference functions x_n - x_m.
//                  Each branch carries the member sets realizing every sign
//                  pattern, and is certified by boolean_l1_certify; the
//                  indicator jump is a full unit, so certificates run at gap
//                  1/2 whatever epsilon was requested (never worse than the
//                  promised epsilon/2).
//   lavrentiev     shortest chain K = F_0 >= F_1 >= ... >= F_L = empty of
//                  closed sets whose successive differences avoid C or D.
//                  Keeping exactly F cap C (or D) and closing is the
//                  smallest legal step, and smaller sets only shorten what
//                  remains, so searching over the two canonical successors
//                  finds the true minimum.
//
// Interval sets are finite unions of [lo, hi] and [lo, hi) pieces; a
// half-open right end survives normalization only when hi is a limit, and
// closure is exactly "promote half-open ends to closed".

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "schreier/errors.hpp"
#include "schreier/families.hpp"
#include "schreier/norms.hpp"
#include "schreier/ordinal.hpp"
#include "schreier/trees.hpp"

namespace schreier {

// The sequence of coordinate indicators on a family compactum. The family
// must be adequate, so the sequence is pointwise null on members.
class IndicatorSeq {
 public:
  explicit IndicatorSeq(FamilySpec family);
  const FamilySpec& family() const { return family_; }

 private:
  FamilySpec family_;
};

enum class OscMode { symbolic, direct };

// Does F survive lambda rounds of oscillation? Requires F a member and
// 0 < epsilon < 1. The direct mode needs a finite lambda.
bool oscillation_membership(const IndicatorSeq& seq, const FinSet& f,
                            const Ordinal& lambda, const Rat& epsilon,
                            OscMode mode = OscMode::symbolic);

// Largest lambda with a nonempty oscillation set: the empty set is the last
// survivor, so this is the rank of the family at the empty set.
Ordinal oscillation_index(const IndicatorSeq& seq);

// Difference label x_hi - x_lo.
struct DiffPair {
  int hi = 0;
  int lo = 0;
  auto operator<=>(const DiffPair&) const = default;
};

struct L1Branch {
  std::vector<DiffPair> pairs;  // root to leaf
  FinSet full_member;           // the hi indices down the branch
  std::vector<FinSet> points;   // all subsets of full_member
  // Per level: the members realizing diff = 1 and diff <= 0.
  std::vector<std::vector<FinSet>> a_side;
  std::vector<std::vector<FinSet>> b_side;
  L1Certificate certificate;
};

struct L1Tree {
  OrderTree<DiffPair> tree;
  std::vector<L1Branch> branches;
  Rat gap;            // the certified separation, 1/2 for indicators
  Ordinal index_half; // half the family's rank, the order the full
                      // transfinite construction would promise
};

// Build a finite-order difference tree with every branch certified.
// Requires 0 < epsilon < 1, order >= 1, and the empty set to survive
// `order` derivatives; throws PreconditionError naming the failing level
// when a witness extension cannot be found.
L1Tree build_l1_tree(const IndicatorSeq& seq, int order, const Rat& epsilon);

// One ordinal interval: [lo, hi] when closed_right, else [lo, hi) with hi a
// limit (half-open ends with successor hi normalize to closed form).
struct OrdinalInterval {
  Ordinal lo;
  Ordinal hi;
  bool closed_right = true;

  bool operator==(const OrdinalInterval&) const = default;
};

// Finite union of intervals, kept sorted, disjoint, and non-adjacent.
class IntervalSet {
 public:
  IntervalSet() = default;  // empty
  static IntervalSet closed(const Ordinal& lo, const Ordinal& hi);
  static IntervalSet half_open(const Ordinal& lo, const Ordinal& hi);

  bool empty() const { return parts_.empty(); }
  const std::vector<OrdinalInterval>& parts() const { return parts_; }
  bool contains(const Ordinal& x) const;
  bool operator==(const IntervalSet&) const = default;

  IntervalSet union_with(const IntervalSet& other) const;
  IntervalSet intersect(const IntervalSet& other) const;
  IntervalSet minus(const IntervalSet& other) const;
  IntervalSet closure() const;
  bool subset_of(const IntervalSet& other) const;

 private:
  static IntervalSet from_parts(std::vector<OrdinalInterval> parts);

  std::vector<OrdinalInterval> parts_;
};

std::string render(const IntervalSet& s);  // "[0,w] [w*2,w^(2))", "{}" empty

// Piecewise constant function on [0, top]: consecutive pieces tile the
// space, the last piece is closed and ends at top.
struct StepPiece {
  OrdinalInterval where;
  Rat value;
};

class StepFn {
 public:
  explicit StepFn(std::vector<StepPiece> pieces);  // validates the tiling
  const Ordinal& top() const { return top_; }
  const std::vector<StepPiece>& pieces() const { return pieces_; }
  Rat value_at(const Ordinal& x) const;
  IntervalSet level_le(const Rat& c) const;  // {x : f(x) <= c}
  IntervalSet level_ge(const Rat& d) const;  // {x : f(x) >= d}

 private:
  std::vector<StepPiece> pieces_;
  Ordinal top_;
};

// One piece per line: "[a,b] -> p/q" or "[a,b) -> p/q", ordinal-grammar
// endpoints, blank lines ignored.
StepFn parse_stepfn(std::string_view text);
std::string render(const StepFn& f);

struct LavrentievResult {
  Ordinal index;                   // the minimal chain length
  std::vector<IntervalSet> chain;  // F_0 = K down to the empty set
};

// Minimal alternation chain for the level sets C = {f <= c}, D = {f >= d}.
// Requires c < d. The returned chain is re-validated against the definition
// before it is returned.
LavrentievResult lavrentiev_index(const StepFn& f, const Rat& c, const Rat& d);

// Does the chain witness the definition? Decreasing closed sets from the
// whole space to empty, every difference missing C or missing D.
bool lavrentiev_chain_valid(const StepFn& f, const Rat& c, const Rat& d,
                            const std::vector<IntervalSet>& chain);

struct ConsistencyEntry {
  std::string claim;     // stable claim id
  std::string instance;  // what was plugged in
  bool pass = false;
  std::string detail;
};

struct ConsistencyReport {
  std::vector<ConsistencyEntry> entries;
  bool all_pass = true;
};

// Cross-checks between the indices at finite stages: survival of the empty
// set at level j must show up as a full-size spreading estimate near j, and
// a truncated family (where tails vanish identically) must have an empty
// level-1 oscillation set.
ConsistencyReport index_consistency_report(const IndicatorSeq& seq,
                                           int finite_level, int window);

}  // namespace schreier
