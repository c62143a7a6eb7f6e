#pragma once
// Exact norm engines over finitely supported rational vectors.
//
//   family_norm      the evaluation norm of an indicator family: each member
//                    F is a point, the vector evaluates to the sum of its
//                    coefficients over F, and the norm is the largest
//                    absolute evaluation. Hereditary families let the search
//                    stay inside the support; explicit families are scanned
//                    member by member, so a family that is not closed under
//                    subsets genuinely fails suppression here.
//   tsirelson_norm   the implicit norm ||x|| = max(base(x), 1/2 max sum of
//                    block norms over admissible partitions). Admissible
//                    partitions are cut sets {p_1 < ... < p_k} that are
//                    level-1 family members (k <= p_1), blocks run
//                    [p_i, p_{i+1}); the base is the sup norm at level 0 and
//                    the level-alpha family norm above. Cuts live on support
//                    points: moving each cut up to the first support point
//                    of its block keeps the grouping and stays admissible,
//                    so nothing is lost. The one-block partition is pruned
//                    (it contributes half the value being defined).
//
// Everything is exact rational arithmetic; fixed points are detected by
// equality, never by tolerance.

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "schreier/errors.hpp"
#include "schreier/families.hpp"
#include "schreier/ordinal.hpp"

namespace schreier {

using Rat = boost::multiprecision::cpp_rational;

// Finitely supported vector: index >= 1 to nonzero rational coefficient.
class CoeffVec {
 public:
  CoeffVec() = default;
  explicit CoeffVec(std::map<int, Rat> entries);  // zeros dropped
  static CoeffVec unit(int n);

  const std::map<int, Rat>& entries() const { return entries_; }
  Rat at(int n) const;  // 0 off the support
  FinSet support() const;
  bool zero() const { return entries_.empty(); }

  CoeffVec restricted(const FinSet& keep) const;
  CoeffVec plus(const CoeffVec& other) const;
  CoeffVec scaled(const Rat& c) const;
  Rat l1() const;
  Rat sup() const;

  bool operator==(const CoeffVec&) const = default;

 private:
  std::map<int, Rat> entries_;
};

std::string render(const Rat& q);
std::string render(const CoeffVec& x);            // "3:1,4:-2,5:1/2"
CoeffVec parse_coeffvec(std::string_view text);   // index:coeff pairs

// Evaluation record: a leaf holds the family member (or sup-norm index)
// attaining a base norm; an inner node holds the admissible cut set and one
// sub-record per block. Re-evaluating the record against the vector must
// reproduce the claimed value exactly.
struct PartitionNode {
  Rat value;
  bool leaf = true;
  FinSet base_witness;               // leaf: evaluation point
  std::vector<int> cuts;             // inner: p_1 < ... < p_k, k >= 2
  std::vector<PartitionNode> blocks; // inner: one per cut
};

struct NormResult {
  Rat value;
  PartitionNode witness;
  int iterations = 0;
};

// Recompute the value a witness claims: leaves sum the vector over the
// stored evaluation point, inner nodes check cut admissibility and block
// containment, then take half the block total. Throws PreconditionError on
// a malformed record.
Rat witness_value(const PartitionNode& w, const CoeffVec& x);

// max |sum over F intersect supp(x)| over members F. Hereditary search is
// capped; explicit families are finite. Throws ResourceCapError past the
// cap, PreconditionError on an empty explicit family.
NormResult family_norm(const FamilySpec& spec, const CoeffVec& x,
                       std::size_t member_cap = std::size_t{1} << 22);

// family_norm(spec, x restricted to keep) <= family_norm(spec, x)?
bool suppression_check(const FamilySpec& spec, const CoeffVec& x,
                       const FinSet& keep);

enum class NormEngine { naive, memoized };

// Where the final block of a partition may end: at the support end, or at
// any earlier cut (the tail is dropped). Both reach the same maximum on
// every tested input; the flag exists so that claim is checked, not assumed.
enum class EndpointRule { support_end, free_end };

// The implicit-equation norm. The naive engine solves the equation by
// structural recursion and recomputes every sub-block (iterations = witness
// nesting depth); the memoized engine runs the level iteration on the full
// interval table until a sweep changes nothing (iterations = number of that
// quiescent sweep). Values agree exactly. Throws ResourceCapError when the
// support would create more intervals than interval_cap.
NormResult tsirelson_norm(const Ordinal& alpha, const CoeffVec& x,
                          NormEngine engine,
                          EndpointRule rule = EndpointRule::support_end,
                          std::size_t interval_cap = 4096);

struct BlockCheckReport {
  Rat value;        // norm of the combination of normalized blocks
  Rat lower;        // half the l1 mass of the coefficients
  Rat upper;        // the l1 mass
  bool within = false;
};

// Normalizes each block in the level-alpha norm, forms sum c_i u_i, and
// checks the lower-l1 window [sum|c|/2, sum|c|]. Blocks must be nonzero,
// disjointly supported, and supported past their count.
BlockCheckReport block_l1_lower_check(const Ordinal& alpha,
                                      const std::vector<CoeffVec>& blocks,
                                      const std::vector<Rat>& coeffs);

// Finite-stage spreading estimate: k^-1 times the least family norm of an
// indicator sum over k-subsets of window cut at m. Throws PreconditionError
// when fewer than k candidates remain.
Rat l1_sp_estimate(const FamilySpec& spec, const std::vector<int>& window,
                   int k, int m);

struct L1Certificate {
  bool hypothesis_ok = false;
  std::vector<int> dead_pattern;  // failing sign choice when hypothesis fails
  Rat constant;                   // 2/delta
  bool conclusion_ok = false;
  int sign_patterns_checked = 0;
  int random_trials_checked = 0;
};

// Functions are rows of values over a common finite point set. Forms
// A_n = {f_n >= r+delta}, B_n = {f_n <= r}, requires the full mixed
// intersection condition via boolean_tree, then verifies the lower-l1
// conclusion |sum a_n f_n|_inf >= (delta/2) sum|a_n| on all sign vectors
// and on seeded random rational vectors.
L1Certificate boolean_l1_certify(const std::vector<std::vector<Rat>>& functions,
                                 const Rat& r, const Rat& delta);

// max{delta*dist/2, delta - y_norm}; the separation constant surviving a
// perturbation by y. Requires delta > 0, 0 <= y_norm <= 1, dist >= 0.
Rat perturbation_bound(const Rat& delta, const Rat& y_norm, const Rat& dist);

}  // namespace schreier
