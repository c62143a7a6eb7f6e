#pragma once
// Families of finite subsets of N = {1, 2, ...} under the product topology
// of {0,1}^N, together with their transfinite derived-set structure.
//
// Three variants:
//   Singletons      {} and all {n}
//   SchreierSpec    the hierarchy F_alpha, alpha >= 1:
//                     F_1 = { F : min F >= card F } u {{}}
//                     F_alpha = unions of at most n consecutive blocks
//                               F_1 < ... < F_n with F_i in F_{beta_i} and
//                               n <= min F; beta_i = alpha-1 at successors,
//                               beta_i = alpha[i] at limits. Empty blocks are
//                               permitted at any position.
//   ExplicitFamily  a finite list of members, no structure assumed.
//
// The derivative engine decides F in F_alpha^(rho) symbolically: within a
// block decomposition the charge rho falls on the last position, and
// crossing rho = w^(beta_n) removes that position. An iterated one-step
// oracle (tail extension probes) is provided for cross-checking.

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "schreier/ordinal.hpp"

namespace schreier {

// Strictly increasing list of positive integers.
class FinSet {
 public:
  FinSet() = default;
  explicit FinSet(std::vector<int> elems);  // validates, throws PreconditionError

  bool empty() const { return elems_.empty(); }
  int size() const { return static_cast<int>(elems_.size()); }
  int min() const;  // requires nonempty
  int max() const;  // requires nonempty
  bool contains(int n) const;
  FinSet with(int n) const;                     // insert n
  FinSet slice(int from, int to) const;         // elements with index in [from, to)
  const std::vector<int>& elems() const { return elems_; }

  auto operator<=>(const FinSet&) const = default;

 private:
  std::vector<int> elems_;
};

std::string render(const FinSet& f);            // "[2,3,6]"
FinSet parse_finset(std::string_view text);

// Number-of-blocks convention in the F_alpha recursion.
enum class BlockCountRule {
  at_most_min,           // n <= min F, the default
  count_in_first_block,  // n = min F and the first block is nonempty
};

struct Singletons {
  friend bool operator==(const Singletons&, const Singletons&) { return true; }
};

struct SchreierSpec {
  Ordinal alpha;  // >= 1
  BlockCountRule rule = BlockCountRule::at_most_min;
  friend bool operator==(const SchreierSpec&, const SchreierSpec&) = default;
};

class ExplicitFamily {
 public:
  ExplicitFamily() = default;
  explicit ExplicitFamily(std::vector<FinSet> members);

  bool contains(const FinSet& f) const { return members_.count(f) != 0; }
  const std::set<FinSet>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  int ground_max() const;  // largest element appearing in any member, 0 if none

  // One member per line in ascending lexicographic order.
  std::string dump() const;

 private:
  std::set<FinSet> members_;
};

using FamilySpec = std::variant<Singletons, SchreierSpec, ExplicitFamily>;

FamilySpec schreier_family(Ordinal alpha,
                           BlockCountRule rule = BlockCountRule::at_most_min);

std::string render(const FamilySpec& spec);

// "singletons", "schreier(w^(2))" with optional "[count-in-first]" suffix, or
// explicit members in braces: "{[];[1];[1,2]}".
FamilySpec parse_familyspec(std::string_view text);

bool member(const FamilySpec& spec, const FinSet& f);

// Exhaustive-partition route, no memoization or pruning. Small sets only.
bool member_bruteforce(const FamilySpec& spec, const FinSet& f);

struct AdequacyReport {
  bool hereditary = false;
  bool contains_empty = false;
  // Whether every element of the ground set appears as a singleton member.
  // Reported, not part of is_adequate.
  bool singletons_present = false;
};

// Hereditary under subsets and contains the empty set. True outright for
// Singletons and SchreierSpec.
bool is_adequate(const FamilySpec& spec);
AdequacyReport adequacy_report(const ExplicitFamily& fam);

// Closure under order-preserving maps that move elements to the right,
// checked exhaustively on members within [1..truncation].
bool is_spreading(const FamilySpec& spec, int truncation);

// All members contained in [1..n]. Throws ResourceCapError past max_members.
ExplicitFamily restrict_family(const FamilySpec& spec, int n,
                               std::size_t max_members = 1u << 22);

// F in spec^(rho), the rho-th Cantor-Bendixson derivative taken inside the
// compact space of the family. Derivatives use the at_most_min convention.
bool in_derivative(const FamilySpec& spec, const FinSet& f, const Ordinal& rho);

// Iterated one-step derivative membership decided through tail extension:
// F is in the (j+1)-st derivative iff F u {n} is in the j-th for every large
// n, and for a spreading family a single probe past max(window, max F)
// settles the quantifier. Meaningful for spreading families only.
bool brute_derivative_member(const FamilySpec& spec, const FinSet& f, int j,
                             int window = 20);

// Largest rho with F in spec^(rho). Throws NotAMemberError if F is not a
// member. Computed by structural recursion on the block decomposition, not
// by probing in_derivative.
Ordinal cb_rank(const FamilySpec& spec, const FinSet& f);

}  // namespace schreier
