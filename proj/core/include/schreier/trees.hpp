#pragma once
// Dyadic trees over {-1,+1}, given symbolically and evaluated lazily by
// membership queries. The calculus:
//
//   FromFamily(F)   node feasibility mirrors the family: (e_1,...,e_n) is a
//                   member iff its +1 positions form a member of F.
//   T (+) S         {x+y : x in T, stem(|x|)+y in S} u T, stems all -1.
//   (+)^n T_i       [(+)^{n-1} T_i] (+) T_n; the n = 0 tree is the set of
//                   all-minus stems including the root. (The source text
//                   prints the n = 0 case as starting at stem length 1, but
//                   its later identities, and the identification of the
//                   level-1 tree with FromFamily of the level-1 family,
//                   force the root in.)
//   L(T, n)         stems of length < n plus the nodes of T extending
//                   stem(n-1)+(+1).
//   Sum T_i         union of L(T_i, i).
//   SchreierTree    S_0 = nodes with at most one +1; S_{a+1} = Sum_i (+)^i
//                   S_a; at limits S_a = Sum_i [(+)_{j=1..i} S_{a_j}].
//
// The delta derivation deletes nodes with only finitely many closure points
// above them; delta orders are computed through the derived-set rank of the
// underlying family, never by materializing an infinite tree.

#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "schreier/errors.hpp"
#include "schreier/families.hpp"
#include "schreier/ordinal.hpp"

namespace schreier {

// A finite tuple over {-1,+1}; the empty tuple is the root.
class Node {
 public:
  Node() = default;
  static Node from_signs(const std::vector<int>& signs);  // entries +-1
  static Node stem(int n);                                // n entries of -1
  static Node from_plus_set(const FinSet& plus, int length);

  int length() const { return static_cast<int>(signs_.size()); }
  int sign(int i) const;  // 0-based
  bool all_minus() const;
  int count_plus() const;
  int first_plus() const;  // 1-based position, 0 when all minus
  FinSet plus_positions() const;
  Node prefix(int len) const;
  Node slice(int from, int to) const;
  Node extended(int sign) const;
  Node concat(const Node& tail) const;

  auto operator<=>(const Node&) const = default;

 private:
  std::vector<std::int8_t> signs_;
};

std::string render(const Node& n);       // "--+", "" for the root
Node parse_node(std::string_view text);  // string over '+'/'-'

class TreeSpec {
 public:
  static TreeSpec schreier(Ordinal alpha);  // alpha >= 0
  static TreeSpec from_family(FamilySpec family);
  static TreeSpec explicit_tree(std::vector<Node> nodes);  // prefix-closed
  static TreeSpec lsub(TreeSpec inner, int n);             // L(inner, n), n >= 1
  static TreeSpec boxplus(TreeSpec left, TreeSpec right);
  static TreeSpec tree_sum(std::function<TreeSpec(int)> generator);  // i >= 1

  struct Impl;
  const Impl& impl() const { return *impl_; }

 private:
  explicit TreeSpec(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

bool member(const TreeSpec& t, const Node& node);

// All member nodes of length <= depth, shortest first, lexicographic within
// a length (-1 before +1).
std::vector<Node> members_to_depth(const TreeSpec& t, int depth);

bool equivalent_on_depth(const TreeSpec& a, const TreeSpec& b, int depth);

// Every member node of length <= depth keeps membership under flipping any
// subset of its +1 entries to -1.
bool is_weakly_independent(const TreeSpec& t, int depth);

// Does stem + (all-minus run of length j) + (+1) stay in the tree for all
// large j, or leave it for all large j? Symbolic trees over spreading
// families are monotone in j, so the single probe decides; other variants
// are scanned on a short window after `probe` and report `undecided` when
// the window shows both outcomes.
enum class FBOutcome { all_extend, none_extend, undecided };
FBOutcome has_property_FB(const TreeSpec& t, const Node& stem, int probe);

// Least rho with the rho-th delta set empty. Supported where a principled
// value exists: SchreierTree(0) -> 2, SchreierTree(alpha) and
// LSub(SchreierTree(alpha), j) -> w^alpha + 1, FromFamily via the family
// rank of the empty set shifted by one, Explicit -> 1.
Ordinal delta_order(const TreeSpec& t);

std::string render(const TreeSpec& t);

// "schreier(2)", "family(SPEC)", "L(TREE,n)", "boxplus(TREE,TREE)"; the
// explicit and generated forms have no text representation.
TreeSpec parse_treespec(std::string_view text);

// Finite prefix-closed set of nonempty tuples over an arbitrary label type;
// the root is implicit and not counted by the order.
template <typename Label>
class OrderTree {
 public:
  using Tuple = std::vector<Label>;

  OrderTree() = default;
  explicit OrderTree(std::set<Tuple> nodes) : nodes_(std::move(nodes)) {
    for (const Tuple& t : nodes_) {
      if (t.empty())
        throw PreconditionError("order tree: the root is implicit");
      if (t.size() > 1 && !nodes_.count(Tuple(t.begin(), t.end() - 1)))
        throw PreconditionError("order tree: not prefix closed");
    }
  }

  const std::set<Tuple>& nodes() const { return nodes_; }
  bool contains(const Tuple& t) const { return nodes_.count(t) != 0; }
  std::size_t size() const { return nodes_.size(); }

 private:
  std::set<Tuple> nodes_;
};

// Iterated removal of extension-less nodes; the count of rounds until empty.
template <typename Label>
Ordinal wf_order(const OrderTree<Label>& t) {
  std::set<std::vector<Label>> cur = t.nodes();
  std::uint64_t rounds = 0;
  while (!cur.empty()) {
    std::set<std::vector<Label>> parents;
    for (const auto& n : cur)
      if (n.size() > 1)
        parents.insert(std::vector<Label>(n.begin(), n.end() - 1));
    std::set<std::vector<Label>> next;
    for (const auto& n : cur)
      if (parents.count(n)) next.insert(n);
    cur = std::move(next);
    ++rounds;
  }
  return Ordinal::nat(rounds);
}

// One (A, B) pair per index over an integer ground set; sign +1 picks A,
// sign -1 picks B.
struct BooleanPair {
  std::set<int> a;
  std::set<int> b;
};

struct BooleanTreeResult {
  OrderTree<int> tree;  // tuples of 1-based pair indices, repeats allowed
  bool lower_bound_only = false;  // depth cap cut off live nodes
  bool overlap_warning = false;   // some pair has a nonempty intersection
};

// Tuples (n_1,...,n_k), k <= depth_cap, such that every one of the 2^k
// sign-intersections over the chosen pairs is nonempty.
BooleanTreeResult boolean_tree(const std::vector<BooleanPair>& pairs,
                               int depth_cap);

}  // namespace schreier
