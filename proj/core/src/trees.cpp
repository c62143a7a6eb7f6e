#include "schreier/trees.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <utility>

namespace schreier {

struct TreeSpec::Impl {
  struct SchreierV {
    Ordinal alpha;
  };
  struct FromFamilyV {
    FamilySpec family;
  };
  struct ExplicitV {
    std::set<Node> nodes;
  };
  struct LSubV {
    TreeSpec inner;
    int n;
  };
  struct BoxPlusV {
    TreeSpec left;
    TreeSpec right;
  };
  struct TreeSumV {
    std::function<TreeSpec(int)> gen;
  };
  std::variant<SchreierV, FromFamilyV, ExplicitV, LSubV, BoxPlusV, TreeSumV> v;
};

namespace {

using Impl = TreeSpec::Impl;

// Per-evaluation memo: membership answers plus the subtree specs a symbolic
// tree manufactures, so repeated positions share one identity.
struct EvalCache {
  std::map<std::pair<const Impl*, Node>, bool> memo;
  std::map<std::pair<const Impl*, int>, TreeSpec> child;
};

bool member_c(const TreeSpec& t, const Node& z, EvalCache& c);

const TreeSpec& schreier_child(const TreeSpec& t, const Ordinal& alpha, int i,
                               EvalCache& c) {
  const bool succ = classify(alpha) == OrdinalKind::successor;
  const int key = succ ? 0 : i;
  auto it = c.child.find({&t.impl(), key});
  if (it == c.child.end()) {
    Ordinal beta = succ ? predecessor(alpha) : fundamental_seq(alpha, i);
    it = c.child.emplace(std::make_pair(&t.impl(), key),
                         TreeSpec::schreier(std::move(beta)))
             .first;
  }
  return it->second;
}

const TreeSpec& sum_child(const TreeSpec& t,
                          const std::function<TreeSpec(int)>& gen, int i,
                          EvalCache& c) {
  auto it = c.child.find({&t.impl(), i});
  if (it == c.child.end())
    it = c.child.emplace(std::make_pair(&t.impl(), i), gen(i)).first;
  return it->second;
}

// z in [(+)^n T_i] with T_i supplied per position. B[j][s]: is the length-s
// prefix of z in (+)^j? The j = 0 tree is the all-minus stems (root
// included); the step tree absorbs a suffix started at any split point u
// whose prefix already lies in the previous power.
bool boxseq_member(int n, const std::function<const TreeSpec&(int)>& tree_at,
                   const Node& z, EvalCache& c) {
  const int len = z.length();
  const int pfirst = z.first_plus();
  std::vector<char> prev(static_cast<std::size_t>(len) + 1);
  for (int s = 0; s <= len; ++s)
    prev[static_cast<std::size_t>(s)] = pfirst == 0 || s < pfirst;
  std::vector<char> cur(static_cast<std::size_t>(len) + 1);
  for (int j = 1; j <= n; ++j) {
    for (int s = 0; s <= len; ++s) {
      bool ok = prev[static_cast<std::size_t>(s)] != 0;
      for (int u = 0; u < s && !ok; ++u) {
        if (!prev[static_cast<std::size_t>(u)]) continue;
        ok = member_c(tree_at(j), Node::stem(u).concat(z.slice(u, s)), c);
      }
      cur[static_cast<std::size_t>(s)] = ok;
    }
    std::swap(prev, cur);
  }
  return prev[static_cast<std::size_t>(len)] != 0;
}

bool member_impl(const TreeSpec& t, const Node& z, EvalCache& c) {
  struct V {
    const TreeSpec& t;
    const Node& z;
    EvalCache& c;

    bool operator()(const Impl::SchreierV& s) const {
      if (z.all_minus()) return true;
      if (s.alpha.is_zero()) return z.count_plus() <= 1;
      const int p = z.first_plus();
      return boxseq_member(
          p,
          [&](int j) -> const TreeSpec& {
            return schreier_child(t, s.alpha, j, c);
          },
          z, c);
    }
    bool operator()(const Impl::FromFamilyV& f) const {
      return member(f.family, z.plus_positions());
    }
    bool operator()(const Impl::ExplicitV& e) const {
      return e.nodes.count(z) != 0;
    }
    bool operator()(const Impl::LSubV& l) const {
      if (z.all_minus()) return z.length() <= l.n - 1;
      if (z.first_plus() != l.n) return false;
      return member_c(l.inner, z, c);
    }
    bool operator()(const Impl::BoxPlusV& b) const {
      if (member_c(b.left, z, c)) return true;
      const int len = z.length();
      for (int s = 0; s < len; ++s) {
        if (!member_c(b.left, z.prefix(s), c)) continue;
        if (member_c(b.right, Node::stem(s).concat(z.slice(s, len)), c))
          return true;
      }
      return false;
    }
    bool operator()(const Impl::TreeSumV& g) const {
      if (z.all_minus()) return true;
      return member_c(sum_child(t, g.gen, z.first_plus(), c), z, c);
    }
  };
  return std::visit(V{t, z, c}, t.impl().v);
}

bool member_c(const TreeSpec& t, const Node& z, EvalCache& c) {
  const auto key = std::make_pair(&t.impl(), z);
  auto it = c.memo.find(key);
  if (it != c.memo.end()) return it->second;
  const bool out = member_impl(t, z, c);
  c.memo.emplace(key, out);
  return out;
}

bool monotone_in_tail(const TreeSpec& t) {
  if (std::holds_alternative<Impl::SchreierV>(t.impl().v)) return true;
  if (const auto* f = std::get_if<Impl::FromFamilyV>(&t.impl().v))
    return !std::holds_alternative<ExplicitFamily>(f->family);
  return false;
}

// All nodes of one length in lexicographic order, -1 before +1.
void each_node_of_length(int len, const std::function<void(const Node&)>& fn) {
  for (std::uint64_t mask = 0; mask < (1ull << len); ++mask) {
    std::vector<int> signs(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i)
      signs[static_cast<std::size_t>(i)] =
          (mask >> (len - 1 - i)) & 1 ? 1 : -1;
    fn(Node::from_signs(signs));
  }
}

}  // namespace

Node Node::from_signs(const std::vector<int>& signs) {
  Node out;
  out.signs_.reserve(signs.size());
  for (int s : signs) {
    if (s != 1 && s != -1)
      throw PreconditionError("node: signs must be +1 or -1");
    out.signs_.push_back(static_cast<std::int8_t>(s));
  }
  return out;
}

Node Node::stem(int n) {
  if (n < 0) throw PreconditionError("node: stem length must be >= 0");
  Node out;
  out.signs_.assign(static_cast<std::size_t>(n), -1);
  return out;
}

Node Node::from_plus_set(const FinSet& plus, int length) {
  if (!plus.empty() && plus.max() > length)
    throw PreconditionError("node: plus positions exceed the length");
  Node out = stem(length);
  for (int p : plus.elems()) out.signs_[static_cast<std::size_t>(p - 1)] = 1;
  return out;
}

int Node::sign(int i) const {
  if (i < 0 || i >= length())
    throw PreconditionError("node: sign index out of range");
  return signs_[static_cast<std::size_t>(i)];
}

bool Node::all_minus() const {
  return std::all_of(signs_.begin(), signs_.end(),
                     [](std::int8_t s) { return s == -1; });
}

int Node::count_plus() const {
  return static_cast<int>(std::count(signs_.begin(), signs_.end(), 1));
}

int Node::first_plus() const {
  for (int i = 0; i < length(); ++i)
    if (signs_[static_cast<std::size_t>(i)] == 1) return i + 1;
  return 0;
}

FinSet Node::plus_positions() const {
  std::vector<int> out;
  for (int i = 0; i < length(); ++i)
    if (signs_[static_cast<std::size_t>(i)] == 1) out.push_back(i + 1);
  return FinSet(std::move(out));
}

Node Node::prefix(int len) const { return slice(0, len); }

Node Node::slice(int from, int to) const {
  if (from < 0 || to < from || to > length())
    throw PreconditionError("node: slice out of range");
  Node out;
  out.signs_.assign(signs_.begin() + from, signs_.begin() + to);
  return out;
}

Node Node::extended(int sign) const {
  if (sign != 1 && sign != -1)
    throw PreconditionError("node: signs must be +1 or -1");
  Node out = *this;
  out.signs_.push_back(static_cast<std::int8_t>(sign));
  return out;
}

Node Node::concat(const Node& tail) const {
  Node out = *this;
  out.signs_.insert(out.signs_.end(), tail.signs_.begin(), tail.signs_.end());
  return out;
}

std::string render(const Node& n) {
  std::string out;
  out.reserve(static_cast<std::size_t>(n.length()));
  for (int i = 0; i < n.length(); ++i) out += n.sign(i) == 1 ? '+' : '-';
  return out;
}

Node parse_node(std::string_view text) {
  std::vector<int> signs;
  signs.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '+')
      signs.push_back(1);
    else if (text[i] == '-')
      signs.push_back(-1);
    else
      throw ParseError("node: expected '+' or '-' at offset " +
                       std::to_string(i));
  }
  return Node::from_signs(signs);
}

TreeSpec TreeSpec::schreier(Ordinal alpha) {
  return TreeSpec(std::make_shared<const Impl>(
      Impl{Impl::SchreierV{std::move(alpha)}}));
}

TreeSpec TreeSpec::from_family(FamilySpec family) {
  return TreeSpec(std::make_shared<const Impl>(
      Impl{Impl::FromFamilyV{std::move(family)}}));
}

TreeSpec TreeSpec::explicit_tree(std::vector<Node> nodes) {
  std::set<Node> set(nodes.begin(), nodes.end());
  set.insert(Node{});
  for (const Node& n : set)
    if (n.length() > 0 && !set.count(n.prefix(n.length() - 1)))
      throw PreconditionError("explicit tree: not prefix closed");
  return TreeSpec(
      std::make_shared<const Impl>(Impl{Impl::ExplicitV{std::move(set)}}));
}

TreeSpec TreeSpec::lsub(TreeSpec inner, int n) {
  if (n < 1) throw PreconditionError("lsub: position must be >= 1");
  return TreeSpec(std::make_shared<const Impl>(
      Impl{Impl::LSubV{std::move(inner), n}}));
}

TreeSpec TreeSpec::boxplus(TreeSpec left, TreeSpec right) {
  return TreeSpec(std::make_shared<const Impl>(
      Impl{Impl::BoxPlusV{std::move(left), std::move(right)}}));
}

TreeSpec TreeSpec::tree_sum(std::function<TreeSpec(int)> generator) {
  if (!generator) throw PreconditionError("tree sum: missing generator");
  return TreeSpec(std::make_shared<const Impl>(
      Impl{Impl::TreeSumV{std::move(generator)}}));
}

bool member(const TreeSpec& t, const Node& node) {
  EvalCache c;
  return member_c(t, node, c);
}

std::vector<Node> members_to_depth(const TreeSpec& t, int depth) {
  if (depth < 0) throw PreconditionError("members: depth must be >= 0");
  EvalCache c;
  std::vector<Node> out;
  for (int len = 0; len <= depth; ++len)
    each_node_of_length(len, [&](const Node& z) {
      if (member_c(t, z, c)) out.push_back(z);
    });
  return out;
}

bool equivalent_on_depth(const TreeSpec& a, const TreeSpec& b, int depth) {
  if (depth < 0) throw PreconditionError("equivalence: depth must be >= 0");
  EvalCache ca, cb;
  bool same = true;
  for (int len = 0; len <= depth && same; ++len)
    each_node_of_length(len, [&](const Node& z) {
      if (same && member_c(a, z, ca) != member_c(b, z, cb)) same = false;
    });
  return same;
}

bool is_weakly_independent(const TreeSpec& t, int depth) {
  if (depth < 1) throw PreconditionError("weak independence: depth must be >= 1");
  EvalCache c;
  bool ok = true;
  for (int len = 1; len <= depth && ok; ++len)
    each_node_of_length(len, [&](const Node& z) {
      if (!ok || !member_c(t, z, c)) return;
      const FinSet plus = z.plus_positions();
      const auto& pos = plus.elems();
      const unsigned k = static_cast<unsigned>(pos.size());
      for (unsigned drop = 1; drop < (1u << k) && ok; ++drop) {
        Node weak = z;
        for (unsigned i = 0; i < k; ++i)
          if (drop & (1u << i)) {
            Node tmp = weak.prefix(pos[i] - 1)
                           .extended(-1)
                           .concat(weak.slice(pos[i], weak.length()));
            weak = std::move(tmp);
          }
        if (!member_c(t, weak, c)) ok = false;
      }
    });
  return ok;
}

FBOutcome has_property_FB(const TreeSpec& t, const Node& stem, int probe) {
  if (probe < 0) throw PreconditionError("property FB: probe must be >= 0");
  EvalCache c;
  if (!member_c(t, stem, c))
    throw PreconditionError("property FB: stem is not a member");
  auto extension = [&](int j) {
    return stem.concat(Node::stem(j)).extended(1);
  };
  if (monotone_in_tail(t))
    return member_c(t, extension(probe), c) ? FBOutcome::all_extend
                                            : FBOutcome::none_extend;
  bool any_in = false, any_out = false;
  for (int j = probe; j < probe + 8; ++j)
    (member_c(t, extension(j), c) ? any_in : any_out) = true;
  if (any_in && any_out) return FBOutcome::undecided;
  return any_in ? FBOutcome::all_extend : FBOutcome::none_extend;
}

Ordinal delta_order(const TreeSpec& t) {
  struct V {
    Ordinal operator()(const Impl::SchreierV& s) const {
      if (s.alpha.is_zero()) return Ordinal::nat(2);
      return add(omega_pow(s.alpha), Ordinal::nat(1));
    }
    Ordinal operator()(const Impl::FromFamilyV& f) const {
      return add(cb_rank(f.family, FinSet{}), Ordinal::nat(1));
    }
    Ordinal operator()(const Impl::ExplicitV&) const { return Ordinal::nat(1); }
    Ordinal operator()(const Impl::LSubV& l) const {
      if (const auto* s = std::get_if<Impl::SchreierV>(&l.inner.impl().v))
        if (!s->alpha.is_zero()) return add(omega_pow(s->alpha), Ordinal::nat(1));
      throw PreconditionError("delta order: unsupported tree variant");
    }
    Ordinal operator()(const Impl::BoxPlusV&) const {
      throw PreconditionError("delta order: unsupported tree variant");
    }
    Ordinal operator()(const Impl::TreeSumV&) const {
      throw PreconditionError("delta order: unsupported tree variant");
    }
  };
  return std::visit(V{}, t.impl().v);
}

std::string render(const TreeSpec& t) {
  struct V {
    std::string operator()(const Impl::SchreierV& s) const {
      return "schreier(" + render(s.alpha) + ")";
    }
    std::string operator()(const Impl::FromFamilyV& f) const {
      return "family(" + render(f.family) + ")";
    }
    std::string operator()(const Impl::ExplicitV& e) const {
      return "explicit(" + std::to_string(e.nodes.size()) + " nodes)";
    }
    std::string operator()(const Impl::LSubV& l) const {
      return "L(" + schreier::render(l.inner) + "," + std::to_string(l.n) + ")";
    }
    std::string operator()(const Impl::BoxPlusV& b) const {
      return "boxplus(" + schreier::render(b.left) + "," +
             schreier::render(b.right) + ")";
    }
    std::string operator()(const Impl::TreeSumV&) const {
      return "sum(generated)";
    }
  };
  return std::visit(V{}, t.impl().v);
}

namespace {

struct TreeTextParser {
  std::string_view text;
  std::size_t pos = 0;

  void ws() {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }
  bool eat(std::string_view word) {
    ws();
    if (text.substr(pos).starts_with(word)) {
      pos += word.size();
      return true;
    }
    return false;
  }
  void expect(char c, const char* where) {
    ws();
    if (pos >= text.size() || text[pos] != c)
      throw ParseError(std::string("tree spec: expected '") + c + "' in " +
                       where);
    ++pos;
  }
  // Consume through the ')' matching the '(' at the cursor, returning the
  // inside. Only parentheses nest in ordinal and family texts.
  std::string_view balanced() {
    ws();
    if (pos >= text.size() || text[pos] != '(')
      throw ParseError("tree spec: expected '('");
    int depth = 0;
    for (std::size_t i = pos; i < text.size(); ++i) {
      if (text[i] == '(') ++depth;
      if (text[i] == ')' && --depth == 0) {
        std::string_view inside = text.substr(pos + 1, i - pos - 1);
        pos = i + 1;
        return inside;
      }
    }
    throw ParseError("tree spec: unbalanced parentheses");
  }
  int nat(const char* where) {
    ws();
    std::size_t end = pos;
    while (end < text.size() && text[end] >= '0' && text[end] <= '9') ++end;
    if (end == pos)
      throw ParseError(std::string("tree spec: expected a number in ") + where);
    int value = 0;
    for (std::size_t i = pos; i < end; ++i) {
      value = value * 10 + (text[i] - '0');
      if (value > 1'000'000)
        throw ParseError("tree spec: number out of range");
    }
    pos = end;
    return value;
  }

  static std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
      s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
      s.remove_suffix(1);
    return s;
  }

  TreeSpec parse() {
    if (eat("schreier")) return TreeSpec::schreier(parse_ordinal(trim(balanced())));
    if (eat("family")) return TreeSpec::from_family(parse_familyspec(balanced()));
    if (eat("boxplus")) {
      expect('(', "boxplus");
      TreeSpec left = parse();
      expect(',', "boxplus");
      TreeSpec right = parse();
      expect(')', "boxplus");
      return TreeSpec::boxplus(std::move(left), std::move(right));
    }
    if (eat("L")) {
      expect('(', "L");
      TreeSpec inner = parse();
      expect(',', "L");
      const int n = nat("L");
      expect(')', "L");
      if (n < 1) throw ParseError("tree spec: L needs n >= 1");
      return TreeSpec::lsub(std::move(inner), n);
    }
    ws();
    throw ParseError("tree spec: unrecognized form at '" +
                     std::string(text.substr(pos)) + "'");
  }
};

}  // namespace

TreeSpec parse_treespec(std::string_view text) {
  TreeTextParser p{text};
  TreeSpec out = p.parse();
  p.ws();
  if (p.pos != text.size())
    throw ParseError("tree spec: trailing text '" +
                     std::string(text.substr(p.pos)) + "'");
  return out;
}

BooleanTreeResult boolean_tree(const std::vector<BooleanPair>& pairs,
                               int depth_cap) {
  if (depth_cap < 0)
    throw PreconditionError("boolean tree: depth cap must be >= 0");
  BooleanTreeResult res;
  for (const BooleanPair& p : pairs) {
    for (int x : p.a)
      if (p.b.count(x)) {
        res.overlap_warning = true;
        break;
      }
    if (res.overlap_warning) break;
  }
  const int m = static_cast<int>(pairs.size());

  auto viable = [&](const std::vector<int>& tup) {
    const unsigned k = static_cast<unsigned>(tup.size());
    for (unsigned eps = 0; eps < (1u << k); ++eps) {
      const BooleanPair& p0 = pairs[static_cast<std::size_t>(tup[0] - 1)];
      const std::set<int>& first = (eps & 1u) ? p0.a : p0.b;
      bool found = false;
      for (int x : first) {
        bool ok = true;
        for (unsigned i = 1; i < k && ok; ++i) {
          const BooleanPair& pi = pairs[static_cast<std::size_t>(tup[i] - 1)];
          ok = ((eps >> i) & 1u ? pi.a : pi.b).count(x) != 0;
        }
        if (ok) {
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
    return true;
  };

  std::set<std::vector<int>> nodes;
  std::vector<int> tup;
  std::function<void()> grow = [&] {
    if (static_cast<int>(tup.size()) == depth_cap) {
      for (int nx = 1; nx <= m && !res.lower_bound_only; ++nx) {
        tup.push_back(nx);
        if (viable(tup)) res.lower_bound_only = true;
        tup.pop_back();
      }
      return;
    }
    for (int nx = 1; nx <= m; ++nx) {
      tup.push_back(nx);
      if (viable(tup)) {
        nodes.insert(tup);
        grow();
      }
      tup.pop_back();
    }
  };
  grow();
  res.tree = OrderTree<int>(std::move(nodes));
  return res;
}

}  // namespace schreier
