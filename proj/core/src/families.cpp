#include "schreier/families.hpp"

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <tuple>
#include <utility>

#include "schreier/errors.hpp"

namespace schreier {

namespace {

bool is_one(const Ordinal& a) { return a.is_nat() && a.as_nat() == 1; }

const Ordinal& checked_alpha(const SchreierSpec& s) {
  if (s.alpha.is_zero())
    throw PreconditionError("schreier family: index must be >= 1");
  return s.alpha;
}

// Families governing block positions 1..n when the first block starts at
// min F. All equal to alpha-1 at a successor, the fundamental sequence at a
// limit. Requires alpha >= 2.
std::vector<Ordinal> position_families(const Ordinal& alpha, int n) {
  std::vector<Ordinal> betas;
  betas.reserve(static_cast<std::size_t>(n));
  if (classify(alpha) == OrdinalKind::successor) {
    betas.assign(static_cast<std::size_t>(n), predecessor(alpha));
  } else {
    for (int i = 1; i <= n; ++i) betas.push_back(fundamental_seq(alpha, i));
  }
  return betas;
}

// Slice memberships recur across block layouts and nesting levels, so each
// top-level query carries one table for them.
using MemberMemo = std::map<std::tuple<Ordinal, FinSet, int>, bool>;

bool member_rec(const Ordinal& alpha, const FinSet& f, BlockCountRule rule,
                MemberMemo& seen);

// Can f be cut into consecutive blocks at the first n positions, block i
// landing in betas[i]? Empty blocks allowed except that min_first forces a
// nonempty first block. Memoized over (elements consumed, position).
bool blocks_fit(const std::vector<Ordinal>& betas, int n, const FinSet& f,
                int min_first, BlockCountRule rule, MemberMemo& seen) {
  const int sz = f.size();
  if (sz == 0) return min_first == 0;
  if (n == 0) return false;
  std::vector<std::int8_t> memo(static_cast<std::size_t>(sz + 1) * (n + 1), -1);
  std::function<bool(int, int)> can = [&](int e, int i) -> bool {
    if (e == sz) return true;
    if (i == n) return false;
    std::int8_t& slot = memo[static_cast<std::size_t>(e) * (n + 1) + i];
    if (slot != -1) return slot == 1;
    bool ok = false;
    const int lo = i == 0 ? min_first : 0;
    for (int len = lo; len <= sz - e && !ok; ++len) {
      if (len > 0 && !member_rec(betas[static_cast<std::size_t>(i)],
                                 f.slice(e, e + len), rule, seen))
        continue;
      ok = can(e + len, i + 1);
    }
    slot = ok ? 1 : 0;
    return ok;
  };
  return can(0, 0);
}

bool member_rec(const Ordinal& alpha, const FinSet& f, BlockCountRule rule,
                MemberMemo& seen) {
  if (f.empty()) return true;
  if (is_one(alpha)) return f.min() >= f.size();
  const auto key = std::make_tuple(alpha, f, static_cast<int>(rule));
  if (const auto it = seen.find(key); it != seen.end()) return it->second;
  const int m = f.min();
  auto betas = position_families(alpha, m);
  // With n <= min F, fewer blocks embed by padding with trailing empties, so
  // only n = min F needs testing. The other rule wants the count inside the
  // first block, forcing n = min F and a nonempty first block.
  const int min_first = rule == BlockCountRule::count_in_first_block ? 1 : 0;
  const bool ok = blocks_fit(betas, m, f, min_first, rule, seen);
  seen.emplace(key, ok);
  return ok;
}

// Deliberately literal route: every block count, every composition, no
// memoization, recursing through the same slow path.
bool brute_rec(const Ordinal& alpha, const FinSet& f, BlockCountRule rule);

bool brute_compose(const std::vector<Ordinal>& betas, int n, const FinSet& f,
                   int e, int i, BlockCountRule rule) {
  if (i == n) return e == f.size();
  const int lo = (i == 0 && rule == BlockCountRule::count_in_first_block) ? 1 : 0;
  for (int len = lo; e + len <= f.size(); ++len) {
    if (len > 0 && !brute_rec(betas[static_cast<std::size_t>(i)],
                              f.slice(e, e + len), rule))
      continue;
    if (brute_compose(betas, n, f, e + len, i + 1, rule)) return true;
  }
  return false;
}

bool brute_rec(const Ordinal& alpha, const FinSet& f, BlockCountRule rule) {
  if (f.empty()) return true;
  if (is_one(alpha)) return f.min() >= f.size();
  const int m = f.min();
  const int lo = rule == BlockCountRule::count_in_first_block ? m : 1;
  for (int n = lo; n <= m; ++n) {
    auto betas = position_families(alpha, n);
    if (brute_compose(betas, n, f, 0, 0, rule)) return true;
  }
  return false;
}

// rho = w^beta + sigma; recover sigma. Requires rho > w^beta, so the leading
// exponent is >= beta: strictly above, left addition is absorbed and sigma is
// rho itself; equal, one copy of w^beta comes off the leading coefficient.
Ordinal left_sub_pow(const Ordinal& beta, const Ordinal& rho) {
  auto ts = rho.terms();
  if (ts.front().exponent == beta) {
    if (ts.front().coefficient == 1)
      ts.erase(ts.begin());
    else
      ts.front().coefficient -= 1;
    return Ordinal::from_terms(ts);
  }
  return rho;
}

bool deriv_rec(const Ordinal& alpha, const FinSet& f, const Ordinal& rho,
               MemberMemo& seen);

// f nonempty, rho >= 1, positions 1..n still live. A derivative order at
// most w^(beta_n) charges the last position: f splits into a plain prefix on
// positions 1..n-1 and a suffix sitting in the rho-th derivative at position
// n (the suffix may be empty since rho <= w^(beta_n) keeps {} alive there).
// Past w^(beta_n) the last position dies entirely and the remainder of rho
// falls on the first n-1 positions.
bool deriv_blocks(const std::vector<Ordinal>& betas, int n, const FinSet& f,
                  const Ordinal& rho, MemberMemo& seen) {
  if (n == 0) return false;
  const Ordinal& beta = betas[static_cast<std::size_t>(n - 1)];
  if (rho <= omega_pow(beta)) {
    if (blocks_fit(betas, n - 1, f, 0, BlockCountRule::at_most_min, seen))
      return true;
    const int sz = f.size();
    for (int t = 0; t < sz; ++t) {
      if (!deriv_rec(beta, f.slice(t, sz), rho, seen)) continue;
      if (blocks_fit(betas, n - 1, f.slice(0, t), 0,
                     BlockCountRule::at_most_min, seen))
        return true;
    }
    return false;
  }
  return deriv_blocks(betas, n - 1, f, left_sub_pow(beta, rho), seen);
}

bool deriv_rec(const Ordinal& alpha, const FinSet& f, const Ordinal& rho,
               MemberMemo& seen) {
  if (rho.is_zero()) return member_rec(alpha, f, BlockCountRule::at_most_min, seen);
  if (f.empty()) return rho <= omega_pow(alpha);
  if (is_one(alpha)) {
    if (!rho.is_nat()) return false;
    if (f.min() < f.size()) return false;
    return rho.as_nat() <= static_cast<std::uint64_t>(f.min() - f.size());
  }
  const int m = f.min();
  auto betas = position_families(alpha, m);
  return deriv_blocks(betas, m, f, rho, seen);
}

Ordinal rank_rec(const Ordinal& alpha, const FinSet& f, MemberMemo& seen) {
  if (f.empty()) return omega_pow(alpha);
  if (is_one(alpha)) return Ordinal::nat(static_cast<std::uint64_t>(f.min() - f.size()));
  const int m = f.min();
  auto betas = position_families(alpha, m);
  const int sz = f.size();
  // Last nonempty block at position j realizes w^(beta_m) + ... +
  // w^(beta_{j+1}) from the dead tail positions plus whatever rank the block
  // itself carries; the rank of f is the best such decomposition.
  std::optional<Ordinal> best;
  for (int j = 1; j <= m; ++j) {
    for (int t = 0; t < sz; ++t) {
      FinSet tail = f.slice(t, sz);
      if (!member_rec(betas[static_cast<std::size_t>(j - 1)], tail,
                      BlockCountRule::at_most_min, seen))
        continue;
      if (!blocks_fit(betas, j - 1, f.slice(0, t), 0,
                      BlockCountRule::at_most_min, seen))
        continue;
      Ordinal val;
      for (int i = m; i > j; --i)
        val = add(val, omega_pow(betas[static_cast<std::size_t>(i - 1)]));
      val = add(val, rank_rec(betas[static_cast<std::size_t>(j - 1)], tail, seen));
      if (!best || *best < val) best = std::move(val);
    }
  }
  return *best;
}

}  // namespace

FinSet::FinSet(std::vector<int> elems) : elems_(std::move(elems)) {
  for (std::size_t i = 0; i < elems_.size(); ++i) {
    if (elems_[i] < 1)
      throw PreconditionError("finset: elements must be positive");
    if (i > 0 && elems_[i - 1] >= elems_[i])
      throw PreconditionError("finset: elements must be strictly increasing");
  }
}

int FinSet::min() const {
  if (elems_.empty()) throw PreconditionError("finset: min of empty set");
  return elems_.front();
}

int FinSet::max() const {
  if (elems_.empty()) throw PreconditionError("finset: max of empty set");
  return elems_.back();
}

bool FinSet::contains(int n) const {
  return std::binary_search(elems_.begin(), elems_.end(), n);
}

FinSet FinSet::with(int n) const {
  if (contains(n)) throw PreconditionError("finset: element already present");
  FinSet out;
  out.elems_ = elems_;
  out.elems_.insert(std::lower_bound(out.elems_.begin(), out.elems_.end(), n),
                    n);
  return out;
}

FinSet FinSet::slice(int from, int to) const {
  if (from < 0 || to < from || to > size())
    throw PreconditionError("finset: slice out of range");
  FinSet out;
  out.elems_.assign(elems_.begin() + from, elems_.begin() + to);
  return out;
}

std::string render(const FinSet& f) {
  std::string out = "[";
  for (std::size_t i = 0; i < f.elems().size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(f.elems()[i]);
  }
  out += ']';
  return out;
}

FinSet parse_finset(std::string_view text) {
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto fail = [&](const std::string& what) -> ParseError {
    return ParseError("finset: " + what + " at offset " + std::to_string(pos));
  };
  skip_ws();
  if (pos == text.size() || text[pos] != '[') throw fail("expected '['");
  ++pos;
  std::vector<int> elems;
  skip_ws();
  if (pos < text.size() && text[pos] == ']') {
    ++pos;
  } else {
    while (true) {
      skip_ws();
      if (pos == text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
        throw fail("expected digit");
      if (text[pos] == '0') throw fail("leading zero");
      long v = 0;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        v = v * 10 + (text[pos] - '0');
        if (v > 1'000'000'000) throw fail("element too large");
        ++pos;
      }
      elems.push_back(static_cast<int>(v));
      skip_ws();
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        continue;
      }
      if (pos < text.size() && text[pos] == ']') {
        ++pos;
        break;
      }
      throw fail("expected ',' or ']'");
    }
  }
  skip_ws();
  if (pos != text.size()) throw fail("trailing input");
  try {
    return FinSet(std::move(elems));
  } catch (const PreconditionError& e) {
    throw ParseError(std::string("finset: ") + e.what());
  }
}

ExplicitFamily::ExplicitFamily(std::vector<FinSet> members)
    : members_(members.begin(), members.end()) {}

int ExplicitFamily::ground_max() const {
  int out = 0;
  for (const FinSet& f : members_)
    if (!f.empty()) out = std::max(out, f.max());
  return out;
}

std::string ExplicitFamily::dump() const {
  std::string out;
  for (const FinSet& f : members_) {
    out += render(f);
    out += '\n';
  }
  return out;
}

FamilySpec schreier_family(Ordinal alpha, BlockCountRule rule) {
  SchreierSpec s{std::move(alpha), rule};
  checked_alpha(s);
  return FamilySpec(std::move(s));
}

std::string render(const FamilySpec& spec) {
  struct V {
    std::string operator()(const Singletons&) const { return "singletons"; }
    std::string operator()(const SchreierSpec& s) const {
      std::string out = "schreier(" + render(s.alpha) + ")";
      if (s.rule == BlockCountRule::count_in_first_block)
        out += "[count-in-first]";
      return out;
    }
    std::string operator()(const ExplicitFamily& e) const {
      return "explicit(" + std::to_string(e.size()) + " members)";
    }
  };
  return std::visit(V{}, spec);
}

FamilySpec parse_familyspec(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
      s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
      s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text == "singletons") return Singletons{};
  if (text.starts_with("schreier")) {
    std::string_view rest = trim(text.substr(8));
    if (rest.empty() || rest.front() != '(')
      throw ParseError("family spec: expected '(' after schreier");
    int depth = 0;
    std::size_t close = std::string_view::npos;
    for (std::size_t i = 0; i < rest.size(); ++i) {
      if (rest[i] == '(') ++depth;
      if (rest[i] == ')' && --depth == 0) {
        close = i;
        break;
      }
    }
    if (close == std::string_view::npos)
      throw ParseError("family spec: unbalanced parentheses");
    const Ordinal alpha = parse_ordinal(trim(rest.substr(1, close - 1)));
    std::string_view tail = trim(rest.substr(close + 1));
    BlockCountRule rule = BlockCountRule::at_most_min;
    if (tail == "[count-in-first]") {
      rule = BlockCountRule::count_in_first_block;
      tail = {};
    }
    if (!tail.empty())
      throw ParseError("family spec: trailing text '" + std::string(tail) + "'");
    if (alpha.is_zero())
      throw ParseError("family spec: schreier index must be >= 1");
    return SchreierSpec{alpha, rule};
  }
  if (text.starts_with('{')) {
    if (!text.ends_with('}'))
      throw ParseError("family spec: unbalanced braces");
    std::string_view body = trim(text.substr(1, text.size() - 2));
    std::vector<FinSet> members;
    while (!body.empty()) {
      const std::size_t semi = body.find(';');
      std::string_view piece =
          semi == std::string_view::npos ? body : body.substr(0, semi);
      members.push_back(parse_finset(trim(piece)));
      if (semi == std::string_view::npos) break;
      body = trim(body.substr(semi + 1));
      if (body.empty())
        throw ParseError("family spec: trailing ';' in member list");
    }
    return ExplicitFamily(std::move(members));
  }
  throw ParseError("family spec: unrecognized form '" + std::string(text) + "'");
}

bool member(const FamilySpec& spec, const FinSet& f) {
  struct V {
    const FinSet& f;
    bool operator()(const Singletons&) const { return f.size() <= 1; }
    bool operator()(const SchreierSpec& s) const {
      MemberMemo seen;
      return member_rec(checked_alpha(s), f, s.rule, seen);
    }
    bool operator()(const ExplicitFamily& e) const { return e.contains(f); }
  };
  return std::visit(V{f}, spec);
}

bool member_bruteforce(const FamilySpec& spec, const FinSet& f) {
  struct V {
    const FinSet& f;
    bool operator()(const Singletons&) const { return f.size() <= 1; }
    bool operator()(const SchreierSpec& s) const {
      return brute_rec(checked_alpha(s), f, s.rule);
    }
    bool operator()(const ExplicitFamily& e) const { return e.contains(f); }
  };
  return std::visit(V{f}, spec);
}

bool is_adequate(const FamilySpec& spec) {
  if (const auto* ex = std::get_if<ExplicitFamily>(&spec)) {
    AdequacyReport rep = adequacy_report(*ex);
    return rep.hereditary && rep.contains_empty;
  }
  if (const auto* s = std::get_if<SchreierSpec>(&spec)) checked_alpha(*s);
  return true;
}

AdequacyReport adequacy_report(const ExplicitFamily& fam) {
  AdequacyReport rep;
  rep.contains_empty = fam.contains(FinSet{});
  rep.hereditary = true;
  std::set<int> ground;
  for (const FinSet& f : fam.members()) {
    const auto& v = f.elems();
    for (int x : v) ground.insert(x);
    // closure under single removals gives closure under all subsets
    for (std::size_t i = 0; i < v.size() && rep.hereditary; ++i) {
      std::vector<int> g;
      g.reserve(v.size() - 1);
      for (std::size_t k = 0; k < v.size(); ++k)
        if (k != i) g.push_back(v[k]);
      if (!fam.contains(FinSet(std::move(g)))) rep.hereditary = false;
    }
  }
  rep.singletons_present = true;
  for (int x : ground)
    if (!fam.contains(FinSet(std::vector<int>{x}))) {
      rep.singletons_present = false;
      break;
    }
  return rep;
}

bool is_spreading(const FamilySpec& spec, int truncation) {
  ExplicitFamily within = restrict_family(spec, truncation);
  for (const FinSet& f : within.members()) {
    if (f.empty()) continue;
    const auto& v = f.elems();
    std::vector<int> g(v.size());
    // every image under a strictly increasing map with g_i >= f_i must stay in
    std::function<bool(std::size_t)> all_ok = [&](std::size_t i) -> bool {
      if (i == v.size()) return member(spec, FinSet(g));
      const int lo = std::max(v[i], i == 0 ? 1 : g[i - 1] + 1);
      for (int x = lo; x <= truncation; ++x) {
        g[i] = x;
        if (!all_ok(i + 1)) return false;
      }
      return true;
    };
    if (!all_ok(0)) return false;
  }
  return true;
}

ExplicitFamily restrict_family(const FamilySpec& spec, int n,
                               std::size_t max_members) {
  if (n < 0) throw PreconditionError("restrict: horizon must be >= 0");
  if (const auto* ex = std::get_if<ExplicitFamily>(&spec)) {
    std::vector<FinSet> keep;
    for (const FinSet& f : ex->members())
      if (f.empty() || f.max() <= n) {
        keep.push_back(f);
        if (keep.size() > max_members)
          throw ResourceCapError("restrict: member cap exceeded");
      }
    return ExplicitFamily(std::move(keep));
  }
  // hereditary families grow member by member from the empty set
  std::vector<FinSet> out;
  std::function<void(const FinSet&)> grow = [&](const FinSet& f) {
    out.push_back(f);
    if (out.size() > max_members)
      throw ResourceCapError("restrict: member cap exceeded");
    const int base = f.empty() ? 0 : f.max();
    for (int k = base + 1; k <= n; ++k) {
      FinSet g = f.with(k);
      if (member(spec, g)) grow(g);
    }
  };
  grow(FinSet{});
  return ExplicitFamily(std::move(out));
}

bool in_derivative(const FamilySpec& spec, const FinSet& f, const Ordinal& rho) {
  struct V {
    const FinSet& f;
    const Ordinal& rho;
    bool operator()(const Singletons&) const {
      if (rho.is_zero()) return f.size() <= 1;
      return f.empty() && rho <= Ordinal::nat(1);
    }
    bool operator()(const SchreierSpec& s) const {
      MemberMemo seen;
      return deriv_rec(checked_alpha(s), f, rho, seen);
    }
    bool operator()(const ExplicitFamily& e) const {
      // finitely many points, all isolated
      return rho.is_zero() && e.contains(f);
    }
  };
  return std::visit(V{f, rho}, spec);
}

bool brute_derivative_member(const FamilySpec& spec, const FinSet& f, int j,
                             int window) {
  if (j < 0) throw PreconditionError("derivative step count must be >= 0");
  if (j == 0) return member(spec, f);
  const int probe = std::max(window, f.empty() ? 0 : f.max()) + 1;
  return brute_derivative_member(spec, f.with(probe), j - 1, window);
}

Ordinal cb_rank(const FamilySpec& spec, const FinSet& f) {
  if (!member(spec, f))
    throw NotAMemberError(render(f) + " is not a member of " + render(spec));
  struct V {
    const FinSet& f;
    Ordinal operator()(const Singletons&) const {
      return Ordinal::nat(f.empty() ? 1 : 0);
    }
    Ordinal operator()(const SchreierSpec& s) const {
      MemberMemo seen;
      return rank_rec(checked_alpha(s), f, seen);
    }
    Ordinal operator()(const ExplicitFamily&) const { return Ordinal(); }
  };
  return std::visit(V{f}, spec);
}

}  // namespace schreier
