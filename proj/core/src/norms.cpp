#include "schreier/norms.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <sstream>
#include <utility>

#include "schreier/trees.hpp"

namespace schreier {

namespace {

Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

}  // namespace

CoeffVec::CoeffVec(std::map<int, Rat> entries) {
  for (auto& [n, c] : entries) {
    if (n < 1) throw PreconditionError("coeff vec: indices must be >= 1");
    if (c != 0) entries_.emplace(n, std::move(c));
  }
}

CoeffVec CoeffVec::unit(int n) {
  return CoeffVec(std::map<int, Rat>{{n, Rat(1)}});
}

Rat CoeffVec::at(int n) const {
  const auto it = entries_.find(n);
  return it == entries_.end() ? Rat(0) : it->second;
}

FinSet CoeffVec::support() const {
  std::vector<int> idx;
  idx.reserve(entries_.size());
  for (const auto& [n, c] : entries_) idx.push_back(n);
  return FinSet(std::move(idx));
}

CoeffVec CoeffVec::restricted(const FinSet& keep) const {
  CoeffVec out;
  for (const auto& [n, c] : entries_)
    if (keep.contains(n)) out.entries_.emplace(n, c);
  return out;
}

CoeffVec CoeffVec::plus(const CoeffVec& other) const {
  CoeffVec out = *this;
  for (const auto& [n, c] : other.entries_) {
    const Rat sum = out.at(n) + c;
    if (sum == 0)
      out.entries_.erase(n);
    else
      out.entries_[n] = sum;
  }
  return out;
}

CoeffVec CoeffVec::scaled(const Rat& c) const {
  CoeffVec out;
  if (c == 0) return out;
  for (const auto& [n, v] : entries_) out.entries_.emplace(n, Rat(c * v));
  return out;
}

Rat CoeffVec::l1() const {
  Rat total(0);
  for (const auto& [n, c] : entries_) total += rat_abs(c);
  return total;
}

Rat CoeffVec::sup() const {
  Rat best(0);
  for (const auto& [n, c] : entries_) best = std::max(best, rat_abs(c));
  return best;
}

std::string render(const Rat& q) {
  std::ostringstream out;
  out << q;
  return out.str();
}

std::string render(const CoeffVec& x) {
  std::string out;
  for (const auto& [n, c] : x.entries()) {
    if (!out.empty()) out += ',';
    out += std::to_string(n) + ":" + render(c);
  }
  return out;
}

CoeffVec parse_coeffvec(std::string_view text) {
  std::map<int, Rat> entries;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  };
  skip_ws();
  if (pos == text.size()) return CoeffVec();
  while (true) {
    skip_ws();
    std::size_t idx_end = pos;
    while (idx_end < text.size() && text[idx_end] >= '0' &&
           text[idx_end] <= '9')
      ++idx_end;
    if (idx_end == pos)
      throw ParseError("coeff vec: expected an index at offset " +
                       std::to_string(pos));
    if (text[pos] == '0')
      throw ParseError("coeff vec: index has a leading zero");
    if (idx_end - pos > 9) throw ParseError("coeff vec: index too large");
    const int n = std::stoi(std::string(text.substr(pos, idx_end - pos)));
    pos = idx_end;
    skip_ws();
    if (pos == text.size() || text[pos] != ':')
      throw ParseError("coeff vec: expected ':' after index " +
                       std::to_string(n));
    ++pos;
    skip_ws();
    std::size_t coeff_end = pos;
    while (coeff_end < text.size() && text[coeff_end] != ',') ++coeff_end;
    std::string coeff(text.substr(pos, coeff_end - pos));
    while (!coeff.empty() && (coeff.back() == ' ' || coeff.back() == '\t'))
      coeff.pop_back();
    if (coeff.empty())
      throw ParseError("coeff vec: missing coefficient for index " +
                       std::to_string(n));
    Rat value;
    try {
      value = Rat(coeff);
    } catch (const std::exception&) {
      throw ParseError("coeff vec: bad coefficient '" + coeff + "'");
    }
    if (entries.count(n))
      throw ParseError("coeff vec: duplicate index " + std::to_string(n));
    entries.emplace(n, std::move(value));
    pos = coeff_end;
    if (pos == text.size()) break;
    ++pos;  // consume the comma
    if (pos == text.size())
      throw ParseError("coeff vec: trailing comma");
  }
  return CoeffVec(std::move(entries));
}

namespace {

// Every index mentioned anywhere in a witness subtree.
void collect_indices(const PartitionNode& w, std::vector<int>& out) {
  for (int n : w.base_witness.elems()) out.push_back(n);
  for (int p : w.cuts) out.push_back(p);
  for (const PartitionNode& b : w.blocks) collect_indices(b, out);
}

}  // namespace

Rat witness_value(const PartitionNode& w, const CoeffVec& x) {
  if (w.leaf) {
    if (!w.cuts.empty() || !w.blocks.empty())
      throw PreconditionError("witness: leaf with partition data");
    Rat sum(0);
    for (int n : w.base_witness.elems()) sum += x.at(n);
    return rat_abs(sum);
  }
  const std::size_t k = w.cuts.size();
  if (k < 2 || w.blocks.size() != k)
    throw PreconditionError("witness: inner node needs two or more blocks");
  if (!member(schreier_family(Ordinal::nat(1)), FinSet(w.cuts)))
    throw PreconditionError("witness: cut set is not admissible");
  Rat total(0);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<int> touched;
    collect_indices(w.blocks[i], touched);
    for (int n : touched) {
      if (n < w.cuts[i] || (i + 1 < k && n >= w.cuts[i + 1]))
        throw PreconditionError("witness: block strays outside its window");
    }
    total += witness_value(w.blocks[i], x);
  }
  return total / 2;
}

namespace {

struct BestEval {
  Rat value{0};
  std::optional<FinSet> witness;

  // Ties go to the shortest witness, then the lexicographically least, so
  // the reported member does not depend on search order.
  void offer(const Rat& sum, const FinSet& f) {
    const Rat mag = rat_abs(sum);
    if (!witness || mag > value ||
        (mag == value && (f.size() < witness->size() ||
                          (f.size() == witness->size() && f < *witness)))) {
      value = mag;
      witness = f;
    }
  }
};

// Hereditary families: grow members inside the support; any member's
// intersection with the support is again a member, so nothing is missed.
void grow_members(const FamilySpec& spec, const std::vector<int>& ground,
                  std::size_t start, FinSet& cur, const Rat& sum,
                  const CoeffVec& x, BestEval& best, std::size_t cap,
                  std::size_t& seen) {
  if (++seen > cap)
    throw ResourceCapError("family norm: member cap exceeded");
  best.offer(sum, cur);
  for (std::size_t i = start; i < ground.size(); ++i) {
    FinSet next = cur.with(ground[i]);
    if (!member(spec, next)) continue;
    grow_members(spec, ground, i + 1, next, sum + x.at(ground[i]), x, best,
                 cap, seen);
  }
}

}  // namespace

NormResult family_norm(const FamilySpec& spec, const CoeffVec& x,
                       std::size_t member_cap) {
  BestEval best;
  if (const auto* ex = std::get_if<ExplicitFamily>(&spec)) {
    if (ex->members().empty())
      throw PreconditionError("family norm: empty family");
    // The family is the point set: evaluate x at every member as given.
    for (const FinSet& f : ex->members()) {
      Rat sum(0);
      for (int n : f.elems()) sum += x.at(n);
      best.offer(sum, f);
    }
  } else {
    const FinSet supp = x.support();
    FinSet cur;
    std::size_t seen = 0;
    grow_members(spec, supp.elems(), 0, cur, Rat(0), x, best, member_cap,
                 seen);
  }
  NormResult out;
  out.value = best.value;
  out.witness.value = best.value;
  out.witness.leaf = true;
  out.witness.base_witness = *best.witness;
  out.iterations = 0;
  return out;
}

bool suppression_check(const FamilySpec& spec, const CoeffVec& x,
                       const FinSet& keep) {
  return family_norm(spec, x.restricted(keep)).value <=
         family_norm(spec, x).value;
}

namespace {

// Shared plumbing for both Tsirelson engines. Intervals are contiguous
// position ranges [a, b] of the sorted support; every admissible block is
// such a range, and every block of a k >= 2 partition is strictly smaller
// than the interval it partitions, which grounds the recursion.
struct TsirelsonContext {
  std::vector<int> s;      // support values
  std::vector<Rat> coeff;  // matching coefficients
  Ordinal alpha;
  EndpointRule rule;
  CoeffVec x;
  // Base norms per interval, tabulated once up front (they are the floor of
  // the implicit equation, not part of solving it; both engines share them).
  std::vector<Rat> base_value;
  std::vector<FinSet> base_set;

  int t() const { return static_cast<int>(s.size()); }
  int id(int a, int b) const { return a * t() + b; }

  void tabulate_bases() {
    const int n = t();
    base_value.assign(static_cast<std::size_t>(n * n), Rat(0));
    base_set.assign(static_cast<std::size_t>(n * n), FinSet{});
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        auto& bv = base_value[static_cast<std::size_t>(id(a, b))];
        auto& bs = base_set[static_cast<std::size_t>(id(a, b))];
        if (alpha.is_zero()) {
          int arg = a;
          for (int i = a + 1; i <= b; ++i)
            if (rat_abs(coeff[static_cast<std::size_t>(i)]) >
                rat_abs(coeff[static_cast<std::size_t>(arg)]))
              arg = i;
          bv = rat_abs(coeff[static_cast<std::size_t>(arg)]);
          bs = FinSet({s[static_cast<std::size_t>(arg)]});
        } else {
          std::vector<int> window(s.begin() + a, s.begin() + b + 1);
          const NormResult base = family_norm(schreier_family(alpha),
                                              x.restricted(FinSet(window)));
          bv = base.value;
          bs = base.witness.base_witness;
        }
      }
  }

  const Rat& base(int a, int b) const {
    return base_value[static_cast<std::size_t>(id(a, b))];
  }
  const FinSet& base_member(int a, int b) const {
    return base_set[static_cast<std::size_t>(id(a, b))];
  }
};

struct NaiveSolver {
  const TsirelsonContext& ctx;

  PartitionNode solve(int a, int b) const {
    // Recompute every strict sub-interval locally; no results are shared
    // between sibling calls.
    const int w = b - a + 1;
    std::vector<std::optional<PartitionNode>> sub(
        static_cast<std::size_t>(w * w));
    auto at = [&](int p, int e) -> const PartitionNode& {
      auto& slot = sub[static_cast<std::size_t>((p - a) * w + (e - a))];
      if (!slot) slot = solve(p, e);
      return *slot;
    };

    PartitionNode node;
    node.value = ctx.base(a, b);
    node.leaf = true;
    node.base_witness = ctx.base_member(a, b);

    // h[p][r]: best sum of r block values covering positions p..b (last
    // block free to stop early under the free endpoint rule).
    std::vector<std::vector<Rat>> h(static_cast<std::size_t>(w + 1));
    std::vector<std::vector<int>> pick(static_cast<std::size_t>(w + 1));
    for (int p = b; p >= a; --p) {
      const int rmax = b - p + 1;
      auto& row = h[static_cast<std::size_t>(p - a)];
      auto& sel = pick[static_cast<std::size_t>(p - a)];
      row.assign(static_cast<std::size_t>(rmax + 1), Rat(0));
      sel.assign(static_cast<std::size_t>(rmax + 1), b);
      // h[a][1] would be the whole interval again; no chain ever reads it
      // (chains here have two or more blocks), so leave it unset.
      if (p > a) {
        if (ctx.rule == EndpointRule::support_end) {
          row[1] = at(p, b).value;
          sel[1] = b;
        } else {
          int arg = p;
          for (int e = p; e <= b; ++e)
            if (at(p, e).value > at(p, arg).value) arg = e;
          row[1] = at(p, arg).value;
          sel[1] = arg;
        }
      }
      for (int r = 2; r <= rmax; ++r) {
        std::optional<Rat> bestv;
        int arg = p;
        for (int e = p; e <= b - r + 1; ++e) {
          const Rat cand =
              at(p, e).value + h[static_cast<std::size_t>(e + 1 - a)]
                                [static_cast<std::size_t>(r - 1)];
          if (!bestv || cand > *bestv) {
            bestv = cand;
            arg = e;
          }
        }
        row[static_cast<std::size_t>(r)] = *bestv;
        sel[static_cast<std::size_t>(r)] = arg;
      }
    }

    for (int q = a; q <= b; ++q) {
      const int kmax = std::min<long long>(
          ctx.s[static_cast<std::size_t>(q)], b - q + 1);
      for (int k = 2; k <= kmax; ++k) {
        const Rat cand = h[static_cast<std::size_t>(q - a)]
                          [static_cast<std::size_t>(k)] /
                         2;
        if (cand <= node.value) continue;
        PartitionNode inner;
        inner.value = cand;
        inner.leaf = false;
        int p = q;
        for (int r = k; r >= 1; --r) {
          const int e =
              pick[static_cast<std::size_t>(p - a)][static_cast<std::size_t>(r)];
          inner.cuts.push_back(ctx.s[static_cast<std::size_t>(p)]);
          inner.blocks.push_back(at(p, e));
          p = e + 1;
        }
        node = std::move(inner);
      }
    }
    return node;
  }
};

int witness_depth(const PartitionNode& w) {
  int best = 0;
  for (const PartitionNode& b : w.blocks)
    best = std::max(best, witness_depth(b));
  return w.leaf ? 0 : best + 1;
}

struct MemoSolver {
  const TsirelsonContext& ctx;
  std::vector<Rat> v;
  int iterations = 0;

  int id(int a, int b) const { return a * ctx.t() + b; }

  // h table for one right endpoint, computed from a value snapshot.
  std::pair<std::vector<std::vector<Rat>>, std::vector<std::vector<int>>>
  chain_table(int b, const std::vector<Rat>& val) const {
    std::vector<std::vector<Rat>> h(static_cast<std::size_t>(b + 1));
    std::vector<std::vector<int>> pick(static_cast<std::size_t>(b + 1));
    for (int p = b; p >= 0; --p) {
      const int rmax = b - p + 1;
      auto& row = h[static_cast<std::size_t>(p)];
      auto& sel = pick[static_cast<std::size_t>(p)];
      row.assign(static_cast<std::size_t>(rmax + 1), Rat(0));
      sel.assign(static_cast<std::size_t>(rmax + 1), b);
      if (ctx.rule == EndpointRule::support_end) {
        row[1] = val[static_cast<std::size_t>(id(p, b))];
        sel[1] = b;
      } else {
        int arg = p;
        for (int e = p; e <= b; ++e)
          if (val[static_cast<std::size_t>(id(p, e))] >
              val[static_cast<std::size_t>(id(p, arg))])
            arg = e;
        row[1] = val[static_cast<std::size_t>(id(p, arg))];
        sel[1] = arg;
      }
      for (int r = 2; r <= rmax; ++r) {
        std::optional<Rat> bestv;
        int arg = p;
        for (int e = p; e <= b - r + 1; ++e) {
          const Rat cand = val[static_cast<std::size_t>(id(p, e))] +
                           h[static_cast<std::size_t>(e + 1)]
                            [static_cast<std::size_t>(r - 1)];
          if (!bestv || cand > *bestv) {
            bestv = cand;
            arg = e;
          }
        }
        row[static_cast<std::size_t>(r)] = *bestv;
        sel[static_cast<std::size_t>(r)] = arg;
      }
    }
    return {std::move(h), std::move(pick)};
  }

  void run() {
    const int t = ctx.t();
    v = ctx.base_value;
    // Level iteration: each sweep applies the defining equation to every
    // interval against the previous sweep's values; values only grow and
    // live in the finite set of half-scaled signed subset sums, so a
    // quiescent sweep arrives.
    for (int m = 1;; ++m) {
      std::vector<Rat> next = v;
      bool changed = false;
      for (int b = 0; b < t; ++b) {
        const auto h = chain_table(b, v).first;
        for (int a = 0; a <= b; ++a) {
          std::optional<Rat> best;
          for (int q = a; q <= b; ++q) {
            const int kmax = std::min<long long>(
                ctx.s[static_cast<std::size_t>(q)], b - q + 1);
            for (int k = 2; k <= kmax; ++k) {
              const Rat& cand =
                  h[static_cast<std::size_t>(q)][static_cast<std::size_t>(k)];
              if (!best || cand > *best) best = cand;
            }
          }
          if (!best) continue;
          const Rat cand = *best / 2;
          auto& slot = next[static_cast<std::size_t>(id(a, b))];
          if (cand > slot) {
            slot = cand;
            changed = true;
          }
        }
      }
      if (!changed) {
        iterations = m;
        return;
      }
      v = std::move(next);
    }
  }

  PartitionNode build(int a, int b) const {
    const Rat& target = v[static_cast<std::size_t>(id(a, b))];
    if (target == ctx.base(a, b)) {
      PartitionNode leaf;
      leaf.value = target;
      leaf.base_witness = ctx.base_member(a, b);
      return leaf;
    }
    const auto [h, pick] = chain_table(b, v);
    for (int q = a; q <= b; ++q) {
      const int kmax = std::min<long long>(
          ctx.s[static_cast<std::size_t>(q)], b - q + 1);
      for (int k = 2; k <= kmax; ++k) {
        if (h[static_cast<std::size_t>(q)][static_cast<std::size_t>(k)] !=
            target * 2)
          continue;
        PartitionNode inner;
        inner.value = target;
        inner.leaf = false;
        int p = q;
        for (int r = k; r >= 1; --r) {
          const int e =
              pick[static_cast<std::size_t>(p)][static_cast<std::size_t>(r)];
          inner.cuts.push_back(ctx.s[static_cast<std::size_t>(p)]);
          inner.blocks.push_back(build(p, e));
          p = e + 1;
        }
        return inner;
      }
    }
    throw std::logic_error("tsirelson: stable table lost its witness");
  }
};

}  // namespace

NormResult tsirelson_norm(const Ordinal& alpha, const CoeffVec& x,
                          NormEngine engine, EndpointRule rule,
                          std::size_t interval_cap) {
  NormResult out;
  if (x.zero()) {
    out.value = 0;
    out.witness.value = 0;
    return out;
  }
  TsirelsonContext ctx;
  for (const auto& [n, c] : x.entries()) {
    ctx.s.push_back(n);
    ctx.coeff.push_back(c);
  }
  ctx.alpha = alpha;
  ctx.rule = rule;
  ctx.x = x;
  const std::size_t t = ctx.s.size();
  if (t * (t + 1) / 2 > interval_cap)
    throw ResourceCapError("tsirelson: interval cap exceeded");
  ctx.tabulate_bases();

  if (engine == NormEngine::naive) {
    NaiveSolver solver{ctx};
    out.witness = solver.solve(0, ctx.t() - 1);
    out.value = out.witness.value;
    out.iterations = witness_depth(out.witness);
    return out;
  }
  MemoSolver solver{ctx};
  solver.run();
  out.witness = solver.build(0, ctx.t() - 1);
  out.value = out.witness.value;
  out.iterations = solver.iterations;
  return out;
}

BlockCheckReport block_l1_lower_check(const Ordinal& alpha,
                                      const std::vector<CoeffVec>& blocks,
                                      const std::vector<Rat>& coeffs) {
  const std::size_t k = blocks.size();
  if (k == 0 || coeffs.size() != k)
    throw PreconditionError("block check: need matching blocks and coefficients");
  FinSet seen;
  for (const CoeffVec& b : blocks) {
    if (b.zero()) throw PreconditionError("block check: zero block");
    const FinSet supp = b.support();
    if (supp.min() <= static_cast<int>(k))
      throw PreconditionError("block check: blocks must live past their count");
    for (int n : supp.elems()) {
      if (seen.contains(n))
        throw PreconditionError("block check: blocks must be disjoint");
      seen = seen.with(n);
    }
  }
  CoeffVec x;
  for (std::size_t i = 0; i < k; ++i) {
    const Rat unit_norm =
        tsirelson_norm(alpha, blocks[i], NormEngine::memoized).value;
    x = x.plus(blocks[i].scaled(coeffs[i] / unit_norm));
  }
  BlockCheckReport report;
  report.value = tsirelson_norm(alpha, x, NormEngine::memoized).value;
  for (const Rat& c : coeffs) report.upper += rat_abs(c);
  report.lower = report.upper / 2;
  report.within = report.lower <= report.value && report.value <= report.upper;
  return report;
}

namespace {

void min_indicator_norm(const FamilySpec& spec, const std::vector<int>& cands,
                        std::size_t start, std::vector<int>& chosen, int k,
                        std::optional<Rat>& best) {
  if (static_cast<int>(chosen.size()) == k) {
    std::map<int, Rat> entries;
    for (int n : chosen) entries.emplace(n, Rat(1));
    const Rat value = family_norm(spec, CoeffVec(std::move(entries))).value;
    if (!best || value < *best) best = value;
    return;
  }
  const std::size_t need = static_cast<std::size_t>(k) - chosen.size();
  for (std::size_t i = start; i + need <= cands.size(); ++i) {
    chosen.push_back(cands[i]);
    min_indicator_norm(spec, cands, i + 1, chosen, k, best);
    chosen.pop_back();
  }
}

}  // namespace

Rat l1_sp_estimate(const FamilySpec& spec, const std::vector<int>& window,
                   int k, int m) {
  if (k < 1) throw PreconditionError("sp estimate: k must be >= 1");
  std::vector<int> cands;
  for (int n : window) {
    if (n < 1) throw PreconditionError("sp estimate: indices must be >= 1");
    if (n >= m) cands.push_back(n);
  }
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  if (static_cast<int>(cands.size()) < k)
    throw PreconditionError("sp estimate: window smaller than k");
  std::optional<Rat> best;
  std::vector<int> chosen;
  min_indicator_norm(spec, cands, 0, chosen, k, best);
  return *best / k;
}

L1Certificate boolean_l1_certify(
    const std::vector<std::vector<Rat>>& functions, const Rat& r,
    const Rat& delta) {
  if (delta <= 0)
    throw PreconditionError("l1 certify: delta must be positive");
  if (functions.empty())
    throw PreconditionError("l1 certify: need at least one function");
  const std::size_t npoints = functions.front().size();
  if (npoints == 0)
    throw PreconditionError("l1 certify: empty point set");
  for (const auto& f : functions)
    if (f.size() != npoints)
      throw PreconditionError("l1 certify: functions disagree on the points");
  const int m = static_cast<int>(functions.size());
  if (m > 20) throw PreconditionError("l1 certify: too many functions");

  L1Certificate cert;
  cert.constant = Rat(2) / delta;

  std::vector<BooleanPair> pairs(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    for (std::size_t p = 0; p < npoints; ++p) {
      const Rat& fv = functions[static_cast<std::size_t>(i)][p];
      if (fv >= r + delta) pairs[static_cast<std::size_t>(i)].a.insert(static_cast<int>(p));
      if (fv <= r) pairs[static_cast<std::size_t>(i)].b.insert(static_cast<int>(p));
    }

  std::vector<int> full;
  for (int i = 1; i <= m; ++i) full.push_back(i);
  cert.hypothesis_ok = boolean_tree(pairs, m).tree.contains(full);
  if (!cert.hypothesis_ok) {
    // Locate one dead sign choice to report.
    for (unsigned eps = 0; eps < (1u << m); ++eps) {
      bool alive = false;
      for (std::size_t p = 0; p < npoints && !alive; ++p) {
        bool ok = true;
        for (int i = 0; i < m && ok; ++i) {
          const auto& side = (eps >> i) & 1u
                                 ? pairs[static_cast<std::size_t>(i)].a
                                 : pairs[static_cast<std::size_t>(i)].b;
          ok = side.count(static_cast<int>(p)) != 0;
        }
        alive = ok;
      }
      if (!alive) {
        for (int i = 0; i < m; ++i)
          cert.dead_pattern.push_back((eps >> i) & 1u ? 1 : -1);
        break;
      }
    }
    return cert;
  }

  auto lower_holds = [&](const std::vector<Rat>& a) {
    Rat mass(0);
    for (const Rat& c : a) mass += rat_abs(c);
    if (mass == 0) return true;
    Rat best(0);
    for (std::size_t p = 0; p < npoints; ++p) {
      Rat sum(0);
      for (int i = 0; i < m; ++i)
        sum += a[static_cast<std::size_t>(i)] *
               functions[static_cast<std::size_t>(i)][p];
      best = std::max(best, rat_abs(sum));
    }
    return best * 2 >= delta * mass;
  };

  cert.conclusion_ok = true;
  for (unsigned eps = 0; eps < (1u << m); ++eps) {
    std::vector<Rat> a(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
      a[static_cast<std::size_t>(i)] = (eps >> i) & 1u ? Rat(1) : Rat(-1);
    if (!lower_holds(a)) cert.conclusion_ok = false;
    ++cert.sign_patterns_checked;
  }
  std::mt19937_64 rng(0x5eed);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Rat> a(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      const long long num = static_cast<long long>(rng() % 17) - 8;
      const long long den = static_cast<long long>(rng() % 4) + 1;
      a[static_cast<std::size_t>(i)] = Rat(num) / den;
    }
    if (!lower_holds(a)) cert.conclusion_ok = false;
    ++cert.random_trials_checked;
  }
  return cert;
}

Rat perturbation_bound(const Rat& delta, const Rat& y_norm, const Rat& dist) {
  if (delta <= 0)
    throw PreconditionError("perturbation bound: delta must be positive");
  if (y_norm < 0 || y_norm > 1)
    throw PreconditionError("perturbation bound: the norm must lie in [0,1]");
  if (dist < 0)
    throw PreconditionError("perturbation bound: distance must be >= 0");
  return std::max(Rat(delta * dist / 2), Rat(delta - y_norm));
}

}  // namespace schreier
