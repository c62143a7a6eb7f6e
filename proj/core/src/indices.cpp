#include "schreier/indices.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace schreier {

IndicatorSeq::IndicatorSeq(FamilySpec family) : family_(std::move(family)) {
  if (!is_adequate(family_))
    throw PreconditionError("indicator sequence: the family is not adequate");
}

namespace {

void check_epsilon(const Rat& epsilon) {
  if (epsilon <= 0 || epsilon >= 1)
    throw PreconditionError("oscillation: epsilon must lie strictly in (0,1)");
}

int ground_hint(const FamilySpec& spec) {
  if (const auto* ex = std::get_if<ExplicitFamily>(&spec))
    return ex->ground_max();
  return 0;
}

// One probe index standing in for "all large n". Membership this deep
// depends on the probe only through "large enough": the probed predicate is
// monotone in the probe for spreading families, and the margin below clears
// every finite-rank threshold the remaining k levels can pose. For a finite
// ground the probe lands past it, where the tail condition is honestly
// false.
int probe_for(const FinSet& f, int hint, int k) {
  const int base = std::max({f.empty() ? 0 : f.max(), hint, f.size() + k});
  return base + k + 2;
}

bool osc_direct(const FamilySpec& spec, int hint, const FinSet& f, int k) {
  if (k == 0) return member(spec, f);
  if (!osc_direct(spec, hint, f, k - 1)) return false;
  return osc_direct(spec, hint, f.with(probe_for(f, hint, k)), k - 1);
}

}  // namespace

bool oscillation_membership(const IndicatorSeq& seq, const FinSet& f,
                            const Ordinal& lambda, const Rat& epsilon,
                            OscMode mode) {
  check_epsilon(epsilon);
  if (!member(seq.family(), f))
    throw NotAMemberError("oscillation: the set is not a member");
  if (mode == OscMode::symbolic) return in_derivative(seq.family(), f, lambda);
  if (!lambda.is_nat())
    throw PreconditionError("oscillation: direct mode needs a finite level");
  const std::uint64_t k = lambda.as_nat();
  if (k > 16)
    throw PreconditionError("oscillation: direct mode level too deep");
  return osc_direct(seq.family(), ground_hint(seq.family()), f,
                    static_cast<int>(k));
}

Ordinal oscillation_index(const IndicatorSeq& seq) {
  return cb_rank(seq.family(), FinSet{});
}

namespace {

struct TreeBuilder {
  const FamilySpec& fam;
  int width;
  int search_span;
  int next_free = 1;
  std::set<std::vector<DiffPair>> nodes;
  std::vector<L1Branch> branches;
  std::vector<DiffPair> path;
  std::vector<int> his;

  void finalize_branch() {
    L1Branch branch;
    branch.pairs = path;
    branch.full_member = FinSet(his);
    const int d = static_cast<int>(his.size());
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
      std::vector<int> elems;
      for (int i = 0; i < d; ++i)
        if ((mask >> i) & 1u) elems.push_back(his[static_cast<std::size_t>(i)]);
      branch.points.push_back(FinSet(std::move(elems)));
    }
    std::vector<std::vector<Rat>> rows(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
      std::vector<FinSet> a_pts, b_pts;
      for (const FinSet& p : branch.points) {
        const bool hit = p.contains(his[static_cast<std::size_t>(i)]);
        rows[static_cast<std::size_t>(i)].push_back(Rat(hit ? 1 : 0));
        (hit ? a_pts : b_pts).push_back(p);
      }
      branch.a_side.push_back(std::move(a_pts));
      branch.b_side.push_back(std::move(b_pts));
    }
    branch.certificate = boolean_l1_certify(rows, Rat(0), Rat(1) / 2);
    branches.push_back(std::move(branch));
  }

  void grow(const FinSet& f, int remaining, int level) {
    if (remaining == 0) {
      finalize_branch();
      return;
    }
    for (int child = 0; child < width; ++child) {
      int n = -1;
      for (int cand = next_free; cand < next_free + search_span; ++cand) {
        if (in_derivative(fam, f.with(cand), Ordinal::nat(
                              static_cast<std::uint64_t>(remaining - 1)))) {
          n = cand;
          break;
        }
      }
      if (n < 0)
        throw PreconditionError(
            "l1 tree: no witness extension at level " + std::to_string(level));
      const int m = n + 1;
      next_free = n + 2;
      path.push_back(DiffPair{n, m});
      nodes.insert(path);
      his.push_back(n);
      grow(f.with(n), remaining - 1, level + 1);
      his.pop_back();
      path.pop_back();
    }
  }
};

}  // namespace

L1Tree build_l1_tree(const IndicatorSeq& seq, int order, const Rat& epsilon) {
  check_epsilon(epsilon);
  if (order < 1) throw PreconditionError("l1 tree: order must be >= 1");
  if (order > 8) throw PreconditionError("l1 tree: order too deep");
  if (!in_derivative(seq.family(), FinSet{},
                     Ordinal::nat(static_cast<std::uint64_t>(order))))
    throw PreconditionError(
        "l1 tree: the empty set does not survive " + std::to_string(order) +
        " derivative rounds");
  TreeBuilder builder{seq.family(), /*width=*/2, /*search_span=*/512};
  builder.grow(FinSet{}, order, 1);
  L1Tree out;
  out.tree = OrderTree<DiffPair>(std::move(builder.nodes));
  out.branches = std::move(builder.branches);
  out.gap = Rat(1) / 2;
  out.index_half = half(cb_rank(seq.family(), FinSet{}));
  return out;
}

namespace {

// Right-end order: open at h sits below closed at h.
bool right_end_less(const OrdinalInterval& a, const OrdinalInterval& b) {
  if (a.hi != b.hi) return a.hi < b.hi;
  return !a.closed_right && b.closed_right;
}

// Empty-aware normalization of one interval.
bool normalize_part(OrdinalInterval& p) {
  if (p.closed_right) return p.lo <= p.hi;
  if (!(p.lo < p.hi)) return false;
  if (classify(p.hi) == OrdinalKind::successor) {
    p.hi = predecessor(p.hi);
    p.closed_right = true;
    return p.lo <= p.hi;
  }
  return true;  // limit right end stays half-open
}

std::vector<OrdinalInterval> merge_sorted(std::vector<OrdinalInterval> parts) {
  std::sort(parts.begin(), parts.end(),
            [](const OrdinalInterval& a, const OrdinalInterval& b) {
              if (a.lo != b.lo) return a.lo < b.lo;
              return right_end_less(a, b);
            });
  std::vector<OrdinalInterval> out;
  for (const OrdinalInterval& p : parts) {
    if (out.empty()) {
      out.push_back(p);
      continue;
    }
    OrdinalInterval& cur = out.back();
    const bool touches = cur.closed_right ? p.lo <= add(cur.hi, Ordinal::nat(1))
                                          : p.lo <= cur.hi;
    if (!touches) {
      out.push_back(p);
      continue;
    }
    if (right_end_less(cur, p)) {
      cur.hi = p.hi;
      cur.closed_right = p.closed_right;
    }
  }
  return out;
}

}  // namespace

IntervalSet IntervalSet::from_parts(std::vector<OrdinalInterval> parts) {
  std::vector<OrdinalInterval> kept;
  for (OrdinalInterval& p : parts)
    if (normalize_part(p)) kept.push_back(p);
  IntervalSet out;
  out.parts_ = merge_sorted(std::move(kept));
  return out;
}

IntervalSet IntervalSet::closed(const Ordinal& lo, const Ordinal& hi) {
  if (hi < lo)
    throw PreconditionError("interval: closed needs lo <= hi");
  IntervalSet out;
  out.parts_.push_back({lo, hi, true});
  return out;
}

IntervalSet IntervalSet::half_open(const Ordinal& lo, const Ordinal& hi) {
  if (!(lo < hi))
    throw PreconditionError("interval: half-open needs lo < hi");
  OrdinalInterval p{lo, hi, false};
  IntervalSet out;
  if (normalize_part(p)) out.parts_.push_back(p);
  return out;
}

bool IntervalSet::contains(const Ordinal& x) const {
  for (const OrdinalInterval& p : parts_) {
    if (x < p.lo) return false;
    if (x < p.hi || (p.closed_right && x == p.hi)) return true;
  }
  return false;
}

IntervalSet IntervalSet::union_with(const IntervalSet& other) const {
  std::vector<OrdinalInterval> all = parts_;
  all.insert(all.end(), other.parts_.begin(), other.parts_.end());
  IntervalSet out;
  out.parts_ = merge_sorted(std::move(all));
  return out;
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
  std::vector<OrdinalInterval> hits;
  for (const OrdinalInterval& a : parts_)
    for (const OrdinalInterval& b : other.parts_) {
      OrdinalInterval cut;
      cut.lo = std::max(a.lo, b.lo);
      const OrdinalInterval& tight = right_end_less(a, b) ? a : b;
      cut.hi = tight.hi;
      cut.closed_right = tight.closed_right;
      if (cut.lo < cut.hi || (cut.closed_right && cut.lo == cut.hi))
        hits.push_back(cut);
    }
  return from_parts(std::move(hits));
}

IntervalSet IntervalSet::minus(const IntervalSet& other) const {
  std::vector<OrdinalInterval> work = parts_;
  for (const OrdinalInterval& b : other.parts_) {
    std::vector<OrdinalInterval> next;
    for (const OrdinalInterval& a : work) {
      // Points of a strictly below b.lo.
      if (a.lo < b.lo) {
        const OrdinalInterval below{a.lo, b.lo, false};
        OrdinalInterval left = right_end_less(a, below) ? a : below;
        left.lo = a.lo;
        if (normalize_part(left)) next.push_back(left);
      }
      // Points of a past b's right end (a half-open b misses its own hi).
      OrdinalInterval right{
          b.closed_right ? add(b.hi, Ordinal::nat(1)) : b.hi, a.hi,
          a.closed_right};
      if (right.lo < a.lo) right.lo = a.lo;
      if (normalize_part(right)) next.push_back(right);
    }
    work = std::move(next);
  }
  return from_parts(std::move(work));
}

IntervalSet IntervalSet::closure() const {
  std::vector<OrdinalInterval> parts = parts_;
  for (OrdinalInterval& p : parts) p.closed_right = true;
  return from_parts(std::move(parts));
}

bool IntervalSet::subset_of(const IntervalSet& other) const {
  return minus(other).empty();
}

std::string render(const IntervalSet& s) {
  if (s.empty()) return "{}";
  std::string out;
  for (const OrdinalInterval& p : s.parts()) {
    if (!out.empty()) out += ' ';
    out += '[' + render(p.lo) + ',' + render(p.hi) +
           (p.closed_right ? ']' : ')');
  }
  return out;
}

StepFn::StepFn(std::vector<StepPiece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty())
    throw PreconditionError("step fn: needs at least one piece");
  Ordinal expect;  // zero
  for (StepPiece& piece : pieces_) {
    OrdinalInterval& w = piece.where;
    if (!(w.lo == expect))
      throw PreconditionError("step fn: pieces do not tile from 0");
    if (w.closed_right) {
      if (w.hi < w.lo)
        throw PreconditionError("step fn: piece ends before it starts");
      expect = add(w.hi, Ordinal::nat(1));
    } else {
      if (!(w.lo < w.hi))
        throw PreconditionError("step fn: empty half-open piece");
      if (classify(w.hi) == OrdinalKind::successor) {
        w.hi = predecessor(w.hi);
        w.closed_right = true;
        expect = add(w.hi, Ordinal::nat(1));
      } else {
        expect = w.hi;
      }
    }
  }
  if (!pieces_.back().where.closed_right)
    throw PreconditionError("step fn: the last piece must be closed");
  top_ = pieces_.back().where.hi;
}

Rat StepFn::value_at(const Ordinal& x) const {
  for (const StepPiece& piece : pieces_) {
    const OrdinalInterval& w = piece.where;
    if (x < w.hi || (w.closed_right && x == w.hi)) return piece.value;
  }
  throw PreconditionError("step fn: the point lies past the top");
}

IntervalSet StepFn::level_le(const Rat& c) const {
  IntervalSet out;
  for (const StepPiece& piece : pieces_)
    if (piece.value <= c) {
      const OrdinalInterval& w = piece.where;
      out = out.union_with(w.closed_right
                               ? IntervalSet::closed(w.lo, w.hi)
                               : IntervalSet::half_open(w.lo, w.hi));
    }
  return out;
}

IntervalSet StepFn::level_ge(const Rat& d) const {
  IntervalSet out;
  for (const StepPiece& piece : pieces_)
    if (piece.value >= d) {
      const OrdinalInterval& w = piece.where;
      out = out.union_with(w.closed_right
                               ? IntervalSet::closed(w.lo, w.hi)
                               : IntervalSet::half_open(w.lo, w.hi));
    }
  return out;
}

StepFn parse_stepfn(std::string_view text) {
  std::vector<StepPiece> pieces;
  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = text.size();
    std::string_view line = text.substr(line_start, line_end - line_start);
    line_start = line_end + 1;
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t'))
      line.remove_prefix(1);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t' ||
                             line.back() == '\r'))
      line.remove_suffix(1);
    if (line.empty()) {
      if (line_start > text.size()) break;
      continue;
    }
    if (line.front() != '[')
      throw ParseError("step fn: piece must start with '['");
    line.remove_prefix(1);
    // Endpoints may contain parentheses; track depth to find the comma and
    // the closing bracket.
    int depth = 0;
    std::size_t comma = std::string_view::npos;
    std::size_t close = std::string_view::npos;
    bool closed_right = true;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char ch = line[i];
      if (ch == '(') ++depth;
      if (ch == ')' && depth > 0) {
        --depth;
        continue;
      }
      if (depth == 0) {
        if (ch == ',' && comma == std::string_view::npos) comma = i;
        if (ch == ']' || ch == ')') {
          close = i;
          closed_right = ch == ']';
          break;
        }
      }
    }
    if (comma == std::string_view::npos || close == std::string_view::npos ||
        close < comma)
      throw ParseError("step fn: malformed interval");
    const Ordinal lo = parse_ordinal(line.substr(0, comma));
    std::string_view hi_text = line.substr(comma + 1, close - comma - 1);
    while (!hi_text.empty() && hi_text.front() == ' ') hi_text.remove_prefix(1);
    while (!hi_text.empty() && hi_text.back() == ' ') hi_text.remove_suffix(1);
    const Ordinal hi = parse_ordinal(hi_text);
    std::string_view rest = line.substr(close + 1);
    while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
    if (rest.size() < 2 || rest[0] != '-' || rest[1] != '>')
      throw ParseError("step fn: expected '->' after the interval");
    rest.remove_prefix(2);
    while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
    if (rest.empty()) throw ParseError("step fn: missing value");
    Rat value;
    try {
      value = Rat(std::string(rest));
    } catch (const std::exception&) {
      throw ParseError("step fn: bad value '" + std::string(rest) + "'");
    }
    pieces.push_back({OrdinalInterval{lo, hi, closed_right}, value});
  }
  if (pieces.empty()) throw ParseError("step fn: no pieces");
  return StepFn(std::move(pieces));
}

std::string render(const StepFn& f) {
  std::string out;
  for (const StepPiece& piece : f.pieces()) {
    if (!out.empty()) out += '\n';
    out += '[' + render(piece.where.lo) + ',' + render(piece.where.hi) +
           (piece.where.closed_right ? "]" : ")") + " -> " +
           render(piece.value);
  }
  return out;
}

bool lavrentiev_chain_valid(const StepFn& f, const Rat& c, const Rat& d,
                            const std::vector<IntervalSet>& chain) {
  if (c >= d) throw PreconditionError("lavrentiev: needs c < d");
  if (chain.empty()) return false;
  const IntervalSet k = IntervalSet::closed(Ordinal(), f.top());
  if (!(chain.front() == k)) return false;
  if (!chain.back().empty()) return false;
  const IntervalSet cset = f.level_le(c);
  const IntervalSet dset = f.level_ge(d);
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (!(chain[i].closure() == chain[i])) return false;
    if (i + 1 == chain.size()) continue;
    if (!chain[i + 1].subset_of(chain[i])) return false;
    const IntervalSet diff = chain[i].minus(chain[i + 1]);
    if (!diff.intersect(cset).empty() && !diff.intersect(dset).empty())
      return false;
  }
  return true;
}

LavrentievResult lavrentiev_index(const StepFn& f, const Rat& c,
                                  const Rat& d) {
  if (c >= d) throw PreconditionError("lavrentiev: needs c < d");
  const IntervalSet cset = f.level_le(c);
  const IntervalSet dset = f.level_ge(d);
  const IntervalSet start = IntervalSet::closed(Ordinal(), f.top());

  // Shortest chain over the two canonical successors. Keeping exactly
  // F cap C (or cap D) and closing is the smallest legal step, and a
  // smaller set never lengthens the rest of the chain, so this search is
  // exact. It terminates: a nonempty closed set of ordinals has an isolated
  // point, which one of the two steps removes.
  std::map<std::string, std::pair<std::string, IntervalSet>> seen;
  std::deque<IntervalSet> queue;
  seen.emplace(render(start), std::make_pair(std::string(), start));
  queue.push_back(start);
  while (!queue.empty()) {
    const IntervalSet cur = queue.front();
    queue.pop_front();
    if (cur.empty()) break;
    const std::string cur_key = render(cur);
    for (const IntervalSet* side : {&cset, &dset}) {
      const IntervalSet next = cur.intersect(*side).closure();
      const std::string key = render(next);
      if (seen.count(key)) continue;
      seen.emplace(key, std::make_pair(cur_key, next));
      queue.push_back(next);
    }
  }
  if (!seen.count("{}"))
    throw std::logic_error("lavrentiev: search never reached the empty set");

  std::vector<IntervalSet> chain;
  for (std::string key = "{}"; !key.empty();) {
    const auto& [prev, set] = seen.at(key);
    chain.push_back(set);
    key = prev;
  }
  std::reverse(chain.begin(), chain.end());
  if (!lavrentiev_chain_valid(f, c, d, chain))
    throw std::logic_error("lavrentiev: engine produced an invalid chain");
  LavrentievResult out;
  out.index = Ordinal::nat(chain.size() - 1);
  out.chain = std::move(chain);
  return out;
}

ConsistencyReport index_consistency_report(const IndicatorSeq& seq,
                                           int finite_level, int window) {
  if (finite_level < 1)
    throw PreconditionError("consistency: finite_level must be >= 1");
  if (window < 1)
    throw PreconditionError("consistency: window must be >= 1");
  ConsistencyReport report;
  const Rat eps = Rat(1) / 2;

  for (int j = 1; j <= finite_level; ++j) {
    ConsistencyEntry entry;
    entry.claim = "derivative-survival-implies-sp";
    entry.instance = "level " + std::to_string(j);
    const bool osc = oscillation_membership(
        seq, FinSet{}, Ordinal::nat(static_cast<std::uint64_t>(j)), eps);
    if (!osc) {
      entry.pass = true;
      entry.detail = "level set empty; nothing to check";
    } else {
      std::vector<int> span;
      for (int n = j; n <= j + std::max(window, j); ++n) span.push_back(n);
      const Rat estimate = l1_sp_estimate(seq.family(), span, j, j);
      entry.pass = estimate >= 1 - Rat(1, 100);
      entry.detail = "estimate " + render(estimate);
    }
    report.entries.push_back(std::move(entry));
  }

  {
    ConsistencyEntry entry;
    entry.claim = "vanishing-tails-empty-oscillation";
    entry.instance = "truncation at " + std::to_string(window);
    const ExplicitFamily cut = restrict_family(seq.family(), window);
    const IndicatorSeq finite_seq{FamilySpec(cut)};
    int survivors = 0;
    for (const FinSet& f : cut.members())
      if (oscillation_membership(finite_seq, f, Ordinal::nat(1), eps,
                                 OscMode::direct))
        ++survivors;
    entry.pass = survivors == 0;
    entry.detail = std::to_string(cut.members().size()) + " members, " +
                   std::to_string(survivors) + " survivors";
    report.entries.push_back(std::move(entry));
  }

  for (const ConsistencyEntry& entry : report.entries)
    report.all_pass = report.all_pass && entry.pass;
  return report;
}

}  // namespace schreier
