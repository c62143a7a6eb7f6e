#include "schreier/ordinal.hpp"

#include <string>
#include <vector>

#include "doctest.h"
#include "schreier/errors.hpp"
#include "test_util.hpp"

using namespace schreier;
using testutil::Rng;

namespace {

Ordinal o(const std::string& s) { return parse_ordinal(s); }

// Independent route for sums: concatenate the term lists, then normalize by
// local rewrites (drop a term dominated by a later larger exponent, merge
// equal neighbours) until no rule applies.
Ordinal rewrite_add(const Ordinal& a, const Ordinal& b) {
  std::vector<Ordinal::Term> ts(a.terms());
  ts.insert(ts.end(), b.terms().begin(), b.terms().end());
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
      if (ts[i].exponent < ts[i + 1].exponent) {
        ts.erase(ts.begin() + i);
        changed = true;
        break;
      }
      if (ts[i].exponent == ts[i + 1].exponent) {
        ts[i].coefficient += ts[i + 1].coefficient;
        ts.erase(ts.begin() + i + 1);
        changed = true;
        break;
      }
    }
  }
  return Ordinal::from_terms(std::move(ts));
}

}  // namespace

TEST_CASE("ordinal text form round trips") {
  const char* canonical[] = {
      "0", "1", "7", "w", "w*2", "w+1", "w^(2)*3+w*2+5", "w^(w)",
      "w^(w+1)*4+w^(3)+2", "w^(w^(w))", "w^(w*2+1)+w^(2)*9+w+13",
  };
  for (const char* s : canonical) {
    CAPTURE(s);
    CHECK(render(o(s)) == s);
  }
  CHECK(render(o("w^(1)")) == "w");  // normalized spelling
  CHECK(render(o("w^(1)*3")) == "w*3");
  CHECK(render(o("w^(0)*5")) == "5");

  Rng rng(101);
  for (int i = 0; i < 10000; ++i) {
    Ordinal a = testutil::random_ordinal(rng, 3);
    CHECK(parse_ordinal(render(a)) == a);
  }
}

TEST_CASE("ordinal parser rejects malformed input") {
  const char* bad[] = {
      "",    "x",    "w^2",     "w^(2",  "3+5",  "1+w",   "w+w",
      "0+1", "w*0",  "w^()*2",  "01",    "w**2", "5w",    "w^(2)+w^(2)",
      "+w",  "w+",   "w^(2)*",  " w",    "w ",   "w*-1",
  };
  for (const char* s : bad) {
    CAPTURE(s);
    CHECK_THROWS_AS(parse_ordinal(s), ParseError);
  }
}

TEST_CASE("comparison is the lexicographic CNF order") {
  CHECK(o("0") < o("1"));
  CHECK(o("3") < o("w"));
  CHECK(o("w") < o("w+1"));
  CHECK(o("w+1") < o("w*2"));
  CHECK(o("w*2") < o("w^(2)"));
  CHECK(o("w^(2)*3+w") < o("w^(2)*3+w*2+5"));
  CHECK(o("w^(2)*3+w*2+5") < o("w^(3)"));
  CHECK(o("w^(w)") < o("w^(w+1)"));
  CHECK(o("w^(w)*9+w^(3)") < o("w^(w)*10"));

  Rng rng(102);
  for (int i = 0; i < 2000; ++i) {
    Ordinal a = testutil::random_ordinal(rng, 2);
    Ordinal b = testutil::random_ordinal(rng, 2);
    Ordinal c = testutil::random_ordinal(rng, 2);
    // trichotomy
    int rel = (a < b) + (a == b) + (b < a);
    CHECK(rel == 1);
    // transitivity
    if (a <= b && b <= c) CHECK(a <= c);
  }
}

TEST_CASE("addition absorbs on the left") {
  CHECK(add(o("w^(2)+w*2"), o("w*5")) == o("w^(2)+w*7"));
  CHECK(add(o("3"), o("w")) == o("w"));
  CHECK(add(o("w"), o("3")) == o("w+3"));
  CHECK(add(o("w^(2)*3+w*2+5"), o("w^(2)")) == o("w^(2)*4"));
  CHECK(add(o("w+5"), o("0")) == o("w+5"));
  CHECK(add(o("0"), o("w+5")) == o("w+5"));

  Rng rng(103);
  for (int i = 0; i < 10000; ++i) {
    Ordinal a = testutil::random_ordinal(rng, 3);
    Ordinal b = testutil::random_ordinal(rng, 3);
    Ordinal c = testutil::random_ordinal(rng, 3);
    CHECK(add(a, b) == rewrite_add(a, b));
    CHECK(add(add(a, b), c) == add(a, add(b, c)));
    CHECK(add(a, Ordinal()) == a);
    CHECK(add(Ordinal(), a) == a);
    if (!b.is_zero()) CHECK(a < add(a, b));  // strictly increasing on the right
  }
}

TEST_CASE("classification splits zero, successors and limits") {
  CHECK(classify(o("0")) == OrdinalKind::zero);
  CHECK(classify(o("1")) == OrdinalKind::successor);
  CHECK(classify(o("w+3")) == OrdinalKind::successor);
  CHECK(classify(o("w")) == OrdinalKind::limit);
  CHECK(classify(o("w^(2)*3+w*2")) == OrdinalKind::limit);
  CHECK(predecessor(o("w+3")) == o("w+2"));
  CHECK(predecessor(o("1")) == o("0"));
  CHECK_THROWS_AS(predecessor(o("w")), PreconditionError);
  CHECK_THROWS_AS(predecessor(o("0")), PreconditionError);

  Rng rng(104);
  for (int i = 0; i < 5000; ++i) {
    Ordinal a = testutil::random_ordinal(rng, 3);
    if (classify(a) == OrdinalKind::successor)
      CHECK(successor(predecessor(a)) == a);
    else if (classify(a) == OrdinalKind::zero)
      CHECK(a.is_zero());
  }
}

TEST_CASE("fundamental sequences increase to their limit") {
  CHECK(fundamental_seq(o("w^(2)"), 2) == o("w*2"));
  CHECK(fundamental_seq(o("w^(w)"), 3) == o("w^(3)"));
  CHECK(fundamental_seq(o("w"), 5) == o("5"));
  CHECK(fundamental_seq(o("w*2"), 4) == o("w+4"));
  CHECK(fundamental_seq(o("w^(2)*3"), 2) == o("w^(2)*2+w*2"));
  CHECK(fundamental_seq(o("w^(w)+w^(2)"), 3) == o("w^(w)+w*3"));
  CHECK_THROWS_AS(fundamental_seq(o("w+1"), 2), PreconditionError);
  CHECK_THROWS_AS(fundamental_seq(o("w"), 0), PreconditionError);

  Rng rng(105);
  int limit_count = 0;
  while (limit_count < 500) {
    Ordinal a = testutil::random_ordinal(rng, 3);
    if (classify(a) != OrdinalKind::limit) continue;
    ++limit_count;
    Ordinal prev = fundamental_seq(a, 1);
    CHECK(prev < a);
    for (std::uint64_t i = 2; i <= 6; ++i) {
      Ordinal cur = fundamental_seq(a, i);
      CHECK(prev < cur);
      CHECK(cur < a);
      prev = cur;
    }
    // every strictly smaller ordinal is eventually dominated
    Ordinal b = testutil::random_below(rng, a);
    bool dominated = false;
    for (std::uint64_t i = 1; i <= 1000 && !dominated; ++i)
      dominated = b < fundamental_seq(a, i);
    CHECK(dominated);
  }
}

TEST_CASE("leading term and half") {
  struct Row {
    const char* a;
    const char* lead;
    const char* half;
  };
  // Frozen from the CNF rules: lead = w^(g1)*c1, half = w^(g1)*ceil(c1/2).
  static const Row table[] = {
      {"w^(2)*3+w*2+5", "w^(2)*3", "w^(2)*2"},
      {"7", "7", "4"},
      {"w", "w", "w"},
      {"6", "6", "3"},
      {"w^(w^(w^(6)*4)*4+w)*7+w^(8)*3+w^(6)*6+5", "w^(w^(w^(6)*4)*4+w)*7", "w^(w^(w^(6)*4)*4+w)*4"},
      {"w^(w^(4))*7+w*6", "w^(w^(4))*7", "w^(w^(4))*4"},
      {"w^(w^(w^(6)+w)*2)*2+w^(w^(6)*2+w*2)+w^(7)*4+8", "w^(w^(w^(6)+w)*2)*2", "w^(w^(w^(6)+w)*2)"},
      {"w^(9)*9+w^(4)", "w^(9)*9", "w^(9)*5"},
      {"w^(w^(3)*4)*2+w^(w*3)*9+8", "w^(w^(3)*4)*2", "w^(w^(3)*4)"},
      {"w^(w^(5)*3+w)*6+2", "w^(w^(5)*3+w)*6", "w^(w^(5)*3+w)*3"},
      {"w^(w^(3))*5", "w^(w^(3))*5", "w^(w^(3))*3"},
      {"w^(5)*3+3", "w^(5)*3", "w^(5)*2"},
      {"w^(w^(9)*5+w*2)*2+w^(9)*9", "w^(w^(9)*5+w*2)*2", "w^(w^(9)*5+w*2)"},
      {"w^(w^(w*4+2)*3)*2+w^(w^(6)*5)+w^(w^(4)*5+w*2)*8+6", "w^(w^(w*4+2)*3)*2", "w^(w^(w*4+2)*3)"},
      {"w^(w^(w^(3)*2))*6+w^(8)+w^(2)", "w^(w^(w^(3)*2))*6", "w^(w^(w^(3)*2))*3"},
      {"w^(w^(w*3+4)*4)*4+w^(6)*8+w^(5)+3", "w^(w^(w*3+4)*4)*4", "w^(w^(w*3+4)*4)*2"},
      {"w^(w^(w^(7)*3)*3+w*3)*6+5", "w^(w^(w^(7)*3)*3+w*3)*6", "w^(w^(w^(7)*3)*3+w*3)*3"},
      {"w^(w^(w^(3)*2))*6+w^(w^(7)*5)*8", "w^(w^(w^(3)*2))*6", "w^(w^(w^(3)*2))*3"},
      {"w^(5)*3", "w^(5)*3", "w^(5)*2"},
      {"w^(3)*6+9", "w^(3)*6", "w^(3)*3"},
      {"w^(4)*9+6", "w^(4)*9", "w^(4)*5"},
      {"w^(8)+8", "w^(8)", "w^(8)"},
      {"w^(w^(w^(4)*3)*2+w*4)*3+w^(7)*3", "w^(w^(w^(4)*3)*2+w*4)*3", "w^(w^(w^(4)*3)*2+w*4)*2"},
      {"w^(w^(2)*2+w)*8+w^(9)", "w^(w^(2)*2+w)*8", "w^(w^(2)*2+w)*4"},
      {"w^(w^(4)*2)*9+w^(8)*3", "w^(w^(4)*2)*9", "w^(w^(4)*2)*5"},
      {"w^(w^(w^(7)*5))*6+w^(w^(8)+w*4)*7+w^(5)*5", "w^(w^(w^(7)*5))*6", "w^(w^(w^(7)*5))*3"},
      {"w^(w^(5)+w*2)*4+w^(w^(4)*5)*8+3", "w^(w^(5)+w*2)*4", "w^(w^(5)+w*2)*2"},
      {"w^(w^(4)*3+w)*8+w^(2)*2", "w^(w^(4)*3+w)*8", "w^(w^(4)*3+w)*4"},
      {"w^(w*2+2)*4", "w^(w*2+2)*4", "w^(w*2+2)*2"},
      {"w^(w^(w*5+3)*3+w*4)*9+w^(9)*8+w^(3)*7", "w^(w^(w*5+3)*3+w*4)*9", "w^(w^(w*5+3)*3+w*4)*5"},
      {"w^(6)*8", "w^(6)*8", "w^(6)*4"},
      {"w^(w^(8)*4)*6+w^(w*4+5)*6+w^(4)*6", "w^(w^(8)*4)*6", "w^(w^(8)*4)*3"},
      {"w^(w^(9)*5)*9+w^(7)*6+w^(6)*9+5", "w^(w^(9)*5)*9", "w^(w^(9)*5)*5"},
      {"w^(w^(6))*9+w^(2)*4+w*5+7", "w^(w^(6))*9", "w^(w^(6))*5"},
      {"w^(7)*7+w^(3)*9", "w^(7)*7", "w^(7)*4"},
      {"w^(7)*9+7", "w^(7)*9", "w^(7)*5"},
      {"w^(w^(3)*2)*8", "w^(w^(3)*2)*8", "w^(w^(3)*2)*4"},
      {"w^(w^(9)*2)*4+w^(6)*4+w^(3)*7", "w^(w^(9)*2)*4", "w^(w^(9)*2)*2"},
      {"w^(w^(7))*3+w^(8)*4+5", "w^(w^(7))*3", "w^(w^(7))*2"},
      {"w*8+1", "w*8", "w*4"},
      {"w^(w^(6)*4+w*3)*8", "w^(w^(6)*4+w*3)*8", "w^(w^(6)*4+w*3)*4"},
      {"w^(5)*3+w^(2)*8+w*2", "w^(5)*3", "w^(5)*2"},
      {"w^(w^(w^(9)*5+w*2)*3+w*4)*7+w^(w^(5)*2+w*5)*6", "w^(w^(w^(9)*5+w*2)*3+w*4)*7", "w^(w^(w^(9)*5+w*2)*3+w*4)*4"},
      {"w^(6)*8+w*2+8", "w^(6)*8", "w^(6)*4"},
      {"w^(w^(w^(9)*3)*4)*9+w^(w^(w^(3)*5)*5)*7+w^(4)*9", "w^(w^(w^(9)*3)*4)*9", "w^(w^(w^(9)*3)*4)*5"},
      {"w^(9)*7+w^(7)*5", "w^(9)*7", "w^(9)*4"},
      {"w^(w^(w^(7)*2)*2)*8+w^(w^(w^(3)*4)+w*5)+w^(w^(4)+w)*8+1", "w^(w^(w^(7)*2)*2)*8", "w^(w^(w^(7)*2)*2)*4"},
      {"w^(2)*4+2", "w^(2)*4", "w^(2)*2"},
      {"w^(w^(8))*5+w^(9)*2+8", "w^(w^(8))*5", "w^(w^(8))*3"},
      {"w^(3)", "w^(3)", "w^(3)"},
  };
  for (const auto& row : table) {
    CAPTURE(row.a);
    CHECK(render(p_alpha(o(row.a))) == row.lead);
    CHECK(render(half(o(row.a))) == row.half);
  }
  CHECK_THROWS_AS(p_alpha(o("0")), PreconditionError);
  CHECK_THROWS_AS(half(o("0")), PreconditionError);

  Rng rng(106);
  for (int i = 0; i < 5000; ++i) {
    Ordinal a = testutil::random_ordinal(rng, 3);
    if (a.is_zero()) continue;
    // leading-term stability under adding anything below w^(g1)
    Ordinal lead = p_alpha(a);
    Ordinal bound = omega_pow(a.terms()[0].exponent);
    Ordinal r = testutil::random_below(rng, bound);
    CHECK(p_alpha(add(lead, r)) == lead);
    CHECK(half(a) <= a);
    // doubling a single-term ordinal reaches it again
    CHECK(add(half(lead), half(lead)) >= lead);
  }
}

TEST_CASE("nat_mul scales the leading coefficient") {
  CHECK(nat_mul(o("w^(2)*2+w"), 2) == o("w^(2)*4+w"));
  CHECK(nat_mul(o("w"), 3) == o("w*3"));
  CHECK(nat_mul(o("5"), 4) == o("20"));
  CHECK(nat_mul(o("w+1"), 0) == o("0"));

  Rng rng(107);
  for (int i = 0; i < 2000; ++i) {
    Ordinal a = testutil::random_ordinal(rng, 2);
    // a*n = a + a + ... + a
    Ordinal sum;
    for (int k = 0; k < 4; ++k) sum = add(sum, a);
    CHECK(nat_mul(a, 4) == sum);
  }
}
