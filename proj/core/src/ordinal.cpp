#include "schreier/ordinal.hpp"

#include <limits>
#include <utility>

#include "schreier/errors.hpp"

namespace schreier {

Ordinal::Ordinal() = default;
Ordinal::Ordinal(const Ordinal&) = default;
Ordinal::Ordinal(Ordinal&&) noexcept = default;
Ordinal& Ordinal::operator=(const Ordinal&) = default;
Ordinal& Ordinal::operator=(Ordinal&&) noexcept = default;
Ordinal::~Ordinal() = default;

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (a > std::numeric_limits<std::uint64_t>::max() - b)
    throw std::overflow_error("ordinal coefficient overflow");
  return a + b;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (b != 0 && a > std::numeric_limits<std::uint64_t>::max() / b)
    throw std::overflow_error("ordinal coefficient overflow");
  return a * b;
}

}  // namespace

Ordinal Ordinal::nat(std::uint64_t n) {
  Ordinal a;
  if (n > 0) a.terms_.push_back(Term{Ordinal(), n});
  return a;
}

Ordinal Ordinal::omega() { return omega_pow(nat(1)); }

Ordinal Ordinal::from_terms(std::vector<Term> terms) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].coefficient == 0)
      throw ParseError("ordinal term with zero coefficient");
    if (i > 0 && !(terms[i].exponent < terms[i - 1].exponent))
      throw ParseError("ordinal not in normal form: exponents must decrease");
  }
  Ordinal a;
  a.terms_ = std::move(terms);
  return a;
}

bool Ordinal::is_nat() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero());
}

std::uint64_t Ordinal::as_nat() const {
  if (!is_nat()) throw PreconditionError("as_nat: ordinal is not finite");
  return terms_.empty() ? 0 : terms_[0].coefficient;
}

std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
  const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto c = a.terms_[i].exponent <=> b.terms_[i].exponent;
    if (c != 0) return c;
    auto d = a.terms_[i].coefficient <=> b.terms_[i].coefficient;
    if (d != 0) return d;
  }
  return a.terms_.size() <=> b.terms_.size();
}

bool operator==(const Ordinal& a, const Ordinal& b) {
  return (a <=> b) == std::strong_ordering::equal;
}

OrdinalKind classify(const Ordinal& a) {
  if (a.is_zero()) return OrdinalKind::zero;
  return a.terms().back().exponent.is_zero() ? OrdinalKind::successor
                                             : OrdinalKind::limit;
}

Ordinal add(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return b;
  const Ordinal& lead = b.terms_[0].exponent;
  Ordinal r;
  std::size_t i = 0;
  while (i < a.terms_.size() && lead < a.terms_[i].exponent)
    r.terms_.push_back(a.terms_[i++]);
  r.terms_.push_back(b.terms_[0]);
  if (i < a.terms_.size() && a.terms_[i].exponent == lead)
    r.terms_.back().coefficient =
        checked_add(r.terms_.back().coefficient, a.terms_[i].coefficient);
  r.terms_.insert(r.terms_.end(), b.terms_.begin() + 1, b.terms_.end());
  return r;
}

Ordinal omega_pow(const Ordinal& exponent) {
  Ordinal a;
  a.terms_.push_back(Ordinal::Term{exponent, 1});
  return a;
}

Ordinal successor(const Ordinal& a) { return add(a, Ordinal::nat(1)); }

Ordinal predecessor(const Ordinal& a) {
  if (classify(a) != OrdinalKind::successor)
    throw PreconditionError("predecessor: not a successor ordinal");
  Ordinal r = a;
  if (--r.terms_.back().coefficient == 0) r.terms_.pop_back();
  return r;
}

Ordinal nat_mul(const Ordinal& a, std::uint64_t n) {
  if (n == 0 || a.is_zero()) return Ordinal();
  Ordinal r = a;
  r.terms_[0].coefficient = checked_mul(r.terms_[0].coefficient, n);
  return r;
}

Ordinal fundamental_seq(const Ordinal& a, std::uint64_t i) {
  if (classify(a) != OrdinalKind::limit)
    throw PreconditionError("fundamental_seq: not a limit ordinal");
  if (i == 0) throw PreconditionError("fundamental_seq: index must be >= 1");
  Ordinal prefix = a;
  Ordinal::Term last = prefix.terms_.back();
  prefix.terms_.pop_back();
  if (last.coefficient > 1) {
    // c + w^(g)*k  ->  c + w^(g)*(k-1) + (w^(g))[i]
    Ordinal mid = omega_pow(last.exponent);
    mid.terms_[0].coefficient = last.coefficient - 1;
    return add(add(prefix, mid), fundamental_seq(omega_pow(last.exponent), i));
  }
  if (classify(last.exponent) == OrdinalKind::successor) {
    // c + w^(g+1)  ->  c + w^(g)*i
    Ordinal step = omega_pow(predecessor(last.exponent));
    step.terms_[0].coefficient = i;
    return add(prefix, step);
  }
  // c + w^(g), g limit  ->  c + w^(g[i])
  return add(prefix, omega_pow(fundamental_seq(last.exponent, i)));
}

Ordinal p_alpha(const Ordinal& a) {
  if (a.is_zero()) throw PreconditionError("p_alpha: zero has no leading term");
  Ordinal r;
  r.terms_.push_back(a.terms_[0]);
  return r;
}

Ordinal half(const Ordinal& a) {
  if (a.is_zero()) throw PreconditionError("half: undefined at zero");
  Ordinal r;
  r.terms_.push_back(a.terms_[0]);
  r.terms_[0].coefficient = (r.terms_[0].coefficient + 1) / 2;
  return r;
}

// ---- text form ----

namespace {

void render_into(const Ordinal& a, std::string& out) {
  if (a.is_zero()) {
    out += '0';
    return;
  }
  bool first = true;
  for (const auto& t : a.terms()) {
    if (!first) out += '+';
    first = false;
    if (t.exponent.is_zero()) {
      out += std::to_string(t.coefficient);
      continue;
    }
    if (t.exponent == Ordinal::nat(1)) {
      out += 'w';
    } else {
      out += "w^(";
      render_into(t.exponent, out);
      out += ')';
    }
    if (t.coefficient != 1) {
      out += '*';
      out += std::to_string(t.coefficient);
    }
  }
}

class OrdinalParser {
 public:
  explicit OrdinalParser(std::string_view text) : text_(text) {}

  Ordinal parse_all() {
    Ordinal a = parse_ordinal();
    if (pos_ != text_.size())
      throw ParseError("ordinal: trailing input at offset " +
                       std::to_string(pos_));
    return a;
  }

 private:
  Ordinal parse_ordinal() {
    if (peek() == '0' && !(pos_ + 1 < text_.size() && is_digit(text_[pos_ + 1]))) {
      ++pos_;
      return Ordinal();
    }
    std::vector<Ordinal::Term> terms;
    terms.push_back(parse_term());
    while (pos_ < text_.size() && peek() == '+') {
      ++pos_;
      terms.push_back(parse_term());
    }
    return Ordinal::from_terms(std::move(terms));
  }

  Ordinal::Term parse_term() {
    if (is_digit(peek())) {
      std::uint64_t n = parse_nat();
      if (n == 0) throw ParseError("ordinal: zero term in a sum");
      return {Ordinal(), n};
    }
    if (peek() != 'w') throw ParseError("ordinal: expected term at offset " +
                                        std::to_string(pos_));
    ++pos_;
    Ordinal exponent = Ordinal::nat(1);
    if (pos_ < text_.size() && peek() == '^') {
      ++pos_;
      expect('(');
      exponent = parse_ordinal();
      expect(')');
    }
    std::uint64_t coeff = 1;
    if (pos_ < text_.size() && peek() == '*') {
      ++pos_;
      coeff = parse_nat();
      if (coeff == 0) throw ParseError("ordinal: zero coefficient");
    }
    if (exponent.is_zero()) return {Ordinal(), coeff};  // w^(0) spelled out
    return {exponent, coeff};
  }

  std::uint64_t parse_nat() {
    if (pos_ >= text_.size() || !is_digit(text_[pos_]))
      throw ParseError("ordinal: expected number at offset " +
                       std::to_string(pos_));
    if (text_[pos_] == '0' && pos_ + 1 < text_.size() && is_digit(text_[pos_ + 1]))
      throw ParseError("ordinal: leading zero at offset " + std::to_string(pos_));
    std::uint64_t v = 0;
    while (pos_ < text_.size() && is_digit(text_[pos_])) {
      std::uint64_t d = static_cast<std::uint64_t>(text_[pos_] - '0');
      if (v > (std::numeric_limits<std::uint64_t>::max() - d) / 10)
        throw ParseError("ordinal: number too large");
      v = v * 10 + d;
      ++pos_;
    }
    return v;
  }

  char peek() const {
    if (pos_ >= text_.size()) throw ParseError("ordinal: unexpected end");
    return text_[pos_];
  }

  void expect(char c) {
    if (pos_ >= text_.size() || text_[pos_] != c)
      throw ParseError(std::string("ordinal: expected '") + c + "' at offset " +
                       std::to_string(pos_));
    ++pos_;
  }

  static bool is_digit(char c) { return c >= '0' && c <= '9'; }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string render(const Ordinal& a) {
  std::string out;
  render_into(a, out);
  return out;
}

Ordinal parse_ordinal(std::string_view text) {
  if (text.empty()) throw ParseError("ordinal: empty input");
  return OrdinalParser(text).parse_all();
}

}  // namespace schreier
