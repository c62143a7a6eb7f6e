#pragma once
// Ordinals below epsilon_0 in Cantor normal form:
//   a = w^(g1)*c1 + ... + w^(gr)*cr,  g1 > g2 > ... > gr,  ci >= 1.
// The empty sum is 0. Exponents are ordinals of the same kind, so the
// representation is a finite tree. All operations are exact.

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace schreier {

class Ordinal {
 public:
  struct Term;

  Ordinal();  // zero
  Ordinal(const Ordinal&);
  Ordinal(Ordinal&&) noexcept;
  Ordinal& operator=(const Ordinal&);
  Ordinal& operator=(Ordinal&&) noexcept;
  ~Ordinal();

  static Ordinal nat(std::uint64_t n);
  static Ordinal omega();
  // Validates the CNF invariant, throws ParseError on violation.
  static Ordinal from_terms(std::vector<Term> terms);

  bool is_zero() const { return terms_.empty(); }
  bool is_nat() const;
  std::uint64_t as_nat() const;  // requires is_nat()

  const std::vector<Term>& terms() const { return terms_; }

  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);
  friend bool operator==(const Ordinal& a, const Ordinal& b);

 private:
  friend Ordinal add(const Ordinal&, const Ordinal&);
  friend Ordinal omega_pow(const Ordinal&);
  friend Ordinal nat_mul(const Ordinal&, std::uint64_t);
  friend Ordinal fundamental_seq(const Ordinal&, std::uint64_t);
  friend Ordinal predecessor(const Ordinal&);
  friend Ordinal p_alpha(const Ordinal&);
  friend Ordinal half(const Ordinal&);

  std::vector<Term> terms_;
};

struct Ordinal::Term {
  Ordinal exponent;
  std::uint64_t coefficient = 1;
};

enum class OrdinalKind { zero, successor, limit };

OrdinalKind classify(const Ordinal& a);

// a + b with left absorption of the terms of a below the leading term of b.
Ordinal add(const Ordinal& a, const Ordinal& b);

Ordinal omega_pow(const Ordinal& exponent);  // w^exponent
Ordinal successor(const Ordinal& a);         // a + 1
Ordinal predecessor(const Ordinal& a);       // requires classify(a) == successor

// a*n as ordinal product by a natural, n >= 0: scales the leading coefficient.
Ordinal nat_mul(const Ordinal& a, std::uint64_t n);

// Canonical sequence a[i] increasing to the limit a, defined for i >= 1:
//   c + w^(g+1)      -> c + w^(g)*i
//   c + w^(g), g lim -> c + w^(g[i])
//   c + w^(g)*k, k>1 -> c + w^(g)*(k-1) + (w^(g))[i]
Ordinal fundamental_seq(const Ordinal& a, std::uint64_t i);

// Leading CNF term w^(g1)*c1 of a > 0.
Ordinal p_alpha(const Ordinal& a);

// For a = w^(g)*k + rest > 0: w^(g)*ceil(k/2).
Ordinal half(const Ordinal& a);

// Text form, grammar:
//   ordinal := "0" | term ("+" term)*
//   term    := nat | "w" ["*" nat] | "w^(" ordinal ")" ["*" nat]
// render emits the canonical spelling (exponent 1 as "w", coefficient 1
// omitted); parse_ordinal also accepts "w^(1)" and "*1" but rejects sums
// that are not in normal form.
std::string render(const Ordinal& a);
Ordinal parse_ordinal(std::string_view text);

}  // namespace schreier
