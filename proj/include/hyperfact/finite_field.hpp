#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hyperfact/error.hpp"

namespace hyperfact {

// An element of GF(p^l), stored as its polynomial-basis coefficient vector
// packed in base p: value = c_0 + c_1 p + ... + c_{l-1} p^{l-1}.  The packed
// value doubles as the element's rank in the fixed enumeration of the field,
// so comparing elements compares coefficient vectors from the top degree down.
class FieldElement {
 public:
  constexpr FieldElement() = default;
  constexpr explicit FieldElement(std::uint32_t value) : value_(value) {}

  constexpr std::uint32_t value() const { return value_; }
  constexpr bool is_zero() const { return value_ == 0; }

  friend constexpr auto operator<=>(FieldElement, FieldElement) = default;

 private:
  std::uint32_t value_ = 0;
};

// Largest field order accepted by FieldCtx::create.
inline constexpr std::uint32_t kMaxFieldOrder = 1u << 20;
// Multiplication goes through log/antilog tables up to this order.
inline constexpr std::uint32_t kMaxTabulatedOrder = 1u << 16;

// Immutable context for GF(p^l).  Copies share the same tables.
class FieldCtx {
 public:
  // Builds GF(p^l) modulo the smallest monic irreducible polynomial of degree
  // l over GF(p), where polynomials are ordered by their packed base-p value.
  static FieldCtx create(std::uint32_t p, std::uint32_t degree);

  std::uint32_t characteristic() const { return t_->p; }
  std::uint32_t degree() const { return t_->degree; }
  std::uint32_t order() const { return t_->q; }
  // Coefficients of the monic modulus, low degree first (length degree + 1).
  const std::vector<std::uint32_t>& modulus() const { return t_->modulus; }

  FieldElement zero() const { return FieldElement{0}; }
  FieldElement one() const { return FieldElement{1}; }
  // Element with packed value v; throws OutOfRange unless v < q.
  FieldElement element(std::uint32_t v) const;
  // Image of an integer in the prime subfield.
  FieldElement from_int(std::int64_t n) const;
  FieldElement from_coeffs(std::span<const std::uint32_t> coeffs) const;
  std::vector<std::uint32_t> coeffs(FieldElement x) const;
  bool in_prime_subfield(FieldElement x) const { return x.value() < t_->p; }

  FieldElement add(FieldElement a, FieldElement b) const;
  FieldElement sub(FieldElement a, FieldElement b) const;
  FieldElement neg(FieldElement a) const;
  FieldElement mul(FieldElement a, FieldElement b) const;
  FieldElement square(FieldElement a) const { return mul(a, a); }
  FieldElement inv(FieldElement a) const;
  FieldElement div(FieldElement a, FieldElement b) const { return mul(a, inv(b)); }
  FieldElement pow(FieldElement a, std::uint64_t n) const;
  FieldElement frobenius(FieldElement a) const { return pow(a, t_->p); }

  // Absolute trace to GF(p), returned as an integer in [0, p).
  std::uint32_t trace(FieldElement x) const;
  bool is_square(FieldElement x) const;
  // Square root with the smallest packed value, or nullopt for a non-square.
  std::optional<FieldElement> sqrt(FieldElement x) const;
  // Distinct roots of a x^2 + b x + c in increasing order.  a = 0 degrades to
  // the linear case; a = b = 0 with c != 0 has no roots.
  std::vector<FieldElement> solve_quadratic(FieldElement a, FieldElement b,
                                            FieldElement c) const;

  // Canonical text: coefficients low degree first, comma separated.
  std::string to_string(FieldElement x) const;
  // Accepts the canonical text; a bare integer is read as a prime-subfield
  // element when it is the only coefficient.
  FieldElement parse(std::string_view text) const;

  friend bool operator==(const FieldCtx& a, const FieldCtx& b) {
    return a.t_->p == b.t_->p && a.t_->degree == b.t_->degree &&
           a.t_->modulus == b.t_->modulus;
  }

 private:
  struct Tables {
    std::uint32_t p = 0;
    std::uint32_t degree = 0;
    std::uint32_t q = 0;
    std::vector<std::uint32_t> modulus;
    std::uint32_t modulus_bits = 0;  // char 2: modulus as a bit pattern
    std::vector<std::uint32_t> log;      // log[x] for x != 0
    std::vector<std::uint32_t> antilog;  // length 2(q-1)
    std::vector<std::uint16_t> add_table;  // odd p, l > 1, small q
    std::uint32_t non_residue = 0;         // odd q only
    std::uint32_t trace_one = 0;           // char 2: some element of trace 1
  };

  explicit FieldCtx(std::shared_ptr<const Tables> t) : t_(std::move(t)) {}

  static FieldElement mul_schoolbook(const Tables& t, FieldElement a, FieldElement b);
  static FieldElement add_digits(const Tables& t, FieldElement a, FieldElement b);
  FieldElement tonelli_shanks(FieldElement x) const;
  FieldElement solve_artin_schreier(FieldElement k) const;

  std::shared_ptr<const Tables> t_;
};

inline FieldElement FieldCtx::add(FieldElement a, FieldElement b) const {
  const Tables& t = *t_;
  if (t.p == 2) return FieldElement{a.value() ^ b.value()};
  if (t.degree == 1) {
    std::uint32_t s = a.value() + b.value();
    return FieldElement{s >= t.p ? s - t.p : s};
  }
  if (!t.add_table.empty()) return FieldElement{t.add_table[a.value() * t.q + b.value()]};
  return add_digits(t, a, b);
}

inline FieldElement FieldCtx::mul(FieldElement a, FieldElement b) const {
  if (a.is_zero() || b.is_zero()) return FieldElement{0};
  const Tables& t = *t_;
  if (!t.log.empty()) return FieldElement{t.antilog[t.log[a.value()] + t.log[b.value()]]};
  return mul_schoolbook(t, a, b);
}

bool is_prime(std::uint64_t n);

// (p, l) with q = p^l, or nullopt when q is not a prime power.
std::optional<std::pair<std::uint32_t, std::uint32_t>> prime_power_decomposition(std::uint64_t q);

}  // namespace hyperfact
