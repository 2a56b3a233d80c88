#include "hyperfact/finite_field.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>
#include <tuple>

namespace hyperfact {

namespace {

using Poly = std::vector<std::uint32_t>;  // low degree first, over GF(p)

std::uint32_t mod_inverse(std::uint32_t a, std::uint32_t p) {
  // p is prime, a != 0 mod p
  std::int64_t t = 0, new_t = 1, r = p, new_r = a % p;
  while (new_r != 0) {
    std::int64_t quotient = r / new_r;
    std::tie(t, new_t) = std::make_pair(new_t, t - quotient * new_t);
    std::tie(r, new_r) = std::make_pair(new_r, r - quotient * new_r);
  }
  return static_cast<std::uint32_t>((t % p + p) % p);
}

// Remainder of a modulo the monic polynomial m.
Poly poly_rem(Poly a, const Poly& m, std::uint32_t p) {
  const std::size_t dm = m.size() - 1;
  while (a.size() > dm) {
    std::uint32_t lead = a.back();
    std::size_t shift = a.size() - 1 - dm;
    if (lead != 0) {
      for (std::size_t i = 0; i <= dm; ++i) {
        std::uint64_t sub = static_cast<std::uint64_t>(lead) * m[i] % p;
        a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
      }
    }
    a.pop_back();
  }
  return a;
}

Poly unpack(std::uint64_t v, std::uint32_t p, std::size_t len) {
  Poly out(len, 0);
  for (std::size_t i = 0; i < len; ++i) {
    out[i] = static_cast<std::uint32_t>(v % p);
    v /= p;
  }
  return out;
}

// Trial division by every monic polynomial of degree 1..deg/2.
bool is_irreducible(const Poly& f, std::uint32_t p) {
  const std::size_t deg = f.size() - 1;
  for (std::size_t d = 1; d <= deg / 2; ++d) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t low = 0; low < count; ++low) {
      Poly g = unpack(low, p, d);
      g.push_back(1);
      Poly r = poly_rem(f, g, p);
      if (std::all_of(r.begin(), r.end(), [](std::uint32_t c) { return c == 0; })) return false;
    }
  }
  return true;
}

std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::DegreeZero: return "DegreeZero";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::AllZeroCoefficients: return "AllZeroCoefficients";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::AlphaZero: return "AlphaZero";
    case ErrorCode::BadResidue: return "BadResidue";
    case ErrorCode::NotPrimePower: return "NotPrimePower";
    case ErrorCode::IsBaseFactor: return "IsBaseFactor";
    case ErrorCode::DuplicateFactor: return "DuplicateFactor";
    case ErrorCode::SameFactor: return "SameFactor";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::WrongCharacteristic: return "WrongCharacteristic";
    case ErrorCode::EvenDegree: return "EvenDegree";
    case ErrorCode::WrongField: return "WrongField";
    case ErrorCode::AlphaInSubfield: return "AlphaInSubfield";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::optional<std::pair<std::uint32_t, std::uint32_t>> prime_power_decomposition(std::uint64_t q) {
  if (q < 2) return std::nullopt;
  std::uint64_t p = q;
  for (std::uint64_t d = 2; d * d <= q; ++d) {
    if (q % d == 0) {
      p = d;
      break;
    }
  }
  std::uint32_t l = 0;
  while (q % p == 0) {
    q /= p;
    ++l;
  }
  if (q != 1) return std::nullopt;
  return std::make_pair(static_cast<std::uint32_t>(p), l);
}

FieldCtx FieldCtx::create(std::uint32_t p, std::uint32_t degree) {
  if (!is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  if (degree == 0) throw Error(ErrorCode::DegreeZero, "extension degree must be positive");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < degree; ++i) {
    q *= p;
    if (q > kMaxFieldOrder) {
      throw Error(ErrorCode::TooLarge, "field order exceeds " + std::to_string(kMaxFieldOrder));
    }
  }

  auto t = std::make_shared<Tables>();
  t->p = p;
  t->degree = degree;
  t->q = static_cast<std::uint32_t>(q);

  for (std::uint64_t low = 0; low < q; ++low) {
    Poly f = unpack(low, p, degree);
    f.push_back(1);
    if (is_irreducible(f, p)) {
      t->modulus = std::move(f);
      break;
    }
  }
  if (t->modulus.empty()) throw std::logic_error("no irreducible polynomial found");
  if (p == 2) {
    for (std::uint32_t i = 0; i <= degree; ++i) t->modulus_bits |= t->modulus[i] << i;
  }

  if (p != 2 && degree > 1 && q * q <= (1u << 20)) {
    t->add_table.resize(q * q);
    for (std::uint32_t a = 0; a < q; ++a) {
      for (std::uint32_t b = 0; b < q; ++b) {
        t->add_table[a * q + b] =
            static_cast<std::uint16_t>(add_digits(*t, FieldElement{a}, FieldElement{b}).value());
      }
    }
  }

  if (q <= kMaxTabulatedOrder && q > 2) {
    const std::uint32_t n = t->q - 1;
    const auto primes = distinct_prime_factors(n);
    auto slow_pow = [&](FieldElement a, std::uint64_t e) {
      FieldElement r{1};
      while (e > 0) {
        if (e & 1) r = mul_schoolbook(*t, r, a);
        a = mul_schoolbook(*t, a, a);
        e >>= 1;
      }
      return r;
    };
    std::uint32_t generator = 0;
    for (std::uint32_t g = 2; g < t->q && generator == 0; ++g) {
      bool primitive = std::all_of(primes.begin(), primes.end(), [&](std::uint64_t r) {
        return slow_pow(FieldElement{g}, n / r).value() != 1;
      });
      if (primitive) generator = g;
    }
    t->log.assign(t->q, 0);
    t->antilog.assign(2 * static_cast<std::size_t>(n), 0);
    FieldElement x{1};
    for (std::uint32_t i = 0; i < n; ++i) {
      t->antilog[i] = t->antilog[i + n] = x.value();
      t->log[x.value()] = i;
      x = mul_schoolbook(*t, x, FieldElement{generator});
    }
  }

  FieldCtx ctx{t};
  if (p != 2) {
    for (std::uint32_t v = 2; v < t->q; ++v) {
      if (!ctx.is_square(FieldElement{v})) {
        t->non_residue = v;
        break;
      }
    }
  } else {
    for (std::uint32_t v = 1; v < t->q; ++v) {
      if (ctx.trace(FieldElement{v}) == 1) {
        t->trace_one = v;
        break;
      }
    }
  }
  return ctx;
}

FieldElement FieldCtx::mul_schoolbook(const Tables& t, FieldElement a, FieldElement b) {
  if (t.degree == 1) {
    return FieldElement{static_cast<std::uint32_t>(static_cast<std::uint64_t>(a.value()) * b.value() % t.p)};
  }
  if (t.p == 2) {
    std::uint32_t x = a.value(), y = b.value(), r = 0;
    const std::uint32_t top = 1u << t.degree;
    while (y != 0) {
      if (y & 1) r ^= x;
      y >>= 1;
      x <<= 1;
      if (x & top) x ^= t.modulus_bits;
    }
    return FieldElement{r};
  }
  Poly da = unpack(a.value(), t.p, t.degree);
  Poly db = unpack(b.value(), t.p, t.degree);
  Poly prod(2 * t.degree - 1, 0);
  for (std::uint32_t i = 0; i < t.degree; ++i) {
    if (da[i] == 0) continue;
    for (std::uint32_t j = 0; j < t.degree; ++j) {
      prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + static_cast<std::uint64_t>(da[i]) * db[j]) % t.p);
    }
  }
  Poly r = poly_rem(std::move(prod), t.modulus, t.p);
  std::uint32_t v = 0;
  for (std::size_t i = r.size(); i-- > 0;) v = v * t.p + r[i];
  return FieldElement{v};
}

FieldElement FieldCtx::add_digits(const Tables& t, FieldElement a, FieldElement b) {
  std::uint32_t x = a.value(), y = b.value(), out = 0, scale = 1;
  for (std::uint32_t i = 0; i < t.degree; ++i) {
    std::uint32_t d = x % t.p + y % t.p;
    if (d >= t.p) d -= t.p;
    out += d * scale;
    scale *= t.p;
    x /= t.p;
    y /= t.p;
  }
  return FieldElement{out};
}

FieldElement FieldCtx::element(std::uint32_t v) const {
  if (v >= t_->q) {
    throw Error(ErrorCode::OutOfRange, std::to_string(v) + " is not below q = " + std::to_string(t_->q));
  }
  return FieldElement{v};
}

FieldElement FieldCtx::from_int(std::int64_t n) const {
  std::int64_t p = t_->p;
  return FieldElement{static_cast<std::uint32_t>((n % p + p) % p)};
}

FieldElement FieldCtx::from_coeffs(std::span<const std::uint32_t> coeffs) const {
  if (coeffs.size() > t_->degree) {
    throw Error(ErrorCode::OutOfRange, "too many coefficients for degree " + std::to_string(t_->degree));
  }
  std::uint32_t v = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    if (coeffs[i] >= t_->p) throw Error(ErrorCode::OutOfRange, "coefficient not reduced mod p");
    v = v * t_->p + coeffs[i];
  }
  return FieldElement{v};
}

std::vector<std::uint32_t> FieldCtx::coeffs(FieldElement x) const {
  return unpack(x.value(), t_->p, t_->degree);
}

FieldElement FieldCtx::neg(FieldElement a) const {
  const Tables& t = *t_;
  if (t.p == 2 || a.is_zero()) return a;
  if (t.degree == 1) return FieldElement{t.p - a.value()};
  std::uint32_t x = a.value(), out = 0, scale = 1;
  for (std::uint32_t i = 0; i < t.degree; ++i) {
    std::uint32_t d = x % t.p;
    out += (d == 0 ? 0 : t.p - d) * scale;
    scale *= t.p;
    x /= t.p;
  }
  return FieldElement{out};
}

FieldElement FieldCtx::sub(FieldElement a, FieldElement b) const { return add(a, neg(b)); }

FieldElement FieldCtx::inv(FieldElement a) const {
  if (a.is_zero()) throw Error(ErrorCode::DivisionByZero, "zero has no inverse");
  const Tables& t = *t_;
  if (!t.log.empty()) {
    std::uint32_t n = t.q - 1;
    return FieldElement{t.antilog[(n - t.log[a.value()]) % n]};
  }
  if (t.degree == 1) return FieldElement{mod_inverse(a.value(), t.p)};
  return pow(a, t.q - 2);
}

FieldElement FieldCtx::pow(FieldElement a, std::uint64_t n) const {
  if (n == 0) return one();
  if (a.is_zero()) return zero();
  const Tables& t = *t_;
  if (!t.log.empty()) {
    std::uint64_t m = t.q - 1;
    return FieldElement{t.antilog[(t.log[a.value()] * (n % m)) % m]};
  }
  FieldElement r = one();
  while (n > 0) {
    if (n & 1) r = mul(r, a);
    a = mul(a, a);
    n >>= 1;
  }
  return r;
}

std::uint32_t FieldCtx::trace(FieldElement x) const {
  FieldElement sum = zero();
  for (std::uint32_t i = 0; i < t_->degree; ++i) {
    sum = add(sum, x);
    x = frobenius(x);
  }
  if (!in_prime_subfield(sum)) throw std::logic_error("trace left the prime subfield");
  return sum.value();
}

bool FieldCtx::is_square(FieldElement x) const {
  if (t_->p == 2 || x.is_zero()) return true;
  return pow(x, (t_->q - 1) / 2) == one();
}

std::optional<FieldElement> FieldCtx::sqrt(FieldElement x) const {
  if (x.is_zero()) return x;
  if (t_->p == 2) return pow(x, t_->q / 2);
  if (!is_square(x)) return std::nullopt;
  FieldElement r = tonelli_shanks(x);
  return std::min(r, neg(r));
}

FieldElement FieldCtx::tonelli_shanks(FieldElement x) const {
  std::uint64_t odd = t_->q - 1;
  std::uint32_t s = 0;
  while ((odd & 1) == 0) {
    odd >>= 1;
    ++s;
  }
  FieldElement c = pow(FieldElement{t_->non_residue}, odd);
  FieldElement r = pow(x, (odd + 1) / 2);
  FieldElement u = pow(x, odd);
  std::uint32_t m = s;
  while (u != one()) {
    std::uint32_t i = 0;
    for (FieldElement w = u; w != one(); w = square(w)) ++i;
    FieldElement b = c;
    for (std::uint32_t k = 0; k + i + 1 < m; ++k) b = square(b);
    r = mul(r, b);
    c = square(b);
    u = mul(u, c);
    m = i;
  }
  return r;
}

// Solves t^2 + t = k in characteristic 2, given trace(k) = 0, via
// t = sum_{i=1}^{l-1} (k + k^2 + ... + k^{2^{i-1}}) d^{2^i} with trace(d) = 1.
FieldElement FieldCtx::solve_artin_schreier(FieldElement k) const {
  const FieldElement d{t_->trace_one};
  FieldElement partial = zero();
  FieldElement kpow = k;
  FieldElement dpow = d;
  FieldElement result = zero();
  for (std::uint32_t i = 1; i < t_->degree; ++i) {
    partial = add(partial, kpow);
    kpow = square(kpow);
    dpow = square(dpow);
    result = add(result, mul(partial, dpow));
  }
  return result;
}

std::vector<FieldElement> FieldCtx::solve_quadratic(FieldElement a, FieldElement b, FieldElement c) const {
  if (a.is_zero() && b.is_zero() && c.is_zero()) {
    throw Error(ErrorCode::AllZeroCoefficients, "quadratic with all coefficients zero");
  }
  if (a.is_zero()) {
    if (b.is_zero()) return {};
    return {neg(div(c, b))};
  }
  std::vector<FieldElement> roots;
  if (t_->p == 2) {
    if (b.is_zero()) return {*sqrt(div(c, a))};
    // x = (b/a) t turns a x^2 + b x + c into t^2 + t = a c / b^2
    FieldElement k = div(mul(a, c), square(b));
    if (trace(k) != 0) return {};
    FieldElement t = solve_artin_schreier(k);
    FieldElement scale = div(b, a);
    roots = {mul(scale, t), mul(scale, add(t, one()))};
  } else {
    FieldElement disc = sub(square(b), mul(from_int(4), mul(a, c)));
    std::optional<FieldElement> s = sqrt(disc);
    if (!s) return {};
    FieldElement two_a_inv = inv(add(a, a));
    roots = {mul(sub(*s, b), two_a_inv), mul(sub(neg(*s), b), two_a_inv)};
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

std::string FieldCtx::to_string(FieldElement x) const {
  std::string out;
  for (std::uint32_t c : coeffs(x)) {
    if (!out.empty()) out += ',';
    out += std::to_string(c);
  }
  return out;
}

FieldElement FieldCtx::parse(std::string_view text) const {
  std::vector<std::uint32_t> digits;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view token = text.substr(pos, comma - pos);
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
      throw Error(ErrorCode::ParseError, "bad field element '" + std::string(text) + "'");
    }
    if (v >= t_->p) throw Error(ErrorCode::ParseError, "coefficient " + std::to_string(v) + " not below p");
    digits.push_back(v);
    pos = comma + 1;
  }
  if (digits.size() > t_->degree) {
    throw Error(ErrorCode::ParseError, "too many coefficients in '" + std::string(text) + "'");
  }
  return from_coeffs(digits);
}

}  // namespace hyperfact
