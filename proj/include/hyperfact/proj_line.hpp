#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hyperfact/finite_field.hpp"

namespace hyperfact {

// A point of PG(1,q): a field element or the point at infinity.
class ProjPoint {
 public:
  static constexpr ProjPoint infinity() { return ProjPoint{true, FieldElement{}}; }
  static constexpr ProjPoint finite(FieldElement x) { return ProjPoint{false, x}; }
  // Inverse of index(): q maps to infinity, anything below q to that element.
  static ProjPoint from_index(const FieldCtx& ctx, std::uint32_t index);

  constexpr bool is_infinity() const { return infinite_; }
  constexpr FieldElement value() const { return x_; }
  // Dense index in [0, q]; infinity is q.
  std::uint32_t index(const FieldCtx& ctx) const { return infinite_ ? ctx.order() : x_.value(); }

  friend constexpr bool operator==(ProjPoint, ProjPoint) = default;

 private:
  constexpr ProjPoint(bool infinite, FieldElement x) : infinite_(infinite), x_(x) {}

  bool infinite_ = false;
  FieldElement x_{};
};

std::string to_string(const FieldCtx& ctx, ProjPoint x);
ProjPoint parse_point(const FieldCtx& ctx, std::string_view text);

// x -> (a x + b) / (c x + d), held in PGL(2,q) canonical form: the first
// nonzero entry of (a, b, c, d) is 1.
class MobiusMap {
 public:
  // Throws Singular if ad - bc = 0.
  static MobiusMap from_entries(const FieldCtx& ctx, FieldElement a, FieldElement b,
                                FieldElement c, FieldElement d);
  static MobiusMap identity() { return MobiusMap{{FieldElement{1}, {}, {}, FieldElement{1}}}; }

  FieldElement a() const { return e_[0]; }
  FieldElement b() const { return e_[1]; }
  FieldElement c() const { return e_[2]; }
  FieldElement d() const { return e_[3]; }
  const std::array<FieldElement, 4>& entries() const { return e_; }

  // Packs the canonical entries for hashing; valid while q <= 2^16.
  std::uint64_t key() const {
    return static_cast<std::uint64_t>(e_[0].value()) << 48 | static_cast<std::uint64_t>(e_[1].value()) << 32 |
           static_cast<std::uint64_t>(e_[2].value()) << 16 | e_[3].value();
  }

  friend bool operator==(const MobiusMap&, const MobiusMap&) = default;

 private:
  explicit MobiusMap(std::array<FieldElement, 4> e) : e_(e) {}

  std::array<FieldElement, 4> e_;
};

ProjPoint apply(const FieldCtx& ctx, const MobiusMap& m, ProjPoint x);
// compose(m1, m2) acts as m1 after m2.
MobiusMap compose(const FieldCtx& ctx, const MobiusMap& m1, const MobiusMap& m2);
MobiusMap inverse(const FieldCtx& ctx, const MobiusMap& m);
FieldElement determinant(const FieldCtx& ctx, const MobiusMap& m);
// Image of every point, indexed by ProjPoint::index.
std::vector<std::uint32_t> point_permutation(const FieldCtx& ctx, const MobiusMap& m);
std::string to_string(const FieldCtx& ctx, const MobiusMap& m);

// f(x) = 1 / (1 - x).
MobiusMap make_f(const FieldCtx& ctx);
// g(x) = alpha x + beta.
MobiusMap make_g(const FieldCtx& ctx, FieldElement alpha, FieldElement beta);
// The conjugate g f g^{-1}; checked against its closed form
// (-beta x + alpha^2 + alpha beta + beta^2) / (-x + alpha + beta).
MobiusMap make_m(const FieldCtx& ctx, FieldElement alpha, FieldElement beta);

// Given labels (a1, b1) and (a2, b2), returns (a0, b0) such that
// g = make_g(1/a1, -b1/a1) conjugates m_{a1,b1} to f and m_{a2,b2} to m_{a0,b0}.
std::pair<FieldElement, FieldElement> conjugate_pair_to_standard(const FieldCtx& ctx,
                                                                 std::pair<FieldElement, FieldElement> first,
                                                                 std::pair<FieldElement, FieldElement> second);

}  // namespace hyperfact
