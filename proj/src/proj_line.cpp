#include "hyperfact/proj_line.hpp"

#include <stdexcept>

namespace hyperfact {

ProjPoint ProjPoint::from_index(const FieldCtx& ctx, std::uint32_t index) {
  if (index == ctx.order()) return infinity();
  return finite(ctx.element(index));
}

std::string to_string(const FieldCtx& ctx, ProjPoint x) {
  return x.is_infinity() ? std::string("inf") : ctx.to_string(x.value());
}

ProjPoint parse_point(const FieldCtx& ctx, std::string_view text) {
  if (text == "inf") return ProjPoint::infinity();
  return ProjPoint::finite(ctx.parse(text));
}

MobiusMap MobiusMap::from_entries(const FieldCtx& ctx, FieldElement a, FieldElement b, FieldElement c,
                                  FieldElement d) {
  if (ctx.sub(ctx.mul(a, d), ctx.mul(b, c)).is_zero()) {
    throw Error(ErrorCode::Singular, "matrix has zero determinant");
  }
  std::array<FieldElement, 4> e{a, b, c, d};
  FieldElement lead{};
  for (FieldElement x : e) {
    if (!x.is_zero()) {
      lead = x;
      break;
    }
  }
  FieldElement scale = ctx.inv(lead);
  for (FieldElement& x : e) x = ctx.mul(x, scale);
  return MobiusMap{e};
}

ProjPoint apply(const FieldCtx& ctx, const MobiusMap& m, ProjPoint x) {
  if (x.is_infinity()) {
    if (m.c().is_zero()) return ProjPoint::infinity();
    return ProjPoint::finite(ctx.div(m.a(), m.c()));
  }
  FieldElement den = ctx.add(ctx.mul(m.c(), x.value()), m.d());
  if (den.is_zero()) return ProjPoint::infinity();
  FieldElement num = ctx.add(ctx.mul(m.a(), x.value()), m.b());
  return ProjPoint::finite(ctx.div(num, den));
}

MobiusMap compose(const FieldCtx& ctx, const MobiusMap& m1, const MobiusMap& m2) {
  auto dot = [&](FieldElement x, FieldElement y, FieldElement z, FieldElement w) {
    return ctx.add(ctx.mul(x, y), ctx.mul(z, w));
  };
  return MobiusMap::from_entries(ctx, dot(m1.a(), m2.a(), m1.b(), m2.c()), dot(m1.a(), m2.b(), m1.b(), m2.d()),
                                 dot(m1.c(), m2.a(), m1.d(), m2.c()), dot(m1.c(), m2.b(), m1.d(), m2.d()));
}

MobiusMap inverse(const FieldCtx& ctx, const MobiusMap& m) {
  return MobiusMap::from_entries(ctx, m.d(), ctx.neg(m.b()), ctx.neg(m.c()), m.a());
}

FieldElement determinant(const FieldCtx& ctx, const MobiusMap& m) {
  return ctx.sub(ctx.mul(m.a(), m.d()), ctx.mul(m.b(), m.c()));
}

std::vector<std::uint32_t> point_permutation(const FieldCtx& ctx, const MobiusMap& m) {
  const std::uint32_t q = ctx.order();
  std::vector<std::uint32_t> image(q + 1);
  for (std::uint32_t i = 0; i <= q; ++i) {
    image[i] = apply(ctx, m, ProjPoint::from_index(ctx, i)).index(ctx);
  }
  return image;
}

std::string to_string(const FieldCtx& ctx, const MobiusMap& m) {
  std::string out = "[";
  for (std::size_t i = 0; i < 4; ++i) {
    if (i > 0) out += "; ";
    out += ctx.to_string(m.entries()[i]);
  }
  return out + "]";
}

MobiusMap make_f(const FieldCtx& ctx) {
  return MobiusMap::from_entries(ctx, ctx.zero(), ctx.one(), ctx.neg(ctx.one()), ctx.one());
}

MobiusMap make_g(const FieldCtx& ctx, FieldElement alpha, FieldElement beta) {
  if (alpha.is_zero()) throw Error(ErrorCode::AlphaZero, "g_{alpha,beta} needs alpha != 0");
  return MobiusMap::from_entries(ctx, alpha, beta, ctx.zero(), ctx.one());
}

MobiusMap make_m(const FieldCtx& ctx, FieldElement alpha, FieldElement beta) {
  MobiusMap g = make_g(ctx, alpha, beta);
  MobiusMap conjugate = compose(ctx, g, compose(ctx, make_f(ctx), inverse(ctx, g)));
  FieldElement top = ctx.add(ctx.add(ctx.square(alpha), ctx.mul(alpha, beta)), ctx.square(beta));
  MobiusMap closed = MobiusMap::from_entries(ctx, ctx.neg(beta), top, ctx.neg(ctx.one()), ctx.add(alpha, beta));
  if (conjugate != closed) {
    throw std::logic_error("m_{alpha,beta}: conjugation and closed form disagree");
  }
  return closed;
}

std::pair<FieldElement, FieldElement> conjugate_pair_to_standard(const FieldCtx& ctx,
                                                                 std::pair<FieldElement, FieldElement> first,
                                                                 std::pair<FieldElement, FieldElement> second) {
  if (first.first.is_zero() || second.first.is_zero()) {
    throw Error(ErrorCode::AlphaZero, "labels need alpha != 0");
  }
  FieldElement a1_inv = ctx.inv(first.first);
  FieldElement alpha0 = ctx.mul(a1_inv, second.first);
  FieldElement beta0 = ctx.mul(a1_inv, ctx.sub(second.second, first.second));

  MobiusMap g = make_g(ctx, a1_inv, ctx.neg(ctx.mul(a1_inv, first.second)));
  MobiusMap g_inv = inverse(ctx, g);
  auto conj = [&](const MobiusMap& m) { return compose(ctx, g, compose(ctx, m, g_inv)); };
  if (conj(make_m(ctx, first.first, first.second)) != make_f(ctx) ||
      conj(make_m(ctx, second.first, second.second)) != make_m(ctx, alpha0, beta0)) {
    throw std::logic_error("relabelling map does not conjugate to the standard pair");
  }
  return {alpha0, beta0};
}

}  // namespace hyperfact
