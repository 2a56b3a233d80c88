#include "hyperfact/verifier.hpp"

namespace hyperfact {

std::map<std::uint32_t, std::uint64_t> overlap_distribution(const Factorisation& fz) {
  std::map<std::uint32_t, std::uint64_t> histogram;
  for (std::size_t j = 1; j < fz.size(); ++j) ++histogram[pair_overlap(fz[0], fz[j]).count];
  return histogram;
}

TraceScan trace_condition_scan(std::uint32_t degree) {
  if (degree % 2 == 0) throw Error(ErrorCode::EvenDegree, "trace scan needs odd degree");
  if (degree < 3 || degree > 17) throw Error(ErrorCode::OutOfRange, "trace scan degree must lie in [3, 17]");
  const FieldCtx ctx = FieldCtx::create(2, degree);
  const std::uint32_t q = ctx.order();
  TraceScan scan;
  scan.degree = degree;
  scan.root_bound = (std::uint64_t{1} << (degree - 1)) + (std::uint64_t{1} << (degree - 2));

  const FieldElement one = ctx.one();
  for (std::uint32_t v = 1; v < q; ++v) {
    const FieldElement a{v};
    const FieldElement s = ctx.add(ctx.add(ctx.square(a), a), one);
    if (s.is_zero()) continue;  // needs a cube root of unity, absent for odd degree
    const FieldElement s2_inv = ctx.inv(ctx.square(s));
    if (ctx.trace(ctx.mul(a, s2_inv)) == 0 || ctx.trace(ctx.mul(ctx.square(a), s2_inv)) == 0) {
      scan.witnesses_eq4.push_back(a);
    }
  }

  std::vector<FieldElement> up(degree), down(degree);
  for (std::uint32_t v = 2; v < q; ++v) {
    const FieldElement x{v};
    const FieldElement x_inv = ctx.inv(x);
    if (ctx.trace(ctx.add(x, x_inv)) == 1) {
      ++scan.trace1_count;
    } else if (!scan.trace1_counterexample) {
      scan.trace1_counterexample = x;
    }
  }
  scan.all_trace1 = !scan.trace1_counterexample;

  // x + sum_{i<l-1} x^{2^{l-1}+2^i} + x^{2^{l-1}} + sum_{i<l} x^{2^{l-1}-2^i};
  // its value at 0 is 1 from the i = l-1 term of the last sum.
  for (std::uint32_t v = 1; v < q; ++v) {
    const FieldElement x{v};
    up[0] = x;
    down[0] = ctx.inv(x);
    for (std::uint32_t i = 1; i < degree; ++i) {
      up[i] = ctx.square(up[i - 1]);
      down[i] = ctx.square(down[i - 1]);
    }
    const FieldElement top = up[degree - 1];
    FieldElement value = ctx.add(x, top);
    for (std::uint32_t i = 0; i + 1 < degree; ++i) value = ctx.add(value, ctx.mul(top, up[i]));
    for (std::uint32_t i = 0; i < degree; ++i) value = ctx.add(value, ctx.mul(top, down[i]));
    if (value.is_zero()) ++scan.poly_root_count;
  }
  return scan;
}

DiscriminantReport overlap_discriminant_check(const FieldCtx& ctx, FieldElement alpha) {
  if (ctx.characteristic() != 5 || ctx.degree() < 3 || ctx.degree() % 2 == 0) {
    throw Error(ErrorCode::WrongField, "needs GF(5^l) with odd l > 1");
  }
  if (alpha.value() >= ctx.order()) throw Error(ErrorCode::OutOfRange, "alpha outside the field");
  if (ctx.in_prime_subfield(alpha)) throw Error(ErrorCode::AlphaInSubfield, "alpha lies in GF(5)");

  DiscriminantReport r;
  r.alpha = alpha;
  const FieldElement one = ctx.one();
  const FieldElement a = alpha, a2 = ctx.square(alpha);
  const FieldElement minus = ctx.add(ctx.sub(a2, a), one);  // a^2 - a + 1
  const FieldElement plus = ctx.add(ctx.add(a2, a), one);   // a^2 + a + 1
  const FieldElement quartic = ctx.add(ctx.add(ctx.square(a2), a2), one);

  const OneFactor base = build_one_factor(ctx, one, ctx.zero());
  const std::array<FactorLabel, 3> labels{FactorLabel{a, ctx.neg(a)}, FactorLabel{a, ctx.sub(one, a)},
                                          FactorLabel{a2, ctx.sub(one, a2)}};
  for (std::size_t i = 0; i < 3; ++i) {
    r.overlaps[i] = pair_overlap(base, build_one_factor(ctx, labels[i].alpha, labels[i].beta)).count;
  }
  r.squares = {ctx.is_square(minus), ctx.is_square(plus), ctx.is_square(quartic)};

  // a x^2 + (a^2 - a - 1) x - a^2 and a x^2 + (a^2 - a - 1) x + 1
  const FieldElement b = ctx.sub(ctx.sub(a2, a), one);
  const FieldElement four_a = ctx.mul(ctx.from_int(4), a);
  const FieldElement disc1 = ctx.sub(ctx.square(b), ctx.mul(four_a, ctx.neg(a2)));
  const FieldElement disc2 = ctx.sub(ctx.square(b), four_a);
  r.d1_formula = disc1 == ctx.mul(ctx.square(ctx.sub(a, one)), minus);
  r.d2_formula = disc2 == ctx.mul(ctx.square(ctx.add(a, one)), plus);
  r.product_identity = ctx.mul(minus, plus) == quartic;

  r.squares_give_four = true;
  for (std::size_t i = 0; i < 3; ++i) {
    if (r.squares[i] && r.overlaps[i] != 4) r.squares_give_four = false;
    if (r.overlaps[i] == 4) r.has_overlap_four = true;
  }
  return r;
}

}  // namespace hyperfact
