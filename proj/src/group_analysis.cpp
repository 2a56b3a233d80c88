#include "hyperfact/group_analysis.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace hyperfact {

namespace {

bool has_order_three(const FieldCtx& ctx, const MobiusMap& x) {
  if (x == MobiusMap::identity()) return false;
  return compose(ctx, x, compose(ctx, x, x)) == MobiusMap::identity();
}

}  // namespace

std::vector<std::vector<std::uint32_t>> orbits(const FieldCtx& ctx, const std::vector<MobiusMap>& gens) {
  const std::uint32_t n = ctx.order() + 1;
  std::vector<std::vector<std::uint32_t>> perms;
  for (const MobiusMap& g : gens) perms.push_back(point_permutation(ctx, g));
  std::vector<std::uint32_t> orbit_of(n, UINT32_MAX);
  std::vector<std::vector<std::uint32_t>> out;
  for (std::uint32_t start = 0; start < n; ++start) {
    if (orbit_of[start] != UINT32_MAX) continue;
    const std::uint32_t id = static_cast<std::uint32_t>(out.size());
    std::vector<std::uint32_t> orbit{start};
    orbit_of[start] = id;
    for (std::size_t head = 0; head < orbit.size(); ++head) {
      for (const auto& perm : perms) {
        std::uint32_t y = perm[orbit[head]];
        if (orbit_of[y] == UINT32_MAX) {
          orbit_of[y] = id;
          orbit.push_back(y);
        }
      }
    }
    std::sort(orbit.begin(), orbit.end());
    out.push_back(std::move(orbit));
  }
  return out;
}

bool is_transitive(const FieldCtx& ctx, const std::vector<MobiusMap>& gens) {
  const std::uint32_t n = ctx.order() + 1;
  std::vector<bool> seen(n, false);
  std::vector<ProjPoint> queue{ProjPoint::infinity()};
  seen[ctx.order()] = true;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (const MobiusMap& g : gens) {
      ProjPoint y = apply(ctx, g, queue[head]);
      std::uint32_t i = y.index(ctx);
      if (!seen[i]) {
        seen[i] = true;
        queue.push_back(y);
      }
    }
  }
  return queue.size() == n;
}

GeneratedSubgroup generate(const FieldCtx& ctx, const std::vector<MobiusMap>& gens, std::uint64_t cap,
                           ClosureMode mode) {
  if (ctx.order() > (1u << 16)) throw Error(ErrorCode::TooLarge, "group closure needs q <= 65536");
  if (cap == 0) throw Error(ErrorCode::OutOfRange, "closure cap must be positive");
  GeneratedSubgroup group;
  group.generators = gens;
  std::vector<MobiusMap> steps;
  for (const MobiusMap& g : gens) {
    steps.push_back(g);
    MobiusMap g_inv = inverse(ctx, g);
    if (g_inv != g) steps.push_back(g_inv);
  }

  std::unordered_set<std::uint64_t> seen{MobiusMap::identity().key()};
  group.elements.push_back(MobiusMap::identity());
  for (std::size_t head = 0; head < group.elements.size() && !group.truncated; ++head) {
    for (const MobiusMap& s : steps) {
      MobiusMap y = compose(ctx, s, group.elements[head]);
      if (!seen.insert(y.key()).second) continue;
      group.elements.push_back(y);
      if (mode == ClosureMode::Classify && group.elements.size() > kEarlyExitOrder) {
        group.truncated = true;
        break;
      }
      if (group.elements.size() > cap) {
        throw Error(ErrorCode::CapExceeded, "subgroup exceeds " + std::to_string(cap) + " elements");
      }
    }
  }
  group.order = group.elements.size();
  for (const MobiusMap& x : group.elements) group.order3_count += has_order_three(ctx, x);
  group.orbits = orbits(ctx, gens);
  return group;
}

std::uint64_t psl_order(std::uint32_t q) {
  const std::uint64_t q64 = q;
  return q64 * (q64 * q64 - 1) / std::gcd<std::uint64_t>(2, q64 - 1);
}

std::string SubgroupClass::name() const {
  switch (tag) {
    case Tag::C3: return "C3";
    case Tag::A4: return "A4";
    case Tag::S4: return "S4";
    case Tag::A5: return "A5";
    case Tag::FullPSL: return "PSL";
    case Tag::Other: break;
  }
  return "Other(" + std::to_string(order) + ")";
}

SubgroupClass classify(const GeneratedSubgroup& group, const FieldCtx& ctx) {
  const std::uint64_t full = psl_order(ctx.order());
  if (group.truncated || group.order == full) return {SubgroupClass::Tag::FullPSL, full};
  switch (group.order) {
    case 3: return {SubgroupClass::Tag::C3, 3};
    case 12: return {SubgroupClass::Tag::A4, 12};
    case 24: return {SubgroupClass::Tag::S4, 24};
    case 60: return {SubgroupClass::Tag::A5, 60};
    default: return {SubgroupClass::Tag::Other, group.order};
  }
}

std::vector<MobiusMap> standard_generators(const FieldCtx& ctx, FieldElement alpha, FieldElement beta) {
  return {make_f(ctx), make_m(ctx, alpha, beta)};
}

A4Census a4_census(const Factorisation& factorisation) {
  const FieldCtx& ctx = factorisation.field();
  const std::uint32_t q = ctx.order();
  if (ctx.degree() != 1 || q == 2 || q % 3 != 2 || q > 29) {
    throw Error(ErrorCode::OutOfRange, "A4 census needs an odd prime q = 2 mod 3, q <= 29");
  }
  A4Census census;
  census.expected_copies = static_cast<std::uint64_t>(q) * (static_cast<std::uint64_t>(q) * q - 1) / 24;
  std::vector<MobiusMap> maps;
  for (const OneFactor& f : factorisation.factors()) maps.push_back(make_m(ctx, f.label().alpha, f.label().beta));
  for (std::size_t i = 0; i < maps.size(); ++i) {
    for (std::size_t j = i + 1; j < maps.size(); ++j) {
      std::vector<MobiusMap> gens{maps[i], maps[j]};
      GeneratedSubgroup g = generate(ctx, gens, kDefaultClosureCap, ClosureMode::Classify);
      ++census.pairs_checked;
      if (!g.truncated && g.order == 12) ++census.a4_pair_count;
      if (g.orbits.size() != 1) census.transitive_everywhere = false;
    }
  }
  return census;
}

SerreConditions serre_conditions(const FieldCtx& ctx) {
  if (ctx.characteristic() != 2) throw Error(ErrorCode::WrongCharacteristic, "needs characteristic 2");
  SerreConditions out;
  // x^2 + x = 1 is x^2 + x + 1 = 0 in characteristic 2.
  out.a4_roots = ctx.solve_quadratic(ctx.one(), ctx.one(), ctx.one());
  out.has_a4 = !out.a4_roots.empty();
  if (out.has_a4) {
    for (std::uint32_t v = 0; v < ctx.order() && !out.a5_witness; ++v) {
      FieldElement y{v};
      if (auto z = ctx.sqrt(ctx.sub(ctx.one(), ctx.square(y)))) out.a5_witness = {y, *z};
    }
    out.has_a5 = out.a5_witness.has_value();
  }
  return out;
}

}  // namespace hyperfact
