#include "hyperfact/hypergraph.hpp"

#include <algorithm>
#include <numeric>

namespace hyperfact {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::uint32_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0u); }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::uint32_t> parent_;
};

std::pair<std::uint32_t, std::uint32_t> ordered(std::uint32_t a, std::uint32_t b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

}  // namespace

UnionHypergraph::UnionHypergraph(std::uint32_t vertex_count, std::vector<Edge> edges,
                                 std::vector<std::uint32_t> sources)
    : edges_(std::move(edges)), sources_(std::move(sources)), incident_(vertex_count) {
  if (sources_.empty()) sources_.assign(edges_.size(), 0);
  if (sources_.size() != edges_.size()) throw Error(ErrorCode::SizeMismatch, "one source tag per edge");
  for (std::uint32_t i = 0; i < edges_.size(); ++i) {
    Edge& e = edges_[i];
    std::sort(e.begin(), e.end());
    if (e[0] == e[1] || e[1] == e[2] || e[2] >= vertex_count) {
      throw Error(ErrorCode::OutOfRange, "edge must be three distinct vertices");
    }
    for (std::uint32_t v : e) incident_[v].push_back(i);
  }
}

UnionHypergraph make_union(const std::vector<const OneFactor*>& factors) {
  if (factors.size() < 2 || factors.size() > 3) {
    throw Error(ErrorCode::OutOfRange, "a union takes two or three factors");
  }
  const std::uint32_t n = factors.front()->vertex_count();
  std::vector<Edge> edges;
  std::vector<std::uint32_t> sources;
  for (std::uint32_t i = 0; i < factors.size(); ++i) {
    if (factors[i]->vertex_count() != n) throw Error(ErrorCode::SizeMismatch, "factors on different point sets");
    for (std::uint32_t j = 0; j < i; ++j) {
      if (factors[i]->same_edges(*factors[j])) throw Error(ErrorCode::DuplicateFactor, "factors must be distinct");
    }
    for (const Edge& e : factors[i]->edges()) {
      edges.push_back(e);
      sources.push_back(i);
    }
  }
  return UnionHypergraph(n, std::move(edges), std::move(sources));
}

UnionHypergraph make_union(const OneFactor& a, const OneFactor& b) { return make_union({&a, &b}); }

UnionHypergraph make_union(const OneFactor& a, const OneFactor& b, const OneFactor& c) {
  return make_union({&a, &b, &c});
}

bool is_connected(const UnionHypergraph& h) {
  const std::uint32_t n = h.vertex_count();
  if (n <= 1) return true;
  DisjointSets sets(n);
  std::uint32_t merges = 0;
  for (const Edge& e : h.edges()) {
    merges += sets.unite(e[0], e[1]);
    merges += sets.unite(e[0], e[2]);
    if (merges == n - 1) return true;
  }
  return false;
}

std::vector<std::vector<std::uint32_t>> components(const UnionHypergraph& h) {
  const std::uint32_t n = h.vertex_count();
  DisjointSets sets(n);
  for (const Edge& e : h.edges()) {
    sets.unite(e[0], e[1]);
    sets.unite(e[0], e[2]);
  }
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> slot(n, UINT32_MAX);
  for (std::uint32_t v = 0; v < n; ++v) {
    std::uint32_t root = sets.find(v);
    if (slot[root] == UINT32_MAX) {
      slot[root] = static_cast<std::uint32_t>(out.size());
      out.emplace_back();
    }
    out[slot[root]].push_back(v);
  }
  return out;
}

OverlapResult pair_overlap(const OneFactor& first, const OneFactor& second) {
  if (first.vertex_count() != second.vertex_count()) {
    throw Error(ErrorCode::SizeMismatch, "factors on different point sets");
  }
  if (first.same_edges(second)) throw Error(ErrorCode::SameFactor, "overlap of a factor with itself");
  OverlapResult result;
  for (const Edge& e : second.edges()) {
    for (auto [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
      if (first.block_of(e[i]) == first.block_of(e[j])) result.repeated_pairs.emplace_back(e[i], e[j]);
    }
  }
  std::sort(result.repeated_pairs.begin(), result.repeated_pairs.end());
  result.count = static_cast<std::uint32_t>(result.repeated_pairs.size());
  return result;
}

OverlapResult overlap_algebraic(const FieldCtx& ctx, FieldElement alpha, FieldElement beta) {
  if (alpha.is_zero()) throw Error(ErrorCode::AlphaZero, "factor labels need alpha != 0");
  const FieldElement zero = ctx.zero(), one = ctx.one(), minus_one = ctx.neg(ctx.one());
  if ((alpha == one && beta == zero) || (alpha == minus_one && beta == one)) {
    throw Error(ErrorCode::IsBaseFactor, "(alpha, beta) labels F_{1,0}");
  }
  const FieldElement a2 = ctx.square(alpha), ab = ctx.mul(alpha, beta), b2 = ctx.square(beta);
  const FieldElement s = ctx.add(ctx.add(a2, ab), b2);  // alpha^2 + alpha beta + beta^2
  const FieldElement apb = ctx.add(alpha, beta);

  auto finite = [](const std::vector<FieldElement>& xs) {
    std::vector<ProjPoint> out;
    for (FieldElement x : xs) out.push_back(ProjPoint::finite(x));
    return out;
  };

  OverlapResult result;
  // f(x) = m(x)
  if (beta == zero) {
    result.f_equals_m.push_back(ProjPoint::infinity());
    if (alpha != minus_one) result.f_equals_m.push_back(ProjPoint::finite(ctx.div(alpha, ctx.add(one, alpha))));
  } else if (apb == one) {
    result.f_equals_m = finite({one, ctx.neg(alpha)});
  } else {
    // beta x^2 - (s + beta - 1) x + (s - alpha - beta) = 0
    FieldElement lin = ctx.neg(ctx.sub(ctx.add(s, beta), one));
    FieldElement con = ctx.sub(s, apb);
    result.f_equals_m = finite(ctx.solve_quadratic(beta, lin, con));
  }
  // f^{-1}(x) = m(x)
  if (beta == one) {
    result.f_inverse_equals_m.push_back(ProjPoint::infinity());
    if (alpha != one) {
      result.f_inverse_equals_m.push_back(ProjPoint::finite(ctx.inv(ctx.sub(one, alpha))));
    }
  } else if (apb == zero) {
    result.f_inverse_equals_m = finite({zero, ctx.sub(one, alpha)});
  } else {
    // (1 - beta) x^2 + (s - alpha - beta - 1) x + (alpha + beta) = 0
    FieldElement quad = ctx.sub(one, beta);
    FieldElement lin = ctx.sub(ctx.sub(s, apb), one);
    result.f_inverse_equals_m = finite(ctx.solve_quadratic(quad, lin, apb));
  }

  auto by_index = [&](std::vector<ProjPoint>& pts) {
    std::sort(pts.begin(), pts.end(), [&](ProjPoint x, ProjPoint y) { return x.index(ctx) < y.index(ctx); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  };
  by_index(result.f_equals_m);
  by_index(result.f_inverse_equals_m);

  const MobiusMap f = make_f(ctx);
  const MobiusMap f_inv = inverse(ctx, f);
  for (ProjPoint x : result.f_equals_m) {
    result.repeated_pairs.push_back(ordered(x.index(ctx), apply(ctx, f, x).index(ctx)));
  }
  for (ProjPoint x : result.f_inverse_equals_m) {
    result.repeated_pairs.push_back(ordered(x.index(ctx), apply(ctx, f_inv, x).index(ctx)));
  }
  std::sort(result.repeated_pairs.begin(), result.repeated_pairs.end());
  result.count = static_cast<std::uint32_t>(result.f_equals_m.size() + result.f_inverse_equals_m.size());
  return result;
}

}  // namespace hyperfact
