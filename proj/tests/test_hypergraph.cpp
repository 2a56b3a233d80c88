#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <set>

#include "hyperfact/hypergraph.hpp"

using namespace hyperfact;

namespace {

FieldCtx field(std::uint32_t q) {
  auto pl = prime_power_decomposition(q);
  return FieldCtx::create(pl->first, pl->second);
}

std::set<std::pair<std::uint32_t, std::uint32_t>> pairs_of(const OneFactor& f) {
  std::set<std::pair<std::uint32_t, std::uint32_t>> out;
  for (const Edge& e : f.edges()) {
    out.insert({e[0], e[1]});
    out.insert({e[0], e[2]});
    out.insert({e[1], e[2]});
  }
  return out;
}

std::uint32_t overlap_oracle(const OneFactor& a, const OneFactor& b) {
  auto pa = pairs_of(a), pb = pairs_of(b);
  std::uint32_t n = 0;
  for (auto& p : pa) n += pb.count(p);
  return n;
}

// Component count by repeated relaxation of labels.
std::size_t component_oracle(const UnionHypergraph& h) {
  std::vector<std::uint32_t> label(h.vertex_count());
  std::iota(label.begin(), label.end(), 0u);
  for (bool changed = true; changed;) {
    changed = false;
    for (const Edge& e : h.edges()) {
      std::uint32_t m = std::min({label[e[0]], label[e[1]], label[e[2]]});
      for (auto v : e) {
        if (label[v] != m) {
          label[v] = m;
          changed = true;
        }
      }
    }
  }
  return std::set<std::uint32_t>(label.begin(), label.end()).size();
}

// Distinct edges for the cyclic pairs (v_i, v_{i+1}), by augmenting paths.
bool assign_edges(const UnionHypergraph& h, const std::vector<std::uint32_t>& order) {
  const std::size_t n = order.size();
  std::vector<int> owner(h.edge_count(), -1);
  auto contains = [&](std::size_t e, std::uint32_t v) {
    const Edge& x = h.edges()[e];
    return x[0] == v || x[1] == v || x[2] == v;
  };
  std::function<bool(std::size_t, std::vector<bool>&)> augment = [&](std::size_t i, std::vector<bool>& seen) {
    const std::uint32_t u = order[i], w = order[(i + 1) % n];
    for (std::size_t e = 0; e < h.edge_count(); ++e) {
      if (seen[e] || !contains(e, u) || !contains(e, w)) continue;
      seen[e] = true;
      if (owner[e] < 0 || augment(owner[e], seen)) {
        owner[e] = static_cast<int>(i);
        return true;
      }
    }
    return false;
  };
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<bool> seen(h.edge_count());
    if (!augment(i, seen)) return false;
  }
  return true;
}

// Every cyclic vertex order from vertex 0, then a distinct-edge assignment.
bool berge_oracle(const UnionHypergraph& h) {
  const std::uint32_t n = h.vertex_count();
  if (n < 3) return false;
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  do {
    if (order[1] > order[n - 1]) continue;
    if (assign_edges(h, order)) return true;
  } while (std::next_permutation(order.begin() + 1, order.end()));
  return false;
}

UnionHypergraph random_hypergraph(std::mt19937& rng, std::uint32_t n, std::size_t m) {
  std::vector<Edge> edges;
  while (edges.size() < m) {
    Edge e{static_cast<std::uint32_t>(rng() % n), static_cast<std::uint32_t>(rng() % n),
           static_cast<std::uint32_t>(rng() % n)};
    std::sort(e.begin(), e.end());
    if (e[0] == e[1] || e[1] == e[2]) continue;
    edges.push_back(e);
  }
  return UnionHypergraph(n, edges);
}

UnionHypergraph relabel(const UnionHypergraph& h, const std::vector<std::uint32_t>& perm) {
  std::vector<Edge> edges;
  for (const Edge& e : h.edges()) {
    Edge x{perm[e[0]], perm[e[1]], perm[e[2]]};
    std::sort(x.begin(), x.end());
    edges.push_back(x);
  }
  std::reverse(edges.begin(), edges.end());
  return UnionHypergraph(h.vertex_count(), edges);
}

// Brute force over all bijections, for tiny vertex counts.
bool isomorphic_oracle(const UnionHypergraph& a, const UnionHypergraph& b) {
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
  std::multiset<Edge> target(b.edges().begin(), b.edges().end());
  std::vector<std::uint32_t> perm(a.vertex_count());
  std::iota(perm.begin(), perm.end(), 0u);
  do {
    std::multiset<Edge> image;
    for (const Edge& e : a.edges()) {
      Edge x{perm[e[0]], perm[e[1]], perm[e[2]]};
      std::sort(x.begin(), x.end());
      image.insert(x);
    }
    if (image == target) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

}  // namespace

TEST(Union, DegreesAndSizes) {
  FieldCtx gf5 = field(5);
  Factorisation fz5 = Factorisation::build(gf5);
  UnionHypergraph h = make_union(fz5[0], fz5[fz5.index_of(FieldElement{2}, FieldElement{0})]);
  EXPECT_EQ(h.edge_count(), 4u);
  EXPECT_EQ(h.vertex_count(), 6u);
  for (std::uint32_t v = 0; v < 6; ++v) EXPECT_EQ(h.degree(v), 2u);

  Factorisation fz8 = Factorisation::build(field(8));
  UnionHypergraph t = make_union(fz8[0], fz8[1], fz8[2]);
  EXPECT_EQ(t.edge_count(), 9u);
  for (std::uint32_t v = 0; v < 9; ++v) EXPECT_EQ(t.degree(v), 3u);
  for (std::size_t e = 0; e < t.edge_count(); ++e) EXPECT_EQ(t.source(e), e / 3);

  Factorisation fz2 = Factorisation::build(field(2));
  EXPECT_THROW(make_union(fz2[0], fz2[0]), Error);
  EXPECT_THROW(make_union(fz5[0], fz8[1]), Error);
  UnionHypergraph one(3, {{0, 1, 2}});
  EXPECT_TRUE(is_connected(one));
}

TEST(Union, ConnectivityExamples) {
  FieldCtx gf125 = field(125);
  Factorisation fz = Factorisation::build(gf125);
  EXPECT_FALSE(is_connected(make_union(fz[0], fz[fz.index_of(gf125.from_int(2), gf125.zero())])));
  Factorisation fz11 = Factorisation::build(field(11));
  for (std::size_t i = 0; i < fz11.size(); ++i)
    for (std::size_t j = i + 1; j < fz11.size(); ++j) EXPECT_TRUE(is_connected(make_union(fz11[i], fz11[j])));
}

TEST(Union, ComponentsMatchOracle) {
  std::mt19937 rng(8);
  for (int t = 0; t < 300; ++t) {
    const std::uint32_t n = 3 + rng() % 12;
    UnionHypergraph h = random_hypergraph(rng, n, rng() % (n + 1));
    auto comps = components(h);
    EXPECT_EQ(comps.size(), component_oracle(h));
    EXPECT_EQ(is_connected(h), comps.size() == 1);
    std::vector<std::uint32_t> all;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      EXPECT_TRUE(std::is_sorted(comps[i].begin(), comps[i].end()));
      if (i) EXPECT_LT(comps[i - 1].front(), comps[i].front());
      all.insert(all.end(), comps[i].begin(), comps[i].end());
    }
    std::sort(all.begin(), all.end());
    EXPECT_EQ(all.size(), n);
  }
}

TEST(Overlap, Examples) {
  Factorisation fz5 = Factorisation::build(field(5));
  for (std::size_t j = 1; j < fz5.size(); ++j) EXPECT_EQ(pair_overlap(fz5[0], fz5[j]).count, 2u);

  FieldCtx gf11 = field(11);
  Factorisation fz11 = Factorisation::build(gf11);
  const FieldElement minus_one = gf11.from_int(-1);
  EXPECT_EQ(pair_overlap(fz11[0], fz11[fz11.index_of(minus_one, gf11.zero())]).count, 3u);
  OverlapResult alg = overlap_algebraic(gf11, minus_one, gf11.zero());
  EXPECT_EQ(alg.count, 3u);
  EXPECT_EQ(alg.f_equals_m, (std::vector<ProjPoint>{ProjPoint::infinity()}));
  EXPECT_EQ(alg.f_inverse_equals_m,
            (std::vector<ProjPoint>{ProjPoint::finite(FieldElement{3}), ProjPoint::finite(FieldElement{7})}));

  FieldCtx gf17 = field(17);
  Factorisation fz17 = Factorisation::build(gf17);
  EXPECT_EQ(pair_overlap(fz17[0], fz17[fz17.index_of(gf17.from_int(-1), gf17.zero())]).count, 1u);

  FieldCtx gf5 = field(5);
  EXPECT_THROW(overlap_algebraic(gf5, FieldElement{4}, FieldElement{1}), Error);
  EXPECT_THROW(pair_overlap(fz5[1], fz5[1]), Error);
}

TEST(Overlap, Gf8BetaZeroTable) {
  FieldCtx ctx = field(8);
  for (std::uint32_t a = 2; a < 8; ++a) {
    const FieldElement alpha{a};
    OverlapResult r = overlap_algebraic(ctx, alpha, ctx.zero());
    std::vector<ProjPoint> expected_f{ProjPoint::finite(ctx.div(alpha, ctx.add(ctx.one(), alpha))),
                                      ProjPoint::infinity()};
    EXPECT_EQ(r.f_equals_m, expected_f);
    const FieldElement s = ctx.add(ctx.add(ctx.square(alpha), alpha), ctx.one());
    const bool two_roots = ctx.trace(ctx.div(alpha, ctx.square(s))) == 0;
    EXPECT_EQ(r.f_inverse_equals_m.size(), two_roots ? 2u : 0u);
    for (ProjPoint x : r.f_inverse_equals_m) {
      const FieldElement v = x.value();
      EXPECT_TRUE(ctx.add(ctx.add(ctx.square(v), ctx.mul(s, v)), alpha).is_zero());
    }
  }
}

TEST(Overlap, AlgebraicEqualsCombinatorialExhaustive) {
  for (std::uint32_t q : {5u, 8u, 11u, 17u, 23u, 29u, 32u}) {
    FieldCtx ctx = field(q);
    OneFactor base = build_one_factor(ctx, ctx.one(), ctx.zero());
    for (std::uint32_t a = 1; a < q; ++a) {
      for (std::uint32_t b = 0; b < q; ++b) {
        OneFactor other = build_one_factor(ctx, FieldElement{a}, FieldElement{b});
        if (other.same_edges(base)) continue;
        OverlapResult comb = pair_overlap(base, other);
        OverlapResult alg = overlap_algebraic(ctx, FieldElement{a}, FieldElement{b});
        EXPECT_EQ(alg.count, comb.count) << q << ' ' << a << ' ' << b;
        EXPECT_EQ(comb.count, comb.repeated_pairs.size());
        EXPECT_EQ(comb.count, overlap_oracle(base, other));
        EXPECT_EQ(alg.count, alg.f_equals_m.size() + alg.f_inverse_equals_m.size());
      }
    }
  }
}

TEST(Overlap, AlgebraicEqualsCombinatorialSampled) {
  std::mt19937 rng(12);
  for (std::uint32_t q : {125u, 128u}) {
    FieldCtx ctx = field(q);
    OneFactor base = build_one_factor(ctx, ctx.one(), ctx.zero());
    int checked = 0;
    while (checked < 1000) {
      const FieldElement a{1 + static_cast<std::uint32_t>(rng() % (q - 1))}, b{static_cast<std::uint32_t>(rng() % q)};
      OneFactor other = build_one_factor(ctx, a, b);
      if (other.same_edges(base)) continue;
      EXPECT_EQ(overlap_algebraic(ctx, a, b).count, pair_overlap(base, other).count);
      ++checked;
    }
  }
}

TEST(Overlap, PairsBetweenArbitraryFactors) {
  Factorisation fz = Factorisation::build(field(11));
  for (std::size_t i = 0; i < fz.size(); i += 3)
    for (std::size_t j = i + 1; j < fz.size(); j += 2) EXPECT_EQ(pair_overlap(fz[i], fz[j]).count, overlap_oracle(fz[i], fz[j]));
}

TEST(Isomorphism, UnionsOfF5AreAllIsomorphic) {
  Factorisation fz = Factorisation::build(field(5));
  std::vector<UnionHypergraph> unions;
  for (std::size_t i = 0; i < fz.size(); ++i)
    for (std::size_t j = i + 1; j < fz.size(); ++j) unions.push_back(make_union(fz[i], fz[j]));
  ASSERT_EQ(unions.size(), 45u);
  for (const auto& u : unions) {
    auto map = is_isomorphic(unions[0], u);
    ASSERT_TRUE(map.has_value());
    EXPECT_TRUE(is_isomorphism(unions[0], u, *map));
  }
}

TEST(Isomorphism, F11HasNonIsomorphicUnions) {
  FieldCtx ctx = field(11);
  Factorisation fz = Factorisation::build(ctx);
  std::size_t two = fz.size(), three = fz.size();
  for (std::size_t j = 1; j < fz.size(); ++j) {
    std::uint32_t c = pair_overlap(fz[0], fz[j]).count;
    if (c == 2 && two == fz.size()) two = j;
    if (c == 3 && three == fz.size()) three = j;
  }
  ASSERT_LT(two, fz.size());
  ASSERT_LT(three, fz.size());
  EXPECT_FALSE(is_isomorphic(make_union(fz[0], fz[two]), make_union(fz[0], fz[three])).has_value());
}

TEST(Isomorphism, IdentityAndRelabelling) {
  std::mt19937 rng(21);
  Factorisation fz = Factorisation::build(field(32));
  for (int t = 0; t < 20; ++t) {
    std::size_t i = rng() % fz.size(), j = rng() % fz.size();
    if (i == j) continue;
    UnionHypergraph h = make_union(fz[i], fz[j]);
    auto self = is_isomorphic(h, h);
    ASSERT_TRUE(self);
    EXPECT_TRUE(is_isomorphism(h, h, *self));
    std::vector<std::uint32_t> perm(h.vertex_count());
    std::iota(perm.begin(), perm.end(), 0u);
    std::shuffle(perm.begin(), perm.end(), rng);
    UnionHypergraph g = relabel(h, perm);
    auto map = is_isomorphic(h, g);
    ASSERT_TRUE(map);
    EXPECT_TRUE(is_isomorphism(h, g, *map));
  }
}

TEST(Isomorphism, MatchesBruteForce) {
  std::mt19937 rng(22);
  for (int t = 0; t < 300; ++t) {
    const std::uint32_t n = 4 + rng() % 4;
    const std::size_t m = 2 + rng() % 5;
    UnionHypergraph a = random_hypergraph(rng, n, m), b = random_hypergraph(rng, n, m);
    auto map = is_isomorphic(a, b);
    EXPECT_EQ(map.has_value(), isomorphic_oracle(a, b));
    if (map) {
      EXPECT_TRUE(is_isomorphism(a, b, *map));
    }
  }
}

TEST(BergeCycle, MatchesBruteForce) {
  std::mt19937 rng(31);
  int found = 0, absent = 0;
  for (int t = 0; t < 600; ++t) {
    const std::uint32_t n = 3 + rng() % 6;
    const std::size_t m = t % 2 ? n : n + rng() % 4;
    UnionHypergraph h = random_hypergraph(rng, n, m);
    const bool expected = berge_oracle(h);
    BergeSearchResult a = has_hamilton_berge_cycle(h);
    BergeSearchResult b = has_hamilton_berge_cycle_by_paths(h);
    ASSERT_NE(a.status, SearchStatus::Timeout);
    ASSERT_NE(b.status, SearchStatus::Timeout);
    EXPECT_EQ(a.status == SearchStatus::Found, expected);
    EXPECT_EQ(b.status == SearchStatus::Found, expected);
    for (const auto* r : {&a, &b}) {
      if (r->status != SearchStatus::Found) continue;
      EXPECT_TRUE(is_valid_hamilton_berge_cycle(h, r->cycle));
      EXPECT_EQ(r->cycle.vertices.front(), 0u);
    }
    (expected ? found : absent)++;
  }
  EXPECT_GT(found, 50);
  EXPECT_GT(absent, 50);
}

TEST(BergeCycle, SkipAndPathSearchAgreeOnTriples) {
  std::mt19937 rng(32);
  for (std::uint32_t q : {5u, 8u, 11u, 17u}) {
    Factorisation fz = Factorisation::build(field(q));
    for (int t = 0; t < 60; ++t) {
      std::size_t i = rng() % fz.size(), j = rng() % fz.size(), k = rng() % fz.size();
      if (i == j || j == k || i == k) continue;
      UnionHypergraph h = make_union(fz[i], fz[j], fz[k]);
      BergeSearchResult a = has_hamilton_berge_cycle(h);
      BergeSearchResult b = has_hamilton_berge_cycle_by_paths(h);
      EXPECT_EQ(a.status, b.status);
      if (a.status == SearchStatus::Found) EXPECT_TRUE(is_valid_hamilton_berge_cycle(h, a.cycle));
      if (b.status == SearchStatus::Found) EXPECT_TRUE(is_valid_hamilton_berge_cycle(h, b.cycle));
    }
  }
}

TEST(BergeCycle, Examples) {
  Factorisation fz5 = Factorisation::build(field(5));
  for (std::size_t i = 0; i < fz5.size(); ++i)
    for (std::size_t j = i + 1; j < fz5.size(); ++j)
      for (std::size_t k = j + 1; k < fz5.size(); ++k) {
        UnionHypergraph h = make_union(fz5[i], fz5[j], fz5[k]);
        BergeSearchResult r = has_hamilton_berge_cycle(h);
        ASSERT_EQ(r.status, SearchStatus::Found);
        EXPECT_TRUE(is_valid_hamilton_berge_cycle(h, r.cycle));
      }

  EXPECT_EQ(has_hamilton_berge_cycle(UnionHypergraph(4, {})).status, SearchStatus::NotFound);

  FieldCtx gf125 = field(125);
  Factorisation fz = Factorisation::build(gf125);
  UnionHypergraph h = make_union(fz[0], fz[fz.index_of(gf125.from_int(2), gf125.zero())],
                                 fz[fz.index_of(gf125.from_int(3), gf125.zero())]);
  EXPECT_FALSE(is_connected(h));
  EXPECT_EQ(has_hamilton_berge_cycle(h).status, SearchStatus::NotFound);
}

TEST(BergeCycle, ValidatorRejectsBrokenCycles) {
  UnionHypergraph h(4, {{0, 1, 2}, {1, 2, 3}, {0, 2, 3}, {0, 1, 3}});
  BergeSearchResult r = has_hamilton_berge_cycle(h);
  ASSERT_EQ(r.status, SearchStatus::Found);
  BergeCycle c = r.cycle;
  EXPECT_TRUE(is_valid_hamilton_berge_cycle(h, c));
  BergeCycle repeated_edge = c;
  repeated_edge.edges[1] = repeated_edge.edges[0];
  EXPECT_FALSE(is_valid_hamilton_berge_cycle(h, repeated_edge));
  BergeCycle short_cycle = c;
  short_cycle.vertices.pop_back();
  short_cycle.edges.pop_back();
  EXPECT_FALSE(is_valid_hamilton_berge_cycle(h, short_cycle));
  BergeCycle repeated_vertex = c;
  repeated_vertex.vertices[1] = repeated_vertex.vertices[0];
  EXPECT_FALSE(is_valid_hamilton_berge_cycle(h, repeated_vertex));
}

// These once needed millions of nodes without restarts.
TEST(BergeCycle, HeavyTailedTriplesAt128) {
  Factorisation fz = Factorisation::build(field(128));
  for (auto [a, b, c] : {std::array<std::size_t, 3>{320, 6824, 8018}, std::array<std::size_t, 3>{1041, 2149, 5891}}) {
    UnionHypergraph h = make_union(fz[a], fz[b], fz[c]);
    BergeSearchResult r = has_hamilton_berge_cycle(h, std::chrono::milliseconds(5000));
    ASSERT_EQ(r.status, SearchStatus::Found);
    EXPECT_TRUE(is_valid_hamilton_berge_cycle(h, r.cycle));
    EXPECT_LT(r.nodes, 100000u);
  }
}
