#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "hyperfact/factorisation.hpp"
#include "hyperfact/finite_field.hpp"
#include "hyperfact/proj_line.hpp"

namespace hyperfact {

// A 3-uniform hypergraph on {0, ..., n-1}; each edge remembers which input
// factor it came from.
class UnionHypergraph {
 public:
  UnionHypergraph(std::uint32_t vertex_count, std::vector<Edge> edges, std::vector<std::uint32_t> sources = {});

  std::uint32_t vertex_count() const { return static_cast<std::uint32_t>(incident_.size()); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  std::uint32_t source(std::size_t e) const { return sources_[e]; }
  // Indices of the edges containing v, increasing.
  const std::vector<std::uint32_t>& incident(std::uint32_t v) const { return incident_[v]; }
  std::uint32_t degree(std::uint32_t v) const { return static_cast<std::uint32_t>(incident_[v].size()); }

 private:
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> sources_;
  std::vector<std::vector<std::uint32_t>> incident_;
};

// Union of two or three distinct 1-factors on the same point set.  Edges of
// factors[i] carry source tag i.
UnionHypergraph make_union(const std::vector<const OneFactor*>& factors);
UnionHypergraph make_union(const OneFactor& a, const OneFactor& b);
UnionHypergraph make_union(const OneFactor& a, const OneFactor& b, const OneFactor& c);

bool is_connected(const UnionHypergraph& h);
// Vertex sets of the connected components, each sorted, ordered by least vertex.
std::vector<std::vector<std::uint32_t>> components(const UnionHypergraph& h);

struct OverlapResult {
  std::uint32_t count = 0;
  // Unordered pairs (u < v) lying in an edge of both factors, sorted.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> repeated_pairs;
  // Filled by overlap_algebraic only: the two solution sets, in increasing
  // point index order.
  std::vector<ProjPoint> f_equals_m;
  std::vector<ProjPoint> f_inverse_equals_m;
};

// Counts repeated pairs by scanning edges.  Throws SameFactor for identical
// factors and SizeMismatch for different point sets.
OverlapResult pair_overlap(const OneFactor& first, const OneFactor& second);

// Overlap of F_{1,0} and F_{alpha,beta} from the solution sets of f(x) = m(x)
// and f^{-1}(x) = m(x), case by case, quadratics through solve_quadratic.
// Throws IsBaseFactor when (alpha, beta) labels F_{1,0} itself.
OverlapResult overlap_algebraic(const FieldCtx& ctx, FieldElement alpha, FieldElement beta);

// Backtracking search for a vertex bijection carrying the edge multiset of
// `first` onto that of `second`.  Returns map[v] = image of v.
std::optional<std::vector<std::uint32_t>> is_isomorphic(const UnionHypergraph& first, const UnionHypergraph& second);
bool is_isomorphism(const UnionHypergraph& first, const UnionHypergraph& second,
                    const std::vector<std::uint32_t>& map);

// (v_1, e_1, ..., v_n, e_n) with {v_i, v_{i+1}} in e_i and {v_n, v_1} in e_n.
struct BergeCycle {
  std::vector<std::uint32_t> vertices;
  std::vector<std::uint32_t> edges;  // indices into UnionHypergraph::edges()
};

enum class SearchStatus { Found, NotFound, Timeout };

struct BergeSearchResult {
  SearchStatus status = SearchStatus::NotFound;
  BergeCycle cycle;  // set when status == Found
  std::uint64_t nodes = 0;
};

inline constexpr std::chrono::milliseconds kDefaultBergeBudget{10'000};

// Exact search for a Hamilton Berge cycle; the witness starts at vertex 0.
// With as many edges as vertices every edge lies on the cycle, and the search
// instead picks the vertex each edge skips, which prunes far better.
BergeSearchResult has_hamilton_berge_cycle(const UnionHypergraph& h,
                                           std::chrono::milliseconds budget = kDefaultBergeBudget);
// Plain path extension from vertex 0, for any edge count.
BergeSearchResult has_hamilton_berge_cycle_by_paths(const UnionHypergraph& h,
                                                    std::chrono::milliseconds budget = kDefaultBergeBudget);
bool is_valid_hamilton_berge_cycle(const UnionHypergraph& h, const BergeCycle& cycle);

}  // namespace hyperfact
