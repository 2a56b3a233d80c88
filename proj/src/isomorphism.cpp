#include <algorithm>
#include <map>

#include "hyperfact/hypergraph.hpp"

namespace hyperfact {

namespace {

using PairDegrees = std::vector<std::vector<std::uint32_t>>;
using TripleCounts = std::map<Edge, std::uint32_t>;

PairDegrees pair_degrees(const UnionHypergraph& h) {
  const std::uint32_t n = h.vertex_count();
  PairDegrees pd(n, std::vector<std::uint32_t>(n, 0));
  for (const Edge& e : h.edges()) {
    for (auto [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
      ++pd[e[i]][e[j]];
      ++pd[e[j]][e[i]];
    }
  }
  return pd;
}

TripleCounts triple_counts(const UnionHypergraph& h) {
  TripleCounts counts;
  for (const Edge& e : h.edges()) ++counts[e];
  return counts;
}

// Degree, component size and the sorted pair-degree row: all preserved by
// any isomorphism.
std::vector<std::vector<std::uint32_t>> vertex_invariants(const UnionHypergraph& h, const PairDegrees& pd) {
  const std::uint32_t n = h.vertex_count();
  std::vector<std::uint32_t> component_size(n);
  for (const auto& comp : components(h)) {
    for (std::uint32_t v : comp) component_size[v] = static_cast<std::uint32_t>(comp.size());
  }
  std::vector<std::vector<std::uint32_t>> inv(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    std::vector<std::uint32_t> row;
    for (std::uint32_t u = 0; u < n; ++u) {
      if (u != v && pd[v][u] > 0) row.push_back(pd[v][u]);
    }
    std::sort(row.begin(), row.end());
    inv[v] = {h.degree(v), component_size[v], static_cast<std::uint32_t>(row.size())};
    inv[v].insert(inv[v].end(), row.begin(), row.end());
  }
  return inv;
}

Edge sorted_image(const Edge& e, const std::vector<std::uint32_t>& map) {
  Edge out{map[e[0]], map[e[1]], map[e[2]]};
  std::sort(out.begin(), out.end());
  return out;
}

std::uint32_t count_of(const TripleCounts& counts, const Edge& e) {
  auto it = counts.find(e);
  return it == counts.end() ? 0 : it->second;
}

class IsomorphismSearch {
 public:
  IsomorphismSearch(const UnionHypergraph& a, const UnionHypergraph& b)
      : a_(a), b_(b), pd_a_(pair_degrees(a)), pd_b_(pair_degrees(b)), triples_a_(triple_counts(a)),
        triples_b_(triple_counts(b)), inv_a_(vertex_invariants(a, pd_a_)), inv_b_(vertex_invariants(b, pd_b_)) {}

  std::optional<std::vector<std::uint32_t>> run() {
    const std::uint32_t n = a_.vertex_count();
    if (a_.edge_count() != b_.edge_count()) return std::nullopt;
    auto sa = inv_a_, sb = inv_b_;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return std::nullopt;

    order_vertices();
    map_.assign(n, UINT32_MAX);
    reverse_.assign(n, UINT32_MAX);
    if (!extend(0)) return std::nullopt;
    return map_;
  }

 private:
  // Breadth-first from the vertex whose invariant class is smallest, so each
  // newly placed vertex is constrained by already-placed neighbours.
  void order_vertices() {
    const std::uint32_t n = a_.vertex_count();
    std::map<std::vector<std::uint32_t>, std::uint32_t> class_size;
    for (const auto& inv : inv_a_) ++class_size[inv];
    std::vector<bool> placed(n, false);
    while (order_.size() < n) {
      std::uint32_t seed = UINT32_MAX;
      for (std::uint32_t v = 0; v < n; ++v) {
        if (!placed[v] && (seed == UINT32_MAX || class_size[inv_a_[v]] < class_size[inv_a_[seed]])) seed = v;
      }
      std::vector<std::uint32_t> queue{seed};
      placed[seed] = true;
      for (std::size_t head = 0; head < queue.size(); ++head) {
        std::uint32_t v = queue[head];
        order_.push_back(v);
        for (std::uint32_t e : a_.incident(v)) {
          for (std::uint32_t u : a_.edges()[e]) {
            if (!placed[u]) {
              placed[u] = true;
              queue.push_back(u);
            }
          }
        }
      }
    }
  }

  bool consistent(std::uint32_t v, std::uint32_t w) {
    for (std::size_t i = 0; i < depth_; ++i) {
      std::uint32_t u = order_[i];
      if (pd_a_[v][u] != pd_b_[w][map_[u]]) return false;
    }
    map_[v] = w;
    reverse_[w] = v;
    bool ok = true;
    for (std::uint32_t e : a_.incident(v)) {
      const Edge& edge = a_.edges()[e];
      if (map_[edge[0]] == UINT32_MAX || map_[edge[1]] == UINT32_MAX || map_[edge[2]] == UINT32_MAX) continue;
      if (count_of(triples_b_, sorted_image(edge, map_)) != count_of(triples_a_, edge)) ok = false;
    }
    for (std::uint32_t e : b_.incident(w)) {
      const Edge& edge = b_.edges()[e];
      if (reverse_[edge[0]] == UINT32_MAX || reverse_[edge[1]] == UINT32_MAX || reverse_[edge[2]] == UINT32_MAX) {
        continue;
      }
      if (count_of(triples_a_, sorted_image(edge, reverse_)) != count_of(triples_b_, edge)) ok = false;
    }
    if (!ok) {
      map_[v] = UINT32_MAX;
      reverse_[w] = UINT32_MAX;
    }
    return ok;
  }

  bool extend(std::size_t depth) {
    if (depth == order_.size()) return true;
    depth_ = depth;
    const std::uint32_t v = order_[depth];
    for (std::uint32_t w = 0; w < b_.vertex_count(); ++w) {
      if (reverse_[w] != UINT32_MAX || inv_b_[w] != inv_a_[v]) continue;
      depth_ = depth;
      if (!consistent(v, w)) continue;
      if (extend(depth + 1)) return true;
      map_[v] = UINT32_MAX;
      reverse_[w] = UINT32_MAX;
    }
    return false;
  }

  const UnionHypergraph& a_;
  const UnionHypergraph& b_;
  PairDegrees pd_a_, pd_b_;
  TripleCounts triples_a_, triples_b_;
  std::vector<std::vector<std::uint32_t>> inv_a_, inv_b_;
  std::vector<std::uint32_t> order_;
  std::vector<std::uint32_t> map_, reverse_;
  std::size_t depth_ = 0;
};

}  // namespace

std::optional<std::vector<std::uint32_t>> is_isomorphic(const UnionHypergraph& first, const UnionHypergraph& second) {
  if (first.vertex_count() != second.vertex_count()) {
    throw Error(ErrorCode::SizeMismatch, "hypergraphs have different vertex counts");
  }
  return IsomorphismSearch(first, second).run();
}

bool is_isomorphism(const UnionHypergraph& first, const UnionHypergraph& second,
                    const std::vector<std::uint32_t>& map) {
  const std::uint32_t n = first.vertex_count();
  if (second.vertex_count() != n || map.size() != n || first.edge_count() != second.edge_count()) return false;
  std::vector<bool> hit(n, false);
  for (std::uint32_t w : map) {
    if (w >= n || hit[w]) return false;
    hit[w] = true;
  }
  std::vector<Edge> image;
  for (const Edge& e : first.edges()) image.push_back(sorted_image(e, map));
  std::vector<Edge> target = second.edges();
  std::sort(image.begin(), image.end());
  std::sort(target.begin(), target.end());
  return image == target;
}

}  // namespace hyperfact
