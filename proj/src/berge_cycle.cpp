#include <algorithm>
#include <bit>
#include <random>

#include "hyperfact/hypergraph.hpp"

namespace hyperfact {

namespace {

using Clock = std::chrono::steady_clock;

class Budget {
 public:
  explicit Budget(std::chrono::milliseconds budget) : deadline_(Clock::now() + budget) {}

  bool expired() {
    if ((++nodes_ & 1023) == 0 && Clock::now() > deadline_) expired_ = true;
    return expired_;
  }
  bool has_expired() const { return expired_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  Clock::time_point deadline_;
  std::uint64_t nodes_ = 0;
  bool expired_ = false;
};

// Path extension from vertex 0, edge by edge.  Works for any edge count.
class PathSearch {
 public:
  PathSearch(const UnionHypergraph& h, Budget& budget)
      : h_(h), n_(h.vertex_count()), m_(static_cast<std::uint32_t>(h.edge_count())), budget_(budget),
        visited_(n_, 0), used_(m_, 0), free_degree_(n_) {
    for (std::uint32_t v = 0; v < n_; ++v) free_degree_[v] = h.degree(v);
  }

  std::optional<BergeCycle> run() {
    visited_[0] = 1;
    path_.push_back(0);
    if (!dfs()) return std::nullopt;
    return BergeCycle{path_, path_edges_};
  }

 private:
  struct Move {
    std::uint32_t rank;
    std::uint32_t edge;
    std::uint32_t next;
  };

  // An unused edge is still usable if some future step x -> y fits inside
  // it: x the current or an unvisited vertex, y unvisited or the start.
  bool usable(std::uint32_t e, std::uint32_t current) const {
    const Edge& edge = h_.edges()[e];
    for (std::uint32_t x : edge) {
      if (x != current && visited_[x]) continue;
      for (std::uint32_t y : edge) {
        if (y != x && (!visited_[y] || y == 0)) return true;
      }
    }
    return false;
  }

  bool prunes(std::uint32_t from, std::uint32_t e, std::uint32_t to) const {
    for (std::uint32_t x : h_.edges()[e]) {
      std::uint32_t need = visited_[x] ? 1 : 2;  // start still needs its closing edge
      if (x == to) need = 1;
      if ((!visited_[x] || x == 0 || x == to) && free_degree_[x] < need) return true;
    }
    const std::uint32_t steps_left = n_ - static_cast<std::uint32_t>(path_.size()) + 1;
    const std::uint32_t edges_left = m_ - static_cast<std::uint32_t>(path_edges_.size());
    if (edges_left < steps_left) return true;
    if (edges_left == steps_left) {
      // Every remaining edge has to be used.
      for (std::uint32_t v : {from, to}) {
        for (std::uint32_t f : h_.incident(v)) {
          if (!used_[f] && !usable(f, to)) return true;
        }
      }
    }
    return false;
  }

  bool dfs() {
    if (budget_.expired()) return false;
    const std::uint32_t cur = path_.back();
    if (path_.size() == n_) {
      for (std::uint32_t e : h_.incident(cur)) {
        const Edge& edge = h_.edges()[e];
        if (!used_[e] && (edge[0] == 0 || edge[1] == 0 || edge[2] == 0)) {
          path_edges_.push_back(e);
          return true;
        }
      }
      return false;
    }

    std::vector<Move> moves;
    for (std::uint32_t e : h_.incident(cur)) {
      if (used_[e]) continue;
      for (std::uint32_t w : h_.edges()[e]) {
        if (w != cur && !visited_[w]) moves.push_back({free_degree_[w], e, w});
      }
    }
    std::sort(moves.begin(), moves.end(), [](const Move& a, const Move& b) {
      return std::tie(a.rank, a.next, a.edge) < std::tie(b.rank, b.next, b.edge);
    });

    for (const Move& mv : moves) {
      used_[mv.edge] = 1;
      for (std::uint32_t x : h_.edges()[mv.edge]) --free_degree_[x];
      visited_[mv.next] = 1;
      path_.push_back(mv.next);
      path_edges_.push_back(mv.edge);

      if (!prunes(cur, mv.edge, mv.next) && dfs()) return true;

      path_edges_.pop_back();
      path_.pop_back();
      visited_[mv.next] = 0;
      for (std::uint32_t x : h_.edges()[mv.edge]) ++free_degree_[x];
      used_[mv.edge] = 0;
      if (budget_.has_expired()) return false;
    }
    return false;
  }

  const UnionHypergraph& h_;
  const std::uint32_t n_;
  const std::uint32_t m_;
  Budget& budget_;
  std::vector<std::uint8_t> visited_;
  std::vector<std::uint8_t> used_;
  std::vector<std::uint32_t> free_degree_;
  std::vector<std::uint32_t> path_;
  std::vector<std::uint32_t> path_edges_;
};

// When there are exactly n edges the cycle uses all of them, and each edge
// joins two consecutive cycle vertices while its third vertex is skipped.
// So a cycle is a choice of skipped vertex per edge, with every v skipped
// deg(v) - 2 times, whose remaining vertex pairs form one n-cycle.  The
// search assigns skipped vertices with propagation and rejects any choice
// that closes a shorter cycle.
class SkipSearch {
 public:
  SkipSearch(const UnionHypergraph& h, Budget& budget) : h_(h), n_(h.vertex_count()), budget_(budget) {}

  std::optional<BergeCycle> run() {
    State s;
    s.allowed.assign(n_, 0b111);
    s.skipped.assign(n_, kUndecided);
    s.need.resize(n_);
    s.avail.resize(n_);
    s.end.resize(n_);
    s.size.assign(n_, 1);
    s.links.assign(n_, 0);
    for (std::uint32_t v = 0; v < n_; ++v) {
      s.need[v] = static_cast<std::int32_t>(h_.degree(v)) - 2;
      s.avail[v] = h_.degree(v);
      s.end[v] = v;
    }
    if (!propagate(s)) return std::nullopt;
    // Restarts with shuffled branching and a doubling node cutoff.  A run
    // that finishes under its cutoff has searched everything.
    for (std::uint64_t run = 0, cutoff = kFirstCutoff;; ++run, cutoff *= 2) {
      rng_.seed(run);
      nodes_left_ = cutoff;
      cut_off_ = false;
      State start = s;
      if (search(start)) return trace_cycle();
      if (!cut_off_ || budget_.has_expired()) return std::nullopt;
    }
  }

 private:
  static constexpr std::uint8_t kUndecided = 3;
  static constexpr std::uint64_t kFirstCutoff = 2048;

  struct State {
    std::vector<std::uint8_t> allowed;  // bit i: edges()[e][i] may be skipped
    std::vector<std::uint8_t> skipped;  // position of the skipped vertex
    std::vector<std::int32_t> need;     // skips still owed by v
    std::vector<std::uint32_t> avail;   // undecided edges where v may be skipped
    std::vector<std::uint32_t> end;     // other end of the path through v
    std::vector<std::uint32_t> size;    // path length, valid at path ends
    std::vector<std::uint8_t> links;    // cycle edges fixed at v
    std::uint32_t decided = 0;
  };

  void forbid(State& s, std::uint32_t e, std::uint32_t pos) const {
    s.allowed[e] &= static_cast<std::uint8_t>(~(1u << pos));
    --s.avail[h_.edges()[e][pos]];
  }

  // Would joining u and w close a cycle short of all n vertices?
  bool closes_early(const State& s, std::uint32_t u, std::uint32_t w) const {
    return s.end[u] == w && s.size[u] < n_;
  }

  bool assign(State& s, std::uint32_t e, std::uint32_t pos) const {
    const Edge& edge = h_.edges()[e];
    for (std::uint32_t i = 0; i < 3; ++i) {
      if (s.allowed[e] >> i & 1) --s.avail[edge[i]];
    }
    s.allowed[e] = static_cast<std::uint8_t>(1u << pos);
    s.skipped[e] = static_cast<std::uint8_t>(pos);
    ++s.decided;
    if (--s.need[edge[pos]] < 0) return false;

    const std::uint32_t u = edge[(pos + 1) % 3], w = edge[(pos + 2) % 3];
    if (s.links[u] == 2 || s.links[w] == 2 || closes_early(s, u, w)) return false;
    ++s.links[u];
    ++s.links[w];
    if (s.end[u] == w) return true;  // the final, Hamiltonian closure
    const std::uint32_t a = s.end[u], b = s.end[w];
    const std::uint32_t joined = s.size[a] + s.size[b];
    s.end[a] = b;
    s.end[b] = a;
    s.size[a] = s.size[b] = joined;
    return true;
  }

  bool propagate(State& s) const {
    const std::uint32_t m = static_cast<std::uint32_t>(h_.edge_count());
    for (bool changed = true; changed;) {
      changed = false;
      for (std::uint32_t e = 0; e < m; ++e) {
        if (s.skipped[e] != kUndecided) continue;
        const Edge& edge = h_.edges()[e];
        for (std::uint32_t i = 0; i < 3; ++i) {
          if (!(s.allowed[e] >> i & 1)) continue;
          const std::uint32_t u = edge[(i + 1) % 3], w = edge[(i + 2) % 3];
          if (s.need[edge[i]] == 0 || s.links[u] == 2 || s.links[w] == 2 || closes_early(s, u, w)) {
            forbid(s, e, i);
            changed = true;
          }
        }
        if (s.allowed[e] == 0) return false;
        if (std::has_single_bit(s.allowed[e])) {
          if (!assign(s, e, static_cast<std::uint32_t>(std::countr_zero(s.allowed[e])))) return false;
          changed = true;
        }
      }
      for (std::uint32_t v = 0; v < n_; ++v) {
        if (s.need[v] > static_cast<std::int32_t>(s.avail[v])) return false;
        if (s.need[v] == 0 || s.need[v] != static_cast<std::int32_t>(s.avail[v])) continue;
        // v must be skipped by every undecided edge that still allows it.
        for (std::uint32_t e : h_.incident(v)) {
          if (s.skipped[e] != kUndecided) continue;
          const Edge& edge = h_.edges()[e];
          const std::uint32_t pos = static_cast<std::uint32_t>(std::find(edge.begin(), edge.end(), v) - edge.begin());
          if (!(s.allowed[e] >> pos & 1)) continue;
          if (!assign(s, e, pos)) return false;
          changed = true;
        }
      }
    }
    return true;
  }

  // Every vertex must still be reachable through fixed or possible links.
  bool linkable(const State& s) {
    parent_.resize(n_);
    for (std::uint32_t v = 0; v < n_; ++v) parent_[v] = v;
    auto root = [&](std::uint32_t v) {
      while (parent_[v] != v) v = parent_[v] = parent_[parent_[v]];
      return v;
    };
    std::uint32_t parts = n_;
    for (std::uint32_t e = 0; e < h_.edge_count(); ++e) {
      const Edge& edge = h_.edges()[e];
      for (std::uint32_t i = 0; i < 3; ++i) {
        if (!(s.allowed[e] >> i & 1)) continue;
        const std::uint32_t a = root(edge[(i + 1) % 3]), b = root(edge[(i + 2) % 3]);
        if (a != b) {
          parent_[a] = b;
          --parts;
        }
      }
    }
    return parts == 1;
  }

  bool search(State& s) {
    if (budget_.expired()) return false;
    if (nodes_left_-- == 0) {
      cut_off_ = true;
      return false;
    }
    const std::uint32_t m = static_cast<std::uint32_t>(h_.edge_count());
    if (s.decided == m) {
      solution_ = std::move(s.skipped);
      return true;
    }
    if (!linkable(s)) return false;
    // Fewest options first; ties go to edges touching an open path end.
    std::uint32_t best = m;
    int best_score = 8;
    const std::uint32_t offset = static_cast<std::uint32_t>(rng_() % m);
    for (std::uint32_t i = 0; i < m && best_score > 4; ++i) {
      const std::uint32_t e = (i + offset) % m;
      if (s.skipped[e] != kUndecided) continue;
      const Edge& edge = h_.edges()[e];
      const bool at_end = s.links[edge[0]] == 1 || s.links[edge[1]] == 1 || s.links[edge[2]] == 1;
      const int score = 2 * std::popcount(s.allowed[e]) - (at_end ? 1 : 0);
      if (score < best_score) {
        best = e;
        best_score = score;
      }
    }
    const std::uint32_t shift = static_cast<std::uint32_t>(rng_() % 3);
    for (std::uint32_t k = 0; k < 3; ++k) {
      const std::uint32_t pos = (k + shift) % 3;
      if (!(s.allowed[best] >> pos & 1)) continue;
      State next = s;
      if (assign(next, best, pos) && propagate(next) && search(next)) return true;
      if (budget_.has_expired() || cut_off_) return false;
    }
    return false;
  }

  BergeCycle trace_cycle() const {
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> adj(n_);  // (edge, neighbour)
    for (std::uint32_t e = 0; e < h_.edge_count(); ++e) {
      const Edge& edge = h_.edges()[e];
      const std::uint32_t pos = solution_[e];
      const std::uint32_t u = edge[(pos + 1) % 3], w = edge[(pos + 2) % 3];
      adj[u].push_back({e, w});
      adj[w].push_back({e, u});
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    BergeCycle cycle;
    std::uint32_t v = 0, came_by = UINT32_MAX;
    for (std::uint32_t step = 0; step < n_; ++step) {
      auto [e, w] = adj[v][0].first != came_by ? adj[v][0] : adj[v][1];
      cycle.vertices.push_back(v);
      cycle.edges.push_back(e);
      came_by = e;
      v = w;
    }
    return cycle;
  }

  const UnionHypergraph& h_;
  const std::uint32_t n_;
  Budget& budget_;
  std::vector<std::uint8_t> solution_;
  std::vector<std::uint32_t> parent_;
  std::mt19937_64 rng_;
  std::uint64_t nodes_left_ = 0;
  bool cut_off_ = false;
};

BergeSearchResult find_berge_cycle(const UnionHypergraph& h, std::chrono::milliseconds budget, bool by_skips) {
  BergeSearchResult result;
  const std::uint32_t n = h.vertex_count();
  // A Hamilton Berge cycle needs n distinct edges and two of them at every vertex.
  bool feasible = n >= 3 && h.edge_count() >= n && is_connected(h);
  for (std::uint32_t v = 0; feasible && v < n; ++v) feasible = h.degree(v) >= 2;
  if (!feasible) return result;

  Budget clock(budget);
  std::optional<BergeCycle> cycle = by_skips ? SkipSearch(h, clock).run() : PathSearch(h, clock).run();
  result.nodes = clock.nodes();
  if (cycle) {
    result.status = SearchStatus::Found;
    result.cycle = std::move(*cycle);
  } else {
    result.status = clock.has_expired() ? SearchStatus::Timeout : SearchStatus::NotFound;
  }
  return result;
}

}  // namespace

BergeSearchResult has_hamilton_berge_cycle(const UnionHypergraph& h, std::chrono::milliseconds budget) {
  return find_berge_cycle(h, budget, h.edge_count() == h.vertex_count());
}

BergeSearchResult has_hamilton_berge_cycle_by_paths(const UnionHypergraph& h, std::chrono::milliseconds budget) {
  return find_berge_cycle(h, budget, false);
}

bool is_valid_hamilton_berge_cycle(const UnionHypergraph& h, const BergeCycle& cycle) {
  const std::uint32_t n = h.vertex_count();
  if (cycle.vertices.size() != n || cycle.edges.size() != n || n < 2) return false;
  std::vector<bool> seen_vertex(n, false), seen_edge(h.edge_count(), false);
  for (std::uint32_t v : cycle.vertices) {
    if (v >= n || seen_vertex[v]) return false;
    seen_vertex[v] = true;
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t e = cycle.edges[i];
    if (e >= h.edge_count() || seen_edge[e]) return false;
    seen_edge[e] = true;
    const Edge& edge = h.edges()[e];
    auto contains = [&](std::uint32_t v) { return std::find(edge.begin(), edge.end(), v) != edge.end(); };
    if (!contains(cycle.vertices[i]) || !contains(cycle.vertices[(i + 1) % n])) return false;
  }
  return true;
}

}  // namespace hyperfact
