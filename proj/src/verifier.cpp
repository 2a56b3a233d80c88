#include "hyperfact/verifier.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <thread>

#include "sweep.hpp"

namespace hyperfact {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

unsigned resolve(unsigned workers) { return workers == 0 ? default_workers() : workers; }

// (p, l) for a q the family is defined for.
std::pair<std::uint32_t, std::uint32_t> family_order(std::uint64_t q) {
  auto pl = prime_power_decomposition(q);
  if (!pl) throw Error(ErrorCode::NotPrimePower, std::to_string(q) + " is not a prime power");
  if (q % 3 != 2) throw Error(ErrorCode::BadResidue, std::to_string(q) + " is not 2 mod 3");
  return *pl;
}

json label_json(const Factorisation& fz, std::size_t i) {
  const FieldCtx& ctx = fz.field();
  return {{"index", i}, {"alpha", ctx.to_string(fz[i].label().alpha)}, {"beta", ctx.to_string(fz[i].label().beta)}};
}

json labels_json(const Factorisation& fz, std::initializer_list<std::size_t> idx) {
  json out = json::array();
  for (std::size_t i : idx) out.push_back(label_json(fz, i));
  return out;
}

class TripleConnectivity {
 public:
  explicit TripleConnectivity(std::uint32_t n) : parent_(n) {}

  bool connected(const OneFactor& a, const OneFactor& b, const OneFactor& c) {
    std::iota(parent_.begin(), parent_.end(), 0u);
    std::uint32_t merges = 0;
    const std::uint32_t target = static_cast<std::uint32_t>(parent_.size()) - 1;
    for (const OneFactor* f : {&a, &b, &c}) {
      for (const Edge& e : f->edges()) {
        merges += unite(e[0], e[1]);
        merges += unite(e[0], e[2]);
      }
      if (merges == target) return true;
    }
    return merges == target;
  }

 private:
  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::uint32_t x, std::uint32_t y) {
    x = find(x);
    y = find(y);
    if (x == y) return false;
    parent_[std::max(x, y)] = std::min(x, y);
    return true;
  }

  std::vector<std::uint32_t> parent_;
};

// Uniform integer in [0, bound) by rejection, so results do not depend on
// the standard library's distribution code.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

using Triple = std::array<std::uint32_t, 3>;

// Triples grouped into tasks so that the task order followed by the order
// inside each task is lexicographic.
struct TriplePlan {
  std::vector<Triple> samples;  // sampled mode: one triple per task
  SweepMode mode = SweepMode::Reduced;
  std::uint32_t n = 0;          // factor count

  std::size_t task_count() const {
    if (mode == SweepMode::Sampled) return samples.size();
    return n;
  }
  template <class F>
  bool for_each(std::size_t task, F&& fn) const {
    if (mode == SweepMode::Sampled) return fn(samples[task]);
    const std::uint32_t i = mode == SweepMode::Reduced ? 0 : static_cast<std::uint32_t>(task);
    const std::uint32_t j_from = mode == SweepMode::Reduced ? static_cast<std::uint32_t>(task) : i + 1;
    const std::uint32_t j_to = mode == SweepMode::Reduced ? j_from + 1 : n;
    if (mode == SweepMode::Reduced && j_from == 0) return false;
    for (std::uint32_t j = j_from; j < j_to; ++j) {
      for (std::uint32_t k = j + 1; k < n; ++k) {
        if (fn(Triple{i, j, k})) return true;
      }
    }
    return false;
  }
};

std::set<std::size_t> read_checkpoint(const std::filesystem::path& path) {
  std::set<std::size_t> done;
  std::ifstream in(path);
  std::size_t v;
  while (in >> v) done.insert(v);
  return done;
}

}  // namespace

const char* property_name(Property p) {
  switch (p) {
    case Property::C1F: return "C1F";
    case Property::U1F: return "U1F";
    case Property::UC1F: return "UC1F";
    case Property::HB1F: return "HB1F";
  }
  return "?";
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::True: return "true";
    case Outcome::False: return "false";
    case Outcome::Indeterminate: return "indeterminate";
  }
  return "?";
}

const char* coverage_name(Coverage c) {
  switch (c) {
    case Coverage::Reduced: return "reduced";
    case Coverage::Full: return "full";
    case Coverage::Sampled: return "sampled";
  }
  return "?";
}

std::optional<Property> parse_property(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "c1f") return Property::C1F;
  if (lower == "u1f") return Property::U1F;
  if (lower == "uc1f") return Property::UC1F;
  if (lower == "hb1f") return Property::HB1F;
  return std::nullopt;
}

bool predict_c1f(std::uint64_t q) {
  auto [p, l] = family_order(q);
  if (q == 2 || q == 5 || q == 11) return true;
  return p == 2 && is_prime(l);
}

bool predict_u1f(std::uint64_t q) {
  family_order(q);
  return q == 2 || q == 5 || q == 8;
}

bool predict_hb1f(std::uint64_t q) { return predict_c1f(q); }

unsigned default_workers() {
  if (const char* env = std::getenv("HYPERFACT_WORKERS")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

TheoremVerdict check_c1f(const Factorisation& fz, SweepMode mode, unsigned workers) {
  if (mode == SweepMode::Sampled) throw Error(ErrorCode::OutOfRange, "C1F has no sampled mode");
  const auto start = Clock::now();
  TheoremVerdict v;
  v.q = fz.q();
  v.property = Property::C1F;
  v.predicted = predict_c1f(fz.q());
  v.coverage = mode == SweepMode::Full ? Coverage::Full : Coverage::Reduced;

  const std::size_t n = fz.size();
  const std::size_t outer = mode == SweepMode::Full ? n : std::min<std::size_t>(n, 1);
  std::vector<std::uint64_t> scanned(outer, 0);
  std::vector<std::size_t> hit_partner(outer, 0);
  const std::size_t hit = detail::find_first(outer, resolve(workers), [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      ++scanned[i];
      if (!is_connected(make_union(fz[i], fz[j]))) {
        hit_partner[i] = j;
        return true;
      }
    }
    return false;
  });

  v.tasks = std::accumulate(scanned.begin(), scanned.begin() + static_cast<std::ptrdiff_t>(std::min(hit + 1, outer)),
                            std::uint64_t{0});
  if (hit < outer) {
    const std::size_t j = hit_partner[hit];
    v.computed = Outcome::False;
    v.witness = {{"factors", labels_json(fz, {hit, j})}, {"components", components(make_union(fz[hit], fz[j]))}};
  } else {
    v.computed = Outcome::True;
  }
  v.elapsed_ms = ms_since(start);
  return v;
}

UniformityVerdicts check_u1f(const Factorisation& fz, unsigned workers) {
  const auto start = Clock::now();
  UniformityVerdicts out;
  TheoremVerdict& u = out.u1f;
  u.q = fz.q();
  u.property = Property::U1F;
  u.predicted = predict_u1f(fz.q());
  u.coverage = Coverage::Reduced;
  const std::size_t n = fz.size();

  auto finish = [&] {
    u.elapsed_ms = ms_since(start);
    TheoremVerdict& uc = out.uc1f;
    uc = u;
    uc.property = Property::UC1F;
    uc.predicted = u.predicted;  // the same set of q by the classification
    return out;
  };

  if (n < 2) {
    // A single factor: no pairs, so both properties hold vacuously.
    u.computed = Outcome::True;
    u.coverage = Coverage::Full;
    finish();
    out.uc1f.details["vacuous"] = true;
    out.u1f.details["vacuous"] = true;
    return out;
  }

  // Stage 1: isomorphic unions share their overlap number, and in a U1F
  // that number is 2.
  std::vector<std::uint32_t> overlap(n, 0);
  for (std::size_t j = 1; j < n; ++j) {
    ++u.tasks;
    overlap[j] = pair_overlap(fz[0], fz[j]).count;
    if (overlap[j] != 2) {
      u.computed = Outcome::False;
      OverlapResult r = pair_overlap(fz[0], fz[j]);
      u.witness = {{"factors", labels_json(fz, {0, j})}, {"overlap", r.count}, {"repeated_pairs", r.repeated_pairs}};
      u.details["stage"] = 1;
      return finish();
    }
  }

  // Stage 2: every pairwise union against the first one.
  const UnionHypergraph reference = make_union(fz[0], fz[1]);
  u.coverage = Coverage::Full;
  std::vector<std::uint64_t> scanned(n, 0);
  std::vector<std::size_t> hit_partner(n, 0);
  const std::size_t hit = detail::find_first(n, resolve(workers), [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      ++scanned[i];
      if (!is_isomorphic(reference, make_union(fz[i], fz[j]))) {
        hit_partner[i] = j;
        return true;
      }
    }
    return false;
  });
  u.tasks += std::accumulate(scanned.begin(), scanned.begin() + static_cast<std::ptrdiff_t>(std::min(hit + 1, n)),
                             std::uint64_t{0});
  u.details["stage"] = 2;
  if (hit < n) {
    u.computed = Outcome::False;
    u.witness = {{"factors", labels_json(fz, {hit, hit_partner[hit]})},
                 {"reference", labels_json(fz, {0, 1})},
                 {"reason", "not isomorphic to the reference union"}};
    return finish();
  }
  u.computed = Outcome::True;
  std::vector<std::uint32_t> degrees;
  for (std::uint32_t x = 0; x < reference.vertex_count(); ++x) degrees.push_back(reference.degree(x));
  const bool connected = is_connected(reference);
  u.details["common"] = {{"vertices", reference.vertex_count()},
                         {"edges", reference.edge_count()},
                         {"degrees", degrees},
                         {"overlap", 2},
                         {"connected", connected}};
  finish();
  if (!connected) {
    out.uc1f.computed = Outcome::False;
    out.uc1f.witness = {{"factors", labels_json(fz, {0, 1})}, {"components", components(reference)}};
  }
  return out;
}

TheoremVerdict check_hb1f(const Factorisation& fz, const HB1FOptions& options) {
  const auto start = Clock::now();
  TheoremVerdict v;
  v.q = fz.q();
  v.property = Property::HB1F;
  v.predicted = predict_hb1f(fz.q());
  v.coverage = options.mode == SweepMode::Full      ? Coverage::Full
               : options.mode == SweepMode::Sampled ? Coverage::Sampled
                                                    : Coverage::Reduced;
  const std::uint32_t n = static_cast<std::uint32_t>(fz.size());
  const unsigned workers = resolve(options.workers);

  TriplePlan plan;
  plan.mode = options.mode;
  plan.n = n;
  if (options.mode == SweepMode::Sampled) {
    if (options.samples == 0) throw Error(ErrorCode::OutOfRange, "sampled mode needs a sample count");
    v.details["seed"] = options.seed;
    v.details["samples"] = options.samples;
    if (n >= 3) {
      std::mt19937_64 rng(options.seed);
      for (std::uint64_t s = 0; s < options.samples; ++s) {
        Triple t;
        do {
          t = {static_cast<std::uint32_t>(bounded(rng, n)), static_cast<std::uint32_t>(bounded(rng, n)),
               static_cast<std::uint32_t>(bounded(rng, n))};
        } while (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]);
        std::sort(t.begin(), t.end());
        plan.samples.push_back(t);
      }
    }
  }
  const std::size_t tasks = n < 3 ? 0 : plan.task_count();

  auto triple_json = [&](const Triple& t) { return labels_json(fz, {t[0], t[1], t[2]}); };

  // Phase 1: connectivity, a necessary condition and far cheaper than a search.
  std::vector<std::uint64_t> scanned(tasks, 0);
  std::vector<Triple> found(tasks);
  std::mutex conn_mutex;
  std::vector<std::unique_ptr<TripleConnectivity>> pool;
  const std::size_t disconnected = detail::find_first(tasks, workers, [&](std::size_t task) {
    std::unique_ptr<TripleConnectivity> dsu;
    {
      std::lock_guard lock(conn_mutex);
      if (!pool.empty()) {
        dsu = std::move(pool.back());
        pool.pop_back();
      }
    }
    if (!dsu) dsu = std::make_unique<TripleConnectivity>(fz.q() + 1);
    bool hit = plan.for_each(task, [&](const Triple& t) {
      ++scanned[task];
      if (dsu->connected(fz[t[0]], fz[t[1]], fz[t[2]])) return false;
      found[task] = t;
      return true;
    });
    std::lock_guard lock(conn_mutex);
    pool.push_back(std::move(dsu));
    return hit;
  });
  const auto covered = [&](std::size_t hit) {
    return std::accumulate(scanned.begin(), scanned.begin() + static_cast<std::ptrdiff_t>(std::min(hit + 1, tasks)),
                           std::uint64_t{0});
  };
  if (disconnected < tasks) {
    const Triple t = found[disconnected];
    v.computed = Outcome::False;
    v.tasks = covered(disconnected);
    v.details["phase"] = "connectivity";
    v.witness = {{"factors", triple_json(t)},
                 {"disconnected", true},
                 {"components", components(make_union(fz[t[0]], fz[t[1]], fz[t[2]]))}};
    v.elapsed_ms = ms_since(start);
    return v;
  }

  // Phase 2: a Hamilton Berge cycle in every triple union.
  std::set<std::size_t> done;
  std::ofstream checkpoint;
  std::mutex checkpoint_mutex;
  if (options.checkpoint && options.mode != SweepMode::Sampled) {
    done = read_checkpoint(*options.checkpoint);
    checkpoint.open(*options.checkpoint, std::ios::app);
    if (!checkpoint) throw Error(ErrorCode::IoError, "cannot open checkpoint " + options.checkpoint->string());
  }
  std::fill(scanned.begin(), scanned.end(), 0);
  std::vector<std::uint64_t> timeouts(tasks, 0);
  std::vector<std::uint64_t> skipped(tasks, 0);
  const std::size_t failed = detail::find_first(tasks, workers, [&](std::size_t task) {
    if (done.count(task)) {
      plan.for_each(task, [&](const Triple&) {
        ++skipped[task];
        return false;
      });
      return false;
    }
    bool hit = plan.for_each(task, [&](const Triple& t) {
      ++scanned[task];
      BergeSearchResult r = has_hamilton_berge_cycle(make_union(fz[t[0]], fz[t[1]], fz[t[2]]), options.budget);
      if (r.status == SearchStatus::Timeout) ++timeouts[task];
      if (r.status != SearchStatus::NotFound) return false;
      found[task] = t;
      return true;
    });
    if (!hit && timeouts[task] == 0 && checkpoint.is_open()) {
      std::lock_guard lock(checkpoint_mutex);
      checkpoint << task << '\n' << std::flush;
    }
    return hit;
  });
  const std::size_t last = std::min(failed + 1, tasks);
  auto sum = [&](const std::vector<std::uint64_t>& xs) {
    return std::accumulate(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(last), std::uint64_t{0});
  };
  const std::uint64_t timed_out = sum(timeouts);
  v.tasks = sum(scanned) + sum(skipped);
  v.details["phase"] = "search";
  v.details["searched"] = sum(scanned);
  v.details["timeouts"] = timed_out;
  if (!done.empty()) v.details["resumed_tasks"] = done.size();
  if (failed < tasks) {
    v.computed = Outcome::False;
    v.witness = {{"factors", triple_json(found[failed])}, {"disconnected", false}};
  } else if (timed_out > 0) {
    v.computed = Outcome::Indeterminate;
    v.reason = "timeout";
  } else if (options.mode == SweepMode::Sampled) {
    v.computed = Outcome::Indeterminate;
    v.reason = "sampled";
    v.details["all_sampled_hamiltonian"] = true;
  } else {
    v.computed = Outcome::True;
  }
  v.elapsed_ms = ms_since(start);
  return v;
}

}  // namespace hyperfact
