#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hyperfact/factorisation.hpp"
#include "hyperfact/finite_field.hpp"
#include "hyperfact/proj_line.hpp"

namespace hyperfact {

// Above this size a group generated by order-3 maps of the family is the
// whole of PSL(2,q), so classification can stop early.
inline constexpr std::uint64_t kEarlyExitOrder = 60;
inline constexpr std::uint64_t kDefaultClosureCap = 2'000'000;

enum class ClosureMode {
  Exact,     // full closure; CapExceeded beyond the cap
  Classify,  // stop as soon as the group exceeds kEarlyExitOrder
};

struct GeneratedSubgroup {
  std::vector<MobiusMap> generators;
  std::vector<MobiusMap> elements;  // in discovery order, identity first
  std::uint64_t order = 0;          // a lower bound when truncated
  bool truncated = false;           // early exit taken
  std::uint64_t order3_count = 0;   // among the elements found
  // Orbits on PG(1,q) by point index, each sorted, ordered by least point.
  std::vector<std::vector<std::uint32_t>> orbits;
};

// Breadth-first closure under left multiplication by the generators and
// their inverses.  Needs q <= 2^16.
GeneratedSubgroup generate(const FieldCtx& ctx, const std::vector<MobiusMap>& gens,
                           std::uint64_t cap = kDefaultClosureCap, ClosureMode mode = ClosureMode::Exact);

// Orbit partition of the point set under the generators.
std::vector<std::vector<std::uint32_t>> orbits(const FieldCtx& ctx, const std::vector<MobiusMap>& gens);

// Whether the orbit of infinity is all of PG(1,q).
bool is_transitive(const FieldCtx& ctx, const std::vector<MobiusMap>& gens);

// q (q^2 - 1) / gcd(2, q - 1)
std::uint64_t psl_order(std::uint32_t q);

struct SubgroupClass {
  enum class Tag { C3, A4, S4, A5, FullPSL, Other };
  Tag tag = Tag::Other;
  std::uint64_t order = 0;

  std::string name() const;
  friend bool operator==(const SubgroupClass&, const SubgroupClass&) = default;
};

// By order alone; a truncated closure counts as the full group.
SubgroupClass classify(const GeneratedSubgroup& group, const FieldCtx& ctx);

// <f, m_{alpha,beta}>
std::vector<MobiusMap> standard_generators(const FieldCtx& ctx, FieldElement alpha, FieldElement beta);

struct A4Census {
  std::uint64_t pairs_checked = 0;    // unordered pairs of distinct factors
  std::uint64_t a4_pair_count = 0;    // pairs generating a group of order 12
  std::uint64_t expected_copies = 0;  // q (q^2 - 1) / 24
  bool transitive_everywhere = true;  // every pair generates a transitive group
};

// Needs an odd prime q = 2 mod 3 with q <= 29; throws OutOfRange otherwise.
A4Census a4_census(const Factorisation& factorisation);

struct SerreConditions {
  bool has_a4 = false;
  bool has_a5 = false;
  std::vector<FieldElement> a4_roots;  // solutions of x^2 + x = 1
  // Some (y, z) with y^2 + z^2 = 1, when has_a4.
  std::optional<std::pair<FieldElement, FieldElement>> a5_witness;
};

// Throws WrongCharacteristic outside characteristic 2.
SerreConditions serre_conditions(const FieldCtx& ctx);

}  // namespace hyperfact
