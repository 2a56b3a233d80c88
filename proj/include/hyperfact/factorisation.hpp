#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hyperfact/finite_field.hpp"
#include "hyperfact/proj_line.hpp"

namespace hyperfact {

// Three point indices in increasing order.
using Edge = std::array<std::uint32_t, 3>;

struct FactorLabel {
  FieldElement alpha;
  FieldElement beta;

  friend constexpr auto operator<=>(const FactorLabel&, const FactorLabel&) = default;
};

// A perfect matching of the q+1 points of PG(1,q) by triples.
class OneFactor {
 public:
  // Throws OutOfRange unless the edges are sorted triples partitioning
  // {0, ..., vertex_count - 1}.  The edge list is sorted on construction.
  OneFactor(FactorLabel label, std::vector<Edge> edges, std::uint32_t vertex_count);

  const FactorLabel& label() const { return label_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::uint32_t vertex_count() const { return static_cast<std::uint32_t>(block_of_.size()); }
  // Index into edges() of the edge containing v.
  std::uint32_t block_of(std::uint32_t v) const { return block_of_[v]; }

  bool same_edges(const OneFactor& other) const { return edges_ == other.edges_; }
  friend bool operator==(const OneFactor& a, const OneFactor& b) {
    return a.label_ == b.label_ && a.edges_ == b.edges_;
  }

 private:
  FactorLabel label_;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> block_of_;
};

// Orbits of <m_{alpha,beta}> on PG(1,q).  Needs q = 2 mod 3.
OneFactor build_one_factor(const FieldCtx& ctx, FieldElement alpha, FieldElement beta);

// The family {F_{alpha,beta}} with duplicate factors merged.  Factors are
// ordered by their canonical label, the smallest (alpha, beta) producing
// them, so factor 0 is always F_{1,0}.
class Factorisation {
 public:
  static Factorisation build(const FieldCtx& ctx);

  const FieldCtx& field() const { return ctx_; }
  std::uint32_t q() const { return ctx_.order(); }
  std::size_t size() const { return factors_.size(); }
  const OneFactor& operator[](std::size_t i) const { return factors_[i]; }
  const std::vector<OneFactor>& factors() const { return factors_; }

  std::size_t index_of(FieldElement alpha, FieldElement beta) const;
  std::size_t base_index() const { return index_of(ctx_.one(), ctx_.zero()); }
  // Every label (alpha, beta) that produces factor i, in increasing order.
  std::vector<FactorLabel> labels_of(std::size_t i) const;

  friend bool operator==(const Factorisation& a, const Factorisation& b) {
    return a.ctx_ == b.ctx_ && a.factors_ == b.factors_;
  }

 private:
  Factorisation(FieldCtx ctx, std::vector<OneFactor> factors);
  // Fills label_index_ by rebuilding every F_{alpha,beta} and matching edge
  // sets; throws ParseError if some label has no matching factor.
  void index_labels();

  FieldCtx ctx_;
  std::vector<OneFactor> factors_;
  std::vector<std::uint32_t> label_index_;  // alpha * q + beta

  friend Factorisation read_dump(std::istream& in);
};

struct PartitionReport {
  std::uint64_t expected_edges = 0;  // C(q+1, 3)
  std::uint64_t total_edges = 0;     // distinct triples seen
  std::uint64_t duplicates = 0;
  std::uint64_t missing = 0;

  bool ok() const { return duplicates == 0 && missing == 0 && total_edges == expected_edges; }
};

PartitionReport verify_partition(const Factorisation& factorisation);

// Text dump: a header "q=.. p=.. l=.. modulus=c0,c1,..", then per factor a
// line "factor <i> alpha=<coeffs> beta=<coeffs>" followed by one "a b c" line
// per edge.  The human-readable variant prints infinity as "inf" instead of q.
void write_dump(std::ostream& out, const Factorisation& factorisation, bool human_readable);
// Accepts either variant; throws ParseError on malformed or inconsistent input.
Factorisation read_dump(std::istream& in);

}  // namespace hyperfact
