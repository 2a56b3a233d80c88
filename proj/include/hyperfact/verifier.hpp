#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hyperfact/factorisation.hpp"
#include "hyperfact/finite_field.hpp"
#include "hyperfact/hypergraph.hpp"

namespace hyperfact {

enum class Property { C1F, U1F, UC1F, HB1F };
enum class Outcome { True, False, Indeterminate };
enum class Coverage { Reduced, Full, Sampled };

const char* property_name(Property p);
const char* outcome_name(Outcome o);
const char* coverage_name(Coverage c);
std::optional<Property> parse_property(std::string_view text);

struct TheoremVerdict {
  std::uint32_t q = 0;
  Property property = Property::C1F;
  Outcome computed = Outcome::Indeterminate;
  bool predicted = false;
  Coverage coverage = Coverage::Reduced;
  std::string reason;               // why Indeterminate: "timeout" or "sampled"
  nlohmann::json witness;           // null when there is none
  std::uint64_t tasks = 0;          // pairs or triples examined
  nlohmann::json details = nlohmann::json::object();
  double elapsed_ms = 0;

  bool discrepancy() const {
    return computed != Outcome::Indeterminate && (computed == Outcome::True) != predicted;
  }
};

// Closed forms.  Both throw NotPrimePower or BadResidue for unsuitable q.
bool predict_c1f(std::uint64_t q);
bool predict_u1f(std::uint64_t q);
// Taken to coincide with predict_c1f.
bool predict_hb1f(std::uint64_t q);

// Worker threads for sweeps: HYPERFACT_WORKERS if set, else hardware threads.
unsigned default_workers();

enum class SweepMode { Reduced, Full, Sampled };

// Reduced mode pairs F_{1,0} with every other factor; full mode takes all pairs.
TheoremVerdict check_c1f(const Factorisation& factorisation, SweepMode mode = SweepMode::Reduced,
                         unsigned workers = 0);

struct UniformityVerdicts {
  TheoremVerdict u1f;
  TheoremVerdict uc1f;
};
UniformityVerdicts check_u1f(const Factorisation& factorisation, unsigned workers = 0);

struct HB1FOptions {
  SweepMode mode = SweepMode::Reduced;
  std::uint64_t samples = 0;  // sampled mode
  std::uint64_t seed = 0;     // sampled mode
  std::chrono::milliseconds budget = kDefaultBergeBudget;  // per search
  unsigned workers = 0;
  // Full or reduced mode: finished outer indices are appended here and
  // skipped on the next run.
  std::optional<std::filesystem::path> checkpoint;
};
TheoremVerdict check_hb1f(const Factorisation& factorisation, const HB1FOptions& options = {});

// Overlap of F_{1,0} with each other factor, keyed by overlap count.
std::map<std::uint32_t, std::uint64_t> overlap_distribution(const Factorisation& factorisation);

struct TraceScan {
  std::uint32_t degree = 0;
  std::vector<FieldElement> witnesses_eq4;  // alpha with Tr(a/(a^2+a+1)^2) = 0 or Tr(a^2/(a^2+a+1)^2) = 0
  bool all_trace1 = false;                  // Tr(x + 1/x) = 1 on all of F \ {0, 1}
  std::optional<FieldElement> trace1_counterexample;
  std::uint64_t poly_root_count = 0;   // roots of the trace polynomial, by evaluation
  std::uint64_t trace1_count = 0;      // x in F \ {0, 1} with Tr(x + 1/x) = 1
  std::uint64_t root_bound = 0;        // 2^{l-1} + 2^{l-2}
  bool ok() const { return poly_root_count == trace1_count && poly_root_count <= root_bound; }
};
// GF(2^l) for odd l in [3, 17]; throws EvenDegree or OutOfRange.
TraceScan trace_condition_scan(std::uint32_t degree);

struct DiscriminantReport {
  FieldElement alpha;
  // Overlaps of F_{1,0} with F_{a,-a}, F_{a,1-a}, F_{a^2,1-a^2}.
  std::array<std::uint32_t, 3> overlaps{};
  // Squareness of a^2-a+1, a^2+a+1, a^4+a^2+1.
  std::array<bool, 3> squares{};
  bool d1_formula = false;        // discriminant equals (a-1)^2 (a^2-a+1)
  bool d2_formula = false;        // discriminant equals (a+1)^2 (a^2+a+1)
  bool product_identity = false;  // (a^2-a+1)(a^2+a+1) = a^4+a^2+1
  bool squares_give_four = false; // each square factor forces overlap 4
  bool has_overlap_four = false;
  bool ok() const { return d1_formula && d2_formula && product_identity && squares_give_four && has_overlap_four; }
};
// Needs GF(5^l) with odd l > 1 (WrongField) and alpha outside GF(5)
// (AlphaInSubfield).
DiscriminantReport overlap_discriminant_check(const FieldCtx& ctx, FieldElement alpha);

struct SuiteConfig {
  std::vector<std::uint32_t> qs;
  std::uint32_t c1f_full_max_q = 17;
  std::uint32_t hb1f_full_max_q = 11;
  std::vector<std::uint32_t> hb1f_sampled_q;
  std::uint64_t hb1f_samples = 10'000;
  std::uint64_t seed = 1;
  std::chrono::milliseconds time_budget = kDefaultBergeBudget;
  bool acceptance = false;
  bool timing = false;
  std::vector<std::uint32_t> scans;  // trace scan degrees
  // Replaces the closed-form prediction for (property, q).
  std::map<std::pair<Property, std::uint32_t>, bool> expectations;
  unsigned workers = 0;
};

std::vector<std::uint32_t> default_suite_qs();
SuiteConfig default_suite_config();

// Key-value text, one "key = value" per line, '#' starts a comment.  Keys:
// q (comma list or "default"), c1f_full_max_q, hb1f_full_max_q,
// hb1f_sampled_q, hb1f_samples, seed, time_budget_ms, acceptance, timing,
// scans, workers, expect.<property>.<q>.  Omitted lists stay empty.
// Throws ParseError.
SuiteConfig parse_suite_config(std::string_view text);

struct SuiteReport {
  nlohmann::json json;
  std::vector<TheoremVerdict> verdicts;
  std::uint64_t discrepancies = 0;   // verdict mismatches and failed scans
  std::uint64_t indeterminate = 0;   // timed-out verdicts
  int exit_code = 0;                 // 0 clean, 1 discrepancy, 2 indeterminate in acceptance mode
};

// Progress lines go to `log` when given.
SuiteReport run_suite(const SuiteConfig& config, std::ostream* log = nullptr);

nlohmann::json verdict_json(const TheoremVerdict& verdict, bool timing);

}  // namespace hyperfact
