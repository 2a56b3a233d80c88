#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <unistd.h>

#include "hyperfact/group_analysis.hpp"
#include "hyperfact/verifier.hpp"

using namespace hyperfact;
using nlohmann::json;

namespace {

FieldCtx field(std::uint32_t q) {
  auto pl = prime_power_decomposition(q);
  return FieldCtx::create(pl->first, pl->second);
}

const std::vector<std::uint32_t> kSuiteQs = {2, 5, 8, 11, 17, 23, 29, 32, 41, 47, 53, 59, 125};

std::uint32_t trace_oracle(const FieldCtx& ctx, FieldElement x) {
  FieldElement sum = ctx.zero();
  for (std::uint32_t i = 0; i < ctx.degree(); ++i, x = ctx.square(x)) sum = ctx.add(sum, x);
  return sum.value();
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("hyperfact_" + name + "_" + std::to_string(::getpid()));
}

}  // namespace

TEST(Predictions, ClosedForms) {
  for (std::uint32_t q : kSuiteQs) {
    const bool c1f = q == 2 || q == 5 || q == 8 || q == 11 || q == 32;
    EXPECT_EQ(predict_c1f(q), c1f) << q;
    EXPECT_EQ(predict_hb1f(q), c1f) << q;
    EXPECT_EQ(predict_u1f(q), q == 2 || q == 5 || q == 8) << q;
  }
  EXPECT_TRUE(predict_c1f(128));
  EXPECT_FALSE(predict_c1f(512));
  EXPECT_THROW(predict_c1f(7), Error);
  EXPECT_THROW(predict_u1f(12), Error);
}

TEST(Properties, Names) {
  for (Property p : {Property::C1F, Property::U1F, Property::UC1F, Property::HB1F}) {
    EXPECT_EQ(parse_property(property_name(p)), p);
  }
  EXPECT_EQ(parse_property("hb1f"), Property::HB1F);
  EXPECT_FALSE(parse_property("p1f"));
}

TEST(CheckC1F, ReducedAgreesWithFull) {
  for (std::uint32_t q : {5u, 8u, 11u, 17u}) {
    Factorisation fz = Factorisation::build(field(q));
    TheoremVerdict r = check_c1f(fz, SweepMode::Reduced, 1);
    TheoremVerdict f = check_c1f(fz, SweepMode::Full, 2);
    EXPECT_EQ(r.computed, f.computed) << q;
    EXPECT_EQ(r.computed == Outcome::True, predict_c1f(q));
    EXPECT_EQ(r.coverage, Coverage::Reduced);
    EXPECT_EQ(f.coverage, Coverage::Full);
    if (r.computed == Outcome::True) {
      EXPECT_EQ(r.tasks, fz.size() - 1);
      EXPECT_EQ(f.tasks, fz.size() * (fz.size() - 1) / 2);
    }
  }
}

TEST(CheckC1F, WitnessesAreDisconnectedPairs) {
  for (std::uint32_t q : {17u, 23u, 125u}) {
    FieldCtx ctx = field(q);
    Factorisation fz = Factorisation::build(ctx);
    TheoremVerdict v = check_c1f(fz);
    ASSERT_EQ(v.computed, Outcome::False);
    EXPECT_FALSE(v.discrepancy());
    const json& w = v.witness;
    ASSERT_EQ(w["factors"].size(), 2u);
    const std::size_t i = w["factors"][0]["index"], j = w["factors"][1]["index"];
    EXPECT_EQ(i, 0u);
    auto comps = components(make_union(fz[i], fz[j]));
    EXPECT_GT(comps.size(), 1u);
    EXPECT_EQ(w["components"], json(comps));
    if (q == 125) {
      const FieldElement alpha = ctx.parse(w["factors"][1]["alpha"].get<std::string>());
      const FieldElement beta = ctx.parse(w["factors"][1]["beta"].get<std::string>());
      EXPECT_TRUE(ctx.in_prime_subfield(alpha));
      EXPECT_TRUE(ctx.in_prime_subfield(beta));
    }
  }
}

TEST(CheckC1F, WorkerCountDoesNotChangeVerdicts) {
  Factorisation fz = Factorisation::build(field(29));
  json a = verdict_json(check_c1f(fz, SweepMode::Full, 1), false);
  json b = verdict_json(check_c1f(fz, SweepMode::Full, 4), false);
  EXPECT_EQ(a, b);
  EXPECT_THROW(check_c1f(fz, SweepMode::Sampled), Error);
}

TEST(CheckU1F, MatchesPrediction) {
  for (std::uint32_t q : {2u, 5u, 8u, 11u, 17u, 32u}) {
    Factorisation fz = Factorisation::build(field(q));
    UniformityVerdicts u = check_u1f(fz);
    EXPECT_EQ(u.u1f.computed == Outcome::True, predict_u1f(q)) << q;
    if (predict_u1f(q)) {
      EXPECT_EQ(u.uc1f.computed, Outcome::True);
      if (q > 2) {
        EXPECT_EQ(u.u1f.details["stage"], 2);
        EXPECT_EQ(u.u1f.tasks, fz.size() - 1 + fz.size() * (fz.size() - 1) / 2);
        EXPECT_EQ(u.u1f.details["common"]["vertices"], q + 1);
      }
    } else {
      EXPECT_NE(u.u1f.witness["overlap"], 2);
      EXPECT_EQ(u.u1f.witness["repeated_pairs"].size(), u.u1f.witness["overlap"].get<std::size_t>());
      EXPECT_EQ(u.uc1f.computed, Outcome::False);
    }
  }
}

TEST(CheckHB1F, SmallFullSweeps) {
  for (std::uint32_t q : {5u, 8u}) {
    Factorisation fz = Factorisation::build(field(q));
    HB1FOptions opt;
    opt.mode = SweepMode::Full;
    TheoremVerdict v = check_hb1f(fz, opt);
    EXPECT_EQ(v.computed, Outcome::True) << q;
    const std::uint64_t n = fz.size();
    EXPECT_EQ(v.tasks, n * (n - 1) * (n - 2) / 6);
    EXPECT_EQ(v.details["timeouts"], 0);
  }
}

TEST(CheckHB1F, DisconnectedTripleWitness) {
  Factorisation fz = Factorisation::build(field(17));
  TheoremVerdict v = check_hb1f(fz);
  ASSERT_EQ(v.computed, Outcome::False);
  EXPECT_EQ(v.details["phase"], "connectivity");
  EXPECT_TRUE(v.witness["disconnected"].get<bool>());
  std::size_t idx[3];
  for (int k = 0; k < 3; ++k) idx[k] = v.witness["factors"][k]["index"];
  EXPECT_FALSE(is_connected(make_union(fz[idx[0]], fz[idx[1]], fz[idx[2]])));
}

TEST(CheckHB1F, TrivialFamilies) {
  TheoremVerdict v = check_hb1f(Factorisation::build(field(2)));
  EXPECT_EQ(v.computed, Outcome::True);
  EXPECT_EQ(v.tasks, 0u);
}

TEST(CheckHB1F, SampledIsDeterministic) {
  Factorisation fz = Factorisation::build(field(32));
  HB1FOptions opt;
  opt.mode = SweepMode::Sampled;
  opt.samples = 300;
  opt.seed = 42;
  opt.workers = 1;
  TheoremVerdict a = check_hb1f(fz, opt);
  opt.workers = 3;
  TheoremVerdict b = check_hb1f(fz, opt);
  EXPECT_EQ(a.computed, Outcome::Indeterminate);
  EXPECT_EQ(a.reason, "sampled");
  EXPECT_FALSE(a.discrepancy());
  EXPECT_EQ(verdict_json(a, false), verdict_json(b, false));
  opt.samples = 0;
  EXPECT_THROW(check_hb1f(fz, opt), Error);
}

TEST(CheckHB1F, CheckpointResumes) {
  const auto path = temp_path("checkpoint");
  std::filesystem::remove(path);
  Factorisation fz = Factorisation::build(field(8));
  HB1FOptions opt;
  opt.mode = SweepMode::Full;
  opt.checkpoint = path;
  TheoremVerdict first = check_hb1f(fz, opt);
  ASSERT_EQ(first.computed, Outcome::True);
  EXPECT_FALSE(first.details.contains("resumed_tasks"));
  TheoremVerdict second = check_hb1f(fz, opt);
  EXPECT_EQ(second.computed, Outcome::True);
  EXPECT_EQ(second.tasks, first.tasks);
  EXPECT_GT(second.details["resumed_tasks"].get<std::uint64_t>(), 0u);
  EXPECT_EQ(second.details["searched"], 0);
  std::filesystem::remove(path);
}

TEST(Scans, OverlapDistribution) {
  auto d5 = overlap_distribution(Factorisation::build(field(5)));
  EXPECT_EQ(d5, (std::map<std::uint32_t, std::uint64_t>{{2, 9}}));
  auto d125 = overlap_distribution(Factorisation::build(field(125)));
  EXPECT_TRUE(d125.count(4));
  std::uint64_t total = 0;
  for (auto [k, n] : d125) total += n;
  EXPECT_EQ(total, 125u * 124 / 2 - 1);
}

TEST(Scans, TraceConditionsMatchOracle) {
  const std::map<std::uint32_t, std::pair<std::size_t, std::uint64_t>> frozen = {
      {3, {0, 6}}, {5, {20, 10}}, {7, {56, 70}}, {9, {0, 258}}, {11, {0, 990}}};
  for (auto [l, expected] : frozen) {
    FieldCtx ctx = FieldCtx::create(2, l);
    TraceScan s = trace_condition_scan(l);
    EXPECT_TRUE(s.ok());
    std::size_t witnesses = 0;
    std::uint64_t trace1 = 0;
    for (std::uint32_t v = 1; v < ctx.order(); ++v) {
      const FieldElement a{v};
      const FieldElement d = ctx.square(ctx.add(ctx.add(ctx.square(a), a), ctx.one()));
      if (trace_oracle(ctx, ctx.div(a, d)) == 0 || trace_oracle(ctx, ctx.div(ctx.square(a), d)) == 0) ++witnesses;
      if (v >= 2 && trace_oracle(ctx, ctx.add(a, ctx.inv(a))) == 1) ++trace1;
    }
    EXPECT_EQ(s.witnesses_eq4.size(), witnesses) << l;
    EXPECT_EQ(s.trace1_count, trace1) << l;
    EXPECT_EQ(s.poly_root_count, trace1) << l;
    EXPECT_LE(s.poly_root_count, s.root_bound);
    EXPECT_EQ(s.root_bound, (1u << (l - 1)) + (1u << (l - 2)));
    EXPECT_EQ(s.witnesses_eq4.empty(), l == 3);
    EXPECT_EQ(s.all_trace1, l == 3);
    EXPECT_EQ(s.trace1_counterexample.has_value(), l != 3);
    if (l == 5 || l == 7) EXPECT_EQ(s.witnesses_eq4.size(), expected.first);
    EXPECT_EQ(s.poly_root_count, expected.second);
  }
  EXPECT_THROW(trace_condition_scan(4), Error);
  EXPECT_THROW(trace_condition_scan(1), Error);
  EXPECT_THROW(trace_condition_scan(19), Error);
}

TEST(Scans, DiscriminantsOverGf125) {
  FieldCtx ctx = field(125);
  for (std::uint32_t v = 5; v < 125; ++v) {
    DiscriminantReport r = overlap_discriminant_check(ctx, FieldElement{v});
    EXPECT_TRUE(r.ok()) << v;
  }
  std::mt19937 rng(50);
  for (int t = 0; t < 50; ++t) {
    const FieldElement a{5 + static_cast<std::uint32_t>(rng() % 120)}, a2 = ctx.square(a);
    const FieldElement lhs = ctx.mul(ctx.add(ctx.sub(a2, a), ctx.one()), ctx.add(ctx.add(a2, a), ctx.one()));
    EXPECT_EQ(lhs, ctx.add(ctx.add(ctx.square(a2), a2), ctx.one()));
  }
  EXPECT_THROW(overlap_discriminant_check(ctx, FieldElement{3}), Error);
  EXPECT_THROW(overlap_discriminant_check(field(25), FieldElement{7}), Error);
  EXPECT_THROW(overlap_discriminant_check(field(11), FieldElement{7}), Error);
}

TEST(Suite, ConfigParsing) {
  SuiteConfig c = parse_suite_config(
      "# comment\n q = 5, 8\nseed=9\nhb1f_sampled_q = 8\nhb1f_samples=40\nacceptance = true\n"
      "scans = 3\nexpect.c1f.17 = true\ntime_budget_ms = 500\nworkers = 2\n");
  EXPECT_EQ(c.qs, (std::vector<std::uint32_t>{5, 8}));
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.hb1f_sampled_q, (std::vector<std::uint32_t>{8}));
  EXPECT_EQ(c.hb1f_samples, 40u);
  EXPECT_TRUE(c.acceptance);
  EXPECT_EQ(c.scans, (std::vector<std::uint32_t>{3}));
  EXPECT_EQ(c.expectations.at({Property::C1F, 17}), true);
  EXPECT_EQ(c.time_budget, std::chrono::milliseconds(500));
  EXPECT_EQ(c.workers, 2u);
  EXPECT_EQ(parse_suite_config("q = default").qs, default_suite_qs());
  EXPECT_THROW(parse_suite_config("q 5"), Error);
  EXPECT_THROW(parse_suite_config("colour = red"), Error);
  EXPECT_THROW(parse_suite_config("seed = -1"), Error);
  EXPECT_THROW(parse_suite_config("expect.p1f.5 = true"), Error);
  EXPECT_THROW(parse_suite_config("acceptance = maybe"), Error);
}

TEST(Suite, EmptyConfigGivesEmptyReport) {
  SuiteReport r = run_suite(parse_suite_config(""));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_TRUE(r.json["reports"].empty());
  EXPECT_TRUE(r.json["scans"]["trace"].empty());
  EXPECT_TRUE(r.verdicts.empty());
}

TEST(Suite, DeliberateMismatchIsADiscrepancy) {
  SuiteReport r = run_suite(parse_suite_config("q = 17\nexpect.c1f.17 = true\n"));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_GE(r.discrepancies, 1u);
  bool flagged = false;
  for (const auto& p : r.json["reports"][0]["properties"]) flagged = flagged || p["discrepancy"].get<bool>();
  EXPECT_TRUE(flagged);
}

TEST(Suite, SmallSuiteIsCleanAndDeterministic) {
  SuiteConfig c = parse_suite_config("q = 2, 5, 8, 11, 125\nscans = 3, 5\nhb1f_sampled_q = 125\nhb1f_samples = 50\n");
  c.workers = 1;
  SuiteReport a = run_suite(c);
  c.workers = 3;
  SuiteReport b = run_suite(c);
  EXPECT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.json.dump(), b.json.dump());
  for (const auto& report : a.json["reports"]) {
    for (const auto& p : report["properties"]) {
      EXPECT_FALSE(p["discrepancy"].get<bool>());
      EXPECT_FALSE(p["stats"].contains("elapsed_ms"));
    }
    for (const auto& [name, check] : report["scans"].items()) EXPECT_TRUE(check["ok"].get<bool>()) << name;
    EXPECT_TRUE(report["field"].contains("modulus"));
  }
}

TEST(Suite, TimingAddsElapsed) {
  SuiteReport r = run_suite(parse_suite_config("q = 5\ntiming = true\n"));
  for (const auto& p : r.json["reports"][0]["properties"]) EXPECT_TRUE(p["stats"].contains("elapsed_ms"));
}

TEST(Suite, FieldChecksForOddPrimes) {
  SuiteReport r = run_suite(parse_suite_config("q = 11, 17\n"));
  ASSERT_EQ(r.json["reports"].size(), 2u);
  EXPECT_EQ(r.json["reports"][0]["scans"]["overlap_at_minus_one"]["overlap"], 3);
  EXPECT_EQ(r.json["reports"][1]["scans"]["overlap_at_minus_one"]["overlap"], 1);
}
