#include <charconv>
#include <ostream>

#include "hyperfact/group_analysis.hpp"
#include "hyperfact/verifier.hpp"

namespace hyperfact {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::uint64_t parse_uint(std::string_view key, std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::ParseError, "'" + std::string(key) + "' needs a non-negative integer, got '" +
                                           std::string(text) + "'");
  }
  return v;
}

std::uint32_t parse_u32(std::string_view key, std::string_view text) {
  std::uint64_t v = parse_uint(key, text);
  if (v > UINT32_MAX) throw Error(ErrorCode::ParseError, "'" + std::string(key) + "' is out of range");
  return static_cast<std::uint32_t>(v);
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw Error(ErrorCode::ParseError, "'" + std::string(key) + "' needs true or false");
}

std::vector<std::uint32_t> parse_list(std::string_view key, std::string_view text) {
  std::vector<std::uint32_t> out;
  text = trim(text);
  while (!text.empty()) {
    std::size_t comma = text.find(',');
    out.push_back(parse_u32(key, text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

json field_json(const FieldCtx& ctx) {
  return {{"p", ctx.characteristic()}, {"l", ctx.degree()}, {"modulus", ctx.modulus()}};
}

json histogram_json(const std::map<std::uint32_t, std::uint64_t>& histogram) {
  json out = json::object();
  for (auto [k, v] : histogram) out[std::to_string(k)] = v;
  return out;
}

// Structural checks attached to one q; each carries an "ok" flag.
json field_checks(const Factorisation& fz) {
  const FieldCtx& ctx = fz.field();
  const std::uint32_t q = ctx.order(), p = ctx.characteristic();
  json checks = json::object();
  if (ctx.degree() == 1 && p > 5) {
    const FieldElement minus_one = ctx.neg(ctx.one());
    const std::uint32_t overlap = pair_overlap(fz[0], fz[fz.index_of(minus_one, ctx.zero())]).count;
    const bool five_square = ctx.is_square(ctx.from_int(5));
    checks["overlap_at_minus_one"] = {
        {"overlap", overlap}, {"five_is_square", five_square}, {"ok", overlap == (five_square ? 3u : 1u)}};
  }
  if (p == 5 && ctx.degree() > 1) {
    std::uint64_t checked = 0, failures = 0;
    for (std::uint32_t v = 5; v < q; ++v) {
      ++checked;
      if (!overlap_discriminant_check(ctx, FieldElement{v}).ok()) ++failures;
    }
    checks["discriminants"] = {{"alphas", checked}, {"failures", failures}, {"ok", failures == 0}};
  }
  if (p == 2 && ctx.degree() > 1) {
    SerreConditions s = serre_conditions(ctx);
    checks["serre"] = {{"has_a4", s.has_a4}, {"has_a5", s.has_a5}, {"ok", !s.has_a4}};
  }
  return checks;
}

json trace_scan_json(const TraceScan& s) {
  const FieldCtx ctx = FieldCtx::create(2, s.degree);
  json witnesses = json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(s.witnesses_eq4.size(), 8); ++i) {
    witnesses.push_back(ctx.to_string(s.witnesses_eq4[i]));
  }
  const bool expected_pattern = s.degree == 3 ? s.witnesses_eq4.empty() && s.all_trace1
                                               : !s.witnesses_eq4.empty() && !s.all_trace1;
  json out = {{"l", s.degree},
              {"eq4_witness_count", s.witnesses_eq4.size()},
              {"eq4_witnesses", witnesses},
              {"all_trace1", s.all_trace1},
              {"trace1_count", s.trace1_count},
              {"poly_root_count", s.poly_root_count},
              {"root_bound", s.root_bound},
              {"ok", s.ok() && expected_pattern}};
  if (s.trace1_counterexample) out["trace1_counterexample"] = ctx.to_string(*s.trace1_counterexample);
  return out;
}

void count_checks(const json& checks, std::uint64_t& failures) {
  for (const auto& [name, c] : checks.items()) {
    if (!c.value("ok", false)) ++failures;
  }
}

}  // namespace

std::vector<std::uint32_t> default_suite_qs() { return {2, 5, 8, 11, 17, 23, 29, 32, 41, 47, 53, 59, 125}; }

SuiteConfig default_suite_config() {
  SuiteConfig c;
  c.qs = default_suite_qs();
  c.scans = {3, 5, 7, 9, 11, 13};
  return c;
}

SuiteConfig parse_suite_config(std::string_view text) {
  SuiteConfig c;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key == "q") {
      c.qs = value == "default" ? default_suite_qs() : parse_list(key, value);
    } else if (key == "c1f_full_max_q") {
      c.c1f_full_max_q = parse_u32(key, value);
    } else if (key == "hb1f_full_max_q") {
      c.hb1f_full_max_q = parse_u32(key, value);
    } else if (key == "hb1f_sampled_q") {
      c.hb1f_sampled_q = parse_list(key, value);
    } else if (key == "hb1f_samples") {
      c.hb1f_samples = parse_uint(key, value);
    } else if (key == "seed") {
      c.seed = parse_uint(key, value);
    } else if (key == "time_budget_ms") {
      c.time_budget = std::chrono::milliseconds(parse_uint(key, value));
    } else if (key == "acceptance") {
      c.acceptance = parse_bool(key, value);
    } else if (key == "timing") {
      c.timing = parse_bool(key, value);
    } else if (key == "scans") {
      c.scans = parse_list(key, value);
    } else if (key == "workers") {
      c.workers = parse_u32(key, value);
    } else if (key.rfind("expect.", 0) == 0) {
      std::string_view rest = std::string_view(key).substr(7);
      std::size_t dot = rest.find('.');
      auto property = parse_property(rest.substr(0, dot));
      if (dot == std::string_view::npos || !property) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bad key '" + key + "'");
      }
      c.expectations[{*property, parse_u32(key, rest.substr(dot + 1))}] = parse_bool(key, value);
    } else {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  return c;
}

json verdict_json(const TheoremVerdict& v, bool timing) {
  json out = {{"name", property_name(v.property)}, {"coverage", coverage_name(v.coverage)}};
  if (v.computed == Outcome::Indeterminate) {
    out["computed"] = "indeterminate";
    out["reason"] = v.reason;
  } else {
    out["computed"] = v.computed == Outcome::True;
  }
  out["predicted"] = v.predicted;
  out["discrepancy"] = v.discrepancy();
  if (!v.witness.is_null()) out["witness"] = v.witness;
  json stats = v.details;
  stats["tasks"] = v.tasks;
  if (timing) stats["elapsed_ms"] = v.elapsed_ms;
  out["stats"] = stats;
  return out;
}

SuiteReport run_suite(const SuiteConfig& config, std::ostream* log) {
  SuiteReport report;
  json reports = json::array();
  std::uint64_t failed_checks = 0;

  for (std::uint32_t q : config.qs) {
    auto pl = prime_power_decomposition(q);
    if (!pl) throw Error(ErrorCode::NotPrimePower, std::to_string(q) + " is not a prime power");
    const FieldCtx ctx = FieldCtx::create(pl->first, pl->second);
    const Factorisation fz = Factorisation::build(ctx);

    std::vector<TheoremVerdict> verdicts;
    verdicts.push_back(check_c1f(fz, SweepMode::Reduced, config.workers));
    if (q <= config.c1f_full_max_q) verdicts.push_back(check_c1f(fz, SweepMode::Full, config.workers));
    UniformityVerdicts u = check_u1f(fz, config.workers);
    verdicts.push_back(u.u1f);
    verdicts.push_back(u.uc1f);
    HB1FOptions hb;
    hb.budget = config.time_budget;
    hb.workers = config.workers;
    if (std::find(config.hb1f_sampled_q.begin(), config.hb1f_sampled_q.end(), q) != config.hb1f_sampled_q.end()) {
      hb.mode = SweepMode::Sampled;
      hb.samples = config.hb1f_samples;
      hb.seed = config.seed;
    } else if (q <= config.hb1f_full_max_q) {
      hb.mode = SweepMode::Full;
    }
    verdicts.push_back(check_hb1f(fz, hb));

    json properties = json::array();
    for (TheoremVerdict& v : verdicts) {
      if (auto it = config.expectations.find({v.property, q}); it != config.expectations.end()) {
        v.predicted = it->second;
      }
      if (v.discrepancy()) ++report.discrepancies;
      if (v.computed == Outcome::Indeterminate && v.reason == "timeout") ++report.indeterminate;
      properties.push_back(verdict_json(v, config.timing));
      if (log) {
        *log << "q=" << q << ' ' << property_name(v.property) << ' ' << coverage_name(v.coverage)
             << ": computed " << outcome_name(v.computed) << ", predicted " << (v.predicted ? "true" : "false")
             << (v.discrepancy() ? "  DISCREPANCY" : "") << '\n';
      }
      report.verdicts.push_back(std::move(v));
    }

    json checks = field_checks(fz);
    count_checks(checks, failed_checks);
    reports.push_back({{"q", q},
                       {"field", field_json(ctx)},
                       {"properties", properties},
                       {"histograms", {{"overlap", histogram_json(overlap_distribution(fz))}}},
                       {"scans", checks}});
  }

  json trace = json::array();
  for (std::uint32_t l : config.scans) {
    json s = trace_scan_json(trace_condition_scan(l));
    if (!s["ok"].get<bool>()) ++failed_checks;
    if (log) *log << "trace scan l=" << l << (s["ok"].get<bool>() ? ": ok" : ": FAILED") << '\n';
    trace.push_back(std::move(s));
  }

  report.discrepancies += failed_checks;
  if (report.discrepancies > 0) {
    report.exit_code = 1;
  } else if (config.acceptance && report.indeterminate > 0) {
    report.exit_code = 2;
  }
  report.json = {{"seed", config.seed},
                 {"reports", reports},
                 {"scans", {{"trace", trace}}},
                 {"discrepancies", report.discrepancies},
                 {"indeterminate", report.indeterminate},
                 {"exit_code", report.exit_code}};
  return report;
}

}  // namespace hyperfact
