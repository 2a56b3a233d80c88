#include "hyperfact/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "hyperfact/group_analysis.hpp"
#include "hyperfact/verifier.hpp"

namespace hyperfact {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

FieldCtx field_for(std::uint32_t q, bool need_family) {
  auto pl = prime_power_decomposition(q);
  if (!pl) throw UsageError("q = " + std::to_string(q) + " is not a prime power");
  if (need_family && q % 3 != 2) throw UsageError("q = " + std::to_string(q) + " is not 2 mod 3");
  return FieldCtx::create(pl->first, pl->second);
}

FieldElement element_arg(const FieldCtx& ctx, const std::string& name, const std::string& text) {
  try {
    return ctx.parse(text);
  } catch (const Error& e) {
    throw UsageError("--" + name + ": " + e.what());
  }
}

json field_json(const FieldCtx& ctx) {
  return {{"p", ctx.characteristic()}, {"l", ctx.degree()}, {"modulus", ctx.modulus()}};
}

std::string point_text(std::uint32_t index, std::uint32_t q) {
  return index == q ? "inf" : std::to_string(index);
}

std::string witness_text(const json& w, std::uint32_t q) {
  std::ostringstream s;
  bool first = true;
  for (const auto& [key, value] : w.items()) {
    s << (first ? "" : "; ") << key << ' ';
    first = false;
    if (key == "factors" || key == "reference") {
      for (const auto& label : value) {
        s << "(" << label["alpha"].get<std::string>() << " | " << label["beta"].get<std::string>() << ")";
      }
    } else if (key == "components" || key == "repeated_pairs") {
      for (const auto& block : value) {
        s << '{';
        for (std::size_t i = 0; i < block.size(); ++i) s << (i ? " " : "") << point_text(block[i].get<std::uint32_t>(), q);
        s << '}';
      }
    } else {
      s << (value.is_string() ? value.get<std::string>() : value.dump());
    }
  }
  return s.str();
}

// One verdict per line, then its witness indented.
std::string verdict_text(const TheoremVerdict& v) {
  std::ostringstream s;
  s << "q=" << v.q << ' ' << property_name(v.property) << ' ' << coverage_name(v.coverage)
    << " computed=" << outcome_name(v.computed) << " predicted=" << (v.predicted ? "true" : "false")
    << " tasks=" << v.tasks;
  if (!v.reason.empty()) s << " reason=" << v.reason;
  if (v.discrepancy()) s << " DISCREPANCY";
  s << '\n';
  if (!v.witness.is_null()) s << "  witness: " << witness_text(v.witness, v.q) << '\n';
  return s.str();
}

std::string points_text(const std::vector<ProjPoint>& pts, const FieldCtx& ctx) {
  std::string out = "{";
  for (std::size_t i = 0; i < pts.size(); ++i) out += (i ? " " : "") + to_string(ctx, pts[i]);
  return out + "}";
}

json points_json(const std::vector<ProjPoint>& pts, const FieldCtx& ctx) {
  json out = json::array();
  for (ProjPoint x : pts) out.push_back(x.index(ctx));
  return out;
}

struct Output {
  json doc;
  std::string text;
  int code = kExitClean;
};

struct Options {
  std::string format = "json";
  std::string out_path;
};

int emit(const Output& result, const Options& opt, std::ostream& out) {
  std::string body = opt.format == "text" ? result.text : result.doc.dump(2) + "\n";
  if (opt.out_path.empty()) {
    out << body;
  } else {
    std::ofstream file(opt.out_path, std::ios::binary);
    if (!(file << body)) throw Error(ErrorCode::IoError, "cannot write " + opt.out_path);
  }
  return result.code;
}

int verdict_exit(const std::vector<TheoremVerdict>& verdicts, bool acceptance) {
  bool indeterminate = false;
  for (const TheoremVerdict& v : verdicts) {
    if (v.discrepancy()) return kExitDiscrepancy;
    if (v.computed == Outcome::Indeterminate && v.reason == "timeout") indeterminate = true;
  }
  return acceptance && indeterminate ? kExitIndeterminate : kExitClean;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Builds the 1-factorisations F_q of the complete 3-uniform hypergraph on q+1 points and checks "
               "which of the C1F, U1F, UC1F and HB1F properties they have.",
               "hyperfact"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("-o,--out", opt.out_path, "Write the output to this file instead of stdout");

  std::uint32_t q = 0;
  // construct
  auto* construct = app.add_subcommand("construct", "Write the factorisation as a text dump");
  bool human = false;
  construct->add_option("--q", q, "Field order, a prime power = 2 mod 3")->required();
  construct->add_flag("--human", human, "Print the point at infinity as 'inf'");

  // check
  auto* check = app.add_subcommand("check", "Decide one property of F_q and compare it with the prediction");
  std::string property_text, mode = "reduced", checkpoint;
  std::optional<std::uint64_t> samples, seed;
  std::uint64_t budget_ms = kDefaultBergeBudget.count();
  std::optional<bool> expect;
  bool acceptance = false, timing = false;
  check->add_option("property", property_text, "c1f, u1f, uc1f or hb1f")
      ->required()
      ->check(CLI::IsMember({"c1f", "u1f", "uc1f", "hb1f"}, CLI::ignore_case));
  check->add_option("--q", q, "Field order")->required();
  check->add_option("--mode", mode, "reduced, full or sampled")
      ->check(CLI::IsMember({"reduced", "full", "sampled"}));
  check->add_option("--n", samples, "Sample size (sampled mode)");
  check->add_option("--seed", seed, "Random seed (sampled mode)");
  check->add_option("--budget-ms", budget_ms, "Time budget per Hamilton Berge search");
  check->add_option("--checkpoint", checkpoint, "Resume file for long HB1F sweeps");
  check->add_option("--expect", expect, "Compare against this value instead of the prediction");
  check->add_flag("--acceptance", acceptance, "Exit 2 when a search times out");
  check->add_flag("--timing", timing, "Include elapsed times");

  // overlap
  auto* overlap = app.add_subcommand("overlap", "Pair overlap of F_{1,0} with F_{alpha,beta}");
  std::string alpha_text, beta_text, first_alpha_text, first_beta_text;
  bool distribution = false, discriminant = false;
  overlap->add_option("--q", q, "Field order")->required();
  overlap->add_option("--alpha", alpha_text, "Coefficients of alpha, low degree first, e.g. 0,1");
  overlap->add_option("--beta", beta_text, "Coefficients of beta")->default_str("0");
  overlap->add_option("--first-alpha", first_alpha_text, "Use F_{first-alpha,first-beta} as the first factor");
  overlap->add_option("--first-beta", first_beta_text, "See --first-alpha");
  overlap->add_flag("--distribution", distribution, "Histogram of overlaps with F_{1,0}");
  overlap->add_flag("--discriminant", discriminant, "Discriminant check for alpha outside GF(5), q = 5^l");

  // subgroup
  auto* subgroup = app.add_subcommand("subgroup", "The subgroup <f, m_{alpha,beta}> of PGL(2,q)");
  bool exact = false, census = false, serre = false;
  std::uint64_t cap = kDefaultClosureCap;
  subgroup->add_option("--q", q, "Field order")->required();
  subgroup->add_option("--alpha", alpha_text, "Coefficients of alpha");
  subgroup->add_option("--beta", beta_text, "Coefficients of beta");
  subgroup->add_flag("--exact", exact, "Full closure instead of stopping past order 60");
  subgroup->add_option("--cap", cap, "Largest closure allowed in exact mode");
  subgroup->add_flag("--census", census, "Count factor pairs generating A4 (odd prime q <= 29)");
  subgroup->add_flag("--serre", serre, "Whether PSL(2,q) contains A4 and A5 (characteristic 2)");

  // scan-trace
  auto* scan = app.add_subcommand("scan-trace", "Trace conditions over GF(2^l)");
  std::vector<std::uint32_t> degrees;
  scan->add_option("--l", degrees, "Odd degrees in [3, 17]")->required();

  // suite
  auto* suite = app.add_subcommand("suite", "Run every check for a list of q");
  std::string config_path;
  bool verbose = false;
  suite->add_option("--config", config_path, "Key-value config file; the default suite without it");
  suite->add_option("--seed", seed, "Override the config seed");
  suite->add_flag("--acceptance", acceptance, "Exit 2 when a search times out");
  suite->add_flag("--timing", timing, "Include elapsed times");
  suite->add_flag("-v,--verbose", verbose, "Progress on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitClean : kExitUsage;
  }

  try {
    Output result;
    if (construct->parsed()) {
      const Factorisation fz = Factorisation::build(field_for(q, true));
      std::ostringstream dump;
      write_dump(dump, fz, human);
      Options raw = opt;
      raw.format = "text";
      result.text = dump.str();
      return emit(result, raw, out);
    }

    if (check->parsed()) {
      const Property property = *parse_property(property_text);
      const FieldCtx ctx = field_for(q, true);
      if (mode == "sampled" && (!samples || !seed)) throw UsageError("sampled mode needs --n and --seed");
      if (mode == "sampled" && property != Property::HB1F) throw UsageError("only hb1f has a sampled mode");
      if (mode != "reduced" && (property == Property::U1F || property == Property::UC1F)) {
        throw UsageError("u1f and uc1f take no --mode");
      }
      if (!checkpoint.empty() && property != Property::HB1F) throw UsageError("--checkpoint applies to hb1f");
      const Factorisation fz = Factorisation::build(ctx);
      const SweepMode sweep = mode == "full" ? SweepMode::Full : mode == "sampled" ? SweepMode::Sampled
                                                                                      : SweepMode::Reduced;
      TheoremVerdict v;
      if (property == Property::C1F) {
        v = check_c1f(fz, sweep);
      } else if (property == Property::HB1F) {
        HB1FOptions hb;
        hb.mode = sweep;
        hb.samples = samples.value_or(0);
        hb.seed = seed.value_or(0);
        hb.budget = std::chrono::milliseconds(budget_ms);
        if (!checkpoint.empty()) hb.checkpoint = checkpoint;
        v = check_hb1f(fz, hb);
      } else {
        UniformityVerdicts u = check_u1f(fz);
        v = property == Property::U1F ? u.u1f : u.uc1f;
      }
      if (expect) v.predicted = *expect;
      result.doc = {{"q", q}, {"field", field_json(ctx)}, {"properties", json::array({verdict_json(v, timing)})}};
      result.text = verdict_text(v);
      result.code = verdict_exit({v}, acceptance);
      return emit(result, opt, out);
    }

    if (overlap->parsed()) {
      const FieldCtx ctx = field_for(q, true);
      if (distribution) {
        auto histogram = overlap_distribution(Factorisation::build(ctx));
        json h = json::object();
        std::ostringstream text;
        text << "q=" << q << " overlap distribution:";
        for (auto [k, n] : histogram) {
          h[std::to_string(k)] = n;
          text << ' ' << k << ':' << n;
        }
        result.doc = {{"q", q}, {"histogram", h}};
        result.text = text.str() + "\n";
        return emit(result, opt, out);
      }
      if (alpha_text.empty()) throw UsageError("--alpha is required");
      const FieldElement alpha = element_arg(ctx, "alpha", alpha_text);
      if (discriminant) {
        DiscriminantReport r = overlap_discriminant_check(ctx, alpha);
        result.doc = {{"q", q},
                      {"alpha", ctx.to_string(alpha)},
                      {"overlaps", r.overlaps},
                      {"squares", r.squares},
                      {"d1_formula", r.d1_formula},
                      {"d2_formula", r.d2_formula},
                      {"product_identity", r.product_identity},
                      {"squares_give_four", r.squares_give_four},
                      {"has_overlap_four", r.has_overlap_four},
                      {"ok", r.ok()}};
        std::ostringstream text;
        text << "q=" << q << " alpha=" << ctx.to_string(alpha) << " overlaps=" << r.overlaps[0] << ','
             << r.overlaps[1] << ',' << r.overlaps[2] << " squares=" << r.squares[0] << ',' << r.squares[1] << ','
             << r.squares[2] << " ok=" << (r.ok() ? "true" : "false") << '\n';
        result.text = text.str();
        result.code = r.ok() ? kExitClean : kExitDiscrepancy;
        return emit(result, opt, out);
      }
      const FieldElement beta = element_arg(ctx, "beta", beta_text.empty() ? "0" : beta_text);
      if (alpha.is_zero()) throw UsageError("--alpha must be nonzero");
      const bool custom_first = !first_alpha_text.empty();
      const FieldElement a1 = custom_first ? element_arg(ctx, "first-alpha", first_alpha_text) : ctx.one();
      const FieldElement b1 =
          custom_first && !first_beta_text.empty() ? element_arg(ctx, "first-beta", first_beta_text) : ctx.zero();
      if (a1.is_zero()) throw UsageError("--first-alpha must be nonzero");
      const OneFactor first = build_one_factor(ctx, a1, b1);
      const OneFactor second = build_one_factor(ctx, alpha, beta);
      if (first.same_edges(second)) throw UsageError("both labels give the same factor");
      const OverlapResult r = pair_overlap(first, second);
      result.doc = {{"q", q},
                    {"first", {{"alpha", ctx.to_string(a1)}, {"beta", ctx.to_string(b1)}}},
                    {"second", {{"alpha", ctx.to_string(alpha)}, {"beta", ctx.to_string(beta)}}},
                    {"count", r.count},
                    {"repeated_pairs", r.repeated_pairs}};
      std::ostringstream text;
      text << "q=" << q << " overlap=" << r.count << " pairs=";
      for (auto [u, w] : r.repeated_pairs) text << '{' << point_text(u, q) << ' ' << point_text(w, q) << '}';
      text << '\n';
      if (!custom_first || (a1 == ctx.one() && b1.is_zero())) {
        const OverlapResult alg = overlap_algebraic(ctx, alpha, beta);
        result.doc["algebraic"] = {{"count", alg.count},
                                   {"f_equals_m", points_json(alg.f_equals_m, ctx)},
                                   {"f_inverse_equals_m", points_json(alg.f_inverse_equals_m, ctx)}};
        result.doc["agree"] = alg.count == r.count && alg.repeated_pairs == r.repeated_pairs;
        text << "algebraic=" << alg.count << " f=m " << points_text(alg.f_equals_m, ctx) << " f^-1=m "
             << points_text(alg.f_inverse_equals_m, ctx) << '\n';
        if (!result.doc["agree"].get<bool>()) result.code = kExitDiscrepancy;
      }
      result.text = text.str();
      return emit(result, opt, out);
    }

    if (subgroup->parsed()) {
      if (serre) {
        const FieldCtx ctx = field_for(q, false);
        SerreConditions s = serre_conditions(ctx);
        json roots = json::array();
        for (FieldElement x : s.a4_roots) roots.push_back(ctx.to_string(x));
        result.doc = {{"q", q}, {"has_a4", s.has_a4}, {"has_a5", s.has_a5}, {"a4_roots", roots}};
        result.text = "q=" + std::to_string(q) + " has_a4=" + (s.has_a4 ? "true" : "false") +
                      " has_a5=" + (s.has_a5 ? "true" : "false") + "\n";
        return emit(result, opt, out);
      }
      if (census) {
        A4Census c = a4_census(Factorisation::build(field_for(q, true)));
        result.doc = {{"q", q},
                      {"pairs_checked", c.pairs_checked},
                      {"a4_pair_count", c.a4_pair_count},
                      {"expected_copies", c.expected_copies},
                      {"transitive_everywhere", c.transitive_everywhere}};
        result.text = "q=" + std::to_string(q) + " pairs=" + std::to_string(c.pairs_checked) +
                      " a4_pairs=" + std::to_string(c.a4_pair_count) +
                      " expected_copies=" + std::to_string(c.expected_copies) + "\n";
        return emit(result, opt, out);
      }
      const FieldCtx ctx = field_for(q, false);
      if (alpha_text.empty()) throw UsageError("--alpha is required");
      const FieldElement alpha = element_arg(ctx, "alpha", alpha_text);
      const FieldElement beta = element_arg(ctx, "beta", beta_text.empty() ? "0" : beta_text);
      if (alpha.is_zero()) throw UsageError("--alpha must be nonzero");
      const auto gens = standard_generators(ctx, alpha, beta);
      const GeneratedSubgroup g = generate(ctx, gens, cap, exact ? ClosureMode::Exact : ClosureMode::Classify);
      const SubgroupClass cls = classify(g, ctx);
      const bool transitive = is_transitive(ctx, gens);
      json orbit_json = g.orbits;
      result.doc = {{"q", q},
                    {"alpha", ctx.to_string(alpha)},
                    {"beta", ctx.to_string(beta)},
                    {"order", g.order},
                    {"truncated", g.truncated},
                    {"class", cls.name()},
                    {"transitive", transitive},
                    {"order3_elements", g.order3_count},
                    {"orbits", orbit_json}};
      std::ostringstream text;
      text << "q=" << q << " class=" << cls.name() << " order=" << (g.truncated ? ">" : "") << g.order
           << " transitive=" << (transitive ? "true" : "false") << " orbits=";
      for (const auto& o : g.orbits) {
        text << '{';
        for (std::size_t i = 0; i < o.size(); ++i) text << (i ? " " : "") << point_text(o[i], q);
        text << '}';
      }
      result.text = text.str() + "\n";
      return emit(result, opt, out);
    }

    if (scan->parsed()) {
      result.doc = json::array();
      std::ostringstream text;
      bool all_ok = true;
      for (std::uint32_t l : degrees) {
        const TraceScan s = trace_condition_scan(l);
        const FieldCtx ctx = FieldCtx::create(2, l);
        json witnesses = json::array();
        for (FieldElement a : s.witnesses_eq4) witnesses.push_back(ctx.to_string(a));
        json entry = {{"l", l},
                      {"witnesses_eq4", witnesses},
                      {"all_trace1", s.all_trace1},
                      {"poly_root_count", s.poly_root_count},
                      {"trace1_count", s.trace1_count},
                      {"root_bound", s.root_bound},
                      {"ok", s.ok()}};
        if (s.trace1_counterexample) entry["trace1_counterexample"] = ctx.to_string(*s.trace1_counterexample);
        result.doc.push_back(entry);
        all_ok = all_ok && s.ok();
        text << "l=" << l << " eq4_witnesses=" << s.witnesses_eq4.size()
             << " all_trace1=" << (s.all_trace1 ? "true" : "false") << " roots=" << s.poly_root_count
             << " bound=" << s.root_bound << '\n';
      }
      result.text = text.str();
      result.code = all_ok ? kExitClean : kExitDiscrepancy;
      return emit(result, opt, out);
    }

    if (suite->parsed()) {
      SuiteConfig config = default_suite_config();
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw Error(ErrorCode::IoError, "cannot read " + config_path);
        std::stringstream buffer;
        buffer << in.rdbuf();
        config = parse_suite_config(buffer.str());
      }
      if (seed) config.seed = *seed;
      config.acceptance = config.acceptance || acceptance;
      config.timing = config.timing || timing;
      SuiteReport report = run_suite(config, verbose ? &err : nullptr);
      result.doc = report.json;
      std::ostringstream text;
      for (const TheoremVerdict& v : report.verdicts) text << verdict_text(v);
      for (const auto& s : report.json["scans"]["trace"]) {
        text << "trace l=" << s["l"] << " ok=" << (s["ok"].get<bool>() ? "true" : "false") << '\n';
      }
      text << "discrepancies=" << report.discrepancies << " indeterminate=" << report.indeterminate
           << " exit=" << report.exit_code << '\n';
      result.text = text.str();
      result.code = report.exit_code;
      return emit(result, opt, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace hyperfact
