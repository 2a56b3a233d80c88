#include "hyperfact/factorisation.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace hyperfact {

namespace {

// Factorisations above this order would need gigabytes; nothing here uses them.
constexpr std::uint32_t kMaxFactorisationOrder = 2048;

struct EdgeListHash {
  std::size_t operator()(const std::vector<Edge>& edges) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (const Edge& e : edges) {
      for (std::uint32_t v : e) {
        h ^= v;
        h *= 1099511628211ull;
      }
    }
    return static_cast<std::size_t>(h);
  }
};

void require_residue(std::uint32_t q) {
  if (q % 3 != 2) {
    throw Error(ErrorCode::BadResidue, "q = " + std::to_string(q) + " is not 2 mod 3");
  }
}

std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

}  // namespace

OneFactor::OneFactor(FactorLabel label, std::vector<Edge> edges, std::uint32_t vertex_count)
    : label_(label), edges_(std::move(edges)), block_of_(vertex_count, vertex_count) {
  std::sort(edges_.begin(), edges_.end());
  for (std::uint32_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (!(e[0] < e[1] && e[1] < e[2]) || e[2] >= vertex_count) {
      throw Error(ErrorCode::OutOfRange, "edge is not a sorted triple of valid points");
    }
    for (std::uint32_t v : e) {
      if (block_of_[v] != vertex_count) throw Error(ErrorCode::OutOfRange, "edges of a 1-factor overlap");
      block_of_[v] = i;
    }
  }
  if (edges_.size() * 3 != vertex_count) throw Error(ErrorCode::OutOfRange, "edges do not cover every point");
}

OneFactor build_one_factor(const FieldCtx& ctx, FieldElement alpha, FieldElement beta) {
  const std::uint32_t q = ctx.order();
  require_residue(q);
  std::vector<std::uint32_t> image = point_permutation(ctx, make_m(ctx, alpha, beta));
  std::vector<bool> seen(q + 1, false);
  std::vector<Edge> edges;
  edges.reserve((q + 1) / 3);
  for (std::uint32_t v = 0; v <= q; ++v) {
    if (seen[v]) continue;
    Edge e{v, image[v], image[image[v]]};
    if (image[e[2]] != v || e[0] == e[1] || e[1] == e[2] || e[0] == e[2]) {
      throw std::logic_error("m_{alpha,beta} has an orbit that is not a 3-cycle");
    }
    for (std::uint32_t x : e) seen[x] = true;
    std::sort(e.begin(), e.end());
    edges.push_back(e);
  }
  return OneFactor({alpha, beta}, std::move(edges), q + 1);
}

Factorisation::Factorisation(FieldCtx ctx, std::vector<OneFactor> factors)
    : ctx_(std::move(ctx)), factors_(std::move(factors)) {}

Factorisation Factorisation::build(const FieldCtx& ctx) {
  const std::uint32_t q = ctx.order();
  require_residue(q);
  if (q > kMaxFactorisationOrder) throw Error(ErrorCode::TooLarge, "factorisation order too large");

  std::vector<OneFactor> factors;
  std::vector<std::uint32_t> label_index(static_cast<std::size_t>(q) * q, UINT32_MAX);
  factors.reserve(static_cast<std::size_t>(q) * (q - 1) / 2);
  std::unordered_map<std::vector<Edge>, std::uint32_t, EdgeListHash> by_edges;
  for (std::uint32_t a = 1; a < q; ++a) {
    for (std::uint32_t b = 0; b < q; ++b) {
      OneFactor factor = build_one_factor(ctx, FieldElement{a}, FieldElement{b});
      auto [it, inserted] = by_edges.try_emplace(factor.edges(), static_cast<std::uint32_t>(factors.size()));
      if (inserted) factors.push_back(std::move(factor));
      label_index[static_cast<std::size_t>(a) * q + b] = it->second;
    }
  }
  Factorisation out{ctx, std::move(factors)};
  out.label_index_ = std::move(label_index);
  return out;
}

void Factorisation::index_labels() {
  const std::uint32_t q = ctx_.order();
  std::unordered_map<std::vector<Edge>, std::uint32_t, EdgeListHash> by_edges;
  for (std::uint32_t i = 0; i < factors_.size(); ++i) by_edges.emplace(factors_[i].edges(), i);
  label_index_.assign(static_cast<std::size_t>(q) * q, UINT32_MAX);
  for (std::uint32_t a = 1; a < q; ++a) {
    for (std::uint32_t b = 0; b < q; ++b) {
      OneFactor factor = build_one_factor(ctx_, FieldElement{a}, FieldElement{b});
      auto it = by_edges.find(factor.edges());
      if (it == by_edges.end()) {
        parse_fail("dump lacks the factor of label (" + ctx_.to_string(FieldElement{a}) + "; " +
                   ctx_.to_string(FieldElement{b}) + ")");
      }
      label_index_[static_cast<std::size_t>(a) * q + b] = it->second;
    }
  }
}

std::size_t Factorisation::index_of(FieldElement alpha, FieldElement beta) const {
  if (alpha.is_zero()) throw Error(ErrorCode::AlphaZero, "factor labels need alpha != 0");
  const std::uint32_t q = ctx_.order();
  if (alpha.value() >= q || beta.value() >= q) throw Error(ErrorCode::OutOfRange, "label outside the field");
  return label_index_[static_cast<std::size_t>(alpha.value()) * q + beta.value()];
}

std::vector<FactorLabel> Factorisation::labels_of(std::size_t i) const {
  const std::uint32_t q = ctx_.order();
  std::vector<FactorLabel> out;
  for (std::uint32_t a = 1; a < q; ++a) {
    for (std::uint32_t b = 0; b < q; ++b) {
      if (label_index_[static_cast<std::size_t>(a) * q + b] == i) out.push_back({FieldElement{a}, FieldElement{b}});
    }
  }
  return out;
}

PartitionReport verify_partition(const Factorisation& factorisation) {
  const std::uint64_t n = factorisation.q() + 1;
  PartitionReport report;
  report.expected_edges = choose(n, 3);
  std::vector<std::uint8_t> hits(report.expected_edges, 0);
  for (const OneFactor& factor : factorisation.factors()) {
    for (const Edge& e : factor.edges()) {
      std::uint64_t rank = choose(e[2], 3) + choose(e[1], 2) + e[0];
      if (hits[rank] == 0) {
        ++report.total_edges;
        hits[rank] = 1;
      } else {
        ++report.duplicates;
      }
    }
  }
  report.missing = report.expected_edges - report.total_edges;
  return report;
}

void write_dump(std::ostream& out, const Factorisation& factorisation, bool human_readable) {
  const FieldCtx& ctx = factorisation.field();
  const std::uint32_t q = ctx.order();
  out << "q=" << q << " p=" << ctx.characteristic() << " l=" << ctx.degree() << " modulus=";
  for (std::size_t i = 0; i < ctx.modulus().size(); ++i) out << (i ? "," : "") << ctx.modulus()[i];
  out << '\n';
  auto point = [&](std::uint32_t v) { return human_readable && v == q ? std::string("inf") : std::to_string(v); };
  for (std::size_t i = 0; i < factorisation.size(); ++i) {
    const OneFactor& f = factorisation[i];
    out << "factor " << i << " alpha=" << ctx.to_string(f.label().alpha) << " beta=" << ctx.to_string(f.label().beta)
        << '\n';
    for (const Edge& e : f.edges()) out << point(e[0]) << ' ' << point(e[1]) << ' ' << point(e[2]) << '\n';
  }
}

Factorisation read_dump(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) parse_fail("empty dump");
  std::uint32_t q = 0, p = 0, l = 0;
  std::string modulus_text;
  {
    std::istringstream header(line);
    std::string token;
    while (header >> token) {
      auto eq = token.find('=');
      if (eq == std::string::npos) parse_fail("bad header token '" + token + "'");
      std::string key = token.substr(0, eq), value = token.substr(eq + 1);
      try {
        if (key == "q") q = static_cast<std::uint32_t>(std::stoul(value));
        else if (key == "p") p = static_cast<std::uint32_t>(std::stoul(value));
        else if (key == "l") l = static_cast<std::uint32_t>(std::stoul(value));
        else if (key == "modulus") modulus_text = value;
        else parse_fail("unknown header key '" + key + "'");
      } catch (const std::logic_error&) {
        parse_fail("bad header value '" + token + "'");
      }
    }
  }
  FieldCtx ctx = FieldCtx::create(p, l);
  std::string expected_modulus;
  for (std::size_t i = 0; i < ctx.modulus().size(); ++i) {
    expected_modulus += (i ? "," : "") + std::to_string(ctx.modulus()[i]);
  }
  if (ctx.order() != q || modulus_text != expected_modulus) parse_fail("header does not describe GF(q)");

  std::vector<OneFactor> factors;
  const std::uint32_t edges_per_factor = (q + 1) / 3;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream head(line);
    std::string word, alpha_text, beta_text;
    std::size_t idx = 0;
    if (!(head >> word >> idx >> alpha_text >> beta_text) || word != "factor" || idx != factors.size() ||
        alpha_text.rfind("alpha=", 0) != 0 || beta_text.rfind("beta=", 0) != 0) {
      parse_fail("bad factor header '" + line + "'");
    }
    FactorLabel label{ctx.parse(alpha_text.substr(6)), ctx.parse(beta_text.substr(5))};
    std::vector<Edge> edges;
    for (std::uint32_t k = 0; k < edges_per_factor; ++k) {
      if (!std::getline(in, line)) parse_fail("truncated factor " + std::to_string(idx));
      std::istringstream row(line);
      Edge e{};
      for (std::uint32_t& v : e) {
        std::string tok;
        if (!(row >> tok)) parse_fail("short edge line '" + line + "'");
        if (tok == "inf") {
          v = q;
        } else {
          try {
            v = static_cast<std::uint32_t>(std::stoul(tok));
          } catch (const std::logic_error&) {
            parse_fail("bad point '" + tok + "'");
          }
        }
      }
      std::sort(e.begin(), e.end());
      edges.push_back(e);
    }
    factors.emplace_back(label, std::move(edges), q + 1);
  }
  Factorisation out{ctx, std::move(factors)};
  out.index_labels();
  // Labels are visited in increasing order, so the first hit is canonical.
  std::vector<bool> labelled(out.size(), false);
  for (std::uint32_t a = 1; a < q; ++a) {
    for (std::uint32_t b = 0; b < q; ++b) {
      std::size_t i = out.label_index_[static_cast<std::size_t>(a) * q + b];
      if (labelled[i]) continue;
      labelled[i] = true;
      if (out[i].label() != FactorLabel{FieldElement{a}, FieldElement{b}}) {
        parse_fail("factor " + std::to_string(i) + " is not labelled canonically");
      }
    }
  }
  if (std::find(labelled.begin(), labelled.end(), false) != labelled.end()) {
    parse_fail("dump contains a factor outside the family");
  }
  return out;
}

}  // namespace hyperfact
