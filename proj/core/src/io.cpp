#include "barron/io.hpp"

#include <fstream>
#include <sstream>

#include "barron/error.hpp"

namespace barron {

namespace {

const json& member(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::kParse, std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw Error(ErrorCode::kParse, std::string(what) + " must be a number");
  return j.get<double>();
}

int integer(const json& j, const char* what) {
  if (!j.is_number_integer()) {
    throw Error(ErrorCode::kParse, std::string(what) + " must be an integer");
  }
  return j.get<int>();
}

std::vector<double> numbers(const json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorCode::kParse, std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(number(v, what));
  return out;
}

std::size_t dimension(const json& j) {
  const int d = integer(member(j, "d"), "d");
  if (d < 1) throw Error(ErrorCode::kParse, "d must be >= 1");
  return static_cast<std::size_t>(d);
}

}  // namespace

json to_json(const Activation& activation) {
  if (activation.kind() == ActivationKind::kCustom) {
    throw Error(ErrorCode::kUnknownActivation,
                "custom activation '" + activation.name() + "' cannot be serialized");
  }
  json j;
  j["kind"] = activation.name();
  if (activation.is_repu() && !activation.is_relu()) j["s"] = activation.repu_order();
  json params = json::object();
  for (const auto& [k, v] : activation.params()) params[k] = v;
  j["params"] = params;
  return j;
}

Activation activation_from_json(const json& j) {
  if (j.is_string()) return Activation::from_name(j.get<std::string>());
  const json& kind = member(j, "kind");
  if (!kind.is_string()) throw Error(ErrorCode::kParse, "activation kind must be a string");
  int s = 0;
  if (j.contains("s") && !j.at("s").is_null()) s = integer(j.at("s"), "activation s");
  std::map<std::string, double> params;
  if (j.contains("params")) {
    if (!j.at("params").is_object()) throw Error(ErrorCode::kParse, "params must be an object");
    for (const auto& [k, v] : j.at("params").items()) params[k] = number(v, "activation param");
  }
  return Activation::from_name(kind.get<std::string>(), s, params);
}

json to_json(const DiscreteMeasure& measure) {
  json j;
  j["d"] = measure.d();
  json atoms = json::array();
  for (const auto& a : measure.atoms()) {
    json aj;
    aj["w"] = a.w;
    aj["b"] = a.b;
    aj["mass"] = a.mass;
    atoms.push_back(std::move(aj));
  }
  j["atoms"] = std::move(atoms);
  return j;
}

DiscreteMeasure measure_from_json(const json& j) {
  const std::size_t d = dimension(j);
  const json& atoms = member(j, "atoms");
  if (!atoms.is_array()) throw Error(ErrorCode::kParse, "atoms must be an array");
  DiscreteMeasure out(d);
  out.reserve(atoms.size());
  for (const auto& a : atoms) {
    auto w = numbers(member(a, "w"), "w");
    if (w.size() != d) {
      throw Error(ErrorCode::kDimensionMismatch, "atom has " + std::to_string(w.size()) +
                                                     " weights but d = " + std::to_string(d));
    }
    out.add(std::move(w), number(member(a, "b"), "b"), number(member(a, "mass"), "mass"));
  }
  return out;
}

json to_json(const ShallowNet& net) {
  json j;
  j["activation"] = to_json(net.activation);
  const json m = to_json(net.measure);
  j["d"] = m.at("d");
  j["atoms"] = m.at("atoms");
  return j;
}

ShallowNet net_from_json(const json& j) {
  return ShallowNet(activation_from_json(member(j, "activation")), measure_from_json(j));
}

json to_json(const Polynomial& poly) {
  json j;
  j["d"] = poly.d;
  j["s"] = poly.s;
  json terms = json::array();
  for (const auto& [alpha, c] : poly.coeffs) {
    json t;
    t["alpha"] = alpha;
    t["c"] = c;
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  return j;
}

Polynomial polynomial_from_json(const json& j) {
  Polynomial poly;
  poly.d = static_cast<int>(dimension(j));
  poly.s = integer(member(j, "s"), "s");
  if (poly.s < 1) throw Error(ErrorCode::kParse, "s must be >= 1");
  const json& terms = member(j, "terms");
  if (!terms.is_array()) throw Error(ErrorCode::kParse, "terms must be an array");
  for (const auto& t : terms) {
    const json& aj = member(t, "alpha");
    if (!aj.is_array()) throw Error(ErrorCode::kParse, "alpha must be an array");
    MultiIndex alpha;
    int degree = 0;
    for (const auto& v : aj) {
      const int a = integer(v, "alpha entry");
      if (a < 0) throw Error(ErrorCode::kParse, "alpha entries must be >= 0");
      alpha.push_back(a);
      degree += a;
    }
    if (static_cast<int>(alpha.size()) != poly.d) {
      throw Error(ErrorCode::kDimensionMismatch, "alpha length differs from d");
    }
    if (degree > poly.s) {
      throw Error(ErrorCode::kInvalidArgument, "term degree " + std::to_string(degree) +
                                                   " exceeds s = " + std::to_string(poly.s));
    }
    poly.coeffs[alpha] += number(member(t, "c"), "c");
  }
  return poly;
}

json to_json(const SpectralRep& rep) {
  json j;
  j["d"] = rep.d();
  json terms = json::array();
  for (const auto& t : rep.terms()) {
    json tj;
    tj["xi"] = t.xi;
    tj["re"] = t.c.real();
    tj["im"] = t.c.imag();
    terms.push_back(std::move(tj));
  }
  j["terms"] = std::move(terms);
  return j;
}

SpectralRep spectral_from_json(const json& j) {
  const std::size_t d = dimension(j);
  const json& terms = member(j, "terms");
  if (!terms.is_array()) throw Error(ErrorCode::kParse, "terms must be an array");
  std::vector<SpectralTerm> out;
  for (const auto& t : terms) {
    SpectralTerm term;
    term.xi = numbers(member(t, "xi"), "xi");
    const double re = t.contains("re") ? number(t.at("re"), "re") : 0.0;
    const double im = t.contains("im") ? number(t.at("im"), "im") : 0.0;
    term.c = {re, im};
    out.push_back(std::move(term));
  }
  return SpectralRep(d, std::move(out));
}

std::string to_string(NormKind kind) {
  switch (kind) {
    case NormKind::kLipschitz:
      return "lipschitz-form";
    case NormKind::kRepu:
      return "repu-form";
    case NormKind::kSpectral:
      return "spectral";
  }
  return "unknown";
}

std::string to_string(PairScale scale) {
  switch (scale) {
    case PairScale::kPaper:
      return "paper";
    case PairScale::kCompact:
      return "compact";
    case PairScale::kLattice:
      return "lattice";
  }
  return "unknown";
}

PairScale parse_pair_scale(const std::string& name) {
  if (name == "paper") return PairScale::kPaper;
  if (name == "compact") return PairScale::kCompact;
  if (name == "lattice") return PairScale::kLattice;
  throw Error(ErrorCode::kInvalidArgument, "unknown pair scale '" + name + "'");
}

json to_json(const NormReport& report) {
  json j;
  j["kind"] = to_string(report.kind);
  if (report.kind != NormKind::kLipschitz) j["s"] = report.s;
  j["value"] = report.value;
  j["total_variation"] = report.total_variation;
  j["theta_max"] = report.theta_max;
  return j;
}

NormReport norm_from_json(const json& j) {
  NormReport r;
  const std::string kind = member(j, "kind").get<std::string>();
  if (kind == "lipschitz-form") {
    r.kind = NormKind::kLipschitz;
  } else if (kind == "repu-form") {
    r.kind = NormKind::kRepu;
  } else if (kind == "spectral") {
    r.kind = NormKind::kSpectral;
  } else {
    throw Error(ErrorCode::kParse, "unknown norm kind '" + kind + "'");
  }
  if (j.contains("s")) r.s = integer(j.at("s"), "norm s");
  r.value = number(member(j, "value"), "value");
  if (j.contains("total_variation")) r.total_variation = number(j.at("total_variation"), "tv");
  if (j.contains("theta_max")) r.theta_max = number(j.at("theta_max"), "theta_max");
  return r;
}

json to_json(const QuadratureSpec& quad) {
  json j;
  j["rule"] = to_string(quad.rule);
  j["nodes"] = quad.nodes;
  return j;
}

json to_json(const EmbeddingCertificate& cert) {
  json j;
  j["source_norm"] = to_json(cert.source_norm);
  j["target_norm"] = to_json(cert.target_norm);
  j["constant"] = cert.constant;
  j["slack"] = cert.slack;
  if (cert.quadrature) {
    j["quadrature"] = to_json(*cert.quadrature);
  } else {
    j["quadrature"] = json{{"rule", "exact"}};
  }
  j["notes"] = cert.notes;
  j["conversion"] = cert.conversion;
  j["margin"] = cert.margin;
  j["residual"] = cert.residual;
  j["trusted"] = cert.trusted;
  return j;
}

EmbeddingCertificate certificate_from_json(const json& j) {
  EmbeddingCertificate cert;
  cert.source_norm = norm_from_json(member(j, "source_norm"));
  cert.target_norm = norm_from_json(member(j, "target_norm"));
  cert.constant = number(member(j, "constant"), "constant");
  if (j.contains("slack")) cert.slack = number(j.at("slack"), "slack");
  if (j.contains("margin")) cert.margin = number(j.at("margin"), "margin");
  if (j.contains("residual")) cert.residual = number(j.at("residual"), "residual");
  if (j.contains("conversion") && j.at("conversion").is_string()) {
    cert.conversion = j.at("conversion").get<std::string>();
  }
  if (j.contains("trusted") && j.at("trusted").is_boolean()) cert.trusted = j.at("trusted");
  if (j.contains("quadrature")) {
    const json& q = j.at("quadrature");
    const std::string rule = member(q, "rule").get<std::string>();
    if (rule != "exact") {
      cert.quadrature = QuadratureSpec{parse_quad_rule(rule), integer(member(q, "nodes"), "nodes")};
    }
  }
  if (j.contains("notes") && j.at("notes").is_array()) {
    for (const auto& n : j.at("notes")) {
      if (n.is_string()) cert.notes.push_back(n.get<std::string>());
    }
  }
  return cert;
}

json to_json(const BasisPairs& pairs) {
  json j;
  j["s"] = pairs.s;
  j["d"] = pairs.d;
  j["scale"] = to_string(pairs.scale);
  j["p"] = pairs.size();
  j["conditioning"] = pairs.conditioning;
  json list = json::array();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    json pj;
    pj["w"] = pairs.w[i];
    pj["b"] = pairs.b[i];
    list.push_back(std::move(pj));
  }
  j["pairs"] = std::move(list);
  return j;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, "malformed JSON in '" + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  out << dump(j) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "write to '" + path + "' failed");
}

std::string dump(const json& j) { return j.dump(2); }

}  // namespace barron
