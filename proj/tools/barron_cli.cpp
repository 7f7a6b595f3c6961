#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "barron/error.hpp"
#include "barron/io.hpp"
#include "barron/measure.hpp"
#include "barron/poly_repu.hpp"
#include "barron/pushforward.hpp"
#include "barron/spectral.hpp"
#include "barron/verify.hpp"

namespace {

using namespace barron;

constexpr int kOk = 0;
constexpr int kCertFail = 1;
constexpr int kUsage = 2;

struct ConvertFlags {
  std::string from;
  std::string to;
  int s = 0;
  std::string quad_rule = "gauss-legendre";
  int quad_nodes = 256;
  std::string expansion_point = "auto";
  std::string radius = "auto";
  std::optional<double> h;
  std::string gamma;
  bool check_gamma = false;
  std::optional<double> tol;
};

Activation parse_target(const std::string& name, int s) {
  static const std::regex repu_n("repu_?([0-9]+)");
  std::smatch m;
  if (std::regex_match(name, m, repu_n)) {
    const int order = std::stoi(m[1]);
    return order == 1 ? Activation::relu() : Activation::repu(order);
  }
  if (name == "repu" && s == 1) return Activation::relu();
  return Activation::from_name(name, s);
}

double parse_double(const std::string& text, const std::string& flag) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kInvalidArgument, flag + " expects a number or 'auto', got '" + text + "'");
}

void add_quad_flags(CLI::App* cmd, ConvertFlags& f) {
  cmd->add_option("--quad-rule", f.quad_rule, "midpoint | trapezoid | gauss-legendre")
      ->capture_default_str();
  cmd->add_option("--quad-nodes", f.quad_nodes, "quadrature nodes N")->capture_default_str();
}

void add_convert_flags(CLI::App* cmd, ConvertFlags& f) {
  cmd->add_option("--from", f.from, "source net JSON")->required();
  cmd->add_option("--to", f.to, "target activation (relu, repu3, softplus, ...)")->required();
  cmd->add_option("--s", f.s, "order when --to is plain 'repu'");
  add_quad_flags(cmd, f);
  cmd->add_option("--expansion-point", f.expansion_point, "Taylor point y or 'auto'")
      ->capture_default_str();
  cmd->add_option("--radius", f.radius, "reach radius R or 'auto' (largest atom reach)")
      ->capture_default_str();
  cmd->add_option("--h", f.h, "difference step for derivative shifts");
  cmd->add_option("--gamma", f.gamma, "gamma measure JSON for exact substitution");
  cmd->add_flag("--check-gamma", f.check_gamma, "grid-check gamma on the reachable range");
  cmd->add_option("--tol", f.tol, "certificate tolerance (default 1e-9 exact, 0.05 quadrature)");
}

struct Outcome {
  std::optional<Conversion> conversion;
  std::optional<ShiftResult> shift;
};

Outcome run_conversion(const ShallowNet& source, const ConvertFlags& f,
                       const QuadratureSpec& quad) {
  const Activation target = parse_target(f.to, f.s);
  Outcome out;
  if (!f.gamma.empty()) {
    const auto gamma = measure_from_json(read_json_file(f.gamma));
    SubstituteOptions opts;
    opts.check = f.check_gamma;
    out.conversion = substitute(source, gamma, target, opts);
    return out;
  }
  if (f.h) {
    out.shift = derivative_shift(source, target, *f.h);
    return out;
  }
  const Activation& from = source.activation;
  if (from.same_as(target)) {
    DiscreteMeasure identity(1);
    identity.add({1.0}, 0.0, 1.0);
    out.conversion = substitute(source, identity, target);
    return out;
  }
  if (from.is_repu() && target.is_repu()) {
    if (target.repu_order() >= from.repu_order()) {
      throw Error(ErrorCode::kWrongActivation, "RePU conversions only lower the order");
    }
    out.conversion = repu_lower_to(source, target.repu_order(), quad);
    return out;
  }
  if (from.is_repu()) {
    throw Error(ErrorCode::kWrongActivation,
                "no construction from " + from.name() + " to " + target.name());
  }
  if (target.is_relu()) {
    if (from.kind() == ActivationKind::kPiecewise) {
      out.conversion = piecewise_to_relu(source, quad);
    } else {
      const double y = f.expansion_point == "auto"
                           ? select_expansion_point(from)
                           : parse_double(f.expansion_point, "--expansion-point");
      out.conversion = taylor_to_relu(source, y, quad);
    }
    return out;
  }
  if (target.is_repu()) {
    double radius = 0.0;
    if (f.radius == "auto") {
      radius = theta_max(source.measure);
      if (radius == 0.0) radius = 1.0;
    } else {
      radius = parse_double(f.radius, "--radius");
    }
    out.conversion = taylor_to_repu_s(source, target.repu_order(), radius, quad);
    return out;
  }
  throw Error(ErrorCode::kWrongActivation, "no construction from " + from.name() + " to " +
                                               target.name() + " (use --gamma or --h)");
}

QuadratureSpec quad_from(const ConvertFlags& f) {
  return QuadratureSpec{parse_quad_rule(f.quad_rule), f.quad_nodes};
}

double default_tol(const EmbeddingCertificate& cert, std::optional<double> tol) {
  if (tol) return *tol;
  return cert.quadrature ? 0.05 : 1e-9;
}

Sampler sampler_from(const std::string& text, std::size_t d, std::uint64_t seed) {
  if (text.empty()) {
    Sampler s = Sampler::default_for(d);
    if (s.kind == Sampler::Kind::kRandom) s.seed = seed;
    return s;
  }
  Sampler s = Sampler::parse(text);
  if (s.kind == Sampler::Kind::kRandom && std::count(text.begin(), text.end(), ':') == 1) {
    s.seed = seed;
  }
  return s;
}

void emit(const json& j, const std::string& path) {
  if (!path.empty()) write_json_file(path, j);
  std::cout << dump(j) << '\n';
}

int cmd_convert(const ConvertFlags& f, const std::string& out_path, const std::string& cert_path) {
  const ShallowNet source = net_from_json(read_json_file(f.from));
  const Outcome outcome = run_conversion(source, f, quad_from(f));
  if (outcome.shift) {
    if (!out_path.empty()) write_json_file(out_path, to_json(outcome.shift->net));
    json report;
    report["conversion"] = "derivative_shift";
    report["h"] = *f.h;
    report["error_bound"] = outcome.shift->error_bound;
    report["atoms"] = outcome.shift->net.measure.size();
    report["notes"] = json::array(
        {"inclusion only: no embedding constant, sup error bound (h/2) sup|zeta''| TV"});
    emit(report, cert_path);
    return kOk;
  }
  const Conversion& c = *outcome.conversion;
  if (!out_path.empty()) write_json_file(out_path, to_json(c.net));
  emit(to_json(c.certificate), cert_path);
  const auto check = check_certificate(c.certificate, default_tol(c.certificate, f.tol));
  if (!check.pass) {
    std::cerr << "certificate " << check.message << '\n';
    return kCertFail;
  }
  return kOk;
}

int cmd_norm(const std::string& path) {
  const ShallowNet net = net_from_json(read_json_file(path));
  std::cout << dump(to_json(representation_norm(net))) << '\n';
  return kOk;
}

int cmd_poly2repu(const std::string& in, const std::string& out, const std::string& scale,
                  double ratio, const std::string& report_path) {
  const Polynomial poly = polynomial_from_json(read_json_file(in));
  PairOptions opts;
  opts.scale = parse_pair_scale(scale);
  opts.ratio = ratio;
  const BasisPairs pairs = build_pairs(poly.s, poly.d, opts);
  const RepuExpansion e = poly_to_repu(poly, pairs);
  ShallowNet net(poly.s == 1 ? Activation::relu() : Activation::repu(poly.s), e.measure);
  if (!out.empty()) write_json_file(out, to_json(net));
  json report;
  report["atoms"] = net.measure.size();
  report["residual"] = e.residual;
  report["condition"] = e.condition;
  report["scale"] = scale;
  report["kappa"] = e.kappa;
  report["norm"] = to_json(representation_norm(net));
  emit(report, report_path);
  return kOk;
}

int cmd_spectral(const std::string& in, int s, const ConvertFlags& f, const std::string& out,
                 const std::string& cert_path) {
  const SpectralRep rep = spectral_from_json(read_json_file(in));
  const Conversion c = spectral_to_repu(rep, s, quad_from(f));
  if (!out.empty()) write_json_file(out, to_json(c.net));
  emit(to_json(c.certificate), cert_path);
  const auto check = check_certificate(c.certificate, default_tol(c.certificate, f.tol));
  if (!check.pass) {
    std::cerr << "certificate " << check.message << '\n';
    return kCertFail;
  }
  return kOk;
}

int cmd_verify(const std::string& a_path, const std::string& b_path, const std::string& sampler,
               std::uint64_t seed) {
  const ShallowNet a = net_from_json(read_json_file(a_path));
  const ShallowNet b = net_from_json(read_json_file(b_path));
  if (a.d() != b.d()) {
    throw Error(ErrorCode::kDimensionMismatch, "nets differ in dimension");
  }
  const Sampler smp = sampler_from(sampler, a.d(), seed);
  json report;
  report["sampler"] = smp.to_string();
  report["sup_error"] = sup_error(a, b, smp);
  std::cout << dump(report) << '\n';
  return kOk;
}

int cmd_check(const std::string& cert_path, const std::string& a_path, const std::string& b_path,
              std::optional<double> tol) {
  const EmbeddingCertificate cert = certificate_from_json(read_json_file(cert_path));
  std::optional<ShallowNet> a;
  std::optional<ShallowNet> b;
  if (!a_path.empty()) a = net_from_json(read_json_file(a_path));
  if (!b_path.empty()) b = net_from_json(read_json_file(b_path));
  const auto check = check_certificate(cert, default_tol(cert, tol), a ? &*a : nullptr,
                                       b ? &*b : nullptr);
  json report;
  report["pass"] = check.pass;
  report["source"] = check.source;
  report["target"] = check.target;
  report["bound"] = check.bound;
  report["slack"] = check.slack;
  report["margin"] = check.margin;
  report["message"] = check.message;
  std::cout << dump(report) << '\n';
  return check.pass ? kOk : kCertFail;
}

int cmd_basis(int s, int d, const std::string& scale, double ratio) {
  PairOptions opts;
  opts.scale = parse_pair_scale(scale);
  opts.ratio = ratio;
  std::cout << dump(to_json(build_pairs(s, d, opts))) << '\n';
  return kOk;
}

int cmd_study(const ConvertFlags& f, const std::vector<int>& nodes, const std::string& sampler,
              std::uint64_t seed) {
  const ShallowNet source = net_from_json(read_json_file(f.from));
  const auto rule = parse_quad_rule(f.quad_rule);
  const Sampler smp = sampler_from(sampler, source.d(), seed);
  auto run = [&](const QuadratureSpec& quad) {
    Outcome o = run_conversion(source, f, quad);
    if (!o.conversion) {
      throw Error(ErrorCode::kInvalidArgument, "study needs a conversion with a certificate");
    }
    return *o.conversion;
  };
  const auto reference = [&](std::span<const double> x) { return evaluate(source, x); };
  const StudyResult r = convergence_study(run, reference, source.d(), nodes, rule, smp);
  json report;
  report["sampler"] = smp.to_string();
  report["rule"] = to_string(rule);
  json rows = json::array();
  for (const auto& row : r.rows) {
    json rj;
    rj["N"] = row.nodes;
    rj["sup_error"] = row.sup_error;
    rj["target_norm"] = row.target_norm;
    rj["atoms"] = row.atoms;
    rows.push_back(std::move(rj));
  }
  report["rows"] = std::move(rows);
  report["monotone"] = r.monotone;
  report["flags"] = r.flags;
  std::cout << dump(report) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convert shallow networks between activations with norm certificates"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);

  ConvertFlags conv;
  std::string out_path;
  std::string cert_path;
  auto* convert = app.add_subcommand("convert", "push a net forward to another activation");
  add_convert_flags(convert, conv);
  convert->add_option("--out", out_path, "output net JSON");
  convert->add_option("--cert", cert_path, "certificate JSON");

  std::string norm_path;
  auto* norm = app.add_subcommand("norm", "representation norm of a net");
  norm->add_option("net", norm_path, "net JSON")->required();

  std::string poly_in;
  std::string poly_out;
  std::string poly_report;
  std::string scale = "lattice";
  double ratio = 0.4;
  auto* poly = app.add_subcommand("poly2repu", "exact RePU(s) net for a polynomial");
  poly->add_option("--in", poly_in, "polynomial JSON")->required();
  poly->add_option("--out", poly_out, "output net JSON");
  poly->add_option("--report", poly_report, "solve report JSON");
  poly->add_option("--scale", scale, "lattice | compact | paper")->capture_default_str();
  poly->add_option("--ratio", ratio, "geometric ratio for the compact scale")
      ->capture_default_str();

  std::string spec_in;
  int spec_s = 2;
  ConvertFlags spec_flags;
  std::string spec_out;
  std::string spec_cert;
  auto* spectral = app.add_subcommand("spectral2repu", "RePU(s) net for a trigonometric sum");
  spectral->add_option("--in", spec_in, "spectral rep JSON")->required();
  spectral->add_option("--s", spec_s, "RePU order")->capture_default_str();
  add_quad_flags(spectral, spec_flags);
  spectral->add_option("--tol", spec_flags.tol, "certificate tolerance");
  spectral->add_option("--out", spec_out, "output net JSON");
  spectral->add_option("--cert", spec_cert, "certificate JSON");

  std::string va;
  std::string vb;
  std::string sampler;
  std::uint64_t seed = 0;
  auto* verify = app.add_subcommand("verify", "sup error between two nets on [-1,1]^d");
  verify->add_option("--a", va, "first net")->required();
  verify->add_option("--b", vb, "second net")->required();
  verify->add_option("--sampler", sampler, "grid:N | rand:M[:seed]");
  verify->add_option("--seed", seed, "seed for rand:M")->capture_default_str();

  std::string cc;
  std::string ca;
  std::string cb;
  std::optional<double> check_tol;
  auto* check = app.add_subcommand("check", "re-check a certificate against its nets");
  check->add_option("--cert", cc, "certificate JSON")->required();
  check->add_option("--a", ca, "source net");
  check->add_option("--b", cb, "target net");
  check->add_option("--tol", check_tol, "relative tolerance");

  int bs = 2;
  int bd = 1;
  std::string bscale = "lattice";
  double bratio = 0.4;
  auto* basis = app.add_subcommand("basis", "RePU basis pairs and their conditioning");
  basis->add_option("--s", bs, "order")->capture_default_str();
  basis->add_option("--d", bd, "dimension")->capture_default_str();
  basis->add_option("--scale", bscale, "lattice | compact | paper")->capture_default_str();
  basis->add_option("--ratio", bratio, "compact ratio")->capture_default_str();

  ConvertFlags study_flags;
  std::vector<int> study_nodes{8, 32, 128};
  std::string study_sampler;
  auto* study = app.add_subcommand("study", "convergence table over node counts");
  add_convert_flags(study, study_flags);
  study->add_option("--nodes", study_nodes, "increasing node counts")->delimiter(',');
  study->add_option("--sampler", study_sampler, "grid:N | rand:M[:seed]");
  study->add_option("--seed", seed, "seed for rand:M");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*convert) return cmd_convert(conv, out_path, cert_path);
    if (*norm) return cmd_norm(norm_path);
    if (*poly) return cmd_poly2repu(poly_in, poly_out, scale, ratio, poly_report);
    if (*spectral) return cmd_spectral(spec_in, spec_s, spec_flags, spec_out, spec_cert);
    if (*verify) return cmd_verify(va, vb, sampler, seed);
    if (*check) return cmd_check(cc, ca, cb, check_tol);
    if (*basis) return cmd_basis(bs, bd, bscale, bratio);
    if (*study) return cmd_study(study_flags, study_nodes, study_sampler, seed);
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
