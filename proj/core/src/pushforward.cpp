#include "barron/pushforward.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "barron/error.hpp"

namespace barron {

namespace {

std::vector<double> negated(const std::vector<double>& w) {
  std::vector<double> out(w.size());
  std::transform(w.begin(), w.end(), out.begin(), [](double v) { return -v; });
  return out;
}

std::vector<double> times(const std::vector<double>& w, double c) {
  std::vector<double> out(w.size());
  std::transform(w.begin(), w.end(), out.begin(), [c](double v) { return c * v; });
  return out;
}

double factorial(int n) {
  double out = 1.0;
  for (int k = 2; k <= n; ++k) out *= k;
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Prunes the raw measure, attaches the target norm and closes the
// certificate.
Conversion finish(const Activation& target, DiscreteMeasure raw, EmbeddingCertificate cert,
                  const NormReport& target_kind) {
  const std::size_t raw_atoms = raw.size();
  auto pruned = prune(raw, 0.0);
  ShallowNet net(target, std::move(pruned.measure));
  cert.target_norm = target_kind.kind == NormKind::kRepu ? repu_report(net.measure, target_kind.s)
                                                         : lipschitz_report(net.measure);
  finalize_certificate(cert);
  return Conversion{std::move(net), std::move(cert), raw_atoms};
}

NormReport kind_of(const Activation& act) {
  NormReport r;
  if (act.is_repu()) {
    r.kind = NormKind::kRepu;
    r.s = act.repu_order();
  }
  return r;
}

void require_derivatives(const Activation& phi, int order, const char* what) {
  if (phi.max_order() < order) {
    throw Error(ErrorCode::kMissingOracle, std::string(what) + " needs derivatives of " +
                                               phi.name() + " up to order " +
                                               std::to_string(order));
  }
}

}  // namespace

void finalize_certificate(EmbeddingCertificate& cert) {
  const double bound = cert.constant * cert.source_norm.value;
  cert.margin = bound - cert.target_norm.value;
  cert.slack = std::max(0.0, cert.target_norm.value - bound);
}

NormReport lipschitz_report(const DiscreteMeasure& measure) {
  return {NormKind::kLipschitz, 0, lipschitz_form_norm(measure), total_variation(measure),
          theta_max(measure)};
}

NormReport repu_report(const DiscreteMeasure& measure, int s) {
  return {NormKind::kRepu, s, repu_form_norm(measure, s), total_variation(measure),
          theta_max(measure)};
}

Conversion repu_lower(const ShallowNet& net, const QuadratureSpec& quad) {
  if (!net.activation.is_repu() || net.activation.repu_order() < 2) {
    throw Error(ErrorCode::kWrongActivation,
                "repu_lower needs a RePU(t+1) net with t >= 1, got " + net.activation.name());
  }
  const int t = net.activation.repu_order() - 1;
  const auto nodes = realize(quad);
  DiscreteMeasure raw(net.d());
  raw.reserve(net.measure.size() * nodes.x.size());
  for (const auto& atom : net.measure.atoms()) {
    const double theta = reach(atom);
    if (theta == 0.0) continue;  // zero function
    for (std::size_t k = 0; k < nodes.x.size(); ++k) {
      raw.add(atom.w, atom.b - theta * nodes.x[k], (t + 1) * theta * nodes.w[k] * atom.mass);
    }
  }
  EmbeddingCertificate cert;
  cert.conversion = "repu_lower";
  cert.source_norm = repu_report(net.measure, t + 1);
  cert.constant = std::ldexp(1.0, t + 1) - 1.0;
  cert.quadrature = quad;
  cert.notes.push_back("RePU(" + std::to_string(t + 1) + ") -> RePU(" + std::to_string(t) +
                       "), constant 2^(t+1) - 1");
  NormReport kind;
  kind.kind = NormKind::kRepu;
  kind.s = t;
  return finish(Activation::repu(t), std::move(raw), std::move(cert), kind);
}

Conversion repu_lower_to(const ShallowNet& net, int t, const QuadratureSpec& quad) {
  if (!net.activation.is_repu() || t < 1 || t >= net.activation.repu_order()) {
    throw Error(ErrorCode::kWrongActivation, "repu_lower_to needs RePU(s) with 1 <= t < s");
  }
  Conversion current = repu_lower(net, quad);
  double constant = current.certificate.constant;
  const NormReport source = current.certificate.source_norm;
  std::vector<std::string> notes = current.certificate.notes;
  while (current.net.activation.repu_order() > t) {
    Conversion next = repu_lower(current.net, quad);
    constant *= next.certificate.constant;
    notes.insert(notes.end(), next.certificate.notes.begin(), next.certificate.notes.end());
    current = std::move(next);
  }
  current.certificate.conversion = "repu_lower_chain";
  current.certificate.source_norm = source;
  current.certificate.constant = constant;
  current.certificate.notes = std::move(notes);
  finalize_certificate(current.certificate);
  return current;
}

double gamma_constant(const Activation& phi, double y) {
  const double d1 = phi.derivative(1, y);
  const double l1 = phi.deriv_l1(2).value;
  return std::abs(phi(y) - y * d1) + 2.0 * std::abs(d1) + 2.0 * (1.0 + std::abs(y)) * l1;
}

std::vector<double> grid_points(const GammaGrid& grid) {
  if (!(grid.step > 0.0) || !(grid.lo <= grid.hi)) {
    throw Error(ErrorCode::kInvalidArgument, "expansion grid needs step > 0 and lo <= hi");
  }
  const auto first = static_cast<long>(std::ceil(grid.lo / grid.step - 1e-9));
  const auto last = static_cast<long>(std::floor(grid.hi / grid.step + 1e-9));
  std::vector<double> out;
  for (long k = first; k <= last; ++k) out.push_back(k == 0 ? 0.0 : k * grid.step);
  return out;
}

double select_expansion_point(const Activation& phi, const GammaGrid& grid) {
  const auto ys = grid_points(grid);
  if (ys.empty()) throw Error(ErrorCode::kInvalidArgument, "empty expansion grid");
  double best_y = ys.front();
  double best = gamma_constant(phi, best_y);
  for (double y : ys) {
    const double g = gamma_constant(phi, y);
    const double tie = 1e-12 * std::max(1.0, std::abs(best));
    const bool better = g < best - tie;
    const bool tied = std::abs(g - best) <= tie &&
                      (std::abs(y) < std::abs(best_y) ||
                       (std::abs(y) == std::abs(best_y) && y < best_y));
    if (better || tied) {
      best = g;
      best_y = y;
    }
  }
  return best_y;
}

Conversion taylor_to_relu(const ShallowNet& net, double y, const QuadratureSpec& quad) {
  const Activation& phi = net.activation;
  require_derivatives(phi, 2, "taylor_to_relu");
  if (!std::isfinite(y)) throw Error(ErrorCode::kInvalidArgument, "expansion point must be finite");
  const L1Value l1 = phi.deriv_l1(2);
  const double v0 = phi(y);
  const double d1 = phi.derivative(1, y);
  const auto nodes = realize(quad);
  const auto& atoms = net.measure.atoms();
  const std::size_t d = net.d();

  DiscreteMeasure raw(d);
  raw.reserve(1 + 2 * atoms.size() * (1 + nodes.x.size()));
  raw.add(std::vector<double>(d, 0.0), 1.0, (v0 - y * d1) * total_mass(net.measure));
  for (const auto& a : atoms) raw.add(a.w, a.b, d1 * a.mass);
  for (const auto& a : atoms) raw.add(negated(a.w), -a.b, -d1 * a.mass);
  for (const auto& a : atoms) {
    const double theta = reach(a) + std::abs(y);
    if (theta == 0.0) continue;
    for (std::size_t k = 0; k < nodes.x.size(); ++k) {
      const double u = theta * nodes.x[k];
      raw.add(a.w, a.b - u - y, theta * phi.derivative(2, u + y) * nodes.w[k] * a.mass);
    }
  }
  for (const auto& a : atoms) {
    const double theta = reach(a) + std::abs(y);
    if (theta == 0.0) continue;
    const auto nw = negated(a.w);
    for (std::size_t k = 0; k < nodes.x.size(); ++k) {
      const double u = theta * nodes.x[k];
      raw.add(nw, -a.b - u + y, theta * phi.derivative(2, y - u) * nodes.w[k] * a.mass);
    }
  }

  EmbeddingCertificate cert;
  cert.conversion = "taylor_to_relu";
  cert.source_norm = lipschitz_report(net.measure);
  cert.constant = gamma_constant(phi, y);
  cert.quadrature = quad;
  cert.trusted = l1.trusted;
  cert.notes.push_back(phi.name() + " -> relu, expansion point y = " + fmt(y));
  cert.notes.push_back(std::string("int |phi''| = ") + fmt(l1.value) +
                       (l1.analytic ? " (analytic)" : " (numeric, truncated)"));
  return finish(Activation::relu(), std::move(raw), std::move(cert), kind_of(Activation::relu()));
}

Conversion taylor_to_repu_s(const ShallowNet& net, int s, double radius,
                            const QuadratureSpec& quad, std::optional<BasisPairs> pairs) {
  const Activation& phi = net.activation;
  if (s < 1) throw Error(ErrorCode::kInvalidArgument, "RePU order must be >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::kInvalidArgument, "radius must be positive and finite");
  }
  require_derivatives(phi, s + 1, "taylor_to_repu_s");
  for (std::size_t i = 0; i < net.measure.size(); ++i) {
    const double theta = reach(net.measure[i]);
    if (theta > radius) {
      throw Error(ErrorCode::kOutsideRadius, "atom " + std::to_string(i) + " has reach " +
                                                 fmt(theta) + " > radius " + fmt(radius));
    }
  }
  if (!pairs) pairs = build_pairs(s, 1);
  if (pairs->s != s || pairs->d != 1) {
    throw Error(ErrorCode::kDimensionMismatch, "series basis pairs must have order s and d = 1");
  }

  Polynomial taylor;
  taylor.d = 1;
  taylor.s = s;
  for (int k = 0; k <= s; ++k) taylor.coeffs[{k}] = phi.derivative(k, 0.0) / factorial(k);
  const RepuExpansion series = poly_to_repu(taylor, *pairs);

  const auto nodes = realize(quad);
  const auto& atoms = net.measure.atoms();
  DiscreteMeasure raw(net.d());
  raw.reserve(atoms.size() * (series.measure.size() + 2 * nodes.x.size()));
  for (const auto& a : atoms) {
    for (const auto& g : series.measure.atoms()) {
      const double omega = g.w[0];
      raw.add(times(a.w, omega), omega * a.b + g.b, g.mass * a.mass);
    }
  }
  const double inv_fact = 1.0 / factorial(s);
  for (const auto& a : atoms) {
    const double theta = reach(a);
    if (theta == 0.0) continue;
    for (std::size_t k = 0; k < nodes.x.size(); ++k) {
      const double u = theta * nodes.x[k];
      raw.add(a.w, a.b - u, theta * phi.derivative(s + 1, u) * inv_fact * nodes.w[k] * a.mass);
    }
  }
  const int sign = remainder_sign(s);
  for (const auto& a : atoms) {
    const double theta = reach(a);
    if (theta == 0.0) continue;
    const auto nw = negated(a.w);
    for (std::size_t k = 0; k < nodes.x.size(); ++k) {
      const double u = theta * nodes.x[k];
      raw.add(nw, -a.b - u,
              sign * theta * phi.derivative(s + 1, -u) * inv_fact * nodes.w[k] * a.mass);
    }
  }

  const double series_norm = repu_form_norm(series.measure, s);
  const double local = phi.local_l1(s + 1, -radius, radius);
  const double scale = std::pow(1.0 + radius, s - 1);
  EmbeddingCertificate cert;
  cert.conversion = "taylor_to_repu_s";
  cert.source_norm = lipschitz_report(net.measure);
  cert.constant = scale * (series_norm + std::ldexp(1.0, s) * inv_fact * local);
  cert.quadrature = quad;
  cert.residual = series.residual;
  cert.notes.push_back(phi.name() + " -> repu" + std::to_string(s) + ", radius " + fmt(radius));
  cert.notes.push_back("C(s,R) = (1+R)^(s-1) = " + fmt(scale) + ", series repu-norm " +
                       fmt(series_norm) + ", int_{-R}^{R} |D^(s+1) phi| = " + fmt(local));
  cert.notes.push_back("basis condition " + fmt(series.condition));
  Activation target = s == 1 ? Activation::relu() : Activation::repu(s);
  const NormReport kind = kind_of(target);
  return finish(target, std::move(raw), std::move(cert), kind);
}

Conversion substitute(const ShallowNet& net, const DiscreteMeasure& gamma,
                      const Activation& target, SubstituteOptions options) {
  if (gamma.d() != 1) {
    throw Error(ErrorCode::kDimensionMismatch,
                "gamma must live on R^2 (d = 1), got d = " + std::to_string(gamma.d()));
  }
  if (options.check) {
    const double r = std::max(theta_max(net.measure), 1e-300);
    const int n = std::max(2, options.check_points);
    for (int i = 0; i < n; ++i) {
      const double z = -r + 2.0 * r * i / (n - 1);
      double acc = 0.0;
      for (const auto& g : gamma.atoms()) acc += g.mass * target(g.w[0] * z + g.b);
      const double want = net.activation(z);
      if (std::abs(acc - want) > options.check_tol * std::max(1.0, std::abs(want))) {
        throw Error(ErrorCode::kInvalidArgument,
                    "gamma does not reproduce " + net.activation.name() + " at z = " + fmt(z) +
                        ": got " + fmt(acc) + ", want " + fmt(want));
      }
    }
  }
  DiscreteMeasure raw(net.d());
  raw.reserve(net.measure.size() * gamma.size());
  for (const auto& a : net.measure.atoms()) {
    for (const auto& g : gamma.atoms()) {
      const double omega = g.w[0];
      raw.add(times(a.w, omega), omega * a.b + g.b, g.mass * a.mass);
    }
  }
  double constant = 0.0;
  for (const auto& g : gamma.atoms()) {
    constant += std::abs(g.mass) * (1.0 + std::abs(g.w[0]) + std::abs(g.b));
  }
  EmbeddingCertificate cert;
  cert.conversion = "substitute";
  cert.source_norm = lipschitz_report(net.measure);
  cert.constant = constant;
  cert.notes.push_back(net.activation.name() + " -> " + target.name() + " via " +
                       std::to_string(gamma.size()) + "-atom gamma");
  if (options.check) cert.notes.push_back("gamma grid-checked on the reachable range");
  return finish(target, std::move(raw), std::move(cert), kind_of(target));
}

DiscreteMeasure kernel_discretize(const Kernel& eta, double truncation,
                                  const QuadratureSpec& quad) {
  if (!eta.density) throw Error(ErrorCode::kMissingOracle, "kernel has no density");
  if (!eta.tail_bound) throw Error(ErrorCode::kMissingOracle, "kernel has no tail bound");
  if (!(truncation > 0.0) || !std::isfinite(truncation)) {
    throw Error(ErrorCode::kInvalidArgument, "kernel truncation must be positive");
  }
  const auto nodes = realize(quad);
  DiscreteMeasure gamma(1);
  gamma.reserve(2 * nodes.x.size());
  for (std::size_t k = 0; k < nodes.x.size(); ++k) {
    const double beta = -truncation + truncation * nodes.x[k];
    gamma.add({1.0}, beta, eta.density(-beta) * truncation * nodes.w[k]);
  }
  for (std::size_t k = 0; k < nodes.x.size(); ++k) {
    const double beta = truncation * nodes.x[k];
    gamma.add({1.0}, beta, eta.density(-beta) * truncation * nodes.w[k]);
  }
  return gamma;
}

Conversion series_substitute(const ShallowNet& net, const std::function<double(int)>& g,
                             const std::function<double(int)>& h, int terms,
                             const Activation& target) {
  if (terms < 1) throw Error(ErrorCode::kInvalidArgument, "series truncation K must be >= 1");
  DiscreteMeasure gamma(1);
  for (int k = 1; k <= terms; ++k) gamma.add({h(k)}, 0.0, g(k));
  Conversion out = substitute(net, gamma, target);
  out.certificate.conversion = "series_substitute";
  out.certificate.notes.push_back("partial sum over K = " + std::to_string(terms) +
                                  " terms; truncation error not certified");
  return out;
}

ShiftResult derivative_shift(const ShallowNet& net, const Activation& zeta, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorCode::kInvalidArgument, "derivative_shift step h must be positive");
  }
  const auto sup2 = zeta.second_deriv_sup();
  if (!sup2) {
    throw Error(ErrorCode::kMissingOracle, zeta.name() + " declares no bound on sup |zeta''|");
  }
  DiscreteMeasure raw(net.d());
  raw.reserve(2 * net.measure.size());
  for (const auto& a : net.measure.atoms()) raw.add(a.w, a.b + h, a.mass / h);
  for (const auto& a : net.measure.atoms()) raw.add(a.w, a.b, -a.mass / h);
  const std::size_t raw_atoms = raw.size();
  auto pruned = prune(raw, 0.0);
  return ShiftResult{ShallowNet(zeta, std::move(pruned.measure)),
                     0.5 * h * *sup2 * total_variation(net.measure), raw_atoms};
}

double piecewise_gamma(const Activation& phi) {
  if (phi.kind() != ActivationKind::kPiecewise) {
    throw Error(ErrorCode::kWrongActivation, phi.name() + " is not a piecewise activation");
  }
  return std::abs(phi(0.0)) + std::abs(phi.derivative(1, 0.0, Branch::kPlus)) +
         std::abs(phi.derivative(1, 0.0, Branch::kMinus)) +
         2.0 * phi.branch_l1(2, Branch::kPlus).value +
         2.0 * phi.branch_l1(2, Branch::kMinus).value;
}

Conversion piecewise_to_relu(const ShallowNet& net, const QuadratureSpec& quad) {
  const Activation& phi = net.activation;
  require_derivatives(phi, 2, "piecewise_to_relu");
  const double constant = piecewise_gamma(phi);
  const double v0 = phi(0.0);
  const double dp = phi.derivative(1, 0.0, Branch::kPlus);
  const double dm = phi.derivative(1, 0.0, Branch::kMinus);
  const auto nodes = realize(quad);
  const auto& atoms = net.measure.atoms();
  const std::size_t d = net.d();

  DiscreteMeasure raw(d);
  raw.reserve(1 + 2 * atoms.size() * (1 + nodes.x.size()));
  raw.add(std::vector<double>(d, 0.0), 1.0, v0 * total_mass(net.measure));
  for (const auto& a : atoms) raw.add(a.w, a.b, dp * a.mass);
  for (const auto& a : atoms) raw.add(negated(a.w), -a.b, -dm * a.mass);
  for (const auto& a : atoms) {
    const double theta = reach(a);
    if (theta == 0.0) continue;
    for (std::size_t k = 0; k < nodes.x.size(); ++k) {
      const double u = theta * nodes.x[k];
      raw.add(a.w, a.b - u, theta * phi.derivative(2, u, Branch::kPlus) * nodes.w[k] * a.mass);
    }
  }
  for (const auto& a : atoms) {
    const double theta = reach(a);
    if (theta == 0.0) continue;
    const auto nw = negated(a.w);
    for (std::size_t k = 0; k < nodes.x.size(); ++k) {
      const double u = theta * nodes.x[k];
      raw.add(nw, -a.b - u,
              theta * phi.derivative(2, -u, Branch::kMinus) * nodes.w[k] * a.mass);
    }
  }
  EmbeddingCertificate cert;
  cert.conversion = "piecewise_to_relu";
  cert.source_norm = lipschitz_report(net.measure);
  cert.constant = constant;
  cert.quadrature = quad;
  cert.notes.push_back(phi.name() + " -> relu through the junction at 0");
  return finish(Activation::relu(), std::move(raw), std::move(cert), kind_of(Activation::relu()));
}

}  // namespace barron
