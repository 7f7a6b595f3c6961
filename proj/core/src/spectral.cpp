#include "barron/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "barron/error.hpp"

namespace barron {

namespace {

double l1(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += std::abs(x);
  return acc;
}

bool is_zero(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

bool is_negation(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] != -b[k]) return false;
  }
  return true;
}

double factorial(int n) {
  double out = 1.0;
  for (int k = 2; k <= n; ++k) out *= k;
  return out;
}

std::complex<double> i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {0.0, 1.0};
    case 2:
      return {-1.0, 0.0};
    default:
      return {0.0, -1.0};
  }
}

}  // namespace

SpectralRep::SpectralRep(std::size_t d, std::vector<SpectralTerm> terms)
    : d_(d), terms_(std::move(terms)) {
  if (d_ == 0) throw Error(ErrorCode::kInvalidArgument, "spectral rep needs d >= 1");
  std::size_t zeros = 0;
  for (const auto& t : terms_) {
    if (t.xi.size() != d_) {
      throw Error(ErrorCode::kDimensionMismatch, "frequency has " + std::to_string(t.xi.size()) +
                                                     " entries, expected " + std::to_string(d_));
    }
    if (!std::isfinite(t.c.real()) || !std::isfinite(t.c.imag()) ||
        !std::all_of(t.xi.begin(), t.xi.end(), [](double v) { return std::isfinite(v); })) {
      throw Error(ErrorCode::kInvalidArgument, "spectral term has a non-finite entry");
    }
  }
  partner_.assign(terms_.size(), 0);
  for (std::size_t j = 0; j < terms_.size(); ++j) {
    const auto& t = terms_[j];
    const double tol = 1e-12 * std::max(1.0, std::abs(t.c));
    if (is_zero(t.xi)) {
      if (++zeros > 1) {
        throw Error(ErrorCode::kSymmetryViolated, "more than one term at xi = 0");
      }
      if (std::abs(t.c.imag()) > tol) {
        throw Error(ErrorCode::kSymmetryViolated, "the xi = 0 coefficient must be real");
      }
      partner_[j] = j;
      continue;
    }
    bool found = false;
    for (std::size_t k = 0; k < terms_.size(); ++k) {
      if (k == j || !is_negation(t.xi, terms_[k].xi)) continue;
      if (std::abs(terms_[k].c - std::conj(t.c)) > tol) {
        throw Error(ErrorCode::kSymmetryViolated,
                    "term " + std::to_string(k) + " is not the conjugate of term " +
                        std::to_string(j));
      }
      partner_[j] = k;
      found = true;
      break;
    }
    if (!found) {
      throw Error(ErrorCode::kSymmetryViolated,
                  "term " + std::to_string(j) + " has no partner at -xi");
    }
  }
}

std::complex<double> evaluate(const SpectralRep& rep, std::span<const double> x) {
  if (x.size() != rep.d()) {
    throw Error(ErrorCode::kDimensionMismatch, "point dimension does not match spectral rep");
  }
  std::complex<double> acc = 0.0;
  for (const auto& t : rep.terms()) {
    const double phase = std::inner_product(x.begin(), x.end(), t.xi.begin(), 0.0);
    acc += t.c * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return acc;
}

double spectral_norm(const SpectralRep& rep, int s) {
  double acc = 0.0;
  for (const auto& t : rep.terms()) acc += std::pow(1.0 + l1(t.xi), s) * std::abs(t.c);
  return acc;
}

Polynomial taylor_coeffs(const SpectralRep& rep, int s) {
  if (s < 0) throw Error(ErrorCode::kInvalidArgument, "Taylor degree must be >= 0");
  const MultiIndexTable table(s, static_cast<int>(rep.d()));
  Polynomial poly;
  poly.d = static_cast<int>(rep.d());
  poly.s = s;
  for (const auto& alpha : table.indices()) {
    const int degree = std::accumulate(alpha.begin(), alpha.end(), 0);
    double alpha_fact = 1.0;
    for (int a : alpha) alpha_fact *= factorial(a);
    std::complex<double> acc = 0.0;
    double scale = 0.0;
    for (const auto& t : rep.terms()) {
      double mono = 1.0;
      for (std::size_t k = 0; k < alpha.size(); ++k) mono *= std::pow(t.xi[k], alpha[k]);
      acc += t.c * i_pow(degree) * mono;
      scale += std::abs(t.c) * std::abs(mono);
    }
    if (std::abs(acc.imag()) > 1e-12 * std::max(1.0, scale)) {
      throw Error(ErrorCode::kSymmetryViolated,
                  "Taylor coefficient has imaginary part " + std::to_string(acc.imag()));
    }
    poly.coeffs[alpha] = acc.real() / alpha_fact;
  }
  return poly;
}

Conversion spectral_to_repu(const SpectralRep& rep, int s, const QuadratureSpec& quad,
                            std::optional<BasisPairs> pairs) {
  if (s < 1) throw Error(ErrorCode::kInvalidArgument, "RePU order must be >= 1");
  const int d = static_cast<int>(rep.d());
  if (!pairs) pairs = build_pairs(s, d);
  const RepuExpansion series = poly_to_repu(taylor_coeffs(rep, s), *pairs);
  const auto nodes = realize(quad);

  DiscreteMeasure raw = series.measure;
  const int sign = remainder_sign(s);
  const double inv_fact = 1.0 / factorial(s);
  for (std::size_t j = 0; j < rep.terms().size(); ++j) {
    const auto& t = rep.terms()[j];
    if (is_zero(t.xi)) continue;  // constant, carried by the series
    const double a = l1(t.xi);
    const std::complex<double> K = i_pow(s + 1) * std::pow(a, s + 1) * inv_fact;
    const std::complex<double> c_plus = t.c;
    const std::complex<double> c_minus = rep.terms()[rep.partner(j)].c;
    std::vector<double> dir(t.xi.size());
    for (std::size_t k = 0; k < dir.size(); ++k) dir[k] = t.xi[k] / a;
    for (std::size_t k = 0; k < nodes.x.size(); ++k) {
      const double u = nodes.x[k];
      const std::complex<double> e(std::cos(a * u), std::sin(a * u));
      const std::complex<double> density = K * (c_plus * e + double(sign) * c_minus * std::conj(e));
      raw.add(dir, -u, nodes.w[k] * density.real());
    }
  }

  const double source = spectral_norm(rep, s + 1);
  const double series_norm = repu_form_norm(series.measure, s);
  EmbeddingCertificate cert;
  cert.conversion = "spectral_to_repu";
  cert.source_norm.kind = NormKind::kSpectral;
  cert.source_norm.s = s + 1;
  cert.source_norm.value = source;
  for (const auto& t : rep.terms()) {
    cert.source_norm.total_variation += std::abs(t.c);
    cert.source_norm.theta_max = std::max(cert.source_norm.theta_max, l1(t.xi));
  }
  const double remainder_constant = std::ldexp(1.0, s + 1) * inv_fact;
  cert.constant = (source > 0.0 ? series_norm / source : 0.0) + remainder_constant;
  cert.quadrature = quad;
  cert.residual = series.residual;
  std::ostringstream os;
  os.precision(17);
  os << "C = series repu-norm / spectral norm + 2^(s+1)/s! = " << series_norm << " / " << source
     << " + " << remainder_constant;
  cert.notes.push_back(os.str());
  cert.notes.push_back("basis condition " + std::to_string(series.condition));

  const std::size_t raw_atoms = raw.size();
  auto pruned = prune(raw, 0.0);
  Activation target = s == 1 ? Activation::relu() : Activation::repu(s);
  ShallowNet net(target, std::move(pruned.measure));
  cert.target_norm = repu_report(net.measure, s);
  finalize_certificate(cert);
  return Conversion{std::move(net), std::move(cert), raw_atoms};
}

}  // namespace barron
