#include "barron/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "barron/error.hpp"
#include "barron/parallel.hpp"

namespace barron {

Sampler Sampler::default_for(std::size_t d) {
  return d <= 1 ? grid(1000) : random(10000, 0);
}

Sampler Sampler::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  auto number = [&](const std::string& s) -> std::uint64_t {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty() || s[0] == '-') {
      throw Error(ErrorCode::kParse, "bad sampler spec '" + text + "'");
    }
    return v;
  };
  if (parts.size() == 2 && parts[0] == "grid") {
    const auto n = number(parts[1]);
    if (n == 0) throw Error(ErrorCode::kParse, "grid sampler needs n >= 1");
    return grid(n);
  }
  if ((parts.size() == 2 || parts.size() == 3) && (parts[0] == "rand" || parts[0] == "random")) {
    const auto m = number(parts[1]);
    if (m == 0) throw Error(ErrorCode::kParse, "random sampler needs M >= 1");
    return random(m, parts.size() == 3 ? number(parts[2]) : 0);
  }
  throw Error(ErrorCode::kParse, "bad sampler spec '" + text + "' (want grid:N or rand:M[:seed])");
}

std::string Sampler::to_string() const {
  if (kind == Kind::kGrid) return "grid:" + std::to_string(count);
  return "rand:" + std::to_string(count) + ":" + std::to_string(seed);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<std::vector<double>> sample_points(const Sampler& sampler, std::size_t d) {
  if (d == 0) throw Error(ErrorCode::kInvalidArgument, "sampling needs d >= 1");
  std::vector<std::vector<double>> out;
  if (sampler.kind == Sampler::Kind::kGrid) {
    const std::size_t n = sampler.count;
    std::vector<double> axis(n);
    for (std::size_t i = 0; i < n; ++i) {
      axis[i] = n == 1 ? 0.0 : -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    if (n > 1) axis.back() = 1.0;
    std::size_t total = 1;
    for (std::size_t k = 0; k < d; ++k) {
      if (total > (std::size_t{1} << 26) / std::max<std::size_t>(1, n)) {
        throw Error(ErrorCode::kInvalidArgument, "grid sampler too large for this dimension");
      }
      total *= n;
    }
    out.reserve(total);
    std::vector<std::size_t> idx(d, 0);
    for (std::size_t p = 0; p < total; ++p) {
      std::vector<double> x(d);
      for (std::size_t k = 0; k < d; ++k) x[k] = axis[idx[k]];
      out.push_back(std::move(x));
      for (std::size_t k = d; k-- > 0;) {
        if (++idx[k] < n) break;
        idx[k] = 0;
      }
    }
    return out;
  }
  out.reserve(sampler.count);
  for (std::size_t i = 0; i < sampler.count; ++i) {
    std::vector<double> x(d);
    for (std::size_t k = 0; k < d; ++k) {
      const std::uint64_t r = splitmix64(sampler.seed + i * d + k);
      x[k] = -1.0 + 2.0 * static_cast<double>(r >> 11) * 0x1.0p-53;
    }
    out.push_back(std::move(x));
  }
  return out;
}

double sup_error(const Field& f, const Field& g, std::size_t d, const Sampler& sampler) {
  const auto pts = sample_points(sampler, d);
  const auto errs = parallel_map<double>(pts.size(), [&](std::size_t i) {
    return std::abs(f(pts[i]) - g(pts[i]));
  });
  double worst = 0.0;
  for (double e : errs) {
    if (std::isnan(e)) return e;
    worst = std::max(worst, e);
  }
  return worst;
}

double sup_error(const ShallowNet& a, const ShallowNet& b, const Sampler& sampler) {
  if (a.d() != b.d()) {
    throw Error(ErrorCode::kDimensionMismatch, "nets differ in dimension: " +
                                                   std::to_string(a.d()) + " vs " +
                                                   std::to_string(b.d()));
  }
  const auto pts = sample_points(sampler, a.d());
  const auto va = evaluate_batch(a, pts);
  const auto vb = evaluate_batch(b, pts);
  double worst = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double e = std::abs(va[i] - vb[i]);
    if (std::isnan(e)) return e;
    worst = std::max(worst, e);
  }
  return worst;
}

double sup_error(const ShallowNet& a, const Field& reference, const Sampler& sampler) {
  const auto pts = sample_points(sampler, a.d());
  const auto va = evaluate_batch(a, pts);
  const auto ref = parallel_map<double>(pts.size(), [&](std::size_t i) { return reference(pts[i]); });
  double worst = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double e = std::abs(va[i] - ref[i]);
    if (std::isnan(e)) return e;
    worst = std::max(worst, e);
  }
  return worst;
}

double oracle_integral(const std::function<double(double)>& f, double a, double b,
                       std::span<const double> kinks, double abs_tol) {
  const auto r = integrate_adaptive(f, a, b, kinks, abs_tol, 40);
  if (!r.converged) {
    throw Error(ErrorCode::kNonConvergence,
                "adaptive quadrature error estimate " + std::to_string(r.error_estimate) +
                    " above tolerance");
  }
  return r.value;
}

NormReport recompute_norm(const ShallowNet& net, const NormReport& like) {
  switch (like.kind) {
    case NormKind::kLipschitz:
      return lipschitz_report(net.measure);
    case NormKind::kRepu:
      return repu_report(net.measure, like.s);
    case NormKind::kSpectral:
      break;
  }
  throw Error(ErrorCode::kInvalidArgument, "spectral norms cannot be recomputed from a net");
}

CertificateCheck check_certificate(const EmbeddingCertificate& cert, double tol_rel,
                                   const ShallowNet* source, const ShallowNet* target) {
  CertificateCheck out;
  out.source = source && cert.source_norm.kind != NormKind::kSpectral
                   ? recompute_norm(*source, cert.source_norm).value
                   : cert.source_norm.value;
  out.target = target ? recompute_norm(*target, cert.target_norm).value : cert.target_norm.value;
  out.bound = cert.constant * out.source;
  out.margin = out.bound - out.target;
  out.slack = std::max(0.0, out.target - out.bound);
  out.pass = out.target <= out.bound * (1.0 + tol_rel) + 1e-9;
  std::ostringstream os;
  os.precision(17);
  os << (out.pass ? "pass" : "fail") << ": target " << out.target << " vs constant "
     << cert.constant << " * source " << out.source << " = " << out.bound << " (tol_rel "
     << tol_rel << ")";
  out.message = os.str();
  return out;
}

StudyResult convergence_study(const std::function<Conversion(const QuadratureSpec&)>& conversion,
                              const Field& reference, std::size_t d,
                              const std::vector<int>& nodes, QuadRule rule,
                              const Sampler& sampler) {
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (nodes[i] <= nodes[i - 1]) {
      throw Error(ErrorCode::kInvalidArgument, "node counts must be increasing");
    }
  }
  StudyResult out;
  for (int n : nodes) {
    const Conversion c = conversion(QuadratureSpec{rule, n});
    if (c.net.d() != d) throw Error(ErrorCode::kDimensionMismatch, "study dimension mismatch");
    StudyRow row;
    row.nodes = n;
    row.sup_error = sup_error(c.net, reference, sampler);
    row.target_norm = c.certificate.target_norm.value;
    row.atoms = c.net.measure.size();
    if (!out.rows.empty() && row.sup_error > out.rows.back().sup_error) {
      out.monotone = false;
      out.flags.push_back("error increased from N = " + std::to_string(out.rows.back().nodes) +
                          " to N = " + std::to_string(n));
    }
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace barron
