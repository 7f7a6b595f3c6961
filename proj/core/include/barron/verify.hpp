#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "barron/measure.hpp"
#include "barron/pushforward.hpp"
#include "barron/quadrature.hpp"

namespace barron {

/// Point sets on [-1, 1]^d.
///   grid(n):          n equispaced points per axis (endpoints included), n^d total;
///   random(M, seed):  point i, coordinate k is splitmix64(seed + i*d + k) mapped
///                     to [-1, 1) through its top 53 bits.
struct Sampler {
  enum class Kind { kGrid, kRandom };
  Kind kind = Kind::kGrid;
  std::size_t count = 1000;
  std::uint64_t seed = 0;

  static Sampler grid(std::size_t n) { return {Kind::kGrid, n, 0}; }
  static Sampler random(std::size_t m, std::uint64_t seed = 0) { return {Kind::kRandom, m, seed}; }
  /// Default budget: grid:1000 for d = 1, rand:10000:0 otherwise.
  static Sampler default_for(std::size_t d);
  /// "grid:N" or "rand:M[:seed]".
  static Sampler parse(const std::string& text);
  std::string to_string() const;
};

std::uint64_t splitmix64(std::uint64_t x);

std::vector<std::vector<double>> sample_points(const Sampler& sampler, std::size_t d);

using Field = std::function<double(std::span<const double>)>;

/// max over the sample set of |f(x) - g(x)|.
double sup_error(const Field& f, const Field& g, std::size_t d, const Sampler& sampler);
double sup_error(const ShallowNet& a, const ShallowNet& b, const Sampler& sampler);
double sup_error(const ShallowNet& a, const Field& reference, const Sampler& sampler);

/// Adaptive Gauss-Kronrod with splitting at `kinks`, absolute tolerance 1e-10.
/// Throws kNonConvergence when the error estimate stays above tolerance.
double oracle_integral(const std::function<double(double)>& f, double a, double b,
                       std::span<const double> kinks = {}, double abs_tol = 1e-10);

/// Same norm kind as `like`, recomputed on `net`.
NormReport recompute_norm(const ShallowNet& net, const NormReport& like);

struct CertificateCheck {
  bool pass = false;
  double source = 0.0;
  double target = 0.0;
  double bound = 0.0;
  /// constant * source - target.
  double margin = 0.0;
  /// max(0, target - constant * source).
  double slack = 0.0;
  std::string message;
};

/// target <= constant * source * (1 + tol_rel) + 1e-9.  Norms are recomputed
/// from the nets when they are given, otherwise taken from the certificate.
CertificateCheck check_certificate(const EmbeddingCertificate& cert, double tol_rel,
                                   const ShallowNet* source = nullptr,
                                   const ShallowNet* target = nullptr);

struct StudyRow {
  int nodes = 0;
  double sup_error = 0.0;
  double target_norm = 0.0;
  std::size_t atoms = 0;
};

struct StudyResult {
  std::vector<StudyRow> rows;
  /// sup_error non-increasing in N.
  bool monotone = true;
  std::vector<std::string> flags;
};

/// Runs `conversion` at each node count and compares its net against
/// `reference` on the sampler.
StudyResult convergence_study(const std::function<Conversion(const QuadratureSpec&)>& conversion,
                              const Field& reference, std::size_t d,
                              const std::vector<int>& nodes, QuadRule rule,
                              const Sampler& sampler);

}  // namespace barron
