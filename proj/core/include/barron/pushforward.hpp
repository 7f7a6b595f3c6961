#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "barron/activation.hpp"
#include "barron/measure.hpp"
#include "barron/poly_repu.hpp"
#include "barron/quadrature.hpp"

namespace barron {

/// Norm inequality witnessed by a conversion:
///   target_norm.value <= constant * source_norm.value  (+ quadrature slack).
struct EmbeddingCertificate {
  std::string conversion;
  NormReport source_norm;
  NormReport target_norm;
  double constant = 0.0;
  /// How far the inequality is violated, max(0, target - constant * source).
  /// Zero for every passing certificate; positive values are attributable to
  /// quadrature.
  double slack = 0.0;
  /// constant * source - target (negative when violated).
  double margin = 0.0;
  /// Empty for exact conversions.
  std::optional<QuadratureSpec> quadrature;
  /// ||W^T kappa - c||_inf of any RePU basis solve involved, else 0.
  double residual = 0.0;
  /// False when a numeric L1 integral without a tail bound entered the
  /// constant.
  bool trusted = true;
  std::vector<std::string> notes;
};

/// Fills slack and margin from the two norms and the constant.
void finalize_certificate(EmbeddingCertificate& cert);

struct Conversion {
  ShallowNet net;
  EmbeddingCertificate certificate;
  /// Atoms emitted before the automatic prune(tol = 0).
  std::size_t raw_atoms = 0;
};

/// Lipschitz-form report sum |m| (1 + ||w||_1 + |b|) of a measure.
NormReport lipschitz_report(const DiscreteMeasure& measure);
/// repu-form(s) report sum |m| (||w||_1 + |b|)^s of a measure.
NormReport repu_report(const DiscreteMeasure& measure, int s);

/// RePU(t+1) -> RePU(t) through repu_{t+1}(y) = (t+1) int_0^theta repu_t(y-u) du.
/// Constant 2^{t+1} - 1.
Conversion repu_lower(const ShallowNet& net, const QuadratureSpec& quad = {});

/// Repeated repu_lower down to RePU(t); constants multiply.
Conversion repu_lower_to(const ShallowNet& net, int t, const QuadratureSpec& quad = {});

/// |phi(y) - y phi'(y)| + 2|phi'(y)| + 2(1 + |y|) int |phi''|.  At y = 0 this is
/// the textbook |phi(0)| + 2|phi'(0)| + 2 int |phi''|.
double gamma_constant(const Activation& phi, double y);

struct GammaGrid {
  double lo = -5.0;
  double hi = 5.0;
  double step = 0.1;
};

/// Grid points lo, lo + step, ..., hi (snapped to integer multiples of step).
std::vector<double> grid_points(const GammaGrid& grid);

/// argmin of gamma_constant over the grid; ties go to the smallest |y|, then
/// to the smaller y.
double select_expansion_point(const Activation& phi, const GammaGrid& grid = {});

/// Smooth activation -> ReLU by the first-order Taylor expansion at y with an
/// integral remainder.  Source norm is lipschitz-form.
Conversion taylor_to_relu(const ShallowNet& net, double y, const QuadratureSpec& quad = {});

/// Smooth activation -> RePU(s) on the ball ||w||_1 + |b| <= radius.  The
/// degree-s Taylor polynomial at 0 goes through poly_to_repu; the remainder is
/// discretized by `quad`.  Default pairs are build_pairs(s, 1).
Conversion taylor_to_repu_s(const ShallowNet& net, int s, double radius,
                            const QuadratureSpec& quad = {},
                            std::optional<BasisPairs> pairs = std::nullopt);

struct SubstituteOptions {
  /// Grid-check sum_j g_j psi(omega_j z + beta_j) == phi(z) on
  /// [-theta_max, theta_max] before substituting.
  bool check = false;
  int check_points = 1000;
  double check_tol = 1e-9;
};

/// phi(z) = sum_j g_j psi(omega_j z + beta_j) where `gamma` holds atoms
/// (omega_j, beta_j, g_j) with d = 1.  Output atom (i, j) is
/// (omega_j w_i, omega_j b_i + beta_j) with mass g_j m_i, ordered by i then j.
Conversion substitute(const ShallowNet& net, const DiscreteMeasure& gamma,
                      const Activation& target, SubstituteOptions options = {});

/// Integrable kernel eta with a bound on int_{|z| > T} |eta| (1 + |z|).
struct Kernel {
  std::function<double(double)> density;
  std::function<double(double)> tail_bound;
};

/// Gamma measure for psi * eta: atoms (1, beta_k) with mass eta(-beta_k) w_k
/// where the rule is applied separately on [-T, 0] and [0, T].
DiscreteMeasure kernel_discretize(const Kernel& eta, double truncation,
                                  const QuadratureSpec& quad = {});

/// phi(z) = sum_{k=1..K} g(k) psi(h(k) z).  The truncation error is not
/// certified.
Conversion series_substitute(const ShallowNet& net, const std::function<double(int)>& g,
                             const std::function<double(int)>& h, int terms,
                             const Activation& target);

struct ShiftResult {
  ShallowNet net;
  /// sup-norm bound (h/2) sup|zeta''| TV(mu) on the approximation error.
  double error_bound = 0.0;
  std::size_t raw_atoms = 0;
};

/// A net with activation zeta' rewritten as a zeta-net by the forward
/// difference quotient with step h.
ShiftResult derivative_shift(const ShallowNet& net, const Activation& zeta, double h);

/// |phi(0)| + |phi_+'(0)| + |phi_-'(0)| + 2 int_0^inf |phi_+''| + 2 int_-inf^0 |phi_-''|.
double piecewise_gamma(const Activation& phi);

/// Piecewise-smooth activation (kink at 0) -> ReLU.
Conversion piecewise_to_relu(const ShallowNet& net, const QuadratureSpec& quad = {});

}  // namespace barron
