#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace barron {

enum class ActivationKind {
  kRepu,       // max(0, z)^s; ReLU is s = 1
  kSmooth,     // builtin with analytic derivatives everywhere except `kinks()`
  kPiecewise,  // two smooth branches joined continuously at the origin
  kCustom,     // caller-supplied oracles
};

/// Which one-sided branch to use when differentiating at a kink.
enum class Branch { kAuto, kPlus, kMinus };

/// Value of an L1 integral of |D^k sigma| together with how far it can be
/// trusted.
struct L1Value {
  double value = 0.0;
  /// Bound on the neglected tails beyond the truncation window (0 if analytic).
  double truncation_bound = 0.0;
  bool analytic = false;
  /// False when a custom activation gave no tail bound.
  bool trusted = true;
};

/// k-th derivative oracle: (k, z) -> D^k f(z), with k = 0 the value.
using DerivativeOracle = std::function<double(int, double)>;

/// Optional analytic data that a custom or piecewise activation may declare.
struct ActivationTraits {
  std::optional<double> lipschitz;
  std::optional<double> second_deriv_sup;
  /// Analytic whole-line integrals of |D^k sigma|, keyed by k.
  std::map<int, double> deriv_l1;
  /// Keys for which the whole-line integral is known to diverge.
  std::vector<int> not_integrable;
  /// Analytic half-line branch integrals for piecewise kinds.
  std::map<int, double> plus_l1;
  std::map<int, double> minus_l1;
  /// Bound on integral of |D^k sigma| outside [-40, 40]; absent means the
  /// numeric integral is reported as untrusted.
  std::function<double(int)> tail_bound;
};

/// Immutable activation descriptor.  Copies share the same oracles.
class Activation {
 public:
  static Activation relu();
  static Activation repu(int s);
  static Activation tanh();
  static Activation arctan();
  static Activation logistic();
  static Activation softplus();
  static Activation sine();
  /// z for z >= 0, e^z - 1 for z < 0.
  static Activation elu();
  /// z for z >= 0, alpha z for z < 0.
  static Activation leaky_relu(double alpha);
  /// min(max(0, z), 6).
  static Activation relu6();
  /// a z + c.
  static Activation affine(double a, double c);
  /// ReLU written as the piecewise pair (z, 0).
  static Activation piecewise_relu();

  static Activation piecewise(std::string name, DerivativeOracle plus,
                              DerivativeOracle minus, int max_order,
                              ActivationTraits traits = {});
  static Activation custom(std::string name, DerivativeOracle oracle,
                           int max_order, ActivationTraits traits = {});

  /// Builtin lookup used by the net file format: relu, repu (needs s), tanh,
  /// arctan, logi, softplus, sin, elu, lrelu (alpha), relu6, affine (a, c),
  /// relu_pw.
  static Activation from_name(const std::string& name, int s = 0,
                              const std::map<std::string, double>& params = {});

  ActivationKind kind() const;
  const std::string& name() const;
  const std::map<std::string, double>& params() const;
  /// s for RePU(s), 0 otherwise.
  int repu_order() const;
  bool is_repu() const { return kind() == ActivationKind::kRepu; }
  bool is_relu() const { return is_repu() && repu_order() == 1; }
  int max_order() const;
  /// Points where derivatives of some order are discontinuous.
  const std::vector<double>& kinks() const;

  double operator()(double z) const;

  /// D^k sigma(z).  Throws kOrderExceeded for k > max_order() and
  /// kAmbiguousAtKink at a kink when no branch is given and the one-sided
  /// values differ.
  double derivative(int k, double z, Branch branch = Branch::kAuto) const;

  /// Integral over R of |D^k sigma|; analytic where known, otherwise a
  /// truncated numeric integral over [-40, 40].  Throws kNotIntegrable.
  L1Value deriv_l1(int k) const;

  /// Integral of |D^k sigma| over [lo, hi], split at kinks.
  double local_l1(int k, double lo, double hi) const;

  /// Piecewise kinds: integral over [0, inf) of |D^k phi_+| (kPlus) or over
  /// (-inf, 0] of |D^k phi_-| (kMinus).
  L1Value branch_l1(int k, Branch side) const;

  std::optional<double> lipschitz_constant() const;
  std::optional<double> second_deriv_sup() const;

  /// max |sigma(z)| over |z| <= r.
  double sup_abs(double r) const;

  bool same_as(const Activation& other) const;

 private:
  struct Impl;
  explicit Activation(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

}  // namespace barron
