#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "barron/activation.hpp"

namespace barron {

/// One neuron: a Dirac mass at (w, b) in R^{d+1}.
struct Atom {
  std::vector<double> w;
  double b = 0.0;
  double mass = 0.0;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// l1 reach of an atom, ||w||_1 + |b|.  This is the largest value of
/// |<x,w> + b| over x in [-1,1]^d.
double reach(const Atom& atom);

/// Finite signed atomic measure on R^{d+1}.  Atom order is construction order
/// and is never changed implicitly.
class DiscreteMeasure {
 public:
  explicit DiscreteMeasure(std::size_t d);
  DiscreteMeasure(std::size_t d, std::vector<Atom> atoms);

  std::size_t d() const noexcept { return d_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const Atom& operator[](std::size_t i) const { return atoms_[i]; }

  /// Appends an atom after validating its dimension and finiteness.
  void add(Atom atom);
  void add(std::vector<double> w, double b, double mass);
  void reserve(std::size_t n) { atoms_.reserve(n); }

  friend bool operator==(const DiscreteMeasure&, const DiscreteMeasure&) = default;

 private:
  std::size_t d_;
  std::vector<Atom> atoms_;
};

/// Signed total mass mu(Omega), summed in atom order.
double total_mass(const DiscreteMeasure& measure);
/// sum_i |mass_i|.
double total_variation(const DiscreteMeasure& measure);
/// max_i reach(atom_i); zero for an empty measure.
double theta_max(const DiscreteMeasure& measure);

/// Atoms of `a` followed by atoms of `b`.
DiscreteMeasure concat(const DiscreteMeasure& a, const DiscreteMeasure& b);
/// Every mass multiplied by `factor`.
DiscreteMeasure scaled(const DiscreteMeasure& measure, double factor);

struct PruneResult {
  DiscreteMeasure measure;
  std::size_t dropped = 0;
  std::size_t merged = 0;
  /// Reach of each dropped atom paired with its |mass| after merging.
  std::vector<std::pair<double, double>> dropped_atoms;

  /// Upper bound on sup_{x in [-1,1]^d} of the change in evaluation under
  /// `activation`.
  double evaluation_change_bound(const Activation& activation) const;
};

/// Merges atoms with bit-identical (w, b) into the first occurrence, then drops
/// atoms with |mass| <= tol.  Survivors keep their relative order.
PruneResult prune(const DiscreteMeasure& measure, double tol);

/// A shallow network f(x) = sum_i mass_i * sigma(<x, w_i> + b_i).
struct ShallowNet {
  Activation activation;
  DiscreteMeasure measure;

  ShallowNet(Activation act, DiscreteMeasure mu)
      : activation(std::move(act)), measure(std::move(mu)) {}

  std::size_t d() const noexcept { return measure.d(); }
};

struct EvalOptions {
  /// Neumaier-compensated accumulation instead of plain left-to-right.
  bool compensated = false;
};

double evaluate(const ShallowNet& net, std::span<const double> x,
                EvalOptions options = {});

/// evaluate() at many points.  Same per-point summation order, so results are
/// bit-identical to calling evaluate() in a loop, but atoms are streamed once
/// per block of points.
std::vector<double> evaluate_batch(const ShallowNet& net,
                                   const std::vector<std::vector<double>>& points);

enum class NormKind { kLipschitz, kRepu, kSpectral };

/// Representation norm of one concrete measure.  It upper-bounds the Barron
/// norm, which is an infimum over all representing measures.
struct NormReport {
  NormKind kind = NormKind::kLipschitz;
  /// Exponent for repu-form and spectral kinds; 0 for lipschitz-form.
  int s = 0;
  double value = 0.0;
  double total_variation = 0.0;
  double theta_max = 0.0;
};

/// sum |mass| (1 + ||w||_1 + |b|)
double lipschitz_form_norm(const DiscreteMeasure& measure);
/// sum |mass| (||w||_1 + |b|)^s
double repu_form_norm(const DiscreteMeasure& measure, int s);

/// repu-form(s) for RePU(s) activations (ReLU is RePU(1)), lipschitz-form
/// otherwise.
NormReport representation_norm(const ShallowNet& net);

}  // namespace barron
