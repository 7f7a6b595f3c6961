#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "barron/measure.hpp"

namespace barron {

using MultiIndex = std::vector<int>;

/// Inverse lexicographic order: compare the last coordinate first.  With d = 1
/// this is ascending degree.
bool inverse_lex_less(const MultiIndex& a, const MultiIndex& b);

/// All multi-indices of length d with |alpha| <= s, in inverse lexicographic
/// order.  There are C(s + d, d) of them.
class MultiIndexTable {
 public:
  MultiIndexTable(int s, int d);

  int s() const noexcept { return s_; }
  int d() const noexcept { return d_; }
  std::size_t size() const noexcept { return indices_.size(); }
  const std::vector<MultiIndex>& indices() const& noexcept { return indices_; }
  std::vector<MultiIndex> indices() && noexcept { return std::move(indices_); }
  const MultiIndex& operator[](std::size_t j) const { return indices_[j]; }

 private:
  int s_;
  int d_;
  std::vector<MultiIndex> indices_;
};

/// C(n, k) as a double.
double binomial(int n, int k);
/// |alpha|! / prod alpha_k!
double multinomial(const MultiIndex& alpha);

enum class PairScale {
  /// w_{i,k} = t_i^{1 + (k-1) sqrt(prime(k))} with 1 < t_1 < ... < t_p.
  kPaper,
  /// Same exponent schedule normalized to (0, 1] and t_i geometric in (0, 1],
  /// so that ||w_i||_1 <= d.
  kCompact,
  /// Principal lattice w_i = (2 alpha_i - s/(d+1)) / s.  Unisolvent for degree
  /// s, hence the ridge powers form a basis; far better conditioned than the
  /// curve schedules once d >= 2.
  kLattice,
};

struct PairOptions {
  PairScale scale = PairScale::kLattice;
  /// Geometric ratio between consecutive t_i for kCompact.
  double ratio = 0.4;
  /// Additive spacing of t_i above 1 for kPaper.
  double paper_step = 0.2;
};

/// p = C(s + d, d) pairs (w_i, b_i = 1) whose ridge powers
/// (<x, w_i> + 1)^s span the polynomials of degree <= s in d variables.
struct BasisPairs {
  int s = 0;
  int d = 0;
  PairScale scale = PairScale::kLattice;
  std::vector<std::vector<double>> w;
  std::vector<double> b;
  /// 2-norm condition number of the equilibrated W.
  double conditioning = 0.0;

  std::size_t size() const noexcept { return w.size(); }
};

BasisPairs build_pairs(int s, int d, PairOptions options = {});

/// The p x p matrix with W_ij = C(s,|a_j|) C(|a_j|, a_j) w_i^{a_j} b_i^{s-|a_j|},
/// so that row i times the monomial vector [x^{a_j}] is (<x, w_i> + b_i)^s.
struct AssembledW {
  Eigen::MatrixXd matrix;
  double condition = 0.0;
};

AssembledW assemble_W(const BasisPairs& pairs, const MultiIndexTable& table);

/// Polynomial in the monomial basis, keyed by multi-index.
struct Polynomial {
  int d = 1;
  int s = 0;
  std::map<MultiIndex, double> coeffs;

  double evaluate(std::span<const double> x) const;
  double coeff_l1() const;
};

/// Sign in z^s = repu_s(z) + sign * repu_s(-z), namely (-1)^s.
int identity_sign(int s);
/// Sign on the reflected half of a Taylor remainder, (-1)^{s-1}:
/// int_0^z f(u)(z-u)^s du = int_0^c f(u) repu_s(z-u) + sign f(-u) repu_s(-z-u) du.
int remainder_sign(int s);

struct RepuExpansion {
  DiscreteMeasure measure;
  std::vector<double> kappa;
  /// ||W^T kappa - c||_inf after refinement.
  double residual = 0.0;
  double condition = 0.0;
};

/// Writes `poly` exactly as a RePU(s) measure with 2p atoms: kappa_i at
/// (w_i, b_i) then sign * kappa_i at (-w_i, -b_i) for every i.  Throws
/// kIllConditioned when the solve residual exceeds `residual_tol`.
RepuExpansion poly_to_repu(const Polynomial& poly, const BasisPairs& pairs,
                           double residual_tol = 1e-9);

}  // namespace barron
