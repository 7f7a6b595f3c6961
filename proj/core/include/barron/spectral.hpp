#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "barron/poly_repu.hpp"
#include "barron/pushforward.hpp"
#include "barron/quadrature.hpp"

namespace barron {

struct SpectralTerm {
  std::vector<double> xi;
  std::complex<double> c;
};

/// Finite trigonometric sum f(x) = sum_j c_j exp(i <x, xi_j>).  Construction
/// checks conjugate symmetry, so f is real.
class SpectralRep {
 public:
  SpectralRep(std::size_t d, std::vector<SpectralTerm> terms);

  std::size_t d() const noexcept { return d_; }
  const std::vector<SpectralTerm>& terms() const noexcept { return terms_; }
  /// Index of the term at -xi_j (j itself when xi_j = 0).
  std::size_t partner(std::size_t j) const { return partner_[j]; }

 private:
  std::size_t d_;
  std::vector<SpectralTerm> terms_;
  std::vector<std::size_t> partner_;
};

std::complex<double> evaluate(const SpectralRep& rep, std::span<const double> x);

/// sum_j (1 + ||xi_j||_1)^s |c_j|
double spectral_norm(const SpectralRep& rep, int s);

/// Degree-s Taylor polynomial at the origin: coefficient of x^alpha is
/// Re(sum_j c_j (i xi_j)^alpha) / alpha!.
Polynomial taylor_coeffs(const SpectralRep& rep, int s);

/// Series part through poly_to_repu plus, for each term with xi != 0, N
/// remainder atoms (xi/||xi||_1, -u_k).  Default pairs are build_pairs(s, d).
Conversion spectral_to_repu(const SpectralRep& rep, int s, const QuadratureSpec& quad = {},
                            std::optional<BasisPairs> pairs = std::nullopt);

}  // namespace barron
