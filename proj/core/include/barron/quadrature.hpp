#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace barron {

enum class QuadRule { kMidpoint, kTrapezoid, kGaussLegendre };

std::string to_string(QuadRule rule);
QuadRule parse_quad_rule(const std::string& name);

/// Which rule and how many nodes to use when discretizing an integral over
/// [0, 1].
struct QuadratureSpec {
  QuadRule rule = QuadRule::kGaussLegendre;
  int nodes = 256;

  friend bool operator==(const QuadratureSpec&, const QuadratureSpec&) = default;
};

/// Nodes and positive weights on [0, 1]; weights sum to 1.
struct QuadratureNodes {
  std::vector<double> x;
  std::vector<double> w;
};

QuadratureNodes realize(const QuadratureSpec& spec);

/// Gauss-Legendre nodes/weights on [-1, 1], ascending.  Newton iteration on
/// the three-term recurrence.
QuadratureNodes gauss_legendre(int n);

struct AdaptiveResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
};

/// Adaptive Gauss-Kronrod on [a, b], splitting first at every breakpoint that
/// lies strictly inside the interval.  Tolerance is absolute.
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f,
                                  double a, double b,
                                  std::span<const double> breakpoints = {},
                                  double abs_tol = 1e-10, int max_depth = 30);

}  // namespace barron
