#include "barron/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "barron/error.hpp"

namespace barron {

std::string to_string(QuadRule rule) {
  switch (rule) {
    case QuadRule::kMidpoint:
      return "midpoint";
    case QuadRule::kTrapezoid:
      return "trapezoid";
    case QuadRule::kGaussLegendre:
      return "gauss-legendre";
  }
  return "unknown";
}

QuadRule parse_quad_rule(const std::string& name) {
  if (name == "midpoint") return QuadRule::kMidpoint;
  if (name == "trapezoid") return QuadRule::kTrapezoid;
  if (name == "gauss-legendre" || name == "gl") return QuadRule::kGaussLegendre;
  throw Error(ErrorCode::kInvalidArgument, "unknown quadrature rule '" + name + "'");
}

QuadratureNodes gauss_legendre(int n) {
  if (n < 1) {
    throw Error(ErrorCode::kInvalidArgument, "gauss-legendre needs at least one node");
  }
  QuadratureNodes out;
  out.x.assign(n, 0.0);
  out.w.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi's initial guess for the i-th root from the right.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p0 = 1.0;
    double p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = (n == 1) ? 1.0 : n * (z * p1 - p0) / (z * z - 1.0);
    const double weight = 2.0 / ((1.0 - z * z) * dp * dp);
    out.x[n - 1 - i] = z;
    out.x[i] = -z;
    out.w[n - 1 - i] = weight;
    out.w[i] = weight;
  }
  if (n % 2 == 1) out.x[n / 2] = 0.0;
  return out;
}

QuadratureNodes realize(const QuadratureSpec& spec) {
  const int n = spec.nodes;
  QuadratureNodes out;
  switch (spec.rule) {
    case QuadRule::kMidpoint: {
      if (n < 1) throw Error(ErrorCode::kInvalidArgument, "midpoint rule needs N >= 1");
      out.x.resize(n);
      out.w.assign(n, 1.0 / n);
      for (int k = 0; k < n; ++k) out.x[k] = (k + 0.5) / n;
      break;
    }
    case QuadRule::kTrapezoid: {
      if (n < 2) throw Error(ErrorCode::kInvalidArgument, "trapezoid rule needs N >= 2");
      const double h = 1.0 / (n - 1);
      out.x.resize(n);
      out.w.assign(n, h);
      for (int k = 0; k < n; ++k) out.x[k] = k * h;
      out.x[n - 1] = 1.0;
      out.w.front() = h / 2;
      out.w.back() = h / 2;
      break;
    }
    case QuadRule::kGaussLegendre: {
      out = gauss_legendre(n);
      for (int k = 0; k < n; ++k) {
        out.x[k] = 0.5 * (out.x[k] + 1.0);
        out.w[k] *= 0.5;
      }
      break;
    }
  }
  return out;
}

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a,
                                  double b, std::span<const double> breakpoints,
                                  double abs_tol, int max_depth) {
  if (!(a <= b)) {
    throw Error(ErrorCode::kInvalidArgument, "integration interval must satisfy a <= b");
  }
  std::vector<double> cuts{a};
  for (double p : breakpoints) {
    if (p > a && p < b) cuts.push_back(p);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // Global adaptive bisection: always split the panel with the largest
  // Kronrod error estimate.  Bounded by depth and by total panel count.
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  struct Panel {
    double lo, hi, value, err;
    int depth;
    bool operator<(const Panel& o) const { return err < o.err; }
  };
  auto eval = [&](double lo, double hi, int depth) {
    double err = 0.0;
    const double v = GK::integrate(f, lo, hi, 0, 0.0, &err);
    return Panel{lo, hi, v, err, depth};
  };
  std::priority_queue<Panel> queue;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i] == cuts[i + 1]) continue;
    const Panel p = eval(cuts[i], cuts[i + 1], 0);
    total_err += p.err;
    queue.push(p);
  }
  constexpr std::size_t kMaxPanels = 20000;
  std::vector<Panel> done;
  while (!queue.empty() && total_err > abs_tol && queue.size() + done.size() < kMaxPanels) {
    Panel p = queue.top();
    queue.pop();
    if (p.depth >= max_depth || p.err <= 1e-16 * std::abs(p.value)) {
      // cannot refine further
      done.push_back(p);
      total_err -= p.err;
      continue;
    }
    const double mid = 0.5 * (p.lo + p.hi);
    const Panel left = eval(p.lo, mid, p.depth + 1);
    const Panel right = eval(mid, p.hi, p.depth + 1);
    total_err += left.err + right.err - p.err;
    queue.push(left);
    queue.push(right);
  }
  AdaptiveResult result;
  while (!queue.empty()) {
    done.push_back(queue.top());
    queue.pop();
  }
  std::sort(done.begin(), done.end(), [](const Panel& a, const Panel& b) { return a.lo < b.lo; });
  for (const auto& p : done) {
    result.value += p.value;
    result.error_estimate += p.err;
  }
  result.converged = result.error_estimate <= abs_tol ||
                     result.error_estimate <= 1e-15 * std::abs(result.value);
  return result;
}

}  // namespace barron
