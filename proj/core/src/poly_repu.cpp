#include "barron/poly_repu.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "barron/error.hpp"

namespace barron {

namespace {

constexpr std::array<int, 64> kPrimes = {
    2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,  47,  53,
    59,  61,  67,  71,  73,  79,  83,  89,  97,  101, 103, 107, 109, 113, 127, 131,
    137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223,
    227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307, 311};

// Exponent of t_i in coordinate k (0-based): 1 + k sqrt(prime(k+1)).
std::vector<double> curve_exponents(int d) {
  std::vector<double> e(d);
  for (int k = 0; k < d; ++k) e[k] = 1.0 + k * std::sqrt(static_cast<double>(kPrimes[k]));
  return e;
}

void enumerate(int d, int budget, MultiIndex& current, std::vector<MultiIndex>& out) {
  if (static_cast<int>(current.size()) == d) {
    out.push_back(current);
    return;
  }
  for (int v = 0; v <= budget; ++v) {
    current.push_back(v);
    enumerate(d, budget - v, current, out);
    current.pop_back();
  }
}

double condition_2norm(Eigen::MatrixXd m) {
  // Alternate row/column max scaling; the solve is invariant to it.
  for (int sweep = 0; sweep < 20; ++sweep) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double r = m.row(i).cwiseAbs().maxCoeff();
      if (r > 0) m.row(i) /= r;
    }
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double c = m.col(j).cwiseAbs().maxCoeff();
      if (c > 0) m.col(j) /= c;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 1.0;
  const double smallest = sv(sv.size() - 1);
  return smallest > 0 ? sv(0) / smallest : std::numeric_limits<double>::infinity();
}

}  // namespace

bool inverse_lex_less(const MultiIndex& a, const MultiIndex& b) {
  return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
}

MultiIndexTable::MultiIndexTable(int s, int d) : s_(s), d_(d) {
  if (s < 0 || d < 1) {
    throw Error(ErrorCode::kInvalidArgument, "multi-index table needs s >= 0 and d >= 1");
  }
  MultiIndex current;
  enumerate(d, s, current, indices_);
  std::sort(indices_.begin(), indices_.end(), inverse_lex_less);
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return std::round(out);
}

double multinomial(const MultiIndex& alpha) {
  int total = 0;
  double out = 1.0;
  for (int a : alpha) {
    total += a;
    out *= binomial(total, a);
  }
  return out;
}

BasisPairs build_pairs(int s, int d, PairOptions options) {
  if (s < 1 || d < 1) throw Error(ErrorCode::kInvalidArgument, "build_pairs needs s, d >= 1");
  if (d > static_cast<int>(kPrimes.size())) {
    throw Error(ErrorCode::kInvalidArgument, "at most 64 dimensions are supported");
  }
  const MultiIndexTable table(s, d);
  const std::size_t p = table.size();

  BasisPairs out;
  out.s = s;
  out.d = d;
  out.scale = options.scale;
  out.w.resize(p);
  out.b.assign(p, 1.0);

  switch (options.scale) {
    case PairScale::kPaper: {
      const auto e = curve_exponents(d);
      for (std::size_t i = 0; i < p; ++i) {
        const double t = 1.0 + options.paper_step * static_cast<double>(i + 1);
        out.w[i].resize(d);
        for (int k = 0; k < d; ++k) out.w[i][k] = std::pow(t, e[k]);
      }
      break;
    }
    case PairScale::kCompact: {
      if (!(options.ratio > 0.0 && options.ratio < 1.0)) {
        throw Error(ErrorCode::kInvalidArgument, "compact ratio must lie in (0, 1)");
      }
      auto e = curve_exponents(d);
      const double top = e.back();
      for (double& v : e) v /= top;
      for (std::size_t i = 0; i < p; ++i) {
        const double t = std::pow(options.ratio, static_cast<double>(p - 1 - i));
        out.w[i].resize(d);
        for (int k = 0; k < d; ++k) out.w[i][k] = std::pow(t, e[k]);
      }
      break;
    }
    case PairScale::kLattice: {
      const double shift = static_cast<double>(s) / (d + 1);
      for (std::size_t i = 0; i < p; ++i) {
        out.w[i].resize(d);
        for (int k = 0; k < d; ++k) out.w[i][k] = (2.0 * table[i][k] - shift) / s;
      }
      break;
    }
  }
  out.conditioning = assemble_W(out, table).condition;
  return out;
}

AssembledW assemble_W(const BasisPairs& pairs, const MultiIndexTable& table) {
  if (pairs.s != table.s() || pairs.d != table.d() || pairs.size() != table.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "basis pairs and multi-index table disagree");
  }
  const auto p = static_cast<Eigen::Index>(table.size());
  AssembledW out;
  out.matrix.resize(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      const auto& alpha = table[j];
      const int degree = std::accumulate(alpha.begin(), alpha.end(), 0);
      double entry = binomial(table.s(), degree) * multinomial(alpha);
      for (int k = 0; k < table.d(); ++k) entry *= std::pow(pairs.w[i][k], alpha[k]);
      entry *= std::pow(pairs.b[i], table.s() - degree);
      out.matrix(i, j) = entry;
    }
  }
  out.condition = condition_2norm(out.matrix);
  return out;
}

double Polynomial::evaluate(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != d) {
    throw Error(ErrorCode::kDimensionMismatch, "polynomial expects " + std::to_string(d) +
                                                   " variables");
  }
  double acc = 0.0;
  for (const auto& [alpha, c] : coeffs) {
    double term = c;
    for (int k = 0; k < d; ++k) term *= std::pow(x[k], alpha[k]);
    acc += term;
  }
  return acc;
}

double Polynomial::coeff_l1() const {
  double acc = 0.0;
  for (const auto& [alpha, c] : coeffs) acc += std::abs(c);
  return acc;
}

int identity_sign(int s) { return s % 2 == 0 ? 1 : -1; }

int remainder_sign(int s) { return -identity_sign(s); }

RepuExpansion poly_to_repu(const Polynomial& poly, const BasisPairs& pairs,
                           double residual_tol) {
  if (poly.d != pairs.d) {
    throw Error(ErrorCode::kDimensionMismatch, "polynomial and basis pairs differ in dimension");
  }
  const MultiIndexTable table(pairs.s, pairs.d);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(table.size()));
  for (const auto& [alpha, value] : poly.coeffs) {
    const int degree = std::accumulate(alpha.begin(), alpha.end(), 0);
    if (static_cast<int>(alpha.size()) != pairs.d || degree > pairs.s) {
      throw Error(ErrorCode::kInvalidArgument,
                  "polynomial term has degree " + std::to_string(degree) +
                      " above the basis order " + std::to_string(pairs.s));
    }
    auto it = std::lower_bound(table.indices().begin(), table.indices().end(), alpha,
                               inverse_lex_less);
    c(it - table.indices().begin()) += value;
  }

  const AssembledW assembled = assemble_W(pairs, table);
  const Eigen::MatrixXd A = assembled.matrix.transpose();

  // Equilibrate, factor, then one step of iterative refinement.
  Eigen::VectorXd row_scale = A.rowwise().lpNorm<Eigen::Infinity>().cwiseInverse();
  Eigen::VectorXd col_scale = (row_scale.asDiagonal() * A).colwise().lpNorm<Eigen::Infinity>()
                                  .transpose()
                                  .cwiseInverse();
  const Eigen::MatrixXd scaled = row_scale.asDiagonal() * A * col_scale.asDiagonal();
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(scaled);
  auto solve = [&](const Eigen::VectorXd& rhs) -> Eigen::VectorXd {
    return col_scale.asDiagonal() * lu.solve(row_scale.asDiagonal() * rhs);
  };
  Eigen::VectorXd kappa = solve(c);
  kappa += solve(c - A * kappa);
  const double residual = (A * kappa - c).lpNorm<Eigen::Infinity>();

  if (!(residual <= residual_tol)) {
    throw Error(ErrorCode::kIllConditioned,
                "RePU basis solve residual " + std::to_string(residual) +
                    " exceeds tolerance; condition estimate " +
                    std::to_string(assembled.condition) +
                    " (try another pair scale or a lower order)");
  }

  RepuExpansion out{DiscreteMeasure(static_cast<std::size_t>(pairs.d)), {}, residual,
                    assembled.condition};
  out.kappa.assign(kappa.data(), kappa.data() + kappa.size());
  const int sign = identity_sign(pairs.s);
  out.measure.reserve(2 * pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out.measure.add(pairs.w[i], pairs.b[i], out.kappa[i]);
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    std::vector<double> neg(pairs.w[i].size());
    std::transform(pairs.w[i].begin(), pairs.w[i].end(), neg.begin(), [](double v) { return -v; });
    out.measure.add(std::move(neg), -pairs.b[i], sign * out.kappa[i]);
  }
  return out;
}

}  // namespace barron
