#include "barron/measure.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>

#include "barron/error.hpp"
#include "barron/parallel.hpp"

namespace barron {

namespace {

void validate_atom(const Atom& atom, std::size_t d) {
  if (atom.w.size() != d) {
    throw Error(ErrorCode::kDimensionMismatch,
                "atom weight has " + std::to_string(atom.w.size()) +
                    " entries, measure dimension is " + std::to_string(d));
  }
  for (double v : atom.w) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "atom weight is not finite");
  }
  if (!std::isfinite(atom.b) || !std::isfinite(atom.mass)) {
    throw Error(ErrorCode::kInvalidArgument, "atom bias or mass is not finite");
  }
}

}  // namespace

double reach(const Atom& atom) {
  double r = std::abs(atom.b);
  for (double v : atom.w) r += std::abs(v);
  return r;
}

DiscreteMeasure::DiscreteMeasure(std::size_t d) : d_(d) {
  if (d == 0) throw Error(ErrorCode::kInvalidArgument, "measure dimension must be positive");
}

DiscreteMeasure::DiscreteMeasure(std::size_t d, std::vector<Atom> atoms)
    : DiscreteMeasure(d) {
  for (const auto& a : atoms) validate_atom(a, d_);
  atoms_ = std::move(atoms);
}

void DiscreteMeasure::add(Atom atom) {
  validate_atom(atom, d_);
  atoms_.push_back(std::move(atom));
}

void DiscreteMeasure::add(std::vector<double> w, double b, double mass) {
  add(Atom{std::move(w), b, mass});
}

double total_mass(const DiscreteMeasure& measure) {
  double acc = 0.0;
  for (const auto& a : measure.atoms()) acc += a.mass;
  return acc;
}

double total_variation(const DiscreteMeasure& measure) {
  double acc = 0.0;
  for (const auto& a : measure.atoms()) acc += std::abs(a.mass);
  return acc;
}

double theta_max(const DiscreteMeasure& measure) {
  double best = 0.0;
  for (const auto& a : measure.atoms()) best = std::max(best, reach(a));
  return best;
}

DiscreteMeasure concat(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  if (a.d() != b.d()) {
    throw Error(ErrorCode::kDimensionMismatch, "cannot concatenate measures of different dimension");
  }
  DiscreteMeasure out(a.d());
  out.reserve(a.size() + b.size());
  for (const auto& atom : a.atoms()) out.add(atom);
  for (const auto& atom : b.atoms()) out.add(atom);
  return out;
}

DiscreteMeasure scaled(const DiscreteMeasure& measure, double factor) {
  DiscreteMeasure out(measure.d());
  out.reserve(measure.size());
  for (const auto& atom : measure.atoms()) out.add(atom.w, atom.b, atom.mass * factor);
  return out;
}

double PruneResult::evaluation_change_bound(const Activation& activation) const {
  double bound = 0.0;
  for (const auto& [r, m] : dropped_atoms) bound += m * activation.sup_abs(r);
  return bound;
}

PruneResult prune(const DiscreteMeasure& measure, double tol) {
  if (!(tol >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "prune tolerance must be >= 0");

  // Key on the exact bit pattern of (w, b); first occurrence wins the slot.
  std::map<std::pair<std::vector<double>, double>, std::size_t> slot;
  std::vector<Atom> merged;
  merged.reserve(measure.size());
  std::size_t merges = 0;
  for (const auto& atom : measure.atoms()) {
    auto key = std::make_pair(atom.w, atom.b);
    auto [it, inserted] = slot.try_emplace(std::move(key), merged.size());
    if (inserted) {
      merged.push_back(atom);
    } else {
      merged[it->second].mass += atom.mass;
      ++merges;
    }
  }

  PruneResult out{DiscreteMeasure(measure.d()), 0, merges, {}};
  out.measure.reserve(merged.size());
  for (auto& atom : merged) {
    if (std::abs(atom.mass) <= tol) {
      ++out.dropped;
      out.dropped_atoms.emplace_back(reach(atom), std::abs(atom.mass));
    } else {
      out.measure.add(std::move(atom));
    }
  }
  return out;
}

double evaluate(const ShallowNet& net, std::span<const double> x, EvalOptions options) {
  const std::size_t d = net.d();
  if (x.size() != d) {
    throw Error(ErrorCode::kDimensionMismatch, "input has " + std::to_string(x.size()) +
                                                   " coordinates, network expects " +
                                                   std::to_string(d));
  }
  double sum = 0.0;
  double compensation = 0.0;
  for (const auto& atom : net.measure.atoms()) {
    double z = atom.b;
    for (std::size_t k = 0; k < d; ++k) z += x[k] * atom.w[k];
    const double term = atom.mass * net.activation(z);
    if (options.compensated) {
      const double t = sum + term;
      if (std::abs(sum) >= std::abs(term)) {
        compensation += (sum - t) + term;
      } else {
        compensation += (term - t) + sum;
      }
      sum = t;
    } else {
      sum += term;
    }
  }
  return sum + compensation;
}

std::vector<double> evaluate_batch(const ShallowNet& net,
                                   const std::vector<std::vector<double>>& points) {
  const std::size_t d = net.d();
  for (const auto& x : points) {
    if (x.size() != d) {
      throw Error(ErrorCode::kDimensionMismatch, "input has " + std::to_string(x.size()) +
                                                     " coordinates, network expects " +
                                                     std::to_string(d));
    }
  }
  const int repu_s = net.activation.is_repu() ? net.activation.repu_order() : 0;
  std::vector<double> out(points.size(), 0.0);
  constexpr std::size_t kBlock = 256;
  parallel_for(
      (points.size() + kBlock - 1) / kBlock,
      [&](std::size_t first, std::size_t last) {
        std::array<double, kBlock> z;
        for (std::size_t blk = first; blk < last; ++blk) {
          const std::size_t lo = blk * kBlock;
          const std::size_t n = std::min(kBlock, points.size() - lo);
          for (const auto& atom : net.measure.atoms()) {
            for (std::size_t p = 0; p < n; ++p) {
              const auto& x = points[lo + p];
              double v = atom.b;
              for (std::size_t k = 0; k < d; ++k) v += x[k] * atom.w[k];
              z[p] = v;
            }
            if (repu_s == 1) {
              for (std::size_t p = 0; p < n; ++p) out[lo + p] += atom.mass * (z[p] <= 0.0 ? 0.0 : z[p]);
            } else if (repu_s > 1) {
              for (std::size_t p = 0; p < n; ++p)
                out[lo + p] += atom.mass * (z[p] <= 0.0 ? 0.0 : std::pow(z[p], repu_s));
            } else {
              for (std::size_t p = 0; p < n; ++p) out[lo + p] += atom.mass * net.activation(z[p]);
            }
          }
        }
      },
      1);
  return out;
}

double lipschitz_form_norm(const DiscreteMeasure& measure) {
  double acc = 0.0;
  for (const auto& a : measure.atoms()) acc += std::abs(a.mass) * (1.0 + reach(a));
  return acc;
}

double repu_form_norm(const DiscreteMeasure& measure, int s) {
  double acc = 0.0;
  for (const auto& a : measure.atoms()) acc += std::abs(a.mass) * std::pow(reach(a), s);
  return acc;
}

NormReport representation_norm(const ShallowNet& net) {
  NormReport out;
  out.total_variation = total_variation(net.measure);
  out.theta_max = theta_max(net.measure);
  if (net.activation.is_repu()) {
    out.kind = NormKind::kRepu;
    out.s = net.activation.repu_order();
    out.value = repu_form_norm(net.measure, out.s);
  } else {
    out.kind = NormKind::kLipschitz;
    out.s = 0;
    out.value = lipschitz_form_norm(net.measure);
  }
  return out;
}

}  // namespace barron
