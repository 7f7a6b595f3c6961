#include "barron/activation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "barron/error.hpp"
#include "barron/quadrature.hpp"

namespace barron {

namespace {

constexpr int kBuiltinMaxOrder = 5;
constexpr double kTruncation = 40.0;

// Dense polynomial in one variable, lowest degree first.
using Poly = std::vector<double>;

Poly poly_derivative(const Poly& p) {
  if (p.size() <= 1) return {0.0};
  Poly out(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) out[i - 1] = p[i] * static_cast<double>(i);
  return out;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

Poly poly_add(Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  return a;
}

double poly_eval(const Poly& p, double t) {
  double acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * t + *it;
  return acc;
}

// For f with f' = g(f), D^k f = P_k(f) where P_0 = id and P_{k+1} = P_k' * g.
std::vector<Poly> chain_table(const Poly& g, int max_order) {
  std::vector<Poly> table{{0.0, 1.0}};
  for (int k = 0; k < max_order; ++k) table.push_back(poly_mul(poly_derivative(table.back()), g));
  return table;
}

const std::vector<Poly>& tanh_table() {
  static const std::vector<Poly> t = chain_table({1.0, 0.0, -1.0}, kBuiltinMaxOrder + 1);
  return t;
}

const std::vector<Poly>& logistic_table() {
  static const std::vector<Poly> t = chain_table({0.0, 1.0, -1.0}, kBuiltinMaxOrder + 1);
  return t;
}

// D^k arctan(z) = Q_k(z) / (1 + z^2)^k with Q_1 = 1,
// Q_{k+1} = Q_k' (1 + z^2) - 2 k z Q_k.
const std::vector<Poly>& arctan_table() {
  static const std::vector<Poly> t = [] {
    std::vector<Poly> q{{0.0}, {1.0}};
    for (int k = 1; k <= kBuiltinMaxOrder; ++k) {
      Poly next = poly_mul(poly_derivative(q[k]), {1.0, 0.0, 1.0});
      next = poly_add(next, poly_mul(q[k], {0.0, -2.0 * k}));
      q.push_back(next);
    }
    return q;
  }();
  return t;
}

double logistic_value(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus_value(double z) {
  if (z > 0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

double falling_factorial(int s, int k) {
  double out = 1.0;
  for (int i = 0; i < k; ++i) out *= static_cast<double>(s - i);
  return out;
}

std::string format_double(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

struct Activation::Impl {
  ActivationKind kind = ActivationKind::kSmooth;
  std::string name;
  std::map<std::string, double> params;
  int repu_s = 0;
  int max_order = kBuiltinMaxOrder;
  std::vector<double> kinks;
  // For piecewise kinds `plus` covers z >= 0 and `minus` covers z < 0; for
  // every other kind only `plus` is used.
  DerivativeOracle plus;
  DerivativeOracle minus;
  ActivationTraits traits;
  bool builtin = true;
};

Activation::Activation(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

Activation Activation::repu(int s) {
  if (s < 1) {
    throw Error(ErrorCode::kInvalidArgument, "RePU order must be >= 1, got " + std::to_string(s));
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = ActivationKind::kRepu;
  impl->name = s == 1 ? "relu" : "repu";
  impl->repu_s = s;
  impl->kinks = {0.0};
  impl->plus = [s](int k, double z) {
    if (z <= 0.0 || k > s) return 0.0;
    return falling_factorial(s, k) * std::pow(z, s - k);
  };
  impl->minus = [](int, double) { return 0.0; };
  if (s == 1) impl->traits.lipschitz = 1.0;
  for (int k = 0; k <= kBuiltinMaxOrder; ++k) impl->traits.not_integrable.push_back(k);
  return Activation(impl);
}

Activation Activation::relu() { return repu(1); }

Activation Activation::tanh() {
  auto impl = std::make_shared<Impl>();
  impl->name = "tanh";
  impl->plus = [](int k, double z) {
    const double t = std::tanh(z);
    return k == 0 ? t : poly_eval(tanh_table()[k], t);
  };
  impl->traits.lipschitz = 1.0;
  impl->traits.second_deriv_sup = 4.0 / (3.0 * std::sqrt(3.0));
  impl->traits.deriv_l1 = {{1, 2.0}, {2, 2.0}};
  impl->traits.not_integrable = {0};
  // |D^k tanh| <= c_k * 4 e^{-2|z|} with c_k = 2^k k!, generous.
  impl->traits.tail_bound = [](int k) {
    return std::pow(2.0, k) * std::tgamma(k + 1.0) * 4.0 * std::exp(-2.0 * kTruncation);
  };
  return Activation(impl);
}

Activation Activation::logistic() {
  auto impl = std::make_shared<Impl>();
  impl->name = "logi";
  impl->plus = [](int k, double z) {
    const double s = logistic_value(z);
    return k == 0 ? s : poly_eval(logistic_table()[k], s);
  };
  impl->traits.lipschitz = 0.25;
  impl->traits.second_deriv_sup = std::sqrt(3.0) / 18.0;
  impl->traits.deriv_l1 = {{1, 1.0}, {2, 0.5}};
  impl->traits.not_integrable = {0};
  impl->traits.tail_bound = [](int k) {
    return std::tgamma(k + 1.0) * 2.0 * std::exp(-kTruncation);
  };
  return Activation(impl);
}

Activation Activation::softplus() {
  auto impl = std::make_shared<Impl>();
  impl->name = "softplus";
  impl->plus = [](int k, double z) {
    if (k == 0) return softplus_value(z);
    const double s = logistic_value(z);
    return k == 1 ? s : poly_eval(logistic_table()[k - 1], s);
  };
  impl->traits.lipschitz = 1.0;
  impl->traits.second_deriv_sup = 0.25;
  impl->traits.deriv_l1 = {{2, 1.0}, {3, 0.5}};
  impl->traits.not_integrable = {0, 1};
  impl->traits.tail_bound = [](int k) {
    return std::tgamma(static_cast<double>(k)) * 2.0 * std::exp(-kTruncation);
  };
  return Activation(impl);
}

Activation Activation::arctan() {
  auto impl = std::make_shared<Impl>();
  impl->name = "arctan";
  impl->plus = [](int k, double z) {
    if (k == 0) return std::atan(z);
    return poly_eval(arctan_table()[k], z) / std::pow(1.0 + z * z, k);
  };
  impl->traits.lipschitz = 1.0;
  impl->traits.second_deriv_sup = 3.0 * std::sqrt(3.0) / 8.0;
  impl->traits.deriv_l1 = {{1, std::numbers::pi}, {2, 2.0}};
  impl->traits.not_integrable = {0};
  // |D^k arctan(z)| <= (k-1)! |z|^{-k}; both tails together.
  impl->traits.tail_bound = [](int k) {
    if (k < 2) return std::numeric_limits<double>::infinity();
    return 2.0 * std::tgamma(k - 1.0) * std::pow(kTruncation, 1.0 - k);
  };
  return Activation(impl);
}

Activation Activation::sine() {
  auto impl = std::make_shared<Impl>();
  impl->name = "sin";
  impl->plus = [](int k, double z) {
    switch (k % 4) {
      case 0:
        return std::sin(z);
      case 1:
        return std::cos(z);
      case 2:
        return -std::sin(z);
      default:
        return -std::cos(z);
    }
  };
  impl->traits.lipschitz = 1.0;
  impl->traits.second_deriv_sup = 1.0;
  for (int k = 0; k <= kBuiltinMaxOrder; ++k) impl->traits.not_integrable.push_back(k);
  return Activation(impl);
}

Activation Activation::affine(double a, double c) {
  auto impl = std::make_shared<Impl>();
  impl->name = "affine";
  impl->params = {{"a", a}, {"c", c}};
  impl->plus = [a, c](int k, double z) {
    if (k == 0) return a * z + c;
    return k == 1 ? a : 0.0;
  };
  impl->traits.lipschitz = std::abs(a);
  impl->traits.second_deriv_sup = 0.0;
  impl->traits.not_integrable = {0, 1};
  for (int k = 2; k <= kBuiltinMaxOrder; ++k) impl->traits.deriv_l1[k] = 0.0;
  return Activation(impl);
}

Activation Activation::relu6() {
  auto impl = std::make_shared<Impl>();
  impl->name = "relu6";
  impl->kinks = {0.0, 6.0};
  impl->plus = [](int k, double z) {
    if (k == 0) return std::clamp(z, 0.0, 6.0);
    return (k == 1 && z > 0.0 && z < 6.0) ? 1.0 : 0.0;
  };
  impl->traits.lipschitz = 1.0;
  impl->traits.not_integrable = {0};
  impl->traits.deriv_l1 = {{1, 6.0}};
  for (int k = 2; k <= kBuiltinMaxOrder; ++k) impl->traits.not_integrable.push_back(k);
  return Activation(impl);
}

Activation Activation::piecewise(std::string name, DerivativeOracle plus,
                                 DerivativeOracle minus, int max_order,
                                 ActivationTraits traits) {
  if (!plus || !minus) {
    throw Error(ErrorCode::kMissingOracle, "piecewise activation needs both branch oracles");
  }
  const double p0 = plus(0, 0.0);
  const double m0 = minus(0, 0.0);
  if (p0 != m0) {
    throw Error(ErrorCode::kInvalidArgument,
                "piecewise branches must agree at the origin: " + format_double(p0) +
                    " vs " + format_double(m0));
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = ActivationKind::kPiecewise;
  impl->name = std::move(name);
  impl->max_order = max_order;
  impl->kinks = {0.0};
  impl->plus = std::move(plus);
  impl->minus = std::move(minus);
  impl->traits = std::move(traits);
  impl->builtin = false;
  return Activation(impl);
}

Activation Activation::elu() {
  ActivationTraits traits;
  traits.lipschitz = 1.0;
  traits.second_deriv_sup = 1.0;
  traits.plus_l1 = {{1, std::numeric_limits<double>::infinity()}};
  traits.minus_l1 = {{1, 1.0}};
  for (int k = 2; k <= kBuiltinMaxOrder; ++k) {
    traits.plus_l1[k] = 0.0;
    traits.minus_l1[k] = 1.0;
  }
  traits.deriv_l1 = {{2, 1.0}};
  traits.not_integrable = {0, 1};
  auto act = piecewise(
      "elu",
      [](int k, double z) {
        if (k == 0) return z;
        return k == 1 ? 1.0 : 0.0;
      },
      [](int k, double z) { return k == 0 ? std::expm1(z) : std::exp(z); },
      kBuiltinMaxOrder, traits);
  auto impl = std::make_shared<Impl>(*act.impl_);
  impl->builtin = true;
  return Activation(impl);
}

Activation Activation::leaky_relu(double alpha) {
  ActivationTraits traits;
  traits.lipschitz = std::max(1.0, std::abs(alpha));
  for (int k = 2; k <= kBuiltinMaxOrder; ++k) {
    traits.plus_l1[k] = 0.0;
    traits.minus_l1[k] = 0.0;
  }
  for (int k = 0; k <= kBuiltinMaxOrder; ++k) traits.not_integrable.push_back(k);
  auto act = piecewise(
      "lrelu",
      [](int k, double z) {
        if (k == 0) return z;
        return k == 1 ? 1.0 : 0.0;
      },
      [alpha](int k, double z) {
        if (k == 0) return alpha * z;
        return k == 1 ? alpha : 0.0;
      },
      kBuiltinMaxOrder, traits);
  auto impl = std::make_shared<Impl>(*act.impl_);
  impl->builtin = true;
  impl->params = {{"alpha", alpha}};
  return Activation(impl);
}

Activation Activation::piecewise_relu() {
  ActivationTraits traits;
  traits.lipschitz = 1.0;
  for (int k = 2; k <= kBuiltinMaxOrder; ++k) {
    traits.plus_l1[k] = 0.0;
    traits.minus_l1[k] = 0.0;
  }
  for (int k = 0; k <= kBuiltinMaxOrder; ++k) traits.not_integrable.push_back(k);
  auto act = piecewise(
      "relu_pw",
      [](int k, double z) {
        if (k == 0) return z;
        return k == 1 ? 1.0 : 0.0;
      },
      [](int, double) { return 0.0; }, kBuiltinMaxOrder, traits);
  auto impl = std::make_shared<Impl>(*act.impl_);
  impl->builtin = true;
  return Activation(impl);
}

Activation Activation::custom(std::string name, DerivativeOracle oracle, int max_order,
                              ActivationTraits traits) {
  if (!oracle) throw Error(ErrorCode::kMissingOracle, "custom activation needs an oracle");
  auto impl = std::make_shared<Impl>();
  impl->kind = ActivationKind::kCustom;
  impl->name = std::move(name);
  impl->max_order = max_order;
  impl->plus = std::move(oracle);
  impl->traits = std::move(traits);
  impl->builtin = false;
  return Activation(impl);
}

Activation Activation::from_name(const std::string& name, int s,
                                 const std::map<std::string, double>& params) {
  auto param = [&](const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  if (name == "relu") return relu();
  if (name == "repu") {
    if (s < 1) throw Error(ErrorCode::kInvalidArgument, "repu needs an order s >= 1");
    return repu(s);
  }
  if (name == "tanh") return tanh();
  if (name == "arctan") return arctan();
  if (name == "logi" || name == "logistic") return logistic();
  if (name == "softplus") return softplus();
  if (name == "sin") return sine();
  if (name == "elu") return elu();
  if (name == "lrelu") return leaky_relu(param("alpha", 0.01));
  if (name == "relu6") return relu6();
  if (name == "affine") return affine(param("a", 1.0), param("c", 0.0));
  if (name == "relu_pw") return piecewise_relu();
  if (name == "custom") {
    throw Error(ErrorCode::kUnknownActivation,
                "custom activations are library-only and cannot be loaded from files");
  }
  throw Error(ErrorCode::kUnknownActivation, "unknown activation '" + name + "'");
}

ActivationKind Activation::kind() const { return impl_->kind; }
const std::string& Activation::name() const { return impl_->name; }
const std::map<std::string, double>& Activation::params() const { return impl_->params; }
int Activation::repu_order() const { return impl_->repu_s; }
int Activation::max_order() const { return impl_->max_order; }
const std::vector<double>& Activation::kinks() const { return impl_->kinks; }

double Activation::operator()(double z) const {
  if (impl_->kind == ActivationKind::kPiecewise) {
    return z >= 0.0 ? impl_->plus(0, z) : impl_->minus(0, z);
  }
  return impl_->plus(0, z);
}

double Activation::derivative(int k, double z, Branch branch) const {
  if (k < 0 || k > impl_->max_order) {
    throw Error(ErrorCode::kOrderExceeded, "derivative order " + std::to_string(k) +
                                               " exceeds declared maximum " +
                                               std::to_string(impl_->max_order) + " of " +
                                               impl_->name);
  }
  if (k == 0) return (*this)(z);
  switch (impl_->kind) {
    case ActivationKind::kPiecewise: {
      if (z > 0.0 || branch == Branch::kPlus) return impl_->plus(k, z);
      if (z < 0.0 || branch == Branch::kMinus) return impl_->minus(k, z);
      const double p = impl_->plus(k, 0.0);
      const double m = impl_->minus(k, 0.0);
      if (p != m) {
        throw Error(ErrorCode::kAmbiguousAtKink,
                    "derivative of order " + std::to_string(k) + " of " + impl_->name +
                        " is two-valued at 0; pass a branch");
      }
      return p;
    }
    case ActivationKind::kRepu: {
      const int s = impl_->repu_s;
      if (z == 0.0 && k >= s && branch == Branch::kAuto) {
        // Left limit is 0, right limit is s! for k == s.
        if (k == s) {
          throw Error(ErrorCode::kAmbiguousAtKink,
                      "derivative of order " + std::to_string(k) + " of RePU(" +
                          std::to_string(s) + ") is two-valued at 0; pass a branch");
        }
        return 0.0;
      }
      if (z == 0.0 && branch == Branch::kPlus && k == s) return falling_factorial(s, k);
      return impl_->plus(k, z);
    }
    default: {
      for (double kink : impl_->kinks) {
        if (z == kink && branch == Branch::kAuto) {
          const double left = impl_->plus(k, std::nextafter(z, -INFINITY));
          const double right = impl_->plus(k, std::nextafter(z, INFINITY));
          if (left != right) {
            throw Error(ErrorCode::kAmbiguousAtKink,
                        "derivative of " + impl_->name + " is two-valued at " +
                            format_double(z) + "; pass a branch");
          }
        }
        if (z == kink && branch != Branch::kAuto) {
          return impl_->plus(k, branch == Branch::kPlus ? std::nextafter(z, INFINITY)
                                                        : std::nextafter(z, -INFINITY));
        }
      }
      return impl_->plus(k, z);
    }
  }
}

L1Value Activation::deriv_l1(int k) const {
  if (k < 1 || k > impl_->max_order) {
    throw Error(ErrorCode::kOrderExceeded, "deriv_l1 order " + std::to_string(k) +
                                               " outside [1, " +
                                               std::to_string(impl_->max_order) + "]");
  }
  const auto& traits = impl_->traits;
  if (std::find(traits.not_integrable.begin(), traits.not_integrable.end(), k) !=
      traits.not_integrable.end()) {
    throw Error(ErrorCode::kNotIntegrable,
                "D^" + std::to_string(k) + " " + impl_->name + " is not in L1(R)");
  }
  if (auto it = traits.deriv_l1.find(k); it != traits.deriv_l1.end()) {
    return {it->second, 0.0, true, true};
  }
  L1Value out;
  out.value = local_l1(k, -kTruncation, kTruncation);
  out.analytic = false;
  if (traits.tail_bound) {
    out.truncation_bound = traits.tail_bound(k);
    out.trusted = std::isfinite(out.truncation_bound);
  } else {
    out.truncation_bound = std::numeric_limits<double>::infinity();
    out.trusted = false;
  }
  return out;
}

double Activation::local_l1(int k, double lo, double hi) const {
  if (k < 0 || k > impl_->max_order) {
    throw Error(ErrorCode::kOrderExceeded, "local_l1 order exceeds declared maximum");
  }
  if (hi < lo) std::swap(lo, hi);
  // Off-kink evaluation only; branch choice is irrelevant for the integral.
  auto integrand = [this, k](double z) {
    if (impl_->kind == ActivationKind::kPiecewise) {
      return std::abs(z >= 0.0 ? impl_->plus(k, z) : impl_->minus(k, z));
    }
    return std::abs(impl_->plus(k, z));
  };
  const auto r = integrate_adaptive(integrand, lo, hi, impl_->kinks, 1e-11, 40);
  return r.value;
}

L1Value Activation::branch_l1(int k, Branch side) const {
  if (impl_->kind != ActivationKind::kPiecewise) {
    throw Error(ErrorCode::kWrongActivation, impl_->name + " is not a piecewise activation");
  }
  if (side == Branch::kAuto) {
    throw Error(ErrorCode::kInvalidArgument, "branch_l1 needs kPlus or kMinus");
  }
  const auto& table = side == Branch::kPlus ? impl_->traits.plus_l1 : impl_->traits.minus_l1;
  if (auto it = table.find(k); it != table.end()) {
    if (!std::isfinite(it->second)) {
      throw Error(ErrorCode::kNotIntegrable, "branch derivative is not integrable");
    }
    return {it->second, 0.0, true, true};
  }
  const auto& oracle = side == Branch::kPlus ? impl_->plus : impl_->minus;
  auto integrand = [&oracle, k](double z) { return std::abs(oracle(k, z)); };
  L1Value out;
  out.value = side == Branch::kPlus ? integrate_adaptive(integrand, 0.0, kTruncation).value
                                    : integrate_adaptive(integrand, -kTruncation, 0.0).value;
  if (impl_->traits.tail_bound) {
    out.truncation_bound = impl_->traits.tail_bound(k);
    out.trusted = std::isfinite(out.truncation_bound);
  } else {
    out.truncation_bound = std::numeric_limits<double>::infinity();
    out.trusted = false;
  }
  return out;
}

std::optional<double> Activation::lipschitz_constant() const { return impl_->traits.lipschitz; }

std::optional<double> Activation::second_deriv_sup() const {
  return impl_->traits.second_deriv_sup;
}

double Activation::sup_abs(double r) const {
  r = std::abs(r);
  if (impl_->builtin && impl_->name == "sin") return r >= std::numbers::pi / 2 ? 1.0 : std::sin(r);
  if (impl_->builtin) {
    // Every other builtin is monotone on each side of the origin.
    return std::max({std::abs((*this)(-r)), std::abs((*this)(r)), std::abs((*this)(0.0))});
  }
  double best = 0.0;
  constexpr int kSamples = 1025;
  for (int i = 0; i < kSamples; ++i) {
    const double z = -r + 2.0 * r * i / (kSamples - 1);
    best = std::max(best, std::abs((*this)(z)));
  }
  return best;
}

bool Activation::same_as(const Activation& other) const {
  if (impl_ == other.impl_) return true;
  return impl_->builtin && other.impl_->builtin && impl_->name == other.impl_->name &&
         impl_->repu_s == other.impl_->repu_s && impl_->params == other.impl_->params;
}

}  // namespace barron
