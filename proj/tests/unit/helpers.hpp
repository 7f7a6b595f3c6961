#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "barron/measure.hpp"

namespace barron::testing_util {

inline DiscreteMeasure random_measure(std::size_t d, std::size_t n, std::uint64_t seed,
                                      double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DiscreteMeasure m(d);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> w(d);
    for (auto& v : w) v = scale * u(rng);
    m.add(std::move(w), scale * u(rng), u(rng));
  }
  return m;
}

inline std::vector<std::vector<double>> random_points(std::size_t d, std::size_t n,
                                                      std::uint64_t seed, double r = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-r, r);
  std::vector<std::vector<double>> out(n, std::vector<double>(d));
  for (auto& x : out)
    for (auto& v : x) v = u(rng);
  return out;
}

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  return out;
}

}  // namespace barron::testing_util
