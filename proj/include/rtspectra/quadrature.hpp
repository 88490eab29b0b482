// Copyright the rt-spectra authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "error.hpp"
#include "types.hpp"

namespace rtspectra
{

/// Gauss-Legendre rule on [0, 1].
struct GaussRule
{
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail
{

inline GaussRule compute_gauss_legendre(int order)
{
  // Returns (P_order(x), P'_order(x)) by the three-term recurrence.
  auto legendre = [order](double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= order; ++k)
    {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    return std::pair{p1, order * (x * p1 - p0) / (x * x - 1.0)};
  };

  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i)
  {
    double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
    for (int iter = 0; iter < 100; ++iter)
    {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    const double dp = legendre(x).second;
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace detail

/// Cached rule of the given order (1 <= order <= 64).
inline const GaussRule& gauss_legendre(int order)
{
  if (order < 1 || order > 64)
    fail(ErrorKind::Validation, "quadrature order must be in [1, 64]");
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end())
    it = cache.emplace(order, detail::compute_gauss_legendre(order)).first;
  return it->second;
}

}  // namespace rtspectra
