// Copyright the rt-spectra authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Dense>

#include "banded.hpp"
#include "error.hpp"

namespace rtspectra
{

/// Extreme eigenpair of a Hermitian pencil (H, M) with M positive definite.
/// The vector is M-normalized.
struct EigenPair
{
  double value = 0.0;
  Eigen::VectorXcd vector;
  /// ||H v - value M v|| / (||H||_F + |value| ||M||_F).
  double residual = 0.0;
  int factorizations = 0;
};

struct PencilOptions
{
  double relative_tolerance = 1e-14;
  /// Cap on bisection halvings after bracketing; bounds the work when the
  /// eigenvalue is zero and no relative tolerance can be met.
  int max_halvings = 64;
  int max_steps = 400;
  int inverse_iterations = 4;
};

namespace detail
{

/// Fixed, mode-independent start vector.
inline Eigen::VectorXcd default_start(std::size_t n)
{
  Eigen::VectorXcd x(static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < x.size(); ++j)
    x[j] = std::polar(1.0 + 0.5 * std::sin(1.3 * static_cast<double>(j)), 0.7 * static_cast<double>(j));
  return x;
}

inline double rayleigh(const BandedHermitian& h, const BandedHermitian& m, const Eigen::VectorXcd& x)
{
  return h.quadratic(x) / m.quadratic(x);
}

}  // namespace detail

/// Largest eigenvalue of (H, M) by bisection on the inertia test
/// "sigma M - H is positive definite", then inverse iteration at the upper
/// bracket for the vector. A start vector close to the answer shortens the
/// bracketing phase.
inline EigenPair largest_eigenpair(const BandedHermitian& h, const BandedHermitian& m,
                                   const Eigen::VectorXcd* guess = nullptr, const PencilOptions& opt = {})
{
  if (h.size() != m.size() || h.bandwidth() != m.bandwidth())
    fail(ErrorKind::EigenSolverFailure, "pencil matrices differ in shape");
  const std::size_t n = h.size();
  if (n == 0)
    fail(ErrorKind::EigenSolverFailure, "empty pencil");
  if (!(m.min_diagonal() > 0.0))
    fail(ErrorKind::EigenSolverFailure, "metric matrix has a nonpositive diagonal");

  EigenPair out;
  if (h.row_sum_norm() == 0.0)
  {
    out.vector = guess && guess->size() == static_cast<Eigen::Index>(n) ? *guess : detail::default_start(n);
    out.vector /= std::sqrt(m.quadratic(out.vector));
    return out;
  }
  auto definite = [&](double sigma) {
    ++out.factorizations;
    return is_positive_definite(m.combine(sigma, h, -1.0));
  };

  // Crude magnitude of the spectrum, used only for the first bracketing step.
  // The inertia test itself is much sharper than this scale suggests on
  // graded meshes, so it does not set the stopping tolerance.
  const double scale = std::max(h.row_sum_norm() / m.min_diagonal(), std::numeric_limits<double>::min());
  const double min_step = 1e-16 * scale;

  Eigen::VectorXcd x = guess && guess->size() == static_cast<Eigen::Index>(n) && guess->norm() > 0.0
                           ? *guess
                           : detail::default_start(n);
  double lo = detail::rayleigh(h, m, x);
  double step = std::max(1e-10 * std::abs(lo), min_step);
  while (definite(lo))
  {
    lo -= step;
    step *= 4.0;
    if (out.factorizations > opt.max_steps)
      fail(ErrorKind::EigenSolverFailure, "lower bracket search did not terminate");
  }
  step = std::max(1e-10 * std::abs(lo), min_step);
  double hi = lo + step;
  while (!definite(hi))
  {
    lo = hi;
    step *= 4.0;
    hi = lo + step;
    if (out.factorizations > opt.max_steps)
      fail(ErrorKind::EigenSolverFailure, "upper bracket search did not terminate");
  }
  for (int k = 0; k < opt.max_halvings && hi - lo > opt.relative_tolerance * std::max(std::abs(lo), std::abs(hi));
       ++k)
  {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi)
      break;
    (definite(mid) ? hi : lo) = mid;
  }

  // Inverse iteration with the shift just above the top eigenvalue.
  const BandedCholesky shifted(m.combine(hi, h, -1.0));
  ++out.factorizations;
  if (!shifted.ok())
    fail(ErrorKind::EigenSolverFailure, "shifted pencil lost definiteness");
  for (int it = 0; it < opt.inverse_iterations; ++it)
  {
    x = shifted.solve(m.multiply(x));
    x /= std::sqrt(m.quadratic(x));
    if (!x.allFinite())
      fail(ErrorKind::EigenSolverFailure, "inverse iteration produced non-finite values");
  }
  out.vector = x;
  out.value = h.quadratic(x);
  const double denom = h.frobenius_norm() + std::abs(out.value) * m.frobenius_norm();
  out.residual = (h.multiply(x) - out.value * m.multiply(x)).norm() / (denom > 0.0 ? denom : 1.0);
  return out;
}

/// Smallest eigenpair of (H, M).
inline EigenPair smallest_eigenpair(const BandedHermitian& h, const BandedHermitian& m,
                                    const Eigen::VectorXcd* guess = nullptr, const PencilOptions& opt = {})
{
  auto out = largest_eigenpair(h.scaled(-1.0), m, guess, opt);
  out.value = -out.value;
  return out;
}

}  // namespace rtspectra
