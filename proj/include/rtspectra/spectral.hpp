// Copyright the rt-spectra authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "assembly.hpp"
#include "banded.hpp"
#include "error.hpp"
#include "pencil.hpp"

namespace rtspectra
{

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct XiOptions
{
  /// Relative level below which a denominator value counts as null. Measured
  /// against the H1 norm (gradient + mass), in which first-order forms have a
  /// mesh-independent spectrum.
  double null_tolerance = 1e-10;
  int max_iterations = 200;
  double tolerance = 1e-14;
};

struct XiResult
{
  double value = 0.0;
  /// Maximizing direction, M-normalized. Empty for the zero mode.
  Eigen::VectorXcd eigvec;
  int iterations = 0;
  int factorizations = 0;
};

/// Numerator and denominator of the discriminant quotient.
inline std::pair<BandedHermitian, BandedHermitian> xi_pencil(const ModeMatrices& m, Medium medium)
{
  if (medium == Medium::mhd)
    return {m.gravity, m.compressibility + m.magnetic};
  return {m.gravity - m.compressibility, m.elastic};
}

/// Supremum of v* N v / v* B v. Solved by the Dinkelbach iteration
/// t <- q(v), v the top eigenvector of (N - t B, mass): t increases to the
/// supremum, and a maximizer that falls into the near-null space of B with
/// positive numerator means the supremum is infinite. Near-null means
/// v* B v <= null_tolerance * lambda_max(B, K) * v* K v with K = gradient + mass.
inline XiResult xi_per_mode(const ModeMatrices& m, Medium medium, const XiOptions& opt = {})
{
  XiResult out;
  // The numerator reduces to 2g int rho div_h(w_h) w3, which vanishes at xi = 0.
  if (m.mode.is_zero())
    return out;

  const auto [num, den] = xi_pencil(m, medium);
  const BandedHermitian h1 = m.gradient + m.mass;
  const auto top = largest_eigenpair(den, h1);
  out.factorizations += top.factorizations;
  if (!(top.value > 0.0))
    fail(ErrorKind::IndefiniteDenominatorUnresolved, "denominator form vanishes identically");
  const double null_ratio = opt.null_tolerance * top.value;
  const double num_scale = num.row_sum_norm() / m.mass.min_diagonal();

  Eigen::VectorXcd v = top.vector;
  double t = num.quadratic(v) / den.quadratic(v);
  for (out.iterations = 1; out.iterations <= opt.max_iterations; ++out.iterations)
  {
    const auto ep = largest_eigenpair(num.combine(1.0, den, -t), m.mass, &v);
    out.factorizations += ep.factorizations;
    const double a = num.quadratic(ep.vector), b = den.quadratic(ep.vector);
    if (ep.value <= opt.tolerance * std::max(std::abs(a), std::abs(t) * b))
    {
      out.value = t;
      out.eigvec = v;
      return out;
    }
    if (b <= null_ratio * h1.quadratic(ep.vector))
    {
      if (a > 1e-12 * num_scale)
      {
        out.value = kInfinity;
        out.eigvec = ep.vector;
        return out;
      }
      fail(ErrorKind::IndefiniteDenominatorUnresolved,
           fmt::format("maximizer lies in the denominator null space with numerator {:.3e}", a));
    }
    const double next = a / b;
    v = ep.vector;
    if (next <= t + opt.tolerance * std::abs(t))
    {
      out.value = std::max(t, next);
      out.eigvec = v;
      return out;
    }
    t = next;
  }
  fail(ErrorKind::EigenSolverFailure, "discriminant iteration did not converge");
}

/// alpha(s) = largest eigenvalue of (A - s D, mass), eigvec with v* mass v = 1.
inline EigenPair alpha(double s, const ModeMatrices& m, Medium medium, const Eigen::VectorXcd* guess = nullptr)
{
  if (!(s >= 0.0))
    fail(ErrorKind::Validation, "alpha requires s >= 0");
  return largest_eigenpair(m.energy(medium).combine(1.0, m.dissipation, -s), m.mass, guess);
}

struct GrowthResult
{
  std::optional<double> lambda;
  double alpha0 = 0.0;
  /// |Lambda^2 - alpha(Lambda)|, zero when no rate is returned.
  double residual = 0.0;
  double upper_bound = 0.0;
  Eigen::VectorXcd eigvec;
  int bisection_steps = 0;
};

/// Positive root of alpha(s) = s^2 when alpha(0) > `alpha_floor`. The sign
/// of f(s) = alpha(s) - s^2 is read off the definiteness of s^2 M + s D - A,
/// so each bisection step is one banded Cholesky factorization.
inline GrowthResult growth_rate(const ModeMatrices& m, Medium medium, double tol = 1e-8,
                                double alpha_floor = 1e-12)
{
  if (!(tol > 0.0))
    fail(ErrorKind::Validation, "fixed-point tolerance must be positive");
  GrowthResult out;
  const BandedHermitian a = m.energy(medium);
  const auto a0 = largest_eigenpair(a, m.mass);
  out.alpha0 = a0.value;
  out.eigvec = a0.vector;
  if (m.mode.is_zero() || a0.value <= alpha_floor)
    return out;

  const double dmin = smallest_eigenpair(m.dissipation, m.mass).value;
  if (!(dmin > 0.0))
    fail(ErrorKind::DefinitenessFailure, "dissipation pencil is not positive definite");
  out.upper_bound = a0.value / dmin + 1.0;
  auto negative = [&](double s) { return is_positive_definite(m.mass.combine(s * s, m.dissipation, s) - a); };
  if (!negative(out.upper_bound))
    fail(ErrorKind::BracketFailure, fmt::format("no sign change below s = {:.6g}", out.upper_bound));

  double lo = 0.0, hi = out.upper_bound;
  while (hi - lo > 1e-15 * hi && out.bisection_steps < 200)
  {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi)
      break;
    (negative(mid) ? hi : lo) = mid;
    ++out.bisection_steps;
  }
  const double root = 0.5 * (lo + hi);
  const auto at_root = alpha(root, m, medium, &a0.vector);
  out.lambda = root;
  out.eigvec = at_root.vector;
  out.residual = std::abs(root * root - at_root.value);
  if (out.residual > tol * std::max(1.0, root * root))
    fail(ErrorKind::BracketFailure, fmt::format("fixed-point residual {:.3e} above tolerance", out.residual));
  return out;
}

/// Smallest eigenvalue of (-A, N) with N the discrete form of
/// |w|^2 + |M.grad w|^2 + |div w|^2 (magnetic medium).
inline double coercivity_constant(const ModeMatrices& m)
{
  const auto ep = smallest_eigenpair(m.energy(Medium::mhd).scaled(-1.0), m.coercive_norm);
  if (!(ep.value > 0.0))
    fail(ErrorKind::IndefinitePencil, fmt::format("-A is not positive definite (smallest ratio {:.6e})", ep.value));
  return ep.value;
}

struct ScanOptions
{
  int k_max = 8;
  Medium medium = Medium::mhd;
  AssemblyOptions assembly{};
  double fixed_point_tol = 1e-8;
  XiOptions xi{};
  /// Worker threads; 0 means RT_SPECTRA_THREADS or the hardware count.
  unsigned threads = 0;
  bool coercivity = false;
  bool keep_eigvecs = false;
};

struct ModeVerdict
{
  FourierMode mode;
  double xi_value = std::numeric_limits<double>::quiet_NaN();
  double alpha0 = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> lambda;
  double residual = 0.0;
  std::optional<double> coercivity;
  std::string error;
  Eigen::VectorXcd eigvec;
  int xi_iterations = 0;
  int bisection_steps = 0;

  bool ok() const { return error.empty(); }
};

struct StabilityVerdict
{
  std::vector<ModeVerdict> modes;
  double global_xi = -kInfinity;
  std::optional<double> global_lambda;
  bool truncation_converged = true;
  int k_max = 0;
  std::size_t failed_modes = 0;
};

/// Discriminant, growth rate and (optionally) coercivity of one mode.
inline ModeVerdict analyze_mode(const FormCoefficients& coeffs, const FourierMode& mode,
                                const std::shared_ptr<const Discretization>& disc, const ScanOptions& opt)
{
  ModeVerdict v;
  v.mode = mode;
  try
  {
    const auto mats = assemble(coeffs, mode, disc, opt.assembly.quadrature_order, opt.assembly.check_definiteness);
    const auto xi = xi_per_mode(mats, opt.medium, opt.xi);
    v.xi_value = xi.value;
    v.xi_iterations = xi.iterations;
    const auto gr = growth_rate(mats, opt.medium, opt.fixed_point_tol);
    v.alpha0 = gr.alpha0;
    v.lambda = gr.lambda;
    v.residual = gr.residual;
    v.bisection_steps = gr.bisection_steps;
    if (opt.keep_eigvecs)
      v.eigvec = gr.eigvec;
    if (opt.coercivity && opt.medium == Medium::mhd)
      v.coercivity = coercivity_constant(mats);
  }
  catch (const Error& e)
  {
    v.error = e.what();
  }
  return v;
}

/// Half lattice |k1|, |k2| <= k_max with k2 > 0 or (k2 = 0, k1 >= 0); the
/// other half follows from xi -> -xi. Sorted by (k1, k2).
inline std::vector<std::pair<int, int>> half_lattice(int k_max)
{
  std::vector<std::pair<int, int>> ks;
  for (int k1 = -k_max; k1 <= k_max; ++k1)
    for (int k2 = 0; k2 <= k_max; ++k2)
      if (k2 > 0 || k1 >= 0)
        ks.emplace_back(k1, k2);
  return ks;
}

inline unsigned resolve_threads(unsigned requested)
{
  if (requested > 0)
    return requested;
  if (const char* env = std::getenv("RT_SPECTRA_THREADS"))
  {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0)
      return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

inline StabilityVerdict global_scan(const EquilibriumProfile& profile, const PhysicalParams& params,
                                    const ScanOptions& opt)
{
  if (opt.k_max < 1)
    fail(ErrorKind::Validation, "k_max must be >= 1");
  const FormCoefficients coeffs(profile, params);
  const auto disc = make_discretization(profile.geometry(), opt.assembly);
  const auto ks = half_lattice(opt.k_max);

  StabilityVerdict out;
  out.k_max = opt.k_max;
  out.modes.resize(ks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < ks.size(); i = next++)
      out.modes[i] = analyze_mode(coeffs, FourierMode::from_lattice(ks[i].first, ks[i].second, profile.geometry()),
                                  disc, opt);
  };
  const unsigned n_threads = std::min<unsigned>(resolve_threads(opt.threads), static_cast<unsigned>(ks.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t)
    pool.emplace_back(worker);
  worker();
  for (auto& th : pool)
    th.join();

  for (const auto& v : out.modes)
  {
    if (!v.ok())
    {
      ++out.failed_modes;
      continue;
    }
    out.global_xi = std::max(out.global_xi, v.xi_value);
    if (v.lambda)
      out.global_lambda = std::max(out.global_lambda.value_or(0.0), *v.lambda);
    const bool shell = std::max(std::abs(v.mode.k1), std::abs(v.mode.k2)) == opt.k_max;
    if (shell && (v.xi_value >= 1.0 || (v.lambda && *v.lambda > 0.0)))
      out.truncation_converged = false;
  }
  return out;
}

}  // namespace rtspectra
