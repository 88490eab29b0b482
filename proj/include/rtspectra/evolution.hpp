// Copyright the rt-spectra authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "assembly.hpp"
#include "banded.hpp"
#include "error.hpp"

namespace rtspectra
{

struct EvolutionResult
{
  std::vector<double> times;
  /// Mass norms sqrt(v* M v) of displacement and velocity at every step.
  std::vector<double> eta_norm;
  std::vector<double> u_norm;
  double fitted_rate = 0.0;
  std::pair<double, double> fit_window{0.0, 0.0};
  double energy_balance_residual = 0.0;
  Eigen::VectorXcd eta_final;
  Eigen::VectorXcd u_final;
};

/// Least-squares slope of log(norm) against time over samples with
/// window.first <= t <= window.second.
inline double fit_rate(const std::vector<double>& times, const std::vector<double>& norms,
                       std::pair<double, double> window)
{
  if (times.size() != norms.size())
    fail(ErrorKind::DegenerateFit, "times and norms differ in length");
  double st = 0.0, sl = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < times.size(); ++i)
    if (times[i] >= window.first && times[i] <= window.second)
    {
      if (!(norms[i] > 0.0) || !std::isfinite(norms[i]))
        fail(ErrorKind::DegenerateFit, fmt::format("nonpositive norm at t = {}", times[i]));
      st += times[i];
      sl += std::log(norms[i]);
      ++n;
    }
  if (n < 10)
    fail(ErrorKind::DegenerateFit, fmt::format("{} samples in the fit window, need at least 10", n));
  const double tm = st / static_cast<double>(n), lm = sl / static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i)
    if (times[i] >= window.first && times[i] <= window.second)
    {
      const double dt = times[i] - tm;
      num += dt * (std::log(norms[i]) - lm);
      den += dt * dt;
    }
  if (!(den > 0.0))
    fail(ErrorKind::DegenerateFit, "fit window has no time spread");
  return num / den;
}

struct EvolutionOptions
{
  /// Backward Euler half steps before the midpoint steps. The midpoint rule
  /// maps stiff viscous modes to amplification near -1, so rough initial data
  /// would otherwise keep an undamped high-frequency part.
  int smoothing_half_steps = 4;
};

/// Implicit midpoint rule for eta' = u, M u' = A eta - D u. Eliminating the
/// midpoint displacement gives one Hermitian system per step,
///   (M - dt^2/4 A + dt/2 D) u1 = (M + dt^2/4 A - dt/2 D) u0 + dt A eta0,
///   eta1 = eta0 + dt/2 (u0 + u1),
/// factorized once. The energy balance is measured on midpoint steps only.
/// The rate is fitted on log(u_norm) over [T/2, T].
inline EvolutionResult integrate_linearized(const ModeMatrices& m, Medium medium, const Eigen::VectorXcd& eta0,
                                            const Eigen::VectorXcd& u0, double dt, double T,
                                            const EvolutionOptions& opt = {})
{
  if (!(dt > 0.0) || !std::isfinite(dt))
    fail(ErrorKind::Validation, "dt must be > 0");
  if (!(T >= 10.0 * dt))
    fail(ErrorKind::Validation, "T must be at least 10 dt");
  const auto n = static_cast<Eigen::Index>(m.size());
  if (eta0.size() != n || u0.size() != n)
    fail(ErrorKind::Validation, "initial data does not match the discretization");

  const BandedHermitian a = m.energy(medium);
  const double q = 0.25 * dt * dt;
  const BandedCholesky lhs(m.mass - a.scaled(q) + m.dissipation.scaled(0.5 * dt));
  if (!lhs.ok())
    fail(ErrorKind::StepFailure, "implicit step matrix is not positive definite; reduce dt");
  const BandedHermitian rhs = m.mass + a.scaled(q) - m.dissipation.scaled(0.5 * dt);

  if (opt.smoothing_half_steps < 0 || opt.smoothing_half_steps % 2 != 0)
    fail(ErrorKind::Validation, "smoothing_half_steps must be even and >= 0");
  const auto steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
  const auto smoothing = static_cast<std::size_t>(opt.smoothing_half_steps / 2);
  if (smoothing >= steps)
    fail(ErrorKind::Validation, "smoothing covers the whole time interval");
  EvolutionResult out;
  out.times.reserve(steps + 1);
  out.eta_norm.reserve(steps + 1);
  out.u_norm.reserve(steps + 1);

  Eigen::VectorXcd eta = eta0, u = u0;
  auto record = [&](double t) {
    const double en = std::sqrt(std::max(0.0, m.mass.quadratic(eta)));
    const double un = std::sqrt(std::max(0.0, m.mass.quadratic(u)));
    if (!std::isfinite(en) || !std::isfinite(un) || en > 1e150 || un > 1e150)
      fail(ErrorKind::BlowupOverflow, fmt::format("norms exceed the representable range at t = {:.6g}", t));
    out.times.push_back(t);
    out.eta_norm.push_back(en);
    out.u_norm.push_back(un);
  };
  auto energy = [&](const Eigen::VectorXcd& e, const Eigen::VectorXcd& v, double& scale) {
    const double kinetic = 0.5 * m.mass.quadratic(v), potential = 0.5 * a.quadratic(e);
    scale = kinetic + std::abs(potential);
    return kinetic - potential;
  };

  record(0.0);
  if (smoothing > 0)
  {
    // Backward Euler with step h: (M - h^2 A + h D) u1 = M u0 + h A eta0, eta1 = eta0 + h u1.
    const double h = 0.5 * dt;
    const BandedCholesky euler(m.mass - a.scaled(h * h) + m.dissipation.scaled(h));
    if (!euler.ok())
      fail(ErrorKind::StepFailure, "smoothing step matrix is not positive definite; reduce dt");
    for (std::size_t k = 1; k <= smoothing; ++k)
    {
      for (int half = 0; half < 2; ++half)
      {
        u = euler.solve(m.mass.multiply(u) + h * a.multiply(eta));
        eta += h * u;
      }
      if (!u.allFinite())
        fail(ErrorKind::StepFailure, fmt::format("non-finite state at step {}", k));
      record(static_cast<double>(k) * dt);
    }
  }
  double s0 = 0.0;
  double e0 = energy(eta, u, s0);
  for (std::size_t k = smoothing + 1; k <= steps; ++k)
  {
    const Eigen::VectorXcd u1 = lhs.solve(rhs.multiply(u) + dt * a.multiply(eta));
    if (!u1.allFinite())
      fail(ErrorKind::StepFailure, fmt::format("non-finite state at step {}", k));
    const Eigen::VectorXcd mid = 0.5 * (u + u1);
    eta += dt * mid;
    u = u1;
    double s1 = 0.0;
    const double e1 = energy(eta, u, s1);
    const double dissipated = dt * m.dissipation.quadratic(mid);
    const double scale = std::max({s0, s1, dissipated, std::numeric_limits<double>::min()});
    out.energy_balance_residual = std::max(out.energy_balance_residual, std::abs(e1 - e0 + dissipated) / scale);
    e0 = e1;
    s0 = s1;
    record(static_cast<double>(k) * dt);
  }
  out.eta_final = std::move(eta);
  out.u_final = std::move(u);
  out.fit_window = {0.5 * out.times.back(), out.times.back()};
  out.fitted_rate = fit_rate(out.times, out.u_norm, out.fit_window);
  return out;
}

/// Random nodal vector with unit mass norm; complex normal entries from a
/// seeded generator.
inline Eigen::VectorXcd random_initial_state(const BandedHermitian& mass, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::VectorXcd v(static_cast<Eigen::Index>(mass.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v[i] = {nd(rng), nd(rng)};
  return v / std::sqrt(mass.quadratic(v));
}

/// Random (eta0, u0), both with unit mass norm.
inline EvolutionResult integrate_linearized(const ModeMatrices& m, Medium medium, double dt, double T,
                                            std::uint64_t seed, const EvolutionOptions& opt = {})
{
  const Eigen::VectorXcd eta0 = random_initial_state(m.mass, seed);
  const Eigen::VectorXcd u0 = random_initial_state(m.mass, seed + 1);
  return integrate_linearized(m, medium, eta0, u0, dt, T, opt);
}

/// CSV with header t,eta_norm,u_norm.
inline void write_trajectory_csv(std::ostream& os, const EvolutionResult& r)
{
  os << "t,eta_norm,u_norm\n";
  for (std::size_t i = 0; i < r.times.size(); ++i)
    os << fmt::format("{:.17g},{:.17g},{:.17g}\n", r.times[i], r.eta_norm[i], r.u_norm[i]);
}

}  // namespace rtspectra
