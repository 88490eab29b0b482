// Copyright the rt-spectra authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "equilibrium.hpp"
#include "error.hpp"
#include "fields.hpp"
#include "forms.hpp"
#include "quadrature.hpp"
#include "types.hpp"

namespace rtspectra
{

enum class ThresholdKind
{
  vertical_field,
  viscoelastic
};

inline std::string to_string(ThresholdKind k) { return k == ThresholdKind::vertical_field ? "vertical_field" : "viscoelastic"; }

struct ThresholdInputs
{
  double p_inf = 0.0;
  double rho_max = 0.0;
  double g = 0.0;
  double h_minus = 0.0;
  double h_plus = 0.0;
  double lambda = 0.0;
  double kappa_plus = 0.0;
  double kappa_minus = 0.0;
  double density_jump = 0.0;
};

/// A closed-form sufficient stability condition. For the vertical field the
/// values are squared field strengths; for the viscoelastic case elasticities.
struct ThresholdReport
{
  ThresholdKind kind = ThresholdKind::vertical_field;
  double threshold_value = 0.0;
  double actual_value = 0.0;
  bool sufficient_stability = false;
  ThresholdInputs inputs;
};

inline ThresholdInputs threshold_inputs(const EquilibriumProfile& profile)
{
  const auto& geo = profile.geometry();
  ThresholdInputs in;
  in.p_inf = infimum_p_prime_rho(profile);
  in.rho_max = profile.max_density();
  in.g = profile.gravity();
  in.h_minus = geo.h_minus;
  in.h_plus = geo.h_plus;
  in.density_jump = profile.density_jump();
  return in;
}

/// M3^2 > (2 (g (h+ - h-) |rho|_inf)^2 / (P pi^2) + P) / lambda, P = inf P'(rho) rho.
inline ThresholdReport vertical_field_threshold(const EquilibriumProfile& profile, double lambda, double M3 = 0.0)
{
  if (!(lambda > 0.0))
    fail(ErrorKind::Validation, "lambda must be > 0");
  ThresholdReport r;
  r.kind = ThresholdKind::vertical_field;
  r.inputs = threshold_inputs(profile);
  r.inputs.lambda = lambda;
  const auto& in = r.inputs;
  const double grav = in.g * (in.h_plus - in.h_minus) * in.rho_max;
  r.threshold_value = (2.0 * grav * grav / (in.p_inf * kPi * kPi) + in.p_inf) / lambda;
  r.actual_value = M3 * M3;
  r.sufficient_stability = r.actual_value > r.threshold_value;
  return r;
}

/// min(kappa+, kappa-) > g [[rho]] h+ h- / (h- - h+).
inline ThresholdReport viscoelastic_threshold(const EquilibriumProfile& profile, double kappa_plus, double kappa_minus)
{
  ThresholdReport r;
  r.kind = ThresholdKind::viscoelastic;
  r.inputs = threshold_inputs(profile);
  r.inputs.kappa_plus = kappa_plus;
  r.inputs.kappa_minus = kappa_minus;
  const auto& in = r.inputs;
  r.threshold_value = in.g * in.density_jump * in.h_plus * in.h_minus / (in.h_minus - in.h_plus);
  r.actual_value = std::min(kappa_plus, kappa_minus);
  r.sufficient_stability = r.actual_value > r.threshold_value;
  return r;
}

/// Real profile in H1_0(h-, h+) with its derivative.
struct ScalarShape
{
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

/// (h+ - y)(y - h-) / (-h+ h-), equal to 1 at the interface.
inline ScalarShape quadratic_bump(const Geometry& geo)
{
  const double a = geo.h_minus, b = geo.h_plus, s = -a * b;
  return {[=](double y) { return (b - y) * (y - a) / s; }, [=](double y) { return (b + a - 2.0 * y) / s; }};
}

/// max(0, 1 - |y| / eps).
inline ScalarShape tent(double eps)
{
  return {[=](double y) { return std::max(0.0, 1.0 - std::abs(y) / eps); },
          [=](double y) {
            if (std::abs(y) >= eps)
              return 0.0;
            return y < 0.0 ? 1.0 / eps : -1.0 / eps;
          }};
}

/// Explicit test field of one mode. The complex mode field is
/// (-i phi, -i theta, psi), so the real profiles enter the energy as in the
/// plane-wave ansatz (phi sin, theta sin, psi cos).
struct WitnessField
{
  FourierMode mode;
  std::vector<double> y;
  std::vector<double> phi;
  std::vector<double> theta;
  std::vector<double> psi;
  double energy_value = 0.0;
  double closed_form_value = 0.0;
  /// Concentration width (small-field witness only).
  double epsilon = 0.0;
  /// Magnetic form of the small-field witness; +inf when M3 != 0, since the
  /// horizontal component has jumps.
  std::optional<double> magnetic_value;

  bool positive() const { return energy_value > 0.0; }
};

namespace detail
{

/// Gauss-Legendre integral of f over the intervals between breakpoints.
template <class Fn>
double integrate_breaks(const std::vector<double>& b, const Fn& f, int order = 6)
{
  const auto& rule = gauss_legendre(order);
  double total = 0.0;
  for (std::size_t e = 0; e + 1 < b.size(); ++e)
  {
    const double lo = b[e], h = b[e + 1] - b[e];
    const Side side = lo >= 0.0 ? Side::plus : Side::minus;
    double part = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
      part += rule.weights[q] * f(lo + h * rule.nodes[q], side);
    total += h * part;
  }
  return total;
}

inline void check_shape(const ScalarShape& s, const Geometry& geo)
{
  const double scale = std::max(1.0, std::abs(s.value(0.0)));
  if (std::abs(s.value(geo.h_minus)) > 1e-12 * scale || std::abs(s.value(geo.h_plus)) > 1e-12 * scale)
    fail(ErrorKind::Validation, "psi0 shape must vanish at y3 = h- and y3 = h+");
  if (s.value(0.0) == 0.0)
    fail(ErrorKind::Validation, "psi0 shape must be nonzero at the interface");
}

}  // namespace detail

/// g [[rho]] psi0(0)^2 - lambda xi1^2 M1^2 int (psi0^2 + psi0'^2 / |xi|^2).
inline double horizontal_closed_form(const EquilibriumProfile& profile, const PhysicalParams& params,
                                     const FourierMode& mode, const ScalarShape& psi0, std::size_t per_layer = 200)
{
  const auto b = FunctionField::uniform_breakpoints(profile.geometry(), per_layer);
  const double a = detail::integrate_breaks(b, [&](double y, Side) { return psi0.value(y) * psi0.value(y); });
  const double d = detail::integrate_breaks(b, [&](double y, Side) { return psi0.derivative(y) * psi0.derivative(y); });
  const double p0 = psi0.value(0.0);
  const double M1 = params.M[0];
  return profile.gravity() * profile.density_jump() * p0 * p0 -
         params.lambda * mode.xi1 * mode.xi1 * M1 * M1 * (a + d / mode.norm2());
}

/// theta0 = -xi2 psi0' / |xi|^2 and phi0 = (g rho psi0 / (P'(rho) rho) - psi0' - xi2 theta0) / xi1,
/// which zero the completed squares of the energy with a horizontal field.
/// phi0 does not vanish at y3 = h+-; the energy does not involve its
/// derivative, and the derivative slot of the field is left at zero.
inline WitnessField horizontal_field_witness(const EquilibriumProfile& profile, const PhysicalParams& params,
                                             const FourierMode& mode, const std::optional<ScalarShape>& shape = {},
                                             std::size_t per_layer = 200, int quadrature_order = 6)
{
  if (mode.xi1 == 0.0)
    fail(ErrorKind::DegenerateMode, "horizontal field witness needs xi1 != 0");
  if (params.M[1] != 0.0 || params.M[2] != 0.0)
    fail(ErrorKind::WrongFieldOrientation, "horizontal field witness needs M = (M1, 0, 0)");
  const auto& geo = profile.geometry();
  const ScalarShape psi0 = shape ? *shape : quadratic_bump(geo);
  detail::check_shape(psi0, geo);

  const double xi1 = mode.xi1, xi2 = mode.xi2, k2 = mode.norm2(), g = profile.gravity();
  auto theta0 = [=](double y) { return -xi2 * psi0.derivative(y) / k2; };
  auto phi0 = [=, &profile](double y, Side side) {
    const auto p = profile.evaluate(y, side);
    return (g * p.rho * psi0.value(y) / p.p_prime_rho - psi0.derivative(y) - xi2 * theta0(y)) / xi1;
  };

  const auto breaks = FunctionField::uniform_breakpoints(geo, per_layer);
  const FunctionField field(
      breaks,
      [=](double y, Side side) { return CVec3{-I * phi0(y, side), -I * theta0(y), cplx(psi0.value(y))}; },
      [=](double y, Side) {
        // theta0' is not needed either: with M = (M1, 0, 0) the energy sees only w and psi'.
        return CVec3{0.0, 0.0, cplx(psi0.derivative(y))};
      });

  WitnessField out;
  out.mode = mode;
  FormOptions fo;
  fo.quadrature_order = quadrature_order;
  fo.require_dirichlet = false;
  const FormCoefficients coeffs(profile, params);
  out.energy_value = energy_form(field, coeffs, mode, Medium::mhd, fo);
  out.closed_form_value = horizontal_closed_form(profile, params, mode, psi0, per_layer);
  for (std::size_t j = 0; j < breaks.size(); ++j)
  {
    const double y = breaks[j];
    const Side side = y > 0.0 || (y == 0.0 && j > per_layer) ? Side::plus : Side::minus;
    out.y.push_back(y);
    out.phi.push_back(phi0(y, side));
    out.theta.push_back(theta0(y));
    out.psi.push_back(psi0.value(y));
  }
  return out;
}

/// Period L1* above which the closed form at xi = (1/L1, 1/L2) is positive.
/// Empty when it is never positive (xi2 = 0 with a strong field); 0 when it
/// is positive for every L1.
inline std::optional<double> critical_period(const EquilibriumProfile& profile, const PhysicalParams& params,
                                             const std::optional<ScalarShape>& shape = {}, std::size_t per_layer = 200)
{
  const auto& geo = profile.geometry();
  const ScalarShape psi0 = shape ? *shape : quadratic_bump(geo);
  auto value = [&](double L1) {
    return horizontal_closed_form(profile, params, FourierMode::from_frequency(1.0 / L1, 1.0 / geo.L2), psi0,
                                  per_layer);
  };
  // The closed form increases with L1.
  double hi = geo.L1;
  for (int k = 0; value(hi) <= 0.0; ++k, hi *= 2.0)
    if (k > 200)
      return std::nullopt;
  double lo = hi;
  for (int k = 0; value(lo) > 0.0; ++k, lo *= 0.5)
    if (k > 200)
      return 0.0;
  while (hi - lo > 1e-13 * hi)
  {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi)
      break;
    (value(mid) > 0.0 ? hi : lo) = mid;
  }
  return hi;
}

/// Field w = (-L1 psi' sin(y1/L1), 0, psi cos(y1/L1)) with an interface tent
/// psi of width eps. It is divergence free, so E1 + E2 reduces to the gravity
/// part, g(int rho' psi^2 + [[rho]] psi(0)^2) = -2g int rho psi psi'.
/// Widths eps, eps/2, eps/4, ... are tried in turn; the first one with
/// g int rho psi psi' < 0 is returned.
inline WitnessField small_field_witness(const EquilibriumProfile& profile, const PhysicalParams& params,
                                        double epsilon, int max_halvings = 20, int quadrature_order = 6)
{
  const auto& geo = profile.geometry();
  if (!(epsilon > 0.0) || !(epsilon < std::min(geo.h_plus, -geo.h_minus)))
    fail(ErrorKind::Validation, "epsilon must lie in (0, min(h+, -h-))");
  const FourierMode mode = FourierMode::from_lattice(1, 0, geo);
  const double L1 = geo.L1, g = profile.gravity();
  const FormCoefficients coeffs(profile, params);
  FormOptions fo;
  fo.quadrature_order = quadrature_order;

  for (int k = 0; k <= max_halvings; ++k)
  {
    const double eps = std::ldexp(epsilon, -k);
    const ScalarShape psi = tent(eps);
    std::vector<double> b;
    auto span = [&](double a, double c, int n) {
      for (int j = 0; j < n; ++j)
        b.push_back(a + (c - a) * j / n);
    };
    span(geo.h_minus, -eps, 8);
    span(-eps, 0.0, 16);
    span(0.0, eps, 16);
    span(eps, geo.h_plus, 8);
    b.push_back(geo.h_plus);

    const double direct = g * detail::integrate_breaks(b, [&](double y, Side side) {
      return profile.evaluate(y, side).rho * psi.value(y) * psi.derivative(y);
    }, quadrature_order);
    if (!(direct < 0.0))
      continue;

    const FunctionField field(
        b, [=](double y, Side) { return CVec3{I * L1 * psi.derivative(y), 0.0, cplx(psi.value(y))}; },
        [=](double y, Side) { return CVec3{0.0, 0.0, cplx(psi.derivative(y))}; });

    WitnessField out;
    out.mode = mode;
    out.epsilon = eps;
    out.energy_value = gravity_form(field, coeffs, mode, fo) - compressibility_form(field, coeffs, mode, fo);
    const double interior = detail::integrate_breaks(b, [&](double y, Side side) {
      return profile.evaluate(y, side).rho_prime * psi.value(y) * psi.value(y);
    }, quadrature_order);
    out.closed_form_value = g * (interior + profile.density_jump() * psi.value(0.0) * psi.value(0.0));
    out.magnetic_value = params.M[2] == 0.0 ? magnetic_form(field, coeffs, mode, fo)
                                            : std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j)
    {
      out.y.push_back(b[j]);
      out.phi.push_back(-L1 * psi.derivative(b[j]));
      out.theta.push_back(0.0);
      out.psi.push_back(psi.value(b[j]));
    }
    return out;
  }
  fail(ErrorKind::NoConcentrationWorks,
       fmt::format("g int rho psi psi' >= 0 for every width down to {:.3e}", std::ldexp(epsilon, -max_halvings)));
}

struct InequalityCheck
{
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;

  double ratio() const { return rhs > 0.0 ? lhs / rhs : 0.0; }
};

namespace detail
{

inline void check_direction(const Vec3& nu)
{
  if (nu[2] != 1.0)
    fail(ErrorKind::BadDirection, fmt::format("direction needs third component 1, got {}", nu[2]));
}

/// || nu . grad w ||_0 with nu . grad -> i(nu1 xi1 + nu2 xi2) + d/dy3.
template <ModeField F>
double directional_norm(const F& field, const FourierMode& mode, const Vec3& nu, int order)
{
  const auto b = field.breakpoints();
  const auto& rule = gauss_legendre(order);
  const cplx a = I * (nu[0] * mode.xi1 + nu[1] * mode.xi2);
  double total = 0.0;
  for (std::size_t e = 0; e + 1 < b.size(); ++e)
  {
    const double h = b[e + 1] - b[e];
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
    {
      const auto s = field.sample(e, b[e] + h * rule.nodes[q]);
      double v = 0.0;
      for (int c = 0; c < 3; ++c)
        v += std::norm(a * s.w[c] + s.dw[c]);
      total += h * rule.weights[q] * v;
    }
  }
  return std::sqrt(total);
}

template <ModeField F>
double l2_norm(const F& field, int order)
{
  const auto b = field.breakpoints();
  const auto& rule = gauss_legendre(order);
  double total = 0.0;
  for (std::size_t e = 0; e + 1 < b.size(); ++e)
  {
    const double h = b[e + 1] - b[e];
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
      total += h * rule.weights[q] * norm2(field.sample(e, b[e] + h * rule.nodes[q]).w);
  }
  return std::sqrt(total);
}

}  // namespace detail

/// ||w||_0 <= (h+ - h-) ||nu . grad w||_0 / pi for w vanishing at h+-.
template <ModeField F>
InequalityCheck poincare_check(const F& field, const FourierMode& mode, const Vec3& nu, const Geometry& geo,
                               int quadrature_order = 6)
{
  detail::check_direction(nu);
  check_field_grid(field, geo);
  InequalityCheck r;
  r.lhs = detail::l2_norm(field, quadrature_order);
  r.rhs = geo.height() / kPi * detail::directional_norm(field, mode, nu, quadrature_order);
  r.holds = r.lhs <= r.rhs * (1.0 + 1e-10);
  return r;
}

/// |w3(0)| <= sqrt(h- h+ / (h- - h+)) ||nu . grad w||_0.
template <ModeField F>
InequalityCheck trace_check(const F& field, const FourierMode& mode, const Vec3& nu, const Geometry& geo,
                            int quadrature_order = 6)
{
  detail::check_direction(nu);
  check_field_grid(field, geo);
  InequalityCheck r;
  r.lhs = std::abs(field.interface_value()[2]);
  r.rhs = std::sqrt(geo.h_minus * geo.h_plus / (geo.h_minus - geo.h_plus)) *
          detail::directional_norm(field, mode, nu, quadrature_order);
  r.holds = r.lhs <= r.rhs * (1.0 + 1e-10);
  return r;
}

}  // namespace rtspectra
