// Copyright the rt-spectra authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "error.hpp"
#include "grid.hpp"
#include "types.hpp"

namespace rtspectra
{

/// Barotropic pressure law P(tau), either c^2 tau or K tau^gamma.
struct PressureLaw
{
  enum class Kind
  {
    linear,
    polytropic
  };

  Kind kind = Kind::linear;
  double c2 = 1.0;
  double K = 1.0;
  double gamma = 2.0;

  static PressureLaw linear(double c2) { return {Kind::linear, c2, 1.0, 2.0}; }
  static PressureLaw polytropic(double K, double gamma) { return {Kind::polytropic, 1.0, K, gamma}; }

  void validate() const
  {
    if (kind == Kind::linear && !(c2 > 0.0 && std::isfinite(c2)))
      fail(ErrorKind::InvalidLaw, "linear law needs c2 > 0");
    if (kind == Kind::polytropic && !(K > 0.0 && std::isfinite(K) && gamma > 1.0 && std::isfinite(gamma)))
      fail(ErrorKind::InvalidLaw, "polytropic law needs K > 0 and gamma > 1");
  }

  double pressure(double tau) const
  {
    return kind == Kind::linear ? c2 * tau : K * std::pow(tau, gamma);
  }

  /// P'(tau)
  double derivative(double tau) const
  {
    return kind == Kind::linear ? c2 : K * gamma * std::pow(tau, gamma - 1.0);
  }

  /// Positive root of P(tau) = p, polished by Newton.
  double inverse(double p) const
  {
    if (!(p > 0.0) || !std::isfinite(p))
      fail(ErrorKind::NoRoot, "pressure matching needs a positive finite interface pressure");
    double tau = kind == Kind::linear ? p / c2 : std::pow(p / K, 1.0 / gamma);
    for (int i = 0; i < 3; ++i)
      tau -= (pressure(tau) - p) / derivative(tau);
    if (!(tau > 0.0) || std::abs(pressure(tau) - p) > 1e-12 * p)
      fail(ErrorKind::NoRoot, "no positive density reproduces the interface pressure");
    return tau;
  }

  std::string describe() const
  {
    std::ostringstream os;
    os.precision(17);
    if (kind == Kind::linear)
      os << "law=linear c2=" << c2;
    else
      os << "law=polytropic K=" << K << " gamma=" << gamma;
    return os.str();
  }
};

/// Equilibrium quantities at a point.
struct ProfilePoint
{
  double rho = 0.0;
  double rho_prime = 0.0;
  double p_prime_rho = 0.0;
};

/// Samples of one layer, ordered by increasing y3.
struct LayerTable
{
  std::vector<double> y;
  std::vector<double> rho;
};

/// Two-layer hydrostatic density profile. Immutable once built.
class EquilibriumProfile
{
public:
  static constexpr std::size_t kDefaultSamples = 1024;
  static constexpr double kDefaultClustering = 1.05;
  static constexpr double kVacuumFloor = 1e-8;

  const Geometry& geometry() const { return geometry_; }
  double gravity() const { return g_; }
  const PressureLaw& law(Side side) const { return side == Side::plus ? law_plus_ : law_minus_; }
  const LayerTable& table(Side side) const { return side == Side::plus ? plus_ : minus_; }

  /// rho(0+) or rho(0-).
  double interface_density(Side side) const
  {
    return side == Side::plus ? plus_.rho.front() : minus_.rho.back();
  }

  double density_jump() const { return interface_density(Side::plus) - interface_density(Side::minus); }

  /// Equilibrium state at y3 in the layer on `side`. rho comes from monotone
  /// cubic Hermite interpolation; rho' and P'(rho) rho follow from rho.
  ProfilePoint evaluate(double y3, Side side) const
  {
    const double lo = side == Side::plus ? 0.0 : geometry_.h_minus;
    const double hi = side == Side::plus ? geometry_.h_plus : 0.0;
    if (!(y3 >= lo && y3 <= hi))
    {
      std::ostringstream os;
      os << "y3=" << y3 << " is outside the " << (side == Side::plus ? "upper" : "lower") << " layer";
      fail(ErrorKind::OutOfDomain, os.str());
    }
    const double rho = interpolate(table(side), law(side), y3);
    return point_from_density(rho, side);
  }

  /// Same as above for y3 != 0, where the side is implied.
  ProfilePoint evaluate(double y3) const
  {
    if (y3 == 0.0)
      fail(ErrorKind::OutOfDomain, "y3 = 0 needs an explicit side");
    return evaluate(y3, y3 > 0.0 ? Side::plus : Side::minus);
  }

  ProfilePoint point_from_density(double rho, Side side) const
  {
    const double dp = law(side).derivative(rho);
    return {rho, -rho * g_ / dp, dp * rho};
  }

  /// sup of rho over both layers (attained at a sample by monotonicity).
  double max_density() const
  {
    double m = 0.0;
    for (const auto* t : {&minus_, &plus_})
      m = std::max(m, *std::max_element(t->rho.begin(), t->rho.end()));
    return m;
  }

private:
  friend EquilibriumProfile build_profile(const Geometry&, const PressureLaw&, const PressureLaw&, double, double,
                                          std::size_t, double);

  double slope(const PressureLaw& law, double rho) const { return -rho * g_ / law.derivative(rho); }

  double interpolate(const LayerTable& t, const PressureLaw& law, double y) const
  {
    const auto it = std::upper_bound(t.y.begin(), t.y.end(), y);
    std::size_t i = it == t.y.begin() ? 0 : static_cast<std::size_t>(it - t.y.begin()) - 1;
    i = std::min(i, t.y.size() - 2);
    const double y0 = t.y[i], y1 = t.y[i + 1];
    const double r0 = t.rho[i], r1 = t.rho[i + 1];
    const double h = y1 - y0;
    const double secant = (r1 - r0) / h;
    double m0 = slope(law, r0), m1 = slope(law, r1);
    if (secant == 0.0)
    {
      m0 = m1 = 0.0;
    }
    else
    {
      // Fritsch-Carlson limiter keeps each cubic monotone.
      double a = m0 / secant, b = m1 / secant;
      if (a < 0.0)
        a = 0.0;
      if (b < 0.0)
        b = 0.0;
      const double r2 = a * a + b * b;
      if (r2 > 9.0)
      {
        const double tau = 3.0 / std::sqrt(r2);
        a *= tau;
        b *= tau;
      }
      m0 = a * secant;
      m1 = b * secant;
    }
    const double t1 = (y - y0) / h;
    const double t2 = t1 * t1, t3 = t2 * t1;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t1;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * r0 + h10 * h * m0 + h01 * r1 + h11 * h * m1;
  }

  Geometry geometry_;
  PressureLaw law_plus_;
  PressureLaw law_minus_;
  double g_ = 0.0;
  LayerTable plus_;
  LayerTable minus_;
};

namespace detail
{

/// Integrates P'(rho) rho' = -rho g away from the interface over the given
/// distances (increasing, starting at 0). `direction` is +1 upward, -1 downward.
inline std::vector<double> integrate_layer(const PressureLaw& law, double g, double rho0,
                                           const std::vector<double>& distance, double direction)
{
  namespace odeint = boost::numeric::odeint;
  const double floor = EquilibriumProfile::kVacuumFloor * rho0;
  auto rhs = [&](const double& rho, double& drho, double) {
    if (!(rho > floor))
      fail(ErrorKind::VacuumReached, "density fell below the non-vacuum floor inside the layer");
    drho = -direction * rho * g / law.derivative(rho);
  };

  std::vector<double> out;
  out.reserve(distance.size());
  double state = rho0;
  auto stepper = odeint::make_dense_output(1e-14 * rho0, 1e-12, odeint::runge_kutta_dopri5<double>());
  const double dt0 = std::max(distance[1] * 0.5, 1e-12);
  odeint::integrate_times(stepper, rhs, state, distance.begin(), distance.end(), dt0,
                          [&](const double& rho, double) {
                            if (!(rho > floor))
                              fail(ErrorKind::VacuumReached,
                                   "density fell below the non-vacuum floor inside the layer");
                            out.push_back(rho);
                          });
  return out;
}

}  // namespace detail

/// Builds the two-layer profile. The lower-layer anchor rho(0-) solves
/// P_-(rho(0-)) = P_+(rho(0+)), so the pressure jump vanishes by construction.
inline EquilibriumProfile build_profile(const Geometry& geometry, const PressureLaw& law_plus,
                                        const PressureLaw& law_minus, double g, double rho_plus_at_interface,
                                        std::size_t samples_per_layer = EquilibriumProfile::kDefaultSamples,
                                        double clustering = EquilibriumProfile::kDefaultClustering)
{
  geometry.validate();
  law_plus.validate();
  law_minus.validate();
  if (!(g >= 0.0) || !std::isfinite(g))
    fail(ErrorKind::Validation, "gravity must be finite and >= 0");
  if (!(rho_plus_at_interface > 0.0) || !std::isfinite(rho_plus_at_interface))
    fail(ErrorKind::Validation, "interface density must be positive");
  if (samples_per_layer < 4)
    fail(ErrorKind::Validation, "at least 4 samples per layer are required");

  EquilibriumProfile p;
  p.geometry_ = geometry;
  p.law_plus_ = law_plus;
  p.law_minus_ = law_minus;
  p.g_ = g;

  const double rho_minus_at_interface = law_minus.inverse(law_plus.pressure(rho_plus_at_interface));

  const auto up = graded_points(geometry.h_plus, samples_per_layer - 1, clustering);
  const auto down = graded_points(geometry.h_minus, samples_per_layer - 1, clustering);

  std::vector<double> dist_up(up.size()), dist_down(down.size());
  std::transform(up.begin(), up.end(), dist_up.begin(), [](double y) { return std::abs(y); });
  std::transform(down.begin(), down.end(), dist_down.begin(), [](double y) { return std::abs(y); });

  p.plus_.y = up;
  p.plus_.rho = detail::integrate_layer(law_plus, g, rho_plus_at_interface, dist_up, +1.0);

  auto rho_down = detail::integrate_layer(law_minus, g, rho_minus_at_interface, dist_down, -1.0);
  p.minus_.y.assign(down.rbegin(), down.rend());
  p.minus_.rho.assign(rho_down.rbegin(), rho_down.rend());
  return p;
}

struct RtCondition
{
  bool holds = false;
  double jump = 0.0;
};

/// [[rho]] = rho(0+) - rho(0-) and whether it is strictly positive.
inline RtCondition check_rt_condition(const EquilibriumProfile& profile)
{
  const double jump = profile.density_jump();
  return {jump > 0.0, jump};
}

/// inf of P'(rho) rho over both layers, taken over the sample tables.
inline double infimum_p_prime_rho(const EquilibriumProfile& profile)
{
  double m = std::numeric_limits<double>::infinity();
  for (Side side : {Side::minus, Side::plus})
    for (double rho : profile.table(side).rho)
      m = std::min(m, profile.law(side).derivative(rho) * rho);
  return m;
}

/// CSV export: comment lines with the layer parameters, one header row, then
/// the lower layer bottom-up followed by the upper layer (y3 = 0 appears once
/// per side).
inline void write_profile_csv(std::ostream& os, const EquilibriumProfile& profile)
{
  const auto& geo = profile.geometry();
  os.precision(17);
  os << "# lower layer: y3 in [" << geo.h_minus << ", 0] " << profile.law(Side::minus).describe() << "\n";
  os << "# upper layer: y3 in [0, " << geo.h_plus << "] " << profile.law(Side::plus).describe() << "\n";
  os << "# g=" << profile.gravity() << " rho_interface_minus=" << profile.interface_density(Side::minus)
     << " rho_interface_plus=" << profile.interface_density(Side::plus) << "\n";
  os << "y3,rho,rho_prime,p_prime_rho\n";
  for (Side side : {Side::minus, Side::plus})
  {
    const auto& t = profile.table(side);
    for (std::size_t i = 0; i < t.y.size(); ++i)
    {
      const auto pt = profile.point_from_density(t.rho[i], side);
      os << t.y[i] << "," << pt.rho << "," << pt.rho_prime << "," << pt.p_prime_rho << "\n";
    }
  }
}

}  // namespace rtspectra
