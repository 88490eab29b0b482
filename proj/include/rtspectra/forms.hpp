// Copyright the rt-spectra authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "equilibrium.hpp"
#include "error.hpp"
#include "fields.hpp"
#include "quadrature.hpp"
#include "types.hpp"

namespace rtspectra
{

/// Material parameters of the perturbation problem.
struct PhysicalParams
{
  double mu_plus = 0.1;
  double mu_minus = 0.1;
  double varsigma_plus = 0.1;
  double varsigma_minus = 0.1;
  double lambda = 1.0;
  Vec3 M{0.0, 0.0, 0.0};
  double kappa_plus = 0.0;
  double kappa_minus = 0.0;

  double mu(Side s) const { return s == Side::plus ? mu_plus : mu_minus; }
  double varsigma(Side s) const { return s == Side::plus ? varsigma_plus : varsigma_minus; }
  double kappa(Side s) const { return s == Side::plus ? kappa_plus : kappa_minus; }
  double kappa_min() const { return std::min(kappa_plus, kappa_minus); }

  void validate() const
  {
    auto require = [](bool ok, const char* key, const char* rule) {
      if (!ok)
        fail(ErrorKind::Validation, std::string(key) + " " + rule);
    };
    require(mu_plus > 0.0 && std::isfinite(mu_plus), "mu_plus", "must be > 0");
    require(mu_minus > 0.0 && std::isfinite(mu_minus), "mu_minus", "must be > 0");
    require(varsigma_plus >= 0.0 && std::isfinite(varsigma_plus), "varsigma_plus", "must be >= 0");
    require(varsigma_minus >= 0.0 && std::isfinite(varsigma_minus), "varsigma_minus", "must be >= 0");
    require(lambda > 0.0 && std::isfinite(lambda), "lambda", "must be > 0");
    require(kappa_plus >= 0.0 && std::isfinite(kappa_plus), "kappa_plus", "must be >= 0");
    require(kappa_minus >= 0.0 && std::isfinite(kappa_minus), "kappa_minus", "must be >= 0");
    for (double m : M)
      require(std::isfinite(m), "M", "must be finite");
  }
};

/// Coefficient values at one point of one layer.
struct PointCoefficients
{
  double rho;
  double rho_prime;
  double p_prime_rho;
  double mu;
  double varsigma;
  double kappa;
};

/// Profile plus parameters, evaluated on demand. Holds a reference to the
/// profile, which must outlive it.
class FormCoefficients
{
public:
  FormCoefficients(const EquilibriumProfile& profile, const PhysicalParams& params)
      : profile_(&profile), params_(params)
  {
    params_.validate();
  }

  PointCoefficients at(double y3, Side side) const
  {
    const auto p = profile_->evaluate(y3, side);
    return {p.rho, p.rho_prime, p.p_prime_rho, params_.mu(side), params_.varsigma(side), params_.kappa(side)};
  }

  const EquilibriumProfile& profile() const { return *profile_; }
  const PhysicalParams& params() const { return params_; }
  const Geometry& geometry() const { return profile_->geometry(); }
  double gravity() const { return profile_->gravity(); }
  double lambda() const { return params_.lambda; }
  const Vec3& field() const { return params_.M; }
  double density_jump() const { return profile_->density_jump(); }

private:
  const EquilibriumProfile* profile_;
  PhysicalParams params_;
};

/// Plane-wave kinematics of a profile sample at frequency xi: divergence
/// d = i(xi1 phi + xi2 theta) + psi', directional derivative
/// m = i(M1 xi1 + M2 xi2) w + M3 w', and gradient G_ij = d_j w_i with
/// columns i xi1 w, i xi2 w, w'.
struct Kinematics
{
  CVec3 w{};
  cplx div{};
  cplx horizontal_div{};
  CVec3 directional{};
  std::array<CVec3, 3> grad{};
};

inline Kinematics kinematics(const FieldSample& s, const FourierMode& mode, const Vec3& M)
{
  Kinematics k;
  k.w = s.w;
  k.horizontal_div = I * (mode.xi1 * s.w[0] + mode.xi2 * s.w[1]);
  k.div = k.horizontal_div + s.dw[2];
  const cplx along = I * (M[0] * mode.xi1 + M[1] * mode.xi2);
  for (int i = 0; i < 3; ++i)
  {
    k.directional[i] = along * s.w[i] + M[2] * s.dw[i];
    k.grad[i] = {I * mode.xi1 * s.w[i], I * mode.xi2 * s.w[i], s.dw[i]};
  }
  return k;
}

/// |G + G^T|_F^2
inline double symmetric_gradient_norm2(const Kinematics& k)
{
  double sum = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      sum += std::norm(k.grad[i][j] + k.grad[j][i]);
  return sum;
}

inline double gradient_norm2(const Kinematics& k)
{
  double sum = 0.0;
  for (const auto& row : k.grad)
    sum += norm2(row);
  return sum;
}

enum class FormKind
{
  mass,
  gravity,
  theta_numerator,
  compressibility,
  magnetic,
  elastic,
  elastic_sum_of_squares,
  gradient,
  dissipation,
  coercive_norm
};

/// Pointwise integrand of a form. The gravity interface term is not included.
inline double form_density(FormKind kind, const Kinematics& k, const PointCoefficients& c, const FourierMode& mode,
                           double g, double lambda, const Vec3& M)
{
  switch (kind)
  {
  case FormKind::mass:
    return c.rho * norm2(k.w);
  case FormKind::gravity:
    return g * c.rho_prime * std::norm(k.w[2]) + 2.0 * g * c.rho * std::real(k.div * std::conj(k.w[2]));
  case FormKind::theta_numerator:
    return 2.0 * g * c.rho * std::real(k.horizontal_div * std::conj(k.w[2]));
  case FormKind::compressibility:
    return c.p_prime_rho * std::norm(k.div);
  case FormKind::magnetic:
  {
    double sum = 0.0;
    for (int i = 0; i < 3; ++i)
      sum += std::norm(k.div * M[i] - k.directional[i]);
    return lambda * sum;
  }
  case FormKind::elastic:
    return c.kappa * (0.5 * symmetric_gradient_norm2(k) - std::norm(k.div));
  case FormKind::elastic_sum_of_squares:
  {
    const cplx a = I * mode.xi1, b = I * mode.xi2;
    const auto& w = k.w;
    const cplx dw0 = k.grad[0][2], dw1 = k.grad[1][2], dw2 = k.grad[2][2];
    return c.kappa * (std::norm(a * w[1] - b * w[0]) + std::norm(a * w[2] + dw0) + std::norm(b * w[2] + dw1) +
                      std::norm(a * w[0] + b * w[1] - dw2));
  }
  case FormKind::gradient:
    return gradient_norm2(k);
  case FormKind::dissipation:
    return (c.varsigma - 2.0 * c.mu / 3.0) * std::norm(k.div) + 0.5 * c.mu * symmetric_gradient_norm2(k);
  case FormKind::coercive_norm:
    return norm2(k.w) + norm2(k.directional) + std::norm(k.div);
  }
  return 0.0;
}

struct FormOptions
{
  int quadrature_order = 6;
  bool require_dirichlet = true;
};

/// Integrate a form over [h-, h+] with Gauss-Legendre per breakpoint interval.
template <ModeField F>
double integrate_form(FormKind kind, const F& field, const FormCoefficients& c, const FourierMode& mode,
                      const FormOptions& opt = {})
{
  check_field_grid(field, c.geometry(), opt.require_dirichlet);
  const auto& rule = gauss_legendre(opt.quadrature_order);
  const auto b = field.breakpoints();
  const double g = c.gravity(), lambda = c.lambda();
  const Vec3& M = c.field();

  double total = 0.0;
  for (std::size_t e = 0; e + 1 < b.size(); ++e)
  {
    const double lo = b[e], h = b[e + 1] - b[e];
    const Side side = lo >= 0.0 ? Side::plus : Side::minus;
    double part = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
    {
      const double y = lo + h * rule.nodes[q];
      const auto k = kinematics(field.sample(e, y), mode, M);
      part += rule.weights[q] * form_density(kind, k, c.at(y, side), mode, g, lambda, M);
    }
    total += h * part;
  }
  if (kind == FormKind::gravity)
    total += g * c.density_jump() * std::norm(field.interface_value()[2]);
  return total;
}

template <ModeField F>
double mass_form(const F& w, const FormCoefficients& c, const FormOptions& opt = {})
{
  return integrate_form(FormKind::mass, w, c, FourierMode{}, opt);
}

template <ModeField F>
double gravity_form(const F& w, const FormCoefficients& c, const FourierMode& mode, const FormOptions& opt = {})
{
  return integrate_form(FormKind::gravity, w, c, mode, opt);
}

template <ModeField F>
double theta_numerator_form(const F& w, const FormCoefficients& c, const FourierMode& mode,
                            const FormOptions& opt = {})
{
  return integrate_form(FormKind::theta_numerator, w, c, mode, opt);
}

template <ModeField F>
double compressibility_form(const F& w, const FormCoefficients& c, const FourierMode& mode,
                            const FormOptions& opt = {})
{
  return integrate_form(FormKind::compressibility, w, c, mode, opt);
}

template <ModeField F>
double magnetic_form(const F& w, const FormCoefficients& c, const FourierMode& mode, const FormOptions& opt = {})
{
  return integrate_form(FormKind::magnetic, w, c, mode, opt);
}

template <ModeField F>
double elastic_form(const F& w, const FormCoefficients& c, const FourierMode& mode, const FormOptions& opt = {})
{
  return integrate_form(FormKind::elastic, w, c, mode, opt);
}

/// Elastic form through its expansion as a sum of squares.
template <ModeField F>
double elastic_form_sum_of_squares(const F& w, const FormCoefficients& c, const FourierMode& mode,
                                   const FormOptions& opt = {})
{
  return integrate_form(FormKind::elastic_sum_of_squares, w, c, mode, opt);
}

/// Integral of |G|_F^2.
template <ModeField F>
double gradient_form(const F& w, const FormCoefficients& c, const FourierMode& mode, const FormOptions& opt = {})
{
  return integrate_form(FormKind::gradient, w, c, mode, opt);
}

template <ModeField F>
double dissipation_form(const F& w, const FormCoefficients& c, const FourierMode& mode, const FormOptions& opt = {})
{
  return integrate_form(FormKind::dissipation, w, c, mode, opt);
}

/// Integral of |w|^2 + |m|^2 + |d|^2.
template <ModeField F>
double coercive_norm_form(const F& w, const FormCoefficients& c, const FourierMode& mode,
                          const FormOptions& opt = {})
{
  return integrate_form(FormKind::coercive_norm, w, c, mode, opt);
}

template <ModeField F>
double energy_form(const F& w, const FormCoefficients& c, const FourierMode& mode, Medium medium,
                   const FormOptions& opt = {})
{
  const double stabilizing = medium == Medium::mhd ? magnetic_form(w, c, mode, opt) : elastic_form(w, c, mode, opt);
  return gravity_form(w, c, mode, opt) - compressibility_form(w, c, mode, opt) - stabilizing;
}

}  // namespace rtspectra
