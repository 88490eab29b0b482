// Copyright the rt-spectra authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <ostream>

#include <fmt/format.h>

#include "banded.hpp"
#include "error.hpp"
#include "fields.hpp"
#include "forms.hpp"
#include "mesh.hpp"
#include "quadrature.hpp"

namespace rtspectra
{

struct AssemblyOptions
{
  std::size_t n_per_layer = 200;
  double grading = 1.05;
  int quadrature_order = 6;
  ElementFamily family = ElementFamily::p1_bubble;
  bool check_definiteness = true;
};

inline std::shared_ptr<const Discretization> make_discretization(const Geometry& geometry,
                                                                 const AssemblyOptions& opt = {})
{
  return std::make_shared<const Discretization>(build_mesh(geometry, opt.n_per_layer, opt.grading), opt.family);
}

/// Discrete forms of one Fourier mode. `gradient` and `coercive_norm` are the
/// reference norms used by the elastic bound and the coercivity constant.
struct ModeMatrices
{
  FourierMode mode;
  std::shared_ptr<const Discretization> discretization;
  BandedHermitian mass;
  BandedHermitian gravity;
  BandedHermitian compressibility;
  BandedHermitian magnetic;
  BandedHermitian elastic;
  BandedHermitian dissipation;
  BandedHermitian gradient;
  BandedHermitian coercive_norm;

  std::size_t size() const { return mass.size(); }

  /// Energy matrix A: gravity - compressibility - (magnetic or elastic).
  BandedHermitian energy(Medium medium) const
  {
    return gravity - compressibility - (medium == Medium::mhd ? magnetic : elastic);
  }

  /// Same positive multiple of every matrix; used by scale-invariance checks.
  ModeMatrices scaled(double a) const
  {
    ModeMatrices out = *this;
    for (auto* m : {&out.mass, &out.gravity, &out.compressibility, &out.magnetic, &out.elastic, &out.dissipation,
                    &out.gradient, &out.coercive_norm})
      *m = m->scaled(a);
    return out;
  }
};

namespace detail
{

using PointMatrix = std::array<std::array<cplx, 6>, 6>;

/// Hermitian 6x6 matrix Q of a pointwise density on z = (w, w') recovered
/// by polarization: density(z) = z* Q z.
template <class Density>
PointMatrix polarize(const Density& density)
{
  auto eval = [&](int a, cplx ca, int b, cplx cb) {
    FieldSample s;
    auto put = [&](int k, cplx v) { (k < 3 ? s.w[k] : s.dw[k - 3]) += v; };
    put(a, ca);
    if (b >= 0)
      put(b, cb);
    return density(s);
  };
  PointMatrix q{};
  std::array<double, 6> diag{};
  for (int a = 0; a < 6; ++a)
  {
    diag[a] = eval(a, 1.0, -1, 0.0);
    q[a][a] = diag[a];
  }
  for (int a = 0; a < 6; ++a)
    for (int b = a + 1; b < 6; ++b)
    {
      const double re = 0.5 * (eval(a, 1.0, b, 1.0) - diag[a] - diag[b]);
      const double im = 0.5 * (diag[a] + diag[b] - eval(a, 1.0, b, I));
      q[a][b] = {re, im};
      q[b][a] = {re, -im};
    }
  return q;
}

}  // namespace detail

/// Assemble all forms of `mode` on the finite element space. Quadrature of
/// order q per element; the interface term of the gravity form is added at
/// the interface psi unknown.
inline ModeMatrices assemble(const FormCoefficients& coeffs, const FourierMode& mode,
                             std::shared_ptr<const Discretization> disc, int quadrature_order = 6,
                             bool check_definiteness = true)
{
  const auto& mesh = disc->mesh();
  if (mesh.nodes.front() != coeffs.geometry().h_minus || mesh.nodes.back() != coeffs.geometry().h_plus)
    fail(ErrorKind::AssemblyError, "mesh does not span the profile geometry");

  constexpr std::array kinds{FormKind::mass,    FormKind::gravity,     FormKind::compressibility,
                             FormKind::magnetic, FormKind::elastic,    FormKind::dissipation,
                             FormKind::gradient, FormKind::coercive_norm};
  const std::size_t n = disc->size(), kd = disc->bandwidth();
  std::array<BandedHermitian, kinds.size()> mats;
  mats.fill(BandedHermitian(n, kd));

  const auto& rule = gauss_legendre(quadrature_order);
  const double g = coeffs.gravity(), lambda = coeffs.lambda();
  const Vec3& M = coeffs.field();

  for (std::size_t e = 0; e < mesh.n_elements(); ++e)
  {
    const double h = mesh.element_length(e);
    const Side side = mesh.element_side(e);
    for (std::size_t qp = 0; qp < rule.nodes.size(); ++qp)
    {
      const double t = rule.nodes[qp];
      const double weight = h * rule.weights[qp];
      const auto pc = coeffs.at(mesh.nodes[e] + h * t, side);
      const auto basis = disc->local_basis(e, t);
      for (std::size_t f = 0; f < kinds.size(); ++f)
      {
        const auto Q = detail::polarize(
            [&](const FieldSample& s) { return form_density(kinds[f], kinematics(s, mode, M), pc, mode, g, lambda, M); });
        for (const auto& bp : basis)
          for (const auto& bq : basis)
          {
            if (bp.dof < bq.dof)
              continue;
            const int cp = bp.component, cq = bq.component;
            const cplx v = bp.value * bq.value * Q[cp][cq] + bp.value * bq.derivative * Q[cp][3 + cq] +
                           bp.derivative * bq.value * Q[3 + cp][cq] +
                           bp.derivative * bq.derivative * Q[3 + cp][3 + cq];
            mats[f].add_lower(bp.dof, bq.dof, weight * v);
          }
      }
    }
  }

  const std::size_t psi0 = disc->node_dof(mesh.interface_node(), 2);
  mats[1].add_lower(psi0, psi0, g * coeffs.density_jump());
  for (auto& m : mats)
    m.symmetrize_diagonal();

  ModeMatrices out{mode,          disc,   std::move(mats[0]), std::move(mats[1]), std::move(mats[2]),
                   std::move(mats[3]), std::move(mats[4]), std::move(mats[5]), std::move(mats[6]),
                   std::move(mats[7])};
  if (check_definiteness)
  {
    if (!is_positive_definite(out.mass))
      fail(ErrorKind::DefinitenessFailure, "mass matrix is not positive definite");
    if (!is_positive_definite(out.dissipation))
      fail(ErrorKind::DefinitenessFailure, "dissipation matrix is not positive definite");
  }
  return out;
}

inline ModeMatrices assemble(const EquilibriumProfile& profile, const PhysicalParams& params, const FourierMode& mode,
                             const AssemblyOptions& opt = {})
{
  return assemble(FormCoefficients(profile, params), mode, make_discretization(profile.geometry(), opt),
                  opt.quadrature_order, opt.check_definiteness);
}

/// Matrix Market coordinate export of the lower triangle:
/// "%%MatrixMarket matrix coordinate complex hermitian", 1-based indices.
inline void write_matrix_market(std::ostream& os, const BandedHermitian& a)
{
  std::size_t nnz = 0;
  const std::size_t n = a.size(), kd = a.bandwidth();
  for (std::size_t j = 0; j < n; ++j)
    nnz += std::min(kd + 1, n - j);
  os << "%%MatrixMarket matrix coordinate complex hermitian\n";
  os << n << ' ' << n << ' ' << nnz << '\n';
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j; i <= std::min(n - 1, j + kd); ++i)
    {
      const cplx v = a(i, j);
      os << fmt::format("{} {} {:.17g} {:.17g}\n", i + 1, j + 1, v.real(), v.imag());
    }
}

}  // namespace rtspectra
