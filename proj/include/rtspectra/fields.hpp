// Copyright the rt-spectra authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"
#include "mesh.hpp"
#include "types.hpp"

namespace rtspectra
{

/// Profile value and y3-derivative at one point.
struct FieldSample
{
  CVec3 w{};
  CVec3 dw{};
};

/// A complex profile (phi, theta, psi) on [h-, h+] that is smooth between
/// consecutive breakpoints. Breakpoints must contain h-, 0 and h+.
template <class F>
concept ModeField = requires(const F& f, std::size_t interval, double y) {
  { f.breakpoints() } -> std::convertible_to<std::span<const double>>;
  { f.sample(interval, y) } -> std::same_as<FieldSample>;
  { f.interface_value() } -> std::same_as<CVec3>;
};

/// Finite element function: coefficients over a Discretization.
class NodalField
{
public:
  NodalField(std::shared_ptr<const Discretization> disc, Eigen::VectorXcd coefficients)
      : disc_(std::move(disc)), coeffs_(std::move(coefficients))
  {
    if (static_cast<std::size_t>(coeffs_.size()) != disc_->size())
      fail(ErrorKind::GridMismatch, "coefficient vector does not match the discretization");
  }

  std::span<const double> breakpoints() const { return disc_->mesh().nodes; }
  const Discretization& discretization() const { return *disc_; }
  const Eigen::VectorXcd& coefficients() const { return coeffs_; }

  FieldSample sample(std::size_t e, double y) const
  {
    const auto& nodes = disc_->mesh().nodes;
    const double t = (y - nodes[e]) / (nodes[e + 1] - nodes[e]);
    FieldSample s;
    for (const auto& b : disc_->local_basis(e, t))
    {
      s.w[b.component] += b.value * coeffs_[static_cast<Eigen::Index>(b.dof)];
      s.dw[b.component] += b.derivative * coeffs_[static_cast<Eigen::Index>(b.dof)];
    }
    return s;
  }

  CVec3 interface_value() const
  {
    CVec3 v{};
    for (int c = 0; c < 3; ++c)
      v[c] = coeffs_[static_cast<Eigen::Index>(disc_->node_dof(disc_->mesh().interface_node(), c))];
    return v;
  }

private:
  std::shared_ptr<const Discretization> disc_;
  Eigen::VectorXcd coeffs_;
};

/// Interpolate a continuous profile: nodal values for all components and,
/// with the bubble family, the psi midpoint value.
inline NodalField interpolate(std::shared_ptr<const Discretization> disc, const std::function<CVec3(double)>& f)
{
  const auto& mesh = disc->mesh();
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(disc->size()));
  for (std::size_t j = 1; j < mesh.n_elements(); ++j)
  {
    const CVec3 v = f(mesh.nodes[j]);
    for (int k = 0; k < 3; ++k)
      c[static_cast<Eigen::Index>(disc->node_dof(j, k))] = v[k];
  }
  if (disc->family() == ElementFamily::p1_bubble)
  {
    for (std::size_t e = 0; e < mesh.n_elements(); ++e)
    {
      const double a = mesh.nodes[e], b = mesh.nodes[e + 1];
      const cplx linear = 0.5 * (f(a)[2] + f(b)[2]);
      c[static_cast<Eigen::Index>(disc->bubble_dof(e))] = f(0.5 * (a + b))[2] - linear;
    }
  }
  return NodalField(std::move(disc), std::move(c));
}

/// Profile given by closed-form functions, one pair per layer side. Values
/// at a breakpoint are taken from the side of the interval being sampled.
class FunctionField
{
public:
  using Fn = std::function<CVec3(double, Side)>;

  FunctionField(std::vector<double> breakpoints, Fn value, Fn derivative)
      : breaks_(std::move(breakpoints)), value_(std::move(value)), derivative_(std::move(derivative))
  {
  }

  /// Uniform breakpoints with `per_layer` intervals in each layer.
  static std::vector<double> uniform_breakpoints(const Geometry& geo, std::size_t per_layer)
  {
    std::vector<double> b;
    for (std::size_t j = 0; j < per_layer; ++j)
      b.push_back(geo.h_minus * (1.0 - static_cast<double>(j) / static_cast<double>(per_layer)));
    for (std::size_t j = 0; j <= per_layer; ++j)
      b.push_back(geo.h_plus * static_cast<double>(j) / static_cast<double>(per_layer));
    return b;
  }

  std::span<const double> breakpoints() const { return breaks_; }

  FieldSample sample(std::size_t interval, double y) const
  {
    const Side side = breaks_[interval] >= 0.0 ? Side::plus : Side::minus;
    return {value_(y, side), derivative_(y, side)};
  }

  CVec3 interface_value() const { return value_(0.0, Side::plus); }

private:
  std::vector<double> breaks_;
  Fn value_;
  Fn derivative_;
};

static_assert(ModeField<NodalField>);
static_assert(ModeField<FunctionField>);

/// Check that breakpoints cover [h-, h+] increasingly with a point at 0,
/// and optionally that the field vanishes at both ends.
template <ModeField F>
void check_field_grid(const F& field, const Geometry& geo, bool require_dirichlet = true)
{
  const auto b = field.breakpoints();
  if (b.size() < 3 || b.front() != geo.h_minus || b.back() != geo.h_plus)
    fail(ErrorKind::GridMismatch, "field grid must span [h-, h+] exactly");
  if (std::adjacent_find(b.begin(), b.end(), std::greater_equal<>{}) != b.end())
    fail(ErrorKind::GridMismatch, "field grid must be strictly increasing");
  if (!std::binary_search(b.begin(), b.end(), 0.0))
    fail(ErrorKind::GridMismatch, "field grid must contain the interface y3 = 0");

  if (!require_dirichlet)
    return;
  double scale = 0.0;
  for (std::size_t e = 0; e + 1 < b.size(); ++e)
    scale = std::max(scale, norm(field.sample(e, 0.5 * (b[e] + b[e + 1])).w));
  const double ends = std::max(norm(field.sample(0, b.front()).w), norm(field.sample(b.size() - 2, b.back()).w));
  if (ends > 1e-12 * scale)
    fail(ErrorKind::GridMismatch, "field must vanish at y3 = h- and y3 = h+");
}

}  // namespace rtspectra
