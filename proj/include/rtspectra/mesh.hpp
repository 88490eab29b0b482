// Copyright the rt-spectra authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "error.hpp"
#include "grid.hpp"
#include "types.hpp"

namespace rtspectra
{

/// Conforming 1D mesh of [h-, h+] with a node at the interface y3 = 0.
struct Mesh1D
{
  std::vector<double> nodes;
  std::size_t n_per_layer = 0;
  double grading = 1.0;

  std::size_t n_elements() const { return nodes.size() - 1; }
  std::size_t interface_node() const { return n_per_layer; }
  double element_length(std::size_t e) const { return nodes[e + 1] - nodes[e]; }
  Side element_side(std::size_t e) const { return e < n_per_layer ? Side::minus : Side::plus; }
};

/// Mesh with `n_per_layer` elements in each layer. Element sizes grow away
/// from the interface by `grading` per element, capped at 1.5x the uniform size.
inline Mesh1D build_mesh(const Geometry& geometry, std::size_t n_per_layer, double grading)
{
  geometry.validate();
  if (n_per_layer < 4)
    fail(ErrorKind::Validation, "n_per_layer must be >= 4");
  if (!std::isfinite(grading) || grading < 1.0)
    fail(ErrorKind::InvalidGrading, "grading must be finite and >= 1");

  const auto up = graded_points(geometry.h_plus, n_per_layer, grading);
  const auto down = graded_points(geometry.h_minus, n_per_layer, grading);

  Mesh1D mesh;
  mesh.n_per_layer = n_per_layer;
  mesh.grading = grading;
  mesh.nodes.reserve(2 * n_per_layer + 1);
  mesh.nodes.assign(down.rbegin(), down.rend());
  mesh.nodes.insert(mesh.nodes.end(), up.begin() + 1, up.end());
  return mesh;
}

/// Finite element family for the displacement profile (phi, theta, psi).
/// Both use continuous piecewise-linear phi and theta. `p1_bubble` enriches
/// psi with one quadratic bubble per element so that discretely
/// divergence-free fields with psi(0) != 0 exist.
enum class ElementFamily
{
  p1,
  p1_bubble
};

inline std::string to_string(ElementFamily f) { return f == ElementFamily::p1 ? "p1" : "p1_bubble"; }

/// One basis function restricted to an element, evaluated at a point.
struct BasisValue
{
  std::size_t dof;
  int component;
  double value;
  double derivative;
};

/// Local basis at one point of an element: at most 7 entries.
struct LocalBasis
{
  std::array<BasisValue, 7> entries{};
  std::size_t count = 0;

  void push(std::size_t dof, int component, double value, double derivative)
  {
    entries[count++] = {dof, component, value, derivative};
  }
  const BasisValue* begin() const { return entries.data(); }
  const BasisValue* end() const { return entries.data() + count; }
};

/// Mesh plus degree-of-freedom numbering. Boundary nodes carry no unknowns
/// (Dirichlet) and the interface node is shared by both layers. Unknowns are
/// interleaved element by element, so every matrix is banded.
class Discretization
{
public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  Discretization(Mesh1D mesh, ElementFamily family) : mesh_(std::move(mesh)), family_(family) {}

  const Mesh1D& mesh() const { return mesh_; }
  ElementFamily family() const { return family_; }

  std::size_t size() const
  {
    const std::size_t n = mesh_.n_elements();
    return family_ == ElementFamily::p1 ? 3 * (n - 1) : 4 * n - 3;
  }

  /// Half bandwidth of every assembled matrix.
  std::size_t bandwidth() const { return family_ == ElementFamily::p1 ? 5 : 6; }

  /// Unknown for component c of node j, or npos on the boundary.
  std::size_t node_dof(std::size_t j, int c) const
  {
    if (j == 0 || j >= mesh_.n_elements())
      return npos;
    return family_ == ElementFamily::p1 ? 3 * (j - 1) + c : 4 * j - 3 + c;
  }

  std::size_t bubble_dof(std::size_t e) const { return family_ == ElementFamily::p1 ? npos : 4 * e; }

  /// Basis functions of element e at local coordinate t in [0, 1].
  LocalBasis local_basis(std::size_t e, double t) const
  {
    LocalBasis out;
    const double h = mesh_.element_length(e);
    for (int c = 0; c < 3; ++c)
    {
      if (auto d = node_dof(e, c); d != npos)
        out.push(d, c, 1.0 - t, -1.0 / h);
      if (auto d = node_dof(e + 1, c); d != npos)
        out.push(d, c, t, 1.0 / h);
    }
    if (family_ == ElementFamily::p1_bubble)
      out.push(bubble_dof(e), 2, 4.0 * t * (1.0 - t), 4.0 * (1.0 - 2.0 * t) / h);
    return out;
  }

private:
  Mesh1D mesh_;
  ElementFamily family_;
};

}  // namespace rtspectra
