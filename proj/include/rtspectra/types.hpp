// Copyright the rt-spectra authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "error.hpp"

namespace rtspectra
{

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;
using CVec3 = std::array<cplx, 3>;

inline constexpr cplx I{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

inline double norm2(const CVec3& v) { return std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]); }
inline double norm(const CVec3& v) { return std::sqrt(norm2(v)); }

/// Which layer a point belongs to. The interface y3 = 0 is shared, so
/// evaluations there need an explicit side.
enum class Side
{
  minus,
  plus
};

enum class Medium
{
  mhd,
  viscoelastic
};

inline std::string to_string(Medium m) { return m == Medium::mhd ? "mhd" : "viscoelastic"; }

/// Slab geometry. The interface sits at y3 = 0, so h_minus < 0 < h_plus.
struct Geometry
{
  double h_minus = -1.0;
  double h_plus = 1.0;
  double L1 = 1.0;
  double L2 = 1.0;

  double height() const { return h_plus - h_minus; }

  void validate() const
  {
    if (!(h_minus < 0.0) || !(h_plus > 0.0))
      fail(ErrorKind::Validation, "geometry requires h_minus < 0 < h_plus");
    if (!(L1 > 0.0) || !(L2 > 0.0))
      fail(ErrorKind::Validation, "geometry requires L1 > 0 and L2 > 0");
  }
};

/// Horizontal wave vector xi = (k1/L1, k2/L2) of a periodic plane wave.
struct FourierMode
{
  int k1 = 0;
  int k2 = 0;
  double xi1 = 0.0;
  double xi2 = 0.0;

  static FourierMode from_lattice(int k1, int k2, const Geometry& geo)
  {
    return {k1, k2, k1 / geo.L1, k2 / geo.L2};
  }

  /// A mode given directly by its frequency; lattice indices are left at zero.
  static FourierMode from_frequency(double xi1, double xi2) { return {0, 0, xi1, xi2}; }

  double norm2() const { return xi1 * xi1 + xi2 * xi2; }
  bool is_zero() const { return xi1 == 0.0 && xi2 == 0.0; }
  FourierMode negated() const { return {-k1, -k2, -xi1, -xi2}; }
};

}  // namespace rtspectra
