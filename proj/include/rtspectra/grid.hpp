// Copyright the rt-spectra authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "error.hpp"

namespace rtspectra
{

/// Interval sizes cannot exceed this multiple of the uniform spacing.
inline constexpr double kGradingCapFactor = 1.5;

/// Sizes of `count` intervals covering `length`, smallest first. Each interval
/// is `ratio` times its predecessor until the cap kGradingCapFactor * length /
/// count is reached; the rest are equal to the cap.
inline std::vector<double> graded_intervals(double length, std::size_t count, double ratio)
{
  if (count == 0)
    fail(ErrorKind::InvalidGrading, "at least one interval is required");
  if (!std::isfinite(ratio) || ratio < 1.0)
    fail(ErrorKind::InvalidGrading, "grading ratio must be finite and >= 1");
  if (!(length > 0.0))
    fail(ErrorKind::InvalidGrading, "graded length must be positive");

  const double uniform = length / static_cast<double>(count);
  std::vector<double> sizes(count, uniform);
  if (ratio == 1.0)
    return sizes;

  const double cap = kGradingCapFactor * uniform;
  auto fill = [&](double first) {
    double total = 0.0;
    double s = first;
    for (std::size_t j = 0; j < count; ++j)
    {
      sizes[j] = std::min(s, cap);
      total += sizes[j];
      s *= ratio;
    }
    return total;
  };

  // The total is increasing in the first size; bisect for an exact cover.
  double lo = 0.0, hi = uniform;
  for (int iter = 0; iter < 200 && hi - lo > 1e-17 * uniform; ++iter)
  {
    const double mid = 0.5 * (lo + hi);
    (fill(mid) < length ? lo : hi) = mid;
  }
  fill(hi);
  return sizes;
}

/// Points from 0 to `end` (either sign) whose spacing grows away from 0.
inline std::vector<double> graded_points(double end, std::size_t count, double ratio)
{
  const auto sizes = graded_intervals(std::abs(end), count, ratio);
  const double sign = end < 0.0 ? -1.0 : 1.0;
  std::vector<double> pts(count + 1, 0.0);
  double acc = 0.0;
  for (std::size_t j = 0; j < count; ++j)
  {
    acc += sizes[j];
    pts[j + 1] = sign * acc;
  }
  pts.back() = end;
  return pts;
}

}  // namespace rtspectra
