// Copyright the rt-spectra authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#ifndef lapack_complex_float
#define lapack_complex_float std::complex<float>
#endif
#ifndef lapack_complex_double
#define lapack_complex_double std::complex<double>
#endif
#include <lapacke.h>

#include "error.hpp"
#include "types.hpp"

namespace rtspectra
{

/// Hermitian band matrix, lower triangle in LAPACK band storage:
/// entry (i, j) with 0 <= i - j <= kd lives at ab[(i - j) + j * (kd + 1)].
class BandedHermitian
{
public:
  BandedHermitian() = default;
  BandedHermitian(std::size_t n, std::size_t kd) : n_(n), kd_(kd), ab_((kd + 1) * n, cplx{}) {}

  std::size_t size() const { return n_; }
  std::size_t bandwidth() const { return kd_; }

  /// Entry (i, j) for any i, j; zero outside the band.
  cplx operator()(std::size_t i, std::size_t j) const
  {
    if (i >= j)
      return i - j <= kd_ ? ab_[(i - j) + j * (kd_ + 1)] : cplx{};
    return std::conj((*this)(j, i));
  }

  /// Add v to entry (i, j) with i >= j; the upper triangle follows implicitly.
  void add_lower(std::size_t i, std::size_t j, cplx v)
  {
    if (i < j || i - j > kd_)
      fail(ErrorKind::AssemblyError, "entry outside the lower band");
    ab_[(i - j) + j * (kd_ + 1)] += v;
  }

  /// a * this + b * other, same shape.
  BandedHermitian combine(double a, const BandedHermitian& other, double b) const
  {
    check_shape(other);
    BandedHermitian out(n_, kd_);
    for (std::size_t k = 0; k < ab_.size(); ++k)
      out.ab_[k] = a * ab_[k] + b * other.ab_[k];
    return out;
  }

  BandedHermitian scaled(double a) const
  {
    BandedHermitian out = *this;
    for (auto& v : out.ab_)
      v *= a;
    return out;
  }

  BandedHermitian operator+(const BandedHermitian& o) const { return combine(1.0, o, 1.0); }
  BandedHermitian operator-(const BandedHermitian& o) const { return combine(1.0, o, -1.0); }

  Eigen::VectorXcd multiply(const Eigen::VectorXcd& x) const
  {
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(x.size());
    for (std::size_t j = 0; j < n_; ++j)
    {
      const auto J = static_cast<Eigen::Index>(j);
      y[J] += ab_[j * (kd_ + 1)] * x[J];
      for (std::size_t d = 1; d <= kd_ && j + d < n_; ++d)
      {
        const auto Id = static_cast<Eigen::Index>(j + d);
        const cplx a = ab_[d + j * (kd_ + 1)];
        y[Id] += a * x[J];
        y[J] += std::conj(a) * x[Id];
      }
    }
    return y;
  }

  /// Re(x* A x).
  double quadratic(const Eigen::VectorXcd& x) const { return x.dot(multiply(x)).real(); }

  Eigen::MatrixXcd to_dense() const
  {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t d = 0; d <= kd_ && j + d < n_; ++d)
      {
        const cplx a = ab_[d + j * (kd_ + 1)];
        m(static_cast<Eigen::Index>(j + d), static_cast<Eigen::Index>(j)) = a;
        if (d > 0)
          m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j + d)) = std::conj(a);
      }
    return m;
  }

  /// Frobenius norm of the full matrix.
  double frobenius_norm() const
  {
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t d = 0; d <= kd_ && j + d < n_; ++d)
        s += (d == 0 ? 1.0 : 2.0) * std::norm(ab_[d + j * (kd_ + 1)]);
    return std::sqrt(s);
  }

  /// Largest absolute row sum; bounds every eigenvalue magnitude.
  double row_sum_norm() const
  {
    std::vector<double> rows(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t d = 0; d <= kd_ && j + d < n_; ++d)
      {
        const double a = std::abs(ab_[d + j * (kd_ + 1)]);
        rows[j + d] += a;
        if (d > 0)
          rows[j] += a;
      }
    return n_ ? *std::max_element(rows.begin(), rows.end()) : 0.0;
  }

  double min_diagonal() const
  {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n_; ++j)
      m = std::min(m, ab_[j * (kd_ + 1)].real());
    return m;
  }

  /// Largest |Im| on the diagonal: the only way band storage can break Hermitian symmetry.
  double diagonal_imaginary_defect() const
  {
    double m = 0.0;
    for (std::size_t j = 0; j < n_; ++j)
      m = std::max(m, std::abs(ab_[j * (kd_ + 1)].imag()));
    return m;
  }

  /// Zero the imaginary parts of the diagonal.
  void symmetrize_diagonal()
  {
    for (std::size_t j = 0; j < n_; ++j)
      ab_[j * (kd_ + 1)].imag(0.0);
  }

  const std::vector<cplx>& storage() const { return ab_; }
  std::vector<cplx>& storage() { return ab_; }

private:
  void check_shape(const BandedHermitian& o) const
  {
    if (o.n_ != n_ || o.kd_ != kd_)
      fail(ErrorKind::AssemblyError, "band matrices differ in shape");
  }

  std::size_t n_ = 0;
  std::size_t kd_ = 0;
  std::vector<cplx> ab_;
};

/// Banded Cholesky factorization A = L L*. `ok()` is false when A is not
/// numerically positive definite, which doubles as an inertia test.
class BandedCholesky
{
public:
  explicit BandedCholesky(const BandedHermitian& a) : n_(a.size()), kd_(a.bandwidth()), ab_(a.storage())
  {
    const lapack_int info = LAPACKE_zpbtrf(LAPACK_COL_MAJOR, 'L', static_cast<lapack_int>(n_),
                                           static_cast<lapack_int>(kd_), ab_.data(), static_cast<lapack_int>(kd_ + 1));
    ok_ = info == 0;
  }

  bool ok() const { return ok_; }

  Eigen::VectorXcd solve(const Eigen::VectorXcd& b) const
  {
    if (!ok_)
      fail(ErrorKind::EigenSolverFailure, "solve with a failed factorization");
    Eigen::VectorXcd x = b;
    const lapack_int info = LAPACKE_zpbtrs(LAPACK_COL_MAJOR, 'L', static_cast<lapack_int>(n_),
                                           static_cast<lapack_int>(kd_), 1, ab_.data(),
                                           static_cast<lapack_int>(kd_ + 1), x.data(), static_cast<lapack_int>(n_));
    if (info != 0)
      fail(ErrorKind::EigenSolverFailure, "banded triangular solve failed");
    return x;
  }

private:
  std::size_t n_;
  std::size_t kd_;
  std::vector<cplx> ab_;
  bool ok_ = false;
};

inline bool is_positive_definite(const BandedHermitian& a) { return BandedCholesky(a).ok(); }

}  // namespace rtspectra
