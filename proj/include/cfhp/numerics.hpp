// SPDX-License-Identifier: Apache-2.0
//
// cfhp - hybrid and fully digital precoding for cell-free mmWave MIMO
// Copyright (C) 2026 The cfhp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef CFHP_NUMERICS_HPP
#define CFHP_NUMERICS_HPP

// Dense kernels shared by the solvers: Hermitian eigendecomposition, PSD
// square root, Moore-Penrose pseudo-inverse and bisection on a decreasing
// scalar map. Templated on the Eigen expression type so they work for real
// and complex scalars alike.

#include "cfhp/types.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace cfhp {

/// Eigen-decomposition of a Hermitian PSD matrix, eigenvalues descending.
template <typename Scalar>
struct EigenPair {
  Vector<typename Eigen::NumTraits<Scalar>::Real> values;
  Matrix<Scalar> vectors;  // columns, unitary
};

/// Default relative tolerance on ||A - A^H||_F / ||A||_F accepted as Hermitian.
inline constexpr double kHermitianTol = 1e-8;

/// Pseudo-inverse singular-value cutoff, relative to the largest one.
inline constexpr double kPinvRtol = 1e-10;

template <typename Derived>
double hermitian_residual(const Eigen::MatrixBase<Derived>& a) {
  const double scale = a.norm();
  if (scale == 0.0)
    return 0.0;
  return (a - a.adjoint()).norm() / scale;
}

/// (A + A^H) / 2.
template <typename Derived>
Matrix<typename Derived::Scalar> hermitian_part(const Eigen::MatrixBase<Derived>& a) {
  return (a + a.adjoint()) * typename Derived::RealScalar(0.5);
}

template <typename Derived>
EigenPair<typename Derived::Scalar> hermitian_eig(const Eigen::MatrixBase<Derived>& a,
                                                  double tol = kHermitianTol) {
  using Scalar = typename Derived::Scalar;
  if (a.rows() != a.cols())
    throw std::invalid_argument("hermitian_eig: matrix is not square");
  if (const double r = hermitian_residual(a); r > tol) {
    std::ostringstream os;
    os << "hermitian_eig: input is not Hermitian (relative residual " << r << ")";
    throw std::invalid_argument(os.str());
  }
  EigenPair<Scalar> out;
  const Eigen::Index n = a.rows();
  if (n == 0)
    return out;
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(hermitian_part(a));
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian_eig: eigensolver did not converge");
  // Eigen returns ascending order.
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  out.values = solver.eigenvalues().reverse().cwiseMax(Real(0));
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

/// Hermitian PSD square root S = V diag(sqrt(lambda)) V^H, so that S S^H = A.
template <typename Derived>
Matrix<typename Derived::Scalar> psd_sqrt(const Eigen::MatrixBase<Derived>& a,
                                          double tol = kHermitianTol) {
  const auto eig = hermitian_eig(a, tol);
  return eig.vectors * eig.values.cwiseSqrt().asDiagonal() * eig.vectors.adjoint();
}

/// Number of eigenvalues above rtol * lambda_max.
template <typename RealVector>
int numerical_rank(const RealVector& descending, double rtol) {
  if (descending.size() == 0 || descending(0) <= 0.0)
    return 0;
  const double cut = rtol * descending(0);
  int r = 0;
  for (Eigen::Index i = 0; i < descending.size(); ++i)
    if (descending(i) > cut)
      ++r;
  return r;
}

/// Moore-Penrose pseudo-inverse; singular values below rtol * sigma_max are
/// treated as zero.
template <typename Derived>
Matrix<typename Derived::Scalar> pinv(const Eigen::MatrixBase<Derived>& a, double rtol = kPinvRtol) {
  using Scalar = typename Derived::Scalar;
  Matrix<Scalar> out = Matrix<Scalar>::Zero(a.cols(), a.rows());
  if (a.size() == 0)
    return out;
  Eigen::JacobiSVD<Matrix<Scalar>> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0)
    return out;
  const double cut = rtol * s(0);
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) <= cut)
      break;
    out.noalias() += svd.matrixV().col(i) * (svd.matrixU().col(i).adjoint() / s(i));
  }
  return out;
}

/// Raised when a bisection bracket does not enclose the target.
class BracketError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

struct Bisection {
  double lower = 0.0;
  double upper = 0.0;
  double point = 0.0;  // last midpoint evaluated
  int iterations = 0;
  std::vector<double> widths;  // bracket width after each iteration
};

/// Bisection for f(x) = target with f non-increasing on [lb, ub]:
/// f(mid) >= target moves the lower end, otherwise the upper end, until
/// ub - lb < eps. Takes at most ceil(log2((ub - lb) / eps)) iterations.
template <typename F>
Bisection bisect_decreasing(F&& f, double target, double lb, double ub, double eps) {
  if (!(eps > 0.0))
    throw std::invalid_argument("bisect_decreasing: eps must be positive");
  if (!(lb <= ub))
    throw std::invalid_argument("bisect_decreasing: lb > ub");
  if (const double flb = f(lb); flb < target) {
    std::ostringstream os;
    os << "bisect_decreasing: f(lb) = " << flb << " < target " << target;
    throw BracketError(os.str());
  }
  if (const double fub = f(ub); fub > target) {
    std::ostringstream os;
    os << "bisect_decreasing: f(ub) = " << fub << " > target " << target;
    throw BracketError(os.str());
  }
  Bisection out;
  out.lower = lb;
  out.upper = ub;
  out.point = 0.5 * (lb + ub);
  while (out.upper - out.lower >= eps) {
    out.point = 0.5 * (out.lower + out.upper);
    if (f(out.point) >= target)
      out.lower = out.point;
    else
      out.upper = out.point;
    ++out.iterations;
    out.widths.push_back(out.upper - out.lower);
  }
  return out;
}

} // namespace cfhp

#endif // CFHP_NUMERICS_HPP
