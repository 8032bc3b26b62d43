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

#ifndef CFHP_TYPES_HPP
#define CFHP_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace cfhp {

using Complex = std::complex<double>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using CMatrix = Matrix<Complex>;
using CVector = Vector<Complex>;
using RMatrix = Matrix<double>;
using RVector = Vector<double>;

// One matrix per user, e.g. aggregated channels H_u or combiners G_u.
using MatrixSet = std::vector<CMatrix>;

} // namespace cfhp

#endif // CFHP_TYPES_HPP
