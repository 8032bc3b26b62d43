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

#ifndef CFHP_TESTS_SUPPORT_HPP
#define CFHP_TESTS_SUPPORT_HPP

// Helpers shared by the unit tests: seeded random matrices and tiny configs.

#include "cfhp/model.hpp"
#include "cfhp/precoder.hpp"
#include "cfhp/rng.hpp"
#include "cfhp/types.hpp"

#include <cstdint>

namespace cfhp::test {

inline CMatrix random_matrix(RandomStream& rng, Eigen::Index rows, Eigen::Index cols) {
  CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i)
      m(i, j) = rng.complex_gaussian();
  return m;
}

inline CMatrix random_matrix(std::uint64_t seed, Eigen::Index rows, Eigen::Index cols) {
  auto rng = make_stream(seed, StreamTag::kTest, 0, static_cast<std::uint64_t>(rows),
                         static_cast<std::uint64_t>(cols));
  return random_matrix(rng, rows, cols);
}

inline CMatrix random_psd(std::uint64_t seed, Eigen::Index n, Eigen::Index rank) {
  const CMatrix x = random_matrix(seed, n, rank);
  return x * x.adjoint();
}

inline MatrixSet random_set(std::uint64_t seed, int count, Eigen::Index rows, Eigen::Index cols) {
  auto rng = make_stream(seed, StreamTag::kTest, 1, static_cast<std::uint64_t>(rows),
                         static_cast<std::uint64_t>(cols));
  MatrixSet out;
  for (int i = 0; i < count; ++i)
    out.push_back(random_matrix(rng, rows, cols));
  return out;
}

inline PrecoderStack random_stack(std::uint64_t seed, int aps, int nt, int users, int ns) {
  return {aps, random_set(seed + 17, users, aps * nt, ns)};
}

/// B=2, U=2, N_t=4, N_r=2, N_RF=4, N_s=2, L=4.
inline SystemConfig small_config(std::uint64_t seed = 1) {
  SystemConfig cfg;
  cfg.num_aps = 2;
  cfg.num_users = 2;
  cfg.tx_grid = {2, 2};
  cfg.rx_grid = {2, 1};
  cfg.num_rf_chains = 4;
  cfg.num_streams = 2;
  cfg.num_paths = 4;
  cfg.seed = seed;
  return cfg;
}

inline CMatrix scalar(double re, double im = 0.0) {
  CMatrix m(1, 1);
  m(0, 0) = Complex(re, im);
  return m;
}

} // namespace cfhp::test

#endif // CFHP_TESTS_SUPPORT_HPP
