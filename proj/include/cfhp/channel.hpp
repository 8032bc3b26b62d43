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

#ifndef CFHP_CHANNEL_HPP
#define CFHP_CHANNEL_HPP

#include "cfhp/model.hpp"
#include "cfhp/types.hpp"

#include <cstdint>
#include <vector>

namespace cfhp {

/// UPA response for azimuth `azimuth` and elevation `elevation` (radians).
///
/// Element (m, n), m in [0, W), n in [0, H), sits at flat index m * H + n and
/// equals exp(j 2 pi (d/lambda) (m sin(az) sin(el) + n cos(el))) / sqrt(W H).
/// The result has unit Euclidean norm.
CVector steering_vector(double azimuth, double elevation, const Grid& grid, double spacing_ratio);

/// One propagation path between an AP and a user.
struct PathParams {
  Complex gain;
  double aod_azimuth = 0.0;
  double aod_elevation = 0.0;
  double aoa_azimuth = 0.0;
  double aoa_elevation = 0.0;
};

/// H_{b,u} for every AP/user pair plus the paths that generated them.
class ChannelRealization {
public:
  ChannelRealization() = default;
  ChannelRealization(int num_aps, int num_users, std::vector<CMatrix> links,
                     std::vector<std::vector<PathParams>> paths = {}, std::uint64_t seed = 0,
                     std::uint64_t trial = 0);

  [[nodiscard]] int num_aps() const { return num_aps_; }
  [[nodiscard]] int num_users() const { return num_users_; }
  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] std::uint64_t trial() const { return trial_; }

  /// H_{b,u}, N_r x N_t. Zero-based indices.
  [[nodiscard]] const CMatrix& link(int ap, int user) const;
  [[nodiscard]] const std::vector<PathParams>& paths(int ap, int user) const;

  /// H_u = [H_{1,u}, ..., H_{B,u}], N_r x B*N_t.
  [[nodiscard]] CMatrix aggregate_user_channel(int user) const;
  /// Aggregated channels for every user.
  [[nodiscard]] MatrixSet aggregated() const;

private:
  [[nodiscard]] std::size_t index(int ap, int user) const;

  int num_aps_ = 0;
  int num_users_ = 0;
  std::vector<CMatrix> links_;  // ap-major
  std::vector<std::vector<PathParams>> paths_;
  std::uint64_t seed_ = 0;
  std::uint64_t trial_ = 0;
};

/// H = sqrt(N_t N_r / L) sum_l gain_l a_r(aoa_l) a_t(aod_l)^H.
CMatrix link_from_paths(const std::vector<PathParams>& paths, const Grid& tx, const Grid& rx,
                        double spacing_ratio);

/// Draws every link from its own counter-based stream keyed by
/// (cfg.seed, trial, b, u): gains CN(0,1), azimuths uniform on (-pi, pi],
/// elevations uniform on (-pi/2, pi/2], independently per path.
ChannelRealization sample_channel(const SystemConfig& cfg, std::uint64_t trial = 0);

} // namespace cfhp

#endif // CFHP_CHANNEL_HPP
