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

#include "cfhp/channel.hpp"

#include "cfhp/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cfhp {

CVector steering_vector(double azimuth, double elevation, const Grid& grid, double spacing_ratio) {
  if (grid.width < 1 || grid.height < 1)
    throw std::invalid_argument("steering_vector: grid dimensions must be positive");
  const double k = 2.0 * std::numbers::pi * spacing_ratio;
  const double horizontal = std::sin(azimuth) * std::sin(elevation);
  const double vertical = std::cos(elevation);
  const double amplitude = 1.0 / std::sqrt(static_cast<double>(grid.size()));
  CVector a(grid.size());
  for (int m = 0; m < grid.width; ++m)
    for (int n = 0; n < grid.height; ++n)
      a(m * grid.height + n) = std::polar(amplitude, k * (m * horizontal + n * vertical));
  return a;
}

ChannelRealization::ChannelRealization(int num_aps, int num_users, std::vector<CMatrix> links,
                                       std::vector<std::vector<PathParams>> paths,
                                       std::uint64_t seed, std::uint64_t trial)
    : num_aps_(num_aps), num_users_(num_users), links_(std::move(links)), paths_(std::move(paths)),
      seed_(seed), trial_(trial) {
  const auto pairs = static_cast<std::size_t>(num_aps) * static_cast<std::size_t>(num_users);
  if (num_aps < 1 || num_users < 1 || links_.size() != pairs)
    throw std::invalid_argument("ChannelRealization: expected num_aps * num_users links");
  if (!paths_.empty() && paths_.size() != pairs)
    throw std::invalid_argument("ChannelRealization: path list size mismatch");
  for (const auto& h : links_)
    if (h.rows() != links_.front().rows() || h.cols() != links_.front().cols())
      throw std::invalid_argument("ChannelRealization: links must share one shape");
}

std::size_t ChannelRealization::index(int ap, int user) const {
  if (ap < 0 || ap >= num_aps_ || user < 0 || user >= num_users_)
    throw std::out_of_range("ChannelRealization: AP or user index out of range");
  return static_cast<std::size_t>(ap) * static_cast<std::size_t>(num_users_) +
         static_cast<std::size_t>(user);
}

const CMatrix& ChannelRealization::link(int ap, int user) const { return links_[index(ap, user)]; }

const std::vector<PathParams>& ChannelRealization::paths(int ap, int user) const {
  if (paths_.empty())
    throw std::logic_error("ChannelRealization: no path parameters recorded");
  return paths_[index(ap, user)];
}

CMatrix ChannelRealization::aggregate_user_channel(int user) const {
  if (user < 0 || user >= num_users_)
    throw std::out_of_range("aggregate_user_channel: user index out of range");
  const CMatrix& first = links_.front();
  const Eigen::Index nt = first.cols();
  CMatrix h(first.rows(), nt * num_aps_);
  for (int b = 0; b < num_aps_; ++b)
    h.middleCols(b * nt, nt) = link(b, user);
  return h;
}

MatrixSet ChannelRealization::aggregated() const {
  MatrixSet out;
  out.reserve(static_cast<std::size_t>(num_users_));
  for (int u = 0; u < num_users_; ++u)
    out.push_back(aggregate_user_channel(u));
  return out;
}

CMatrix link_from_paths(const std::vector<PathParams>& paths, const Grid& tx, const Grid& rx,
                        double spacing_ratio) {
  CMatrix h = CMatrix::Zero(rx.size(), tx.size());
  if (paths.empty())
    return h;
  for (const auto& p : paths) {
    const CVector at = steering_vector(p.aod_azimuth, p.aod_elevation, tx, spacing_ratio);
    const CVector ar = steering_vector(p.aoa_azimuth, p.aoa_elevation, rx, spacing_ratio);
    h.noalias() += p.gain * ar * at.adjoint();
  }
  h *= std::sqrt(static_cast<double>(tx.size()) * rx.size() / static_cast<double>(paths.size()));
  return h;
}

ChannelRealization sample_channel(const SystemConfig& cfg, std::uint64_t trial) {
  constexpr double pi = std::numbers::pi;
  const int num_aps = cfg.num_aps;
  const int num_users = cfg.num_users;
  std::vector<CMatrix> links;
  std::vector<std::vector<PathParams>> paths;
  links.reserve(static_cast<std::size_t>(num_aps * num_users));
  paths.reserve(links.capacity());
  for (int b = 0; b < num_aps; ++b) {
    for (int u = 0; u < num_users; ++u) {
      RandomStream rng = make_stream(cfg.seed, StreamTag::kChannel, trial,
                                     static_cast<std::uint64_t>(b), static_cast<std::uint64_t>(u));
      std::vector<PathParams> link_paths(static_cast<std::size_t>(cfg.num_paths));
      for (auto& p : link_paths) {
        p.gain = rng.complex_gaussian();
        p.aoa_azimuth = rng.uniform_left_open(-pi, pi);
        p.aoa_elevation = rng.uniform_left_open(-pi / 2, pi / 2);
        p.aod_azimuth = rng.uniform_left_open(-pi, pi);
        p.aod_elevation = rng.uniform_left_open(-pi / 2, pi / 2);
      }
      links.push_back(link_from_paths(link_paths, cfg.tx_grid, cfg.rx_grid, cfg.antenna_spacing));
      paths.push_back(std::move(link_paths));
    }
  }
  return {num_aps, num_users, std::move(links), std::move(paths), cfg.seed, trial};
}

} // namespace cfhp
