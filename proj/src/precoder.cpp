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

#include "cfhp/precoder.hpp"

#include <stdexcept>

namespace cfhp {

PrecoderStack::PrecoderStack(int num_aps, MatrixSet users) : num_aps_(num_aps), users_(std::move(users)) {
  if (num_aps < 1)
    throw std::invalid_argument("PrecoderStack: num_aps must be positive");
  if (users_.empty())
    throw std::invalid_argument("PrecoderStack: no users");
  const Eigen::Index rows = users_.front().rows();
  const Eigen::Index cols = users_.front().cols();
  if (rows % num_aps != 0)
    throw std::invalid_argument("PrecoderStack: rows not divisible by num_aps");
  for (const auto& f : users_)
    if (f.rows() != rows || f.cols() != cols)
      throw std::invalid_argument("PrecoderStack: users must share one shape");
  block_rows_ = static_cast<int>(rows / num_aps);
}

PrecoderStack PrecoderStack::zeros(int num_aps, int num_tx, int num_users, int num_streams) {
  MatrixSet users(static_cast<std::size_t>(num_users), CMatrix::Zero(num_aps * num_tx, num_streams));
  return {num_aps, std::move(users)};
}

int PrecoderStack::num_streams() const {
  return users_.empty() ? 0 : static_cast<int>(users_.front().cols());
}

const CMatrix& HybridPrecoder::digital_block(int ap, int u) const {
  return digital.at(static_cast<std::size_t>(ap * num_users + u));
}

CMatrix& HybridPrecoder::digital_block(int ap, int u) {
  return digital.at(static_cast<std::size_t>(ap * num_users + u));
}

CMatrix HybridPrecoder::product(int ap, int u) const {
  return analog.at(static_cast<std::size_t>(ap)) * digital_block(ap, u);
}

PrecoderStack HybridPrecoder::to_stack() const {
  const int nb = num_aps();
  if (nb == 0 || num_users == 0)
    throw std::logic_error("HybridPrecoder: empty");
  const Eigen::Index nt = analog.front().rows();
  const Eigen::Index ns = digital.front().cols();
  MatrixSet users;
  users.reserve(static_cast<std::size_t>(num_users));
  for (int u = 0; u < num_users; ++u) {
    CMatrix f(nb * nt, ns);
    for (int b = 0; b < nb; ++b)
      f.middleRows(b * nt, nt) = product(b, u);
    users.push_back(std::move(f));
  }
  return {nb, std::move(users)};
}

} // namespace cfhp
