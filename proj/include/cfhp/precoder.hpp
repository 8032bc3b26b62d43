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

#ifndef CFHP_PRECODER_HPP
#define CFHP_PRECODER_HPP

#include "cfhp/types.hpp"

namespace cfhp {

/// Per-user precoders F_u of shape (B*N_t) x N_s. Row block b of F_u is the
/// part transmitted by AP b, F_{b,u}.
///
/// Used for the auxiliary precoders, the fully digital precoders and the
/// effective hybrid products alike.
class PrecoderStack {
public:
  PrecoderStack() = default;
  PrecoderStack(int num_aps, MatrixSet users);

  static PrecoderStack zeros(int num_aps, int num_tx, int num_users, int num_streams);

  [[nodiscard]] int num_aps() const { return num_aps_; }
  [[nodiscard]] int num_users() const { return static_cast<int>(users_.size()); }
  [[nodiscard]] int block_rows() const { return block_rows_; }
  [[nodiscard]] int num_streams() const;

  [[nodiscard]] const CMatrix& user(int u) const { return users_.at(static_cast<std::size_t>(u)); }
  [[nodiscard]] CMatrix& user(int u) { return users_.at(static_cast<std::size_t>(u)); }
  [[nodiscard]] const MatrixSet& users() const { return users_; }

  [[nodiscard]] auto block(int ap, int u) const { return user(u).middleRows(ap * block_rows_, block_rows_); }
  [[nodiscard]] auto block(int ap, int u) { return user(u).middleRows(ap * block_rows_, block_rows_); }

private:
  int num_aps_ = 0;
  int block_rows_ = 0;
  MatrixSet users_;
};

/// Analog F_RF,b (N_t x N_RF, unit-modulus entries) per AP and digital
/// F_BB,b,u (N_RF x N_s) per AP/user pair.
struct HybridPrecoder {
  std::vector<CMatrix> analog;   // size B
  std::vector<CMatrix> digital;  // size B*U, AP-major
  int num_users = 0;

  [[nodiscard]] int num_aps() const { return static_cast<int>(analog.size()); }
  [[nodiscard]] const CMatrix& digital_block(int ap, int u) const;
  [[nodiscard]] CMatrix& digital_block(int ap, int u);
  /// F_HB,b,u = F_RF,b F_BB,b,u.
  [[nodiscard]] CMatrix product(int ap, int u) const;
  /// Effective precoders F_HB,u stacked over APs.
  [[nodiscard]] PrecoderStack to_stack() const;
};

} // namespace cfhp

#endif // CFHP_PRECODER_HPP
