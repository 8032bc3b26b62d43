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

#ifndef CFHP_BASELINES_HPP
#define CFHP_BASELINES_HPP

// Centralized zero-forcing and maximum-ratio precoders for single-antenna
// users with one stream each. Directions are normalized per user, then all
// precoders share one scale factor chosen so the most loaded AP sits exactly
// at its budget. A common factor keeps the ZF nulls intact.

#include "cfhp/channel.hpp"
#include "cfhp/precoder.hpp"
#include "cfhp/types.hpp"

#include <vector>

namespace cfhp {

/// U x (B N_t) matrix whose row u is user u's channel. Requires N_r = 1.
CMatrix stacked_channel(const ChannelRealization& channel);

/// f_u proportional to h_u^H. Throws std::domain_error on a zero row.
PrecoderStack mrt_precoder(const CMatrix& stacked, int num_aps, const std::vector<double>& max_power);

/// Columns of H^H (H H^H)^{-1}. Throws std::domain_error if H is not full
/// row rank or has more rows than columns.
PrecoderStack zf_precoder(const CMatrix& stacked, int num_aps, const std::vector<double>& max_power);

} // namespace cfhp

#endif // CFHP_BASELINES_HPP
