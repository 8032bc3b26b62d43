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

#include "cfhp/metrics.hpp"

#include "cfhp/numerics.hpp"
#include "cfhp/subproblem.hpp"
#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace cfhp;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using test::scalar;

namespace {

// One AP, one antenna everywhere.
PrecoderStack scalar_stack(std::initializer_list<double> gains) {
  MatrixSet users;
  for (double g : gains)
    users.push_back(scalar(g));
  return {1, users};
}

} // namespace

TEST_CASE("interference plus noise", "[metrics]") {
  const MatrixSet h{scalar(1.0), scalar(1.0)};
  const auto stack = scalar_stack({1.0, 2.0});
  CHECK_THAT(interference_plus_noise(0, stack, h, 1.0)(0, 0).real(), WithinAbs(5.0, 1e-15));

  const auto single = scalar_stack({3.0});
  CHECK_THAT(interference_plus_noise(0, single, {scalar(2.0)}, 0.7)(0, 0).real(), WithinAbs(0.7, 1e-15));

  const auto zeros = PrecoderStack::zeros(2, 3, 2, 1);
  const MatrixSet hz = test::random_set(3, 2, 2, 6);
  CHECK((interference_plus_noise(1, zeros, hz, 2.0) - 2.0 * CMatrix::Identity(2, 2)).norm() == 0.0);
  CHECK_THROWS_AS(interference_plus_noise(2, zeros, hz, 2.0), std::out_of_range);
  CHECK_THROWS_AS(interference_plus_noise(0, zeros, test::random_set(3, 2, 2, 5), 2.0), std::invalid_argument);
}

TEST_CASE("weighted sum rate scalar and structural cases", "[metrics]") {
  CHECK_THAT(wsr(scalar_stack({1.0}), {scalar(1.0)}, 1.0, {1.0}), WithinAbs(std::log(2.0), 1e-15));
  const auto zeros = PrecoderStack::zeros(2, 3, 2, 2);
  CHECK(wsr(zeros, test::random_set(9, 2, 2, 6), 1.0, {1.0, 1.0}) == 0.0);

  // Orthogonal rank-one channels with matched precoders: no interference.
  CMatrix h1 = CMatrix::Zero(1, 2);
  CMatrix h2 = CMatrix::Zero(1, 2);
  h1(0, 0) = 2.0;
  h2(0, 1) = Complex(0.0, 3.0);
  MatrixSet f{h1.adjoint() / h1.norm(), h2.adjoint() / h2.norm()};
  const PrecoderStack stack(1, f);
  const double expected = std::log(1.0 + 4.0) + 2.0 * std::log(1.0 + 9.0);
  CHECK_THAT(wsr(stack, {h1, h2}, 1.0, {1.0, 2.0}), WithinRel(expected, 1e-14));
}

TEST_CASE("rates are invariant under unitary rotation of a precoder", "[metrics]") {
  const MatrixSet h = test::random_set(21, 3, 2, 8);
  PrecoderStack stack = test::random_stack(22, 2, 4, 3, 2);
  const double before = wsr(stack, h, 0.5, {1.0, 1.0, 1.0});
  Eigen::HouseholderQR<CMatrix> qr(test::random_matrix(23, 2, 2));
  const CMatrix q = qr.householderQ();
  for (int u = 0; u < 3; ++u)
    stack.user(u) = stack.user(u) * q;
  CHECK_THAT(wsr(stack, h, 0.5, {1.0, 1.0, 1.0}), WithinRel(before, 1e-8));
}

TEST_CASE("MSE matrix", "[metrics]") {
  const auto stack = scalar_stack({1.0});
  CHECK_THAT(mse_matrix(0, scalar(0.5), stack, {scalar(1.0)}, 1.0)(0, 0).real(), WithinAbs(0.5, 1e-15));

  const MatrixSet h = test::random_set(4, 2, 3, 8);
  const PrecoderStack s = test::random_stack(5, 2, 4, 2, 2);
  const CMatrix e0 = mse_matrix(1, CMatrix::Zero(3, 2), s, h, 1.0);
  CHECK((e0 - CMatrix::Identity(2, 2)).norm() < 1e-15);

  const CMatrix e = mse_matrix(0, test::random_matrix(6, 3, 2), s, h, 1.0);
  CHECK(hermitian_residual(e) <= 1e-10);
  CHECK(hermitian_eig(e).values.minCoeff() > 0.0);
  CHECK_THROWS_AS(mse_matrix(0, CMatrix::Zero(2, 2), s, h, 1.0), std::invalid_argument);
}

TEST_CASE("the MMSE combiner minimizes the MSE trace", "[metrics]") {
  const MatrixSet h = test::random_set(31, 2, 3, 8);
  const PrecoderStack s = test::random_stack(32, 2, 4, 2, 2);
  const MatrixSet g = update_combiners(s, h, 0.3);
  auto rng = make_stream(33, StreamTag::kTest, 0);
  for (int u = 0; u < 2; ++u) {
    const double best = mse_matrix(u, g[static_cast<std::size_t>(u)], s, h, 0.3).trace().real();
    for (int k = 0; k < 20; ++k) {
      const CMatrix d = 0.1 * test::random_matrix(rng, 3, 2);
      CHECK(mse_matrix(u, g[static_cast<std::size_t>(u)] + d, s, h, 0.3).trace().real() >= best);
    }
  }
}

TEST_CASE("per-AP power", "[metrics]") {
  CHECK(per_ap_power(1, PrecoderStack::zeros(2, 4, 3, 2)).mw() == 0.0);

  CMatrix f = CMatrix::Zero(8, 2);
  f(0, 0) = 1.0;
  f(3, 1) = Complex(0.0, 1.0);
  f(5, 0) = 7.0;
  const PrecoderStack s(2, {f});
  CHECK_THAT(per_ap_power(0, s).mw(), WithinAbs(2.0, 1e-15));
  CHECK_THAT(per_ap_power(1, s).mw(), WithinAbs(49.0, 1e-15));
  CHECK_THROWS_AS(per_ap_power(2, s), std::out_of_range);

  HybridPrecoder hp;
  hp.num_users = 1;
  hp.analog = {CMatrix::Ones(6, 1)};
  hp.digital = {scalar(0.0, 2.0)};
  CHECK_THAT(per_ap_power(0, hp).mw(), WithinAbs(24.0, 1e-14));
}

TEST_CASE("penalized WMMSE objective", "[metrics]") {
  const int nt = 4, nrf = 3;
  const MatrixSet h = test::random_set(41, 2, 2, 2 * nt);
  HybridPrecoder hp;
  hp.num_users = 2;
  hp.analog = {test::random_matrix(42, nt, nrf), test::random_matrix(43, nt, nrf)};
  hp.digital = test::random_set(44, 4, nrf, 2);
  const PrecoderStack exact = hp.to_stack();
  const MatrixSet g = test::random_set(45, 2, 2, 2);
  const MatrixSet w_id{CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)};
  const std::vector<double> weights{1.0, 0.5}, rho{2.0, 3.0};

  CHECK(penalty_term(exact, hp, rho) == 0.0);
  const double of = wmmse_objective(g, w_id, exact, hp, h, 1.0, rho, weights);
  double expected = 0.0;
  for (int u = 0; u < 2; ++u)
    expected -= weights[static_cast<std::size_t>(u)] *
                mse_matrix(u, g[static_cast<std::size_t>(u)], exact, h, 1.0).trace().real();
  CHECK_THAT(of, WithinRel(expected, 1e-12));

  PrecoderStack off = exact;
  off.block(1, 0) += CMatrix::Ones(nt, 2);
  CHECK_THAT(penalty_term(off, hp, rho), WithinRel(8.0 / 6.0, 1e-12));

  MatrixSet bad = w_id;
  bad[0](0, 1) = 1.0;
  CHECK_THROWS_AS(wmmse_objective(g, bad, exact, hp, h, 1.0, rho, weights), std::invalid_argument);
  bad[0] = -CMatrix::Identity(2, 2);
  CHECK_THROWS_AS(wmmse_objective(g, bad, exact, hp, h, 1.0, rho, weights), std::invalid_argument);
}

TEST_CASE("objective at optimal G and W reproduces the rate", "[metrics]") {
  const MatrixSet h = test::random_set(51, 3, 2, 8);
  const PrecoderStack s = test::random_stack(52, 2, 4, 3, 2);
  const std::vector<double> weights{1.0, 2.0, 0.5};
  const MatrixSet g = update_combiners(s, h, 0.8);
  const MatrixSet w = update_weights(g, s, h, 0.8);
  const double of = wmmse_objective(g, w, s, h, 0.8, weights);
  CHECK_THAT(of + 2.0 * (1.0 + 2.0 + 0.5), WithinRel(wsr(s, h, 0.8, weights), 1e-10));
}
