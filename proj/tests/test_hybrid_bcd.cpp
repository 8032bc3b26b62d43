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

#include "cfhp/hybrid_bcd.hpp"

#include "cfhp/metrics.hpp"
#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

using namespace cfhp;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double stacked_residual(const std::vector<CMatrix>& analog, const std::vector<CMatrix>& digital,
                        const PrecoderStack& aux) {
  double r = 0.0;
  for (int b = 0; b < aux.num_aps(); ++b)
    for (int u = 0; u < aux.num_users(); ++u)
      r += (aux.block(b, u) - analog[static_cast<std::size_t>(b)] *
                                  digital[static_cast<std::size_t>(b * aux.num_users() + u)])
               .squaredNorm();
  return r;
}

HybridPrecoder initial_hybrid(const SystemConfig& cfg, const PrecoderStack& aux) {
  HybridPrecoder hp;
  hp.num_users = cfg.num_users;
  hp.analog = init_analog(cfg, 0);
  hp.digital = init_digital(cfg, hp.analog, aux);
  return hp;
}

} // namespace

TEST_CASE("auxiliary initialization uses full power per AP", "[hybrid][init]") {
  const SystemConfig cfg = test::small_config(4);
  const auto ch = sample_channel(cfg, 0);
  const PrecoderStack f = init_auxiliary(cfg, ch);
  for (int b = 0; b < cfg.num_aps; ++b)
    CHECK_THAT(per_ap_power(b, f).mw(), WithinRel(1000.0, 1e-12));
  for (int b = 0; b < cfg.num_aps; ++b)
    for (int u = 0; u < cfg.num_users; ++u) {
      const CMatrix gram = f.block(b, u).adjoint() * f.block(b, u);
      CHECK(std::abs(gram(0, 1)) <= 1e-10 * gram.norm());
    }
}

TEST_CASE("rank-one channel initializes along its right singular vector", "[hybrid][init]") {
  SystemConfig cfg = test::small_config();
  cfg.num_aps = 1;
  cfg.num_users = 1;
  cfg.num_streams = 1;
  const CVector u = test::random_matrix(1, 2, 1).col(0).normalized();
  const CVector v = test::random_matrix(2, 4, 1).col(0).normalized();
  const ChannelRealization ch(1, 1, {CMatrix(3.0 * u * v.adjoint())});
  const PrecoderStack f = init_auxiliary(cfg, ch);
  CHECK_THAT(std::abs(v.dot(f.user(0).col(0))), WithinRel(f.user(0).norm(), 1e-10));
}

TEST_CASE("analog initialization", "[hybrid][init]") {
  const SystemConfig cfg = test::small_config(6);
  const auto a = init_analog(cfg, 3);
  const auto b = init_analog(cfg, 3);
  REQUIRE(a.size() == 2);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == b[i]);
    CHECK(a[i].rows() == cfg.num_tx());
    CHECK(a[i].cols() == cfg.num_rf_chains);
    CHECK(((a[i].array().abs() - 1.0).abs() <= 1e-12).all());
  }
  CHECK(init_analog(cfg, 4)[0] != a[0]);
}

TEST_CASE("analog phases are uniform on (-pi, pi]", "[hybrid][init][statistics]") {
  SystemConfig cfg = test::small_config(9);
  cfg.tx_grid = {16, 16};
  cfg.num_rf_chains = 256;
  std::vector<double> phases;
  for (const auto& m : init_analog(cfg, 0))
    for (Eigen::Index i = 0; i < m.size(); ++i)
      phases.push_back(std::arg(m.data()[i]));
  REQUIRE(phases.size() >= 100000);
  std::sort(phases.begin(), phases.end());
  const double n = static_cast<double>(phases.size());
  double d = 0.0;
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const double cdf = (phases[i] + std::numbers::pi) / (2.0 * std::numbers::pi);
    d = std::max({d, std::abs(cdf - i / n), std::abs((i + 1) / n - cdf)});
  }
  // Asymptotic Kolmogorov-Smirnov critical value at the 1% level.
  CHECK(d < 1.628 / std::sqrt(n));
}

TEST_CASE("digital initialization", "[hybrid][init]") {
  const SystemConfig cfg = test::small_config(7);
  const auto ch = sample_channel(cfg, 0);
  const PrecoderStack aux = init_auxiliary(cfg, ch);
  const auto analog = init_analog(cfg, 0);
  const auto digital = init_digital(cfg, analog, aux);
  HybridPrecoder hp{analog, digital, cfg.num_users};
  for (int b = 0; b < cfg.num_aps; ++b)
    CHECK_THAT(per_ap_power(b, hp).mw(), WithinRel(1000.0, 1e-12));
  for (const auto& d : digital) {
    CHECK(d.rows() == cfg.num_rf_chains);
    CHECK(d.cols() == cfg.num_streams);
  }

  // Auxiliary inside range(F_RF): the product reproduces it up to one scalar.
  SystemConfig narrow = cfg;
  narrow.num_rf_chains = 2;
  const auto rf = init_analog(narrow, 1);
  MatrixSet users;
  for (int u = 0; u < 2; ++u) {
    CMatrix f(8, 2);
    for (int b = 0; b < 2; ++b)
      f.middleRows(b * 4, 4) = rf[static_cast<std::size_t>(b)] * test::random_matrix(20 + 2 * u + b, 2, 2);
    users.push_back(f);
  }
  const PrecoderStack in_range(2, users);
  const HybridPrecoder fit{rf, init_digital(narrow, rf, in_range), 2};
  for (int b = 0; b < 2; ++b) {
    const double c = std::sqrt(1000.0 / per_ap_power(b, in_range).mw());
    for (int u = 0; u < 2; ++u)
      CHECK((fit.product(b, u) - c * in_range.block(b, u)).norm() <= 1e-8 * fit.product(b, u).norm());
  }
}

TEST_CASE("digital update is the least-squares fit", "[hybrid][digital]") {
  const SystemConfig cfg = test::small_config(8);
  const PrecoderStack aux = test::random_stack(30, 2, 4, 2, 2);
  SystemConfig narrow = cfg;
  narrow.num_rf_chains = 2;
  const auto analog = init_analog(narrow, 0);
  const auto digital = update_digital(analog, aux);
  const double best = stacked_residual(analog, digital, aux);
  auto rng = make_stream(31, StreamTag::kTest, 0);
  for (int k = 0; k < 20; ++k) {
    auto other = digital;
    for (auto& d : other)
      d += 0.05 * test::random_matrix(rng, d.rows(), d.cols());
    CHECK(stacked_residual(analog, other, aux) >= best);
  }

  // Square DFT analog matrix: exact reconstruction.
  const int n = 4;
  CMatrix dft(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      dft(i, j) = std::polar(1.0, -2.0 * std::numbers::pi * i * j / n);
  const auto exact = update_digital({dft, dft}, aux);
  CHECK(stacked_residual({dft, dft}, exact, aux) <= 1e-16 * aux.user(0).squaredNorm() * 1e4);
}

TEST_CASE("analog sweep never increases the fitting residual", "[hybrid][analog]") {
  const SystemConfig cfg = test::small_config(10);
  const PrecoderStack aux = test::random_stack(40, 2, 4, 2, 2);
  SystemConfig narrow = cfg;
  narrow.num_rf_chains = 3;
  const auto analog = init_analog(narrow, 0);
  const auto digital = update_digital(analog, aux);

  std::vector<double> per_ap(2, 0.0);
  for (int b = 0; b < 2; ++b)
    for (int u = 0; u < 2; ++u)
      per_ap[static_cast<std::size_t>(b)] +=
          (aux.block(b, u) - analog[static_cast<std::size_t>(b)] * digital[static_cast<std::size_t>(b * 2 + u)])
              .squaredNorm();
  int calls = 0;
  bool monotone = true;
  const auto updated = update_analog(analog, digital, aux, [&](int b, int, int, double r) {
    auto& last = per_ap[static_cast<std::size_t>(b)];
    monotone = monotone && r <= last * (1.0 + 1e-12) + 1e-14;
    last = r;
    ++calls;
  });
  CHECK(monotone);
  CHECK(calls == 2 * 4 * 3);
  for (const auto& m : updated)
    CHECK(((m.array().abs() - 1.0).abs() <= 1e-12).all());
}

TEST_CASE("scalar analog update aligns the phase", "[hybrid][analog]") {
  const Complex target(0.3, -1.2), bb(0.5, 0.8);
  const PrecoderStack aux(1, {test::scalar(target.real(), target.imag())});
  const auto out = update_analog({test::scalar(1.0)}, {test::scalar(bb.real(), bb.imag())}, aux);
  CHECK(std::abs(out[0](0, 0) - std::polar(1.0, std::arg(std::conj(bb) * target))) < 1e-14);
}

TEST_CASE("zero alignment coefficient keeps the previous phase", "[hybrid][analog]") {
  const PrecoderStack aux(1, {CMatrix::Ones(2, 1)});
  const CMatrix rf = init_analog(test::small_config(), 0)[0].topLeftCorner(2, 2);
  const auto out = update_analog({rf}, {CMatrix::Zero(2, 1)}, aux);
  CHECK(out[0] == rf);
}

TEST_CASE("finalize rescales only overloaded APs", "[hybrid][finalize]") {
  HybridPrecoder hp;
  hp.num_users = 1;
  hp.analog = {CMatrix::Ones(4, 1), CMatrix::Ones(4, 1)};
  hp.digital = {test::scalar(1.0), test::scalar(2.0)};  // powers 4 and 16
  const HybridPrecoder out = finalize(hp, {10.0, 4.0});
  CHECK(out.digital[0] == hp.digital[0]);
  CHECK_THAT(out.digital[1](0, 0).real(), WithinAbs(1.0, 1e-15));
  CHECK_THAT(per_ap_power(1, out).mw(), WithinRel(4.0, 1e-14));
  CHECK(out.analog == hp.analog);
}

TEST_CASE("auxiliary update respects the budget and does not lower the objective", "[hybrid][auxiliary]") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SystemConfig cfg = test::small_config(seed);
    const auto ch = sample_channel(cfg, 0);
    const MatrixSet h = ch.aggregated();
    const PrecoderStack aux = init_auxiliary(cfg, ch);
    const HybridPrecoder hp = initial_hybrid(cfg, aux);
    const MatrixSet g = update_combiners(aux, h, 1.0);
    const MatrixSet w = update_weights(g, aux, h, 1.0);
    const auto penalties = cfg.penalties();
    const auto limits = cfg.power_limits_mw();
    const double before = wmmse_objective(g, w, aux, hp, h, 1.0, penalties, cfg.weights());
    SubproblemData data = build_subproblem(g, w, aux, h, cfg.weights(), QuadraticModel::kAllUsers);
    const auto upd = update_auxiliary(data, aux, hp, penalties, limits, 1e-6, true);
    for (int b = 0; b < 2; ++b)
      CHECK(per_ap_power(b, upd.stack).mw() <= 1000.0 * (1.0 + 1e-9));
    const double after = wmmse_objective(g, w, upd.stack, hp, h, 1.0, penalties, cfg.weights());
    CHECK(after >= before - 1e-8 * std::abs(before));
  }
}

TEST_CASE("hybrid BCD run", "[hybrid][run]") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    SystemConfig cfg = test::small_config(seed);
    cfg.max_iters = 60;
    const auto res = run_hybrid(cfg, sample_channel(cfg, 0));
    REQUIRE(res.trace.size() <= static_cast<std::size_t>(cfg.max_iters) + 1);
    CHECK(res.trace.front().iteration == 0);
    for (std::size_t i = 1; i < res.trace.size(); ++i)
      CHECK(res.trace[i].objective >= res.trace[i - 1].objective - 1e-8 * std::abs(res.trace[i - 1].objective));
    const double last_step = res.trace.back().objective - res.trace[res.trace.size() - 2].objective;
    CHECK((std::abs(last_step) < cfg.convergence_tol) == res.converged);
    CHECK((res.converged || res.iterations == cfg.max_iters));
    for (int b = 0; b < cfg.num_aps; ++b)
      CHECK(per_ap_power(b, res.precoder).mw() <= 1000.0 * (1.0 + 1e-9));
    for (const auto& m : res.precoder.analog)
      CHECK(((m.array().abs() - 1.0).abs() <= 1e-12).all());
    CHECK(res.wsr > 0.0);
  }
}

TEST_CASE("auxiliary update time grows roughly cubically in N_t", "[hybrid][timing]") {
  std::vector<double> logn, logt;
  for (Grid g : {Grid{8, 8}, Grid{16, 8}, Grid{16, 16}}) {
    SystemConfig cfg;
    cfg.tx_grid = g;
    const auto ch = sample_channel(cfg, 0);
    const MatrixSet h = ch.aggregated();
    const PrecoderStack aux = init_auxiliary(cfg, ch);
    const HybridPrecoder hp = initial_hybrid(cfg, aux);
    const MatrixSet gc = update_combiners(aux, h, 1.0);
    const MatrixSet w = update_weights(gc, aux, h, 1.0);
    double best = 1e300;
    for (int rep = 0; rep < 3; ++rep) {
      const auto t0 = std::chrono::steady_clock::now();
      SubproblemData data = build_subproblem(gc, w, aux, h, cfg.weights(), QuadraticModel::kAllUsers);
      const auto upd = update_auxiliary(data, aux, hp, cfg.penalties(), cfg.power_limits_mw(), 1e-6, true);
      best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      REQUIRE(upd.stack.num_users() == 4);
    }
    logn.push_back(std::log(static_cast<double>(g.size())));
    logt.push_back(std::log(best));
  }
  const double mx = (logn[0] + logn[1] + logn[2]) / 3.0;
  const double my = (logt[0] + logt[1] + logt[2]) / 3.0;
  double sxy = 0.0, sxx = 0.0;
  for (int i = 0; i < 3; ++i) {
    sxy += (logn[i] - mx) * (logt[i] - my);
    sxx += (logn[i] - mx) * (logn[i] - mx);
  }
  const double slope = sxy / sxx;
  INFO("log-log slope " << slope);
  CHECK(slope >= 2.5);
  CHECK(slope <= 3.5);
}
