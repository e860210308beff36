// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The bdris-sim Authors
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

#include "doctest.h"

#include <cmath>

#include "bdris/metrics.hpp"
#include "bdris/relay.hpp"
#include "test_util.hpp"

using namespace bdris;

TEST_CASE("relay config defaults")
{
    const RelayConfig rc;
    CHECK(rc.P_relay == doctest::Approx(std::pow(10.0, 3.6)).epsilon(1e-12));
    CHECK(rc.mode == RelayMode::Zf);
}

TEST_CASE("nmimo_relay_matrix")
{
    SUBCASE("identity channels")
    {
        const CMatrix I = CMatrix::Identity(3, 3);
        const ChannelSet cs(I, I);
        const double P_max = 2.0;
        for (RelayMode mode : {RelayMode::Zf, RelayMode::Mrt})
        {
            const RelayConfig rc{100.0, mode};
            const CMatrix F = nmimo_relay_matrix(cs, rc, uniform_power(3, P_max));
            CHECK(test::rel_err(F, std::sqrt(100.0 / P_max) * I) < 1e-14);
        }
    }

    SUBCASE("zf direction inverts the cascade")
    {
        Rng g = test::rng(60);
        for (int t = 0; t < 20; ++t)
        {
            const int K = 1 + t % 4;
            const ChannelSet cs = test::unit_channels(K, K + t % 5, g);
            const CMatrix D = relay_direction(cs, RelayMode::Zf);
            CHECK((cs.H() * D * cs.W() - CMatrix::Identity(K, K)).norm() < 1e-8);
            CHECK(test::rel_err(relay_direction(cs, RelayMode::Mrt), cs.G().adjoint()) == 0.0);
        }
    }

    SUBCASE("output power meets the budget")
    {
        Rng g = test::rng(61);
        for (int t = 0; t < 50; ++t)
        {
            const int K = 2 + t % 4;
            SystemConfig cfg;
            cfg.K = K;
            cfg.N = 2 * K + t % 7;
            const ChannelSet cs = draw_channel_set(cfg, g);
            const RelayConfig rc{RelayConfig{}.P_relay, t % 2 ? RelayMode::Mrt : RelayMode::Zf};
            const Precoder pre = nmimo_bs_precoder(cs, rc.mode, 10.0);
            const CMatrix F = nmimo_relay_matrix(cs, rc, pre);
            const CMatrix out = F * cs.W() * pre.P;
            const double power = (out * out.adjoint()).trace().real();
            CHECK(power == doctest::Approx(rc.P_relay).epsilon(1e-9));
        }
    }

    SUBCASE("rank-deficient cascade in zf mode")
    {
        Rng g = test::rng(62);
        CMatrix H = test::randn(2, 4, g);
        H.row(1) = H.row(0);
        const ChannelSet cs(H, test::randn(4, 2, g));
        CHECK_THROWS_AS(nmimo_relay_matrix(cs, RelayConfig{}, uniform_power(2, 1.0)), SingularityError);
    }

    CHECK_THROWS_AS(nmimo_relay_matrix(ChannelSet(CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)),
                                       RelayConfig{0.0, RelayMode::Zf}, uniform_power(2, 1.0)),
                    DomainError);
}

TEST_CASE("nmimo_sum_rate")
{
    Rng g = test::rng(63);

    SUBCASE("zf relay is interference free")
    {
        for (int t = 0; t < 20; ++t)
        {
            const int K = 2 + t % 4;
            const ChannelSet cs = test::unit_channels(K, K + 3, g);
            const Precoder pre = nmimo_bs_precoder(cs, RelayMode::Zf, 1.0);
            const CMatrix F = nmimo_relay_matrix(cs, RelayConfig{50.0, RelayMode::Zf}, pre);
            const CMatrix M = equivalent_channel(cs, F) * pre.P;
            const double signal = M.diagonal().squaredNorm();
            CHECK(M.squaredNorm() - signal < 1e-9 * signal);
        }
    }

    SUBCASE("doubling the relay budget raises every zf SINR")
    {
        for (int t = 0; t < 20; ++t)
        {
            const int K = 2 + t % 3;
            const ChannelSet cs = test::unit_channels(K, 2 * K, g);
            const Precoder pre = nmimo_bs_precoder(cs, RelayMode::Zf, 1.0);
            const RVector lo = sinr_per_user(cs, nmimo_relay_matrix(cs, {10.0, RelayMode::Zf}, pre), pre, 0.1);
            const RVector hi = sinr_per_user(cs, nmimo_relay_matrix(cs, {20.0, RelayMode::Zf}, pre), pre, 0.1);
            CHECK((hi.array() > lo.array()).all());
        }
    }

    SUBCASE("matches the SINR of the substituted matrix")
    {
        const ChannelSet cs = test::unit_channels(2, 4, g);
        for (RelayMode mode : {RelayMode::Zf, RelayMode::Mrt})
        {
            const RelayConfig rc{30.0, mode};
            const Precoder pre = nmimo_bs_precoder(cs, mode, 2.0);
            const CMatrix F = nmimo_relay_matrix(cs, rc, pre);
            const double expected = sum_rate(sinr_per_user(cs.H() * F * cs.W(), pre.P, 0.05));
            CHECK(nmimo_sum_rate(cs, rc, pre, 0.05) == doctest::Approx(expected).epsilon(1e-12));
        }
    }

    SUBCASE("BS pairing")
    {
        const ChannelSet cs = test::unit_channels(3, 6, g);
        const Precoder up = nmimo_bs_precoder(cs, RelayMode::Zf, 3.0);
        CHECK(up.kind == PrecoderKind::DiagonalPower);
        CHECK(test::rel_err(up.P, CMatrix::Identity(3, 3)) < 1e-15);
        // MRT relay is followed by BS ZF on the relayed channel.
        const Precoder zf = nmimo_bs_precoder(cs, RelayMode::Mrt, 3.0);
        const CMatrix M = equivalent_channel(cs, cs.G().adjoint()) * zf.P;
        CHECK(M.squaredNorm() - M.diagonal().squaredNorm() < 1e-18 * M.squaredNorm());
        CHECK(zf.P.squaredNorm() == doctest::Approx(3.0).epsilon(1e-12));
    }
}

TEST_CASE("fixed relay budget flattens the rate in P_max")
{
    // The relay output is pinned by P_relay, so P_max stops mattering, while a nulling
    // link keeps gaining K log2(10^0.5) per 5 dB.
    SystemConfig cfg;
    cfg.K = 4;
    cfg.N = 20;
    const RelayConfig rc;
    double slope_hi = 0.0;
    const int trials = 20;
    for (int t = 0; t < trials; ++t)
    {
        Rng g = make_stream(3, t, 0);
        const ChannelSet cs = draw_channel_set(cfg, g);
        auto rate = [&](double dbm) {
            const Precoder pre = nmimo_bs_precoder(cs, RelayMode::Zf, dbm_to_mw(dbm));
            return nmimo_sum_rate(cs, rc, pre, cfg.N0);
        };
        slope_hi += rate(45.0) - rate(40.0);
    }
    const double null_slope = cfg.K * std::log2(std::pow(10.0, 0.5));
    CHECK(std::abs(slope_hi) / trials < 0.05 * null_slope);
}
