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

#include "bdris/channel.hpp"

#include <cmath>
#include <string>

namespace bdris
{
    Rng make_stream(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream)
    {
        auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
        auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
        std::seed_seq seq{lo(seed), hi(seed), lo(trial), hi(trial), lo(stream), hi(stream), 0x62647269u};
        return Rng(seq);
    }

    double pathloss(double d, const SystemConfig &cfg)
    {
        if (!(d > 0.0))
            throw DomainError("pathloss: distance must be positive, got " + std::to_string(d));
        return cfg.C0 * std::pow(d / cfg.d0, -cfg.rho);
    }

    CMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, double variance, Rng &rng)
    {
        std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
        CMatrix m(rows, cols);
        // Column-major fill order fixes the stream layout.
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i)
            {
                const double re = normal(rng);
                const double im = normal(rng);
                m(i, j) = cplx(re, im);
            }
        return m;
    }

    ChannelSet::ChannelSet(CMatrix H, CMatrix W, double residual_scale)
        : H_(std::move(H)), W_(std::move(W)), residual_scale_(residual_scale)
    {
        const Eigen::Index K = H_.rows();
        const Eigen::Index N = H_.cols();
        if (W_.rows() != N || W_.cols() != K)
            throw DimensionError("ChannelSet: W must be N x K with H K x N");
        if (!(residual_scale_ > 0.0))
            throw DomainError("ChannelSet: residual scale must be positive");

        G_ = W_ * H_;

        // A = W^T (x) H, so A(j K + r, c N + s) = W(c, j) H(r, s).
        A_.resize(K * K, N * N);
        for (Eigen::Index j = 0; j < K; ++j)
            for (Eigen::Index c = 0; c < N; ++c)
                A_.block(j * K, c * N, K, N) = W_(c, j) * H_;

        A_bar_.resize(N * N, K * (K - 1));
        A_check_.resize(N * N, K);
        Eigen::Index col = 0;
        for (Eigen::Index k = 0; k < K; ++k)
        {
            for (Eigen::Index r = 0; r < K; ++r)
            {
                if (r == k)
                    continue;
                A_bar_.col(col++) = A_.row(a_row(static_cast<int>(r), static_cast<int>(k), static_cast<int>(K))).transpose();
            }
            A_check_.col(k) = A_.row(a_row(static_cast<int>(k), static_cast<int>(k), static_cast<int>(K))).transpose();
        }
    }

    ChannelSet draw_channel_set(const SystemConfig &cfg, Rng &rng)
    {
        cfg.validate();
        const double gain_w = cfg.large_scale_fading ? pathloss(cfg.d_bs_ris, cfg) : 1.0;
        CMatrix W = complex_gaussian(cfg.N, cfg.K, gain_w, rng);
        CMatrix H = complex_gaussian(cfg.K, cfg.N, 1.0, rng);

        double mean_gain_h = 1.0;
        if (cfg.large_scale_fading)
        {
            mean_gain_h = 0.0;
            for (int k = 0; k < cfg.K; ++k)
            {
                const double g = pathloss(cfg.user_distance(k), cfg);
                H.row(k) *= std::sqrt(g);
                mean_gain_h += g / cfg.K;
            }
        }
        return ChannelSet(std::move(H), std::move(W), gain_w * mean_gain_h);
    }

    CMatrix equivalent_channel(const ChannelSet &cs, const CMatrix &theta)
    {
        if (theta.rows() != cs.N() || theta.cols() != cs.N())
            throw DimensionError("equivalent_channel: Theta must be N x N");
        return cs.H() * theta * cs.W();
    }

    CMatrix equivalent_channel_kron(const ChannelSet &cs, const CMatrix &theta)
    {
        if (theta.rows() != cs.N() || theta.cols() != cs.N())
            throw DimensionError("equivalent_channel_kron: Theta must be N x N");
        return reshape(cs.A() * vec(theta), cs.K(), cs.K());
    }
} // namespace bdris
