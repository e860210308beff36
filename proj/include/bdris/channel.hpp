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

#pragma once

#include <cstdint>
#include <random>

#include "bdris/config.hpp"
#include "bdris/types.hpp"

namespace bdris
{
    using Rng = std::mt19937_64;

    /// Independent generator for one Monte-Carlo work item. Streams for different
    /// (seed, trial, stream) triples do not depend on evaluation order.
    Rng make_stream(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream = 0);

    /// Large-scale gain C0 (d/d0)^-rho. Throws DomainError for d <= 0.
    double pathloss(double d, const SystemConfig &cfg);

    /// Matrix with i.i.d. CN(0, variance) entries.
    CMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, double variance, Rng &rng);

    /// One fading realization and every matrix derived from it.
    ///
    /// H (K x N) holds the RIS-to-user rows h_k^T, W (N x K) the BS-to-RIS channel.
    /// G = W H is the N x N cascaded channel and A = W^T (x) H the K^2 x N^2 map with
    /// vec(H Theta W) = A vec(Theta). A_bar collects, as columns, the rows of A that feed
    /// off-diagonal entries of E (grouped by transmit antenna, receiving user ascending);
    /// A_check collects the rows feeding the diagonal.
    class ChannelSet
    {
    public:
        ChannelSet(CMatrix H, CMatrix W, double residual_scale = 1.0);

        int K() const { return static_cast<int>(H_.rows()); }
        int N() const { return static_cast<int>(H_.cols()); }

        const CMatrix &H() const { return H_; }
        const CMatrix &W() const { return W_; }
        const CMatrix &G() const { return G_; }
        const CMatrix &A() const { return A_; }
        const CMatrix &A_bar() const { return A_bar_; }
        const CMatrix &A_check() const { return A_check_; }

        /// Product of the BS-RIS and mean RIS-user large-scale gains. Nulling residuals
        /// divided by this are comparable across geometries (1 for unit-variance channels).
        double residual_scale() const { return residual_scale_; }

        /// Row of A holding E(row, col).
        static Eigen::Index a_row(int row, int col, int K) { return static_cast<Eigen::Index>(col) * K + row; }

    private:
        CMatrix H_, W_, G_, A_, A_bar_, A_check_;
        double residual_scale_;
    };

    ChannelSet draw_channel_set(const SystemConfig &cfg, Rng &rng);

    /// E = H Theta W.
    CMatrix equivalent_channel(const ChannelSet &cs, const CMatrix &theta);

    /// E from reshape(A vec(Theta)); the cross-check path for equivalent_channel.
    CMatrix equivalent_channel_kron(const ChannelSet &cs, const CMatrix &theta);
} // namespace bdris
