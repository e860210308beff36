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

#include "bdris/channel.hpp"
#include "bdris/types.hpp"

namespace bdris
{
    enum class PrecoderKind
    {
        Full,
        DiagonalPower,
    };

    /// K x K BS precoder with ||P||_F^2 equal to the budget.
    struct Precoder
    {
        CMatrix P;
        PrecoderKind kind = PrecoderKind::Full;
        double budget = 0.0;

        /// Per-stream powers p_k (diagonal-power kind) or column powers ||p_k||^2.
        RVector powers() const { return P.colwise().squaredNorm().transpose(); }
    };

    Precoder diagonal_power(const RVector &p, double P_max);

    /// P = E^+ sqrt(P_max / Tr(E^+H E^+)). Throws SingularityError for singular E.
    Precoder zf_precoder(const CMatrix &E, double P_max);

    /// P = E^H sqrt(P_max / Tr(E^H E)). Throws DegenerateError for E = 0.
    Precoder mrt_precoder(const CMatrix &E, double P_max);

    Precoder uniform_power(int K, double P_max);

    /// p_k = (1/alpha - N0/g_k)^+ with alpha found by bisection. Users with g_k = 0 get no
    /// power. Throws DegenerateError when every gain is zero.
    Precoder water_filling(const RVector &gains, double P_max, double N0);

    /// Sum rate of diagonal powers p against |E|^2 (gain2(k, i) = |E_ki|^2).
    double power_sumrate(const RVector &p, const RMatrix &gain2, double N0);

    struct PowerOptimization
    {
        Precoder precoder;
        double objective = 0.0;  // bits/s/Hz
        bool converged = false;
        int iterations = 0;      // over all starts
    };

    /// Sum-rate maximizing diagonal powers for a fixed equivalent channel: projected
    /// gradient ascent on {p >= 0, sum p = P_max} with Armijo backtracking, multi-started
    /// from uniform, water-filling on the diagonal gains and every vertex. Stops when the
    /// projected-gradient step is below tol (power units) or after max_iter iterations per
    /// start; the best start wins.
    PowerOptimization optimize_power_sumrate(const CMatrix &E, double P_max, double N0, double tol = -1.0,
                                             int max_iter = 10000);
    PowerOptimization optimize_power_sumrate(const ChannelSet &cs, const CMatrix &theta, double P_max, double N0,
                                             double tol = -1.0);
} // namespace bdris
