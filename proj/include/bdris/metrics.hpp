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
#include "bdris/precoding.hpp"
#include "bdris/types.hpp"

namespace bdris
{
    /// gamma_k = |[E P]_kk|^2 / (sum_{i != k} |[E P]_ki|^2 + N0).
    RVector sinr_per_user(const CMatrix &E, const CMatrix &P, double N0);
    RVector sinr_per_user(const ChannelSet &cs, const CMatrix &theta, const Precoder &precoder, double N0);

    /// sum_k log2(1 + gamma_k).
    double sum_rate(const RVector &sinr);

    struct PowerDecomposition
    {
        double signal_power_sum = 0.0;       // sum_k p_k |E_kk|^2
        double interference_power_sum = 0.0; // sum_k sum_{i != k} p_i |E_ki|^2
        double frob_power = 0.0;             // ||E||_F^2
    };

    PowerDecomposition power_decomposition(const CMatrix &E, const RVector &p);
    PowerDecomposition power_decomposition(const ChannelSet &cs, const CMatrix &theta, const RVector &p);

    /// ||A_bar^T vec(Theta)||^2, the off-diagonal energy of E.
    double nulling_residual(const ChannelSet &cs, const CMatrix &theta);

    struct PerformanceReport
    {
        RVector sinr;
        double sum_rate = 0.0;
        PowerDecomposition powers;
        double null_residual = 0.0;
    };

    PerformanceReport evaluate(const ChannelSet &cs, const CMatrix &theta, const Precoder &precoder, double N0);
} // namespace bdris
