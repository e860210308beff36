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

#include "bdris/metrics.hpp"

#include <cmath>

namespace bdris
{
    RVector sinr_per_user(const CMatrix &E, const CMatrix &P, double N0)
    {
        if (E.cols() != P.rows() || P.cols() != E.rows())
            throw DimensionError("sinr_per_user: E and P do not fit");
        const CMatrix M = E * P;
        const Eigen::Index K = M.rows();
        RVector sinr(K);
        for (Eigen::Index k = 0; k < K; ++k)
        {
            double interference = 0.0;
            for (Eigen::Index i = 0; i < K; ++i)
                if (i != k)
                    interference += std::norm(M(k, i));
            sinr(k) = std::norm(M(k, k)) / (interference + N0);
        }
        return sinr;
    }

    RVector sinr_per_user(const ChannelSet &cs, const CMatrix &theta, const Precoder &precoder, double N0)
    {
        return sinr_per_user(equivalent_channel(cs, theta), precoder.P, N0);
    }

    double sum_rate(const RVector &sinr)
    {
        double rate = 0.0;
        for (Eigen::Index k = 0; k < sinr.size(); ++k)
            rate += std::log1p(sinr(k));
        return rate / std::log(2.0);
    }

    PowerDecomposition power_decomposition(const CMatrix &E, const RVector &p)
    {
        require_square(E, "power_decomposition");
        if (p.size() != E.cols())
            throw DimensionError("power_decomposition: p must have K entries");
        PowerDecomposition out;
        const RMatrix g2 = E.cwiseAbs2();
        for (Eigen::Index k = 0; k < g2.rows(); ++k)
            for (Eigen::Index i = 0; i < g2.cols(); ++i)
                (i == k ? out.signal_power_sum : out.interference_power_sum) += p(i) * g2(k, i);
        out.frob_power = g2.sum();
        return out;
    }

    PowerDecomposition power_decomposition(const ChannelSet &cs, const CMatrix &theta, const RVector &p)
    {
        return power_decomposition(equivalent_channel(cs, theta), p);
    }

    double nulling_residual(const ChannelSet &cs, const CMatrix &theta)
    {
        if (theta.rows() != cs.N() || theta.cols() != cs.N())
            throw DimensionError("nulling_residual: Theta must be N x N");
        if (cs.A_bar().cols() == 0)
            return 0.0;
        return (cs.A_bar().transpose() * vec(theta)).squaredNorm();
    }

    PerformanceReport evaluate(const ChannelSet &cs, const CMatrix &theta, const Precoder &precoder, double N0)
    {
        const CMatrix E = equivalent_channel(cs, theta);
        PerformanceReport r;
        r.sinr = sinr_per_user(E, precoder.P, N0);
        r.sum_rate = sum_rate(r.sinr);
        r.powers = power_decomposition(E, precoder.powers());
        r.null_residual = nulling_residual(cs, theta);
        return r;
    }
} // namespace bdris
