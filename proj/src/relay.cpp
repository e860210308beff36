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

#include "bdris/relay.hpp"

#include <cmath>

#include "bdris/metrics.hpp"
#include "linalg.hpp"

namespace bdris
{
    CMatrix relay_direction(const ChannelSet &cs, RelayMode mode)
    {
        if (mode == RelayMode::Zf)
            return detail::cascaded_pinv(cs.H(), cs.W(), "nmimo_relay_matrix");
        return cs.G().adjoint();
    }

    namespace
    {
        CMatrix scale_to_budget(const CMatrix &direction, const ChannelSet &cs, const RelayConfig &rc,
                                const Precoder &precoder)
        {
            if (!(rc.P_relay > 0.0))
                throw DomainError("nmimo_relay_matrix: relay budget must be positive");
            // Relay output F W P s with E[s s^H] = I has power ||F W P||_F^2.
            const double power = (direction * cs.W() * precoder.P).squaredNorm();
            if (!(power > 0.0))
                throw DegenerateError("nmimo_relay_matrix: relay input carries no power");
            return direction * std::sqrt(rc.P_relay / power);
        }
    } // namespace

    CMatrix nmimo_relay_matrix(const ChannelSet &cs, const RelayConfig &rc, const Precoder &precoder)
    {
        return scale_to_budget(relay_direction(cs, rc.mode), cs, rc, precoder);
    }

    double nmimo_sum_rate(const ChannelSet &cs, const RelayConfig &rc, const Precoder &precoder, double N0)
    {
        const CMatrix F = nmimo_relay_matrix(cs, rc, precoder);
        return sum_rate(sinr_per_user(cs, F, precoder, N0));
    }

    Precoder nmimo_bs_precoder(const ChannelSet &cs, RelayMode mode, double P_max)
    {
        if (mode == RelayMode::Zf)
            return uniform_power(cs.K(), P_max);
        // ZF is invariant to the relay gain, so the unscaled direction suffices.
        return zf_precoder(equivalent_channel(cs, relay_direction(cs, mode)), P_max);
    }
} // namespace bdris
