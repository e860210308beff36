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
#include "bdris/config.hpp"
#include "bdris/precoding.hpp"

namespace bdris
{
    enum class RelayMode
    {
        Zf,
        Mrt,
    };

    /// Noiseless full-duplex amplify-and-forward relay with N antennas on each side.
    struct RelayConfig
    {
        double P_relay = dbm_to_mw(36.0);
        RelayMode mode = RelayMode::Zf;
    };

    /// Relay processing before power scaling: G^+ (zf) or G^H (mrt).
    CMatrix relay_direction(const ChannelSet &cs, RelayMode mode);

    /// Relay matrix F scaled so that Tr(F W P P^H W^H F^H) = P_relay.
    CMatrix nmimo_relay_matrix(const ChannelSet &cs, const RelayConfig &rc, const Precoder &precoder);

    /// Sum rate with F in place of the scattering matrix, for a given BS precoder.
    double nmimo_sum_rate(const ChannelSet &cs, const RelayConfig &rc, const Precoder &precoder, double N0);

    /// BS precoder the relay benchmark is paired with: uniform power for the zf relay,
    /// ZF precoding on H F W for the mrt relay.
    Precoder nmimo_bs_precoder(const ChannelSet &cs, RelayMode mode, double P_max);
} // namespace bdris
