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

#include <cmath>
#include <cstdint>
#include <vector>

namespace bdris
{
    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
    inline double dbm_to_mw(double dbm) { return db_to_linear(dbm); }
    inline double mw_to_dbm(double mw) { return linear_to_db(mw); }

    /// System parameters of one experiment point. Powers are linear milliwatts,
    /// gains linear, distances meters. Defaults follow the reference simulation setup:
    /// C0 = -30 dB, d0 = 1 m, exponent 2.2, N0 = -80 dBm, BS-RIS 50 m, RIS-user 2.5 m.
    struct SystemConfig
    {
        int K = 5;                        // users, equal to BS antennas
        int N = 64;                       // RIS elements
        double P_max = 10.0;              // mW (10 dBm)
        double N0 = 1e-8;                 // mW (-80 dBm)
        double C0 = 1e-3;                 // reference pathloss (-30 dB)
        double d0 = 1.0;                  // m
        double rho = 2.2;                 // pathloss exponent
        double d_bs_ris = 50.0;           // m
        double d_ris_user = 2.5;          // m, common to all users
        std::vector<double> user_distances; // optional per-user override, size K
        bool large_scale_fading = true;   // false: unit-variance Rayleigh entries
        double eps_rel = 1e-6;            // relative-change tolerance of the nulling AO
        double eps_null = 1e-6;           // nulling-norm tolerance of the nulling AO
        int max_iter = 100;               // AO iteration cap
        std::uint64_t seed = 1;

        /// Distance of user k (0-based) to the RIS.
        double user_distance(int k) const
        {
            return user_distances.empty() ? d_ris_user : user_distances.at(static_cast<std::size_t>(k));
        }

        /// Throws ConfigError naming the first violated invariant.
        void validate() const;
    };
} // namespace bdris
