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

#include "bdris/config.hpp"

#include <string>

#include "bdris/types.hpp"

namespace bdris
{
    namespace
    {
        void check(bool ok, const std::string &msg)
        {
            if (!ok)
                throw ConfigError(msg);
        }
    } // namespace

    void SystemConfig::validate() const
    {
        check(K >= 1, "K must be >= 1");
        check(N >= 1, "N must be >= 1");
        check(P_max > 0.0, "P_max must be > 0");
        check(N0 > 0.0, "N0 must be > 0");
        check(C0 > 0.0, "C0 must be > 0");
        check(d0 > 0.0, "d0 must be > 0");
        check(rho > 0.0, "rho must be > 0");
        check(d_bs_ris > 0.0, "d_bs_ris must be > 0");
        check(d_ris_user > 0.0, "d_ris_user must be > 0");
        check(user_distances.empty() || user_distances.size() == static_cast<std::size_t>(K),
              "user_distances must have K entries");
        for (double d : user_distances)
            check(d > 0.0, "user distances must be > 0");
        check(eps_rel > 0.0, "eps_rel must be > 0");
        check(eps_null > 0.0, "eps_null must be > 0");
        check(max_iter >= 1, "max_iter must be >= 1");
    }
} // namespace bdris
