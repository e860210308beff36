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

#include <string>

#include "bdris/types.hpp"

namespace bdris::detail
{
    // Inverse of a square matrix; SingularityError when sigma_min / sigma_max falls below 1e-13.
    // PartialPivLU::rcond() is not used: it reports 1 for exactly singular input.
    inline CMatrix checked_inverse(const CMatrix &m, const std::string &what)
    {
        require_square(m, what.c_str());
        const Eigen::VectorXd sv = Eigen::JacobiSVD<CMatrix>(m).singularValues();
        const double rcond = sv.size() ? sv(sv.size() - 1) / sv(0) : 0.0;
        if (!(rcond > 1e-13))
            throw SingularityError(what + ": matrix is singular (rcond " + std::to_string(rcond) + ")");
        return m.partialPivLu().inverse();
    }

    // G^+ = H^H (H H^H)^-1 (W^H W)^-1 W^H for the cascaded channel G = W H.
    inline CMatrix cascaded_pinv(const CMatrix &H, const CMatrix &W, const std::string &what)
    {
        const CMatrix hh = H * H.adjoint();
        const CMatrix ww = W.adjoint() * W;
        return H.adjoint() * checked_inverse(hh, what + " (H H^H)") * checked_inverse(ww, what + " (W^H W)") *
               W.adjoint();
    }
} // namespace bdris::detail
