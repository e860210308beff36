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

#include <optional>
#include <string_view>
#include <vector>

#include "bdris/channel.hpp"
#include "bdris/config.hpp"
#include "bdris/types.hpp"

namespace bdris
{
    /// N x N scattering matrix together with its constraint residuals. The residuals are
    /// computed from the stored matrix at construction, so they can never go stale.
    class ScatteringMatrix
    {
    public:
        explicit ScatteringMatrix(CMatrix theta);
        /// Also records the nulling residual ||A_bar^T vec(Theta)||^2 against cs.
        ScatteringMatrix(CMatrix theta, const ChannelSet &cs);

        const CMatrix &theta() const { return theta_; }
        int N() const { return static_cast<int>(theta_.rows()); }

        double sym_residual() const { return sym_residual_; }  // ||Theta - Theta^T||_F
        double uni_residual() const { return uni_residual_; }  // ||Theta Theta^H - I||_F
        std::optional<double> null_residual() const { return null_residual_; }

        bool feasible(double tol = 1e-10) const { return sym_residual_ == 0.0 && uni_residual_ <= tol; }

    private:
        CMatrix theta_;
        double sym_residual_;
        double uni_residual_;
        std::optional<double> null_residual_;
    };

    // ----- Projections -------------------------------------------------------

    /// 0.5 (Theta + Theta^T).
    CMatrix project_symmetric(const CMatrix &theta);

    /// Nearest unitary matrix U V^H. Throws DegenerateError for an all-zero input.
    CMatrix project_unitary(const CMatrix &theta);

    /// Nearest symmetric unitary matrix: symmetrize, then U_hat V^H with
    /// U_hat = [U_R, conj(V_{N-R})] where R counts singular values above N * 1e-12 * sigma_1.
    /// Throws DegenerateError when the symmetrized input is zero.
    CMatrix symmetric_unitary(const CMatrix &theta);
    ScatteringMatrix project_symmetric_unitary(const CMatrix &theta);

    /// Nearest diagonal unit-modulus matrix (zero diagonal entries map to phase 0).
    CMatrix project_diagonal_phase(const CMatrix &theta);

    /// Orthogonal projection of vec(Theta) onto the null space of A_bar^T. The Gram matrix
    /// A_bar^T conj(A_bar) is factored once per channel set.
    class NullingProjector
    {
    public:
        explicit NullingProjector(const ChannelSet &cs);

        CMatrix operator()(const CMatrix &theta) const;

        /// ||A_bar^T vec(Theta)||^2.
        double residual(const CMatrix &theta) const;

    private:
        const ChannelSet *cs_;
        Eigen::LLT<CMatrix> gram_;
    };

    /// One-shot form of NullingProjector. Throws SingularityError for rank-deficient A_bar.
    CMatrix project_nulling(const CMatrix &theta, const ChannelSet &cs);

    // ----- Closed-form designs -----------------------------------------------

    /// Relaxed passive MRT, G^H sqrt(N / Tr(G G^H)).
    CMatrix mrt_relaxed(const ChannelSet &cs);
    ScatteringMatrix mrt_scattering(const ChannelSet &cs);

    /// Relaxed passive ZF, G^+ sqrt(N / Tr(G^+H G^+)) with
    /// G^+ = H^H (H H^H)^-1 (W^H W)^-1 W^H.
    CMatrix zf_relaxed_scattering(const ChannelSet &cs);

    /// Smallest N for which the symmetric matrix has at least as many real unknowns
    /// as the 2K(K-1) real nulling equations.
    int min_elements_for_nulling(int K);

    /// sqrt(N) times the dominant eigenvector of A^H A, reshaped N x N.
    CMatrix maxF_relaxed(const ChannelSet &cs);
    ScatteringMatrix maxF_scattering(const ChannelSet &cs);

    /// Rank-one alignment v_H u_W^H of the dominant singular vectors of H and W.
    CMatrix maxl2_relaxed(const ChannelSet &cs);
    ScatteringMatrix maxl2_scattering(const ChannelSet &cs);

    ScatteringMatrix identity_scattering(int N);

    /// Standard complex Gaussian N x N matrix used to seed the nulling AO.
    CMatrix random_initial_scattering(int N, Rng &rng);

    // ----- Alternating projections for interference nulling ------------------

    enum class StopReason
    {
        RelativeChange,
        AbsoluteNorm,
        IterationCap,
    };

    std::string_view to_string(StopReason r);

    /// Per-iteration diagnostics. residuals[0] belongs to the projected seed and
    /// residuals[i] to the feasible iterate after iteration i, so
    /// residuals.size() == iterations + 1 and deltas.size() == iterations.
    /// Residuals are divided by ChannelSet::residual_scale().
    struct NullingTrace
    {
        std::vector<double> residuals;
        std::vector<double> deltas;
        int iterations = 0;
        StopReason stop_reason = StopReason::IterationCap;

        /// First iteration whose residual is <= level, if any.
        std::optional<int> iterations_to(double level) const;
    };

    struct NullingResult
    {
        ScatteringMatrix scattering;
        NullingTrace trace;
    };

    /// Alternate the nulling projection with the symmetric-unitary projection, starting
    /// from theta0, until |delta| <= cfg.eps_rel, the residual drops below cfg.eps_null,
    /// or cfg.max_iter iterations ran.
    NullingResult ao_interference_nulling(const ChannelSet &cs, const CMatrix &theta0, const SystemConfig &cfg);

    /// Same skeleton restricted to diagonal unit-modulus matrices: the nulling step
    /// projects the diagonal onto the null space of the diagonal rows of A_bar^T.
    NullingResult dris_nulling(const ChannelSet &cs, const CMatrix &theta0, const SystemConfig &cfg);
} // namespace bdris
