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

#include <cmath>

#include "bdris/scattering.hpp"

namespace bdris
{
    std::string_view to_string(StopReason r)
    {
        switch (r)
        {
        case StopReason::RelativeChange:
            return "relative-change";
        case StopReason::AbsoluteNorm:
            return "absolute-norm";
        case StopReason::IterationCap:
            return "iteration-cap";
        }
        return "unknown";
    }

    std::optional<int> NullingTrace::iterations_to(double level) const
    {
        for (std::size_t i = 0; i < residuals.size(); ++i)
            if (residuals[i] <= level)
                return static_cast<int>(i);
        return std::nullopt;
    }

    namespace
    {
        // Shared loop of both nulling AOs. `step` maps the current feasible iterate to the
        // next one and `residual` evaluates the (scaled) nulling residual.
        template <typename Iterate, typename Step, typename Residual>
        NullingTrace run_ao(Iterate &current, const SystemConfig &cfg, Step step, Residual residual)
        {
            NullingTrace trace;
            double previous = residual(current);
            trace.residuals.push_back(previous);

            for (int i = 1;; ++i)
            {
                current = step(current);
                const double r = residual(current);
                // Signed relative change; 0/0 (nothing left to null) counts as no change.
                const double delta = previous > 0.0 ? (r - previous) / previous : 0.0;
                trace.residuals.push_back(r);
                trace.deltas.push_back(delta);
                trace.iterations = i;

                if (std::abs(delta) <= cfg.eps_rel)
                {
                    trace.stop_reason = StopReason::RelativeChange;
                    break;
                }
                if (r < cfg.eps_null)
                {
                    trace.stop_reason = StopReason::AbsoluteNorm;
                    break;
                }
                if (i >= cfg.max_iter)
                {
                    trace.stop_reason = StopReason::IterationCap;
                    break;
                }
                previous = r;
            }
            return trace;
        }
    } // namespace

    NullingResult ao_interference_nulling(const ChannelSet &cs, const CMatrix &theta0, const SystemConfig &cfg)
    {
        if (theta0.rows() != cs.N() || theta0.cols() != cs.N())
            throw DimensionError("ao_interference_nulling: seed must be N x N");
        const NullingProjector project(cs);
        const double scale = cs.residual_scale();

        CMatrix current = symmetric_unitary(theta0);
        NullingTrace trace = run_ao(
            current, cfg, [&](const CMatrix &t) { return symmetric_unitary(project(t)); },
            [&](const CMatrix &t) { return project.residual(t) / scale; });
        return {ScatteringMatrix(std::move(current), cs), std::move(trace)};
    }

    NullingResult dris_nulling(const ChannelSet &cs, const CMatrix &theta0, const SystemConfig &cfg)
    {
        const int N = cs.N();
        if (theta0.rows() != N || theta0.cols() != N)
            throw DimensionError("dris_nulling: seed must be N x N");
        const double scale = cs.residual_scale();

        // Rows of A_bar that multiply the diagonal of Theta: A_bar^T vec(diag(x)) = A_d^T x.
        const CMatrix &a_bar = cs.A_bar();
        CMatrix a_d(N, a_bar.cols());
        for (int s = 0; s < N; ++s)
            a_d.row(s) = a_bar.row(static_cast<Eigen::Index>(s) * N + s);

        // Orthonormal basis of range(conj(A_d)); its complement is the nulling subspace.
        CMatrix basis(N, 0);
        if (a_d.cols() > 0)
        {
            Eigen::BDCSVD<CMatrix> svd(a_d.conjugate(), Eigen::ComputeThinU);
            const RVector &sigma = svd.singularValues();
            const double cutoff = std::max(N, static_cast<int>(a_d.cols())) * 1e-12 * sigma(0);
            Eigen::Index rank = 0;
            while (rank < sigma.size() && sigma(rank) > cutoff)
                ++rank;
            basis = svd.matrixU().leftCols(rank);
        }

        auto to_phase = [](const CVector &x) {
            CVector out(x.size());
            for (Eigen::Index i = 0; i < x.size(); ++i)
                out(i) = x(i) == cplx(0.0, 0.0) ? cplx(1.0, 0.0) : x(i) / std::abs(x(i));
            return out;
        };

        CVector current = to_phase(theta0.diagonal());
        NullingTrace trace = run_ao(
            current, cfg,
            [&](const CVector &x) {
                CVector nulled = x;
                if (basis.cols() > 0)
                    nulled.noalias() -= basis * (basis.adjoint() * x);
                return to_phase(nulled);
            },
            [&](const CVector &x) { return (a_d.transpose() * x).squaredNorm() / scale; });

        CMatrix theta = current.asDiagonal();
        return {ScatteringMatrix(std::move(theta), cs), std::move(trace)};
    }
} // namespace bdris
