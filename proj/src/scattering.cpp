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
#include "linalg.hpp"

namespace bdris
{
    CMatrix mrt_relaxed(const ChannelSet &cs)
    {
        const double power = cs.G().squaredNorm();
        if (!(power > 0.0))
            throw DegenerateError("mrt_relaxed: cascaded channel G is zero");
        return cs.G().adjoint() * std::sqrt(cs.N() / power);
    }

    ScatteringMatrix mrt_scattering(const ChannelSet &cs)
    {
        return ScatteringMatrix(symmetric_unitary(mrt_relaxed(cs)), cs);
    }

    CMatrix zf_relaxed_scattering(const ChannelSet &cs)
    {
        const CMatrix g_pinv = detail::cascaded_pinv(cs.H(), cs.W(), "zf_relaxed_scattering");
        return g_pinv * std::sqrt(cs.N() / g_pinv.squaredNorm());
    }

    int min_elements_for_nulling(int K)
    {
        if (K < 1)
            throw DomainError("min_elements_for_nulling: K must be >= 1");
        return K == 1 ? 1 : 2 * K - 1;
    }

    CMatrix maxF_relaxed(const ChannelSet &cs)
    {
        // A^H A shares its nonzero spectrum with the K^2 x K^2 matrix A A^H, and the
        // dominant eigenvector maps over as A^H u / ||A^H u||.
        const CMatrix &A = cs.A();
        const CMatrix small = A * A.adjoint();
        Eigen::SelfAdjointEigenSolver<CMatrix> eig(small);
        const CVector u = eig.eigenvectors().col(small.rows() - 1);
        CVector v = A.adjoint() * u;
        const double norm = v.norm();
        if (!(norm > 0.0))
            throw DegenerateError("maxF_relaxed: A is zero");
        v *= std::sqrt(static_cast<double>(cs.N())) / norm;
        return reshape(v, cs.N(), cs.N());
    }

    ScatteringMatrix maxF_scattering(const ChannelSet &cs)
    {
        return ScatteringMatrix(symmetric_unitary(maxF_relaxed(cs)), cs);
    }

    CMatrix maxl2_relaxed(const ChannelSet &cs)
    {
        if (cs.H().isZero(0.0) || cs.W().isZero(0.0))
            throw DegenerateError("maxl2_relaxed: zero channel");
        Eigen::BDCSVD<CMatrix> svd_h(cs.H(), Eigen::ComputeThinV);
        Eigen::BDCSVD<CMatrix> svd_w(cs.W(), Eigen::ComputeThinU);
        // Rank-one map from the strongest output direction of W onto the strongest input
        // direction of H. Spectral norm 1, so |u_H^H H Theta W v_W| = sigma_H sigma_W.
        return svd_h.matrixV().col(0) * svd_w.matrixU().col(0).adjoint();
    }

    ScatteringMatrix maxl2_scattering(const ChannelSet &cs)
    {
        return ScatteringMatrix(symmetric_unitary(maxl2_relaxed(cs)), cs);
    }

    ScatteringMatrix identity_scattering(int N)
    {
        if (N < 1)
            throw DomainError("identity_scattering: N must be >= 1");
        return ScatteringMatrix(CMatrix::Identity(N, N));
    }

    CMatrix random_initial_scattering(int N, Rng &rng)
    {
        return complex_gaussian(N, N, 1.0, rng);
    }
} // namespace bdris
