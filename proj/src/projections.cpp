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

#include <optional>

#include "bdris/scattering.hpp"

namespace bdris
{
    ScatteringMatrix::ScatteringMatrix(CMatrix theta) : theta_(std::move(theta))
    {
        require_square(theta_, "ScatteringMatrix");
        sym_residual_ = (theta_ - theta_.transpose()).norm();
        uni_residual_ = (theta_ * theta_.adjoint() - CMatrix::Identity(theta_.rows(), theta_.cols())).norm();
    }

    ScatteringMatrix::ScatteringMatrix(CMatrix theta, const ChannelSet &cs) : ScatteringMatrix(std::move(theta))
    {
        if (theta_.rows() != cs.N())
            throw DimensionError("ScatteringMatrix: Theta does not match the channel set");
        null_residual_ = (cs.A_bar().transpose() * vec(theta_)).squaredNorm();
    }

    CMatrix project_symmetric(const CMatrix &theta)
    {
        require_square(theta, "project_symmetric");
        return 0.5 * (theta + theta.transpose());
    }

    CMatrix project_unitary(const CMatrix &theta)
    {
        require_square(theta, "project_unitary");
        if (theta.isZero(0.0))
            throw DegenerateError("project_unitary: input is the zero matrix");
        Eigen::BDCSVD<CMatrix> svd(theta, Eigen::ComputeFullU | Eigen::ComputeFullV);
        return svd.matrixU() * svd.matrixV().adjoint();
    }

    namespace
    {
        // Polar factor by the Frobenius-scaled Newton iteration X <- (zX + (zX)^-H) / 2.
        // Symmetric input stays symmetric. Returns nothing when X is close to singular
        // or the iteration stalls, so the caller can fall back to the SVD.
        std::optional<CMatrix> newton_polar(const CMatrix &sym)
        {
            CMatrix x = sym;
            for (int k = 0; k < 40; ++k)
            {
                const Eigen::PartialPivLU<CMatrix> lu(x);
                const RVector pivots = lu.matrixLU().diagonal().cwiseAbs();
                if (!(pivots.minCoeff() > 1e-9 * pivots.maxCoeff()))
                    return std::nullopt;
                const CMatrix inv = lu.inverse();
                const double z = std::sqrt(inv.norm() / x.norm());
                CMatrix next = 0.5 * (z * x + inv.adjoint() / z);
                const double step = (next - x).norm();
                x = std::move(next);
                // Quadratic convergence: one step past 1e-9 lands at rounding level.
                if (step <= 1e-9 * std::sqrt(static_cast<double>(x.rows())))
                {
                    const Eigen::PartialPivLU<CMatrix> last(x);
                    return CMatrix(0.5 * (x + last.inverse().adjoint()));
                }
            }
            return std::nullopt;
        }

        CMatrix svd_symmetric_polar(const CMatrix &sym)
        {
            const Eigen::Index N = sym.rows();
            Eigen::BDCSVD<CMatrix> svd(sym, Eigen::ComputeFullU | Eigen::ComputeFullV);
            const RVector &sigma = svd.singularValues();
            const double cutoff = static_cast<double>(N) * 1e-12 * sigma(0);
            Eigen::Index rank = 0;
            while (rank < N && sigma(rank) > cutoff)
                ++rank;

            CMatrix u_hat = svd.matrixU();
            // Left singular vectors of the null space are arbitrary; conj(V) keeps the result symmetric.
            if (rank < N)
                u_hat.rightCols(N - rank) = svd.matrixV().rightCols(N - rank).conjugate();
            return u_hat * svd.matrixV().adjoint();
        }
    } // namespace

    CMatrix symmetric_unitary(const CMatrix &theta)
    {
        require_square(theta, "symmetric_unitary");
        const CMatrix sym = project_symmetric(theta);
        if (sym.isZero(0.0))
            throw DegenerateError("symmetric_unitary: symmetrized input is the zero matrix");

        // Newton wins up to about a hundred elements; the SVD is faster beyond.
        std::optional<CMatrix> q;
        if (sym.rows() <= 96)
            q = newton_polar(sym);
        if (!q)
            q = svd_symmetric_polar(sym);
        // q is symmetric up to rounding; averaging with its transpose makes it exact.
        return 0.5 * (*q + q->transpose());
    }

    ScatteringMatrix project_symmetric_unitary(const CMatrix &theta)
    {
        return ScatteringMatrix(symmetric_unitary(theta));
    }

    CMatrix project_diagonal_phase(const CMatrix &theta)
    {
        require_square(theta, "project_diagonal_phase");
        const Eigen::Index N = theta.rows();
        CMatrix out = CMatrix::Zero(N, N);
        for (Eigen::Index i = 0; i < N; ++i)
        {
            const cplx d = theta(i, i);
            out(i, i) = d == cplx(0.0, 0.0) ? cplx(1.0, 0.0) : d / std::abs(d);
        }
        return out;
    }

    NullingProjector::NullingProjector(const ChannelSet &cs) : cs_(&cs)
    {
        const CMatrix &a_bar = cs.A_bar();
        if (a_bar.cols() == 0)
            return;
        const CMatrix gram = a_bar.transpose() * a_bar.conjugate();
        gram_.compute(gram);
        if (gram_.info() != Eigen::Success)
            throw SingularityError("project_nulling: A_bar^T conj(A_bar) is not positive definite");

        // Cholesky succeeds on numerically singular Gram matrices; compare pivots instead.
        const RVector pivots = gram_.matrixLLT().diagonal().real();
        const double max_diag = gram.diagonal().real().maxCoeff();
        if (pivots.minCoeff() * pivots.minCoeff() <= 1e-13 * max_diag)
            throw SingularityError("project_nulling: A_bar is rank deficient (need N^2 >= K(K-1))");
    }

    CMatrix NullingProjector::operator()(const CMatrix &theta) const
    {
        const int N = cs_->N();
        if (theta.rows() != N || theta.cols() != N)
            throw DimensionError("project_nulling: Theta must be N x N");
        const CMatrix &a_bar = cs_->A_bar();
        if (a_bar.cols() == 0)
            return theta;
        CVector v = vec(theta);
        const CVector z = gram_.solve(a_bar.transpose() * v);
        v.noalias() -= a_bar.conjugate() * z;
        return reshape(v, N, N);
    }

    double NullingProjector::residual(const CMatrix &theta) const
    {
        if (cs_->A_bar().cols() == 0)
            return 0.0;
        return (cs_->A_bar().transpose() * vec(theta)).squaredNorm();
    }

    CMatrix project_nulling(const CMatrix &theta, const ChannelSet &cs)
    {
        return NullingProjector(cs)(theta);
    }
} // namespace bdris
