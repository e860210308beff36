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

#include "bdris/precoding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "bdris/metrics.hpp"
#include "linalg.hpp"

namespace bdris
{
    Precoder diagonal_power(const RVector &p, double P_max)
    {
        if ((p.array() < 0.0).any())
            throw DomainError("diagonal_power: negative power");
        Precoder out;
        out.P = p.cwiseSqrt().cast<cplx>().asDiagonal();
        out.kind = PrecoderKind::DiagonalPower;
        out.budget = P_max;
        return out;
    }

    Precoder zf_precoder(const CMatrix &E, double P_max)
    {
        if (!(P_max > 0.0))
            throw DomainError("zf_precoder: P_max must be positive");
        const CMatrix inv = detail::checked_inverse(E, "zf_precoder");
        return {inv * std::sqrt(P_max / inv.squaredNorm()), PrecoderKind::Full, P_max};
    }

    Precoder mrt_precoder(const CMatrix &E, double P_max)
    {
        if (!(P_max > 0.0))
            throw DomainError("mrt_precoder: P_max must be positive");
        const double power = E.squaredNorm();
        if (!(power > 0.0))
            throw DegenerateError("mrt_precoder: equivalent channel is zero");
        return {E.adjoint() * std::sqrt(P_max / power), PrecoderKind::Full, P_max};
    }

    Precoder uniform_power(int K, double P_max)
    {
        if (K < 1)
            throw DomainError("uniform_power: K must be >= 1");
        if (!(P_max > 0.0))
            throw DomainError("uniform_power: P_max must be positive");
        return diagonal_power(RVector::Constant(K, P_max / K), P_max);
    }

    Precoder water_filling(const RVector &gains, double P_max, double N0)
    {
        if (!(P_max > 0.0) || !(N0 > 0.0))
            throw DomainError("water_filling: P_max and N0 must be positive");
        if ((gains.array() < 0.0).any())
            throw DomainError("water_filling: negative gain");
        const Eigen::Index K = gains.size();

        // Zero-gain users never receive power, so they stay out of the bisection.
        std::vector<Eigen::Index> active;
        for (Eigen::Index k = 0; k < K; ++k)
            if (gains(k) > 0.0)
                active.push_back(k);
        if (active.empty())
            throw DegenerateError("water_filling: all gains are zero");

        double max_floor = 0.0, max_gain = 0.0;
        for (auto k : active)
        {
            max_floor = std::max(max_floor, N0 / gains(k));
            max_gain = std::max(max_gain, gains(k) / N0);
        }

        auto allocated = [&](double alpha) {
            double sum = 0.0;
            for (auto k : active)
                sum += std::max(1.0 / alpha - N0 / gains(k), 0.0);
            return sum;
        };

        // allocated() is continuous and nonincreasing in alpha.
        double lo = 1.0 / (P_max + max_floor);
        double hi = max_gain;
        while (allocated(hi) > P_max)
            hi *= 2.0;
        double alpha = lo;
        for (int it = 0; it < 200; ++it)
        {
            alpha = 0.5 * (lo + hi);
            const double s = allocated(alpha);
            if (std::abs(s - P_max) <= 1e-12 * P_max)
                break;
            (s > P_max ? lo : hi) = alpha;
        }

        // Given the active set at alpha, the water level has a closed form that meets the
        // budget to rounding.
        std::vector<Eigen::Index> on;
        for (auto k : active)
            if (1.0 / alpha > N0 / gains(k))
                on.push_back(k);
        if (on.empty())
            on.push_back(*std::max_element(active.begin(), active.end(),
                                           [&](auto a, auto b) { return gains(a) < gains(b); }));
        double level = P_max;
        for (auto k : on)
            level += N0 / gains(k);
        level /= static_cast<double>(on.size());

        RVector p = RVector::Zero(K);
        for (auto k : on)
            p(k) = std::max(level - N0 / gains(k), 0.0);
        p *= P_max / p.sum();
        return diagonal_power(p, P_max);
    }

    double power_sumrate(const RVector &p, const RMatrix &gain2, double N0)
    {
        const Eigen::Index K = p.size();
        double rate = 0.0;
        for (Eigen::Index k = 0; k < K; ++k)
        {
            const double total = gain2.row(k).dot(p) + N0;
            const double signal = p(k) * gain2(k, k);
            rate += std::log1p(signal / (total - signal));
        }
        return rate / std::log(2.0);
    }

    namespace
    {
        // Euclidean projection onto {x >= 0, sum x = 1}.
        RVector project_simplex(const RVector &y)
        {
            std::vector<double> s(y.data(), y.data() + y.size());
            std::sort(s.begin(), s.end(), std::greater<>());
            double cumsum = 0.0, tau = 0.0;
            for (std::size_t i = 0; i < s.size(); ++i)
            {
                cumsum += s[i];
                const double t = (cumsum - 1.0) / static_cast<double>(i + 1);
                if (s[i] - t > 0.0)
                    tau = t;
            }
            return (y.array() - tau).max(0.0).matrix();
        }

        // Gradient of power_sumrate with respect to p.
        RVector sumrate_gradient(const RVector &p, const RMatrix &gain2, double N0)
        {
            const Eigen::Index K = p.size();
            RVector grad = RVector::Zero(K);
            for (Eigen::Index k = 0; k < K; ++k)
            {
                const double total = gain2.row(k).dot(p) + N0;
                const double interference = total - p(k) * gain2(k, k);
                grad += gain2.row(k).transpose() / total;
                RVector row = gain2.row(k).transpose() / interference;
                row(k) = 0.0;
                grad -= row;
            }
            return grad / std::log(2.0);
        }

        struct Ascent
        {
            RVector x;
            double value;
            bool converged;
            int iterations;
        };

        // Projected gradient ascent on the unit simplex in x = p / P_max. The trial step is
        // the Barzilai-Borwein length; Armijo backtracking runs along the projected direction.
        Ascent ascend(RVector x, const RMatrix &gain2, double P_max, double N0, double tol, int max_iter)
        {
            auto f = [&](const RVector &y) { return power_sumrate(P_max * y, gain2, N0); };
            auto grad = [&](const RVector &y) { return RVector(P_max * sumrate_gradient(P_max * y, gain2, N0)); };
            double fx = f(x);
            RVector g = grad(x);
            double step = 1.0 / std::max(g.cwiseAbs().maxCoeff(), 1e-300);
            for (int it = 0; it < max_iter; ++it)
            {
                // Stationary when either the unit-length or the curvature-scaled projected
                // gradient step is below tol; the latter estimates the distance to the optimum.
                const RVector d = project_simplex(x + step * g) - x;
                if ((x - project_simplex(x + g)).norm() <= tol || d.norm() <= tol)
                    return {x, fx, true, it};
                const double slope = g.dot(d);
                if (!(slope > 0.0))
                    return {x, fx, false, it + 1};
                // Near the optimum f is flat to rounding; changes below that floor count as
                // no change so the gradient can keep steering.
                const double floor = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(fx);
                double lambda = 1.0;
                RVector trial = x + d;
                double ft = f(trial);
                int bt = 0;
                while (ft < fx + 1e-4 * lambda * slope - floor && bt < 60)
                {
                    lambda *= 0.5;
                    trial = x + lambda * d;
                    ft = f(trial);
                    ++bt;
                }
                if (ft < fx - floor)
                    return {x, fx, false, it + 1};

                const RVector g_new = grad(trial);
                const RVector sx = trial - x;
                const double curvature = -sx.dot(g_new - g);
                step = curvature > 0.0 ? std::clamp(sx.squaredNorm() / curvature, 1e-30, 1e30) : 2.0 * step;
                x = trial;
                fx = ft;
                g = g_new;
            }
            return {x, fx, false, max_iter};
        }
    } // namespace

    PowerOptimization optimize_power_sumrate(const CMatrix &E, double P_max, double N0, double tol, int max_iter)
    {
        require_square(E, "optimize_power_sumrate");
        if (!(P_max > 0.0) || !(N0 > 0.0))
            throw DomainError("optimize_power_sumrate: P_max and N0 must be positive");
        const Eigen::Index K = E.rows();
        // tol is expressed in power units; the ascent runs on p / P_max.
        const double x_tol = (tol > 0.0 ? tol : 1e-8 * P_max) / P_max;
        const RMatrix gain2 = E.cwiseAbs2();

        std::vector<RVector> starts;
        starts.push_back(RVector::Constant(K, 1.0 / K));
        if ((gain2.diagonal().array() > 0.0).any())
            starts.push_back(water_filling(gain2.diagonal(), 1.0, N0 / P_max).powers());
        for (Eigen::Index k = 0; k < K; ++k)
            starts.push_back(RVector::Unit(K, k));

        PowerOptimization best;
        best.objective = -std::numeric_limits<double>::infinity();
        int total_iterations = 0;
        for (const auto &s : starts)
        {
            Ascent a = ascend(s, gain2, P_max, N0, x_tol, max_iter);
            total_iterations += a.iterations;
            if (a.value > best.objective)
            {
                RVector p = a.x.cwiseMax(0.0);
                p *= P_max / p.sum();
                best.precoder = diagonal_power(p, P_max);
                best.objective = a.value;
                best.converged = a.converged;
            }
        }
        best.iterations = total_iterations;
        return best;
    }

    PowerOptimization optimize_power_sumrate(const ChannelSet &cs, const CMatrix &theta, double P_max, double N0,
                                             double tol)
    {
        return optimize_power_sumrate(equivalent_channel(cs, theta), P_max, N0, tol);
    }
} // namespace bdris
