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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 when any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <iterator>
#include <map>
#include <random>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "bdris/channel.hpp"
#include "bdris/experiment.hpp"
#include "bdris/metrics.hpp"
#include "bdris/precoding.hpp"
#include "bdris/scattering.hpp"
#include "test_util.hpp"

using namespace bdris;

namespace
{
    constexpr int kTrials = 100;
    constexpr std::uint64_t kSeed = 1;
    const double kInf = std::numeric_limits<double>::infinity();

    int workers()
    {
        return std::max(1u, std::thread::hardware_concurrency());
    }

    bool report(int id, bool ok, const std::string &what)
    {
        std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
        std::fflush(stdout);
        return ok;
    }

    std::string fmt(const char *f, double a)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, f, a);
        return buf;
    }

    double median(std::vector<double> v)
    {
        std::sort(v.begin(), v.end());
        const std::size_t n = v.size();
        if (n == 0)
            return kInf;
        return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    }

    // Mean sum rate per (design, scheme, value) with flagged rows left out.
    using MeanKey = std::tuple<Design, BsScheme, double>;

    std::map<MeanKey, double> means(const SweepResult &res)
    {
        std::map<MeanKey, double> out;
        for (const auto &s : summarize(res))
            out[{s.design, s.scheme, s.sweep_value}] = s.rate_mean;
        return out;
    }

    ChannelSet channel_for(const SystemConfig &cfg, int trial)
    {
        Rng g = make_stream(cfg.seed, static_cast<std::uint64_t>(trial), 0);
        return draw_channel_set(cfg, g);
    }

    CMatrix random_init_for(const SystemConfig &cfg, int trial)
    {
        Rng g = make_stream(cfg.seed, static_cast<std::uint64_t>(trial), 1);
        return random_initial_scattering(cfg.N, g);
    }

    // ----- 1: feasibility bound ------------------------------------------

    bool feasibility_bound()
    {
        bool ok = true;
        std::string detail;
        for (int K = 2; K <= 5; ++K)
        {
            for (int N : {2 * K - 1, 2 * K - 2})
            {
                SystemConfig cfg;
                cfg.K = K;
                cfg.N = N;
                cfg.max_iter = 10000;
                cfg.eps_null = 1e-8;
                cfg.seed = kSeed;
                std::vector<int> hit(kTrials, 0);
                parallel_for(kTrials, workers(), [&](int t) {
                    const ChannelSet cs = channel_for(cfg, t);
                    const NullingResult r = ao_interference_nulling(cs, random_init_for(cfg, t), cfg);
                    hit[static_cast<std::size_t>(t)] = r.trace.residuals.back() <= 1e-8;
                });
                const double rate = static_cast<double>(std::count(hit.begin(), hit.end(), 1)) / kTrials;
                const bool cell_ok = N == 2 * K - 1 ? rate >= 0.95 : rate < 0.5;
                ok = ok && cell_ok;
                detail += " K=" + std::to_string(K) + ",N=" + std::to_string(N) + ":" +
                          std::to_string(static_cast<int>(std::lround(rate * 100))) + "%";
            }
        }
        return report(1, ok, "success rate N=2K-1 >= 95%, N=2K-2 < 50%;" + detail);
    }

    // ----- 2: convergence speed ------------------------------------------

    bool convergence_speed()
    {
        SystemConfig cfg;
        cfg.K = 8;
        cfg.N = 144;
        cfg.max_iter = 10000;
        cfg.eps_null = 1e-10;
        cfg.seed = kSeed;
        std::vector<double> bd(kTrials), d(kTrials);
        parallel_for(kTrials, workers(), [&](int t) {
            const ChannelSet cs = channel_for(cfg, t);
            const CMatrix theta0 = random_init_for(cfg, t);
            const auto to = [](const NullingResult &r) {
                const auto i = r.trace.iterations_to(1e-8);
                return i ? static_cast<double>(*i) : kInf;
            };
            bd[static_cast<std::size_t>(t)] = to(ao_interference_nulling(cs, theta0, cfg));
            d[static_cast<std::size_t>(t)] = to(dris_nulling(cs, theta0, cfg));
        });
        const double m_bd = median(bd), m_d = median(d);
        const double d_fail = static_cast<double>(std::count(d.begin(), d.end(), kInf)) / kTrials;
        const bool ok = m_bd <= m_d / 10.0 || d_fail >= 0.5;
        return report(2, ok,
                      "median iterations to 1e-8: BD-RIS " + fmt("%.0f", m_bd) + ", D-RIS " + fmt("%.0f", m_d) +
                          ", D-RIS failures " + fmt("%.0f%%", 100.0 * d_fail));
    }

    // ----- 3: small-N gap ------------------------------------------------

    bool small_n_gap()
    {
        ExperimentSpec spec;
        spec.base.K = 5;
        spec.base.P_max = dbm_to_mw(10.0);
        spec.base.seed = kSeed;
        spec.sweep = SweepKind::Elements;
        spec.values = {9, 16, 24, 32, 40, 48, 64};
        spec.designs = {Design::BdrisNullRand, Design::DrisNull};
        spec.schemes = {BsScheme::UP};
        spec.trials = kTrials;
        spec.workers = workers();
        const auto m = means(run_experiment(spec));
        std::vector<double> gap;
        std::string detail;
        for (double n : spec.values)
        {
            gap.push_back(m.at({Design::BdrisNullRand, BsScheme::UP, n}) - m.at({Design::DrisNull, BsScheme::UP, n}));
            detail += " N=" + std::to_string(static_cast<int>(n)) + ":" + fmt("%.2f", gap.back());
        }
        bool ok = gap.front() >= 5.0;
        for (std::size_t i = 1; i < gap.size(); ++i)
            ok = ok && gap[i] <= gap[i - 1];
        return report(3, ok, "BD-RIS minus D-RIS null rate >= 5 at N=9, shrinking;" + detail);
    }

    // ----- 4: decomposition ----------------------------------------------

    bool decomposition()
    {
        SystemConfig cfg;
        cfg.K = 5;
        cfg.N = 64;
        cfg.seed = kSeed;
        enum
        {
            MrtRelaxed,
            Mrt,
            MaxFRelaxed,
            MaxF,
            MaxL2,
            Identity,
            NullMrtInit,
            Count
        };
        std::vector<std::array<PowerDecomposition, Count>> rows(kTrials);
        const RVector ones = RVector::Ones(cfg.K);
        parallel_for(kTrials, workers(), [&](int t) {
            const ChannelSet cs = channel_for(cfg, t);
            auto &r = rows[static_cast<std::size_t>(t)];
            r[MrtRelaxed] = power_decomposition(cs, mrt_relaxed(cs), ones);
            r[Mrt] = power_decomposition(cs, mrt_scattering(cs).theta(), ones);
            r[MaxFRelaxed] = power_decomposition(cs, maxF_relaxed(cs), ones);
            r[MaxF] = power_decomposition(cs, maxF_scattering(cs).theta(), ones);
            r[MaxL2] = power_decomposition(cs, maxl2_scattering(cs).theta(), ones);
            r[Identity] = power_decomposition(cs, identity_scattering(cs.N()).theta(), ones);
            r[NullMrtInit] =
                power_decomposition(cs, ao_interference_nulling(cs, mrt_scattering(cs).theta(), cfg).scattering.theta(), ones);
        });
        std::array<double, Count> sig{}, inter{}, frob{};
        for (const auto &r : rows)
            for (int d = 0; d < Count; ++d)
            {
                sig[d] += r[d].signal_power_sum / kTrials;
                inter[d] += r[d].interference_power_sum / kTrials;
                frob[d] += r[d].frob_power / kTrials;
            }
        const bool a = *std::max_element(frob.begin(), frob.end()) == frob[MaxFRelaxed];
        const bool b = frob[Mrt] >= frob[MaxF];
        const bool c = inter[MrtRelaxed] < inter[MaxFRelaxed] && inter[Mrt] < inter[MaxF];
        const bool d = inter[Mrt] / inter[MrtRelaxed] < sig[Mrt] / sig[MrtRelaxed];
        std::string detail = std::string(" (a)") + (a ? "ok" : "no") + " (b)" + (b ? "ok" : "no") + " (c)" +
                             (c ? "ok" : "no") + " (d)" + (d ? "ok" : "no") + "; interference ratio " +
                             fmt("%.3f", inter[Mrt] / inter[MrtRelaxed]) + " vs signal ratio " +
                             fmt("%.3f", sig[Mrt] / sig[MrtRelaxed]);
        return report(4, a && b && c && d, "decomposition orderings at K=5, N=64;" + detail);
    }

    // ----- 5: power-sweep orderings --------------------------------------

    // P_max in dB where the curve first reaches level, linear between grid points.
    double crossing(const std::vector<double> &p, const std::vector<double> &r, double level)
    {
        for (std::size_t i = 1; i < p.size(); ++i)
            if (r[i - 1] < level && r[i] >= level)
                return p[i - 1] + (level - r[i - 1]) / (r[i] - r[i - 1]) * (p[i] - p[i - 1]);
        return std::numeric_limits<double>::quiet_NaN();
    }

    bool power_orderings()
    {
        const double slope_ref = 5.0 * std::log2(std::pow(10.0, 0.5));
        bool ok = true;
        std::string detail;
        for (int N : {31, 64})
        {
            ExperimentSpec spec;
            spec.base.K = 5;
            spec.base.N = N;
            spec.base.seed = kSeed;
            spec.sweep = SweepKind::Power;
            for (int p = -20; p <= 40; ++p)
                spec.values.push_back(p);
            spec.trials = kTrials;
            spec.workers = workers();
            spec.designs = {Design::BdrisMrt};
            spec.schemes = {BsScheme::UP, BsScheme::ZF};
            const auto mrt = means(run_experiment(spec));
            spec.designs = {Design::BdrisNullMrtInit};
            spec.schemes = {BsScheme::UP, BsScheme::RM};
            const auto null = means(run_experiment(spec));

            const auto curve = [&](const std::map<MeanKey, double> &m, Design d, BsScheme s) {
                std::vector<double> r;
                for (double p : spec.values)
                    r.push_back(m.at({d, s, p}));
                return r;
            };
            const auto mrt_up = curve(mrt, Design::BdrisMrt, BsScheme::UP);
            const auto mrt_zf = curve(mrt, Design::BdrisMrt, BsScheme::ZF);
            const auto null_up = curve(null, Design::BdrisNullMrtInit, BsScheme::UP);
            const auto null_rm = curve(null, Design::BdrisNullMrtInit, BsScheme::RM);

            bool a = true;
            for (std::size_t i = 0; i < spec.values.size(); ++i)
                if (spec.values[i] < 0.0)
                    a = a && mrt_up[i] > null_up[i];

            // 5 dB slopes over [25, 30], [30, 35], [35, 40]; index of p dBm is p + 20.
            std::string slopes;
            bool b = true;
            for (int p0 = 25; p0 + 5 <= 40; p0 += 5)
            {
                const double s_mrt = mrt_up[p0 + 25] - mrt_up[p0 + 20];
                const double s_null = null_up[p0 + 25] - null_up[p0 + 20];
                b = b && s_mrt < 0.2 && std::abs(s_null - slope_ref) <= 0.1 * slope_ref;
                slopes += " " + std::to_string(p0) + ":" + fmt("%.2f", s_mrt) + "/" + fmt("%.2f", s_null);
            }

            const double lead = crossing(spec.values, null_rm, 20.0) - crossing(spec.values, mrt_zf, 20.0);
            const bool c = std::abs(lead - 3.0) <= 1.0;
            ok = ok && a && b && c;
            detail += " N=" + std::to_string(N) + ": (a)" + (a ? "ok" : "no") + " (b)" + (b ? "ok" : "no") +
                      " slopes mrt-up/null-up" + slopes +
                      " (c)" + (c ? "ok" : "no") + " lead " + fmt("%.2f dB", lead) + ";";
        }
        return report(5, ok, "power-sweep orderings (null-up slope target " + fmt("%.2f", slope_ref) + ");" + detail);
    }

    // ----- 6: spot value -------------------------------------------------

    bool spot_value()
    {
        ExperimentSpec spec;
        spec.base.K = 10;
        spec.base.N = 50;
        spec.base.seed = kSeed;
        spec.sweep = SweepKind::Power;
        spec.values = {5.0};
        spec.designs = {Design::BdrisMrt};
        spec.schemes = {BsScheme::ZF};
        spec.trials = kTrials;
        spec.workers = workers();
        const double m = means(run_experiment(spec)).at({Design::BdrisMrt, BsScheme::ZF, 5.0});
        return report(6, std::abs(m - 10.3) <= 0.8, "BD-RIS MRT + ZF at K=10, N=50, 5 dBm: " + fmt("%.2f", m) +
                                                        " (target 10.3 +/- 0.8)");
    }

    // ----- 7: property suites --------------------------------------------

    struct Suite
    {
        const char *name;
        std::function<bool()> run;
    };

    bool suite_projections()
    {
        Rng g = test::rng(71);
        bool ok = true;
        for (int i = 0; i < kTrials; ++i)
        {
            const int N = 2 + i % 12;
            const CMatrix x = test::randn(N, N, g);
            const auto idem = [&](const std::function<CMatrix(const CMatrix &)> &p) {
                const CMatrix once = p(x);
                return (p(once) - once).norm() <= 1e-10 * std::max(1.0, once.norm());
            };
            ok = ok && idem(project_symmetric) && idem(project_unitary) && idem(symmetric_unitary);
            const ChannelSet cs = test::unit_channels(2 + i % 3, 3 + i % 3 + 2 * (i % 3), g);
            const CMatrix y = test::randn(cs.N(), cs.N(), g);
            const NullingProjector proj(cs);
            ok = ok && (proj(proj(y)) - proj(y)).norm() <= 1e-10 * std::max(1.0, proj(y).norm());
        }
        for (int i = 0; i < 10; ++i)
        {
            const int N = 4;
            const CMatrix x = test::randn(N, N, g);
            const double best = (x - project_unitary(x)).norm();
            for (int q = 0; q < 1000; ++q)
                ok = ok && best <= (x - test::random_unitary(N, g)).norm() + 1e-12;
        }
        return ok;
    }

    bool suite_kronecker()
    {
        Rng g = test::rng(72);
        bool ok = true;
        for (int i = 0; i < kTrials; ++i)
        {
            const ChannelSet cs = test::unit_channels(2 + i % 4, 4 + i % 9, g);
            const CMatrix theta = test::randn(cs.N(), cs.N(), g);
            ok = ok && test::rel_err(equivalent_channel(cs, theta), equivalent_channel_kron(cs, theta)) < 1e-10;
        }
        return ok;
    }

    bool suite_decomposition()
    {
        Rng g = test::rng(73);
        bool ok = true;
        for (int i = 0; i < kTrials; ++i)
        {
            const int K = 1 + i % 8;
            const auto d = power_decomposition(test::randn(K, K, g), RVector::Ones(K));
            ok = ok && std::abs(d.signal_power_sum + d.interference_power_sum - d.frob_power) <= 1e-10 * d.frob_power;
        }
        return ok;
    }

    bool suite_waterfilling_grid()
    {
        RVector gains(3);
        gains << 1e-3, 0.5e-3, 0.1e-3;
        const double N0 = 1e-8, P = 1e-2;
        const RVector p = water_filling(gains, P, N0).powers();
        const int steps = 10000;
        double best = -1.0;
        RVector arg = RVector::Zero(3);
        for (int i = 0; i <= steps; ++i)
        {
            const double a = P * i / steps, la = std::log2(1.0 + a * gains(0) / N0);
            for (int j = 0; i + j <= steps; ++j)
            {
                const double b = P * j / steps, c = P - a - b;
                const double r = la + std::log2(1.0 + b * gains(1) / N0) + std::log2(1.0 + c * gains(2) / N0);
                if (r > best)
                {
                    best = r;
                    arg << a, b, c;
                }
            }
        }
        return (p - arg).cwiseAbs().maxCoeff() <= 1e-3 * P;
    }

    bool suite_p5_vs_waterfilling()
    {
        Rng g = test::rng(75);
        std::uniform_real_distribution<double> u(-7.0, -4.0);
        bool ok = true;
        const double N0 = 1e-8, P = 10.0;
        for (int i = 0; i < kTrials; ++i)
        {
            const int K = 1 + i % 6;
            RVector gains(K);
            for (int k = 0; k < K; ++k)
                gains(k) = std::pow(10.0, u(g));
            const CMatrix E = gains.cwiseSqrt().cast<cplx>().asDiagonal();
            const RVector wf = water_filling(gains, P, N0).powers();
            const RVector p5 = optimize_power_sumrate(E, P, N0).precoder.powers();
            ok = ok && (wf - p5).cwiseAbs().maxCoeff() <= 1e-6 * P;
        }
        return ok;
    }

    bool suite_zf_residual()
    {
        Rng g = test::rng(76);
        bool ok = true;
        for (int i = 0; i < kTrials; ++i)
        {
            const int K = 1 + i % 8;
            const CMatrix E = test::randn(K, K, g);
            CMatrix EP = E * zf_precoder(E, 3.0).P;
            const double c = std::abs(EP(0, 0));
            EP.diagonal().setZero();
            ok = ok && (K == 1 || EP.cwiseAbs().maxCoeff() < 1e-9 * c);
        }
        return ok;
    }

    bool suite_budget()
    {
        Rng g = test::rng(77);
        bool ok = true;
        const double N0 = 1e-2;
        for (int i = 0; i < kTrials; ++i)
        {
            const int K = 1 + i % 6;
            const double P = std::pow(10.0, -2.0 + 0.05 * i);
            const CMatrix E = test::randn(K, K, g);
            const RVector gains = E.diagonal().cwiseAbs2();
            for (const Precoder &pr : {zf_precoder(E, P), mrt_precoder(E, P), uniform_power(K, P),
                                       water_filling(gains, P, N0), optimize_power_sumrate(E, P, N0).precoder})
                ok = ok && std::abs(pr.P.squaredNorm() - P) <= 1e-9 * P;
        }
        return ok;
    }

    bool property_suites()
    {
        const std::vector<Suite> suites = {
            {"projections", suite_projections},
            {"kronecker", suite_kronecker},
            {"decomposition", suite_decomposition},
            {"water-filling grid", suite_waterfilling_grid},
            {"p5 vs water-filling", suite_p5_vs_waterfilling},
            {"zf residual", suite_zf_residual},
            {"budget", suite_budget},
        };
        bool ok = true;
        std::string detail;
        for (const auto &s : suites)
        {
            const auto t0 = std::chrono::steady_clock::now();
            bool pass = false;
            try
            {
                pass = s.run();
            }
            catch (const std::exception &e)
            {
                std::fprintf(stderr, "suite %s threw: %s\n", s.name, e.what());
            }
            const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            pass = pass && sec < 60.0;
            ok = ok && pass;
            detail += std::string(" ") + s.name + (pass ? " ok" : " FAILED") + fmt(" (%.2f s);", sec);
        }
        return report(7, ok, "property suites;" + detail);
    }

    // ----- 8: water-filling high-SNR limit -------------------------------

    bool waterfilling_limit()
    {
        SystemConfig cfg;
        cfg.seed = kSeed;
        double worst = 0.0;
        for (int t = 0; t < kTrials; ++t)
        {
            const ChannelSet cs = channel_for(cfg, t);
            const RVector gains = equivalent_channel(cs, mrt_scattering(cs).theta()).diagonal().cwiseAbs2();
            const double P = 1e6 * (cfg.N0 * gains.cwiseInverse()).maxCoeff();
            const RVector p = water_filling(gains, P, cfg.N0).powers();
            worst = std::max(worst, (p.array() - P / cfg.K).abs().maxCoeff() / P);
        }
        return report(8, worst <= 0.01, "max |p_k - P/K| / P at P = 1e6 max N0/g_k: " + fmt("%.2e", worst));
    }
} // namespace

int main()
{
    using Step = bool (*)();
    const Step steps[] = {feasibility_bound, convergence_speed, small_n_gap,     decomposition,
                          power_orderings,   spot_value,        property_suites, waterfilling_limit};
    int failed = 0;
    for (std::size_t i = 0; i < std::size(steps); ++i)
    {
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        try
        {
            ok = steps[i]();
        }
        catch (const std::exception &e)
        {
            ok = report(static_cast<int>(i + 1), false, std::string("threw: ") + e.what());
        }
        std::fprintf(stderr, "criterion %zu took %.1f s\n", i + 1,
                     std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        failed += ok ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(steps)) - failed, std::size(steps));
    return failed == 0 ? 0 : 1;
}
