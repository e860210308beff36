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

#include "bdris/experiment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

#include "bdris/channel.hpp"
#include "bdris/metrics.hpp"
#include "bdris/precoding.hpp"
#include "bdris/scattering.hpp"

namespace bdris
{
    namespace
    {
        constexpr std::array<std::pair<Design, std::string_view>, 10> kDesignNames{{
            {Design::BdrisMrt, "bdris-mrt"},
            {Design::BdrisNullRand, "bdris-null-rand"},
            {Design::BdrisNullMrtInit, "bdris-null-mrt-init"},
            {Design::DrisNull, "dris-null"},
            {Design::BdrisMaxF, "bdris-maxF"},
            {Design::BdrisMaxL2, "bdris-maxl2"},
            {Design::BsZf, "bs-zf"},
            {Design::BsMrt, "bs-mrt"},
            {Design::NmimoZf, "nmimo-zf"},
            {Design::NmimoMrt, "nmimo-mrt"},
        }};

        constexpr std::array<std::pair<BsScheme, std::string_view>, 5> kSchemeNames{{
            {BsScheme::UP, "UP"},
            {BsScheme::RM, "RM"},
            {BsScheme::ZF, "ZF"},
            {BsScheme::WF, "WF"},
            {BsScheme::MRT, "MRT"},
        }};

        using Clock = std::chrono::steady_clock;

        double elapsed_ms(Clock::time_point since)
        {
            return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
        }

        std::uint64_t hash_channels(const ChannelSet &cs)
        {
            std::uint64_t h = 1469598103934665603ull;
            auto feed = [&](const CMatrix &m) {
                const auto *bytes = reinterpret_cast<const unsigned char *>(m.data());
                for (std::size_t i = 0; i < static_cast<std::size_t>(m.size()) * sizeof(cplx); ++i)
                {
                    h ^= bytes[i];
                    h *= 1099511628211ull;
                }
            };
            feed(cs.H());
            feed(cs.W());
            return h;
        }

        // Stream ids under (seed, trial).
        constexpr std::uint64_t kChannelStream = 0;
        constexpr std::uint64_t kInitStream = 1;
    } // namespace

    std::string_view to_string(Design d)
    {
        for (const auto &[k, v] : kDesignNames)
            if (k == d)
                return v;
        return "unknown";
    }

    std::string_view to_string(BsScheme s)
    {
        for (const auto &[k, v] : kSchemeNames)
            if (k == s)
                return v;
        return "unknown";
    }

    Design parse_design(std::string_view name)
    {
        for (const auto &[k, v] : kDesignNames)
            if (v == name)
                return k;
        throw ConfigError("unknown design '" + std::string(name) + "'");
    }

    BsScheme parse_scheme(std::string_view name)
    {
        for (const auto &[k, v] : kSchemeNames)
            if (v == name)
                return k;
        throw ConfigError("unknown BS scheme '" + std::string(name) + "'");
    }

    const std::vector<Design> &all_designs()
    {
        static const std::vector<Design> designs = [] {
            std::vector<Design> out;
            for (const auto &[k, v] : kDesignNames)
                out.push_back(k);
            return out;
        }();
        return designs;
    }

    bool is_nulling_design(Design d)
    {
        return d == Design::BdrisNullRand || d == Design::BdrisNullMrtInit || d == Design::DrisNull;
    }

    std::optional<BsScheme> intrinsic_scheme(Design d)
    {
        switch (d)
        {
        case Design::BsZf:
            return BsScheme::ZF;
        case Design::BsMrt:
            return BsScheme::MRT;
        case Design::NmimoZf:
            return BsScheme::UP;
        case Design::NmimoMrt:
            return BsScheme::ZF;
        default:
            return std::nullopt;
        }
    }

    std::optional<std::string> incompatibility(Design d, BsScheme s)
    {
        if (auto fixed = intrinsic_scheme(d); fixed && *fixed != s)
            return std::string(to_string(d)) + " always runs with " + std::string(to_string(*fixed));
        if (s == BsScheme::WF && !is_nulling_design(d))
            return "WF needs a diagonal equivalent channel (nulling designs only)";
        return std::nullopt;
    }

    std::string_view sweep_param_name(SweepKind k)
    {
        switch (k)
        {
        case SweepKind::Power:
            return "pmax_dbm";
        case SweepKind::Users:
            return "users";
        case SweepKind::Elements:
            return "elements";
        }
        return "unknown";
    }

    NRule NRule::parse(std::string_view text)
    {
        NRule r;
        try
        {
            if (text.rfind("fixed:", 0) == 0)
            {
                r.fixed = true;
                r.value = std::stoi(std::string(text.substr(6)));
            }
            else if (!text.empty() && (text.back() == 'K' || text.back() == 'k'))
            {
                const auto factor = text.substr(0, text.size() - 1);
                r.value = factor.empty() ? 1 : std::stoi(std::string(factor));
            }
            else
                throw ConfigError("");
        }
        catch (const std::exception &)
        {
            throw ConfigError("invalid N-rule '" + std::string(text) + "' (expected e.g. 5K or fixed:64)");
        }
        if (r.value < 1)
            throw ConfigError("invalid N-rule '" + std::string(text) + "'");
        return r;
    }

    void ExperimentSpec::validate() const
    {
        base.validate();
        if (values.empty())
            throw ConfigError("sweep has no points");
        if (designs.empty())
            throw ConfigError("no designs selected");
        if (schemes.empty())
            throw ConfigError("no BS schemes selected");
        if (trials < 0)
            throw ConfigError("trials must be >= 0");
        if (workers < 1)
            throw ConfigError("workers must be >= 1");
        if (!(relay_power > 0.0))
            throw ConfigError("relay power must be positive");
        for (double v : values)
        {
            if (!std::isfinite(v))
                throw ConfigError("sweep values must be finite");
            if (sweep != SweepKind::Power && (v < 1.0 || v != std::floor(v)))
                throw ConfigError("user/element counts must be positive integers");
        }
    }

    void SweepResult::sort_rows()
    {
        std::stable_sort(rows.begin(), rows.end(), [](const SweepRow &a, const SweepRow &b) {
            return std::make_tuple(to_string(a.design), to_string(a.scheme), a.sweep_value, a.trial) <
                   std::make_tuple(to_string(b.design), to_string(b.scheme), b.sweep_value, b.trial);
        });
    }

    void parallel_for(int count, int workers, const std::function<void(int)> &fn)
    {
        if (count <= 0)
            return;
        const int threads = std::max(1, std::min(workers, count));
        if (threads == 1)
        {
            for (int i = 0; i < count; ++i)
                fn(i);
            return;
        }
        std::atomic<int> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (int i = next++; i < count; i = next++)
                {
                    try
                    {
                        fn(i);
                    }
                    catch (...)
                    {
                        std::lock_guard lock(failure_mutex);
                        if (!failure)
                            failure = std::current_exception();
                    }
                }
            });
        for (auto &th : pool)
            th.join();
        if (failure)
            std::rethrow_exception(failure);
    }

    namespace
    {
        // Points of a sweep that share K and N, and therefore channel draws and stage-1 designs.
        struct PointGroup
        {
            int K = 0;
            int N = 0;
            std::vector<double> values;
        };

        std::vector<PointGroup> group_points(const ExperimentSpec &spec)
        {
            std::vector<PointGroup> groups;
            switch (spec.sweep)
            {
            case SweepKind::Power:
                groups.push_back({spec.base.K, spec.base.N, spec.values});
                break;
            case SweepKind::Users:
                for (double v : spec.values)
                {
                    const int K = static_cast<int>(v);
                    groups.push_back({K, spec.n_rule.elements_for(K), {v}});
                }
                break;
            case SweepKind::Elements:
                for (double v : spec.values)
                    groups.push_back({spec.base.K, static_cast<int>(v), {v}});
                break;
            }
            return groups;
        }

        struct Stage1
        {
            std::optional<CMatrix> theta;
            std::string error;
            int iterations = 0;
            std::string stop_reason = "none";
            double time_ms = 0.0;
        };

        Stage1 design_stage1(Design d, const ChannelSet &cs, const CMatrix &random_seed, const SystemConfig &cfg)
        {
            Stage1 out;
            const auto start = Clock::now();
            try
            {
                auto from_ao = [&](const NullingResult &r) {
                    out.theta = r.scattering.theta();
                    out.iterations = r.trace.iterations;
                    out.stop_reason = std::string(to_string(r.trace.stop_reason));
                };
                switch (d)
                {
                case Design::BdrisMrt:
                    out.theta = mrt_scattering(cs).theta();
                    break;
                case Design::BdrisNullRand:
                    from_ao(ao_interference_nulling(cs, random_seed, cfg));
                    break;
                case Design::BdrisNullMrtInit:
                    from_ao(ao_interference_nulling(cs, mrt_scattering(cs).theta(), cfg));
                    break;
                case Design::DrisNull:
                    from_ao(dris_nulling(cs, random_seed, cfg));
                    break;
                case Design::BdrisMaxF:
                    out.theta = maxF_scattering(cs).theta();
                    break;
                case Design::BdrisMaxL2:
                    out.theta = maxl2_scattering(cs).theta();
                    break;
                case Design::BsZf:
                case Design::BsMrt:
                    out.theta = identity_scattering(cs.N()).theta();
                    break;
                case Design::NmimoZf:
                case Design::NmimoMrt:
                    // Relay matrices depend on the BS precoder and are built per point.
                    break;
                }
            }
            catch (const Error &e)
            {
                out.theta.reset();
                out.error = e.what();
            }
            out.time_ms = elapsed_ms(start);
            return out;
        }

        Precoder stage2(Design d, BsScheme s, const CMatrix &E, double P_max, double N0)
        {
            switch (s)
            {
            case BsScheme::UP:
                return uniform_power(static_cast<int>(E.rows()), P_max);
            case BsScheme::RM:
                if (is_nulling_design(d))
                    return water_filling(E.diagonal().cwiseAbs2(), P_max, N0);
                return optimize_power_sumrate(E, P_max, N0).precoder;
            case BsScheme::ZF:
                return zf_precoder(E, P_max);
            case BsScheme::WF:
                return water_filling(E.diagonal().cwiseAbs2(), P_max, N0);
            case BsScheme::MRT:
                return mrt_precoder(E, P_max);
            }
            throw ConfigError("unhandled BS scheme");
        }

        SweepRow flagged_row(Design d, BsScheme s, double value, int trial, const std::string &why)
        {
            SweepRow row{d, s, value, trial};
            row.sum_rate = std::numeric_limits<double>::quiet_NaN();
            row.null_residual = std::numeric_limits<double>::quiet_NaN();
            row.stop_reason = "error: " + why;
            row.flagged = true;
            return row;
        }
    } // namespace

    SweepResult run_experiment(const ExperimentSpec &spec)
    {
        spec.validate();
        SweepResult result;
        result.sweep = spec.sweep;
        const auto groups = group_points(spec);

        // Cells that can never run are logged once per sweep point.
        struct Cell
        {
            Design design;
            BsScheme scheme;
        };
        std::vector<Cell> cells;
        for (Design d : spec.designs)
        {
            if (auto fixed = intrinsic_scheme(d))
            {
                cells.push_back({d, *fixed});
                continue;
            }
            for (BsScheme s : spec.schemes)
            {
                if (auto why = incompatibility(d, s))
                {
                    for (const auto &g : groups)
                        for (double v : g.values)
                            result.skipped.push_back({d, s, v, *why});
                    continue;
                }
                cells.push_back({d, s});
            }
        }

        const int trials = spec.trials;
        const int items = static_cast<int>(groups.size()) * trials;
        std::vector<std::vector<SweepRow>> per_item(static_cast<std::size_t>(items));
        result.channel_hashes.assign(groups.size(), std::vector<std::uint64_t>(static_cast<std::size_t>(trials)));

        parallel_for(items, spec.workers, [&](int item) {
            const auto &group = groups[static_cast<std::size_t>(item / trials)];
            const int trial = item % trials;
            SystemConfig cfg = spec.base;
            cfg.K = group.K;
            cfg.N = group.N;
            if (!cfg.user_distances.empty() && static_cast<int>(cfg.user_distances.size()) != cfg.K)
                cfg.user_distances.clear();

            Rng channel_rng = make_stream(cfg.seed, static_cast<std::uint64_t>(trial), kChannelStream);
            const ChannelSet cs = draw_channel_set(cfg, channel_rng);
            result.channel_hashes[static_cast<std::size_t>(item / trials)][static_cast<std::size_t>(trial)] =
                hash_channels(cs);
            Rng init_rng = make_stream(cfg.seed, static_cast<std::uint64_t>(trial), kInitStream);
            const CMatrix random_seed = random_initial_scattering(cfg.N, init_rng);

            std::map<Design, Stage1> stage1;
            for (const auto &cell : cells)
                if (!stage1.count(cell.design))
                    stage1.emplace(cell.design, design_stage1(cell.design, cs, random_seed, cfg));

            auto &rows = per_item[static_cast<std::size_t>(item)];
            for (double value : group.values)
            {
                const double P_max = spec.sweep == SweepKind::Power ? dbm_to_mw(value) : cfg.P_max;
                for (const auto &cell : cells)
                {
                    const Stage1 &s1 = stage1.at(cell.design);
                    const auto start = Clock::now();
                    try
                    {
                        if (!s1.error.empty())
                            throw DegenerateError(s1.error);
                        CMatrix theta;
                        Precoder precoder;
                        if (cell.design == Design::NmimoZf || cell.design == Design::NmimoMrt)
                        {
                            const RelayConfig rc{spec.relay_power,
                                                 cell.design == Design::NmimoZf ? RelayMode::Zf : RelayMode::Mrt};
                            precoder = nmimo_bs_precoder(cs, rc.mode, P_max);
                            theta = nmimo_relay_matrix(cs, rc, precoder);
                        }
                        else
                        {
                            theta = *s1.theta;
                            precoder = stage2(cell.design, cell.scheme, equivalent_channel(cs, theta), P_max, cfg.N0);
                        }
                        const PerformanceReport report = evaluate(cs, theta, precoder, cfg.N0);
                        SweepRow row{cell.design, cell.scheme, value, trial};
                        row.sum_rate = report.sum_rate;
                        row.sinr.assign(report.sinr.data(), report.sinr.data() + report.sinr.size());
                        row.null_residual = report.null_residual / cs.residual_scale();
                        row.iterations = s1.iterations;
                        row.stop_reason = s1.stop_reason;
                        row.wall_time_ms = s1.time_ms + elapsed_ms(start);
                        rows.push_back(std::move(row));
                    }
                    catch (const Error &e)
                    {
                        rows.push_back(flagged_row(cell.design, cell.scheme, value, trial, e.what()));
                    }
                }
            }
        });

        for (auto &rows : per_item)
            for (auto &row : rows)
                result.rows.push_back(std::move(row));
        result.sort_rows();
        return result;
    }

    std::vector<SummaryRow> summarize(const SweepResult &res)
    {
        using Key = std::tuple<std::string_view, std::string_view, double>;
        std::map<Key, SummaryRow> acc;
        for (const auto &row : res.rows)
        {
            if (row.flagged)
                continue;
            const Key key{to_string(row.design), to_string(row.scheme), row.sweep_value};
            auto [it, fresh] = acc.try_emplace(key);
            SummaryRow &s = it->second;
            if (fresh)
            {
                s.design = row.design;
                s.scheme = row.scheme;
                s.sweep_value = row.sweep_value;
                s.rate_min = s.rate_max = row.sum_rate;
                s.residual_min = s.residual_max = row.null_residual;
            }
            s.count += 1;
            s.rate_mean += row.sum_rate;
            s.rate_min = std::min(s.rate_min, row.sum_rate);
            s.rate_max = std::max(s.rate_max, row.sum_rate);
            s.residual_mean += row.null_residual;
            s.residual_min = std::min(s.residual_min, row.null_residual);
            s.residual_max = std::max(s.residual_max, row.null_residual);
        }
        std::vector<SummaryRow> out;
        for (auto &[key, s] : acc)
        {
            s.rate_mean /= s.count;
            s.residual_mean /= s.count;
            out.push_back(s);
        }
        return out;
    }

    ConvergenceResult run_convergence(const ConvergenceSpec &spec)
    {
        spec.base.validate();
        if (spec.trials < 0 || spec.workers < 1)
            throw ConfigError("trials must be >= 0 and workers >= 1");

        struct TrialOutput
        {
            std::vector<TraceRow> rows;
            std::vector<ConvergenceRun> runs;
        };
        std::vector<TrialOutput> outputs(static_cast<std::size_t>(spec.trials));

        parallel_for(spec.trials, spec.workers, [&](int trial) {
            const SystemConfig &cfg = spec.base;
            Rng channel_rng = make_stream(cfg.seed, static_cast<std::uint64_t>(trial), kChannelStream);
            const ChannelSet cs = draw_channel_set(cfg, channel_rng);
            Rng init_rng = make_stream(cfg.seed, static_cast<std::uint64_t>(trial), kInitStream);
            const CMatrix seed =
                spec.mrt_init ? mrt_scattering(cs).theta() : random_initial_scattering(cfg.N, init_rng);

            auto &out = outputs[static_cast<std::size_t>(trial)];
            auto record = [&](const std::string &name, const NullingTrace &trace) {
                for (std::size_t i = 0; i < trace.residuals.size(); ++i)
                    out.rows.push_back({name, trial, static_cast<int>(i), trace.residuals[i],
                                        i == 0 ? std::numeric_limits<double>::quiet_NaN() : trace.deltas[i - 1]});
                out.runs.push_back({name, trial, trace.iterations, std::string(to_string(trace.stop_reason)),
                                    trace.iterations_to(1e-8)});
            };
            record("bdris-null", ao_interference_nulling(cs, seed, cfg).trace);
            if (spec.include_dris)
                record("dris-null", dris_nulling(cs, seed, cfg).trace);
        });

        ConvergenceResult result;
        for (auto &o : outputs)
        {
            result.rows.insert(result.rows.end(), o.rows.begin(), o.rows.end());
            result.runs.insert(result.runs.end(), o.runs.begin(), o.runs.end());
        }
        auto key = [](const TraceRow &r) { return std::make_tuple(r.design, r.trial, r.iteration); };
        std::stable_sort(result.rows.begin(), result.rows.end(),
                         [&](const TraceRow &a, const TraceRow &b) { return key(a) < key(b); });
        return result;
    }

    std::vector<DecompositionRow> run_decomposition(const SystemConfig &base, int trials, int workers)
    {
        base.validate();
        if (trials < 0 || workers < 1)
            throw ConfigError("trials must be >= 0 and workers >= 1");
        std::vector<std::array<DecompositionRow, 4>> per_trial(static_cast<std::size_t>(trials));
        parallel_for(trials, workers, [&](int trial) {
            Rng channel_rng = make_stream(base.seed, static_cast<std::uint64_t>(trial), kChannelStream);
            const ChannelSet cs = draw_channel_set(base, channel_rng);
            const RVector ones = RVector::Ones(cs.K());
            const CMatrix mrt = mrt_relaxed(cs);
            const CMatrix maxf = maxF_relaxed(cs);
            const std::array<std::pair<const char *, CMatrix>, 4> variants{{
                {"mrt-relaxed", mrt},
                {"mrt", symmetric_unitary(mrt)},
                {"maxF-relaxed", maxf},
                {"maxF", symmetric_unitary(maxf)},
            }};
            for (std::size_t i = 0; i < variants.size(); ++i)
            {
                const auto p = power_decomposition(cs, variants[i].second, ones);
                per_trial[static_cast<std::size_t>(trial)][i] = {variants[i].first, trial, p.signal_power_sum,
                                                                 p.interference_power_sum, p.frob_power};
            }
        });
        std::vector<DecompositionRow> rows;
        for (const auto &t : per_trial)
            rows.insert(rows.end(), t.begin(), t.end());
        std::stable_sort(rows.begin(), rows.end(), [](const auto &a, const auto &b) {
            return std::tie(a.design, a.trial) < std::tie(b.design, b.trial);
        });
        return rows;
    }
} // namespace bdris
