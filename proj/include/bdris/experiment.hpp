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

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bdris/config.hpp"
#include "bdris/relay.hpp"

namespace bdris
{
    enum class Design
    {
        BdrisMrt,
        BdrisNullRand,
        BdrisNullMrtInit,
        DrisNull,
        BdrisMaxF,
        BdrisMaxL2,
        BsZf,
        BsMrt,
        NmimoZf,
        NmimoMrt,
    };

    enum class BsScheme
    {
        UP,  // uniform power
        RM,  // rate maximization: water-filling for nulling designs, sum-rate power optimization otherwise
        ZF,  // zero-forcing precoding on E
        WF,  // water-filling on the diagonal of E
        MRT, // MRT precoding on E
    };

    std::string_view to_string(Design d);
    std::string_view to_string(BsScheme s);
    Design parse_design(std::string_view name);     // ConfigError on unknown names
    BsScheme parse_scheme(std::string_view name);   // ConfigError on unknown names
    const std::vector<Design> &all_designs();

    /// Designs whose stage-1 output targets a diagonal equivalent channel.
    bool is_nulling_design(Design d);

    /// BS scheme a benchmark design is tied to; nullopt for designs that take any scheme.
    std::optional<BsScheme> intrinsic_scheme(Design d);

    /// Reason a (design, scheme) cell cannot run, or nullopt when it can.
    std::optional<std::string> incompatibility(Design d, BsScheme s);

    enum class SweepKind
    {
        Power,    // values: P_max in dBm
        Users,    // values: K; N from the N-rule
        Elements, // values: N
    };

    std::string_view sweep_param_name(SweepKind k);

    /// N for a users sweep: N = factor * K, or a fixed N.
    struct NRule
    {
        bool fixed = false;
        int value = 5;

        int elements_for(int K) const { return fixed ? value : value * K; }
        static NRule parse(std::string_view text); // "5K", "K", "fixed:64"
    };

    struct ExperimentSpec
    {
        SystemConfig base;
        SweepKind sweep = SweepKind::Power;
        std::vector<double> values;
        NRule n_rule;
        std::vector<Design> designs;
        std::vector<BsScheme> schemes;
        int trials = 100;
        int workers = 1;
        double relay_power = dbm_to_mw(36.0);

        /// Throws ConfigError for an unusable spec.
        void validate() const;
    };

    struct SweepRow
    {
        Design design{};
        BsScheme scheme{};
        double sweep_value = 0.0;
        int trial = 0;
        double sum_rate = 0.0;       // NaN when flagged
        std::vector<double> sinr{}; // linear
        double null_residual = 0.0;  // divided by ChannelSet::residual_scale()
        int iterations = 0;
        std::string stop_reason{}; // AO stop reason, "none" for closed forms, "error: ..." when flagged
        double wall_time_ms = 0.0;
        bool flagged = false;
    };

    struct SkippedCell
    {
        Design design;
        BsScheme scheme;
        double sweep_value = 0.0;
        std::string reason;
    };

    struct SweepResult
    {
        SweepKind sweep = SweepKind::Power;
        std::vector<SweepRow> rows;
        std::vector<SkippedCell> skipped;
        /// Hash of every channel draw, indexed [point group][trial]; equal for all designs.
        std::vector<std::vector<std::uint64_t>> channel_hashes;

        void sort_rows();
    };

    /// Runs every design on paired channel draws. Deterministic for a fixed seed regardless
    /// of spec.workers.
    SweepResult run_experiment(const ExperimentSpec &spec);

    struct SummaryRow
    {
        Design design;
        BsScheme scheme;
        double sweep_value = 0.0;
        int count = 0;
        double rate_mean = 0.0, rate_min = 0.0, rate_max = 0.0;
        double residual_mean = 0.0, residual_min = 0.0, residual_max = 0.0;
    };

    /// Mean/min/max over trials per (design, scheme, value); flagged rows are left out.
    std::vector<SummaryRow> summarize(const SweepResult &res);

    // ----- Convergence traces ------------------------------------------------

    struct ConvergenceSpec
    {
        SystemConfig base;
        bool mrt_init = false;
        bool include_dris = true;
        int trials = 100;
        int workers = 1;
    };

    struct TraceRow
    {
        std::string design; // "bdris-null" or "dris-null"
        int trial = 0;
        int iteration = 0;
        double residual = 0.0;
        double delta = 0.0; // NaN at iteration 0
    };

    struct ConvergenceRun
    {
        std::string design;
        int trial = 0;
        int iterations = 0;
        std::string stop_reason;
        std::optional<int> iterations_to_1e8;
    };

    struct ConvergenceResult
    {
        std::vector<TraceRow> rows;
        std::vector<ConvergenceRun> runs;
    };

    ConvergenceResult run_convergence(const ConvergenceSpec &spec);

    // ----- Relaxed vs projected power decomposition --------------------------

    struct DecompositionRow
    {
        std::string design; // mrt-relaxed, mrt, maxF-relaxed, maxF
        int trial = 0;
        double signal_power = 0.0;
        double interference_power = 0.0;
        double frob_power = 0.0;
    };

    /// Signal/interference/Frobenius powers of E for unit stream powers.
    std::vector<DecompositionRow> run_decomposition(const SystemConfig &base, int trials, int workers);

    /// Runs fn(i) for i in [0, count) on `workers` threads.
    void parallel_for(int count, int workers, const std::function<void(int)> &fn);
} // namespace bdris
