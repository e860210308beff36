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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bdris/experiment.hpp"

namespace bdris
{
    /// Fixed leading columns of a sweep CSV; per-user columns sinr_db_1..K follow.
    inline constexpr const char *kSweepHeader =
        "design,bs_scheme,sweep_param,sweep_value,trial,sum_rate_bpshz,null_residual,iterations,stop_reason";
    inline constexpr const char *kTraceHeader = "design,trial,iteration,residual,delta";
    inline constexpr const char *kDecompositionHeader = "design,trial,signal_power,interference_power,frob_power";
    inline constexpr const char *kSummaryHeader =
        "design,bs_scheme,sweep_param,sweep_value,trials,sum_rate_mean,sum_rate_min,sum_rate_max,"
        "null_residual_mean,null_residual_min,null_residual_max";

    /// Rows are written in canonical order (design, scheme, value, trial); numbers use
    /// 17 significant digits in scientific notation. SINR columns are in dB.
    void write_sweep_csv(const SweepResult &res, std::ostream &os);
    void write_trace_csv(const std::vector<TraceRow> &rows, std::ostream &os);
    void write_decomposition_csv(const std::vector<DecompositionRow> &rows, std::ostream &os);
    void write_summary_csv(const std::vector<SummaryRow> &rows, SweepKind sweep, std::ostream &os);

    void write_sweep_json(const SweepResult &res, std::ostream &os);
    void write_trace_json(const ConvergenceResult &res, std::ostream &os);
    void write_decomposition_json(const std::vector<DecompositionRow> &rows, std::ostream &os);

    /// Writes the sweep CSV to path; throws Error naming the path on I/O failure.
    void emit_csv(const SweepResult &res, const std::string &path);

    /// Parses a sweep CSV back into rows (SINR columns converted to linear).
    std::vector<SweepRow> parse_sweep_csv(std::istream &is);

    /// Settings read from a JSON config file. Only keys present in the file are set.
    struct ConfigFile
    {
        SystemConfig system;
        std::optional<int> trials;
        std::optional<int> workers;
        std::optional<double> relay_power_dbm;
    };

    /// Parses and validates the JSON layout on top of `base`; unknown keys and wrong types
    /// are ConfigErrors.
    ConfigFile parse_config_json(const std::string &text, const SystemConfig &base = {});
    ConfigFile load_config_file(const std::string &path, const SystemConfig &base = {});
} // namespace bdris
