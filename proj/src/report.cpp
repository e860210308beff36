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

#include "bdris/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace bdris
{
    namespace
    {
        std::string num(double v)
        {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.16e", v);
            return buf;
        }

        std::string clean(std::string s)
        {
            std::replace(s.begin(), s.end(), ',', ';');
            std::replace(s.begin(), s.end(), '\n', ' ');
            return s;
        }

        std::size_t max_users(const std::vector<SweepRow> &rows)
        {
            std::size_t k = 0;
            for (const auto &r : rows)
                k = std::max(k, r.sinr.size());
            return k;
        }

        std::vector<std::string> split(const std::string &line)
        {
            std::vector<std::string> out;
            std::string field;
            std::istringstream ss(line);
            while (std::getline(ss, field, ','))
                out.push_back(field);
            if (!line.empty() && line.back() == ',')
                out.emplace_back();
            return out;
        }

    } // namespace

    void write_sweep_csv(const SweepResult &res, std::ostream &os)
    {
        SweepResult sorted = res;
        sorted.sort_rows();
        const std::size_t K = max_users(sorted.rows);
        os << kSweepHeader;
        for (std::size_t k = 1; k <= K; ++k)
            os << ",sinr_db_" << k;
        os << '\n';
        const std::string param(sweep_param_name(res.sweep));
        for (const auto &r : sorted.rows)
        {
            os << to_string(r.design) << ',' << to_string(r.scheme) << ',' << param << ',' << num(r.sweep_value) << ','
               << r.trial << ',' << num(r.sum_rate) << ',' << num(r.null_residual) << ',' << r.iterations << ','
               << clean(r.stop_reason);
            for (std::size_t k = 0; k < K; ++k)
            {
                os << ',';
                if (k < r.sinr.size())
                    os << num(10.0 * std::log10(r.sinr[k]));
            }
            os << '\n';
        }
    }

    void write_trace_csv(const std::vector<TraceRow> &rows, std::ostream &os)
    {
        os << kTraceHeader << '\n';
        for (const auto &r : rows)
            os << r.design << ',' << r.trial << ',' << r.iteration << ',' << num(r.residual) << ',' << num(r.delta)
               << '\n';
    }

    void write_decomposition_csv(const std::vector<DecompositionRow> &rows, std::ostream &os)
    {
        os << kDecompositionHeader << '\n';
        for (const auto &r : rows)
            os << r.design << ',' << r.trial << ',' << num(r.signal_power) << ',' << num(r.interference_power) << ','
               << num(r.frob_power) << '\n';
    }

    void write_summary_csv(const std::vector<SummaryRow> &rows, SweepKind sweep, std::ostream &os)
    {
        os << kSummaryHeader << '\n';
        for (const auto &s : rows)
            os << to_string(s.design) << ',' << to_string(s.scheme) << ',' << sweep_param_name(sweep) << ','
               << num(s.sweep_value) << ',' << s.count << ',' << num(s.rate_mean) << ',' << num(s.rate_min) << ','
               << num(s.rate_max) << ',' << num(s.residual_mean) << ',' << num(s.residual_min) << ','
               << num(s.residual_max) << '\n';
    }

    void write_sweep_json(const SweepResult &res, std::ostream &os)
    {
        SweepResult sorted = res;
        sorted.sort_rows();
        nlohmann::json rows = nlohmann::json::array();
        for (const auto &r : sorted.rows)
        {
            nlohmann::json sinr_db = nlohmann::json::array();
            for (double g : r.sinr)
                sinr_db.push_back(10.0 * std::log10(g));
            rows.push_back({{"design", to_string(r.design)},
                            {"bs_scheme", to_string(r.scheme)},
                            {"sweep_param", sweep_param_name(res.sweep)},
                            {"sweep_value", r.sweep_value},
                            {"trial", r.trial},
                            // NaN and inf become null in JSON.
                            {"sum_rate_bpshz", r.sum_rate},
                            {"null_residual", r.null_residual},
                            {"iterations", r.iterations},
                            {"stop_reason", r.stop_reason},
                            {"sinr_db", sinr_db},
                            {"wall_time_ms", r.wall_time_ms}});
        }
        nlohmann::json skipped = nlohmann::json::array();
        for (const auto &s : res.skipped)
            skipped.push_back({{"design", to_string(s.design)},
                               {"bs_scheme", to_string(s.scheme)},
                               {"sweep_value", s.sweep_value},
                               {"reason", s.reason}});
        os << nlohmann::json{{"rows", rows}, {"skipped", skipped}}.dump(1) << '\n';
    }

    void write_trace_json(const ConvergenceResult &res, std::ostream &os)
    {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto &r : res.rows)
            rows.push_back({{"design", r.design},
                            {"trial", r.trial},
                            {"iteration", r.iteration},
                            {"residual", r.residual},
                            {"delta", r.delta}});
        nlohmann::json runs = nlohmann::json::array();
        for (const auto &r : res.runs)
            runs.push_back({{"design", r.design},
                            {"trial", r.trial},
                            {"iterations", r.iterations},
                            {"stop_reason", r.stop_reason},
                            {"iterations_to_1e-8", r.iterations_to_1e8 ? nlohmann::json(*r.iterations_to_1e8)
                                                                       : nlohmann::json(nullptr)}});
        os << nlohmann::json{{"rows", rows}, {"runs", runs}}.dump(1) << '\n';
    }

    void write_decomposition_json(const std::vector<DecompositionRow> &rows, std::ostream &os)
    {
        nlohmann::json out = nlohmann::json::array();
        for (const auto &r : rows)
            out.push_back({{"design", r.design},
                           {"trial", r.trial},
                           {"signal_power", r.signal_power},
                           {"interference_power", r.interference_power},
                           {"frob_power", r.frob_power}});
        os << out.dump(1) << '\n';
    }

    void emit_csv(const SweepResult &res, const std::string &path)
    {
        std::ofstream f(path);
        if (!f)
            throw Error("cannot open '" + path + "' for writing");
        write_sweep_csv(res, f);
        f.flush();
        if (!f)
            throw Error("failed writing '" + path + "'");
    }

    std::vector<SweepRow> parse_sweep_csv(std::istream &is)
    {
        std::string line;
        if (!std::getline(is, line))
            throw Error("parse_sweep_csv: missing header");
        const auto header = split(line);
        const auto fixed = split(kSweepHeader);
        if (header.size() < fixed.size() || !std::equal(fixed.begin(), fixed.end(), header.begin()))
            throw Error("parse_sweep_csv: unexpected header");
        const std::size_t K = header.size() - fixed.size();

        std::vector<SweepRow> rows;
        while (std::getline(is, line))
        {
            if (line.empty())
                continue;
            const auto f = split(line);
            if (f.size() != header.size())
                throw Error("parse_sweep_csv: wrong field count in '" + line + "'");
            SweepRow r{parse_design(f[0]), parse_scheme(f[1])};
            r.sweep_value = std::strtod(f[3].c_str(), nullptr);
            r.trial = std::stoi(f[4]);
            r.sum_rate = std::strtod(f[5].c_str(), nullptr);
            r.null_residual = std::strtod(f[6].c_str(), nullptr);
            r.iterations = std::stoi(f[7]);
            r.stop_reason = f[8];
            r.flagged = r.stop_reason.rfind("error:", 0) == 0;
            for (std::size_t k = 0; k < K; ++k)
                if (!f[fixed.size() + k].empty())
                    r.sinr.push_back(std::pow(10.0, std::strtod(f[fixed.size() + k].c_str(), nullptr) / 10.0));
            rows.push_back(std::move(r));
        }
        return rows;
    }

    ConfigFile parse_config_json(const std::string &text, const SystemConfig &base)
    {
        nlohmann::json j;
        try
        {
            j = nlohmann::json::parse(text);
        }
        catch (const nlohmann::json::parse_error &e)
        {
            throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!j.is_object())
            throw ConfigError("config must be a JSON object");

        ConfigFile out;
        out.system = base;
        SystemConfig &c = out.system;
        auto number = [&](const std::string &key, const nlohmann::json &v) {
            if (!v.is_number())
                throw ConfigError("config key '" + key + "' must be a number");
            return v.get<double>();
        };
        auto integer = [&](const std::string &key, const nlohmann::json &v) {
            if (!v.is_number_integer())
                throw ConfigError("config key '" + key + "' must be an integer");
            return v.get<long long>();
        };

        for (const auto &[key, v] : j.items())
        {
            if (key == "users")
                c.K = static_cast<int>(integer(key, v));
            else if (key == "elements")
                c.N = static_cast<int>(integer(key, v));
            else if (key == "pmax_dbm")
                c.P_max = dbm_to_mw(number(key, v));
            else if (key == "noise_dbm")
                c.N0 = dbm_to_mw(number(key, v));
            else if (key == "c0_db")
                c.C0 = db_to_linear(number(key, v));
            else if (key == "d0_m")
                c.d0 = number(key, v);
            else if (key == "pathloss_exponent")
                c.rho = number(key, v);
            else if (key == "d_bs_ris_m")
                c.d_bs_ris = number(key, v);
            else if (key == "d_ris_user_m")
            {
                if (v.is_array())
                {
                    c.user_distances.clear();
                    for (const auto &d : v)
                        c.user_distances.push_back(number(key, d));
                }
                else
                    c.d_ris_user = number(key, v);
            }
            else if (key == "large_scale_fading")
            {
                if (!v.is_boolean())
                    throw ConfigError("config key 'large_scale_fading' must be a boolean");
                c.large_scale_fading = v.get<bool>();
            }
            else if (key == "eps_rel")
                c.eps_rel = number(key, v);
            else if (key == "eps_null")
                c.eps_null = number(key, v);
            else if (key == "max_iter")
                c.max_iter = static_cast<int>(integer(key, v));
            else if (key == "seed")
            {
                if (!v.is_number_unsigned())
                    throw ConfigError("config key 'seed' must be a non-negative integer");
                c.seed = v.get<std::uint64_t>();
            }
            else if (key == "trials")
                out.trials = static_cast<int>(integer(key, v));
            else if (key == "workers")
                out.workers = static_cast<int>(integer(key, v));
            else if (key == "relay_power_dbm")
                out.relay_power_dbm = number(key, v);
            else
                throw ConfigError("unknown config key '" + key + "'");
        }
        c.validate();
        if (out.trials && *out.trials < 0)
            throw ConfigError("trials must be >= 0");
        if (out.workers && *out.workers < 1)
            throw ConfigError("workers must be >= 1");
        return out;
    }

    ConfigFile load_config_file(const std::string &path, const SystemConfig &base)
    {
        std::ifstream f(path);
        if (!f)
            throw ConfigError("cannot read config file '" + path + "'");
        std::stringstream ss;
        ss << f.rdbuf();
        return parse_config_json(ss.str(), base);
    }
} // namespace bdris
