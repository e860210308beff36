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

// bdris-sim: Monte-Carlo driver for BD-RIS interference nulling experiments.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bdris/experiment.hpp"
#include "bdris/report.hpp"

using namespace bdris;

namespace
{
    constexpr int kExitConfig = 1; // also I/O failures
    constexpr int kExitDegenerate = 2;

    struct Globals
    {
        std::string config;
        std::optional<std::uint64_t> seed;
        std::optional<int> trials;
        std::optional<int> workers;
        bool json = false;
    };

    struct Resolved
    {
        SystemConfig system;
        int trials = 100;
        int workers = 1;
        double relay_power = dbm_to_mw(36.0);
    };

    // Defaults, then the config file, then command-line flags.
    Resolved resolve(const Globals &g, const SystemConfig &defaults)
    {
        Resolved r;
        r.system = defaults;
        if (!g.config.empty())
        {
            const ConfigFile file = load_config_file(g.config, defaults);
            r.system = file.system;
            if (file.trials)
                r.trials = *file.trials;
            if (file.workers)
                r.workers = *file.workers;
            if (file.relay_power_dbm)
                r.relay_power = dbm_to_mw(*file.relay_power_dbm);
        }
        if (g.seed)
            r.system.seed = *g.seed;
        if (g.trials)
            r.trials = *g.trials;
        if (g.workers)
            r.workers = *g.workers;
        return r;
    }

    // Opens `path` for writing, or stdout for "-".
    class Output
    {
    public:
        explicit Output(const std::string &path)
        {
            if (path.empty() || path == "-")
                return;
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_)
                throw Error("cannot open '" + path + "' for writing");
            path_ = path;
        }

        std::ostream &stream() { return file_ ? *file_ : std::cout; }

        void finish()
        {
            stream().flush();
            if (file_ && !*file_)
                throw Error("write to '" + path_ + "' failed");
        }

    private:
        std::unique_ptr<std::ofstream> file_;
        std::string path_;
    };

    std::vector<Design> parse_designs(const std::vector<std::string> &names)
    {
        if (names.empty())
            return all_designs();
        std::vector<Design> out;
        for (const auto &n : names)
            out.push_back(parse_design(n));
        return out;
    }

    std::vector<BsScheme> parse_schemes(const std::vector<std::string> &names)
    {
        if (names.empty())
            return {BsScheme::UP, BsScheme::RM, BsScheme::ZF, BsScheme::WF};
        std::vector<BsScheme> out;
        for (const auto &n : names)
            out.push_back(parse_scheme(n));
        return out;
    }

    struct SweepOptions
    {
        std::vector<std::string> designs;
        std::vector<std::string> schemes;
        std::vector<double> pmax_dbm;
        std::vector<int> users;
        std::vector<int> elements;
        std::string n_rule = "5K";
        std::string out = "-";
        std::string summary;
    };

    int run_sweep(const Globals &g, SweepKind kind, const SweepOptions &o)
    {
        const Resolved r = resolve(g, SystemConfig{});
        ExperimentSpec spec;
        spec.base = r.system;
        spec.sweep = kind;
        spec.trials = r.trials;
        spec.workers = r.workers;
        spec.relay_power = r.relay_power;
        spec.designs = parse_designs(o.designs);
        spec.schemes = parse_schemes(o.schemes);

        // Single-valued flags fix the non-swept parameters.
        switch (kind)
        {
        case SweepKind::Power:
            spec.values = o.pmax_dbm;
            if (o.users.size() == 1)
                spec.base.K = o.users[0];
            if (o.elements.size() == 1)
                spec.base.N = o.elements[0];
            break;
        case SweepKind::Users:
            spec.values.assign(o.users.begin(), o.users.end());
            spec.n_rule = NRule::parse(o.n_rule);
            if (o.pmax_dbm.size() == 1)
                spec.base.P_max = dbm_to_mw(o.pmax_dbm[0]);
            break;
        case SweepKind::Elements:
            spec.values.assign(o.elements.begin(), o.elements.end());
            if (o.users.size() == 1)
                spec.base.K = o.users[0];
            if (o.pmax_dbm.size() == 1)
                spec.base.P_max = dbm_to_mw(o.pmax_dbm[0]);
            break;
        }
        if (kind != SweepKind::Power && o.pmax_dbm.size() > 1)
            throw ConfigError("--pmax-dbm takes a single value outside sweep-power");

        const SweepResult res = run_experiment(spec);
        for (const auto &s : res.skipped)
            std::cerr << "skipped " << to_string(s.design) << "/" << to_string(s.scheme) << " at "
                      << sweep_param_name(kind) << "=" << s.sweep_value << ": " << s.reason << "\n";

        Output out(o.out);
        if (g.json)
            write_sweep_json(res, out.stream());
        else
            write_sweep_csv(res, out.stream());
        out.finish();

        if (!o.summary.empty())
        {
            Output sum(o.summary);
            write_summary_csv(summarize(res), kind, sum.stream());
            sum.finish();
        }

        const auto flagged = std::count_if(res.rows.begin(), res.rows.end(), [](const SweepRow &row) { return row.flagged; });
        if (flagged > 0)
            std::cerr << flagged << " of " << res.rows.size() << " rows flagged\n";
        if (!res.rows.empty() && flagged == static_cast<long>(res.rows.size()))
            return kExitDegenerate;
        return 0;
    }

    struct ConvergeOptions
    {
        std::optional<int> users;
        std::optional<int> elements;
        std::string init = "rand";
        bool no_dris = false;
        std::string out = "-";
    };

    int run_converge(const Globals &g, const ConvergeOptions &o)
    {
        SystemConfig defaults;
        defaults.K = 8;
        defaults.N = 144;
        defaults.eps_null = 1e-10;
        defaults.max_iter = 10000;
        const Resolved r = resolve(g, defaults);

        ConvergenceSpec spec;
        spec.base = r.system;
        if (o.users)
            spec.base.K = *o.users;
        if (o.elements)
            spec.base.N = *o.elements;
        if (o.init != "rand" && o.init != "mrt")
            throw ConfigError("--init must be rand or mrt");
        spec.mrt_init = o.init == "mrt";
        spec.include_dris = !o.no_dris;
        spec.trials = r.trials;
        spec.workers = r.workers;

        const ConvergenceResult res = run_convergence(spec);
        Output out(o.out);
        if (g.json)
            write_trace_json(res, out.stream());
        else
            write_trace_csv(res.rows, out.stream());
        out.finish();

        for (const std::string name : {"bdris-null", "dris-null"})
        {
            std::vector<int> hits;
            int total = 0;
            for (const auto &run : res.runs)
                if (run.design == name)
                {
                    ++total;
                    if (run.iterations_to_1e8)
                        hits.push_back(*run.iterations_to_1e8);
                }
            if (total == 0)
                continue;
            std::sort(hits.begin(), hits.end());
            std::cerr << name << ": " << hits.size() << "/" << total << " trials reached 1e-8";
            if (!hits.empty())
                std::cerr << ", median iterations " << hits[hits.size() / 2];
            std::cerr << "\n";
        }
        return 0;
    }

    struct DecomposeOptions
    {
        std::optional<int> users;
        std::optional<int> elements;
        std::string out = "-";
    };

    int run_decompose(const Globals &g, const DecomposeOptions &o)
    {
        const Resolved r = resolve(g, SystemConfig{});
        SystemConfig cfg = r.system;
        if (o.users)
            cfg.K = *o.users;
        if (o.elements)
            cfg.N = *o.elements;
        const auto rows = run_decomposition(cfg, r.trials, r.workers);
        Output out(o.out);
        if (g.json)
            write_decomposition_json(rows, out.stream());
        else
            write_decomposition_csv(rows, out.stream());
        out.finish();
        return 0;
    }

    void add_sweep_flags(CLI::App *cmd, SweepOptions &o)
    {
        cmd->add_option("--designs", o.designs, "Designs to run (default: all)")->delimiter(',');
        cmd->add_option("--schemes", o.schemes, "BS schemes: UP, RM, ZF, WF, MRT (default: UP,RM,ZF,WF)")
            ->delimiter(',');
        cmd->add_option("--out", o.out, "Output path, '-' for stdout");
        cmd->add_option("--summary", o.summary, "Also write mean/min/max per cell to this path");
    }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Monte-Carlo simulator for BD-RIS passive beamforming"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--config", g.config, "JSON config file");
    app.add_option("--seed", g.seed, "Base RNG seed");
    app.add_option("--trials", g.trials, "Monte-Carlo trials")->check(CLI::NonNegativeNumber);
    app.add_option("--workers", g.workers, "Worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--json", g.json, "Emit JSON instead of CSV");

    ConvergeOptions conv;
    auto *converge = app.add_subcommand("converge", "Residual traces of the nulling AO (BD-RIS vs D-RIS)");
    converge->add_option("--k", conv.users, "Users (default 8)");
    converge->add_option("--n", conv.elements, "RIS elements (default 144)");
    converge->add_option("--init", conv.init, "Initial point: rand or mrt");
    converge->add_flag("--no-dris", conv.no_dris, "Skip the D-RIS comparator");
    converge->add_option("--out", conv.out, "Output path, '-' for stdout");

    SweepOptions power;
    auto *sweep_power = app.add_subcommand("sweep-power", "Sum rate versus P_max");
    sweep_power->add_option("--pmax-dbm", power.pmax_dbm, "P_max values in dBm")->delimiter(',')->required();
    sweep_power->add_option("--k", power.users, "Users");
    sweep_power->add_option("--n", power.elements, "RIS elements");
    add_sweep_flags(sweep_power, power);

    SweepOptions users;
    auto *sweep_users = app.add_subcommand("sweep-users", "Sum rate versus the number of users");
    sweep_users->add_option("--k", users.users, "User counts")->delimiter(',')->required();
    sweep_users->add_option("--n-rule", users.n_rule, "Elements per point: <a>K or fixed:<N>");
    sweep_users->add_option("--pmax-dbm", users.pmax_dbm, "P_max in dBm");
    add_sweep_flags(sweep_users, users);

    SweepOptions elems;
    auto *sweep_elements = app.add_subcommand("sweep-elements", "Sum rate versus the number of RIS elements");
    sweep_elements->add_option("--n", elems.elements, "Element counts")->delimiter(',')->required();
    sweep_elements->add_option("--k", elems.users, "Users");
    sweep_elements->add_option("--pmax-dbm", elems.pmax_dbm, "P_max in dBm");
    add_sweep_flags(sweep_elements, elems);

    DecomposeOptions dec;
    auto *decompose = app.add_subcommand("decompose", "Signal/interference/Frobenius powers, relaxed vs projected");
    decompose->add_option("--k", dec.users, "Users (default 5)");
    decompose->add_option("--n", dec.elements, "RIS elements (default 64)");
    decompose->add_option("--out", dec.out, "Output path, '-' for stdout");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try
    {
        if (*converge)
            return run_converge(g, conv);
        if (*sweep_power)
            return run_sweep(g, SweepKind::Power, power);
        if (*sweep_users)
            return run_sweep(g, SweepKind::Users, users);
        if (*sweep_elements)
            return run_sweep(g, SweepKind::Elements, elems);
        if (*decompose)
            return run_decompose(g, dec);
    }
    catch (const ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    catch (const DegenerateError &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerate;
    }
    catch (const SingularityError &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerate;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return 0;
}
