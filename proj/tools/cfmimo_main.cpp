// SPDX-License-Identifier: Apache-2.0
//
// cfmimo: cell-free massive MIMO downlink clustering and scheduling simulator
// Copyright (C) 2026 the cfmimo authors
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

#include "cfmimo/xprun.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

namespace {

using cfmimo::xprun::ClusteringKind;
using cfmimo::xprun::ExperimentSpec;
using cfmimo::xprun::Scenario;
using cfmimo::xprun::SchedulerKind;

struct CommonOpts {
    std::string config_path;
    std::string snr = "-10:5:30";
    std::string out_path;
    std::string clustering = "none";
    std::string scheduler = "none";
    std::string lgrid;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int realizations = 100;
    long ber_bits = 100000;
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o)
{
    cmd->add_option("--config", o.config_path, "flat key = value config file");
    cmd->add_option("--seed", o.seed, "master PRNG seed (overrides config)")
        ->each([&o](const std::string&) { o.seed_set = true; });
    cmd->add_option("--snr", o.snr, "SNR grid in dB, min:step:max or single value");
    cmd->add_option("--realizations", o.realizations, "channel realizations")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", o.out_path, "output CSV path");
    cmd->add_option("--clustering", o.clustering, "cluster criterion")
        ->check(CLI::IsMember({"lsf", "bsr", "none"}));
    cmd->add_option("--scheduler", o.scheduler, "scheduler")
        ->check(CLI::IsMember({"gr", "fgr", "none"}));
    cmd->add_option("--threads", o.threads, "worker threads for realizations")
        ->check(CLI::PositiveNumber);
}

ExperimentSpec build_spec(Scenario scenario, const CommonOpts& o)
{
    ExperimentSpec spec;
    spec.scenario = scenario;
    if (!o.config_path.empty())
        spec.config = cfmimo::xprun::parse_config_file(o.config_path);
    if (o.seed_set) spec.config.seed = o.seed;
    spec.realizations = o.realizations;
    spec.out_path = o.out_path;
    spec.threads = o.threads;
    spec.ber_bits_per_point = o.ber_bits;
    if (scenario == Scenario::kSumRate || scenario == Scenario::kBer)
        spec.snr_grid_db = cfmimo::xprun::parse_grid(o.snr);
    if (o.clustering == "lsf") spec.clustering = ClusteringKind::kLsf;
    else if (o.clustering == "bsr") spec.clustering = ClusteringKind::kBsr;
    if (o.scheduler == "gr") spec.scheduler = SchedulerKind::kGr;
    else if (o.scheduler == "fgr") spec.scheduler = SchedulerKind::kFgr;
    if (!o.lgrid.empty())
        for (double v : cfmimo::xprun::parse_grid(o.lgrid))
            spec.l_grid.push_back(static_cast<int>(v));
    return spec;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"cell-free massive MIMO downlink clustering/scheduling simulator"};
    app.require_subcommand(1);

    struct Sub {
        Scenario scenario;
        CLI::App* cmd;
        CommonOpts opts;
    };
    std::vector<Sub> subs;
    subs.push_back({Scenario::kSumRate,
                    app.add_subcommand("sumrate", "mean sum-rate vs SNR for CF / LSF / BSR"),
                    {}});
    subs.push_back({Scenario::kBer,
                    app.add_subcommand("ber", "QPSK bit error rate vs SNR"), {}});
    subs.push_back({Scenario::kSchedule,
                    app.add_subcommand("schedule", "per-slot frame schedules"), {}});
    subs.push_back({Scenario::kComplexity,
                    app.add_subcommand("complexity", "FLOP/signaling models vs L"), {}});
    subs.push_back({Scenario::kFairness,
                    app.add_subcommand("fairness", "per-UE scheduling counts, Gr vs F-Gr"),
                    {}});
    for (auto& s : subs) {
        add_common(s.cmd, s.opts);
        if (s.scenario == Scenario::kBer)
            s.cmd->add_option("--bits", s.opts.ber_bits, "total bits per SNR point")
                ->check(CLI::PositiveNumber);
        if (s.scenario == Scenario::kComplexity)
            s.cmd->add_option("--lgrid", s.opts.lgrid, "AP-count sweep, min:step:max");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        for (const auto& s : subs) {
            if (!s.cmd->parsed()) continue;
            const ExperimentSpec spec = build_spec(s.scenario, s.opts);
            const cfmimo::xprun::Table table = cfmimo::xprun::run(spec);
            if (spec.out_path.empty())
                std::cout << cfmimo::xprun::to_csv(table);
            else
                std::cout << "wrote " << table.rows.size() << " rows to "
                          << spec.out_path << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
