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

#include "cfmimo/cluster.hpp"
#include "cfmimo/metrics.hpp"
#include "cfmimo/netgen.hpp"
#include "cfmimo/precode.hpp"
#include "cfmimo/rates.hpp"
#include "cfmimo/rng.hpp"
#include "cfmimo/sched.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

namespace cfmimo::xprun {

namespace {

constexpr double kPowerBudget = 1.0;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// fan realizations out to a small worker pool; each item writes its own
// result slot, so the reduction order never depends on thread timing
void parallel_for(int n_items, int threads, const std::function<void(int)>& body)
{
    threads = std::max(1, std::min(threads, n_items));
    if (threads == 1) {
        for (int i = 0; i < n_items; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            for (int i = t; i < n_items; i += threads) body(i);
        });
    }
    for (std::thread& th : pool) th.join();
}

NetworkConfig at_snr(const NetworkConfig& cfg, double snr_db)
{
    NetworkConfig out = cfg;
    out.noise_var = 1.0;
    out.rho_f = db_to_linear(snr_db);
    return out;
}

// sum-rate of the first n UEs without scheduling
double static_rate(const ChannelSet<double>& chan, const ClusterAssignment* clusters,
                   const NetworkConfig& cfg)
{
    std::vector<int> served(cfg.n);
    for (int k = 0; k < cfg.n; ++k) served[k] = k;
    const ComplexMatrix<double> gh = cluster::masked_columns(chan.g_hat, clusters, served);
    const ComplexMatrix<double> gt = cluster::masked_columns(chan.g_tilde, clusters, served);
    const Precoder<double> p = precode::zf_precoder(gh, kPowerBudget);
    return rates::sum_rate(gh, gt, p, cfg.rho_f, cfg.noise_var).sum_rate;
}

double variant_rate(const ChannelSet<double>& chan, const ClusterAssignment* clusters,
                    const NetworkConfig& cfg, SchedulerKind scheduler)
{
    switch (scheduler) {
    case SchedulerKind::kNone:
        return static_rate(chan, clusters, cfg);
    case SchedulerKind::kFgr: {
        const Schedule s = sched::fgr_schedule(chan, clusters, cfg);
        return sched::average_sum_rate(s, cfg.n, cfg.slots());
    }
    case SchedulerKind::kGr: {
        const Schedule s = sched::gr_schedule_frame(chan, clusters, cfg);
        return sched::average_sum_rate(s, cfg.n, cfg.slots());
    }
    }
    return 0.0;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

void ExperimentSpec::validate() const
{
    config.validate();
    if (realizations < 1)
        throw std::invalid_argument("ExperimentSpec: realizations must be >= 1");
    if ((scenario == Scenario::kSumRate || scenario == Scenario::kBer)
        && snr_grid_db.empty())
        throw std::invalid_argument("ExperimentSpec: SNR grid must not be empty");
    if (ber_bits_per_point < 1)
        throw std::invalid_argument("ExperimentSpec: ber_bits_per_point must be >= 1");
    for (int l : l_grid)
        if (l < 1)
            throw std::invalid_argument("ExperimentSpec: L grid entries must be >= 1");
}

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string to_csv(const Table& table)
{
    std::ostringstream out;
    for (std::size_t c = 0; c < table.header.size(); ++c)
        out << (c ? "," : "") << table.header[c];
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << (c ? "," : "") << row[c];
        out << "\n";
    }
    return out.str();
}

void write_csv(const Table& table, const std::string& path)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open output file: " + path);
    f << to_csv(table);
    if (!f)
        throw std::runtime_error("failed writing output file: " + path);
}

NetworkConfig parse_config_file(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        throw std::runtime_error("cannot open config file: " + path);
    NetworkConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno)
                                     + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "L") cfg.L = std::stoi(value);
            else if (key == "N") cfg.N = std::stoi(value);
            else if (key == "K") cfg.K = std::stoi(value);
            else if (key == "n") cfg.n = std::stoi(value);
            else if (key == "area_side_m") cfg.area_side_m = std::stod(value);
            else if (key == "rho_f") cfg.rho_f = std::stod(value);
            else if (key == "noise_var") cfg.noise_var = std::stod(value);
            else if (key == "csi_tau") cfg.csi_tau = std::stod(value);
            else if (key == "shadow_sigma_db") cfg.shadow_sigma_db = std::stod(value);
            else if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "T") cfg.T = std::stoi(value);
            else if (key == "d0_m") cfg.d0_m = std::stod(value);
            else if (key == "d1_m") cfg.d1_m = std::stod(value);
            else if (key == "rate_formula_power_exponent")
                cfg.rate_formula_power_exponent = std::stod(value);
            else
                throw std::runtime_error("unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw std::runtime_error(path + ":" + std::to_string(lineno)
                                     + ": bad value for '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

std::vector<double> parse_grid(const std::string& text)
{
    std::vector<double> out;
    const auto c1 = text.find(':');
    if (c1 == std::string::npos) {
        out.push_back(std::stod(text));
        return out;
    }
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw std::invalid_argument("grid must be 'min:step:max' or a single value");
    const double lo = std::stod(text.substr(0, c1));
    const double step = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    const double hi = std::stod(text.substr(c2 + 1));
    if (!(step > 0.0))
        throw std::invalid_argument("grid step must be > 0");
    if (hi < lo)
        throw std::invalid_argument("grid max must be >= min");
    for (int i = 0;; ++i) {
        const double v = lo + i * step;
        if (v > hi + 1e-9 * std::max(1.0, std::abs(hi))) break;
        out.push_back(v);
    }
    return out;
}

Drop make_drop(const NetworkConfig& cfg)
{
    cfg.validate();
    Drop drop;
    Rng geom_rng(substream_seed(cfg.seed, 0, Stream::kGeometry));
    drop.geom = netgen::place_network(cfg, geom_rng);
    Rng ls_rng(substream_seed(cfg.seed, 0, Stream::kLargeScale));
    drop.beta_raw = netgen::large_scale_fading(drop.geom, cfg, ls_rng);
    drop.beta = drop.beta_raw / drop.beta_raw.mean();
    return drop;
}

ChannelSet<double> draw_realization(const Drop& drop, const NetworkConfig& cfg,
                                    int realization)
{
    Rng rng(substream_seed(cfg.seed, static_cast<std::uint64_t>(realization),
                           Stream::kFading));
    return netgen::split_csi(drop.beta, cfg, rng);
}

std::optional<ClusterAssignment> build_clusters(ClusteringKind kind, const Drop& drop,
                                                const ChannelSet<double>& chan,
                                                const NetworkConfig& cfg)
{
    switch (kind) {
    case ClusteringKind::kNone:
        return std::nullopt;
    case ClusteringKind::kLsf:
        return cluster::lsf_clusters(drop.beta, cluster::lsf_threshold(drop.beta));
    case ClusteringKind::kBsr: {
        // provisional full-population precoder: only its column norms enter
        // the per-link rates
        const Precoder<double> full = precode::zf_precoder(chan.g_hat, kPowerBudget);
        const Eigen::MatrixXd sr =
            rates::per_link_rates(chan.g_hat, chan.g_tilde, full.p, cfg.rho_f,
                                  cfg.noise_var, cfg.rate_formula_power_exponent);
        return cluster::bsr_augment(cluster::sr_clusters(sr, cluster::sr_threshold(sr)), sr);
    }
    }
    return std::nullopt;
}

Table run_sumrate(const ExperimentSpec& spec)
{
    spec.validate();
    const Drop drop = make_drop(spec.config);
    Table table;
    table.header = {"snr_db", "cf", "lsf_uccf", "bsr_uccf"};
    for (double snr : spec.snr_grid_db) {
        const NetworkConfig cfg = at_snr(spec.config, snr);
        std::vector<std::array<double, 3>> per_real(spec.realizations);
        parallel_for(spec.realizations, spec.threads, [&](int r) {
            const ChannelSet<double> chan = draw_realization(drop, cfg, r);
            const auto lsf = build_clusters(ClusteringKind::kLsf, drop, chan, cfg);
            const auto bsr = build_clusters(ClusteringKind::kBsr, drop, chan, cfg);
            per_real[r] = {variant_rate(chan, nullptr, cfg, spec.scheduler),
                           variant_rate(chan, &*lsf, cfg, spec.scheduler),
                           variant_rate(chan, &*bsr, cfg, spec.scheduler)};
        });
        double cf = 0, lsf = 0, bsr = 0;
        for (const auto& v : per_real) {
            cf += v[0];
            lsf += v[1];
            bsr += v[2];
        }
        const double n_real = spec.realizations;
        table.rows.push_back({format_double(snr), format_double(cf / n_real),
                              format_double(lsf / n_real), format_double(bsr / n_real)});
    }
    return table;
}

Table run_ber(const ExperimentSpec& spec)
{
    spec.validate();
    const Drop drop = make_drop(spec.config);
    const long bits_per_use = 2L * spec.config.n;
    const long n_symbols = std::max<long>(
        1, (spec.ber_bits_per_point + bits_per_use * spec.realizations - 1)
               / (bits_per_use * spec.realizations));
    Table table;
    table.header = {"snr_db", "ber_cf", "ber_lsf", "ber_bsr"};
    for (double snr : spec.snr_grid_db) {
        const NetworkConfig cfg = at_snr(spec.config, snr);
        std::vector<std::array<double, 3>> per_real(spec.realizations);
        parallel_for(spec.realizations, spec.threads, [&](int r) {
            const ChannelSet<double> chan = draw_realization(drop, cfg, r);
            const auto lsf = build_clusters(ClusteringKind::kLsf, drop, chan, cfg);
            const auto bsr = build_clusters(ClusteringKind::kBsr, drop, chan, cfg);
            const auto ru = static_cast<std::uint64_t>(r);
            Rng rng_cf(substream_seed(cfg.seed, ru, Stream::kSymbolsCf));
            Rng rng_lsf(substream_seed(cfg.seed, ru, Stream::kSymbolsLsf));
            Rng rng_bsr(substream_seed(cfg.seed, ru, Stream::kSymbolsBsr));
            per_real[r] = {rates::ber_monte_carlo(chan, nullptr, cfg, rng_cf, n_symbols),
                           rates::ber_monte_carlo(chan, &*lsf, cfg, rng_lsf, n_symbols),
                           rates::ber_monte_carlo(chan, &*bsr, cfg, rng_bsr, n_symbols)};
        });
        double cf = 0, lsf = 0, bsr = 0;
        for (const auto& v : per_real) {
            cf += v[0];
            lsf += v[1];
            bsr += v[2];
        }
        const double n_real = spec.realizations;
        table.rows.push_back({format_double(snr), format_double(cf / n_real),
                              format_double(lsf / n_real), format_double(bsr / n_real)});
    }
    return table;
}

Table run_fairness(const ExperimentSpec& spec)
{
    spec.validate();
    const Drop drop = make_drop(spec.config);
    const NetworkConfig& cfg = spec.config;
    std::vector<Schedule> gr(spec.realizations);
    std::vector<Schedule> fgr(spec.realizations);
    parallel_for(spec.realizations, spec.threads, [&](int r) {
        const ChannelSet<double> chan = draw_realization(drop, cfg, r);
        const auto clusters = build_clusters(spec.clustering, drop, chan, cfg);
        const ClusterAssignment* cl = clusters ? &*clusters : nullptr;
        gr[r] = sched::gr_schedule_frame(chan, cl, cfg);
        fgr[r] = sched::fgr_schedule(chan, cl, cfg);
    });
    const FairnessHistogram hg = metrics::fairness_histogram(gr, cfg.K);
    const FairnessHistogram hf = metrics::fairness_histogram(fgr, cfg.K);
    Table table;
    table.header = {"ue_id", "gr_count", "fgr_count"};
    for (int k = 0; k < cfg.K; ++k)
        table.rows.push_back({std::to_string(k), std::to_string(hg.counts(k)),
                              std::to_string(hf.counts(k))});
    return table;
}

Table run_complexity(const ExperimentSpec& spec)
{
    spec.validate();
    std::vector<int> grid = spec.l_grid;
    if (grid.empty())
        for (int l = 4; l <= 100; l += 4) grid.push_back(l);
    Table table;
    table.header = {"L", "flops_cf", "flops_lsf", "flops_bsr", "sig_lsf", "sig_bsr"};
    for (int l : grid) {
        const ComplexityReport r = metrics::complexity(l, spec.config.N, spec.config.K);
        table.rows.push_back({std::to_string(l), format_double(r.flops_cf_gr),
                              format_double(r.flops_lsf_uccf),
                              format_double(r.flops_bsr_uccf),
                              format_double(r.signaling_lsf),
                              format_double(r.signaling_bsr)});
    }
    return table;
}

Table run_schedule(const ExperimentSpec& spec)
{
    spec.validate();
    const Drop drop = make_drop(spec.config);
    const NetworkConfig& cfg = spec.config;
    const SchedulerKind kind =
        spec.scheduler == SchedulerKind::kNone ? SchedulerKind::kFgr : spec.scheduler;
    std::vector<Schedule> frames(spec.realizations);
    parallel_for(spec.realizations, spec.threads, [&](int r) {
        const ChannelSet<double> chan = draw_realization(drop, cfg, r);
        const auto clusters = build_clusters(spec.clustering, drop, chan, cfg);
        const ClusterAssignment* cl = clusters ? &*clusters : nullptr;
        frames[r] = kind == SchedulerKind::kFgr ? sched::fgr_schedule(chan, cl, cfg)
                                                : sched::gr_schedule_frame(chan, cl, cfg);
    });
    Table table;
    table.header = {"realization", "slot", "class", "n_i", "rate"};
    for (int r = 0; r < spec.realizations; ++r) {
        for (std::size_t i = 0; i < frames[r].slots.size(); ++i) {
            const SlotRecord& slot = frames[r].slots[i];
            table.rows.push_back({std::to_string(r), std::to_string(i + 1),
                                  slot.cls == SlotClass::kBest ? "best" : "poor",
                                  std::to_string(slot.n_i()), format_double(slot.rate)});
        }
    }
    return table;
}

Table run(const ExperimentSpec& spec)
{
    Table table;
    switch (spec.scenario) {
    case Scenario::kSumRate: table = run_sumrate(spec); break;
    case Scenario::kBer: table = run_ber(spec); break;
    case Scenario::kSchedule: table = run_schedule(spec); break;
    case Scenario::kComplexity: table = run_complexity(spec); break;
    case Scenario::kFairness: table = run_fairness(spec); break;
    }
    if (!spec.out_path.empty())
        write_csv(table, spec.out_path);
    return table;
}

} // namespace cfmimo::xprun
