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

#pragma once

#include "cfmimo/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cfmimo::xprun {

enum class Scenario { kSumRate, kBer, kSchedule, kComplexity, kFairness };
enum class ClusteringKind { kNone, kLsf, kBsr };
enum class SchedulerKind { kNone, kGr, kFgr };

struct ExperimentSpec {
    Scenario scenario = Scenario::kSumRate;
    std::vector<double> snr_grid_db;
    int realizations = 100;
    NetworkConfig config;
    std::string out_path;
    SchedulerKind scheduler = SchedulerKind::kNone;
    ClusteringKind clustering = ClusteringKind::kNone;
    std::vector<int> l_grid;         // complexity sweep; empty = 4:4:100
    long ber_bits_per_point = 100000; // total bits per SNR point
    int threads = 1;

    void validate() const;
};

// formatted results; cells are final strings so output bytes are reproducible
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string to_csv(const Table& table);
void write_csv(const Table& table, const std::string& path);
std::string format_double(double v); // shortest round-trip-exact form

// flat key = value text, '#' comments; keys are the NetworkConfig fields
NetworkConfig parse_config_file(const std::string& path);

// "min:step:max" sweep or a single value
std::vector<double> parse_grid(const std::string& text);

// One network drop: geometry and large-scale fading are drawn once per
// experiment from dedicated seed substreams; channel realizations then
// redraw small-scale fading and the CSI split on top of it. beta is
// normalized to unit mean so that SNR = rho_f / sigma_w^2 is measured
// relative to the average large-scale gain.
struct Drop {
    Geometry geom;
    Eigen::MatrixXd beta;     // normalized, M x K
    Eigen::MatrixXd beta_raw; // as produced by the propagation model
};

Drop make_drop(const NetworkConfig& cfg);
ChannelSet<double> draw_realization(const Drop& drop, const NetworkConfig& cfg,
                                    int realization);

// clusters for one realization under the chosen criterion (none = CF)
std::optional<ClusterAssignment> build_clusters(ClusteringKind kind, const Drop& drop,
                                                const ChannelSet<double>& chan,
                                                const NetworkConfig& cfg);

Table run_sumrate(const ExperimentSpec& spec);
Table run_ber(const ExperimentSpec& spec);
Table run_fairness(const ExperimentSpec& spec);
Table run_complexity(const ExperimentSpec& spec);
Table run_schedule(const ExperimentSpec& spec);

// dispatch on scenario; writes CSV when out_path is set
Table run(const ExperimentSpec& spec);

} // namespace cfmimo::xprun
