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

#include "cfmimo/cluster.hpp"
#include "cfmimo/precode.hpp"
#include "cfmimo/rates.hpp"
#include "cfmimo/types.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <vector>

namespace cfmimo::sched {

template <typename Scalar>
using RateFn = std::function<Scalar(const std::vector<int>&)>;

/// Greedy sum-rate user selection. Seeds with the candidate of largest
/// channel power (columns of g_eff correspond to `candidates`; lowest index
/// wins ties), then repeatedly adds the UE with the best incremental rate.
/// Stops before reaching n when no candidate improves the rate, except that
/// at least `min_select` UEs are always taken (the frame scheduler uses this
/// to keep a full partition feasible).
template <typename Derived, typename Scalar>
std::vector<int> gr_schedule(const Eigen::MatrixBase<Derived>& g_eff,
                             const std::vector<int>& candidates, int n,
                             const RateFn<Scalar>& rate_fn, int min_select = 1)
{
    if (candidates.empty())
        throw std::invalid_argument("gr_schedule: no candidates");
    if (n < 1)
        throw std::invalid_argument("gr_schedule: need n >= 1");
    if (g_eff.cols() != static_cast<Eigen::Index>(candidates.size()))
        throw std::invalid_argument("gr_schedule: one column per candidate expected");

    const int target = std::min<int>(n, static_cast<int>(candidates.size()));
    min_select = std::min(std::max(min_select, 1), target);

    std::size_t seed = 0;
    Scalar best_power = g_eff.col(0).squaredNorm();
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        const Scalar pw = g_eff.col(static_cast<Eigen::Index>(i)).squaredNorm();
        if (pw > best_power) {
            best_power = pw;
            seed = i;
        }
    }

    std::vector<int> selected{candidates[seed]};
    std::vector<bool> taken(candidates.size(), false);
    taken[seed] = true;
    Scalar current = rate_fn(selected);

    std::vector<int> trial;
    while (static_cast<int>(selected.size()) < target) {
        Scalar best_rate = -std::numeric_limits<Scalar>::infinity();
        std::size_t best_idx = candidates.size();
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (taken[i]) continue;
            trial = selected;
            trial.push_back(candidates[i]);
            const Scalar r = rate_fn(trial);
            if (r > best_rate) {
                best_rate = r;
                best_idx = i;
            }
        }
        if (best_idx == candidates.size()) break;
        if (best_rate <= current && static_cast<int>(selected.size()) >= min_select)
            break; // adding any UE would not improve the rate
        selected.push_back(candidates[best_idx]);
        taken[best_idx] = true;
        current = best_rate;
    }
    return selected;
}

namespace detail {

// rate of a UE subset: fresh ZF precoder on the subset's effective channel
template <typename Scalar>
Scalar subset_rate(const ComplexMatrix<Scalar>& g_hat_eff,
                   const ComplexMatrix<Scalar>& g_tilde_eff, const std::vector<int>& ues,
                   Scalar rho_f, Scalar noise_var)
{
    if (ues.empty()) return Scalar(0);
    ComplexMatrix<Scalar> gh(g_hat_eff.rows(), static_cast<Eigen::Index>(ues.size()));
    ComplexMatrix<Scalar> gt(g_tilde_eff.rows(), static_cast<Eigen::Index>(ues.size()));
    for (std::size_t j = 0; j < ues.size(); ++j) {
        gh.col(static_cast<Eigen::Index>(j)) = g_hat_eff.col(ues[j]);
        gt.col(static_cast<Eigen::Index>(j)) = g_tilde_eff.col(ues[j]);
    }
    const Precoder<Scalar> p = precode::zf_precoder(gh, Scalar(1));
    return rates::sum_rate(gh, gt, p, rho_f, noise_var).sum_rate;
}

inline void check_partition(const Schedule& s)
{
    std::vector<int> seen(s.num_ues, 0);
    for (const SlotRecord& slot : s.slots)
        for (int k : slot.ues) ++seen[k];
    for (int k = 0; k < s.num_ues; ++k)
        if (seen[k] != 1)
            throw std::logic_error("schedule is not a partition of the UE set");
}

} // namespace detail

/// Fair-greedy frame scheduler. Odd slots run the greedy selection over the
/// still-unscheduled UEs; even slots take the n remaining UEs of poorest true
/// channel power. Scheduled UEs leave the pool, so the T slots partition all
/// K UEs; the final slot absorbs the remainder. With clusters given, masked
/// channels drive selection, precoding and rates throughout.
template <typename Scalar>
Schedule fgr_schedule(const ChannelSet<Scalar>& channel, const ClusterAssignment* clusters,
                      const NetworkConfig& cfg)
{
    const int K = static_cast<int>(channel.g.cols());
    const int n = cfg.n;
    const int T = cfg.slots();
    if (static_cast<long>(T) * n < K)
        throw InfeasibleFrameError("fgr_schedule: T*n < K, no full partition exists");

    ComplexMatrix<Scalar> g_hat = channel.g_hat;
    ComplexMatrix<Scalar> g_tilde = channel.g_tilde;
    ComplexMatrix<Scalar> g_true = channel.g;
    if (clusters != nullptr) {
        g_hat = cluster::apply_mask(channel.g_hat, *clusters);
        g_tilde = cluster::apply_mask(channel.g_tilde, *clusters);
        g_true = cluster::apply_mask(channel.g, *clusters);
    }

    const Scalar rho = static_cast<Scalar>(cfg.rho_f);
    const Scalar nv = static_cast<Scalar>(cfg.noise_var);
    RateFn<Scalar> rate_fn = [&](const std::vector<int>& ues) {
        return detail::subset_rate(g_hat, g_tilde, ues, rho, nv);
    };

    std::vector<int> pool(K);
    for (int k = 0; k < K; ++k) pool[k] = k;

    Schedule out;
    out.n = n;
    out.num_ues = K;
    out.slots.reserve(T);

    for (int i = 1; i <= T; ++i) {
        SlotRecord slot;
        slot.cls = (i % 2 == 1) ? SlotClass::kBest : SlotClass::kPoor;
        if (!pool.empty()) {
            const int capacity_after = (T - i) * n;
            const int must_take =
                std::max(0, static_cast<int>(pool.size()) - capacity_after);
            const int take = std::min<int>(n, static_cast<int>(pool.size()));
            if (slot.cls == SlotClass::kBest) {
                ComplexMatrix<Scalar> g_pool(g_hat.rows(),
                                             static_cast<Eigen::Index>(pool.size()));
                for (std::size_t j = 0; j < pool.size(); ++j)
                    g_pool.col(static_cast<Eigen::Index>(j)) = g_hat.col(pool[j]);
                slot.ues = gr_schedule(g_pool, pool, take, rate_fn, must_take);
            } else {
                // poorest channel powers first, lowest index on ties
                std::vector<int> order = pool;
                std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
                    return g_true.col(a).squaredNorm() < g_true.col(b).squaredNorm();
                });
                slot.ues.assign(order.begin(), order.begin() + take);
            }
            slot.rate = static_cast<double>(rate_fn(slot.ues));
            for (int k : slot.ues)
                pool.erase(std::find(pool.begin(), pool.end(), k));
        }
        out.slots.push_back(std::move(slot));
    }
    detail::check_partition(out);
    return out;
}

/// Plain greedy baseline: every slot reselects from the full population with
/// no removal, so strong UEs repeat and weak ones may never be scheduled.
/// Only meaningful for fairness comparisons.
template <typename Scalar>
Schedule gr_schedule_frame(const ChannelSet<Scalar>& channel, const ClusterAssignment* clusters,
                           const NetworkConfig& cfg)
{
    const int K = static_cast<int>(channel.g.cols());
    const int T = cfg.slots();

    ComplexMatrix<Scalar> g_hat = channel.g_hat;
    ComplexMatrix<Scalar> g_tilde = channel.g_tilde;
    if (clusters != nullptr) {
        g_hat = cluster::apply_mask(channel.g_hat, *clusters);
        g_tilde = cluster::apply_mask(channel.g_tilde, *clusters);
    }
    const Scalar rho = static_cast<Scalar>(cfg.rho_f);
    const Scalar nv = static_cast<Scalar>(cfg.noise_var);
    RateFn<Scalar> rate_fn = [&](const std::vector<int>& ues) {
        return detail::subset_rate(g_hat, g_tilde, ues, rho, nv);
    };

    std::vector<int> all(K);
    for (int k = 0; k < K; ++k) all[k] = k;

    Schedule out;
    out.n = cfg.n;
    out.num_ues = K;
    out.slots.reserve(T);
    for (int i = 1; i <= T; ++i) {
        SlotRecord slot;
        slot.cls = SlotClass::kBest;
        slot.ues = gr_schedule(g_hat, all, cfg.n, rate_fn);
        slot.rate = static_cast<double>(rate_fn(slot.ues));
        out.slots.push_back(std::move(slot));
    }
    return out;
}

// frame-average rate SR_Av = (1/T) sum_i (n_i/n) SR^i
inline double average_sum_rate(const Schedule& schedule, int n, int T)
{
    if (n < 1 || T < 1)
        throw std::invalid_argument("average_sum_rate: need n >= 1 and T >= 1");
    double acc = 0.0;
    for (const SlotRecord& slot : schedule.slots)
        acc += (static_cast<double>(slot.n_i()) / n) * slot.rate;
    return acc / T;
}

// per-UE waiting times (the 1-based slot index) and the class means
inline WaitingStats waiting_stats(const Schedule& schedule)
{
    detail::check_partition(schedule);
    WaitingStats ws;
    ws.slot_of_ue = Eigen::VectorXi::Zero(schedule.num_ues);
    double sum_best = 0.0;
    double sum_poor = 0.0;
    for (std::size_t i = 0; i < schedule.slots.size(); ++i) {
        const SlotRecord& slot = schedule.slots[i];
        const int t = static_cast<int>(i) + 1;
        for (int k : slot.ues) {
            ws.slot_of_ue(k) = t;
            if (slot.cls == SlotClass::kBest) {
                sum_best += t;
                ++ws.num_best;
            } else {
                sum_poor += t;
                ++ws.num_poor;
            }
        }
    }
    ws.mean_best = ws.num_best > 0 ? sum_best / ws.num_best : 0.0;
    ws.mean_poor = ws.num_poor > 0 ? sum_poor / ws.num_poor : 0.0;
    return ws;
}

} // namespace cfmimo::sched
