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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace cfmimo::cluster {

// mean large-scale gain over all antenna-UE links
template <typename Derived>
typename Derived::Scalar lsf_threshold(const Eigen::MatrixBase<Derived>& beta)
{
    return beta.mean();
}

// UE k keeps every antenna with beta_mk >= alpha, plus the strongest antenna
// as fallback (first index on ties). Identical beta rows per AP make this an
// AP-level selection.
template <typename Derived>
ClusterAssignment lsf_clusters(const Eigen::MatrixBase<Derived>& beta,
                               typename Derived::Scalar alpha_lsf)
{
    const Eigen::Index M = beta.rows();
    const Eigen::Index K = beta.cols();
    ClusterAssignment out;
    out.mask = BoolMask::Constant(K, M, false);
    for (Eigen::Index k = 0; k < K; ++k) {
        Eigen::Index best = 0;
        for (Eigen::Index m = 0; m < M; ++m) {
            if (beta(m, k) >= alpha_lsf) out.mask(k, m) = true;
            if (beta(m, k) > beta(best, k)) best = m;
        }
        out.mask(k, best) = true;
    }
    return out;
}

// mean per-link achievable rate (rate matrix is K x M)
template <typename Derived>
typename Derived::Scalar sr_threshold(const Eigen::MatrixBase<Derived>& sr)
{
    return sr.mean();
}

// rate-based selection with the same strongest-link fallback
template <typename Derived>
ClusterAssignment sr_clusters(const Eigen::MatrixBase<Derived>& sr,
                              typename Derived::Scalar alpha_src)
{
    const Eigen::Index K = sr.rows();
    const Eigen::Index M = sr.cols();
    ClusterAssignment out;
    out.mask = BoolMask::Constant(K, M, false);
    for (Eigen::Index k = 0; k < K; ++k) {
        Eigen::Index best = 0;
        for (Eigen::Index m = 0; m < M; ++m) {
            if (sr(k, m) >= alpha_src) out.mask(k, m) = true;
            if (sr(k, m) > sr(k, best)) best = m;
        }
        out.mask(k, best) = true;
    }
    return out;
}

// Coverage boost: every UE below the average cluster size N_avg = ceil(mean)
// gains its highest-rate unselected antennas until it reaches N_avg.
template <typename Derived>
ClusterAssignment bsr_augment(const ClusterAssignment& clusters,
                              const Eigen::MatrixBase<Derived>& sr)
{
    const Eigen::Index K = clusters.num_ues();
    const Eigen::Index M = clusters.num_antennas();
    ClusterAssignment out = clusters;

    double mean_size = 0.0;
    for (Eigen::Index k = 0; k < K; ++k)
        mean_size += static_cast<double>(out.cluster_size(k));
    mean_size /= static_cast<double>(K);
    const Eigen::Index n_avg = static_cast<Eigen::Index>(std::ceil(mean_size));

    std::vector<Eigen::Index> order(static_cast<std::size_t>(M));
    for (Eigen::Index k = 0; k < K; ++k) {
        Eigen::Index size = out.cluster_size(k);
        if (size >= n_avg) continue;
        std::iota(order.begin(), order.end(), Eigen::Index(0));
        std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
            return sr(k, a) > sr(k, b);
        });
        for (Eigen::Index m : order) {
            if (out.mask(k, m)) continue;
            out.mask(k, m) = true;
            if (++size >= n_avg) break;
        }
    }
    return out;
}

// zero all entries of column k outside UE k's serving set (G_a = A_k g_k)
template <typename Derived>
ComplexMatrix<typename Eigen::NumTraits<typename Derived::Scalar>::Real>
apply_mask(const Eigen::MatrixBase<Derived>& g, const ClusterAssignment& clusters)
{
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    if (g.rows() != clusters.num_antennas() || g.cols() != clusters.num_ues())
        throw std::invalid_argument("apply_mask: mask/channel dimensions disagree");
    ComplexMatrix<Real> out = g;
    for (Eigen::Index k = 0; k < g.cols(); ++k)
        for (Eigen::Index m = 0; m < g.rows(); ++m)
            if (!clusters.mask(k, m)) out(m, k) = std::complex<Real>(0, 0);
    return out;
}

// Effective channel of a UE subset: selected columns with each UE's mask
// applied. With no clusters this is a plain column gather.
template <typename Derived>
ComplexMatrix<typename Eigen::NumTraits<typename Derived::Scalar>::Real>
masked_columns(const Eigen::MatrixBase<Derived>& g, const ClusterAssignment* clusters,
               const std::vector<int>& ues)
{
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    ComplexMatrix<Real> out(g.rows(), static_cast<Eigen::Index>(ues.size()));
    for (std::size_t j = 0; j < ues.size(); ++j) {
        const Eigen::Index k = ues[j];
        out.col(static_cast<Eigen::Index>(j)) = g.col(k);
        if (clusters != nullptr)
            for (Eigen::Index m = 0; m < g.rows(); ++m)
                if (!clusters->mask(k, m))
                    out(m, static_cast<Eigen::Index>(j)) = std::complex<Real>(0, 0);
    }
    return out;
}

} // namespace cfmimo::cluster
