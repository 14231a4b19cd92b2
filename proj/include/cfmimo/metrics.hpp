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

#include <vector>

namespace cfmimo::metrics {

// Closed-form FLOP and signaling-load models of the three resource
// allocation pipelines, evaluated exactly as stated.
inline ComplexityReport complexity(int L, int N, int K)
{
    if (L < 1 || N < 1 || K < 1)
        throw std::invalid_argument("complexity: L, N, K must be >= 1");
    const double m = static_cast<double>(L) * N;
    const double k = static_cast<double>(K);
    const double l = static_cast<double>(L);
    const double nn = static_cast<double>(N);

    ComplexityReport r;
    r.flops_cf_gr = 4.0 * m * m * m + m * (2.0 * k + 6.0);
    r.flops_lsf_uccf = (9.0 / 128.0) * m * m * m + m * ((3.0 / 8.0) * k + 7.0) + k + 1.0;
    r.flops_bsr_uccf = (27.0 / 64.0) * m * m * m + (27.0 / 32.0) * m * m
        + (1179.0 / 256.0) * m + (19.0 / 8.0) * m * k;
    r.signaling_lsf = 2.0 * nn * nn * l * l + nn * l * l + nn * l;
    r.signaling_bsr = 4.0 * nn * nn * l * l + 2.0 * nn * l;
    return r;
}

// How often each UE was scheduled across a set of frames.
inline FairnessHistogram fairness_histogram(const std::vector<Schedule>& schedules, int K)
{
    if (K < 1)
        throw std::invalid_argument("fairness_histogram: K must be >= 1");
    FairnessHistogram h;
    h.counts = Eigen::VectorXi::Zero(K);
    for (const Schedule& s : schedules)
        for (const SlotRecord& slot : s.slots)
            for (int k : slot.ues) ++h.counts(k);
    h.min_count = h.counts.minCoeff();
    h.max_count = h.counts.maxCoeff();
    h.zero_count_ues = static_cast<int>((h.counts.array() == 0).count());
    return h;
}

} // namespace cfmimo::metrics
