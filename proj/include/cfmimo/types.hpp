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

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfmimo {

template <typename Scalar>
using RealMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

// Row k holds the antenna-selection mask of UE k (the diagonal of A_k).
using BoolMask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct NonFiniteError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RankDeficientError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InfeasibleFrameError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Scenario parameters. L APs with N antennas each serve K single-antenna
// UEs, n of which are scheduled per timeslot; M = L*N antennas total.
struct NetworkConfig {
    int L = 16;                 // access points
    int N = 4;                  // antennas per AP
    int K = 128;                // user terminals
    int n = 20;                 // UEs scheduled per timeslot
    double area_side_m = 400.0; // square deployment area side
    double rho_f = 1.0;         // per-antenna transmit power (linear)
    double noise_var = 1.0;     // receiver noise variance (linear)
    double csi_tau = 0.1;       // channel estimation error fraction, in [0,1]
    double shadow_sigma_db = 8.0;
    std::uint64_t seed = 1;
    int T = 0;                  // timeslots per frame; 0 = ceil(K/n)

    // propagation / rate-model parameters
    double d0_m = 10.0;         // inner path-loss breakpoint
    double d1_m = 50.0;         // outer breakpoint, also the shadowing-free radius
    double rate_formula_power_exponent = 0.5; // exponent of rho_f in per-link rates

    int antennas() const { return L * N; }
    int slots() const { return T > 0 ? T : (K + n - 1) / n; }

    void validate() const
    {
        if (L < 1 || N < 1 || K < 1)
            throw std::invalid_argument("NetworkConfig: L, N, K must be >= 1");
        if (n < 1 || n > L * N)
            throw std::invalid_argument("NetworkConfig: need 1 <= n <= L*N");
        if (area_side_m < 0.0)
            throw std::invalid_argument("NetworkConfig: area_side_m must be >= 0");
        if (!(rho_f > 0.0))
            throw std::invalid_argument("NetworkConfig: rho_f must be > 0");
        if (!(noise_var > 0.0))
            throw std::invalid_argument("NetworkConfig: noise_var must be > 0");
        if (csi_tau < 0.0 || csi_tau > 1.0)
            throw std::invalid_argument("NetworkConfig: csi_tau must be in [0,1]");
        if (shadow_sigma_db < 0.0)
            throw std::invalid_argument("NetworkConfig: shadow_sigma_db must be >= 0");
        if (T < 0)
            throw std::invalid_argument("NetworkConfig: T must be >= 0");
        if (!(d0_m > 0.0) || !(d1_m >= d0_m))
            throw std::invalid_argument("NetworkConfig: need 0 < d0_m <= d1_m");
        if (rate_formula_power_exponent != 0.5 && rate_formula_power_exponent != 1.0)
            throw std::invalid_argument("NetworkConfig: rate_formula_power_exponent must be 0.5 or 1");
    }
};

struct Geometry {
    Eigen::Matrix<double, Eigen::Dynamic, 2> ap_pos; // L x 2, meters
    Eigen::Matrix<double, Eigen::Dynamic, 2> ue_pos; // K x 2, meters
};

// One channel realization. g = g_hat + g_tilde holds elementwise; rows of
// beta repeat across the N antennas of each AP.
template <typename Scalar>
struct ChannelSet {
    RealMatrix<Scalar> beta;       // M x K large-scale coefficients
    ComplexMatrix<Scalar> g;       // true channel
    ComplexMatrix<Scalar> g_hat;   // estimate
    ComplexMatrix<Scalar> g_tilde; // estimation error
};

// Antenna-level serving sets, one row per UE.
struct ClusterAssignment {
    BoolMask mask; // K x M

    Eigen::Index num_ues() const { return mask.rows(); }
    Eigen::Index num_antennas() const { return mask.cols(); }
    Eigen::Index cluster_size(Eigen::Index k) const
    {
        return mask.row(k).count();
    }
};

template <typename Scalar>
struct Precoder {
    ComplexMatrix<Scalar> p; // M x n, column k serves UE k
    Scalar power_budget = Scalar(1);
    bool regularized = false; // inverse needed a diagonal bump

    Scalar frobenius_sq() const { return p.squaredNorm(); }
};

enum RateFlags : unsigned {
    kRateRegularizedPrecoder = 1u << 0, // precoder came from a regularized inverse
    kRateNonDiagonal = 1u << 1,         // per-UE decomposition is approximate
    kRateClampedNegative = 1u << 2,     // tiny negative log-det clamped to zero
};

template <typename Scalar>
struct RateReport {
    Scalar sum_rate = Scalar(0);        // bits/s/Hz
    RealVector<Scalar> per_ue_rate;     // diagonal SINR decomposition
    unsigned flags = 0;
};

enum class SlotClass { kBest, kPoor };

struct SlotRecord {
    std::vector<int> ues;  // scheduled UE indices
    SlotClass cls = SlotClass::kBest;
    double rate = 0.0;     // achieved sum-rate, bits/s/Hz
    int n_i() const { return static_cast<int>(ues.size()); }
};

struct Schedule {
    std::vector<SlotRecord> slots;
    int n = 0;       // nominal UEs per slot
    int num_ues = 0; // population size K
};

struct WaitingStats {
    Eigen::VectorXi slot_of_ue; // 1-based slot index per UE
    double mean_best = 0.0;
    double mean_poor = 0.0;
    int num_best = 0;
    int num_poor = 0;

    double gap() const
    {
        if (num_best == 0 || num_poor == 0) return 0.0;
        return std::abs(mean_poor - mean_best);
    }
};

struct ComplexityReport {
    double flops_cf_gr = 0.0;
    double flops_lsf_uccf = 0.0;
    double flops_bsr_uccf = 0.0;
    double signaling_lsf = 0.0;
    double signaling_bsr = 0.0;
};

struct FairnessHistogram {
    Eigen::VectorXi counts; // scheduling count per UE
    int min_count = 0;
    int max_count = 0;
    int zero_count_ues = 0;
};

} // namespace cfmimo
