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
#include "cfmimo/rng.hpp"
#include "cfmimo/types.hpp"

#include <Eigen/Cholesky>

#include <cmath>

namespace cfmimo::rates {

// log2 det of a Hermitian positive-definite matrix via Cholesky
template <typename Scalar>
Scalar log2_det_hpd(const ComplexMatrix<Scalar>& h)
{
    Eigen::LLT<ComplexMatrix<Scalar>> llt(h);
    if (llt.info() != Eigen::Success)
        throw NonFiniteError("log2_det_hpd: factorization failed");
    // det = prod diag(L)^2; diag(L) is real positive
    return Scalar(2) * llt.matrixLLT().diagonal().real().array().log().sum()
        / std::numbers::ln2_v<Scalar>;
}

/// Sum-rate log2 det(R + I) with
///   R = rho Ghat^T P P^H Ghat^* (rho Gtilde^T P P^H Gtilde^* + sigma^2 I)^-1,
/// evaluated as log2 det(A + B) - log2 det(B) with A the signal form and B the
/// error-plus-noise form; both are Hermitian and factor stably, so the printed
/// inverse never has to be formed.
template <typename D1, typename D2, typename Scalar>
RateReport<Scalar> sum_rate(const Eigen::MatrixBase<D1>& g_hat_eff,
                            const Eigen::MatrixBase<D2>& g_tilde_eff,
                            const Precoder<Scalar>& p, Scalar rho_f, Scalar noise_var)
{
    if (g_hat_eff.rows() != p.p.rows() || g_tilde_eff.rows() != p.p.rows()
        || g_hat_eff.cols() != p.p.cols() || g_tilde_eff.cols() != p.p.cols())
        throw std::invalid_argument("sum_rate: dimensions disagree");
    if (!(noise_var > Scalar(0)))
        throw std::invalid_argument("sum_rate: noise_var must be > 0");
    if (!g_hat_eff.allFinite() || !g_tilde_eff.allFinite() || !p.p.allFinite())
        throw NonFiniteError("sum_rate: non-finite input");

    const Eigen::Index n = p.p.cols();
    RateReport<Scalar> out;
    out.flags = p.regularized ? kRateRegularizedPrecoder : 0u;
    if (n == 0) {
        out.per_ue_rate.resize(0);
        return out;
    }

    const ComplexMatrix<Scalar> e_sig = g_hat_eff.transpose() * p.p;
    const ComplexMatrix<Scalar> e_err = g_tilde_eff.transpose() * p.p;
    ComplexMatrix<Scalar> a = rho_f * (e_sig * e_sig.adjoint());
    ComplexMatrix<Scalar> b = rho_f * (e_err * e_err.adjoint());
    b.diagonal().array() += std::complex<Scalar>(noise_var, 0);

    Scalar rate = log2_det_hpd<Scalar>(a + b) - log2_det_hpd<Scalar>(b);
    if (!std::isfinite(static_cast<double>(rate)))
        throw NonFiniteError("sum_rate: non-finite result");
    if (rate < Scalar(0)) {
        out.flags |= kRateClampedNegative;
        rate = Scalar(0);
    }
    out.sum_rate = rate;

    out.per_ue_rate.resize(n);
    Scalar max_diag = Scalar(0);
    Scalar max_offdiag = Scalar(0);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.per_ue_rate(i) = std::log2(Scalar(1) + a(i, i).real() / b(i, i).real());
        max_diag = std::max(max_diag, std::abs(a(i, i)));
        for (Eigen::Index j = 0; j < n; ++j)
            if (j != i) max_offdiag = std::max(max_offdiag, std::abs(a(i, j)));
    }
    if (max_offdiag > Scalar(1e-8) * std::max(max_diag, Scalar(1)))
        out.flags |= kRateNonDiagonal;
    return out;
}

/// Per-link achievable rates SR_km between antenna m and UE k,
///   SR_km = log2(1 + rho^e |ghat_mk|^2 ||p_k||^2 / (rho^e |gtilde_mk|^2 ||p_k||^2 + sigma^2)),
/// returned as a K x M matrix. The power exponent e defaults to 0.5.
template <typename D1, typename D2, typename D3, typename Scalar>
RealMatrix<Scalar> per_link_rates(const Eigen::MatrixBase<D1>& g_hat,
                                  const Eigen::MatrixBase<D2>& g_tilde,
                                  const Eigen::MatrixBase<D3>& p_cols, Scalar rho_f,
                                  Scalar noise_var, Scalar power_exponent = Scalar(0.5))
{
    if (g_hat.rows() != g_tilde.rows() || g_hat.cols() != g_tilde.cols()
        || p_cols.rows() != g_hat.rows() || p_cols.cols() != g_hat.cols())
        throw std::invalid_argument("per_link_rates: dimensions disagree");
    if (!g_hat.allFinite() || !g_tilde.allFinite() || !p_cols.allFinite())
        throw NonFiniteError("per_link_rates: non-finite input");

    const Scalar re = std::pow(rho_f, power_exponent);
    const Eigen::Index M = g_hat.rows();
    const Eigen::Index K = g_hat.cols();
    RealMatrix<Scalar> sr(K, M);
    for (Eigen::Index k = 0; k < K; ++k) {
        const Scalar pk2 = p_cols.col(k).squaredNorm();
        for (Eigen::Index m = 0; m < M; ++m) {
            const Scalar sig = re * std::norm(std::complex<Scalar>(g_hat(m, k))) * pk2;
            const Scalar den = re * std::norm(std::complex<Scalar>(g_tilde(m, k))) * pk2
                + noise_var;
            sr(k, m) = std::log2(Scalar(1) + sig / den);
        }
    }
    return sr;
}

inline std::complex<double> qpsk_symbol(bool b0, bool b1)
{
    constexpr double a = std::numbers::sqrt2 / 2.0;
    return {b0 ? -a : a, b1 ? -a : a};
}

/// Monte Carlo bit error rate for Gray-mapped QPSK through the (optionally
/// masked) downlink with per-UE hard detection. The first n UEs are served
/// with a zero-forcing precoder of unit power budget; n_symbols channel uses
/// carry 2n bits each.
template <typename Scalar>
double ber_monte_carlo(const ChannelSet<Scalar>& channel, const ClusterAssignment* clusters,
                       const NetworkConfig& cfg, Rng& rng, long n_symbols)
{
    if (n_symbols < 1)
        throw std::invalid_argument("ber_monte_carlo: need n_symbols >= 1");
    const int n = cfg.n;
    std::vector<int> served(n);
    for (int k = 0; k < n; ++k) served[k] = k;

    const ComplexMatrix<Scalar> g_hat_eff = cluster::masked_columns(channel.g_hat, clusters, served);
    const ComplexMatrix<Scalar> g_eff = cluster::masked_columns(channel.g, clusters, served);
    const Precoder<Scalar> p = precode::zf_precoder(g_hat_eff, Scalar(1));

    // effective true-channel gain matrix seen by the n UEs
    const ComplexMatrix<Scalar> h =
        std::sqrt(static_cast<Scalar>(cfg.rho_f)) * (g_eff.transpose() * p.p).eval();

    long errors = 0;
    std::vector<bool> bits(2 * static_cast<std::size_t>(n));
    ComplexVector<Scalar> x(n);
    for (long s = 0; s < n_symbols; ++s) {
        for (int k = 0; k < n; ++k) {
            bits[2 * k] = rng.uniform() < 0.5;
            bits[2 * k + 1] = rng.uniform() < 0.5;
            const std::complex<double> sym = qpsk_symbol(bits[2 * k], bits[2 * k + 1]);
            x(k) = std::complex<Scalar>(static_cast<Scalar>(sym.real()),
                                        static_cast<Scalar>(sym.imag()));
        }
        ComplexVector<Scalar> y = h * x;
        for (int k = 0; k < n; ++k) {
            const std::complex<double> w = rng.cnormal(cfg.noise_var);
            y(k) += std::complex<Scalar>(static_cast<Scalar>(w.real()),
                                         static_cast<Scalar>(w.imag()));
            if ((y(k).real() < 0) != bits[2 * k]) ++errors;
            if ((y(k).imag() < 0) != bits[2 * k + 1]) ++errors;
        }
    }
    return static_cast<double>(errors) / (2.0 * static_cast<double>(n) * static_cast<double>(n_symbols));
}

} // namespace cfmimo::rates
