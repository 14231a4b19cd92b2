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

#include "cfmimo/rng.hpp"
#include "cfmimo/types.hpp"

#include <cmath>

namespace cfmimo::netgen {

// Three-slope path-loss model (1.9 GHz macro constants) with log-normal
// shadowing beyond the outer breakpoint d1.
struct PathLossModel {
    double d0_m = 10.0;
    double d1_m = 50.0;
    double carrier_mhz = 1900.0;
    double ap_height_m = 15.0;
    double ue_height_m = 1.65;

    // frequency/height-dependent constant of the Hata-COST231 form
    double fixed_loss_db() const
    {
        const double lf = std::log10(carrier_mhz);
        return 46.3 + 33.9 * lf - 13.82 * std::log10(ap_height_m)
            - (1.1 * lf - 0.7) * ue_height_m + (1.56 * lf - 0.8);
    }

    // positive path loss in dB; continuous across both breakpoints
    double path_loss_db(double d_m) const
    {
        const double d_km = std::max(d_m, 1e-9) / 1000.0;
        const double d0_km = d0_m / 1000.0;
        const double d1_km = d1_m / 1000.0;
        const double c = fixed_loss_db();
        if (d_m > d1_m)
            return c + 35.0 * std::log10(d_km);
        if (d_m > d0_m)
            return c + 15.0 * std::log10(d1_km) + 20.0 * std::log10(d_km);
        return c + 15.0 * std::log10(d1_km) + 20.0 * std::log10(d0_km);
    }

    static PathLossModel from_config(const NetworkConfig& cfg)
    {
        PathLossModel m;
        m.d0_m = cfg.d0_m;
        m.d1_m = cfg.d1_m;
        return m;
    }
};

// i.i.d. uniform placement of L APs then K UEs over the square
inline Geometry place_network(const NetworkConfig& cfg, Rng& rng)
{
    Geometry geom;
    geom.ap_pos.resize(cfg.L, 2);
    for (int l = 0; l < cfg.L; ++l) {
        geom.ap_pos(l, 0) = cfg.area_side_m * rng.uniform();
        geom.ap_pos(l, 1) = cfg.area_side_m * rng.uniform();
    }
    geom.ue_pos.resize(cfg.K, 2);
    for (int k = 0; k < cfg.K; ++k) {
        geom.ue_pos(k, 0) = cfg.area_side_m * rng.uniform();
        geom.ue_pos(k, 1) = cfg.area_side_m * rng.uniform();
    }
    return geom;
}

// M x K matrix of large-scale coefficients beta_mk; the N rows belonging to
// one AP are identical copies. Shadowing applies only beyond d1.
template <typename Scalar = double>
RealMatrix<Scalar> large_scale_fading(const Geometry& geom, const NetworkConfig& cfg,
                                      Rng& rng)
{
    const PathLossModel model = PathLossModel::from_config(cfg);
    const int M = cfg.antennas();
    RealMatrix<Scalar> beta(M, cfg.K);
    for (int l = 0; l < cfg.L; ++l) {
        for (int k = 0; k < cfg.K; ++k) {
            const double d = (geom.ap_pos.row(l) - geom.ue_pos.row(k)).norm();
            double exponent_db = -model.path_loss_db(d);
            if (d > cfg.d1_m && cfg.shadow_sigma_db > 0.0)
                exponent_db += cfg.shadow_sigma_db * rng.normal();
            const Scalar b = static_cast<Scalar>(std::pow(10.0, exponent_db / 10.0));
            for (int a = 0; a < cfg.N; ++a)
                beta(l * cfg.N + a, k) = b;
        }
    }
    return beta;
}

// g_mk = sqrt(beta_mk) h_mk with h_mk ~ CN(0,1) i.i.d.
template <typename Scalar = double>
ComplexMatrix<Scalar> draw_channel(const RealMatrix<Scalar>& beta, Rng& rng)
{
    ComplexMatrix<Scalar> g(beta.rows(), beta.cols());
    for (Eigen::Index k = 0; k < beta.cols(); ++k)
        for (Eigen::Index m = 0; m < beta.rows(); ++m) {
            const std::complex<double> h = rng.cnormal(1.0);
            const Scalar a = std::sqrt(static_cast<Scalar>(beta(m, k)));
            g(m, k) = std::complex<Scalar>(a * static_cast<Scalar>(h.real()),
                                           a * static_cast<Scalar>(h.imag()));
        }
    return g;
}

// Imperfect-CSI split: independent g_hat ~ CN(0, (1-tau^2) beta) and
// g_tilde ~ CN(0, tau^2 beta), so g = g_hat + g_tilde has the marginal of
// draw_channel.
template <typename Scalar = double>
ChannelSet<Scalar> split_csi(const RealMatrix<Scalar>& beta, const NetworkConfig& cfg,
                             Rng& rng)
{
    const double tau2 = cfg.csi_tau * cfg.csi_tau;
    ChannelSet<Scalar> cs;
    cs.beta = beta;
    cs.g_hat.resize(beta.rows(), beta.cols());
    cs.g_tilde.resize(beta.rows(), beta.cols());
    for (Eigen::Index k = 0; k < beta.cols(); ++k)
        for (Eigen::Index m = 0; m < beta.rows(); ++m) {
            const std::complex<double> v =
                rng.cnormal((1.0 - tau2) * static_cast<double>(beta(m, k)));
            cs.g_hat(m, k) = std::complex<Scalar>(static_cast<Scalar>(v.real()),
                                                  static_cast<Scalar>(v.imag()));
        }
    for (Eigen::Index k = 0; k < beta.cols(); ++k)
        for (Eigen::Index m = 0; m < beta.rows(); ++m) {
            const std::complex<double> v =
                rng.cnormal(tau2 * static_cast<double>(beta(m, k)));
            cs.g_tilde(m, k) = std::complex<Scalar>(static_cast<Scalar>(v.real()),
                                                    static_cast<Scalar>(v.imag()));
        }
    cs.g = cs.g_hat + cs.g_tilde;
    return cs;
}

} // namespace cfmimo::netgen
