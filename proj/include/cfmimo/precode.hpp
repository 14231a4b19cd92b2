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

#include <Eigen/Eigenvalues>

#include <cmath>

namespace cfmimo::precode {

/// Zero-forcing precoder on the channel estimate.
///
/// P0 = conj(G) (G^T conj(G))^-1, then scaled so that ||P||_F^2 equals the
/// power budget exactly. A (near-)singular Gram matrix gets a diagonal bump
/// delta = 1e-8 trace/n and the result is flagged `regularized`; this also
/// covers the wide case (more columns than rows), where the Gram is singular
/// by construction.
template <typename Derived>
auto zf_precoder(const Eigen::MatrixBase<Derived>& g_hat_eff,
                 typename Eigen::NumTraits<typename Derived::Scalar>::Real power_budget)
    -> Precoder<typename Eigen::NumTraits<typename Derived::Scalar>::Real>
{
    using Complex = typename Derived::Scalar;
    using Real = typename Eigen::NumTraits<Complex>::Real;
    static_assert(Eigen::NumTraits<Complex>::IsComplex, "expected a complex channel matrix");

    if (!(power_budget > Real(0)))
        throw std::invalid_argument("zf_precoder: power budget must be > 0");
    const Eigen::Index n = g_hat_eff.cols();
    if (n < 1)
        throw std::invalid_argument("zf_precoder: need at least one UE column");

    ComplexMatrix<Real> gram = g_hat_eff.transpose() * g_hat_eff.conjugate();

    // rank check via the Hermitian Gram spectrum: sigma_min(G^T) > 1e-12
    // sigma_max(G^T) maps to lambda_min > 1e-24 lambda_max
    Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> es(gram, Eigen::EigenvaluesOnly);
    const Real lmax = es.eigenvalues().maxCoeff();
    const Real lmin = es.eigenvalues().minCoeff();
    bool regularized = false;
    if (!(lmin > Real(1e-24) * lmax) || !std::isfinite(static_cast<double>(lmin))) {
        const Real delta = Real(1e-8) * gram.real().trace() / Real(n);
        gram.diagonal().array() += Complex(delta, Real(0));
        regularized = true;
    }

    ComplexMatrix<Real> p0 = g_hat_eff.conjugate()
        * gram.ldlt().solve(ComplexMatrix<Real>::Identity(n, n));
    const Real fro = p0.norm();
    if (!(fro > Real(0)) || !p0.allFinite())
        throw RankDeficientError("zf_precoder: effective channel is singular");

    Precoder<Real> out;
    out.p = (std::sqrt(power_budget) / fro) * p0;
    out.power_budget = power_budget;
    out.regularized = regularized;
    return out;
}

} // namespace cfmimo::precode
