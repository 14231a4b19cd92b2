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

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace cfmimo {

// splitmix64 finalizer, used to expand one master seed into independent
// substreams.
inline std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Purpose tags so different draws of one realization never share a stream.
enum class Stream : std::uint64_t {
    kGeometry = 1,
    kLargeScale = 2,
    kFading = 3,
    kSymbolsCf = 4,
    kSymbolsLsf = 5,
    kSymbolsBsr = 6,
};

// Deterministic per-(realization, purpose) seed; realizations can therefore
// run in any order (or concurrently) with identical results.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t realization,
                                    Stream stream)
{
    constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = mix64(master + kGolden);
    z = mix64(z + kGolden * (realization + 1));
    z = mix64(z + kGolden * (static_cast<std::uint64_t>(stream) + 1));
    return z;
}

// mt19937_64 wrapper with explicit uniform/normal transforms, so that a given
// seed yields the same draw sequence on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // uniform in [0, 1)
    double uniform()
    {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // standard normal via Box-Muller
    double normal()
    {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * uniform();
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    // circularly-symmetric complex Gaussian CN(0, variance)
    std::complex<double> cnormal(double variance)
    {
        const double s = std::sqrt(0.5 * variance);
        const double re = normal();
        const double im = normal();
        return {s * re, s * im};
    }

    bool bit() { return (gen_() >> 63) != 0; }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace cfmimo
