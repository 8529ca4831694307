// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qup-lab contributors

#pragma once

#include <cstdint>
#include <random>

#include "qup/num_core.hpp"

namespace qup {

/// Seeded stream with draws defined here rather than by the standard library's
/// distributions, so a seed reproduces the same numbers on every toolchain.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Seed for an independent sub-stream (per-trial, per-signal).
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Standard normal (Box-Muller, one value per call).
    double normal();
    /// Real and imaginary parts independent standard normals.
    cplx complex_normal() {
        const double re = normal();
        return {re, normal()};
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace qup
