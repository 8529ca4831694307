// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qup-lab contributors

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qup/density_frames.hpp"
#include "qup/independence.hpp"
#include "qup/kernels.hpp"

namespace qup {

struct PerturbationVerdict {
    enum class Verdict { preserved, not_guaranteed };
    double lambda_estimate = 0.0;
    std::optional<double> lambda_exact;  // generalized singular value, n <= 256
    double d_estimate = 0.0;
    double criterion = 0.0;
    Verdict verdict = Verdict::preserved;
    std::optional<double> new_A;
    std::optional<double> new_B;
    /// Upper bound with the minus sign, B (1 - sqrt(lambda / B))^2, kept next to the
    /// enlarging one for comparison.
    std::optional<double> new_B_minus_sign;
};

std::string to_string(PerturbationVerdict::Verdict v);

/// Largest ratio ||sum c_i (phi_i - psi_i)|| / ||sum c_i phi_i|| over seeded random unit
/// coefficient vectors, plus the exact supremum for small families.
PerturbationVerdict paley_wiener_test(const FunctionFamily& base, const FunctionFamily& perturbed, int trials,
                                      std::uint64_t seed);

struct ChristensenBounds {
    double criterion = 0.0;  // lambda + d / sqrt(A)
    double new_A = 0.0;
    double new_B = 0.0;
};

ChristensenBounds christensen_bounds(double A, double B, double lambda, double d);

/// Norm of the difference frame operator f -> sum |<f, phi_n - psi_n>|^2 against the
/// lower bound A of the base frame.
PerturbationVerdict frame_perturb_test(const FunctionFamily& base, const FunctionFamily& perturbed, double A,
                                       double B);

struct AcfpsRadiusCheck {
    double radius = 0.0;
    double lambda = 0.0;          // sup ratio for the matched functions
    double max_distance = 0.0;    // max_j ||K(xi_j) - K(xi'_j)||
    double epsilon = 0.0;         // per-function tolerance sigma_min / sqrt(N)
    bool ratio_ok = false;
    bool elementwise_ok = false;
};

struct AcfpsPerturbation {
    bool preserved = false;
    std::size_t dimension = 0;
    std::vector<AcfpsRadiusCheck> checks;
};

struct AcfpsOptions {
    int samples_per_side = 8;
    double rank_floor = 1e-9;  // eigenvalue ratio for "reaches the full span"
};

/// For each radius: a well-conditioned basis from the source neighborhoods is matched
/// function by function with the nearest kernel functions around the moved points.
AcfpsPerturbation acfps_perturb_test(const KernelSpec& kernel, const Grid& t_grid, const PointSet& omega_set,
                                     const PointSet& omega_set_prime, const std::vector<double>& radii,
                                     const AcfpsOptions& opts = {});

}  // namespace qup
