// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qup-lab contributors

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qup/kernels.hpp"
#include "qup/num_core.hpp"

namespace qup {

/// Sampled time-frequency (or time-scale) field. Rows follow omega_grid, columns t_grid.
/// With log_scale set, omega_grid holds ln(s) for a scale axis.
struct PlaneField {
    Grid omega_grid;
    Grid t_grid;
    cmat values;
    bool log_scale = false;

    double row_coordinate(std::size_t j) const;
    /// Quadrature weight of row j in the natural row variable (omega or s).
    double row_weight(std::size_t j) const;
};

/// Logarithmic scale axis [s_min, s_max] stored as a uniform grid in ln(s).
Grid log_scale_grid(double s_min, double s_max, std::size_t n);

/// Cell-area measure of the region where |field| exceeds eps_rel times its peak.
double support_area(const PlaneField& field, double eps_rel);

/// Normalized second moments of f about alpha and of f^ about beta, multiplied.
double heisenberg_product(const Signal& f, double alpha, double beta, const Grid& omega_window);

/// Means of |f|^2 over t and |f^|^2 over the window (the optimal alpha, beta).
std::pair<double, double> heisenberg_centers(const Signal& f, const Grid& omega_window);

/// Wf(omega, t) at the nodes of f's grid. Lags step by twice the grid spacing, samples
/// outside the grid are zero.
PlaneField wigner(const Signal& f, const Grid& omega_grid);

/// G(omega, tau) = sum_x w_x f(x) conj(phi(x - tau)) e^{-i omega x} with ||phi|| = 1.
PlaneField gabor_transform(const Signal& f, const Signal& window, const Grid& omega_grid, const Grid& t_grid);

/// (1 / 2pi) double integral of G(omega, tau) phi(x - tau) e^{i omega x}, on the field's t_grid.
Signal gabor_inverse(const PlaneField& field, const Signal& window);

/// Admissibility constant: integral over omega > 0 of |mother^(omega)|^2 / omega.
double admissibility_constant(const Signal& mother);

/// Wf(u, s) = sum_t w_t f(t) s^{-1/2} conj(mother((t - u) / s)).
PlaneField cwt(const Signal& f, const Signal& mother, const Grid& log_scales, const Grid& u_grid);

/// Full inverse over the field's scales with ds / s^2 quadrature, on the field's u grid.
Signal cwt_inverse(const PlaneField& field, const Signal& mother);

/// |phi^(omega)| of the scaling function: sqrt of the integral over xi > omega of |mother^(xi)|^2 / xi.
double scaling_modulus(const Signal& mother, double omega);

/// Zero-phase scaling function sampled on the mother's grid.
Signal scaling_function(const Signal& mother);

/// Lf(u, s0) = sum_t w_t f(t) s0^{-1/2} phi((t - u) / s0).
Signal low_pass(const Signal& f, const Signal& mother, double s0, const Grid& u_grid);

/// Fine scales up to s0 plus the low-pass term at s0.
Signal two_part_reconstruct(const PlaneField& fine, const Signal& low, const Signal& mother, double s0);

struct QUPReport {
    enum class Verdict { consistent, violation };
    std::string transform;
    double eps_rel = 0.0;
    double measure_time = 0.0;
    double measure_transform = 0.0;  // at the first window
    double product = 0.0;
    Verdict verdict = Verdict::consistent;
    std::vector<double> window_measures;  // transform side, one per window
    double tightened_measure = 0.0;       // largest window at eps_rel * 1e-3
    bool degenerate_witness = false;
};

std::string to_string(QUPReport::Verdict v);

struct QupCheckParams {
    std::string transform = "fourier";  // fourier | wigner | gabor | cwt | kernel
    double window = 200.0;              // first half-width in omega (cwt: scale ratio)
    int doublings = 3;
    double step = 0.0;                  // omega step; 0 picks pi / (4 (b - a))
    std::optional<Signal> gabor_window;
    std::optional<Signal> mother;
    std::optional<KernelSpec> kernel;
};

/// Epsilon-support measures of f and its transform over doubling windows.
QUPReport qup_check(const Signal& f, const QupCheckParams& params, double eps_rel);

enum class DemoWitness { gaussian_triangle, orthogonal, cosine_gap };

/// Rank-one kernel chi_J(omega) h(t) paired with a compactly supported f.
QUPReport qup_violation_demo(double j_lo, double j_hi, DemoWitness witness = DemoWitness::gaussian_triangle,
                             double eps_rel = 1e-3);

}  // namespace qup
