// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qup-lab contributors

#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qup/independence.hpp"
#include "qup/kernels.hpp"

namespace qup {

/// The point at infinity of the omega axis.
inline constexpr double INFINITY_POINT = std::numeric_limits<double>::infinity();

/// A kernel seen as a curve omega -> K(omega, .) in the quadrature-weighted
/// geometry, expressed in an orthonormal basis of the kernel's numerical span.
class KernelCurve {
public:
    /// Span estimated from `span_samples` omega values.
    KernelCurve(const KernelSpec& kernel, const Grid& t_grid, const Grid& span_samples);
    /// Arbitrary ambient coordinates (already weighted); span estimated the same way.
    KernelCurve(std::function<cvec(double)> ambient, std::size_t ambient_dim, const Grid& span_samples);

    /// Coordinates of K(omega, .) in the span basis.
    cvec coords(double omega) const;
    /// Weighted ambient vector sqrt(w_i) K(omega, t_i).
    cvec ambient(double omega) const { return ambient_(omega); }

    std::size_t span_dim() const { return static_cast<std::size_t>(basis_.cols()); }
    std::size_t ambient_dim() const { return static_cast<std::size_t>(basis_.rows()); }
    const cmat& basis() const { return basis_; }

    /// Same curve after the unitary change of ambient coordinates x -> U x.
    KernelCurve transformed(const cmat& unitary) const;

private:
    KernelCurve(std::function<cvec(double)> ambient, cmat basis);
    std::function<cvec(double)> ambient_;
    cmat basis_;
};

/// Default omega span domain: the kernel's own domain or [-omega_max, omega_max].
Grid default_span_grid(const KernelSpec& kernel, const Grid& t_grid, std::optional<double> omega_max = std::nullopt);

/// 200 / (b - a) in the natural units of the t-grid.
double default_omega_max(const Grid& t_grid);

struct RadiusEvidence {
    double radius = 0.0;
    double A = 0.0;
    double B = 0.0;
    std::size_t subspace_dim = 0;
    bool witness_gap = false;  // some transformed function vanishes on >10% of the neighborhood
};

struct CompletePointReport {
    enum class Verdict { complete, not_complete, inconclusive };
    enum class Regularity { regular, singular };
    enum class Stability { stable, unstable, untested };

    double omega0 = 0.0;  // INFINITY_POINT for the point at infinity
    Verdict verdict = Verdict::inconclusive;
    Regularity regularity = Regularity::singular;
    Stability stability = Stability::untested;
    bool trivial = false;
    std::vector<RadiusEvidence> evidence;
    double omega_max = 0.0;  // truncation used for infinity neighborhoods

    double min_A() const;
    double max_B() const;
};

std::string to_string(CompletePointReport::Verdict v);
std::string to_string(CompletePointReport::Regularity r);
std::string to_string(CompletePointReport::Stability s);

struct ClassifyOptions {
    std::size_t n_omega = 201;        // samples per neighborhood interval (raised to resolve oscillation)
    std::optional<double> omega_max;  // infinity truncation, default 200 / (b - a)
    double completeness_floor = 1e-9;
    double stability_fraction = 1e-6;
    double continuity_rel = 1e-3;
    double trivial_margin = 0.1;
    double witness_eps = 1e-12;  // exact vanishing, not mere concentration
};

/// Frame bounds of the kernel restricted to (omega0 - r, omega0 + r), measured on
/// the kernel's span.
FrameBounds local_frame_bounds(const KernelSpec& kernel, double omega0, double r, const Grid& t_grid,
                               std::size_t n_omega);
FrameBounds local_frame_bounds(const KernelCurve& curve, double omega0, double r, std::size_t n_omega);

/// Radii decrease for finite points and increase for INFINITY_POINT (shrinking neighborhoods).
CompletePointReport classify_point(const KernelSpec& kernel, double omega0, const std::vector<double>& radii,
                                   const Grid& t_grid, const ClassifyOptions& opts = {});
CompletePointReport classify_point(const KernelCurve& curve, double omega0, const std::vector<double>& radii,
                                   const ClassifyOptions& opts, std::optional<std::pair<double, double>> domain,
                                   double omega_scale);

/// classify_point at each omega0 with one shared span estimate.
std::vector<CompletePointReport> scan_points(const KernelSpec& kernel, const std::vector<double>& omegas,
                                             const std::vector<double>& radii, const Grid& t_grid,
                                             const ClassifyOptions& opts = {});

/// d-th singular values (1-based dims) of the restricted weighted analysis operator.
/// The Fourier pair is evaluated in extended precision.
std::vector<double> stability_decay(const KernelSpec& kernel, double omega0, double r, const std::vector<int>& dims,
                                    const Grid& t_grid, std::size_t n_omega = 401);

struct ConcentrationReport {
    double r = 0.0;
    double lambda0 = 0.0;
    double tail_bound = 1.0;
    Signal eigenvector;  // unit-norm top mode on the t-grid
};

/// Largest eigenvalue of the time- and band-limiting operator (Nystrom sinc kernel).
ConcentrationReport tail_completeness(const KernelSpec& kernel, double r, const Grid& t_grid);

/// Smallest radius at which the family restricted to V_r(omega0) is independent.
double independent_radius(const FunctionFamily& family, double omega0, double tol = 1e-10);

struct CurveJet {
    double omega0 = 0.0;
    int order = 0;
    double h = 0.0;
    std::vector<cvec> derivatives;  // span coordinates of gamma^(1..order)
    std::shared_ptr<const cmat> basis;

    /// Weighted ambient form of gamma^(k), k in 1..order.
    cvec ambient(int k) const { return (*basis) * derivatives[static_cast<std::size_t>(k - 1)]; }
};

CurveJet curve_jet(const KernelCurve& curve, double omega0, int m, double h);
CurveJet curve_jet(const KernelSpec& kernel, double omega0, int m, double h, const Grid& t_grid);

struct CurvatureProfile {
    std::vector<double> curvatures;  // lambda_1 .. lambda_{m-1}
    std::vector<cvec> frame;         // e_1 .. e_m
};

/// Generalized curvatures from jets at omega0 - h, omega0, omega0 + h.
CurvatureProfile frenet_curvatures(const CurveJet& minus, const CurveJet& center, const CurveJet& plus);

enum class CurveVerdict { complete, not_complete };

/// Nonvanishing jet determinant at omega0 and omega0 +- h.
CurveVerdict curve_wronskian_test(const KernelCurve& curve, double omega0, int n, double h);
CurveVerdict curve_wronskian_test(const KernelSpec& kernel, double omega0, int n, double h, const Grid& t_grid);

/// Verdict from generalized curvatures: complete iff the jet is regular and every
/// curvature is nonzero (relative tolerance 1e-6). Order n = 1 needs gamma' != 0.
CurveVerdict curvature_verdict(const KernelCurve& curve, double omega0, int n, double h);

struct CatalogKernel {
    std::string name;
    KernelSpec kernel;
    double omega0;
    int dim;
};

/// Finite-dimensional kernels over orthonormal polynomial bases of the t-grid.
std::vector<CatalogKernel> finite_kernel_catalog(const Grid& t_grid);

/// First k discrete-orthonormal polynomials on the grid (trapezoidal weights).
std::vector<Signal> orthonormal_polynomials(const Grid& t_grid, std::size_t k);

}  // namespace qup
