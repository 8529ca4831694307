// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qup-lab contributors

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qup/num_core.hpp"

namespace qup {

/// Coefficient profile over omega: tabulated (linear interpolation, zero outside)
/// or closed-form.
class Profile {
public:
    Profile(Signal table);
    Profile(std::function<cplx(double)> fn, std::string label);

    cplx operator()(double omega) const;
    bool closed_form() const { return static_cast<bool>(fn_); }
    const std::string& label() const { return label_; }

private:
    std::optional<Signal> table_;
    std::function<cplx(double)> fn_;
    std::string label_;
};

namespace kernel {

struct Fourier {};
struct InverseFourier {};

/// phi(x - shift) e^{-i omega x}; omega indexes frequency at a fixed time shift.
struct Gabor {
    Signal window;
    double shift = 0.0;
};

/// s^{-1/2} conj(mother((t - u)/s)); omega plays the scale s at a fixed translation u.
struct Wavelet {
    Signal mother;
    double translation = 0.0;
};

/// phi(t - omega).
struct TranslationInvariant {
    Signal phi;
};

/// sin(bandlimit (omega - t)) / (pi (omega - t)).
struct SincReproducing {
    double bandlimit = 1.0;
};

struct SeparableTerm {
    cplx lambda;
    Profile psi;
    Signal phi;
};

/// sum_i lambda_i psi_i(omega) phi_i(t).
struct SeparableRank {
    std::vector<SeparableTerm> terms;
};

/// sum_n chi_[b_n, b_{n+1})(omega) H_n(t).
struct PiecewiseIndicator {
    std::vector<double> breakpoints;
    std::vector<Signal> basis;
};

/// Samples on a product grid, bilinear interpolation in between.
struct Tabulated {
    Grid omega_grid;
    Grid t_grid;
    cmat values;  // rows: omega, columns: t
};

}  // namespace kernel

/// Symbolic descriptor of an integral kernel K(omega, t).
class KernelSpec {
public:
    using Variant = std::variant<kernel::Fourier, kernel::InverseFourier, kernel::Gabor, kernel::Wavelet,
                                 kernel::TranslationInvariant, kernel::SincReproducing, kernel::SeparableRank,
                                 kernel::PiecewiseIndicator, kernel::Tabulated>;

    KernelSpec(Variant v);

    const Variant& variant() const { return v_; }
    std::string name() const;

    /// K(omega, t); throws evaluation_domain where the kernel is undefined.
    cplx operator()(double omega, double t) const;

    /// K(omega, t_i) for every node of the grid.
    cvec row(double omega, const Grid& t_grid) const;

    /// Natural omega domain for kernels with one (piecewise, tabulated, separable with tables).
    std::optional<std::pair<double, double>> omega_domain() const;

    /// d^i/dt^i d^j/domega^j K; closed form for the Fourier pair, central differences otherwise.
    cplx mixed_partial(int i_t, int j_omega, double omega, double t, double h = 1e-3) const;

private:
    Variant v_;
};

KernelSpec fourier_kernel();
KernelSpec inverse_fourier_kernel();
KernelSpec sinc_kernel(double bandlimit);

/// Hermite functions h_0..h_{count-1} on the grid, each attached to the cell [n, n+1).
KernelSpec hermite_piecewise_kernel(std::size_t count, const Grid& t_grid);

/// Normalized Hermite function of order k sampled on the grid.
Signal hermite_function(std::size_t k, const Grid& grid);

/// Sampled matrix form of a kernel on a product grid.
struct DiscreteOperator {
    Grid omega_grid;
    Grid t_grid;
    cmat entries;  // (j, i) = K(omega_j, t_i)

    rvec t_weights() const { return t_grid.weights(); }
};

struct FrameBounds {
    enum class Method { eigen, randomized };
    double A = 0.0;
    double B = 0.0;
    Method method = Method::eigen;
};

DiscreteOperator discretize(const KernelSpec& kernel, const Grid& omega_grid, const Grid& t_grid);

/// f~(omega_j) = sum_i w_i K(omega_j, t_i) f(t_i).
Signal apply(const DiscreteOperator& op, const Signal& f);

/// W_omega^{1/2} K W_t^{1/2}, whose Gram matrix is the weighted frame matrix.
cmat weighted_analysis(const DiscreteOperator& op);

/// Extreme eigenvalues of W_t^{1/2} K^H W_omega K W_t^{1/2}.
FrameBounds frame_operator_bounds(const DiscreteOperator& op);

/// Least-squares synthesis: recovers f on the t-grid from samples of f~ via the
/// pseudo-inverse of the weighted analysis map.
Signal synthesize(const DiscreteOperator& op, const Signal& transformed);

}  // namespace qup
