// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qup-lab contributors

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "qup/error.hpp"

namespace qup {

using cplx = std::complex<double>;
using cvec = Eigen::VectorXcd;
using cmat = Eigen::MatrixXcd;
using rvec = Eigen::VectorXd;
using rmat = Eigen::MatrixXd;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx I{0.0, 1.0};

/// Uniform grid on [a, b] with n nodes and trapezoidal weights.
struct Grid {
    double a = 0.0;
    double b = 1.0;
    std::size_t n = 2;

    double spacing() const { return (b - a) / static_cast<double>(n - 1); }
    double node(std::size_t i) const;
    double weight(std::size_t i) const;
    double length() const { return b - a; }
    std::vector<double> nodes() const;
    rvec weights() const;

    /// Index of the node nearest to t, clamped to the grid.
    std::size_t nearest(double t) const;
    bool contains(double t, double slack = 1e-12) const;

    friend bool operator==(const Grid&, const Grid&) = default;
};

Grid make_grid(double a, double b, long long n);

/// Complex samples on a grid.
class Signal {
public:
    Signal() = default;
    Signal(Grid grid, std::vector<cplx> values);
    explicit Signal(Grid grid);

    const Grid& grid() const { return grid_; }
    const std::vector<cplx>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    cplx operator[](std::size_t i) const { return values_[i]; }

    /// Linear interpolation; throws point_out_of_range outside [a, b].
    cplx at(double t) const;
    /// Linear interpolation, zero outside [a, b].
    cplx at_or_zero(double t) const;

    cvec to_vector() const;
    static Signal from_vector(const Grid& grid, const cvec& v);

private:
    Grid grid_;
    std::vector<cplx> values_;
};

Signal sample(const Grid& grid, const std::function<cplx(double)>& fn);

struct SupportReport {
    double threshold = 0.0;
    double measure = 0.0;
    Grid window;
};

/// Trapezoidal approximation of the integral of f * conj(g).
cplx inner(const Signal& f, const Signal& g);
double norm(const Signal& f);

/// Sum of quadrature weights where |f| exceeds eps_rel times its max modulus.
SupportReport support_measure(const Signal& f, double eps_rel);

void require_same_grid(const Grid& g1, const Grid& g2);

/// Direct quadrature transform: out(w) = sum_i w_i f(t_i) exp(sign * i * w * t_i).
/// Evaluated with a phase recurrence along the uniform t-grid.
Signal direct_transform(const Signal& f, const Grid& omega, double sign = -1.0);

/// Square roots of the trapezoidal weights, as a diagonal scaling vector.
rvec sqrt_weights(const Grid& grid);

}  // namespace qup
