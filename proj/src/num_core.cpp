// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qup-lab contributors

#include "qup/num_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qup {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::invalid_range: return "invalid-range";
        case Errc::invalid_argument: return "invalid-argument";
        case Errc::grid_mismatch: return "grid-mismatch";
        case Errc::derivative_unavailable: return "derivative-unavailable";
        case Errc::point_out_of_range: return "point-out-of-range";
        case Errc::rank_deficient_family: return "rank-deficient-family";
        case Errc::evaluation_domain: return "evaluation-domain";
        case Errc::schedule_empty: return "schedule-empty";
        case Errc::never_independent: return "never-independent";
        case Errc::rank_collapse: return "rank-collapse";
        case Errc::dimension_mismatch: return "dimension-mismatch";
        case Errc::zero_signal: return "zero-signal";
        case Errc::zero_window: return "zero-window";
        case Errc::inadmissible_mother: return "inadmissible-mother";
        case Errc::window_too_small: return "window-too-small";
        case Errc::not_a_frame: return "not-a-frame";
        case Errc::full_support_input: return "full-support-input";
        case Errc::length_mismatch: return "length-mismatch";
        case Errc::criterion_failed: return "criterion-failed";
        case Errc::source_not_acfps: return "source-not-acfps";
        case Errc::empty_dictionary: return "empty-dictionary";
        case Errc::ill_conditioned: return "ill-conditioned";
        case Errc::probes_not_complete: return "probes-not-complete";
        case Errc::io: return "io";
        case Errc::parse: return "parse";
    }
    return "unknown";
}

double Grid::node(std::size_t i) const {
    // Pin the last node to b exactly.
    if (i + 1 == n) return b;
    return a + static_cast<double>(i) * spacing();
}

double Grid::weight(std::size_t i) const {
    const double h = spacing();
    return (i == 0 || i + 1 == n) ? 0.5 * h : h;
}

std::vector<double> Grid::nodes() const {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = node(i);
    return out;
}

rvec Grid::weights() const {
    rvec w(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) w(static_cast<Eigen::Index>(i)) = weight(i);
    return w;
}

std::size_t Grid::nearest(double t) const {
    const double x = std::round((t - a) / spacing());
    if (x <= 0.0) return 0;
    if (x >= static_cast<double>(n - 1)) return n - 1;
    return static_cast<std::size_t>(x);
}

bool Grid::contains(double t, double slack) const {
    const double tol = slack * std::max(1.0, std::max(std::abs(a), std::abs(b)));
    return t >= a - tol && t <= b + tol;
}

Grid make_grid(double a, double b, long long n) {
    if (!(a < b) || n < 2 || !std::isfinite(a) || !std::isfinite(b)) {
        throw Error(Errc::invalid_range, "grid requires a < b and n >= 2, got a=" + std::to_string(a) +
                                             " b=" + std::to_string(b) + " n=" + std::to_string(n));
    }
    return Grid{a, b, static_cast<std::size_t>(n)};
}

Signal::Signal(Grid grid, std::vector<cplx> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.n) {
        throw Error(Errc::length_mismatch, "signal has " + std::to_string(values_.size()) +
                                               " values for a grid of " + std::to_string(grid_.n));
    }
    for (const auto& v : values_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw Error(Errc::invalid_argument, "signal values must be finite");
        }
    }
}

Signal::Signal(Grid grid) : grid_(grid), values_(grid.n, cplx{0.0, 0.0}) {}

cplx Signal::at(double t) const {
    if (!grid_.contains(t)) {
        throw Error(Errc::point_out_of_range,
                    "t=" + std::to_string(t) + " outside [" + std::to_string(grid_.a) + ", " +
                        std::to_string(grid_.b) + "]");
    }
    return at_or_zero(std::clamp(t, grid_.a, grid_.b));
}

cplx Signal::at_or_zero(double t) const {
    if (t < grid_.a || t > grid_.b) return {0.0, 0.0};
    const double x = (t - grid_.a) / grid_.spacing();
    auto i = static_cast<std::size_t>(std::floor(x));
    if (i >= grid_.n - 1) return values_.back();
    const double frac = x - static_cast<double>(i);
    return values_[i] * (1.0 - frac) + values_[i + 1] * frac;
}

cvec Signal::to_vector() const {
    cvec v(static_cast<Eigen::Index>(values_.size()));
    for (std::size_t i = 0; i < values_.size(); ++i) v(static_cast<Eigen::Index>(i)) = values_[i];
    return v;
}

Signal Signal::from_vector(const Grid& grid, const cvec& v) {
    return Signal(grid, std::vector<cplx>(v.data(), v.data() + v.size()));
}

Signal sample(const Grid& grid, const std::function<cplx(double)>& fn) {
    std::vector<cplx> values(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) values[i] = fn(grid.node(i));
    return Signal(grid, std::move(values));
}

void require_same_grid(const Grid& g1, const Grid& g2) {
    if (!(g1 == g2)) throw Error(Errc::grid_mismatch, "signals live on different grids");
}

cplx inner(const Signal& f, const Signal& g) {
    require_same_grid(f.grid(), g.grid());
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < f.size(); ++i) acc += f.grid().weight(i) * f[i] * std::conj(g[i]);
    return acc;
}

double norm(const Signal& f) { return std::sqrt(std::max(0.0, inner(f, f).real())); }

SupportReport support_measure(const Signal& f, double eps_rel) {
    if (!(eps_rel > 0.0 && eps_rel < 1.0)) {
        throw Error(Errc::invalid_argument, "eps_rel must lie in (0, 1)");
    }
    double peak = 0.0;
    for (const auto& v : f.values()) peak = std::max(peak, std::abs(v));
    SupportReport rep{eps_rel, 0.0, f.grid()};
    if (peak == 0.0) return rep;
    const double level = eps_rel * peak;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (std::abs(f[i]) > level) rep.measure += f.grid().weight(i);
    }
    return rep;
}

Signal direct_transform(const Signal& f, const Grid& omega, double sign) {
    const Grid& tg = f.grid();
    const double h = tg.spacing();
    std::vector<cplx> fw(tg.n);
    for (std::size_t i = 0; i < tg.n; ++i) fw[i] = tg.weight(i) * f[i];
    std::vector<cplx> out(omega.n);
    constexpr std::size_t resync = 64;
    for (std::size_t j = 0; j < omega.n; ++j) {
        const double w = omega.node(j);
        const cplx step = std::polar(1.0, sign * w * h);
        cplx phase = std::polar(1.0, sign * w * tg.a);
        cplx acc{0.0, 0.0};
        for (std::size_t i = 0; i < tg.n; ++i) {
            if (i % resync == 0) phase = std::polar(1.0, sign * w * tg.node(i));
            acc += fw[i] * phase;
            phase *= step;
        }
        out[j] = acc;
    }
    return Signal(omega, std::move(out));
}

rvec sqrt_weights(const Grid& grid) { return grid.weights().cwiseSqrt(); }

}  // namespace qup
