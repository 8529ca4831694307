// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qup-lab contributors

#include "qup/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "qup/linalg.hpp"

namespace qup {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double falling(int j, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= (j - i);
    return r;
}

cplx ipow(cplx z, int k) {
    cplx r{1.0, 0.0};
    for (int i = 0; i < k; ++i) r *= z;
    return r;
}

cplx bilinear(const kernel::Tabulated& tab, double omega, double t) {
    if (!tab.omega_grid.contains(omega) || !tab.t_grid.contains(t)) {
        throw Error(Errc::evaluation_domain, "tabulated kernel evaluated outside its grids");
    }
    auto locate = [](const Grid& g, double x, Eigen::Index& i, double& frac) {
        const double pos = std::clamp((x - g.a) / g.spacing(), 0.0, static_cast<double>(g.n - 1));
        i = std::min<Eigen::Index>(static_cast<Eigen::Index>(std::floor(pos)), static_cast<Eigen::Index>(g.n) - 2);
        frac = pos - static_cast<double>(i);
    };
    Eigen::Index j = 0, i = 0;
    double fw = 0.0, ft = 0.0;
    locate(tab.omega_grid, omega, j, fw);
    locate(tab.t_grid, t, i, ft);
    const auto& v = tab.values;
    return (1 - fw) * ((1 - ft) * v(j, i) + ft * v(j, i + 1)) + fw * ((1 - ft) * v(j + 1, i) + ft * v(j + 1, i + 1));
}

}  // namespace

Profile::Profile(Signal table) : table_(std::move(table)) {}

Profile::Profile(std::function<cplx(double)> fn, std::string label) : fn_(std::move(fn)), label_(std::move(label)) {}

cplx Profile::operator()(double omega) const {
    if (fn_) return fn_(omega);
    return table_->at_or_zero(omega);
}

KernelSpec::KernelSpec(Variant v) : v_(std::move(v)) {
    if (const auto* p = std::get_if<kernel::PiecewiseIndicator>(&v_)) {
        if (p->breakpoints.size() < 2 || p->basis.size() + 1 != p->breakpoints.size()) {
            throw Error(Errc::invalid_argument, "piecewise kernel needs one basis function per cell");
        }
        for (std::size_t k = 1; k < p->breakpoints.size(); ++k) {
            if (!(p->breakpoints[k] > p->breakpoints[k - 1])) {
                throw Error(Errc::invalid_argument, "piecewise breakpoints must be strictly increasing");
            }
        }
    }
    if (const auto* t = std::get_if<kernel::Tabulated>(&v_)) {
        if (t->values.rows() != static_cast<Eigen::Index>(t->omega_grid.n) ||
            t->values.cols() != static_cast<Eigen::Index>(t->t_grid.n)) {
            throw Error(Errc::dimension_mismatch, "tabulated values do not match their grids");
        }
    }
    if (const auto* s = std::get_if<kernel::SincReproducing>(&v_)) {
        if (!(s->bandlimit > 0.0)) throw Error(Errc::invalid_argument, "sinc bandlimit must be positive");
    }
}

std::string KernelSpec::name() const {
    return std::visit(overloaded{
                          [](const kernel::Fourier&) { return std::string("fourier"); },
                          [](const kernel::InverseFourier&) { return std::string("inverse_fourier"); },
                          [](const kernel::Gabor&) { return std::string("gabor"); },
                          [](const kernel::Wavelet&) { return std::string("wavelet"); },
                          [](const kernel::TranslationInvariant&) { return std::string("translation_invariant"); },
                          [](const kernel::SincReproducing&) { return std::string("sinc"); },
                          [](const kernel::SeparableRank&) { return std::string("separable"); },
                          [](const kernel::PiecewiseIndicator&) { return std::string("piecewise_indicator"); },
                          [](const kernel::Tabulated&) { return std::string("tabulated"); },
                      },
                      v_);
}

cplx KernelSpec::operator()(double omega, double t) const {
    return std::visit(
        overloaded{
            [&](const kernel::Fourier&) { return std::polar(1.0, -omega * t); },
            [&](const kernel::InverseFourier&) { return std::polar(1.0, omega * t); },
            [&](const kernel::Gabor& g) { return g.window.at_or_zero(t - g.shift) * std::polar(1.0, -omega * t); },
            [&](const kernel::Wavelet& w) {
                if (!(omega > 0.0)) throw Error(Errc::evaluation_domain, "wavelet scale must be positive");
                return std::conj(w.mother.at_or_zero((t - w.translation) / omega)) / std::sqrt(omega);
            },
            [&](const kernel::TranslationInvariant& k) { return k.phi.at_or_zero(t - omega); },
            [&](const kernel::SincReproducing& s) {
                const double d = omega - t;
                if (std::abs(d) * s.bandlimit < 1e-8) return cplx{s.bandlimit / pi, 0.0};
                return cplx{std::sin(s.bandlimit * d) / (pi * d), 0.0};
            },
            [&](const kernel::SeparableRank& s) {
                cplx acc{0.0, 0.0};
                for (const auto& term : s.terms) acc += term.lambda * term.psi(omega) * term.phi.at_or_zero(t);
                return acc;
            },
            [&](const kernel::PiecewiseIndicator& p) {
                const auto& bp = p.breakpoints;
                if (omega < bp.front() || omega >= bp.back()) return cplx{0.0, 0.0};
                const auto it = std::upper_bound(bp.begin(), bp.end(), omega);
                const auto cell = static_cast<std::size_t>(it - bp.begin()) - 1;
                return p.basis[cell].at_or_zero(t);
            },
            [&](const kernel::Tabulated& tab) { return bilinear(tab, omega, t); },
        },
        v_);
}

cvec KernelSpec::row(double omega, const Grid& t_grid) const {
    cvec r(static_cast<Eigen::Index>(t_grid.n));
    for (std::size_t i = 0; i < t_grid.n; ++i) r(static_cast<Eigen::Index>(i)) = (*this)(omega, t_grid.node(i));
    return r;
}

std::optional<std::pair<double, double>> KernelSpec::omega_domain() const {
    if (const auto* p = std::get_if<kernel::PiecewiseIndicator>(&v_)) {
        return std::make_pair(p->breakpoints.front(), p->breakpoints.back());
    }
    if (const auto* t = std::get_if<kernel::Tabulated>(&v_)) return std::make_pair(t->omega_grid.a, t->omega_grid.b);
    return std::nullopt;
}

cplx KernelSpec::mixed_partial(int i_t, int j_omega, double omega, double t, double h) const {
    const bool fwd = std::holds_alternative<kernel::Fourier>(v_);
    const bool inv = std::holds_alternative<kernel::InverseFourier>(v_);
    if (fwd || inv) {
        // K = e^{s i w t}: d_w^j K = (s i t)^j K, then Leibniz in t.
        const cplx si{0.0, fwd ? -1.0 : 1.0};
        const cplx k = std::exp(si * omega * t);
        cplx acc{0.0, 0.0};
        for (int q = 0; q <= std::min(i_t, j_omega); ++q) {
            acc += binom(i_t, q) * ipow(si, j_omega) * falling(j_omega, q) * std::pow(t, j_omega - q) *
                   ipow(si * omega, i_t - q);
        }
        return acc * k;
    }
    const auto st = central_stencil(i_t, 2);
    const auto sw = central_stencil(j_omega, 2);
    auto to_nodes = [](const std::vector<int>& s) {
        std::vector<double> x;
        for (int k : s) x.push_back(static_cast<double>(k));
        return x;
    };
    const rmat ct = fornberg_weights(0.0, to_nodes(st), i_t);
    const rmat cw = fornberg_weights(0.0, to_nodes(sw), j_omega);
    cplx acc{0.0, 0.0};
    for (std::size_t a = 0; a < st.size(); ++a) {
        const double wt = ct(i_t, static_cast<Eigen::Index>(a));
        if (wt == 0.0) continue;
        for (std::size_t b = 0; b < sw.size(); ++b) {
            const double ww = cw(j_omega, static_cast<Eigen::Index>(b));
            if (ww == 0.0) continue;
            acc += wt * ww * (*this)(omega + sw[b] * h, t + st[a] * h);
        }
    }
    return acc / (std::pow(h, i_t) * std::pow(h, j_omega));
}

KernelSpec fourier_kernel() { return KernelSpec(kernel::Fourier{}); }
KernelSpec inverse_fourier_kernel() { return KernelSpec(kernel::InverseFourier{}); }
KernelSpec sinc_kernel(double bandlimit) { return KernelSpec(kernel::SincReproducing{bandlimit}); }

Signal hermite_function(std::size_t k, const Grid& grid) {
    std::vector<cplx> out(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double t = grid.node(i);
        double prev = 0.0;
        double cur = std::pow(pi, -0.25) * std::exp(-0.5 * t * t);
        for (std::size_t m = 0; m < k; ++m) {
            const double next =
                std::sqrt(2.0 / (m + 1.0)) * t * cur - std::sqrt(static_cast<double>(m) / (m + 1.0)) * prev;
            prev = cur;
            cur = next;
        }
        out[i] = cur;
    }
    return Signal(grid, std::move(out));
}

KernelSpec hermite_piecewise_kernel(std::size_t count, const Grid& t_grid) {
    kernel::PiecewiseIndicator p;
    for (std::size_t n = 0; n <= count; ++n) p.breakpoints.push_back(static_cast<double>(n));
    for (std::size_t n = 0; n < count; ++n) p.basis.push_back(hermite_function(n, t_grid));
    return KernelSpec(std::move(p));
}

DiscreteOperator discretize(const KernelSpec& kernel, const Grid& omega_grid, const Grid& t_grid) {
    DiscreteOperator op{omega_grid, t_grid, cmat(omega_grid.n, t_grid.n)};
    for (std::size_t j = 0; j < omega_grid.n; ++j) {
        op.entries.row(static_cast<Eigen::Index>(j)) = kernel.row(omega_grid.node(j), t_grid).transpose();
    }
    return op;
}

Signal apply(const DiscreteOperator& op, const Signal& f) {
    require_same_grid(op.t_grid, f.grid());
    const cvec fw = op.t_weights().cast<cplx>().cwiseProduct(f.to_vector());
    return Signal::from_vector(op.omega_grid, op.entries * fw);
}

cmat weighted_analysis(const DiscreteOperator& op) {
    const rvec so = sqrt_weights(op.omega_grid);
    const rvec st = sqrt_weights(op.t_grid);
    return so.cast<cplx>().asDiagonal() * op.entries * st.cast<cplx>().asDiagonal();
}

FrameBounds frame_operator_bounds(const DiscreteOperator& op) {
    const cmat b = weighted_analysis(op);
    const rvec s = singular_values(b);
    FrameBounds fb;
    if (s.size() == 0) return fb;
    fb.B = s(0) * s(0);
    // Fewer omega rows than t columns leaves a nontrivial null space.
    fb.A = (b.rows() < b.cols()) ? 0.0 : s(s.size() - 1) * s(s.size() - 1);
    return fb;
}

Signal synthesize(const DiscreteOperator& op, const Signal& transformed) {
    require_same_grid(op.omega_grid, transformed.grid());
    const cmat b = weighted_analysis(op);
    const rvec so = sqrt_weights(op.omega_grid);
    const rvec st = sqrt_weights(op.t_grid);
    const cvec y = so.cast<cplx>().cwiseProduct(transformed.to_vector());
    Eigen::CompleteOrthogonalDecomposition<cmat> cod(b);
    cod.setThreshold(1e-10);
    const cvec g = cod.solve(y);
    return Signal::from_vector(op.t_grid, g.cwiseQuotient(st.cast<cplx>()));
}

}  // namespace qup
