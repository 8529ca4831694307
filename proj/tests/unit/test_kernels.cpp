// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qup-lab contributors

#include <doctest.h>

#include <cmath>
#include <random>

#include "qup/kernels.hpp"

using namespace qup;

namespace {
cplx re(double x) { return {x, 0.0}; }
}  // namespace

TEST_CASE("discretize reproduces closed-form entries") {
    const Grid w = make_grid(-5.0, 5.0, 21);
    const Grid t = make_grid(-1.0, 1.0, 31);
    const auto op = discretize(fourier_kernel(), w, t);
    for (std::size_t j = 0; j < w.n; j += 5)
        for (std::size_t i = 0; i < t.n; i += 7)
            CHECK(std::abs(op.entries(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) -
                           std::polar(1.0, -w.node(j) * t.node(i))) < 1e-15);

    const Grid same = make_grid(-3.0, 3.0, 61);
    const auto sinc = discretize(sinc_kernel(1.0), same, same);
    for (Eigen::Index k = 0; k < 61; ++k) CHECK(std::abs(sinc.entries(k, k) - 1.0 / pi) < 1e-15);

    const Grid mother_grid = make_grid(-8.0, 8.0, 801);
    const Signal mh = sample(mother_grid, [](double x) { return re((1 - x * x) * std::exp(-0.5 * x * x)); });
    const KernelSpec wav(kernel::Wavelet{mh, 0.0});
    CHECK_THROWS_AS(discretize(wav, make_grid(0.0, 2.0, 11), t), Error);
    try {
        discretize(wav, make_grid(0.0, 2.0, 11), t);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::evaluation_domain);
    }
    CHECK_NOTHROW(discretize(wav, make_grid(0.1, 2.0, 11), t));
}

TEST_CASE("apply examples") {
    const Grid t = make_grid(-1.0, 1.0, 2001);
    const Signal box = sample(t, [](double) { return re(1.0); });
    const auto op = discretize(fourier_kernel(), make_grid(-1.0, 1.0, 3), t);
    CHECK(std::abs(apply(op, box)[1] - 2.0) < 1e-6);

    const Grid w = make_grid(-2.0, 2.0, 41);
    const Signal psi = sample(w, [](double x) { return cplx{std::cos(x), 0.5 * x}; });
    const Signal phi0 = sample(t, [](double x) { return re(std::exp(-x * x)); });
    const Signal phi = Signal::from_vector(t, phi0.to_vector() / norm(phi0));
    kernel::SeparableRank sep;
    sep.terms.push_back({1.0, Profile(psi), phi});
    const auto sop = discretize(KernelSpec(sep), w, t);
    const Signal out = apply(sop, phi);
    for (std::size_t j = 0; j < w.n; ++j) CHECK(std::abs(out[j] - psi[j]) < 1e-8);

    // sin(t)/t is bandlimited to [-1, 1], so the sinc kernel reproduces it.
    const Grid wide = make_grid(-5000.0, 5000.0, 20001);
    const Signal sc = sample(wide, [](double x) { return re(x == 0.0 ? 1.0 : std::sin(x) / x); });
    const Grid interior = make_grid(-10.0, 10.0, 21);
    const Signal rep = apply(discretize(sinc_kernel(1.0), interior, wide), sc);
    for (std::size_t j = 0; j < interior.n; ++j) {
        const double x = interior.node(j);
        const double exact = x == 0.0 ? 1.0 : std::sin(x) / x;
        CHECK(std::abs(rep[j] - exact) < 1e-4);
    }

    CHECK_THROWS_AS(apply(op, Signal(make_grid(0.0, 1.0, 5))), Error);
}

TEST_CASE("frame operator bounds") {
    // Nyquist-matched t-grid: the discrete band [-80, 80] covers one full period.
    // Trapezoidal end weights halve the energy of the boundary nodes, so A sits
    // at half of B; B and the Rayleigh quotient of interior signals hit 2 pi.
    const Grid t = make_grid(-1.0, 1.0, 52);
    const auto op = discretize(fourier_kernel(), make_grid(-80.0, 80.0, 4001), t);
    const auto fb = frame_operator_bounds(op);
    CHECK(std::abs(fb.B - 2 * pi) < 0.05 * 2 * pi);
    CHECK(std::abs(fb.A - pi) < 0.05 * pi);
    const Signal bump = sample(t, [](double x) { return re(std::exp(-8 * x * x)); });
    const Signal fh = apply(op, bump);
    double energy = 0.0;
    for (std::size_t j = 0; j < fh.size(); ++j) energy += op.omega_grid.weight(j) * std::norm(fh[j]);
    CHECK(std::abs(energy / std::pow(norm(bump), 2) - 2 * pi) < 0.05 * 2 * pi);

    const auto narrow = discretize(fourier_kernel(), make_grid(-1.0, 1.0, 401), make_grid(-1.0, 1.0, 40));
    const auto nb = frame_operator_bounds(narrow);
    CHECK(nb.A / nb.B < 1e-6);

    kernel::Tabulated zero{make_grid(0.0, 1.0, 5), make_grid(0.0, 1.0, 4), cmat::Zero(5, 4)};
    const auto zb = frame_operator_bounds(discretize(KernelSpec(zero), make_grid(0.0, 1.0, 9), make_grid(0.0, 1.0, 4)));
    CHECK(zb.A == 0.0);
    CHECK(zb.B == 0.0);
}

TEST_CASE("linearity, separable norm and refinement order") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd;
    const Grid t = make_grid(-1.0, 1.0, 129);
    const auto op = discretize(fourier_kernel(), make_grid(-6.0, 6.0, 97), t);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<cplx> a(t.n), b(t.n);
        for (std::size_t i = 0; i < t.n; ++i) {
            a[i] = {nd(rng), nd(rng)};
            b[i] = {nd(rng), nd(rng)};
        }
        const cplx alpha{nd(rng), nd(rng)}, beta{nd(rng), nd(rng)};
        const Signal f(t, a), g(t, b);
        const Signal comb = Signal::from_vector(t, alpha * f.to_vector() + beta * g.to_vector());
        const cvec lhs = apply(op, comb).to_vector();
        const cvec rhs = alpha * apply(op, f).to_vector() + beta * apply(op, g).to_vector();
        CHECK((lhs - rhs).norm() <= 1e-12 * rhs.norm());
    }

    // Orthonormal phi_i and psi_i make the separable operator norm max |lambda_i|.
    const Grid w = make_grid(-pi, pi, 801);
    const Grid tt = make_grid(-pi, pi, 801);
    kernel::SeparableRank sep;
    const double lambdas[] = {0.9, -0.4, 0.2};
    for (int k = 0; k < 3; ++k) {
        const Signal psi = sample(w, [k](double x) { return std::polar(1.0 / std::sqrt(2 * pi), (k + 1) * x); });
        const Signal phi = sample(tt, [k](double x) { return std::polar(1.0 / std::sqrt(2 * pi), -(k + 2) * x); });
        sep.terms.push_back({lambdas[k], Profile(psi), phi});
    }
    const auto fb = frame_operator_bounds(discretize(KernelSpec(sep), w, tt));
    CHECK(std::sqrt(fb.B) <= 0.9 + 1e-3);

    auto err = [](long long n) {
        const Grid g = make_grid(0.0, 1.0, n);
        const Signal f = sample(g, [](double x) { return re(std::exp(x)); });
        const auto o = discretize(fourier_kernel(), make_grid(3.0, 4.0, 2), g);
        const cplx exact = (std::exp(cplx{1.0, -3.0}) - 1.0) / cplx{1.0, -3.0};
        return std::abs(apply(o, f)[0] - exact);
    };
    CHECK(std::log2(err(65) / err(129)) > 1.9);
    CHECK(std::log2(err(129) / err(257)) > 1.9);
}

TEST_CASE("kernel variants evaluate") {
    const Grid t = make_grid(-2.0, 2.0, 401);
    const auto herm = hermite_piecewise_kernel(5, t);
    CHECK(herm.omega_domain()->second == 5.0);
    const Signal h3 = hermite_function(3, t);
    CHECK(std::abs(herm(3.5, 0.7) - h3.at(0.7)) < 1e-14);
    CHECK(herm(5.0, 0.7) == cplx{0.0, 0.0});
    CHECK(std::abs(norm(hermite_function(2, make_grid(-12.0, 12.0, 2401))) - 1.0) < 1e-10);

    const Signal phi = sample(t, [](double x) { return re(std::exp(-x * x)); });
    const KernelSpec ti(kernel::TranslationInvariant{phi});
    CHECK(std::abs(ti(0.5, 1.0) - std::exp(-0.25)) < 1e-4);

    const KernelSpec gab(kernel::Gabor{phi, 0.5});
    CHECK(std::abs(gab(2.0, 1.0) - std::exp(-0.25) * std::polar(1.0, -2.0)) < 1e-4);

    kernel::Tabulated tab{make_grid(0.0, 1.0, 2), make_grid(0.0, 1.0, 2), cmat(2, 2)};
    tab.values << 0.0, 1.0, 2.0, 3.0;
    const KernelSpec tk(tab);
    CHECK(std::abs(tk(0.5, 0.5) - 1.5) < 1e-15);
    CHECK_THROWS_AS(tk(1.5, 0.5), Error);

    CHECK_THROWS_AS(KernelSpec(kernel::PiecewiseIndicator{{0.0, 1.0, 0.5}, {phi, phi}}), Error);
    CHECK(fourier_kernel().name() == "fourier");
}

TEST_CASE("pseudo-inverse synthesis recovers resolvable signals") {
    const Grid t = make_grid(-1.0, 1.0, 41);
    const auto op = discretize(fourier_kernel(), make_grid(-70.0, 70.0, 1401), t);
    const Signal f = sample(t, [](double x) { return cplx{std::exp(-4 * x * x), x}; });
    const Signal back = synthesize(op, apply(op, f));
    CHECK(norm(Signal::from_vector(t, back.to_vector() - f.to_vector())) < 1e-8 * norm(f));
}
