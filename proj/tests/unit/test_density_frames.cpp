// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qup-lab contributors

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include "qup/density_frames.hpp"

using namespace qup;

namespace {

using Term = BandlimitedMixture::Term;

std::optional<Errc> code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

PointSet merged(const PointSet& a, const PointSet& b) {
    std::vector<double> pts = a.points;
    pts.insert(pts.end(), b.points.begin(), b.points.end());
    std::sort(pts.begin(), pts.end());
    return make_point_set(pts, std::max(a.R, b.R));
}

}  // namespace

TEST_CASE("point sets validate") {
    CHECK(code_of([] { make_point_set({1.0, 0.5}, 2.0); }) == Errc::invalid_argument);
    CHECK(code_of([] { make_point_set({0.0, 3.0}, 2.0); }) == Errc::invalid_argument);
    CHECK(code_of([] { make_point_set({0.0}, 0.0); }) == Errc::invalid_range);
    CHECK(lattice(1.0, 50.0).points.size() == 101);
}

TEST_CASE("Beurling densities of lattices") {
    const std::vector<double> radii{25.0, 50.0, 100.0};
    const auto z = beurling_densities(lattice(1.0, 50.0), radii);
    CHECK(std::abs(z.d_minus - 1.0) < 0.05);
    CHECK(std::abs(z.d_plus - 1.0) < 0.05);
    CHECK(z.separation == doctest::Approx(1.0));
    CHECK(z.r_max == 100.0);

    const auto two = beurling_densities(lattice(2.0, 50.0), radii);
    CHECK(std::abs(two.d_minus - 0.5) < 0.05 * 0.5);
    CHECK(std::abs(two.d_plus - 0.5) < 0.05 * 0.5);

    const auto doubled = beurling_densities(merged(lattice(1.0, 50.0), lattice(1.0, 50.0, 0.5)), radii);
    CHECK(std::abs(doubled.d_minus - 2.0) < 0.1);
    CHECK(std::abs(doubled.d_plus - 2.0) < 0.1);
    CHECK(doubled.separation == doctest::Approx(0.5));

    // Brute-force sweep of window positions.
    const auto lam = lattice(1.0, 50.0);
    long long lo = 1 << 30, hi = 0;
    for (double x = -50.0; x <= 0.0 + 1e-9; x += 1e-3) {
        long long c = 0;
        for (double p : lam.points) c += (p >= x && p < x + 50.0) ? 1 : 0;
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    CHECK(z.n_minus[1] == lo);
    CHECK(z.n_plus[1] == hi);

    CHECK(code_of([&] { beurling_densities(lam, {120.0}); }) == Errc::window_too_small);
    CHECK(code_of([&] { beurling_densities(lam, {}); }) == Errc::schedule_empty);
}

TEST_CASE("densities under translation and dilation") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double step = 0.5 + u(rng);
        std::vector<double> pts;
        for (double x = -59.0 + step * u(rng); x <= 59.0; x += step * (0.6 + 0.8 * u(rng))) pts.push_back(x);
        const PointSet base = make_point_set(pts, 60.0);
        const auto d = beurling_densities(base, {40.0, 80.0});

        // Shift by less than one gap: each window edge crosses at most one point.
        const double c = u(rng) * d.separation;
        std::vector<double> moved = pts;
        for (double& x : moved) x += c;
        const auto dm = beurling_densities(make_point_set(moved, 60.0), {40.0, 80.0});
        CHECK(std::abs(dm.d_minus - d.d_minus) <= 1.0 / 80.0 + 1e-12);
        CHECK(std::abs(dm.d_plus - d.d_plus) <= 1.0 / 80.0 + 1e-12);

        const double alpha = 0.5 + 2.0 * u(rng);
        std::vector<double> scaled = pts;
        for (double& x : scaled) x *= alpha;
        const auto ds = beurling_densities(make_point_set(scaled, 60.0 * alpha), {40.0 * alpha, 80.0 * alpha});
        CHECK(ds.d_minus == doctest::Approx(d.d_minus / alpha).epsilon(1e-9));
        CHECK(ds.d_plus == doctest::Approx(d.d_plus / alpha).epsilon(1e-9));
    }
}

TEST_CASE("exponential frame test") {
    const auto z = exponential_frame_test(lattice(1.0, 200.0), -pi, pi, 16);
    CHECK(std::abs(z.bounds.A - 2 * pi) < 0.05 * 2 * pi);
    CHECK(std::abs(z.bounds.B - 2 * pi) < 0.05 * 2 * pi);
    CHECK(z.verdict == FrameTestResult::Verdict::frame_likely);

    const auto two = exponential_frame_test(lattice(2.0, 200.0), -pi, pi, 16);
    CHECK(two.bounds.A * 10.0 <= two.A_coarse + 1e-12 * two.bounds.B);
    CHECK(two.verdict == FrameTestResult::Verdict::not_frame_likely);

    const auto half = exponential_frame_test(lattice(0.5, 200.0), -pi, pi, 16);
    CHECK(half.verdict == FrameTestResult::Verdict::frame_likely);
    // Union of two orthogonal bases of L^2(-pi, pi): tight with bound 4 pi.
    CHECK(half.bounds.B == doctest::Approx(4 * pi).epsilon(0.05));

    // Verdicts follow the lower density against |I| / 2pi away from the critical value.
    for (double step : {0.4, 0.6, 0.75, 1.35, 1.6, 2.5}) {
        const PointSet lam = lattice(step, 300.0);
        const double dens = beurling_densities(lam, {200.0}).d_minus;
        const auto res = exponential_frame_test(lam, -pi, pi, 16);
        INFO("step " << step);
        if (dens >= 1.25) CHECK(res.verdict == FrameTestResult::Verdict::frame_likely);
        if (dens <= 0.75) CHECK(res.verdict == FrameTestResult::Verdict::not_frame_likely);
    }
    // An interval of length 4 pi needs density 2.
    CHECK(exponential_frame_test(lattice(1.0, 200.0), 0.0, 4 * pi, 16).verdict == FrameTestResult::Verdict::not_frame_likely);
    CHECK(exponential_frame_test(lattice(0.4, 200.0), 0.0, 4 * pi, 16).verdict == FrameTestResult::Verdict::frame_likely);

    CHECK(code_of([] { exponential_frame_test(lattice(1.0, 5.0), -pi, pi, 16); }) == Errc::invalid_argument);
}

TEST_CASE("sample expansion") {
    const Grid t = make_grid(-pi, pi, 2001);
    std::vector<double> ints;
    for (int n = -50; n <= 50; ++n) ints.push_back(n);

    const Signal e3 = sample(t, [](double x) { return std::polar(1.0, 3.0 * x); });
    const auto ex = sample_expansion(fourier_kernel(), ints, e3);
    for (std::size_t j = 0; j < ints.size(); ++j) {
        const double expect = ints[j] == 3.0 ? 2 * pi : 0.0;
        CHECK(std::abs(ex.coefficients[j] - expect) < 1e-9);
    }
    CHECK(ex.within_bounds);

    std::mt19937_64 rng(9);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<cplx> c(21);
        for (auto& v : c) v = {nd(rng), nd(rng)};
        const Signal f = sample(t, [&](double x) {
            cplx s{0.0, 0.0};
            for (int k = -10; k <= 10; ++k) s += c[static_cast<std::size_t>(k + 10)] * std::polar(1.0, k * x);
            return s;
        });
        const auto r = sample_expansion(fourier_kernel(), ints, f);
        const double scale = r.B1 * r.norm_sq;
        CHECK((r.energy - r.A1 * r.norm_sq) / scale >= -1e-8);
        CHECK((r.B1 * r.norm_sq - r.energy) / scale >= -1e-8);
        CHECK(r.within_bounds);
    }

    std::vector<double> evens;
    for (int n = -50; n <= 50; n += 2) evens.push_back(n);
    const Signal e1 = sample(t, [](double x) { return std::polar(1.0, x); });
    CHECK_FALSE(sample_expansion(fourier_kernel(), evens, e1).within_bounds);

    kernel::Tabulated zero{make_grid(-60.0, 60.0, 3), make_grid(-pi, pi, 2), cmat::Zero(3, 2)};
    CHECK(code_of([&] { sample_expansion(KernelSpec(zero), ints, e1); }) == Errc::not_a_frame);
}

TEST_CASE("Fourier tails of compactly supported signals") {
    const Grid t = make_grid(-pi, pi, 4001);
    const Signal box = sample(t, [](double x) { return cplx{x >= 0.0 && x <= 1.0 ? 1.0 : 0.0, 0.0}; });
    const auto rb = fourier_tail_check(box);
    CHECK(rb.pass);
    CHECK(rb.support == doctest::Approx(1.0).epsilon(0.01));
    CHECK(rb.block_ends == std::vector<int>{64, 128, 256});

    const Signal tri = sample(t, [](double x) { return cplx{x >= 0.0 && x <= 0.5 ? 0.25 - std::abs(x - 0.25) : 0.0, 0.0}; });
    CHECK(fourier_tail_check(tri).pass);

    const Signal e3 = sample(t, [](double x) { return std::polar(1.0, 3.0 * x); });
    CHECK(code_of([&] { fourier_tail_check(e3); }) == Errc::full_support_input);
    CHECK(code_of([&] { fourier_tail_check(Signal(t)); }) == Errc::zero_signal);
}

TEST_CASE("zero densities of bandlimited mixtures") {
    BandlimitedMixture sinc{{Term{Term::Kind::sinc, {1.0, 0.0}, 1.0, 0.0}}};
    CHECK(std::abs(zero_density(sinc, 200.0) - 1.0 / pi) < 0.02);

    BandlimitedMixture e{{Term{Term::Kind::exponential, {1.0, 0.0}, 1.0, 0.0}}};
    CHECK(zero_density(e, 200.0) == 0.0);

    BandlimitedMixture sine{{Term{Term::Kind::exponential, {0.0, -0.5}, 1.0, 0.0},
                             Term{Term::Kind::exponential, {0.0, 0.5}, -1.0, 0.0}}};
    CHECK(std::abs(zero_density(sine, 200.0) - 1.0 / pi) < 0.02);

    // 1 + e^{it} vanishes at odd multiples of pi.
    BandlimitedMixture shifted{{Term{Term::Kind::exponential, {1.0, 0.0}, 0.0, 0.0},
                                Term{Term::Kind::exponential, {1.0, 0.0}, 1.0, 0.0}}};
    CHECK(std::abs(zero_density(shifted, 200.0) - 1.0 / (2 * pi)) < 0.02);

    // Real trigonometric sums with band W never exceed W / pi zeros per unit length.
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        BandlimitedMixture f;
        const double band = 0.5 + 2.5 * (u(rng) + 1.0) / 2.0;
        const int terms = 2 + trial % 5;
        for (int k = 0; k < terms; ++k) {
            const double lam = band * u(rng);
            const cplx amp = std::polar(1.0 + u(rng) * 0.5, pi * u(rng));
            f.terms.push_back({Term::Kind::exponential, amp, lam, 0.0});
            f.terms.push_back({Term::Kind::exponential, std::conj(amp), -lam, 0.0});
        }
        if (trial % 3 == 0) f.terms.push_back({Term::Kind::sinc, {u(rng), 0.0}, band, 3.0 * u(rng)});
        const double W = f.bandlimit();
        CHECK(W / pi - zero_density(f, 150.0) >= -0.02);
    }
    CHECK(code_of([&] { zero_density(sinc, 0.0); }) == Errc::invalid_range);
}
