// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qup-lab contributors

#include <doctest.h>

#include <cmath>
#include <random>

#include "qup/qup_suite.hpp"

using namespace qup;

namespace {

cplx re(double x) { return {x, 0.0}; }

double rel_err(const Signal& a, const Signal& b) {
    return norm(Signal::from_vector(a.grid(), a.to_vector() - b.to_vector())) / norm(b);
}

Signal gaussian(const Grid& g, double c = 0.0) {
    return sample(g, [c](double t) { return re(std::exp(-(t - c) * (t - c) / 2)); });
}

Signal box(const Grid& g) {
    return sample(g, [](double t) { return re(std::abs(t) <= 1.0 ? 1.0 : 0.0); });
}

Signal mexican_hat() {
    return sample(make_grid(-8.0, 8.0, 1601), [](double t) { return re((1 - t * t) * std::exp(-t * t / 2)); });
}

}  // namespace

TEST_CASE("heisenberg product examples") {
    const Grid w = make_grid(-10.0, 10.0, 2001);
    CHECK(heisenberg_product(gaussian(make_grid(-10.0, 10.0, 2001)), 0.0, 0.0, w) == doctest::Approx(0.25).epsilon(4e-3));
    CHECK(std::abs(heisenberg_product(gaussian(make_grid(-10.0, 10.0, 2001)), 0.0, 0.0, w) - 0.25) < 1e-3);
    CHECK(std::abs(heisenberg_product(gaussian(make_grid(-7.0, 13.0, 2001), 3.0), 3.0, 0.0, w) - 0.25) < 1e-3);
    const Grid tb = make_grid(-2.0, 2.0, 4001);
    CHECK(heisenberg_product(box(tb), 0.0, 0.0, make_grid(-500.0, 500.0, 20001)) > 10.0);
    // The box product keeps growing with the window.
    CHECK(heisenberg_product(box(tb), 0.0, 0.0, make_grid(-100.0, 100.0, 4001)) <
          heisenberg_product(box(tb), 0.0, 0.0, make_grid(-500.0, 500.0, 20001)));
    const Signal zero(tb);
    CHECK_THROWS_AS(heisenberg_product(zero, 0.0, 0.0, w), Error);
}

TEST_CASE("heisenberg bound over random smooth signals") {
    const Grid t = make_grid(-12.0, 12.0, 1201);
    const Grid w = make_grid(-20.0, 20.0, 2001);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 1e9;
    for (int trial = 0; trial < 50; ++trial) {
        // Sum of three modulated Gaussians with random centers, widths and chirps.
        double c[3], s[3], m[3], a[3], ph[3];
        for (int k = 0; k < 3; ++k) {
            c[k] = 3 * u(rng);
            s[k] = 0.6 + 0.5 * (u(rng) + 1);
            m[k] = 4 * u(rng);
            a[k] = u(rng);
            ph[k] = pi * u(rng);
        }
        const Signal f = sample(t, [&](double x) {
            cplx v{0.0, 0.0};
            for (int k = 0; k < 3; ++k) {
                const double y = (x - c[k]) / s[k];
                v += a[k] * std::exp(-0.5 * y * y) * std::polar(1.0, m[k] * x + ph[k]);
            }
            return v;
        });
        const auto [alpha, beta] = heisenberg_centers(f, w);
        worst = std::min(worst, heisenberg_product(f, alpha, beta, w));
    }
    CHECK(worst >= 0.25 - 5e-3);
}

TEST_CASE("wigner distribution") {
    const Grid t = make_grid(-8.0, 8.0, 257);
    const double d = t.spacing();
    const Grid om = make_grid(-pi / (2 * d), pi / (2 * d), 513);
    const auto wf = wigner(gaussian(t), om);
    double mn = 1e300, mx = 0.0, mi = 0.0;
    for (Eigen::Index j = 0; j < wf.values.rows(); ++j)
        for (Eigen::Index k = 0; k < wf.values.cols(); ++k) {
            mn = std::min(mn, wf.values(j, k).real());
            mx = std::max(mx, std::abs(wf.values(j, k)));
            mi = std::max(mi, std::abs(wf.values(j, k).imag()));
        }
    CHECK(mn > -1e-8 * mx);
    CHECK(mi < 1e-9 * mx);
    // Closed form 2 sqrt(pi) exp(-t^2 - omega^2) for the unit Gaussian.
    for (std::size_t k : {128u, 140u, 100u})
        for (std::size_t j : {256u, 270u, 240u}) {
            const double want = 2 * std::sqrt(pi) * std::exp(-t.node(k) * t.node(k) - om.node(j) * om.node(j));
            CHECK(std::abs(wf.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)).real() - want) < 1e-8);
        }
    // Marginal over omega.
    const Signal g = gaussian(t);
    for (std::size_t k = 0; k < t.n; k += 8) {
        double s = 0.0;
        for (std::size_t j = 0; j < om.n; ++j) s += om.weight(j) * wf.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)).real();
        const double want = 2 * pi * std::norm(g[k]);
        CHECK(std::abs(s - want) <= 0.02 * want + 1e-12);
    }

    const Grid tb = make_grid(-2.0, 2.0, 201);
    const auto wb = wigner(box(tb), make_grid(-40.0, 40.0, 161));
    for (std::size_t k = 0; k < tb.n; ++k) {
        if (std::abs(tb.node(k)) <= 1.0 + tb.spacing()) continue;
        CHECK(wb.values.col(static_cast<Eigen::Index>(k)).cwiseAbs().maxCoeff() == 0.0);
    }
    CHECK_THROWS_AS(wigner(gaussian(make_grid(-1.0, 3.0, 41)), om), Error);
}

TEST_CASE("gabor transform round trip and energy") {
    const Grid t = make_grid(-8.0, 8.0, 161);
    const Signal f = gaussian(t);
    const Signal win = sample(make_grid(-4.0, 4.0, 81), [](double x) { return re(std::exp(-x * x)); });
    const auto gf = gabor_transform(f, win, make_grid(-12.0, 12.0, 121), t);
    CHECK(rel_err(gabor_inverse(gf, win), f) < 1e-2);
    double e = 0.0;
    for (Eigen::Index j = 0; j < gf.values.rows(); ++j)
        for (Eigen::Index k = 0; k < gf.values.cols(); ++k)
            e += gf.omega_grid.weight(static_cast<std::size_t>(j)) * t.weight(static_cast<std::size_t>(k)) * std::norm(gf.values(j, k));
    CHECK(std::abs(e / (2 * pi) / (norm(f) * norm(f)) - 1.0) < 0.02);

    // Coarser omega coverage is worse.
    const auto coarse = gabor_transform(f, win, make_grid(-3.0, 3.0, 31), t);
    const auto finer = gabor_transform(f, win, make_grid(-5.0, 5.0, 51), t);
    const double e1 = rel_err(gabor_inverse(coarse, win), f);
    const double e2 = rel_err(gabor_inverse(finer, win), f);
    CHECK(e2 < e1);

    const Signal zero(t);
    const auto gz = gabor_transform(zero, win, make_grid(-2.0, 2.0, 11), t);
    CHECK(gz.values.cwiseAbs().maxCoeff() == 0.0);
    const Signal zwin(make_grid(-1.0, 1.0, 11));
    try {
        gabor_transform(f, zwin, make_grid(-2.0, 2.0, 11), t);
        FAIL("expected zero-window");
    } catch (const Error& err) {
        CHECK(err.code() == Errc::zero_window);
    }
}

TEST_CASE("wavelet admissibility and scaling modulus") {
    const Signal mh = mexican_hat();
    // |psi^|^2 / omega = 2 pi omega^3 exp(-omega^2), integral pi.
    CHECK(admissibility_constant(mh) == doctest::Approx(pi).epsilon(1e-6));
    CHECK(scaling_modulus(mh, 0.0) * scaling_modulus(mh, 0.0) == doctest::Approx(pi).epsilon(1e-6));
    for (double w : {0.5, 1.0, 2.0}) {
        const double want = std::sqrt(pi * (1 + w * w) * std::exp(-w * w));
        CHECK(scaling_modulus(mh, w) == doctest::Approx(want).epsilon(1e-6));
    }
    const Signal constant = sample(make_grid(-4.0, 4.0, 81), [](double) { return re(1.0); });
    try {
        admissibility_constant(constant);
        FAIL("expected inadmissible-mother");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::inadmissible_mother);
    }
    CHECK_THROWS_AS(cwt(constant, constant, log_scale_grid(0.5, 2.0, 4), constant.grid()), Error);
}

TEST_CASE("wavelet reconstructions") {
    const Grid t = make_grid(-16.0, 16.0, 1024);
    const Signal f = sample(t, [](double x) { return re(std::exp(-x * x / 2) * std::cos(4 * x)); });
    const Signal mh = mexican_hat();
    const Grid sc = log_scale_grid(0.05, 20.0, 64);
    const auto wf = cwt(f, mh, sc, t);
    const Signal full = cwt_inverse(wf, mh);
    const double err = rel_err(full, f);
    CHECK(err < 0.02);

    // Fine scales up to a mid-range s0 plus the low-pass term.
    std::size_t jm = 0;
    while (std::exp(sc.node(jm + 1)) <= 1.0) ++jm;
    const double s0 = std::exp(sc.node(jm));
    const PlaneField fine{make_grid(sc.a, sc.node(jm), static_cast<long long>(jm + 1)), t,
                          wf.values.topRows(static_cast<Eigen::Index>(jm + 1)), true};
    const Signal two = two_part_reconstruct(fine, low_pass(f, mh, s0, t), mh, s0);
    CHECK(rel_err(two, full) < 0.02);
    CHECK(rel_err(two, f) < 0.02);

    // Fewer scale nodes over a narrower band reconstruct worse.
    const Grid rough = log_scale_grid(0.1, 5.0, 12);
    const double err_rough = rel_err(cwt_inverse(cwt(f, mh, rough, t), mh), f);
    CHECK(err < err_rough);
}

TEST_CASE("qup check: Fourier examples") {
    const Signal bx = box(make_grid(-2.0, 2.0, 4001));
    QupCheckParams p;
    p.window = 200.0;
    p.doublings = 3;
    const auto r = qup_check(bx, p, 1e-3);
    CHECK(r.window_measures.size() == 4);
    CHECK(r.window_measures[0] > 100.0);
    CHECK(r.window_measures[1] > 1.05 * r.window_measures[0]);
    CHECK(r.verdict == QUPReport::Verdict::consistent);
    CHECK(r.product == doctest::Approx(r.measure_time * r.measure_transform));
    CHECK(r.measure_time == doctest::Approx(2.0).epsilon(1e-2));

    const Signal g = gaussian(make_grid(-10.0, 10.0, 2001));
    p.window = 20.0;
    const auto rg = qup_check(g, p, 1e-3);
    const double radius = std::sqrt(2 * std::log(1000.0));
    CHECK(rg.measure_time == doctest::Approx(2 * radius).epsilon(0.01));
    CHECK(rg.measure_transform == doctest::Approx(2 * radius).epsilon(0.01));
    CHECK(rg.product == doctest::Approx(55.2).epsilon(0.05));
    CHECK(rg.verdict == QUPReport::Verdict::consistent);

    const Signal zero(make_grid(-1.0, 1.0, 11));
    try {
        qup_check(zero, p, 1e-3);
        FAIL("expected zero-signal");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::zero_signal);
    }
}

TEST_CASE("qup check: a kernel without a complete infinity") {
    const Grid t = make_grid(-10.0, 10.0, 2001);
    QupCheckParams p;
    p.transform = "kernel";
    p.kernel = hermite_piecewise_kernel(6, t);
    p.window = 8.0;
    p.step = 0.01;
    const auto r = qup_check(hermite_function(3, t), p, 1e-3);
    CHECK(r.measure_transform == doctest::Approx(1.0).epsilon(0.02));
    CHECK(r.measure_time > 0.0);
    CHECK(r.verdict == QUPReport::Verdict::violation);
}

TEST_CASE("qup check: two-dimensional transforms of a box") {
    const Grid t = make_grid(-2.0, 2.0, 201);
    const Signal bx = box(t);
    QupCheckParams p;
    p.window = 4.0;
    p.doublings = 3;
    p.transform = "wigner";
    CHECK(qup_check(bx, p, 1e-3).verdict == QUPReport::Verdict::consistent);
    p.transform = "gabor";
    p.gabor_window = sample(make_grid(-1.0, 1.0, 51), [](double x) { return re(std::exp(-4 * x * x)); });
    CHECK(qup_check(bx, p, 1e-3).verdict == QUPReport::Verdict::consistent);
    p.transform = "cwt";
    p.window = 2.0;
    p.mother = mexican_hat();
    CHECK(qup_check(bx, p, 1e-3).verdict == QUPReport::Verdict::consistent);
    p.transform = "laplace";
    CHECK_THROWS_AS(qup_check(bx, p, 1e-3), Error);
}

TEST_CASE("fourier-side support grows for time-truncated signals") {
    const Grid t = make_grid(-2.0, 2.0, 2001);
    std::vector<Signal> fs{box(t), sample(t, [](double x) { return re(std::max(0.0, 1 - std::abs(x))); }),
                           sample(t, [](double x) { return re(std::abs(x) < 1.5 ? std::cos(3 * x) : 0.0); })};
    QupCheckParams p;
    p.window = 25.0;
    p.doublings = 3;
    for (const auto& f : fs) {
        const auto r = qup_check(f, p, 1e-3);
        for (std::size_t k = 1; k < r.window_measures.size(); ++k) CHECK(r.window_measures[k] >= r.window_measures[k - 1]);
    }
}

TEST_CASE("rank-one violation demos") {
    const auto a = qup_violation_demo(0.0, 1.0, DemoWitness::gaussian_triangle);
    CHECK(a.measure_time <= 2.0);
    CHECK(a.measure_transform <= 2.0);
    CHECK(a.measure_transform > 0.9);
    CHECK_FALSE(a.degenerate_witness);
    CHECK(a.verdict == QUPReport::Verdict::violation);

    const auto o = qup_violation_demo(0.0, 1.0, DemoWitness::orthogonal);
    CHECK(o.degenerate_witness);
    CHECK(o.measure_transform == 0.0);

    const auto c = qup_violation_demo(0.0, 1.0, DemoWitness::cosine_gap);
    CHECK_FALSE(c.degenerate_witness);
    CHECK(c.verdict == QUPReport::Verdict::violation);
    CHECK(c.measure_time <= 2.0);
    CHECK_THROWS_AS(qup_violation_demo(1.0, 1.0), Error);
}
