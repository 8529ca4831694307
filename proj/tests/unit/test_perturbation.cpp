// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qup-lab contributors

#include <doctest.h>

#include <cmath>
#include <optional>
#include <random>

#include <Eigen/Eigenvalues>

#include "qup/complete_points.hpp"
#include "qup/perturbation.hpp"

using namespace qup;

namespace {

std::optional<Errc> code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

FunctionFamily exponentials(const Grid& t, double shift) {
    std::vector<Signal> m;
    for (int n = -16; n <= 16; ++n) m.push_back(sample(t, [&](double x) { return std::polar(1.0, (n + shift) * x); }));
    return make_family(std::move(m));
}

// sup ||D c|| / ||P c|| from the generalized Hermitian eigenproblem of the two Gram matrices.
double gram_oracle(const FunctionFamily& base, const FunctionFamily& pert) {
    const rvec w = base.grid().weights();
    const cmat P = base.matrix(), D = P - pert.matrix();
    const cmat gp = P.adjoint() * w.asDiagonal() * P;
    const cmat gd = D.adjoint() * w.asDiagonal() * D;
    Eigen::GeneralizedSelfAdjointEigenSolver<cmat> es(gd, gp);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

kernel::SeparableRank two_term(const Grid& t, std::function<cplx(double)> a1, std::function<cplx(double)> a2) {
    const auto basis = orthonormal_polynomials(t, 2);
    kernel::SeparableRank sep;
    sep.terms.push_back({1.0, Profile(std::move(a1), "a1"), basis[0]});
    sep.terms.push_back({1.0, Profile(std::move(a2), "a2"), basis[1]});
    return sep;
}

}  // namespace

TEST_CASE("Paley-Wiener test on shifted exponentials") {
    const Grid t = make_grid(-pi, pi, 1025);
    const auto base = exponentials(t, 0.0);

    const auto same = paley_wiener_test(base, base, 50, 1);
    CHECK(same.lambda_estimate == 0.0);
    CHECK(*same.lambda_exact == doctest::Approx(0.0));
    CHECK(same.verdict == PerturbationVerdict::Verdict::preserved);

    // sum c (phi - psi) = (1 - e^{i delta t}) sum c phi pointwise, so the ratio never
    // exceeds max |1 - e^{i delta t}| = 2 sin(delta pi / 2).
    const auto small = paley_wiener_test(base, exponentials(t, 0.1), 200, 7);
    CHECK(small.verdict == PerturbationVerdict::Verdict::preserved);
    CHECK(*small.lambda_exact < 1.0);
    CHECK(*small.lambda_exact <= 2 * std::sin(0.05 * pi) + 1e-9);
    CHECK(*small.lambda_exact == doctest::Approx(gram_oracle(base, exponentials(t, 0.1))).epsilon(1e-6));
    CHECK(small.lambda_estimate <= *small.lambda_exact + 1e-12);

    const auto big = paley_wiener_test(base, exponentials(t, 0.6), 200, 7);
    CHECK(big.verdict == PerturbationVerdict::Verdict::not_guaranteed);
    CHECK(big.lambda_estimate >= 1.0);
    CHECK(*big.lambda_exact >= 1.0);
    CHECK(*big.lambda_exact <= 2 * std::sin(0.3 * pi) + 1e-9);

    CHECK(code_of([&] {
              auto shorter = base;
              shorter.members.pop_back();
              paley_wiener_test(base, shorter, 5, 1);
          }) == Errc::length_mismatch);
}

TEST_CASE("Paley-Wiener estimates: reproducibility and direction") {
    const Grid t = make_grid(-1.0, 1.0, 201);
    const auto base = make_family(orthonormal_polynomials(t, 6));
    std::mt19937_64 gen(3);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Signal> moved;
        for (const auto& s : base.members) {
            const double a = 0.05 * nd(gen), b = 0.05 * nd(gen);
            moved.push_back(sample(t, [&](double x) { return s.at(x) * (1.0 + a * x) + b * x * x; }));
        }
        const auto pert = make_family(std::move(moved));
        const auto fwd = paley_wiener_test(base, pert, 64, 99);
        const auto again = paley_wiener_test(base, pert, 64, 99);
        CHECK(fwd.lambda_estimate == again.lambda_estimate);
        CHECK(*fwd.lambda_exact == *again.lambda_exact);

        const auto back = paley_wiener_test(pert, base, 64, 99);
        CHECK(fwd.lambda_estimate != back.lambda_estimate);
        if (fwd.criterion < 0.5) CHECK(back.verdict == fwd.verdict);
    }
}

TEST_CASE("Christensen bounds") {
    const auto c = christensen_bounds(1.0, 2.0, 0.1, 0.1);
    CHECK(c.criterion == doctest::Approx(0.2));
    CHECK(c.new_A == doctest::Approx(0.64));
    CHECK(c.new_B == doctest::Approx(2.0 * std::pow(1.1 + 0.1 / std::sqrt(2.0), 2)));
    CHECK(c.new_B == doctest::Approx(2.7411).epsilon(1e-4));

    const auto id = christensen_bounds(1.5, 3.0, 0.0, 0.0);
    CHECK(id.new_A == 1.5);
    CHECK(id.new_B == 3.0);

    CHECK(code_of([] { christensen_bounds(1.0, 2.0, 0.9, 0.2); }) == Errc::criterion_failed);
    CHECK(code_of([] { christensen_bounds(1.0, 0.5, 0.1, 0.1); }) == Errc::invalid_argument);

    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double A = 0.1 + 5 * u(gen), B = A * (1 + 3 * u(gen));
        const double lam = 0.5 * u(gen), d = 0.45 * std::sqrt(A) * u(gen);
        const auto r = christensen_bounds(A, B, lam, d);
        CHECK(r.new_A <= A);
        CHECK(B <= r.new_B);
    }
}

TEST_CASE("frame perturbation by the difference operator") {
    const Grid t = make_grid(-1.0, 1.0, 201);
    const auto onb = orthonormal_polynomials(t, 6);
    const auto base = make_family(onb);

    const auto same = frame_perturb_test(base, base, 1.0, 1.0);
    CHECK(same.lambda_estimate == doctest::Approx(0.0));
    CHECK(*same.new_A == doctest::Approx(1.0));
    CHECK(*same.new_B == doctest::Approx(1.0));

    auto shrunk = onb;
    shrunk[2] = Signal::from_vector(t, 0.9 * onb[2].to_vector());
    const auto s = frame_perturb_test(base, make_family(shrunk), 1.0, 1.0);
    CHECK(s.lambda_estimate == doctest::Approx(0.01).epsilon(1e-9));
    CHECK(s.verdict == PerturbationVerdict::Verdict::preserved);
    CHECK(*s.new_A == doctest::Approx(0.81).epsilon(1e-9));
    CHECK(*s.new_B == doctest::Approx(1.21).epsilon(1e-9));
    CHECK(*s.new_B_minus_sign == doctest::Approx(0.81).epsilon(1e-9));

    auto dropped = onb;
    dropped[4] = Signal(t);
    const auto z = frame_perturb_test(base, make_family(dropped), 1.0, 1.0);
    CHECK(z.lambda_estimate == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(z.verdict == PerturbationVerdict::Verdict::not_guaranteed);
    CHECK_FALSE(z.new_A.has_value());
}

TEST_CASE("ACFPS perturbation for a two-dimensional kernel") {
    const Grid t = make_grid(-1.0, 1.0, 101);
    const KernelSpec smooth(two_term(t, [](double w) { return cplx{std::cos(w), 0.0}; },
                                     [](double w) { return cplx{std::sin(w), 0.0}; }));
    const PointSet omega = make_point_set({0.0, 1.0}, 2.0);
    const std::vector<double> radii{0.5, 0.1, 0.01};

    const auto same = acfps_perturb_test(smooth, t, omega, omega, radii);
    CHECK(same.preserved);
    CHECK(same.dimension == 2);
    for (const auto& c : same.checks) CHECK(c.lambda == doctest::Approx(0.0));

    const auto moved = acfps_perturb_test(smooth, t, omega, make_point_set({0.01, 1.01}, 2.0), radii);
    CHECK(moved.preserved);
    // K is 1-Lipschitz in omega in this basis, so matched functions sit within 0.01.
    for (const auto& c : moved.checks) CHECK(c.max_distance <= 0.01 + 1e-12);

    // Beyond omega = 3 the kernel freezes at one function and the span collapses.
    const KernelSpec frozen(two_term(t, [](double w) { return cplx{w < 3.0 ? std::cos(w) : 1.0, 0.0}; },
                                     [](double w) { return cplx{w < 3.0 ? std::sin(w) : 0.0, 0.0}; }));
    const auto flat = acfps_perturb_test(frozen, t, omega, make_point_set({5.0, 6.0}, 7.0), radii);
    CHECK_FALSE(flat.preserved);
    for (const auto& c : flat.checks) CHECK(c.lambda >= 1.0);

    CHECK(code_of([&] { acfps_perturb_test(frozen, t, make_point_set({5.0}, 6.0), omega, radii); }) ==
          Errc::source_not_acfps);
}
