// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qup-lab contributors

#include "qup/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "qup/complete_points.hpp"
#include "qup/linalg.hpp"
#include "qup/random.hpp"

namespace qup {

std::string to_string(PerturbationVerdict::Verdict v) {
    return v == PerturbationVerdict::Verdict::preserved ? "preserved" : "not-guaranteed";
}

namespace {

void check_pair(const FunctionFamily& a, const FunctionFamily& b) {
    if (a.size() != b.size()) throw Error(Errc::length_mismatch, "families differ in length");
    if (a.size() == 0) throw Error(Errc::invalid_argument, "empty family");
    if (!(a.grid() == b.grid())) throw Error(Errc::grid_mismatch, "families live on different grids");
}

cmat weighted_matrix(const FunctionFamily& f) { return sqrt_weights(f.grid()).asDiagonal() * f.matrix(); }

// sup_c ||D c|| / ||P c||; infinite when D does not vanish on the null space of P.
double generalized_sup(const cmat& D, const cmat& P) {
    Eigen::CompleteOrthogonalDecomposition<cmat> cod(P);
    const double top = singular_values(P)(0);
    cod.setThreshold(1e-12);
    if (cod.rank() < P.cols()) {
        Eigen::FullPivLU<cmat> lu(P);
        lu.setThreshold(1e-12 * std::max(top, 1e-300) / std::max<double>(1.0, P.cols()));
        const cmat null = lu.kernel();
        if (null.cols() > 0 && (D * null).norm() > 1e-10 * std::max(D.norm(), 1e-300)) {
            return std::numeric_limits<double>::infinity();
        }
    }
    const cmat m = D * cod.pseudoInverse();
    return singular_values(m)(0);
}

}  // namespace

PerturbationVerdict paley_wiener_test(const FunctionFamily& base, const FunctionFamily& perturbed, int trials,
                                      std::uint64_t seed) {
    check_pair(base, perturbed);
    if (trials < 1) throw Error(Errc::invalid_argument, "trials must be >= 1");
    const cmat P = weighted_matrix(base);
    const cmat D = P - weighted_matrix(perturbed);
    const auto n = P.cols();

    PerturbationVerdict v;
    for (int k = 0; k < trials; ++k) {
        Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(k)));
        cvec c(n);
        for (Eigen::Index i = 0; i < n; ++i) c(i) = rng.complex_normal();
        c /= c.norm();
        const double den = (P * c).norm();
        const double num = (D * c).norm();
        const double ratio = den > 0.0 ? num / den : (num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        v.lambda_estimate = std::max(v.lambda_estimate, ratio);
    }
    if (n <= 256) v.lambda_exact = generalized_sup(D, P);
    // The random maximum only bounds the supremum from below.
    v.criterion = std::max(v.lambda_estimate, v.lambda_exact.value_or(0.0));
    v.verdict = v.criterion < 1.0 ? PerturbationVerdict::Verdict::preserved : PerturbationVerdict::Verdict::not_guaranteed;
    return v;
}

ChristensenBounds christensen_bounds(double A, double B, double lambda, double d) {
    if (!(A > 0.0) || !(B >= A) || !(lambda >= 0.0) || !(d >= 0.0)) {
        throw Error(Errc::invalid_argument, "need A > 0, B >= A, lambda >= 0, d >= 0");
    }
    ChristensenBounds out;
    out.criterion = lambda + d / std::sqrt(A);
    if (!(out.criterion < 1.0)) throw Error(Errc::criterion_failed, "lambda + d/sqrt(A) >= 1");
    out.new_A = A * std::pow(1.0 - out.criterion, 2);
    out.new_B = B * std::pow(1.0 + lambda + d / std::sqrt(B), 2);
    return out;
}

PerturbationVerdict frame_perturb_test(const FunctionFamily& base, const FunctionFamily& perturbed, double A,
                                       double B) {
    check_pair(base, perturbed);
    if (!(A > 0.0) || !(B >= A)) throw Error(Errc::invalid_argument, "need A > 0 and B >= A");
    const cmat D = weighted_matrix(base) - weighted_matrix(perturbed);
    const double s = D.size() == 0 ? 0.0 : singular_values(D)(0);
    PerturbationVerdict v;
    v.lambda_estimate = s * s;
    v.lambda_exact = v.lambda_estimate;
    v.criterion = v.lambda_estimate / A;
    // Within 1e-9 of A counts as the boundary case lambda = A.
    if (v.lambda_estimate < A * (1.0 - 1e-9)) {
        v.verdict = PerturbationVerdict::Verdict::preserved;
        v.new_A = A * std::pow(1.0 - std::sqrt(v.lambda_estimate / A), 2);
        v.new_B = B * std::pow(1.0 + std::sqrt(v.lambda_estimate / B), 2);
        v.new_B_minus_sign = B * std::pow(1.0 - std::sqrt(v.lambda_estimate / B), 2);
    } else {
        v.verdict = PerturbationVerdict::Verdict::not_guaranteed;
    }
    return v;
}

namespace {

std::vector<double> neighborhood_nodes(const PointSet& set, double r, int m, const KernelSpec& kernel) {
    std::vector<double> out;
    const auto dom = kernel.omega_domain();
    for (double c : set.points) {
        for (int k = -m; k <= m; ++k) {
            const double x = c + r * static_cast<double>(k) / m;
            if (dom && (x < dom->first || x > dom->second)) continue;
            out.push_back(x);
        }
    }
    return out;
}

}  // namespace

AcfpsPerturbation acfps_perturb_test(const KernelSpec& kernel, const Grid& t_grid, const PointSet& omega_set,
                                     const PointSet& omega_set_prime, const std::vector<double>& radii,
                                     const AcfpsOptions& opts) {
    if (radii.empty()) throw Error(Errc::schedule_empty, "radius schedule is empty");
    if (omega_set.points.empty() || omega_set_prime.points.empty()) {
        throw Error(Errc::invalid_argument, "point sets must be non-empty");
    }
    const KernelCurve curve(kernel, t_grid, default_span_grid(kernel, t_grid));
    const std::size_t N = curve.span_dim();
    AcfpsPerturbation out;
    out.dimension = N;

    auto coords_of = [&](const std::vector<double>& nodes) {
        cmat c(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(nodes.size()));
        for (std::size_t j = 0; j < nodes.size(); ++j) c.col(static_cast<Eigen::Index>(j)) = curve.coords(nodes[j]);
        return c;
    };

    out.preserved = true;
    for (double r : radii) {
        if (!(r > 0.0)) throw Error(Errc::invalid_argument, "radii must be positive");
        const cmat src = coords_of(neighborhood_nodes(omega_set, r, opts.samples_per_side, kernel));
        const rvec sv = singular_values(src);
        if (src.cols() < static_cast<Eigen::Index>(N) || sv.size() < static_cast<Eigen::Index>(N) ||
            !(sv(static_cast<Eigen::Index>(N) - 1) * sv(static_cast<Eigen::Index>(N) - 1) >
              opts.rank_floor * sv(0) * sv(0))) {
            throw Error(Errc::source_not_acfps, "source neighborhoods do not reach the full span");
        }
        // Column-pivoted QR picks N well-conditioned source functions.
        Eigen::ColPivHouseholderQR<cmat> qr(src);
        const auto perm = qr.colsPermutation().indices();
        cmat phi(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
        for (std::size_t j = 0; j < N; ++j) phi.col(static_cast<Eigen::Index>(j)) = src.col(perm(static_cast<Eigen::Index>(j)));

        const cmat cand = coords_of(neighborhood_nodes(omega_set_prime, r, opts.samples_per_side, kernel));
        cmat psi(phi.rows(), phi.cols());
        AcfpsRadiusCheck chk;
        chk.radius = r;
        for (Eigen::Index j = 0; j < phi.cols(); ++j) {
            Eigen::Index best = 0;
            double dist = std::numeric_limits<double>::infinity();
            for (Eigen::Index k = 0; k < cand.cols(); ++k) {
                const double d = (cand.col(k) - phi.col(j)).norm();
                if (d < dist) {
                    dist = d;
                    best = k;
                }
            }
            psi.col(j) = cand.col(best);
            chk.max_distance = std::max(chk.max_distance, dist);
        }
        const rvec ps = singular_values(phi);
        chk.epsilon = ps(ps.size() - 1) / std::sqrt(static_cast<double>(N));
        chk.lambda = generalized_sup(phi - psi, phi);
        chk.ratio_ok = chk.lambda < 1.0;
        // Frobenius norm of the difference stays below sigma_min of the source basis.
        chk.elementwise_ok = chk.max_distance < chk.epsilon;
        if (!chk.ratio_ok && !chk.elementwise_ok) out.preserved = false;
        out.checks.push_back(chk);
    }
    return out;
}

}  // namespace qup
