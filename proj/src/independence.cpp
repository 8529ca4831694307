// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qup-lab contributors

#include "qup/independence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qup/linalg.hpp"

namespace qup {

namespace {

constexpr double kRankRel = 1e-10;

// Hadamard bound: product of row norms.
double hadamard_scale(const cmat& m) {
    double s = 1.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) s *= m.row(i).norm();
    return s;
}

cmat wronskian_matrix(const FunctionFamily& family, double t0) {
    const auto n = static_cast<int>(family.size());
    cmat w(n, n);
    if (family.derivative) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) w(i, j) = family.derivative(static_cast<std::size_t>(j), i, t0);
        return w;
    }
    const Grid& g = family.grid();
    if (!g.contains(t0)) throw Error(Errc::derivative_unavailable, "t0 outside the family grid");
    const auto i0 = static_cast<long long>(g.nearest(t0));
    for (int d = 0; d < n; ++d) {
        if (d == 0) {
            for (int j = 0; j < n; ++j) w(0, j) = family.members[static_cast<std::size_t>(j)].at(t0);
            continue;
        }
        // Fourth-order accurate stencil on the nodes around t0.
        const long long p = (d + 1) / 2 + 1;
        if (i0 - p < 0 || i0 + p >= static_cast<long long>(g.n)) {
            throw Error(Errc::derivative_unavailable,
                        "no finite-difference margin for order " + std::to_string(d) + " at t0=" + std::to_string(t0));
        }
        std::vector<double> nodes;
        for (long long k = i0 - p; k <= i0 + p; ++k) nodes.push_back(g.node(static_cast<std::size_t>(k)));
        const rmat c = fornberg_weights(t0, nodes, d);
        for (int j = 0; j < n; ++j) {
            cplx acc{0.0, 0.0};
            for (std::size_t q = 0; q < nodes.size(); ++q) {
                acc += c(d, static_cast<Eigen::Index>(q)) *
                       family.members[static_cast<std::size_t>(j)][static_cast<std::size_t>(i0 - p) + q];
            }
            w(d, j) = acc;
        }
    }
    return w;
}

cmat general_wronskian_matrix(const FunctionFamily& family, const Mollifier& h, double t0) {
    const auto n = static_cast<int>(family.size());
    const Grid& g = family.grid();
    cmat w = cmat::Zero(n, n);
    for (std::size_t k = 0; k < g.n; ++k) {
        const double x = t0 - g.node(k);
        if (std::abs(x) > h.support()) continue;
        const double wk = g.weight(k);
        for (int i = 0; i < n; ++i) {
            const double hv = h.eval(i, x);
            for (int j = 0; j < n; ++j) w(i, j) += wk * family.members[static_cast<std::size_t>(j)][k] * hv;
        }
    }
    return w;
}

}  // namespace

cmat FunctionFamily::matrix() const {
    cmat m(static_cast<Eigen::Index>(grid().n), static_cast<Eigen::Index>(size()));
    for (std::size_t j = 0; j < size(); ++j) m.col(static_cast<Eigen::Index>(j)) = members[j].to_vector();
    return m;
}

FunctionFamily make_family(std::vector<Signal> members, DerivativeSupplier derivative) {
    if (members.empty()) throw Error(Errc::invalid_argument, "a family needs at least one member");
    for (const auto& m : members) require_same_grid(members.front().grid(), m.grid());
    return FunctionFamily{std::move(members), std::move(derivative)};
}

double Mollifier::eval(int k, double t) const {
    if (std::abs(t) > support()) return 0.0;
    // Renormalized so the truncated bump integrates to one.
    static const double trunc = std::erf(6.0 / std::sqrt(2.0));
    const double x = t / sigma;
    const double base = std::exp(-0.5 * x * x) / (sigma * std::sqrt(2.0 * pi) * trunc);
    // Probabilists' Hermite polynomials: d^k/dx^k e^{-x^2/2} = (-1)^k He_k(x) e^{-x^2/2}.
    double he_prev = 1.0;
    double he = x;
    if (k == 0) he = 1.0;
    for (int m = 1; m < k; ++m) {
        const double next = x * he - m * he_prev;
        he_prev = he;
        he = next;
    }
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return sign * he * base / std::pow(sigma, k);
}

Mollifier make_mollifier(double sigma) {
    if (!(sigma > 0.0)) throw Error(Errc::invalid_argument, "mollifier width must be positive");
    return Mollifier{sigma};
}

cplx wronskian_det(const FunctionFamily& family, double t0) { return wronskian_matrix(family, t0).determinant(); }

cplx general_wronskian_det(const FunctionFamily& family, const Mollifier& h, double t0) {
    return general_wronskian_matrix(family, h, t0).determinant();
}

WronskianScan wronskian_scan(const FunctionFamily& family, const Mollifier& h, const std::vector<double>& candidates,
                             double tol) {
    WronskianScan scan;
    for (double t0 : candidates) {
        const cmat w = general_wronskian_matrix(family, h, t0);
        const double scale = hadamard_scale(w);
        const double ratio = scale > 0.0 ? std::abs(w.determinant()) / scale : 0.0;
        if (ratio > scan.best_ratio) {
            scan.best_ratio = ratio;
            scan.best_t0 = t0;
        }
    }
    if (scan.best_ratio > tol) {
        scan.verdict = IndependenceVerdict::independent;
    } else {
        scan.verdict = family.derivative ? IndependenceVerdict::dependent : IndependenceVerdict::inconclusive;
    }
    return scan;
}

SamplingMatrix sampling_matrix(const FunctionFamily& family, const std::vector<double>& points) {
    if (points.size() != family.size()) {
        throw Error(Errc::length_mismatch, "sampling needs one point per family member");
    }
    SamplingMatrix s{points, cmat(family.size(), points.size())};
    for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = 0; j < points.size(); ++j)
            s.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = family.members[i].at(points[j]);
    return s;
}

std::vector<double> find_full_rank_samples(const FunctionFamily& family) {
    const Grid& g = family.grid();
    const std::size_t n = family.size();
    const std::size_t stride = std::max<std::size_t>(1, g.n / 2048);
    std::vector<std::size_t> candidates;
    for (std::size_t k = 0; k < g.n; k += stride) candidates.push_back(k);

    std::vector<std::size_t> chosen;
    cmat current(static_cast<Eigen::Index>(n), 0);
    for (std::size_t step = 0; step < n; ++step) {
        double best = -1.0;
        double best_rel = 0.0;
        std::size_t best_idx = 0;
        cmat trial(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(step + 1));
        trial.leftCols(static_cast<Eigen::Index>(step)) = current;
        for (std::size_t c : candidates) {
            if (std::find(chosen.begin(), chosen.end(), c) != chosen.end()) continue;
            for (std::size_t i = 0; i < n; ++i) trial(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(step)) = family.members[i][c];
            const rvec s = singular_values(trial);
            const double smin = s(static_cast<Eigen::Index>(step));
            if (smin > best) {
                best = smin;
                best_rel = s(0) > 0.0 ? smin / s(0) : 0.0;
                best_idx = c;
            }
        }
        if (best_rel <= kRankRel) {
            throw Error(Errc::rank_deficient_family,
                        "no candidate extends the sampling rank beyond " + std::to_string(step));
        }
        chosen.push_back(best_idx);
        current = trial;
        for (std::size_t i = 0; i < n; ++i) current(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(step)) = family.members[i][best_idx];
    }
    const rvec s = singular_values(current);
    if (s(s.size() - 1) / s(0) <= 1e-8) {
        throw Error(Errc::rank_deficient_family, "sampling matrix is numerically singular");
    }
    std::vector<double> points;
    for (std::size_t c : chosen) points.push_back(g.node(c));
    return points;
}

cmat gram_matrix(const FunctionFamily& family) {
    const cmat m = family.matrix();
    const rvec w = family.grid().weights();
    return m.adjoint() * w.cast<cplx>().asDiagonal() * m;
}

Interpolants dfs_rank_and_interpolants(const FunctionFamily& family) {
    Interpolants out;
    out.m = numerical_rank(gram_matrix(family), kRankRel);
    if (out.m == 0) return out;

    // Pick m independent members by column-pivoted QR in the weighted geometry.
    const cmat weighted = sqrt_weights(family.grid()).cast<cplx>().asDiagonal() * family.matrix();
    Eigen::ColPivHouseholderQR<cmat> qr(weighted);
    std::vector<std::size_t> picks;
    for (int k = 0; k < out.m; ++k) picks.push_back(static_cast<std::size_t>(qr.colsPermutation().indices()(k)));
    std::sort(picks.begin(), picks.end());

    std::vector<Signal> sub;
    for (std::size_t p : picks) sub.push_back(family.members[p]);
    const FunctionFamily basis = make_family(sub);
    out.points = find_full_rank_samples(basis);

    const cmat psi = sampling_matrix(basis, out.points).entries;
    const cmat psi_inv = psi.inverse();
    const cmat k = basis.matrix();  // n_t x m
    const cmat s = k * psi_inv.transpose();
    for (int j = 0; j < out.m; ++j) out.interpolants.push_back(Signal::from_vector(family.grid(), s.col(j)));
    return out;
}

int cfs_wronskian_rank(const KernelSpec& kernel, double omega0, double t0, int nmax) {
    if (nmax < 1) throw Error(Errc::invalid_argument, "nmax must be at least 1");
    int best = 0;
    for (int n = 1; n <= nmax; ++n) {
        cmat w(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) w(i, j) = kernel.mixed_partial(i, j, omega0, t0);
        if (!w.allFinite()) throw Error(Errc::derivative_unavailable, "kernel partials are not finite");
        const double scale = w.cwiseAbs().maxCoeff();
        if (scale > 0.0 && std::abs(w.determinant()) > 1e-10 * std::pow(scale, n)) best = n;
    }
    return best;
}

}  // namespace qup
