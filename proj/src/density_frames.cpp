// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qup-lab contributors

#include "qup/density_frames.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qup/linalg.hpp"

namespace qup {

PointSet make_point_set(std::vector<double> points, double R) {
    if (!(R > 0.0) || !std::isfinite(R)) throw Error(Errc::invalid_range, "window radius must be positive");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(points[i])) throw Error(Errc::invalid_argument, "point set has a non-finite entry");
        if (std::abs(points[i]) > R) throw Error(Errc::invalid_argument, "point outside the window");
        if (i > 0 && !(points[i] > points[i - 1])) {
            throw Error(Errc::invalid_argument, "points must be strictly increasing");
        }
    }
    return PointSet{std::move(points), R};
}

PointSet lattice(double step, double R, double offset) {
    if (!(step > 0.0)) throw Error(Errc::invalid_argument, "lattice step must be positive");
    std::vector<double> pts;
    const auto k0 = static_cast<long long>(std::ceil((-R - offset) / step - 1e-12));
    for (long long k = k0;; ++k) {
        const double x = offset + step * static_cast<double>(k);
        if (x > R * (1.0 + 1e-12)) break;
        if (x >= -R * (1.0 + 1e-12)) pts.push_back(std::clamp(x, -R, R));
    }
    return make_point_set(std::move(pts), R);
}

DensityReport beurling_densities(const PointSet& lambda, const std::vector<double>& r_schedule) {
    if (r_schedule.empty()) throw Error(Errc::schedule_empty, "radius schedule is empty");
    const double R = lambda.R;
    const double r_max = *std::max_element(r_schedule.begin(), r_schedule.end());
    if (!(r_max <= 2.0 * R)) throw Error(Errc::window_too_small, "window shorter than the largest r");
    const auto& p = lambda.points;
    auto count = [&](double x, double r) {
        // #points in [x, x + r)
        return static_cast<long long>(std::lower_bound(p.begin(), p.end(), x + r) - std::lower_bound(p.begin(), p.end(), x));
    };
    DensityReport rep;
    rep.r_max = r_max;
    rep.separation = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < p.size(); ++i) rep.separation = std::min(rep.separation, p[i] - p[i - 1]);
    for (double r : r_schedule) {
        if (!(r > 0.0)) throw Error(Errc::invalid_argument, "radii must be positive");
        const double x_hi = R - r;
        // Counts change only when a window edge crosses a point.
        std::vector<double> xs{-R, x_hi};
        const double nudge = 1e-9 * std::max(1.0, R);
        for (double q : p) {
            for (double x : {q, q + nudge, q - r, q - r + nudge}) {
                if (x >= -R && x <= x_hi) xs.push_back(x);
            }
        }
        long long lo = std::numeric_limits<long long>::max(), hi = 0;
        for (double x : xs) {
            const long long c = count(x, r);
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
        rep.radii.push_back(r);
        rep.n_minus.push_back(lo);
        rep.n_plus.push_back(hi);
        if (r == r_max) {
            rep.d_minus = static_cast<double>(lo) / r;
            rep.d_plus = static_cast<double>(hi) / r;
        }
    }
    return rep;
}

std::string to_string(FrameTestResult::Verdict v) {
    switch (v) {
        case FrameTestResult::Verdict::frame_likely: return "frame-likely";
        case FrameTestResult::Verdict::not_frame_likely: return "not-frame-likely";
        case FrameTestResult::Verdict::inconclusive: return "inconclusive";
    }
    return "";
}

namespace {

// Extreme eigenvalues of the frame operator compressed to span{e^{ik nu (t - c)} / sqrt|I|, |k| <= n}.
FrameBounds compressed_bounds(const PointSet& lambda, double a, double b, int n) {
    const double len = b - a;
    const double nu = 2.0 * pi / len;
    const double c = 0.5 * (a + b);
    const double reach = 1.5 * n * nu;
    std::vector<double> lam;
    for (double x : lambda.points) {
        if (std::abs(x) <= reach) lam.push_back(x);
    }
    const auto dim = static_cast<Eigen::Index>(2 * n + 1);
    cmat e(dim, static_cast<Eigen::Index>(lam.size()));
    for (Eigen::Index row = 0; row < dim; ++row) {
        const double k = static_cast<double>(row - n);
        for (std::size_t j = 0; j < lam.size(); ++j) {
            const double mu = k * nu - lam[j];
            // integral over (a, b) of e^{i k nu (t - c)} e^{-i lambda t}
            cplx integral = std::abs(mu) < 1e-14 ? cplx(len) : (std::polar(1.0, mu * b) - std::polar(1.0, mu * a)) / (I * mu);
            e(row, static_cast<Eigen::Index>(j)) = std::polar(1.0, -k * nu * c) * integral / std::sqrt(len);
        }
    }
    const cmat m = e * e.adjoint();
    const rvec ev = psd_eigenvalues(m);
    FrameBounds fb;
    fb.A = ev(0);
    fb.B = ev(ev.size() - 1);
    return fb;
}

}  // namespace

FrameTestResult exponential_frame_test(const PointSet& lambda, double a, double b, int N) {
    if (!(b > a)) throw Error(Errc::invalid_range, "interval must have positive length");
    if (N < 1) throw Error(Errc::invalid_argument, "truncation must be >= 1");
    if (lambda.points.size() < static_cast<std::size_t>(N)) {
        throw Error(Errc::invalid_argument, "point set smaller than the truncation");
    }
    FrameTestResult res;
    res.N = N;
    const FrameBounds coarse = compressed_bounds(lambda, a, b, N);
    res.bounds = compressed_bounds(lambda, a, b, 2 * N);
    res.A_coarse = coarse.A;
    const double A1 = coarse.A, A2 = res.bounds.A, B = res.bounds.B;
    if (!(B > 0.0) || A2 <= 1e-10 * B || A2 < A1 / 10.0) {
        res.verdict = FrameTestResult::Verdict::not_frame_likely;
    } else if (A2 >= 0.8 * A1) {
        res.verdict = FrameTestResult::Verdict::frame_likely;
    } else {
        res.verdict = FrameTestResult::Verdict::inconclusive;
    }
    return res;
}

SampleExpansion sample_expansion(const KernelSpec& kernel, const std::vector<double>& omegas, const Signal& f) {
    if (omegas.empty()) throw Error(Errc::not_a_frame, "no sampling points");
    const Grid& g = f.grid();
    const rvec sw = sqrt_weights(g);
    cmat rows(static_cast<Eigen::Index>(omegas.size()), static_cast<Eigen::Index>(g.n));
    for (std::size_t j = 0; j < omegas.size(); ++j) {
        rows.row(static_cast<Eigen::Index>(j)) = kernel.row(omegas[j], g).transpose();
    }
    SampleExpansion out;
    out.omegas = omegas;
    const cvec coef = rows * f.to_vector().cwiseProduct(g.weights());
    out.coefficients.assign(coef.data(), coef.data() + coef.size());
    out.energy = coef.squaredNorm();
    out.norm_sq = norm(f) * norm(f);

    // Nonzero spectrum of the weighted frame operator, i.e. the bounds on the samples' span.
    const cmat weighted = rows * sw.asDiagonal();
    const rvec s = singular_values(weighted);
    if (s.size() == 0 || !(s(0) > 0.0)) throw Error(Errc::not_a_frame, "sampled rows vanish");
    double smin = s(0);
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > 1e-10 * s(0)) smin = s(i);
    }
    out.A1 = smin * smin;
    out.B1 = s(0) * s(0);
    const double tol = 1e-8 * out.B1 * out.norm_sq;
    out.within_bounds = out.energy >= out.A1 * out.norm_sq - tol && out.energy <= out.B1 * out.norm_sq + tol;
    return out;
}

TailReport fourier_tail_check(const Signal& f) {
    const Grid& g = f.grid();
    if (g.a < -pi - 1e-12 || g.b > pi + 1e-12) throw Error(Errc::invalid_range, "signal must live inside [-pi, pi]");
    TailReport rep;
    double meas = 0.0;
    double peak = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) peak = std::max(peak, std::abs(f[i]));
    if (!(peak > 0.0)) throw Error(Errc::zero_signal, "signal is zero");
    for (std::size_t i = 0; i < g.n; ++i) {
        if (std::abs(f[i]) > 1e-12 * peak) meas += g.weight(i);
    }
    rep.support = meas;
    if (meas >= 2.0 * pi - 2.0 * g.spacing()) {
        throw Error(Errc::full_support_input, "support fills the whole period");
    }
    const int n_max = 256;
    const Grid ns = make_grid(-n_max, n_max, 2 * n_max + 1);
    const Signal coef = direct_transform(f, ns);
    double top = 0.0;
    for (std::size_t j = 0; j < ns.n; ++j) top = std::max(top, std::abs(coef[j]) / (2.0 * pi));
    rep.pass = true;
    for (int N : {64, 128, 256}) {
        double bp = 0.0;
        for (std::size_t j = 0; j < ns.n; ++j) {
            const double n = std::abs(ns.node(j));
            if (n >= N / 2 && n <= N) bp = std::max(bp, std::abs(coef[j]) / (2.0 * pi));
        }
        rep.block_ends.push_back(N);
        rep.block_peaks.push_back(bp / top);
        if (!(bp > 1e-12 * top)) rep.pass = false;
    }
    return rep;
}

cplx BandlimitedMixture::operator()(double t) const {
    cplx v{0.0, 0.0};
    for (const auto& term : terms) {
        if (term.kind == Term::Kind::exponential) {
            v += term.amplitude * std::polar(1.0, term.frequency * t);
        } else {
            const double x = term.frequency * (t - term.shift);
            v += term.amplitude * (std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x);
        }
    }
    return v;
}

double BandlimitedMixture::bandlimit() const {
    double w = 0.0;
    for (const auto& term : terms) w = std::max(w, std::abs(term.frequency));
    return w;
}

double zero_density(const BandlimitedMixture& f, double R) {
    if (!(R > 0.0)) throw Error(Errc::invalid_range, "window must be positive");
    const double band = std::max(f.bandlimit(), 1e-3);
    const auto n = static_cast<std::size_t>(std::ceil(2.0 * R * 8.0 * band / pi)) + 1;
    const Grid g = make_grid(-R, R, static_cast<long long>(n));
    std::vector<cplx> v(n);
    double peak = 0.0, imag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = f(g.node(i));
        peak = std::max(peak, std::abs(v[i]));
        imag = std::max(imag, std::abs(v[i].imag()));
    }
    if (!(peak > 0.0)) return 0.0;
    long long zeros = 0;
    if (imag <= 1e-12 * peak) {
        for (std::size_t i = 0; i < n; ++i) {
            const double y = v[i].real();
            if (y == 0.0) {
                ++zeros;
            } else if (i + 1 < n && v[i + 1].real() != 0.0 && (y < 0.0) != (v[i + 1].real() < 0.0)) {
                ++zeros;
            }
        }
    } else {
        // Modulus minima refined by golden-section search inside the bracketing cells.
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (!(std::abs(v[i]) <= std::abs(v[i - 1]) && std::abs(v[i]) < std::abs(v[i + 1]))) continue;
            double lo = g.node(i - 1), hi = g.node(i + 1);
            for (int it = 0; it < 80; ++it) {
                const double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
                if (std::abs(f(x1)) < std::abs(f(x2))) {
                    hi = x2;
                } else {
                    lo = x1;
                }
            }
            if (std::abs(f(0.5 * (lo + hi))) < 1e-10 * peak) ++zeros;
        }
    }
    return static_cast<double>(zeros) / (2.0 * R);
}

}  // namespace qup
