// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qup-lab contributors

#include "qup/complete_points.hpp"

#include <algorithm>
#include <cmath>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "qup/linalg.hpp"

namespace qup {

namespace {

constexpr double kSpanRel = 1e-9;

struct Segment {
    double lo;
    double hi;
};

// Orthonormal basis of span{K(omega, .)} from unit-normalized samples, so that
// directions reached only with small amplitude still count.
cmat estimate_span(const std::function<cvec(double)>& ambient, std::size_t dim, const Grid& samples) {
    cmat cols(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(samples.n));
    Eigen::Index used = 0;
    for (std::size_t j = 0; j < samples.n; ++j) {
        cvec k = ambient(samples.node(j));
        const double nk = k.norm();
        if (!(nk > 0.0) || !std::isfinite(nk)) continue;
        cols.col(used++) = k / nk;
    }
    if (used == 0) return cmat(static_cast<Eigen::Index>(dim), 0);
    return range_basis(cols.leftCols(used), kSpanRel);
}

std::vector<Segment> neighborhood(double omega0, double r, std::optional<std::pair<double, double>> domain,
                                  double omega_max) {
    std::vector<Segment> segs;
    if (std::isinf(omega0)) {
        segs = {{-omega_max, -r}, {r, omega_max}};
    } else {
        segs = {{omega0 - r, omega0 + r}};
    }
    std::vector<Segment> out;
    for (auto s : segs) {
        if (domain) {
            s.lo = std::max(s.lo, domain->first);
            s.hi = std::min(s.hi, domain->second);
        }
        if (s.hi > s.lo) out.push_back(s);
    }
    return out;
}

std::size_t segment_points(const Segment& s, std::size_t n_omega, double omega_scale) {
    // Keep omega * t phase steps well below one radian across the t-extent.
    const double need = std::ceil(2.0 * (s.hi - s.lo) * omega_scale) + 1.0;
    return std::max<std::size_t>(n_omega, static_cast<std::size_t>(std::min(need, 20001.0)));
}

struct Restricted {
    cmat analysis;                // rows sqrt(W_j) c(omega_j)^T
    std::vector<double> omegas;
    std::vector<double> weights;
    double measure = 0.0;
};

Restricted restrict_curve(const KernelCurve& curve, const std::vector<Segment>& segs, std::size_t n_omega,
                          double omega_scale) {
    Restricted out;
    std::size_t total = 0;
    std::vector<Grid> grids;
    for (const auto& s : segs) {
        grids.push_back(make_grid(s.lo, s.hi, static_cast<long long>(segment_points(s, n_omega, omega_scale))));
        total += grids.back().n;
        out.measure += s.hi - s.lo;
    }
    out.analysis.resize(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(curve.span_dim()));
    Eigen::Index row = 0;
    for (const auto& g : grids) {
        for (std::size_t j = 0; j < g.n; ++j) {
            const double w = g.weight(j);
            out.omegas.push_back(g.node(j));
            out.weights.push_back(w);
            out.analysis.row(row++) = std::sqrt(w) * curve.coords(g.node(j)).transpose();
        }
    }
    return out;
}

// Hermitian frame matrix of the restricted analysis rows, descending eigenpairs.
struct Spectrum {
    rvec values;  // descending
    cmat vectors;
};

Spectrum frame_spectrum(const cmat& analysis) {
    Spectrum sp;
    if (analysis.cols() == 0) return sp;
    const cmat m = analysis.adjoint() * analysis;
    Eigen::SelfAdjointEigenSolver<cmat> es(m);
    const Eigen::Index k = m.rows();
    sp.values.resize(k);
    sp.vectors.resize(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        sp.values(i) = std::max(0.0, es.eigenvalues()(k - 1 - i));
        sp.vectors.col(i) = es.eigenvectors().col(k - 1 - i);
    }
    return sp;
}

using hp = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<160>, boost::multiprecision::et_off>;

// Cyclic Jacobi on a dense symmetric matrix; eigenvalues in descending order.
std::vector<hp> jacobi_eigenvalues(std::vector<std::vector<hp>> a) {
    const std::size_t n = a.size();
    const hp tiny("1e-300");
    for (int sweep = 0; sweep < 100; ++sweep) {
        hp off = 0, tot = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j) off += a[i][j] * a[i][j];
                tot += a[i][j] * a[i][j];
            }
        }
        if (off <= tot * tiny) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a[p][q] == 0) continue;
                const hp theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
                const hp t = (theta >= 0 ? hp(1) : hp(-1)) / (abs(theta) + sqrt(theta * theta + 1));
                const hp c = 1 / sqrt(t * t + 1);
                const hp s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const hp kp = a[k][p], kq = a[k][q];
                    a[k][p] = c * kp - s * kq;
                    a[k][q] = s * kp + c * kq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const hp pk = a[p][k], qk = a[q][k];
                    a[p][k] = c * pk - s * qk;
                    a[q][k] = s * pk + c * qk;
                }
            }
        }
    }
    std::vector<hp> e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = a[i][i];
    std::sort(e.rbegin(), e.rend());
    return e;
}

// Singular values of the weighted Fourier analysis matrix on [w0 - r, w0 + r] x t_grid.
// A shift in omega is a unitary phase on the t side, so the band is centered at 0 and the
// Gram matrix is real Toeplitz. Extended precision keeps the super-exponential tail.
std::vector<double> fourier_band_singular_values(double r, std::size_t n_omega, const Grid& t_grid) {
    const std::size_t nt = t_grid.n;
    const hp dt = (hp(t_grid.b) - hp(t_grid.a)) / (nt - 1);
    const hp rr = r;
    const hp dw = 2 * rr / (n_omega - 1);
    std::vector<hp> c(nt);
    for (std::size_t m = 0; m < nt; ++m) {
        hp acc = 0;
        for (std::size_t j = 0; j < n_omega; ++j) {
            const hp w = -rr + dw * j;
            const hp wt = (j == 0 || j + 1 == n_omega) ? dw / 2 : dw;
            acc += wt * cos(w * dt * m);
        }
        c[m] = acc;
    }
    std::vector<hp> sw(nt);
    for (std::size_t k = 0; k < nt; ++k) sw[k] = sqrt((k == 0 || k + 1 == nt) ? dt / 2 : dt);
    std::vector<std::vector<hp>> g(nt, std::vector<hp>(nt));
    for (std::size_t k = 0; k < nt; ++k) {
        for (std::size_t l = 0; l < nt; ++l) g[k][l] = sw[k] * sw[l] * c[k > l ? k - l : l - k];
    }
    std::vector<double> out;
    for (const hp& e : jacobi_eigenvalues(std::move(g))) out.push_back(e > 0 ? sqrt(e).convert_to<double>() : 0.0);
    return out;
}

double omega_scale_of(const Grid& t_grid) { return std::max(std::abs(t_grid.a), std::abs(t_grid.b)) * 2.0; }

}  // namespace

KernelCurve::KernelCurve(std::function<cvec(double)> ambient, cmat basis)
    : ambient_(std::move(ambient)), basis_(std::move(basis)) {}

KernelCurve::KernelCurve(const KernelSpec& kernel, const Grid& t_grid, const Grid& span_samples) {
    const rvec sw = sqrt_weights(t_grid);
    ambient_ = [kernel, t_grid, sw](double omega) -> cvec { return sw.cwiseProduct(kernel.row(omega, t_grid)); };
    basis_ = estimate_span(ambient_, t_grid.n, span_samples);
}

KernelCurve::KernelCurve(std::function<cvec(double)> ambient, std::size_t ambient_dim, const Grid& span_samples)
    : ambient_(std::move(ambient)) {
    basis_ = estimate_span(ambient_, ambient_dim, span_samples);
}

cvec KernelCurve::coords(double omega) const { return basis_.adjoint() * ambient_(omega); }

KernelCurve KernelCurve::transformed(const cmat& unitary) const {
    if (unitary.rows() != basis_.rows() || unitary.cols() != basis_.rows()) {
        throw Error(Errc::dimension_mismatch, "unitary does not match the ambient dimension");
    }
    auto inner_fn = ambient_;
    return KernelCurve([inner_fn, unitary](double omega) -> cvec { return unitary * inner_fn(omega); },
                       cmat(unitary * basis_));
}

double default_omega_max(const Grid& t_grid) { return 200.0 / t_grid.length(); }

Grid default_span_grid(const KernelSpec& kernel, const Grid& t_grid, std::optional<double> omega_max) {
    const double om = omega_max.value_or(default_omega_max(t_grid));
    if (auto d = kernel.omega_domain()) return make_grid(d->first, d->second, 2001);
    if (std::holds_alternative<kernel::Wavelet>(kernel.variant())) {
        return make_grid(t_grid.spacing(), t_grid.length(), 2001);
    }
    return make_grid(-om, om, 4001);
}

double CompletePointReport::min_A() const {
    double a = INFINITY_POINT;
    for (const auto& e : evidence) a = std::min(a, e.A);
    return evidence.empty() ? 0.0 : a;
}

double CompletePointReport::max_B() const {
    double b = 0.0;
    for (const auto& e : evidence) b = std::max(b, e.B);
    return b;
}

std::string to_string(CompletePointReport::Verdict v) {
    switch (v) {
        case CompletePointReport::Verdict::complete: return "complete";
        case CompletePointReport::Verdict::not_complete: return "not-complete";
        case CompletePointReport::Verdict::inconclusive: return "inconclusive";
    }
    return "";
}

std::string to_string(CompletePointReport::Regularity r) {
    return r == CompletePointReport::Regularity::regular ? "regular" : "singular";
}

std::string to_string(CompletePointReport::Stability s) {
    switch (s) {
        case CompletePointReport::Stability::stable: return "stable";
        case CompletePointReport::Stability::unstable: return "unstable";
        case CompletePointReport::Stability::untested: return "untested";
    }
    return "";
}

FrameBounds local_frame_bounds(const KernelCurve& curve, double omega0, double r, std::size_t n_omega) {
    if (!(r > 0.0)) throw Error(Errc::invalid_argument, "radius must be positive");
    if (n_omega < 2) throw Error(Errc::invalid_argument, "n_omega must be at least 2");
    const Grid g = make_grid(omega0 - r, omega0 + r, static_cast<long long>(n_omega));
    cmat analysis(static_cast<Eigen::Index>(g.n), static_cast<Eigen::Index>(curve.span_dim()));
    for (std::size_t j = 0; j < g.n; ++j) {
        analysis.row(static_cast<Eigen::Index>(j)) = std::sqrt(g.weight(j)) * curve.coords(g.node(j)).transpose();
    }
    FrameBounds fb;
    if (analysis.cols() == 0) return fb;
    const rvec s = singular_values(analysis);
    fb.B = s(0) * s(0);
    fb.A = analysis.rows() >= analysis.cols() ? s(s.size() - 1) * s(s.size() - 1) : 0.0;
    return fb;
}

FrameBounds local_frame_bounds(const KernelSpec& kernel, double omega0, double r, const Grid& t_grid,
                               std::size_t n_omega) {
    // Span over the default domain widened to cover the neighborhood itself.
    Grid span = default_span_grid(kernel, t_grid);
    if (!kernel.omega_domain()) {
        const double lo = std::min(span.a, omega0 - r);
        const double hi = std::max(span.b, omega0 + r);
        span = make_grid(lo, hi, static_cast<long long>(std::max<std::size_t>(span.n, n_omega)));
    }
    return local_frame_bounds(KernelCurve(kernel, t_grid, span), omega0, r, n_omega);
}

CompletePointReport classify_point(const KernelCurve& curve, double omega0, const std::vector<double>& radii,
                                   const ClassifyOptions& opts, std::optional<std::pair<double, double>> domain,
                                   double omega_scale) {
    using R = CompletePointReport;
    if (radii.empty()) throw Error(Errc::schedule_empty, "radius schedule is empty");
    const bool at_inf = std::isinf(omega0);
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0) || !std::isfinite(radii[i])) {
            throw Error(Errc::invalid_argument, "radii must be positive and finite");
        }
        if (i > 0 && (at_inf ? !(radii[i] > radii[i - 1]) : !(radii[i] < radii[i - 1]))) {
            throw Error(Errc::invalid_argument,
                        at_inf ? "radii at infinity must increase" : "radii must be strictly decreasing");
        }
    }
    if (domain && !at_inf && (omega0 < domain->first || omega0 > domain->second)) {
        throw Error(Errc::point_out_of_range, "omega0 outside the kernel domain");
    }

    R rep;
    rep.omega0 = omega0;
    rep.omega_max = opts.omega_max.value_or(omega_scale > 0.0 ? 400.0 / omega_scale : 100.0);
    if (curve.span_dim() == 0) {
        rep.verdict = R::Verdict::inconclusive;
        return rep;
    }

    bool all_pass = true;
    bool any_fail = false;
    bool all_witness = true;
    bool all_stable = true;
    for (double r : radii) {
        const auto segs = neighborhood(omega0, r, domain, rep.omega_max);
        RadiusEvidence ev;
        ev.radius = r;
        ev.subspace_dim = curve.span_dim();
        if (segs.empty()) {
            rep.evidence.push_back(ev);
            all_pass = false;
            any_fail = true;
            all_witness = false;
            continue;
        }
        const Restricted res = restrict_curve(curve, segs, opts.n_omega, omega_scale);
        const Spectrum sp = frame_spectrum(res.analysis);
        const Eigen::Index k = sp.values.size();
        ev.B = sp.values(0);
        ev.A = sp.values(k - 1);
        if (!(ev.B > 0.0)) {
            all_pass = false;
            any_fail = true;
        } else if (ev.A > opts.completeness_floor * ev.B) {
            if (ev.A < opts.stability_fraction * ev.B) all_stable = false;
        } else {
            all_pass = false;
            // A clean null space (well-conditioned nonzero part, then a drop to round-off)
            // is a genuine failure; a spectrum decaying smoothly into round-off is not decidable.
            const double noise = 1e-13 * ev.B;
            double last = ev.B;
            for (Eigen::Index i = 0; i < k; ++i) {
                if (sp.values(i) > noise) last = sp.values(i);
            }
            if (last >= 1e-5 * ev.B) any_fail = true;
        }

        // Trivial-point witness: an eigenvector whose transform vanishes on part of V_r.
        bool witness = false;
        if (ev.B > 0.0) {
            for (Eigen::Index i = 0; i < k && !witness; ++i) {
                const cvec vals = res.analysis * sp.vectors.col(i);
                double peak = 0.0;
                for (Eigen::Index j = 0; j < vals.size(); ++j) {
                    peak = std::max(peak, std::abs(vals(j)) / std::sqrt(std::max(res.weights[j], 1e-300)));
                }
                if (!(peak > 0.0)) continue;
                double meas = 0.0;
                for (Eigen::Index j = 0; j < vals.size(); ++j) {
                    const double w = res.weights[static_cast<std::size_t>(j)];
                    if (w > 0.0 && std::abs(vals(j)) / std::sqrt(w) > opts.witness_eps * peak) meas += w;
                }
                if (meas < (1.0 - opts.trivial_margin) * res.measure) witness = true;
            }
        }
        ev.witness_gap = witness;
        if (!witness) all_witness = false;
        rep.evidence.push_back(ev);
    }

    if (any_fail) {
        rep.verdict = R::Verdict::not_complete;
    } else if (all_pass) {
        rep.verdict = R::Verdict::complete;
    } else {
        rep.verdict = R::Verdict::inconclusive;
    }
    if (rep.verdict == R::Verdict::complete) {
        rep.stability = all_stable ? R::Stability::stable : R::Stability::unstable;
        rep.trivial = all_witness;
    }

    // Strong continuity at omega0: the oscillation of K over shrinking balls must vanish.
    rep.regularity = R::Regularity::singular;
    if (!at_inf) {
        double rho = *std::min_element(radii.begin(), radii.end());
        auto in_domain = [&](double w) { return !domain || (w >= domain->first && w <= domain->second); };
        const cvec k0 = curve.coords(omega0);
        double eps = opts.continuity_rel * k0.norm();
        if (!(eps > 0.0)) {
            double mx = 0.0;
            for (int j = -8; j <= 8; ++j) {
                const double w = omega0 + rho * j / 8.0;
                if (in_domain(w)) mx = std::max(mx, curve.coords(w).norm());
            }
            eps = opts.continuity_rel * mx;
        }
        if (!(eps > 0.0)) {
            rep.regularity = R::Regularity::regular;  // identically zero near omega0
        } else {
            for (int level = 0; level < 40; ++level, rho *= 0.5) {
                double osc = 0.0;
                for (int j = -4; j <= 4; ++j) {
                    const double w = omega0 + rho * j / 4.0;
                    if (!in_domain(w)) continue;
                    osc = std::max(osc, (curve.coords(w) - k0).norm());
                }
                if (osc < eps) {
                    rep.regularity = R::Regularity::regular;
                    break;
                }
            }
        }
    }
    return rep;
}

CompletePointReport classify_point(const KernelSpec& kernel, double omega0, const std::vector<double>& radii,
                                   const Grid& t_grid, const ClassifyOptions& opts) {
    const KernelCurve curve(kernel, t_grid, default_span_grid(kernel, t_grid, opts.omega_max));
    ClassifyOptions o = opts;
    if (!o.omega_max) o.omega_max = default_omega_max(t_grid);
    return classify_point(curve, omega0, radii, o, kernel.omega_domain(), omega_scale_of(t_grid));
}

std::vector<CompletePointReport> scan_points(const KernelSpec& kernel, const std::vector<double>& omegas,
                                             const std::vector<double>& radii, const Grid& t_grid,
                                             const ClassifyOptions& opts) {
    const KernelCurve curve(kernel, t_grid, default_span_grid(kernel, t_grid, opts.omega_max));
    ClassifyOptions o = opts;
    if (!o.omega_max) o.omega_max = default_omega_max(t_grid);
    std::vector<CompletePointReport> out;
    out.reserve(omegas.size());
    for (double w : omegas) out.push_back(classify_point(curve, w, radii, o, kernel.omega_domain(), omega_scale_of(t_grid)));
    return out;
}

std::vector<double> stability_decay(const KernelSpec& kernel, double omega0, double r, const std::vector<int>& dims,
                                    const Grid& t_grid, std::size_t n_omega) {
    if (!(r > 0.0) || !std::isfinite(r)) throw Error(Errc::invalid_argument, "radius must be positive and finite");
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (dims[i] < 1 || (i > 0 && dims[i] <= dims[i - 1])) {
            throw Error(Errc::invalid_argument, "dims must be increasing and >= 1");
        }
    }
    if (n_omega < 2) throw Error(Errc::invalid_argument, "n_omega must be at least 2");
    std::vector<double> s;
    if (std::holds_alternative<kernel::Fourier>(kernel.variant()) ||
        std::holds_alternative<kernel::InverseFourier>(kernel.variant())) {
        s = fourier_band_singular_values(r, n_omega, t_grid);
    } else {
        const Grid og = make_grid(omega0 - r, omega0 + r, static_cast<long long>(n_omega));
        const rvec sv = singular_values(weighted_analysis(discretize(kernel, og, t_grid)));
        s.assign(sv.data(), sv.data() + sv.size());
    }
    std::vector<double> out;
    for (int d : dims) out.push_back(static_cast<std::size_t>(d) <= s.size() ? s[static_cast<std::size_t>(d - 1)] : 0.0);
    return out;
}

ConcentrationReport tail_completeness(const KernelSpec& kernel, double r, const Grid& t_grid) {
    const bool supported = std::holds_alternative<kernel::Fourier>(kernel.variant()) ||
                           std::holds_alternative<kernel::InverseFourier>(kernel.variant());
    if (!supported) throw Error(Errc::invalid_argument, "tail concentration needs the Fourier pair");
    if (!(r > 0.0)) throw Error(Errc::invalid_argument, "band radius must be positive");
    const std::size_t n = t_grid.n;
    const rvec sw = sqrt_weights(t_grid);
    rmat s(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double d = t_grid.node(i) - t_grid.node(j);
            const double v = i == j ? r / pi : std::sin(r * d) / (pi * d);
            s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = sw(i) * v * sw(j);
        }
    }
    Eigen::SelfAdjointEigenSolver<rmat> es(s);
    const Eigen::Index top = static_cast<Eigen::Index>(n) - 1;
    ConcentrationReport rep;
    rep.r = r;
    rep.lambda0 = std::clamp(es.eigenvalues()(top), 0.0, 1.0 - 1e-12);
    rep.tail_bound = 1.0 - rep.lambda0;
    cvec f(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        f(static_cast<Eigen::Index>(i)) = es.eigenvectors()(static_cast<Eigen::Index>(i), top) / sw(i);
    }
    Signal sig = Signal::from_vector(t_grid, f);
    const double nf = norm(sig);
    rep.eigenvector = Signal::from_vector(t_grid, f / nf);
    return rep;
}

double independent_radius(const FunctionFamily& family, double omega0, double tol) {
    const Grid& g = family.grid();
    if (!g.contains(omega0)) throw Error(Errc::point_out_of_range, "omega0 outside the family grid");
    const cmat m = family.matrix();
    const double h = g.spacing();
    omega0 = g.node(g.nearest(omega0));

    auto independent_within = [&](double d) {
        std::vector<Eigen::Index> rows;
        for (std::size_t k = 0; k < g.n; ++k) {
            if (std::abs(g.node(k) - omega0) <= d + 1e-12 * h) rows.push_back(static_cast<Eigen::Index>(k));
        }
        if (rows.size() < 2) return false;
        cmat sub(static_cast<Eigen::Index>(rows.size()), m.cols());
        // Trapezoidal weights on the included nodes.
        for (std::size_t q = 0; q < rows.size(); ++q) {
            const double w = (q == 0 || q + 1 == rows.size()) ? 0.5 * h : h;
            sub.row(static_cast<Eigen::Index>(q)) = std::sqrt(w) * m.row(rows[q]);
        }
        const rvec s = singular_values(sub);
        if (sub.rows() < sub.cols() || !(s(0) > 0.0)) return false;
        const double ratio = (s(s.size() - 1) * s(s.size() - 1)) / (s(0) * s(0));
        return ratio > tol;
    };

    std::vector<double> dists;
    for (std::size_t k = 0; k < g.n; ++k) dists.push_back(std::abs(g.node(k) - omega0));
    std::sort(dists.begin(), dists.end());
    dists.erase(std::unique(dists.begin(), dists.end(), [&](double x, double y) { return y - x < 1e-9 * h; }),
                dists.end());

    if (!independent_within(dists.back())) {
        throw Error(Errc::never_independent, "family is dependent on the whole grid");
    }
    if (independent_within(h)) return 0.0;
    std::size_t lo = 0, hi = dists.size() - 1;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (independent_within(dists[mid])) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return dists[hi];
}

CurveJet curve_jet(const KernelCurve& curve, double omega0, int m, double h) {
    if (m < 1) throw Error(Errc::invalid_argument, "jet order must be >= 1");
    if (!(h > 0.0)) throw Error(Errc::invalid_argument, "step must be positive");
    CurveJet jet;
    jet.omega0 = omega0;
    jet.order = m;
    jet.h = h;
    jet.basis = std::make_shared<const cmat>(curve.basis());
    std::vector<int> widest = central_stencil(m, 2);
    std::vector<cvec> samples;
    for (int off : widest) samples.push_back(curve.coords(omega0 + off * h));
    for (int k = 1; k <= m; ++k) {
        const auto st = central_stencil(k, 2);
        std::vector<double> x;
        for (int off : st) x.push_back(off * h);
        const rmat w = fornberg_weights(0.0, x, k);
        cvec d = cvec::Zero(static_cast<Eigen::Index>(curve.span_dim()));
        for (std::size_t j = 0; j < st.size(); ++j) {
            const auto pos = std::find(widest.begin(), widest.end(), st[j]) - widest.begin();
            d += w(k, static_cast<Eigen::Index>(j)) * samples[static_cast<std::size_t>(pos)];
        }
        if (!d.allFinite()) throw Error(Errc::evaluation_domain, "non-finite jet");
        jet.derivatives.push_back(d);
    }
    return jet;
}

CurveJet curve_jet(const KernelSpec& kernel, double omega0, int m, double h, const Grid& t_grid) {
    return curve_jet(KernelCurve(kernel, t_grid, default_span_grid(kernel, t_grid)), omega0, m, h);
}

namespace {

constexpr double kCollapse = 1e-8;

// Gram-Schmidt of gamma^(1..count); returns fewer vectors on collapse.
std::vector<cvec> orthonormalize(const std::vector<cvec>& d, std::size_t count, std::size_t* achieved,
                                 bool* last_nonzero) {
    std::vector<cvec> e;
    const double scale = d[0].norm();
    for (std::size_t k = 0; k < count; ++k) {
        cvec v = d[k];
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& b : e) v -= b.dot(v) * b;
        }
        const double nv = v.norm();
        if (!(nv > kCollapse * std::max(d[k].norm(), 1e-300)) || !(d[k].norm() > kCollapse * scale)) {
            *achieved = k;
            *last_nonzero = d[k].norm() > kCollapse * scale;
            return e;
        }
        e.push_back(v / nv);
    }
    *achieved = count;
    *last_nonzero = true;
    return e;
}

}  // namespace

CurvatureProfile frenet_curvatures(const CurveJet& minus, const CurveJet& center, const CurveJet& plus) {
    const int m = center.order;
    if (m < 2) throw Error(Errc::invalid_argument, "frenet frame needs order >= 2");
    if (minus.order != m || plus.order != m) throw Error(Errc::dimension_mismatch, "jets differ in order");
    const double h = plus.omega0 - center.omega0;
    if (!(h > 0.0) || std::abs((center.omega0 - minus.omega0) - h) > 1e-9 * std::max(1.0, h)) {
        throw Error(Errc::invalid_argument, "jets must sit at omega0 - h, omega0, omega0 + h");
    }
    const auto dim = static_cast<std::size_t>(center.derivatives[0].size());
    if (!(center.derivatives[0].norm() > 0.0)) throw Error(Errc::rank_collapse, "rank collapse: order achieved 0");

    std::size_t achieved = 0;
    bool last_nonzero = false;
    auto frame = orthonormalize(center.derivatives, static_cast<std::size_t>(m), &achieved, &last_nonzero);
    if (achieved < static_cast<std::size_t>(m)) {
        // A nonzero top derivative trapped in the plane of the lower ones still fixes
        // e_m by orientation when the span has exactly m dimensions.
        if (achieved + 1 == static_cast<std::size_t>(m) && last_nonzero && dim == static_cast<std::size_t>(m)) {
            cmat lower(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(m - 1));
            for (int i = 0; i < m - 1; ++i) lower.col(i) = frame[static_cast<std::size_t>(i)];
            Eigen::FullPivLU<cmat> lu(lower.adjoint());
            cvec e = lu.kernel().col(0);
            for (int pass = 0; pass < 2; ++pass) {
                for (const auto& b : frame) e -= b.dot(e) * b;
            }
            e.normalize();
            cmat full(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(m));
            full.leftCols(m - 1) = lower;
            full.col(m - 1) = e;
            const cplx det = full.determinant();
            if (std::abs(det) > 0.0) e *= std::conj(det) / std::abs(det);
            frame.push_back(e);
        } else {
            throw Error(Errc::rank_collapse, "rank collapse: order achieved " + std::to_string(achieved));
        }
    }

    std::size_t am = 0, ap = 0;
    bool nz = false;
    const auto fm = orthonormalize(minus.derivatives, static_cast<std::size_t>(m - 1), &am, &nz);
    const auto fp = orthonormalize(plus.derivatives, static_cast<std::size_t>(m - 1), &ap, &nz);
    if (am < static_cast<std::size_t>(m - 1) || ap < static_cast<std::size_t>(m - 1)) {
        throw Error(Errc::rank_collapse, "rank collapse near omega0");
    }

    bool real_frame = true;
    for (const auto& e : frame) real_frame = real_frame && e.imag().norm() < 1e-10;
    const double speed = center.derivatives[0].norm();
    CurvatureProfile prof;
    prof.frame = frame;
    for (int i = 0; i < m - 1; ++i) {
        const cvec de = (fp[static_cast<std::size_t>(i)] - fm[static_cast<std::size_t>(i)]) / (2.0 * h);
        const cplx v = frame[static_cast<std::size_t>(i + 1)].dot(de) / speed;
        prof.curvatures.push_back(real_frame ? v.real() : std::abs(v));
    }
    return prof;
}

CurveVerdict curve_wronskian_test(const KernelCurve& curve, double omega0, int n, double h) {
    if (n < 1) throw Error(Errc::invalid_argument, "order must be >= 1");
    if (curve.span_dim() != static_cast<std::size_t>(n)) {
        throw Error(Errc::dimension_mismatch, "kernel span has dimension " + std::to_string(curve.span_dim()) +
                                                  ", not " + std::to_string(n));
    }
    for (double w : {omega0 - h, omega0, omega0 + h}) {
        const CurveJet jet = curve_jet(curve, w, n, h);
        cmat d(n, n);
        double scale = 1.0;
        double level = curve.coords(w).norm();
        for (const auto& v : jet.derivatives) level += v.norm();
        for (int k = 0; k < n; ++k) {
            const double nk = jet.derivatives[static_cast<std::size_t>(k)].norm();
            // A derivative at difference-noise level counts as zero.
            if (!(nk > 1e-8 * level)) return CurveVerdict::not_complete;
            d.col(k) = jet.derivatives[static_cast<std::size_t>(k)];
            scale *= nk;
        }
        // Determinants below the round-off carried by the difference quotients are zero.
        double noise = 0.0;
        for (int k = 0; k < n; ++k) {
            noise += 64.0 * std::numeric_limits<double>::epsilon() * level / std::pow(h, k + 1) /
                     jet.derivatives[static_cast<std::size_t>(k)].norm();
        }
        if (!(std::abs(d.determinant()) > std::max(1e-9, noise) * scale)) return CurveVerdict::not_complete;
    }
    return CurveVerdict::complete;
}

CurveVerdict curve_wronskian_test(const KernelSpec& kernel, double omega0, int n, double h, const Grid& t_grid) {
    return curve_wronskian_test(KernelCurve(kernel, t_grid, default_span_grid(kernel, t_grid)), omega0, n, h);
}

CurveVerdict curvature_verdict(const KernelCurve& curve, double omega0, int n, double h) {
    if (n == 1) {
        const CurveJet jet = curve_jet(curve, omega0, 1, h);
        const double ref = std::max(1.0, curve.coords(omega0).norm());
        return jet.derivatives[0].norm() > 1e-9 * ref ? CurveVerdict::complete : CurveVerdict::not_complete;
    }
    try {
        const auto prof = frenet_curvatures(curve_jet(curve, omega0 - h, n, h), curve_jet(curve, omega0, n, h),
                                            curve_jet(curve, omega0 + h, n, h));
        double mx = 0.0;
        for (double l : prof.curvatures) mx = std::max(mx, std::abs(l));
        for (double l : prof.curvatures) {
            if (!(std::abs(l) > 1e-6 * std::max(1.0, mx))) return CurveVerdict::not_complete;
        }
        return CurveVerdict::complete;
    } catch (const Error& e) {
        if (e.code() == Errc::rank_collapse) return CurveVerdict::not_complete;
        throw;
    }
}

std::vector<Signal> orthonormal_polynomials(const Grid& t_grid, std::size_t k) {
    std::vector<Signal> out;
    const double c = 0.5 * (t_grid.a + t_grid.b);
    const double half = 0.5 * t_grid.length();
    for (std::size_t p = 0; p < k; ++p) {
        Signal v = sample(t_grid, [&](double t) { return cplx(std::pow((t - c) / half, static_cast<double>(p))); });
        cvec x = v.to_vector();
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& q : out) {
                const Signal cur = Signal::from_vector(t_grid, x);
                x -= inner(cur, q) * q.to_vector();
            }
        }
        Signal s = Signal::from_vector(t_grid, x);
        out.push_back(Signal::from_vector(t_grid, x / norm(s)));
    }
    return out;
}

namespace {

KernelSpec separable(const std::vector<Signal>& h, std::vector<std::pair<std::function<cplx(double)>, std::string>> a) {
    kernel::SeparableRank k;
    for (std::size_t i = 0; i < a.size(); ++i) {
        k.terms.push_back({cplx(1.0), Profile(a[i].first, a[i].second), h[i]});
    }
    return KernelSpec(k);
}

cplx bump(double w) { return w > 0.0 ? std::exp(-1.0 / w) : 0.0; }

}  // namespace

std::vector<CatalogKernel> finite_kernel_catalog(const Grid& t_grid) {
    const auto h = orthonormal_polynomials(t_grid, 4);
    using F = std::function<cplx(double)>;
    auto c = [](F f, const char* l) { return std::make_pair(std::move(f), std::string(l)); };
    const F cosf = [](double w) { return cplx(std::cos(w)); };
    const F sinf = [](double w) { return cplx(std::sin(w)); };
    const F id = [](double w) { return cplx(w); };
    const F sq = [](double w) { return cplx(w * w); };
    const F cube = [](double w) { return cplx(w * w * w); };
    std::vector<CatalogKernel> cat;
    cat.push_back({"helix", separable(h, {c(cosf, "cos"), c(sinf, "sin"), c(id, "omega")}), 0.3, 3});
    cat.push_back({"circle-bump", separable(h, {c(cosf, "cos"), c(sinf, "sin"), c(bump, "bump")}), -1.0, 3});
    cat.push_back({"twisted-cubic", separable(h, {c(id, "omega"), c(sq, "omega^2"), c(cube, "omega^3")}), 0.4, 3});
    cat.push_back({"line-bump", separable(h, {c(id, "omega"), c(bump, "bump")}), -1.0, 2});
    cat.push_back({"scalar", separable(h, {c([](double w) { return cplx(std::sin(w) + 2.0); }, "sin+2")}), 0.5, 1});
    cat.push_back({"circle", separable(h, {c(cosf, "cos"), c(sinf, "sin")}), 0.7, 2});
    cat.push_back({"double-circle",
                   separable(h, {c(cosf, "cos"), c(sinf, "sin"), c([](double w) { return cplx(std::cos(2 * w)); }, "cos2"),
                                 c([](double w) { return cplx(std::sin(2 * w)); }, "sin2")}),
                   0.3, 4});
    cat.push_back({"repeated-square", separable(h, {c(id, "omega"), c(sq, "omega^2"), c(sq, "omega^2")}), 0.2, 2});
    cat.push_back({"exponentials",
                   separable(h, {c([](double w) { return cplx(std::exp(w)); }, "exp1"),
                                 c([](double w) { return cplx(std::exp(2 * w)); }, "exp2"),
                                 c([](double w) { return cplx(std::exp(3 * w)); }, "exp3")}),
                   0.0, 3});
    cat.push_back({"cubic-graph", separable(h, {c(id, "omega"), c(cube, "omega^3")}), 0.5, 2});
    cat.push_back({"inflection", separable(h, {c(id, "omega"), c(cube, "omega^3")}), 0.0, 2});
    return cat;
}

}  // namespace qup
