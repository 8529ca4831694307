// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qup-lab contributors

#include "qup/qup_suite.hpp"

#include <algorithm>
#include <cmath>

namespace qup {

namespace {

constexpr double kCutoff = 1e-6;  // lower omega limit of the admissibility integral

cplx spectrum_at(const Signal& f, double omega) {
    const Grid& g = f.grid();
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < g.n; ++i) acc += g.weight(i) * f[i] * std::polar(1.0, -omega * g.node(i));
    return acc;
}

double nyquist(const Signal& f) { return pi / f.grid().spacing(); }

void require_admissible(const Signal& mother) {
    const double nm = norm(mother);
    if (!(nm > 0.0)) throw Error(Errc::inadmissible_mother, "mother wavelet is zero");
    cplx mean{0.0, 0.0};
    for (std::size_t i = 0; i < mother.size(); ++i) mean += mother.grid().weight(i) * mother[i];
    if (std::abs(mean) >= 1e-8 * nm * std::sqrt(mother.grid().length())) {
        throw Error(Errc::inadmissible_mother, "mother wavelet has nonzero mean");
    }
}

// Integral of |mother^|^2 / xi over [lo, nyquist], in the variable ln(xi).
double log_band_energy(const Signal& mother, double lo) {
    const double hi = nyquist(mother);
    if (!(lo < hi)) return 0.0;
    const Grid v = make_grid(std::log(lo), std::log(hi), 4001);
    double acc = 0.0;
    for (std::size_t k = 0; k < v.n; ++k) acc += v.weight(k) * std::norm(spectrum_at(mother, std::exp(v.node(k))));
    return acc;
}

double cwt_row_weight(const Grid& log_scales, std::size_t j) {
    // ds / s^2 = d(ln s) / s
    return log_scales.weight(j) / std::exp(log_scales.node(j));
}

// Trapezoid weights of nodes lo..hi treated as their own grid.
double sub_weight(std::size_t i, std::size_t lo, std::size_t hi, double step) {
    if (lo == hi) return 0.0;
    return (i == lo || i == hi) ? 0.5 * step : step;
}

}  // namespace

double PlaneField::row_coordinate(std::size_t j) const {
    return log_scale ? std::exp(omega_grid.node(j)) : omega_grid.node(j);
}

double PlaneField::row_weight(std::size_t j) const {
    return log_scale ? omega_grid.weight(j) * std::exp(omega_grid.node(j)) : omega_grid.weight(j);
}

Grid log_scale_grid(double s_min, double s_max, std::size_t n) {
    if (!(s_min > 0.0) || !(s_max > s_min)) throw Error(Errc::invalid_range, "scales need 0 < s_min < s_max");
    return make_grid(std::log(s_min), std::log(s_max), static_cast<long long>(n));
}

double support_area(const PlaneField& field, double eps_rel) {
    if (!(eps_rel > 0.0 && eps_rel < 1.0)) throw Error(Errc::invalid_argument, "eps_rel must lie in (0, 1)");
    const double peak = field.values.cwiseAbs().maxCoeff();
    if (!(peak > 0.0)) return 0.0;
    double area = 0.0;
    for (Eigen::Index j = 0; j < field.values.rows(); ++j) {
        const double wr = field.row_weight(static_cast<std::size_t>(j));
        for (Eigen::Index k = 0; k < field.values.cols(); ++k) {
            if (std::abs(field.values(j, k)) > eps_rel * peak) area += wr * field.t_grid.weight(static_cast<std::size_t>(k));
        }
    }
    return area;
}

std::pair<double, double> heisenberg_centers(const Signal& f, const Grid& omega_window) {
    const Grid& g = f.grid();
    double m0 = 0.0, m1 = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        const double p = g.weight(i) * std::norm(f[i]);
        m0 += p;
        m1 += p * g.node(i);
    }
    if (!(m0 > 0.0)) throw Error(Errc::zero_signal, "signal is zero");
    const Signal fh = direct_transform(f, omega_window);
    double s0 = 0.0, s1 = 0.0;
    for (std::size_t j = 0; j < omega_window.n; ++j) {
        const double p = omega_window.weight(j) * std::norm(fh[j]);
        s0 += p;
        s1 += p * omega_window.node(j);
    }
    return {m1 / m0, s1 / s0};
}

double heisenberg_product(const Signal& f, double alpha, double beta, const Grid& omega_window) {
    const Grid& g = f.grid();
    double m0 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        const double p = g.weight(i) * std::norm(f[i]);
        m0 += p;
        m2 += p * (g.node(i) - alpha) * (g.node(i) - alpha);
    }
    if (!(m0 > 0.0)) throw Error(Errc::zero_signal, "signal is zero");
    const Signal fh = direct_transform(f, omega_window);
    double s0 = 0.0, s2 = 0.0;
    for (std::size_t j = 0; j < omega_window.n; ++j) {
        const double p = omega_window.weight(j) * std::norm(fh[j]);
        s0 += p;
        s2 += p * (omega_window.node(j) - beta) * (omega_window.node(j) - beta);
    }
    return (m2 / m0) * (s2 / s0);
}

PlaneField wigner(const Signal& f, const Grid& omega_grid) {
    const Grid& g = f.grid();
    if (std::abs(g.a + g.b) > 1e-9 * g.length()) throw Error(Errc::invalid_argument, "wigner needs a symmetric grid");
    const double d = g.spacing();
    PlaneField out{omega_grid, g, cmat::Zero(static_cast<Eigen::Index>(omega_grid.n), static_cast<Eigen::Index>(g.n)), false};
    const auto& v = f.values();
    std::vector<cplx> lag;
    for (std::size_t k = 0; k < g.n; ++k) {
        const std::size_t m_max = std::min(k, g.n - 1 - k);
        lag.assign(m_max + 1, cplx{});
        for (std::size_t m = 0; m <= m_max; ++m) lag[m] = v[k + m] * std::conj(v[k - m]);
        for (std::size_t j = 0; j < omega_grid.n; ++j) {
            // The -m lag is the conjugate of +m, so the sum is real.
            const cplx step = std::polar(1.0, -2.0 * d * omega_grid.node(j));
            cplx ph = step;
            double acc = lag[0].real();
            for (std::size_t m = 1; m <= m_max; ++m) {
                acc += 2.0 * (lag[m] * ph).real();
                ph *= step;
                if (m % 64 == 0) ph = std::polar(1.0, -2.0 * d * omega_grid.node(j) * static_cast<double>(m + 1));
            }
            out.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = 2.0 * d * acc;
        }
    }
    return out;
}

PlaneField gabor_transform(const Signal& f, const Signal& window, const Grid& omega_grid, const Grid& t_grid) {
    const double nw = norm(window);
    if (!(nw > 0.0)) throw Error(Errc::zero_window, "gabor window is zero");
    const Grid& g = f.grid();
    PlaneField out{omega_grid, t_grid, cmat::Zero(static_cast<Eigen::Index>(omega_grid.n), static_cast<Eigen::Index>(t_grid.n)), false};
    std::vector<cplx> prod(g.n);
    for (std::size_t k = 0; k < t_grid.n; ++k) {
        const double tau = t_grid.node(k);
        for (std::size_t i = 0; i < g.n; ++i) prod[i] = f[i] * std::conj(window.at_or_zero(g.node(i) - tau)) / nw;
        const Signal row = direct_transform(Signal(g, prod), omega_grid);
        for (std::size_t j = 0; j < omega_grid.n; ++j) out.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = row[j];
    }
    return out;
}

Signal gabor_inverse(const PlaneField& field, const Signal& window) {
    const double nw = norm(window);
    if (!(nw > 0.0)) throw Error(Errc::zero_window, "gabor window is zero");
    const Grid& x = field.t_grid;
    std::vector<cplx> out(x.n, cplx{});
    std::vector<cplx> col(field.omega_grid.n);
    for (std::size_t k = 0; k < x.n; ++k) {
        const double tau = x.node(k);
        for (std::size_t j = 0; j < field.omega_grid.n; ++j) col[j] = field.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
        const Signal synth = direct_transform(Signal(field.omega_grid, col), x, +1.0);
        const double wt = x.weight(k);
        for (std::size_t i = 0; i < x.n; ++i) out[i] += wt * (window.at_or_zero(x.node(i) - tau) / nw) * synth[i];
    }
    for (auto& v : out) v /= 2.0 * pi;
    return Signal(x, out);
}

double admissibility_constant(const Signal& mother) {
    require_admissible(mother);
    const double c = log_band_energy(mother, kCutoff);
    if (!std::isfinite(c) || !(c > 0.0)) throw Error(Errc::inadmissible_mother, "admissibility integral diverges");
    return c;
}

PlaneField cwt(const Signal& f, const Signal& mother, const Grid& log_scales, const Grid& u_grid) {
    require_admissible(mother);
    const Grid& g = f.grid();
    const double reach = std::max(std::abs(mother.grid().a), std::abs(mother.grid().b));
    PlaneField out{log_scales, u_grid, cmat::Zero(static_cast<Eigen::Index>(log_scales.n), static_cast<Eigen::Index>(u_grid.n)), true};
    for (std::size_t j = 0; j < log_scales.n; ++j) {
        const double s = std::exp(log_scales.node(j));
        const double amp = 1.0 / std::sqrt(s);
        for (std::size_t k = 0; k < u_grid.n; ++k) {
            const double u = u_grid.node(k);
            cplx acc{0.0, 0.0};
            for (std::size_t i = 0; i < g.n; ++i) {
                const double x = (g.node(i) - u) / s;
                if (std::abs(x) > reach) continue;
                acc += g.weight(i) * f[i] * std::conj(mother.at_or_zero(x));
            }
            out.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = amp * acc;
        }
    }
    return out;
}

namespace {

// sum over rows and u of weight * coeff * s^{-1/2} kernel((t - u) / s), on the u grid.
std::vector<cplx> synthesize_rows(const PlaneField& field, const Signal& kernel_fn, bool ds_over_s2) {
    const Grid& x = field.t_grid;
    const double reach = std::max(std::abs(kernel_fn.grid().a), std::abs(kernel_fn.grid().b));
    std::vector<cplx> out(x.n, cplx{});
    for (std::size_t j = 0; j < field.omega_grid.n; ++j) {
        const double s = std::exp(field.omega_grid.node(j));
        const double ws = ds_over_s2 ? cwt_row_weight(field.omega_grid, j) : 1.0;
        const double amp = ws / std::sqrt(s);
        for (std::size_t k = 0; k < x.n; ++k) {
            const cplx c = field.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) * x.weight(k) * amp;
            if (c == cplx{}) continue;
            const double u = x.node(k);
            for (std::size_t i = 0; i < x.n; ++i) {
                const double y = (x.node(i) - u) / s;
                if (std::abs(y) > reach) continue;
                out[i] += c * kernel_fn.at_or_zero(y);
            }
        }
    }
    return out;
}

}  // namespace

Signal cwt_inverse(const PlaneField& field, const Signal& mother) {
    if (!field.log_scale) throw Error(Errc::invalid_argument, "field has no scale axis");
    const double c = admissibility_constant(mother);
    auto out = synthesize_rows(field, mother, true);
    for (auto& v : out) v /= c;
    return Signal(field.t_grid, out);
}

double scaling_modulus(const Signal& mother, double omega) {
    require_admissible(mother);
    return std::sqrt(log_band_energy(mother, std::max(std::abs(omega), kCutoff)));
}

Signal scaling_function(const Signal& mother) {
    require_admissible(mother);
    // |phi^|^2 by a cumulative integral from the top of the band.
    const double top = nyquist(mother);
    const Grid w = make_grid(0.0, top, 4097);
    std::vector<double> dens(w.n, 0.0);
    for (std::size_t k = 1; k < w.n; ++k) dens[k] = std::norm(spectrum_at(mother, w.node(k))) / w.node(k);
    std::vector<double> mod(w.n, 0.0);
    double acc = 0.0;
    for (std::size_t k = w.n - 1; k-- > 0;) {
        acc += 0.5 * w.spacing() * (dens[k] + dens[k + 1]);
        mod[k] = std::sqrt(acc);
    }
    // phi(t) = (1 / pi) integral over omega > 0 of |phi^(omega)| cos(omega t).
    const Grid& g = mother.grid();
    std::vector<cplx> phi(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < w.n; ++k) s += w.weight(k) * mod[k] * std::cos(w.node(k) * g.node(i));
        phi[i] = s / pi;
    }
    return Signal(g, phi);
}

Signal low_pass(const Signal& f, const Signal& mother, double s0, const Grid& u_grid) {
    if (!(s0 > 0.0)) throw Error(Errc::invalid_argument, "scale must be positive");
    const Signal phi = scaling_function(mother);
    const Grid& g = f.grid();
    std::vector<cplx> out(u_grid.n);
    for (std::size_t k = 0; k < u_grid.n; ++k) {
        cplx acc{0.0, 0.0};
        for (std::size_t i = 0; i < g.n; ++i) {
            acc += g.weight(i) * f[i] * std::conj(phi.at_or_zero((g.node(i) - u_grid.node(k)) / s0));
        }
        out[k] = acc / std::sqrt(s0);
    }
    return Signal(u_grid, out);
}

Signal two_part_reconstruct(const PlaneField& fine, const Signal& low, const Signal& mother, double s0) {
    if (!fine.log_scale) throw Error(Errc::invalid_argument, "field has no scale axis");
    require_same_grid(fine.t_grid, low.grid());
    if (std::exp(fine.omega_grid.b) > s0 * (1.0 + 1e-9)) {
        throw Error(Errc::invalid_argument, "fine field extends beyond s0");
    }
    const double c = admissibility_constant(mother);
    auto out = synthesize_rows(fine, mother, true);
    PlaneField coarse{make_grid(std::log(s0), std::log(s0) + 1.0, 2), fine.t_grid,
                      cmat::Zero(2, static_cast<Eigen::Index>(fine.t_grid.n)), true};
    for (std::size_t k = 0; k < fine.t_grid.n; ++k) coarse.values(0, static_cast<Eigen::Index>(k)) = low[k];
    const auto tail = synthesize_rows(coarse, scaling_function(mother), false);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (out[i] + tail[i] / s0) / c;
    return Signal(fine.t_grid, out);
}

std::string to_string(QUPReport::Verdict v) {
    return v == QUPReport::Verdict::consistent ? "consistent-with-QUP" : "violation-demonstrated";
}

namespace {

// Measure of the rows |omega| <= W (or the scale band for cwt) above eps times the peak in that band.
double banded_measure(const PlaneField& field, double eps, const std::function<bool(double)>& in_band) {
    std::size_t lo = field.omega_grid.n, hi = 0;
    for (std::size_t j = 0; j < field.omega_grid.n; ++j) {
        if (in_band(field.row_coordinate(j))) {
            lo = std::min(lo, j);
            hi = std::max(hi, j);
        }
    }
    if (lo > hi) return 0.0;
    double peak = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) peak = std::max(peak, field.values.row(static_cast<Eigen::Index>(j)).cwiseAbs().maxCoeff());
    if (!(peak > 0.0)) return 0.0;
    const double step = field.omega_grid.spacing();
    double area = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) {
        double wr = sub_weight(j, lo, hi, step);
        if (field.log_scale) wr *= std::exp(field.omega_grid.node(j));
        for (Eigen::Index k = 0; k < field.values.cols(); ++k) {
            if (std::abs(field.values(static_cast<Eigen::Index>(j), k)) > eps * peak) {
                area += wr * (field.values.cols() == 1 ? 1.0 : field.t_grid.weight(static_cast<std::size_t>(k)));
            }
        }
    }
    return area;
}

}  // namespace

QUPReport qup_check(const Signal& f, const QupCheckParams& p, double eps_rel) {
    if (!(eps_rel > 0.0 && eps_rel < 1.0)) throw Error(Errc::invalid_argument, "eps_rel must lie in (0, 1)");
    if (!(norm(f) > 0.0)) throw Error(Errc::zero_signal, "signal is zero");
    if (!(p.window > 0.0) || p.doublings < 0) throw Error(Errc::invalid_argument, "window must be positive");
    const Grid& g = f.grid();
    QUPReport rep;
    rep.transform = p.transform;
    rep.eps_rel = eps_rel;
    rep.measure_time = support_measure(f, eps_rel).measure;

    const double w_max = p.window * std::pow(2.0, p.doublings);
    const double step0 = p.step > 0.0 ? p.step : pi / (4.0 * g.length());
    const auto n_half = static_cast<long long>(std::ceil(w_max / step0));

    PlaneField field;
    std::vector<double> bands;
    for (int k = 0; k <= p.doublings; ++k) bands.push_back(p.window * std::pow(2.0, k));
    std::function<bool(double, double)> inside = [](double x, double b) { return std::abs(x) <= b * (1.0 + 1e-12); };

    if (p.transform == "fourier" || p.transform == "kernel") {
        Grid om = make_grid(-w_max, w_max, 2 * n_half + 1);
        std::vector<cplx> vals;
        if (p.transform == "fourier") {
            vals = direct_transform(f, om).values();
        } else {
            if (!p.kernel) throw Error(Errc::invalid_argument, "kernel transform needs a kernel");
            if (auto d = p.kernel->omega_domain()) {
                const double lo = std::max(-w_max, d->first), hi = std::min(w_max, d->second);
                if (!(hi > lo)) throw Error(Errc::invalid_argument, "window misses the kernel domain");
                om = make_grid(lo, hi, static_cast<long long>(std::ceil((hi - lo) / step0)) + 1);
            }
            vals = apply(discretize(*p.kernel, om, g), f).values();
        }
        field = PlaneField{om, make_grid(0.0, 1.0, 2), cmat(static_cast<Eigen::Index>(om.n), 1), false};
        for (std::size_t j = 0; j < om.n; ++j) field.values(static_cast<Eigen::Index>(j), 0) = vals[j];
    } else if (p.transform == "wigner") {
        if (w_max > pi / (2.0 * g.spacing()) * (1.0 + 1e-12)) {
            throw Error(Errc::invalid_argument, "wigner window exceeds the lag Nyquist limit");
        }
        field = wigner(f, make_grid(-w_max, w_max, 2 * n_half + 1));
    } else if (p.transform == "gabor") {
        if (!p.gabor_window) throw Error(Errc::invalid_argument, "gabor transform needs a window");
        field = gabor_transform(f, *p.gabor_window, make_grid(-w_max, w_max, 2 * n_half + 1), g);
    } else if (p.transform == "cwt") {
        if (!p.mother) throw Error(Errc::invalid_argument, "cwt needs a mother wavelet");
        // Windows are scale bands [1 / W, W]; eight rows per octave.
        const auto rows = static_cast<std::size_t>(std::ceil(16.0 * std::log2(w_max))) + 1;
        field = cwt(f, *p.mother, log_scale_grid(1.0 / w_max, w_max, rows), g);
        inside = [](double s, double b) { return s >= (1.0 / b) * (1.0 - 1e-12) && s <= b * (1.0 + 1e-12); };
    } else {
        throw Error(Errc::invalid_argument, "unknown transform '" + p.transform + "'");
    }

    // A transform at round-off level is identically zero; thresholds relative to its peak mean nothing.
    rep.degenerate_witness = field.values.cwiseAbs().maxCoeff() <= 1e-13 * norm(f);
    for (double b : bands) {
        rep.window_measures.push_back(
            rep.degenerate_witness ? 0.0 : banded_measure(field, eps_rel, [&](double x) { return inside(x, b); }));
    }
    rep.tightened_measure = rep.degenerate_witness
                                ? 0.0
                                : banded_measure(field, eps_rel * 1e-3, [&](double x) { return inside(x, bands.back()); });
    rep.measure_transform = rep.window_measures.front();
    rep.product = rep.measure_time * rep.measure_transform;

    auto grows = [](double a, double b) { return a > 0.0 ? b > 1.05 * a : b > 0.0; };
    bool consistent = false;
    for (std::size_t k = 0; k + 2 < rep.window_measures.size(); ++k) {
        if (grows(rep.window_measures[k], rep.window_measures[k + 1]) &&
            grows(rep.window_measures[k + 1], rep.window_measures[k + 2])) {
            consistent = true;
        }
    }
    // A support that only looked bounded because of the threshold spreads when eps tightens.
    if (!consistent && grows(rep.window_measures.back(), rep.tightened_measure)) consistent = true;
    rep.verdict = consistent ? QUPReport::Verdict::consistent : QUPReport::Verdict::violation;
    return rep;
}

QUPReport qup_violation_demo(double j_lo, double j_hi, DemoWitness witness, double eps_rel) {
    if (!(j_hi > j_lo)) throw Error(Errc::invalid_range, "interval J must have positive length");
    const Grid t = make_grid(-4.0, 4.0, 1601);
    auto bump = [](double x, double c, double r) {
        const double y = (x - c) / r;
        return std::abs(y) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - y * y)) : 0.0;
    };
    Signal h, f;
    switch (witness) {
        case DemoWitness::gaussian_triangle:
            h = sample(t, [&](double x) { return cplx(bump(x, 0.0, 1.0)); });
            f = sample(t, [](double x) { return cplx(std::max(0.0, 1.0 - std::abs(x))); });
            break;
        case DemoWitness::orthogonal:
            h = sample(t, [&](double x) { return cplx(bump(x, 0.0, 1.0)); });
            f = sample(t, [](double x) { return cplx(std::abs(x) < 1.0 ? x * (1.0 - x * x) : 0.0); });
            break;
        case DemoWitness::cosine_gap:
            // Even f living in the gap 2 < |t| < 3, tested against cos t on [-pi, pi].
            h = sample(t, [](double x) { return cplx(std::abs(x) <= pi ? std::cos(x) : 0.0); });
            f = sample(t, [&](double x) { return cplx(bump(x, 2.5, 0.5) + bump(x, -2.5, 0.5)); });
            break;
    }
    kernel::SeparableRank k;
    k.terms.push_back({1.0, Profile([j_lo, j_hi](double w) { return cplx(w >= j_lo && w <= j_hi ? 1.0 : 0.0); }, "chi_J"), h});
    QupCheckParams p;
    p.transform = "kernel";
    p.kernel = KernelSpec(k);
    p.window = std::max(std::abs(j_lo), std::abs(j_hi)) + 1.0;
    p.doublings = 2;
    p.step = 2e-3 * (j_hi - j_lo);
    return qup_check(f, p, eps_rel);
}

}  // namespace qup
