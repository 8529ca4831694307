// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qup-lab contributors

#include "qup/op_family.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "qup/linalg.hpp"

namespace qup {

std::string to_string(AtomKind k) {
    switch (k) {
        case AtomKind::fourier: return "fourier";
        case AtomKind::chirp: return "chirp";
        case AtomKind::gabor: return "gabor";
    }
    return "";
}

namespace {

std::size_t arity(AtomKind k) { return k == AtomKind::gabor ? 3 : 1; }

}  // namespace

Atom make_atom(AtomKind kind, std::vector<double> params, const Grid& grid) {
    if (params.size() != arity(kind)) throw Error(Errc::invalid_argument, "wrong parameter count for atom");
    Signal s;
    switch (kind) {
        case AtomKind::fourier: s = sample(grid, [&](double t) { return std::polar(1.0, params[0] * t); }); break;
        case AtomKind::chirp: s = sample(grid, [&](double t) { return std::polar(1.0, params[0] * t * t); }); break;
        case AtomKind::gabor: {
            if (!(params[2] > 0.0)) throw Error(Errc::invalid_argument, "gabor width must be positive");
            s = sample(grid, [&](double t) {
                const double u = (t - params[1]) / params[2];
                return std::polar(std::exp(-0.5 * u * u), params[0] * t);
            });
            break;
        }
    }
    const double n = norm(s);
    if (!(n > 0.0)) throw Error(Errc::zero_signal, "atom vanishes on the grid");
    return Atom{kind, std::move(params), Signal::from_vector(grid, s.to_vector() / n)};
}

std::size_t Dictionary::size() const {
    std::size_t total = 0;
    for (const auto& g : generators) {
        std::size_t c = 1;
        for (const auto& p : g.param_grids) c *= p.n;
        total += c;
    }
    return total;
}

std::pair<AtomKind, std::vector<double>> Dictionary::atom_params(std::size_t index) const {
    for (const auto& g : generators) {
        std::size_t c = 1;
        for (const auto& p : g.param_grids) c *= p.n;
        if (index >= c) {
            index -= c;
            continue;
        }
        std::vector<double> params(g.param_grids.size());
        for (std::size_t k = g.param_grids.size(); k-- > 0;) {
            params[k] = g.param_grids[k].node(index % g.param_grids[k].n);
            index /= g.param_grids[k].n;
        }
        return {g.kind, params};
    }
    throw Error(Errc::invalid_argument, "atom index out of range");
}

Dictionary fourier_dictionary(const Grid& lambdas) { return Dictionary{{AtomGenerator{AtomKind::fourier, {lambdas}}}}; }
Dictionary chirp_dictionary(const Grid& betas) { return Dictionary{{AtomGenerator{AtomKind::chirp, {betas}}}}; }
Dictionary gabor_dictionary(const Grid& omegas, const Grid& centers, const Grid& sigmas) {
    return Dictionary{{AtomGenerator{AtomKind::gabor, {omegas, centers, sigmas}}}};
}

Dictionary merge(const Dictionary& a, const Dictionary& b) {
    Dictionary out = a;
    out.generators.insert(out.generators.end(), b.generators.begin(), b.generators.end());
    return out;
}

double Decomposition::relative_residual() const {
    if (residual_norms.empty() || !(signal_norm > 0.0)) return 0.0;
    return residual_norms.back() / signal_norm;
}

namespace {

// Parameter spacing of the generator that produced `params` (0 for single-node grids).
std::vector<double> spacings(const Dictionary& dict, AtomKind kind, const std::vector<double>& params) {
    for (const auto& g : dict.generators) {
        if (g.kind != kind) continue;
        bool inside = true;
        for (std::size_t k = 0; k < params.size(); ++k) {
            inside = inside && params[k] >= g.param_grids[k].a - 1e-12 && params[k] <= g.param_grids[k].b + 1e-12;
        }
        if (!inside) continue;
        std::vector<double> h;
        for (const auto& p : g.param_grids) h.push_back(p.n > 1 ? p.spacing() : 0.0);
        return h;
    }
    return std::vector<double>(params.size(), 0.0);
}

}  // namespace

Decomposition matching_pursuit(const Signal& f, const Dictionary& dict, int max_atoms, double residual_tol) {
    if (dict.generators.empty() || dict.size() == 0) throw Error(Errc::empty_dictionary, "dictionary has no atoms");
    if (max_atoms < 0) throw Error(Errc::invalid_argument, "atom budget must be >= 0");
    const Grid& g = f.grid();
    Decomposition dec;
    dec.signal_norm = norm(f);
    if (!(dec.signal_norm > 0.0)) {
        dec.stop_reason = "zero-signal";
        return dec;
    }

    const std::size_t total = dict.size();
    std::vector<Atom> atoms;
    atoms.reserve(total);
    for (std::size_t k = 0; k < total; ++k) {
        auto [kind, params] = dict.atom_params(k);
        atoms.push_back(make_atom(kind, std::move(params), g));
    }

    const rvec sw = sqrt_weights(g);
    const cvec target = sw.asDiagonal() * f.to_vector();
    Signal residual = f;
    dec.stop_reason = "max-atoms";
    while (static_cast<int>(dec.atoms.size()) < max_atoms) {
        if (norm(residual) < residual_tol * dec.signal_norm) {
            dec.stop_reason = "residual-tol";
            break;
        }
        std::size_t best = 0;
        double best_c = -1.0;
        for (std::size_t k = 0; k < total; ++k) {
            const double c = std::abs(inner(residual, atoms[k].samples));
            if (c > best_c) {
                best_c = c;
                best = k;
            }
        }
        if (!(best_c > 1e-14 * dec.signal_norm)) {
            dec.stop_reason = "no-correlation";
            break;
        }
        // One refinement level at half the grid spacing, every parameter jointly.
        Atom pick = atoms[best];
        const auto h = spacings(dict, pick.kind, pick.params);
        const std::size_t np = pick.params.size();
        std::size_t combos = 1;
        for (std::size_t k = 0; k < np; ++k) combos *= 3;
        for (std::size_t code = 0; code < combos; ++code) {
            std::vector<double> p = pick.params;
            std::size_t c = code;
            bool moved = false;
            for (std::size_t k = 0; k < np; ++k) {
                const int step = static_cast<int>(c % 3) - 1;
                c /= 3;
                if (step != 0 && h[k] > 0.0) {
                    p[k] = atoms[best].params[k] + 0.5 * step * h[k];
                    moved = true;
                }
            }
            if (!moved) continue;
            if (pick.kind == AtomKind::gabor && !(p[2] > 0.0)) continue;
            Atom cand = make_atom(pick.kind, p, g);
            const double cc = std::abs(inner(residual, cand.samples));
            if (cc > best_c * (1.0 + 1e-12)) {
                best_c = cc;
                pick = std::move(cand);
            }
        }
        const cplx proj = inner(residual, pick.samples);
        dec.greedy_residual_norms.push_back(norm(Signal::from_vector(g, residual.to_vector() - proj * pick.samples.to_vector())));
        dec.atoms.push_back(std::move(pick));

        // Joint least-squares refit.
        cmat S(static_cast<Eigen::Index>(g.n), static_cast<Eigen::Index>(dec.atoms.size()));
        for (std::size_t j = 0; j < dec.atoms.size(); ++j) {
            S.col(static_cast<Eigen::Index>(j)) = sw.asDiagonal() * dec.atoms[j].samples.to_vector();
        }
        const cvec coef = S.colPivHouseholderQr().solve(target);
        dec.coefficients.assign(coef.data(), coef.data() + coef.size());
        const cvec r = target - S * coef;
        residual = Signal::from_vector(g, r.cwiseQuotient(sw.cast<cplx>()));
        dec.residual_norms.push_back(r.norm());
    }
    if (dec.stop_reason == "max-atoms" && !dec.residual_norms.empty() &&
        dec.residual_norms.back() < residual_tol * dec.signal_norm) {
        dec.stop_reason = "residual-tol";
    }
    return dec;
}

PronyResult prony(const Signal& samples, int m) {
    const Grid& g = samples.grid();
    if (m < 1) throw Error(Errc::invalid_argument, "model order must be >= 1");
    if (g.n < static_cast<std::size_t>(2 * m)) throw Error(Errc::invalid_argument, "need at least 2m samples");
    const double dt = g.spacing();
    const auto rows = static_cast<Eigen::Index>(g.n) - m;
    // f_{k+m} + p_{m-1} f_{k+m-1} + ... + p_0 f_k = 0 over every window.
    cmat H(rows, m);
    cvec rhs(rows);
    for (Eigen::Index k = 0; k < rows; ++k) {
        for (int j = 0; j < m; ++j) H(k, j) = samples[static_cast<std::size_t>(k + j)];
        rhs(k) = -samples[static_cast<std::size_t>(k + m)];
    }
    PronyResult out;
    const rvec sv = singular_values(H);
    out.hankel_condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
    if (!(out.hankel_condition <= 1e12)) throw Error(Errc::ill_conditioned, "Hankel system condition above 1e12");
    const cvec p = H.colPivHouseholderQr().solve(rhs);

    cmat comp = cmat::Zero(m, m);
    for (int i = 1; i < m; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < m; ++i) comp(i, m - 1) = -p(i);
    Eigen::ComplexEigenSolver<cmat> es(comp);
    std::vector<double> lam;
    for (int i = 0; i < m; ++i) lam.push_back(std::arg(es.eigenvalues()(i)) / dt);
    std::sort(lam.begin(), lam.end());

    cmat V(static_cast<Eigen::Index>(g.n), m);
    for (std::size_t k = 0; k < g.n; ++k) {
        for (int j = 0; j < m; ++j) V(static_cast<Eigen::Index>(k), j) = std::polar(1.0, lam[static_cast<std::size_t>(j)] * g.node(k));
    }
    const cvec a = V.colPivHouseholderQr().solve(samples.to_vector());
    out.frequencies = lam;
    out.amplitudes.assign(a.data(), a.data() + a.size());
    for (const auto& v : out.amplitudes) out.spurious.push_back(std::abs(v) < 1e-8);
    return out;
}

FamilyChoice family_decompose(const Signal& f, const std::vector<Dictionary>& families, int budget,
                              double residual_tol) {
    if (families.empty()) throw Error(Errc::invalid_argument, "no families given");
    FamilyChoice best;
    bool have = false;
    for (std::size_t k = 0; k < families.size(); ++k) {
        Decomposition d = matching_pursuit(f, families[k], budget, residual_tol);
        const double r = d.relative_residual();
        best.residuals.push_back(r);
        if (!have) {
            best.index = k;
            best.decomposition = std::move(d);
            have = true;
            continue;
        }
        const double cur = best.decomposition.relative_residual();
        const double tie = 1e-12;
        const bool better = r < cur - tie ||
                            (std::abs(r - cur) <= tie && d.atoms.size() < best.decomposition.atoms.size());
        if (better) {
            best.index = k;
            best.decomposition = std::move(d);
        }
    }
    return best;
}

std::string to_string(LimitCheckReport::Verdict v) {
    return v == LimitCheckReport::Verdict::consistent ? "consistent" : "counterexample-found";
}

LimitCheckReport qup_limit_check(const DiscreteOperator& op, const std::vector<double>& probes, double j_lo,
                                 double j_hi, double tol, double eps) {
    if (!(j_hi > j_lo)) throw Error(Errc::invalid_range, "J must have positive length");
    const Grid& t = op.t_grid;
    const Grid& w = op.omega_grid;
    cmat P(static_cast<Eigen::Index>(t.n), static_cast<Eigen::Index>(probes.size()));
    for (std::size_t j = 0; j < probes.size(); ++j) {
        for (std::size_t i = 0; i < t.n; ++i) {
            P(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::polar(1.0, probes[j] * t.node(i));
        }
    }
    const cmat weighted = sqrt_weights(t).asDiagonal() * P;
    if (probes.empty() || numerical_rank(weighted, 1e-10) < static_cast<int>(t.n)) {
        throw Error(Errc::probes_not_complete, "probes do not span the t-side");
    }

    auto outside = [&](std::size_t j) { return w.node(j) < j_lo || w.node(j) > j_hi; };
    const cmat images = op.entries * t.weights().asDiagonal() * P;  // column j = image of probe j
    LimitCheckReport rep;
    rep.hypothesis_met = true;
    for (Eigen::Index c = 0; c < images.cols(); ++c) {
        const double peak = images.col(c).cwiseAbs().maxCoeff();
        double leak = 0.0;
        for (std::size_t j = 0; j < w.n; ++j) {
            if (outside(j)) leak = std::max(leak, std::abs(images(static_cast<Eigen::Index>(j), c)));
        }
        const double rel = peak > 0.0 ? leak / peak : 0.0;
        rep.worst_image_leak = std::max(rep.worst_image_leak, rel);
        if (rel > eps) rep.hypothesis_met = false;
    }

    double total = 0.0, out_e = 0.0;
    std::vector<double> row_e(w.n);
    for (std::size_t j = 0; j < w.n; ++j) {
        double e = 0.0;
        for (std::size_t i = 0; i < t.n; ++i) {
            e += t.weight(i) * std::norm(op.entries(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)));
        }
        row_e[j] = w.weight(j) * e;
        total += row_e[j];
        if (outside(j)) out_e += row_e[j];
    }
    rep.outside_energy = total > 0.0 ? out_e / total : 0.0;

    if (rep.hypothesis_met && rep.outside_energy >= tol) {
        rep.verdict = LimitCheckReport::Verdict::counterexample_found;
        for (std::size_t j = 0; j < w.n; ++j) {
            if (outside(j) && row_e[j] > 0.0) rep.offending_rows.push_back(w.node(j));
        }
        rep.note = "images fall below eps outside J while the rows there carry energy; confinement is judged at the "
                   "given eps on a discretized operator";
    } else if (!rep.hypothesis_met) {
        rep.note = "hypothesis unmet: some probe image is not eps-confined to J";
    } else {
        rep.note = "images confined and kernel rows outside J below tol";
    }
    return rep;
}

}  // namespace qup
