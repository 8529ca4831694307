// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qup-lab contributors

#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "qup/complete_points.hpp"
#include "qup/density_frames.hpp"
#include "qup/io.hpp"
#include "qup/op_family.hpp"
#include "qup/perturbation.hpp"
#include "qup/qup_suite.hpp"

namespace qup::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// Raised for anything wrong with the inputs; maps to exit status 2.
struct Invalid : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json num(double x) {
    if (std::isfinite(x)) return x;
    return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

json nums(const std::vector<double>& xs) {
    json a = json::array();
    for (double x : xs) a.push_back(num(x));
    return a;
}

struct Context {
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    std::string config_path;
    json resolved;  // every option after config merge
};

template <class F>
auto validate(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        throw Invalid(e.what());
    } catch (const Invalid&) {
        throw;
    } catch (const std::exception& e) {
        throw Invalid(e.what());
    }
}

fs::path existing(const std::string& p, const char* what) {
    if (p.empty()) throw Invalid(std::string("missing ") + what + " path");
    if (!fs::exists(p)) throw Invalid(std::string(what) + " file not found: " + p);
    return p;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::io, "cannot write " + path.string());
    out << text;
}

void write_report(const Context& ctx, const std::string& command, const std::string& file, json report,
                  std::ostream& out) {
    json doc;
    doc["command"] = command;
    doc["seed"] = ctx.seed;
    doc["config"] = ctx.resolved;
    doc["report"] = std::move(report);
    const fs::path path = fs::path(ctx.out_dir) / file;
    write_text(path, doc.dump(2) + "\n");
    out << "wrote " << path.string() << "\n";
}

// --- subcommand option holders ---

struct TransformOpts {
    std::string kernel, signal, omega;
};
struct ScanOpts {
    std::string kernel, omega, radii, t = "-1:1:41";
    std::size_t n_omega = 201;
};
struct QupOpts {
    std::string signal, transform = "fourier", kernel, gabor_window, mother;
    double eps = 1e-3, window = 200.0, step = 0.0;
    int windows = 3;
};
struct DensityOpts {
    std::string points, radii, interval;
    double R = 0.0;
    int N = 16;
};
struct PerturbOpts {
    std::string base, perturbed, frame_bounds;
    int trials = 100;
};
struct DecomposeOpts {
    std::string signal;
    std::vector<std::string> dicts;
    int atoms = 5;
    double tol = 1e-3;
    std::string lambda = "-4:4:81", beta = "-1:1:41", gabor_omega = "-4:4:17", gabor_center = "-8:8:17",
                gabor_sigma = "0.5:2:4";
};
struct IndependenceOpts {
    std::string family, t0;
    double sigma = 0.05;
    int candidates = 33;
};

int do_transform(const TransformOpts& o, const Context& ctx, std::ostream& out) {
    const auto [kernel, f, omega] = validate([&] {
        return std::make_tuple(read_kernel_json(existing(o.kernel, "kernel")), read_signal_csv(existing(o.signal, "signal")),
                               parse_grid(o.omega));
    });
    const Signal fh = apply(discretize(kernel, omega, f.grid()), f);
    write_signal_csv(fs::path(ctx.out_dir) / "transform.csv", fh, "omega");
    json r;
    r["kernel"] = kernel.name();
    r["n_omega"] = omega.n;
    r["n_t"] = f.grid().n;
    r["signal_norm"] = num(norm(f));
    r["transform_norm"] = num(norm(fh));
    write_report(ctx, "transform", "transform.json", r, out);
    return 0;
}

int do_scan(const ScanOpts& o, const Context& ctx, std::ostream& out) {
    const auto [kernel, omega, radii, t] = validate([&] {
        return std::make_tuple(read_kernel_json(existing(o.kernel, "kernel")), parse_grid(o.omega), parse_list(o.radii),
                               parse_grid(o.t));
    });
    std::vector<double> omegas;
    for (std::size_t j = 0; j < omega.n; ++j) omegas.push_back(omega.node(j));
    ClassifyOptions copts;
    copts.n_omega = o.n_omega;
    const auto reports = scan_points(kernel, omegas, radii, t, copts);

    // Family over omega: one member per t node, sampled on the scan grid.
    std::vector<Signal> members;
    for (std::size_t i = 0; i < t.n; ++i) {
        members.push_back(sample(omega, [&](double w) { return kernel(w, t.node(i)); }));
    }
    const FunctionFamily fam = make_family(std::move(members));

    std::string csv = "omega0,verdict,regular,stable,trivial,A_min,B_max,I_radius\n";
    json rows = json::array();
    for (const auto& r : reports) {
        double ir = 0.0;
        try {
            ir = independent_radius(fam, r.omega0);
        } catch (const Error& e) {
            if (e.code() != Errc::never_independent) throw;
            ir = std::numeric_limits<double>::infinity();
        }
        csv += format_real(r.omega0) + "," + to_string(r.verdict) + "," + to_string(r.regularity) + "," +
               to_string(r.stability) + "," + (r.trivial ? "true" : "false") + "," + format_real(r.min_A()) + "," +
               format_real(r.max_B()) + "," + format_real(ir) + "\n";
        rows.push_back({{"omega0", num(r.omega0)}, {"verdict", to_string(r.verdict)}, {"I_radius", num(ir)}});
    }
    write_text(fs::path(ctx.out_dir) / "scan_cp.csv", csv);
    json rep;
    rep["kernel"] = kernel.name();
    rep["points"] = rows;
    write_report(ctx, "scan-cp", "scan_cp.json", rep, out);
    return 0;
}

int do_qup(const QupOpts& o, const Context& ctx, std::ostream& out) {
    const auto [f, params] = validate([&] {
        QupCheckParams p;
        p.transform = o.transform;
        p.window = o.window;
        p.doublings = o.windows;
        p.step = o.step;
        if (o.transform == "kernel") p.kernel = read_kernel_json(existing(o.kernel, "kernel"));
        if (o.transform == "gabor") p.gabor_window = read_signal_csv(existing(o.gabor_window, "gabor window"));
        if (o.transform == "cwt") p.mother = read_signal_csv(existing(o.mother, "mother wavelet"));
        if (!(o.eps > 0.0 && o.eps < 1.0)) throw Invalid("eps must lie in (0, 1)");
        return std::make_pair(read_signal_csv(existing(o.signal, "signal")), p);
    });
    const QUPReport r = qup_check(f, params, o.eps);
    std::string csv = "window,measure\n";
    double w = params.window;
    for (double m : r.window_measures) {
        csv += format_real(w) + "," + format_real(m) + "\n";
        w *= 2.0;
    }
    write_text(fs::path(ctx.out_dir) / "window_measures.csv", csv);
    json rep;
    rep["transform"] = r.transform;
    rep["eps_rel"] = num(r.eps_rel);
    rep["measure_time"] = num(r.measure_time);
    rep["measure_transform"] = num(r.measure_transform);
    rep["product"] = num(r.product);
    rep["verdict"] = to_string(r.verdict);
    rep["window_measures"] = nums(r.window_measures);
    rep["tightened_measure"] = num(r.tightened_measure);
    rep["degenerate_witness"] = r.degenerate_witness;
    write_report(ctx, "qup-check", "qup_report.json", rep, out);
    return 0;
}

int do_density(const DensityOpts& o, const Context& ctx, std::ostream& out) {
    const auto [pts, radii, interval] = validate([&] {
        std::optional<double> R;
        if (o.R > 0.0) R = o.R;
        std::vector<double> iv;
        if (!o.interval.empty()) {
            iv = parse_list(o.interval);
            if (iv.size() != 2 || !(iv[1] > iv[0])) throw Invalid("--interval must be a,b with a < b");
        }
        return std::make_tuple(read_point_set(existing(o.points, "point set"), R), parse_list(o.radii), iv);
    });
    const DensityReport d = beurling_densities(pts, radii);
    json rep;
    rep["d_minus"] = num(d.d_minus);
    rep["d_plus"] = num(d.d_plus);
    rep["separation"] = num(d.separation);
    rep["r_max"] = num(d.r_max);
    rep["radii"] = nums(d.radii);
    rep["n_minus"] = d.n_minus;
    rep["n_plus"] = d.n_plus;
    if (!interval.empty()) {
        const auto ft = exponential_frame_test(pts, interval[0], interval[1], o.N);
        rep["frame_test"] = {{"N", ft.N},
                             {"A", num(ft.bounds.A)},
                             {"B", num(ft.bounds.B)},
                             {"A_coarse", num(ft.A_coarse)},
                             {"verdict", to_string(ft.verdict)}};
    }
    write_report(ctx, "density", "density.json", rep, out);
    return 0;
}

json verdict_json(const PerturbationVerdict& v) {
    json j;
    j["lambda_estimate"] = num(v.lambda_estimate);
    j["lambda_exact"] = v.lambda_exact ? num(*v.lambda_exact) : json(nullptr);
    j["criterion"] = num(v.criterion);
    j["verdict"] = to_string(v.verdict);
    if (v.new_A) j["new_A"] = num(*v.new_A);
    if (v.new_B) j["new_B"] = num(*v.new_B);
    if (v.new_B_minus_sign) j["new_B_minus_sign"] = num(*v.new_B_minus_sign);
    return j;
}

int do_perturb(const PerturbOpts& o, const Context& ctx, std::ostream& out) {
    const auto [base, pert, bounds] = validate([&] {
        std::vector<double> ab;
        if (!o.frame_bounds.empty()) {
            ab = parse_list(o.frame_bounds);
            if (ab.size() != 2) throw Invalid("--frame-bounds must be A,B");
        }
        if (o.trials < 1) throw Invalid("--trials must be >= 1");
        auto b = read_family_csv(existing(o.base, "base family"));
        auto p = read_family_csv(existing(o.perturbed, "perturbed family"));
        if (b.size() != p.size()) throw Invalid("families differ in length: " + std::to_string(b.size()) + " vs " + std::to_string(p.size()));
        return std::make_tuple(b, p, ab);
    });
    json rep;
    rep["paley_wiener"] = verdict_json(paley_wiener_test(base, pert, o.trials, ctx.seed));
    if (!bounds.empty()) rep["frame"] = verdict_json(frame_perturb_test(base, pert, bounds[0], bounds[1]));
    write_report(ctx, "perturb", "perturb.json", rep, out);
    return 0;
}

int do_decompose(const DecomposeOpts& o, const Context& ctx, std::ostream& out) {
    const auto [f, dict] = validate([&] {
        Dictionary d;
        const auto names = o.dicts.empty() ? std::vector<std::string>{"fourier"} : o.dicts;
        for (const auto& n : names) {
            if (n == "fourier") {
                d = merge(d, fourier_dictionary(parse_grid(o.lambda)));
            } else if (n == "chirp") {
                d = merge(d, chirp_dictionary(parse_grid(o.beta)));
            } else if (n == "gabor") {
                d = merge(d, gabor_dictionary(parse_grid(o.gabor_omega), parse_grid(o.gabor_center), parse_grid(o.gabor_sigma)));
            } else {
                throw Invalid("unknown dictionary '" + n + "' (fourier, chirp, gabor)");
            }
        }
        if (o.atoms < 0) throw Invalid("--atoms must be >= 0");
        return std::make_pair(read_signal_csv(existing(o.signal, "signal")), d);
    });
    const Decomposition dec = matching_pursuit(f, dict, o.atoms, o.tol);
    std::string csv = "iteration,residual,greedy_residual\n";
    json atoms = json::array();
    for (std::size_t k = 0; k < dec.atoms.size(); ++k) {
        csv += std::to_string(k + 1) + "," + format_real(dec.residual_norms[k]) + "," +
               format_real(dec.greedy_residual_norms[k]) + "\n";
        atoms.push_back({{"kind", to_string(dec.atoms[k].kind)},
                         {"params", nums(dec.atoms[k].params)},
                         {"re", num(dec.coefficients[k].real())},
                         {"im", num(dec.coefficients[k].imag())}});
    }
    write_text(fs::path(ctx.out_dir) / "residuals.csv", csv);
    json rep;
    rep["rule"] = "greedy pursuit, least-squares refit";
    rep["atoms"] = atoms;
    rep["residual_norms"] = nums(dec.residual_norms);
    rep["relative_residual"] = num(dec.relative_residual());
    rep["stop_reason"] = dec.stop_reason;
    write_report(ctx, "decompose", "decomposition.json", rep, out);
    return 0;
}

int do_independence(const IndependenceOpts& o, const Context& ctx, std::ostream& out) {
    const auto [fam, h, cands] = validate([&] {
        auto fam = read_family_csv(existing(o.family, "family"));
        const Mollifier h = make_mollifier(o.sigma);
        std::vector<double> c;
        if (!o.t0.empty()) {
            c = parse_list(o.t0);
        } else {
            const double lo = fam.grid().a + h.support(), hi = fam.grid().b - h.support();
            if (!(hi > lo)) throw Invalid("grid too short for the mollifier support");
            if (o.candidates < 1) throw Invalid("--candidates must be >= 1");
            for (int k = 0; k < o.candidates; ++k) {
                c.push_back(o.candidates == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * k / (o.candidates - 1));
            }
        }
        return std::make_tuple(fam, h, c);
    });
    const WronskianScan scan = wronskian_scan(fam, h, cands);
    const Interpolants dfs = dfs_rank_and_interpolants(fam);
    json rep;
    const char* names[] = {"independent", "dependent", "inconclusive"};
    rep["members"] = fam.size();
    rep["wronskian_verdict"] = names[static_cast<int>(scan.verdict)];
    rep["best_t0"] = num(scan.best_t0);
    rep["best_ratio"] = num(scan.best_ratio);
    rep["sampling_rank"] = dfs.m;
    rep["sampling_points"] = nums(dfs.points);
    write_report(ctx, "independence", "independence.json", rep, out);
    return 0;
}

// Splices config-file values in as flags, unless the same flag is on the command line.
std::vector<std::string> merge_config(const std::vector<std::string>& args, const std::string& path,
                                      const CLI::App& app) {
    std::ifstream in(path);
    if (!in) throw Invalid("config file not found: " + path);
    nlohmann::json cfg;
    try {
        cfg = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Invalid("config " + path + ": " + e.what());
    }
    if (!cfg.is_object()) throw Invalid("config " + path + ": top level must be an object");

    const CLI::App* sub = nullptr;
    for (const auto& a : args) {
        for (const auto* s : app.get_subcommands([](const CLI::App*) { return true; })) {
            if (s->get_name() == a) sub = s;
        }
        if (sub) break;
    }
    auto given = [&](const std::string& flag) {
        for (const auto& a : args) {
            if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
        }
        return false;
    };
    std::vector<std::string> extra;
    for (const auto& [key, val] : cfg.items()) {
        const std::string flag = "--" + key;
        const bool known = app.get_option_no_throw(flag) != nullptr || (sub && sub->get_option_no_throw(flag) != nullptr);
        if (!known) throw Invalid("config " + path + ": field '" + key + "' is not an option of this command");
        if (key == "config" || given(flag)) continue;
        auto scalar = [&](const nlohmann::json& v) -> std::string {
            if (v.is_string()) return v.get<std::string>();
            if (v.is_number_integer()) return std::to_string(v.get<long long>());
            if (v.is_number()) return format_real(v.get<double>());
            if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
            throw Invalid("config " + path + ": field '" + key + "' must be a scalar or a list of scalars");
        };
        if (val.is_array()) {
            for (const auto& v : val) {
                extra.push_back(flag);
                extra.push_back(scalar(v));
            }
        } else {
            extra.push_back(flag);
            extra.push_back(scalar(val));
        }
    }
    std::vector<std::string> merged = args;
    merged.insert(merged.end(), extra.begin(), extra.end());
    return merged;
}

json resolved_options(const CLI::App& app, const CLI::App* sub) {
    json j;
    auto add = [&](const CLI::App& a) {
        for (const auto* opt : a.get_options()) {
            const std::string name = opt->get_single_name();
            if (name.empty() || name == "help" || name == "config") continue;
            const auto res = opt->results();
            if (res.empty()) {
                const std::string def = opt->get_default_str();
                j[name] = def;
            } else if (res.size() == 1) {
                j[name] = res.front();
            } else {
                j[name] = res;
            }
        }
    };
    add(app);
    if (sub) add(*sub);
    return j;
}

}  // namespace

int run(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
    CLI::App app{"qup-lab: complete points, uncertainty and frame diagnostics", "qup_lab"};
    app.require_subcommand(1);
    app.fallthrough();
    Context ctx;
    app.add_option("--seed", ctx.seed, "Seed for randomized steps")->capture_default_str();
    app.add_option("--out", ctx.out_dir, "Output directory")->capture_default_str();
    app.add_option("--config", ctx.config_path, "JSON file of option values; flags override it");

    TransformOpts tr;
    auto* s_tr = app.add_subcommand("transform", "Apply a kernel to a signal");
    s_tr->add_option("--kernel", tr.kernel, "Kernel JSON")->required();
    s_tr->add_option("--signal", tr.signal, "Signal CSV")->required();
    s_tr->add_option("--omega", tr.omega, "Omega grid a:b:n")->required();

    ScanOpts sc;
    auto* s_sc = app.add_subcommand("scan-cp", "Classify complete points over an omega grid");
    s_sc->add_option("--kernel", sc.kernel, "Kernel JSON")->required();
    s_sc->add_option("--omega", sc.omega, "Scan grid a:b:n")->required();
    s_sc->add_option("--radii", sc.radii, "Decreasing radii r1,r2,...")->required();
    s_sc->add_option("--t", sc.t, "t-grid a:b:n")->capture_default_str();
    s_sc->add_option("--n-omega", sc.n_omega, "Samples per neighborhood")->capture_default_str();

    QupOpts qo;
    auto* s_q = app.add_subcommand("qup-check", "Epsilon-support measures of a signal and its transform");
    s_q->add_option("--signal", qo.signal, "Signal CSV")->required();
    s_q->add_option("--transform", qo.transform, "fourier | kernel | wigner | gabor | cwt")
        ->check(CLI::IsMember({"fourier", "kernel", "wigner", "gabor", "cwt"}))
        ->capture_default_str();
    s_q->add_option("--eps", qo.eps, "Relative threshold")->capture_default_str();
    s_q->add_option("--windows", qo.windows, "Window doublings")->capture_default_str();
    s_q->add_option("--window", qo.window, "First window half-width (cwt: scale ratio)")->capture_default_str();
    s_q->add_option("--step", qo.step, "Omega step, 0 for automatic")->capture_default_str();
    s_q->add_option("--kernel", qo.kernel, "Kernel JSON for --transform kernel");
    s_q->add_option("--gabor-window", qo.gabor_window, "Window CSV for --transform gabor");
    s_q->add_option("--mother", qo.mother, "Mother wavelet CSV for --transform cwt");

    DensityOpts dn;
    auto* s_d = app.add_subcommand("density", "Beurling densities and exponential frame test");
    s_d->add_option("--points", dn.points, "Point set file")->required();
    s_d->add_option("--radii", dn.radii, "Window lengths r1,r2,...")->required();
    s_d->add_option("--R", dn.R, "Window radius, 0 for the largest |point|")->capture_default_str();
    s_d->add_option("--interval", dn.interval, "Interval a,b for the frame test");
    s_d->add_option("--N", dn.N, "Frame test truncation")->capture_default_str();

    PerturbOpts pt;
    auto* s_p = app.add_subcommand("perturb", "Perturbation tests between two families");
    s_p->add_option("--base", pt.base, "Base family CSV")->required();
    s_p->add_option("--perturbed", pt.perturbed, "Perturbed family CSV")->required();
    s_p->add_option("--trials", pt.trials, "Random coefficient trials")->capture_default_str();
    s_p->add_option("--frame-bounds", pt.frame_bounds, "A,B of the base frame");

    DecomposeOpts dc;
    auto* s_dc = app.add_subcommand("decompose", "Greedy pursuit over parametric dictionaries");
    s_dc->add_option("--signal", dc.signal, "Signal CSV")->required();
    s_dc->add_option("--dict", dc.dicts, "fourier | chirp | gabor (repeatable)");
    s_dc->add_option("--atoms", dc.atoms, "Atom budget")->capture_default_str();
    s_dc->add_option("--tol", dc.tol, "Relative residual target")->capture_default_str();
    s_dc->add_option("--lambda", dc.lambda, "Fourier frequency grid")->capture_default_str();
    s_dc->add_option("--beta", dc.beta, "Chirp rate grid")->capture_default_str();
    s_dc->add_option("--gabor-omega", dc.gabor_omega, "Gabor frequency grid")->capture_default_str();
    s_dc->add_option("--gabor-center", dc.gabor_center, "Gabor center grid")->capture_default_str();
    s_dc->add_option("--gabor-sigma", dc.gabor_sigma, "Gabor width grid")->capture_default_str();

    IndependenceOpts io;
    auto* s_i = app.add_subcommand("independence", "Mollified Wronskian and sampling rank of a family");
    s_i->add_option("--family", io.family, "Family CSV")->required();
    s_i->add_option("--t0", io.t0, "Candidate points t1,t2,...");
    s_i->add_option("--sigma", io.sigma, "Mollifier width")->capture_default_str();
    s_i->add_option("--candidates", io.candidates, "Evenly spaced candidates when --t0 is absent")->capture_default_str();

    std::vector<std::string> args = args_in;
    try {
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i] == "--config" && i + 1 < args.size()) args = merge_config(args, args[i + 1], app);
            else if (args[i].rfind("--config=", 0) == 0) args = merge_config(args, args[i].substr(9), app);
            else continue;
            break;
        }
        for (std::size_t i = 0; i < args.size(); ++i) {
            const auto& a = args[i];
            if (a == "--seed" || a == "--out" || a == "--config") {
                ++i;
                continue;
            }
            if (a.empty() || a[0] == '-') continue;
            if (!app.get_subcommand_no_throw(a)) throw Invalid("unknown subcommand '" + a + "'");
            break;
        }
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Invalid& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    const CLI::App* sub = app.get_subcommands().front();
    ctx.resolved = resolved_options(app, sub);
    try {
        std::error_code ec;
        fs::create_directories(ctx.out_dir, ec);
        if (ec || !fs::is_directory(ctx.out_dir)) throw Invalid("cannot create output directory " + ctx.out_dir);
        if (sub == s_tr) return do_transform(tr, ctx, out);
        if (sub == s_sc) return do_scan(sc, ctx, out);
        if (sub == s_q) return do_qup(qo, ctx, out);
        if (sub == s_d) return do_density(dn, ctx, out);
        if (sub == s_p) return do_perturb(pt, ctx, out);
        if (sub == s_dc) return do_decompose(dc, ctx, out);
        if (sub == s_i) return do_independence(io, ctx, out);
    } catch (const Invalid& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "error: unknown subcommand\n";
    return 2;
}

}  // namespace qup::cli
