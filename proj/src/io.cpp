// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qup-lab contributors

#include "qup/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qup {

namespace {

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io, "cannot open " + path.string());
    return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::io, "cannot write " + path.string());
    return out;
}

std::string where(const std::filesystem::path& path, std::size_t line) {
    return path.string() + ":" + std::to_string(line);
}

double parse_real(const std::string& tok, const std::string& context) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        throw Error(Errc::parse, context + ": not a number '" + tok + "'");
    }
    while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
    if (used != tok.size() || !std::isfinite(v)) throw Error(Errc::parse, context + ": not a finite number '" + tok + "'");
    return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, sep)) out.push_back(cur);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

Table read_table(const std::filesystem::path& path) {
    auto in = open_in(path);
    Table t;
    std::string line;
    std::size_t ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        line = trim(line);
        if (line.empty()) continue;
        auto cells = split(line, ',');
        if (t.header.empty()) {
            for (auto& c : cells) t.header.push_back(trim(c));
            continue;
        }
        if (cells.size() != t.header.size()) {
            throw Error(Errc::parse, where(path, ln) + ": expected " + std::to_string(t.header.size()) + " fields");
        }
        std::vector<double> row;
        for (auto& c : cells) row.push_back(parse_real(trim(c), where(path, ln)));
        t.rows.push_back(std::move(row));
    }
    if (t.header.empty()) throw Error(Errc::parse, path.string() + ": empty file");
    if (t.rows.size() < 2) throw Error(Errc::parse, path.string() + ": need at least two rows");
    return t;
}

Grid grid_of_column(const Table& t, const std::filesystem::path& path) {
    const double a = t.rows.front()[0], b = t.rows.back()[0];
    const auto n = static_cast<long long>(t.rows.size());
    if (!(b > a)) throw Error(Errc::parse, path.string() + ": abscissae must increase");
    const double h = (b - a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const double expect = a + h * static_cast<double>(i);
        if (i > 0 && !(t.rows[i][0] > t.rows[i - 1][0])) {
            throw Error(Errc::parse, where(path, i + 2) + ": abscissae must strictly increase");
        }
        if (std::abs(t.rows[i][0] - expect) > 1e-9 * std::max(std::abs(b - a), std::abs(expect))) {
            throw Error(Errc::parse, where(path, i + 2) + ": spacing is not uniform");
        }
    }
    return make_grid(a, b, n);
}

}  // namespace

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Signal read_signal_csv(const std::filesystem::path& path) {
    const Table t = read_table(path);
    if (t.header.size() != 3) throw Error(Errc::parse, path.string() + ": header must be t,re,im");
    const Grid g = grid_of_column(t, path);
    std::vector<cplx> v;
    for (const auto& r : t.rows) v.emplace_back(r[1], r[2]);
    return Signal(g, std::move(v));
}

void write_signal_csv(const std::filesystem::path& path, const Signal& f, const std::string& axis) {
    auto out = open_out(path);
    out << axis << ",re,im\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        out << format_real(f.grid().node(i)) << ',' << format_real(f[i].real()) << ',' << format_real(f[i].imag())
            << '\n';
    }
}

FunctionFamily read_family_csv(const std::filesystem::path& path) {
    const Table t = read_table(path);
    if (t.header.size() < 3 || t.header.size() % 2 != 1) {
        throw Error(Errc::parse, path.string() + ": header must be t,re_1,im_1,...");
    }
    const Grid g = grid_of_column(t, path);
    std::vector<Signal> members;
    for (std::size_t k = 1; k < t.header.size(); k += 2) {
        std::vector<cplx> v;
        for (const auto& r : t.rows) v.emplace_back(r[k], r[k + 1]);
        members.emplace_back(g, std::move(v));
    }
    return make_family(std::move(members));
}

void write_family_csv(const std::filesystem::path& path, const FunctionFamily& family) {
    auto out = open_out(path);
    out << 't';
    for (std::size_t k = 1; k <= family.size(); ++k) out << ",re_" << k << ",im_" << k;
    out << '\n';
    const Grid& g = family.grid();
    for (std::size_t i = 0; i < g.n; ++i) {
        out << format_real(g.node(i));
        for (const auto& m : family.members) out << ',' << format_real(m[i].real()) << ',' << format_real(m[i].imag());
        out << '\n';
    }
}

PointSet read_point_set(const std::filesystem::path& path, std::optional<double> R) {
    auto in = open_in(path);
    std::vector<double> pts;
    std::string line;
    std::size_t ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        pts.push_back(parse_real(line, where(path, ln)));
    }
    if (pts.empty()) throw Error(Errc::parse, path.string() + ": no points");
    double r = 0.0;
    for (double x : pts) r = std::max(r, std::abs(x));
    return make_point_set(std::move(pts), R.value_or(r > 0.0 ? r : 1.0));
}

Grid parse_grid(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw Error(Errc::parse, "grid must be a:b:n, got '" + text + "'");
    const double a = parse_real(trim(parts[0]), "grid start");
    const double b = parse_real(trim(parts[1]), "grid end");
    const double n = parse_real(trim(parts[2]), "grid size");
    if (n != std::floor(n)) throw Error(Errc::parse, "grid size must be an integer, got '" + parts[2] + "'");
    return make_grid(a, b, static_cast<long long>(n));
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& tok : split(text, ',')) out.push_back(parse_real(trim(tok), "list"));
    if (out.empty()) throw Error(Errc::parse, "empty list");
    return out;
}

KernelSpec read_kernel_json(const std::filesystem::path& path) {
    auto in = open_in(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::parse, path.string() + ": " + e.what());
    }
    const auto dir = path.parent_path();
    auto str = [&](const char* key) {
        if (!j.contains(key) || !j[key].is_string()) throw Error(Errc::parse, path.string() + ": missing string field '" + key + "'");
        return j[key].get<std::string>();
    };
    auto num = [&](const char* key, std::optional<double> fallback) {
        if (!j.contains(key)) {
            if (fallback) return *fallback;
            throw Error(Errc::parse, path.string() + ": missing field '" + std::string(key) + "'");
        }
        if (!j[key].is_number()) throw Error(Errc::parse, path.string() + ": field '" + std::string(key) + "' must be a number");
        return j[key].get<double>();
    };
    auto file = [&](const char* key) { return read_signal_csv(dir / str(key)); };

    const std::string v = str("variant");
    if (v == "fourier") return fourier_kernel();
    if (v == "inverse_fourier") return inverse_fourier_kernel();
    if (v == "sinc") return sinc_kernel(num("bandlimit", 1.0));
    if (v == "gabor") return KernelSpec(kernel::Gabor{file("window_file"), num("shift", 0.0)});
    if (v == "wavelet") return KernelSpec(kernel::Wavelet{file("mother_file"), num("translation", 0.0)});
    if (v == "translation_invariant") return KernelSpec(kernel::TranslationInvariant{file("phi_file")});
    if (v == "hermite_piecewise") {
        const Grid t = parse_grid(str("t_grid"));
        return hermite_piecewise_kernel(static_cast<std::size_t>(num("count", std::nullopt)), t);
    }
    if (v == "tabulated") {
        // Rows are omega samples: omega,re_1,im_1,...,re_n,im_n over the t-grid.
        const FunctionFamily rows = read_family_csv(dir / str("values_file"));
        const Grid t = parse_grid(str("t_grid"));
        if (rows.size() != t.n) throw Error(Errc::parse, path.string() + ": values_file column count does not match t_grid");
        cmat values(static_cast<Eigen::Index>(rows.grid().n), static_cast<Eigen::Index>(t.n));
        for (std::size_t i = 0; i < t.n; ++i) {
            for (std::size_t r = 0; r < rows.grid().n; ++r) {
                values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = rows.members[i][r];
            }
        }
        return KernelSpec(kernel::Tabulated{rows.grid(), t, values});
    }
    throw Error(Errc::parse, path.string() + ": unknown kernel variant '" + v + "'");
}

}  // namespace qup
