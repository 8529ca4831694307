// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qup-lab contributors

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qup/kernels.hpp"
#include "qup/num_core.hpp"

namespace qup {

enum class AtomKind { fourier, chirp, gabor };

std::string to_string(AtomKind k);

/// Unit-norm parametric atom: e^{i lambda t}, e^{i beta t^2}, or a Gaussian-windowed
/// exponential with parameters (omega, center, sigma).
struct Atom {
    AtomKind kind = AtomKind::fourier;
    std::vector<double> params;
    Signal samples;
};

Atom make_atom(AtomKind kind, std::vector<double> params, const Grid& grid);

struct AtomGenerator {
    AtomKind kind = AtomKind::fourier;
    std::vector<Grid> param_grids;  // one grid per parameter
};

struct Dictionary {
    std::vector<AtomGenerator> generators;

    std::size_t size() const;
    /// Parameters of atom `index` in generator-major, last-parameter-fastest order.
    std::pair<AtomKind, std::vector<double>> atom_params(std::size_t index) const;
};

Dictionary fourier_dictionary(const Grid& lambdas);
Dictionary chirp_dictionary(const Grid& betas);
Dictionary gabor_dictionary(const Grid& omegas, const Grid& centers, const Grid& sigmas);
Dictionary merge(const Dictionary& a, const Dictionary& b);

struct Decomposition {
    std::vector<Atom> atoms;
    std::vector<cplx> coefficients;
    std::vector<double> residual_norms;         // after the joint refit, one per iteration
    std::vector<double> greedy_residual_norms;  // after the single-atom projection
    std::string stop_reason;
    double signal_norm = 0.0;

    double relative_residual() const;
};

/// Greedy pursuit with one half-step parameter refinement around each pick and a
/// least-squares refit on the selected atoms.
Decomposition matching_pursuit(const Signal& f, const Dictionary& dict, int max_atoms, double residual_tol);

struct PronyResult {
    std::vector<double> frequencies;  // ascending
    std::vector<cplx> amplitudes;
    std::vector<bool> spurious;       // |amplitude| < 1e-8
    double hankel_condition = 0.0;
};

/// Exponential-sum fit f(t_k) = sum a_j e^{i lambda_j t_k} on a uniform grid.
PronyResult prony(const Signal& samples, int m);

struct FamilyChoice {
    std::size_t index = 0;
    Decomposition decomposition;
    std::vector<double> residuals;  // relative residual per family at the budget
    std::string rule = "minimum residual at fixed sparsity";
};

FamilyChoice family_decompose(const Signal& f, const std::vector<Dictionary>& families, int budget,
                              double residual_tol = 0.0);

struct LimitCheckReport {
    enum class Verdict { consistent, counterexample_found };
    Verdict verdict = Verdict::consistent;
    bool hypothesis_met = false;       // every probe image eps-confined to J
    double outside_energy = 0.0;       // kernel energy on rows outside J over the total
    double worst_image_leak = 0.0;     // max over probes of peak outside J / peak
    std::vector<double> offending_rows;
    std::string note;
};

std::string to_string(LimitCheckReport::Verdict v);

/// If all probe images e^{i lambda t} -> K e^{i lambda .} are eps-supported in J, the
/// kernel rows outside J must carry less than tol of the energy.
LimitCheckReport qup_limit_check(const DiscreteOperator& op, const std::vector<double>& probes, double j_lo,
                                 double j_hi, double tol, double eps = 1e-3);

}  // namespace qup
