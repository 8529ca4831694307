// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qup-lab contributors

#pragma once

#include <functional>
#include <vector>

#include "qup/kernels.hpp"
#include "qup/num_core.hpp"

namespace qup {

/// Analytic derivative of a family member: (member index, order, t) -> value.
using DerivativeSupplier = std::function<cplx(std::size_t, int, double)>;

struct FunctionFamily {
    std::vector<Signal> members;
    DerivativeSupplier derivative;

    const Grid& grid() const { return members.front().grid(); }
    std::size_t size() const { return members.size(); }
    /// Column j holds member j sampled on the grid.
    cmat matrix() const;
};

/// Validates the shared grid and non-emptiness.
FunctionFamily make_family(std::vector<Signal> members, DerivativeSupplier derivative = {});

/// Unit-integral Gaussian truncated at 6 sigma.
struct Mollifier {
    double sigma = 0.05;

    double support() const { return 6.0 * sigma; }
    /// k-th derivative of the bump at t (0 beyond the truncation).
    double eval(int k, double t) const;
};

Mollifier make_mollifier(double sigma);

struct SamplingMatrix {
    std::vector<double> points;
    cmat entries;  // (i, j) = K_i(points_j)
};

/// det of (i, j) = K_j^{(i)}(t0); central differences on the grid when no supplier is given.
cplx wronskian_det(const FunctionFamily& family, double t0);

/// det of (i, j) = (K_j * h^{(i)})(t0).
cplx general_wronskian_det(const FunctionFamily& family, const Mollifier& h, double t0);

enum class IndependenceVerdict { independent, dependent, inconclusive };

struct WronskianScan {
    IndependenceVerdict verdict = IndependenceVerdict::inconclusive;
    double best_t0 = 0.0;
    double best_ratio = 0.0;  // |det| / Hadamard scale at best_t0
};

/// Scans t0 candidates with the mollified Wronskian. A nonvanishing determinant
/// proves independence; a vanishing one is reported dependent only for families
/// with analytic derivative suppliers and inconclusive otherwise.
WronskianScan wronskian_scan(const FunctionFamily& family, const Mollifier& h, const std::vector<double>& candidates,
                             double tol = 1e-6);

SamplingMatrix sampling_matrix(const FunctionFamily& family, const std::vector<double>& points);

/// Greedy abscissae with a well-conditioned sampling matrix.
std::vector<double> find_full_rank_samples(const FunctionFamily& family);

struct Interpolants {
    int m = 0;
    std::vector<double> points;
    std::vector<Signal> interpolants;
};

Interpolants dfs_rank_and_interpolants(const FunctionFamily& family);

/// Member Gram matrix G_ij = <K_j, K_i> with trapezoidal weights.
cmat gram_matrix(const FunctionFamily& family);

/// Largest n <= nmax with a nonvanishing mixed-partial Wronskian at (omega0, t0).
int cfs_wronskian_rank(const KernelSpec& kernel, double omega0, double t0, int nmax);

}  // namespace qup
