// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qup-lab contributors

#pragma once

#include <vector>

#include "qup/num_core.hpp"

namespace qup {

/// Singular values in descending order.
rvec singular_values(const cmat& m);

/// Count of singular values above rel * largest (0 for a zero matrix).
int numerical_rank(const cmat& m, double rel);

/// Orthonormal basis (columns) of the numerical range of m.
cmat range_basis(const cmat& m, double rel);

/// Ascending eigenvalues of a Hermitian matrix, negatives from round-off clamped to 0.
rvec psd_eigenvalues(const cmat& m);

/// Finite-difference weights for derivatives 0..max_order at x0 from the given nodes.
/// Result(k, j) weights node j for the k-th derivative.
rmat fornberg_weights(double x0, const std::vector<double>& nodes, int max_order);

/// Symmetric stencil offsets (in units of h) giving at least the requested
/// accuracy order for the given derivative order.
std::vector<int> central_stencil(int derivative, int accuracy);

}  // namespace qup
