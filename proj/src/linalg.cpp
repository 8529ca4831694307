// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qup-lab contributors

#include "qup/linalg.hpp"

#include <algorithm>

namespace qup {

rvec singular_values(const cmat& m) {
    if (m.size() == 0) return rvec();
    Eigen::BDCSVD<cmat> svd(m);
    return svd.singularValues();
}

int numerical_rank(const cmat& m, double rel) {
    const rvec s = singular_values(m);
    if (s.size() == 0 || s(0) == 0.0) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > rel * s(0)) ++r;
    }
    return r;
}

cmat range_basis(const cmat& m, double rel) {
    if (m.size() == 0) return cmat(m.rows(), 0);
    Eigen::BDCSVD<cmat> svd(m, Eigen::ComputeThinU);
    const rvec& s = svd.singularValues();
    int r = 0;
    if (s.size() > 0 && s(0) > 0.0) {
        for (Eigen::Index i = 0; i < s.size(); ++i) {
            if (s(i) > rel * s(0)) ++r;
        }
    }
    return svd.matrixU().leftCols(r);
}

rvec psd_eigenvalues(const cmat& m) {
    if (m.size() == 0) return rvec();
    Eigen::SelfAdjointEigenSolver<cmat> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseMax(0.0);
}

rmat fornberg_weights(double x0, const std::vector<double>& nodes, int max_order) {
    const int n = static_cast<int>(nodes.size());
    rmat c = rmat::Zero(max_order + 1, n);
    double c1 = 1.0;
    double c4 = nodes[0] - x0;
    c(0, 0) = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, max_order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[static_cast<std::size_t>(i)] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[static_cast<std::size_t>(i)] - nodes[static_cast<std::size_t>(j)];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) {
                    c(k, i) = c1 * (k * c(k - 1, i - 1) - c5 * c(k, i - 1)) / c2;
                }
                c(0, i) = -c1 * c5 * c(0, i - 1) / c2;
            }
            for (int k = mn; k >= 1; --k) c(k, j) = (c4 * c(k, j) - k * c(k - 1, j)) / c3;
            c(0, j) = c4 * c(0, j) / c3;
        }
        c1 = c2;
    }
    return c;
}

std::vector<int> central_stencil(int derivative, int accuracy) {
    // 2p+1 symmetric points give accuracy 2p + 2 - 2*ceil(d/2) for derivative d.
    int p = 0;
    if (derivative > 0) {
        p = (derivative + 1) / 2;
        while (2 * p + 2 - 2 * ((derivative + 1) / 2) < accuracy) ++p;
    }
    std::vector<int> offs;
    for (int k = -p; k <= p; ++k) offs.push_back(k);
    return offs;
}

}  // namespace qup
