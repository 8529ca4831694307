// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qup-lab contributors

#pragma once

#include <string>
#include <vector>

#include "qup/kernels.hpp"
#include "qup/num_core.hpp"

namespace qup {

/// Sorted distinct reals inside a declared window [-R, R].
struct PointSet {
    std::vector<double> points;
    double R = 0.0;
};

/// Validates order, distinctness and containment.
PointSet make_point_set(std::vector<double> points, double R);

/// Points step * k for integer k (plus offset) inside [-R, R].
PointSet lattice(double step, double R, double offset = 0.0);

struct DensityReport {
    double d_minus = 0.0;
    double d_plus = 0.0;
    double separation = 0.0;  // infinity for fewer than two points
    double r_max = 0.0;
    std::vector<double> radii;
    std::vector<long long> n_minus;
    std::vector<long long> n_plus;
};

/// Extreme point counts in half-open windows [x, x + r) inside [-R, R], per r; the
/// densities are the counts over r at the largest r.
DensityReport beurling_densities(const PointSet& lambda, const std::vector<double>& r_schedule);

struct FrameTestResult {
    enum class Verdict { frame_likely, not_frame_likely, inconclusive };
    FrameBounds bounds;     // at the finer level 2N
    double A_coarse = 0.0;  // lower bound at level N
    int N = 0;
    Verdict verdict = Verdict::inconclusive;
};

std::string to_string(FrameTestResult::Verdict v);

/// Frame bounds of {e^{i lambda t}} on L^2(a, b), compressed to the trigonometric
/// subspace of degree N (and 2N) of the interval.
FrameTestResult exponential_frame_test(const PointSet& lambda, double a, double b, int N);

struct SampleExpansion {
    std::vector<double> omegas;
    std::vector<cplx> coefficients;  // f~(omega_n)
    double A1 = 0.0;
    double B1 = 0.0;
    double energy = 0.0;      // sum |f~(omega_n)|^2
    double norm_sq = 0.0;     // ||f||^2
    bool within_bounds = true;  // A1 ||f||^2 <= energy <= B1 ||f||^2 up to 1e-8 relative
};

/// Samples of f~ at the given omegas with the frame bounds of the sampled rows,
/// measured on their span.
SampleExpansion sample_expansion(const KernelSpec& kernel, const std::vector<double>& omegas, const Signal& f);

struct TailReport {
    bool pass = false;
    double support = 0.0;
    std::vector<int> block_ends;       // N of each dyadic block [N/2, N]
    std::vector<double> block_peaks;   // max |f^(n)| over the block, relative to the overall peak
};

/// Fourier-series coefficients (1 / 2pi) integral f e^{-int} of a signal on a subset of (-pi, pi).
TailReport fourier_tail_check(const Signal& f);

/// Finite combination of exponentials a e^{i lambda t} and sinc terms a sin(W (t - s)) / (W (t - s)).
struct BandlimitedMixture {
    struct Term {
        enum class Kind { exponential, sinc };
        Kind kind = Kind::exponential;
        cplx amplitude{1.0, 0.0};
        double frequency = 0.0;  // lambda for exponentials, W for sinc terms
        double shift = 0.0;      // sinc center
    };
    std::vector<Term> terms;

    cplx operator()(double t) const;
    double bandlimit() const;
};

/// Zeros per unit length on [-R, R]: sign changes for real-valued mixtures, refined
/// modulus minima below 1e-10 of the peak otherwise.
double zero_density(const BandlimitedMixture& f, double R);

}  // namespace qup
