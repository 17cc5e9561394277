// SPDX-License-Identifier: Apache-2.0
//
// grassq: quantization on real and complex Grassmann manifolds
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>

#include "grassq/field.hpp"
#include "grassq/rng.hpp"

namespace grassq {

/// Monte Carlo estimate with its standard error.
struct VolumeEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;
};

/// Power-law model of the metric-ball volume, mu(B(delta)) ~ c * delta^t,
/// where t = beta * p * (n - p) is the manifold's real dimension. Exact for
/// the complex field at delta <= 1; an o(delta)-accurate approximation for
/// the real field.
struct BallVolumeModel {
    int n = 0;
    int p = 0;
    Field field = Field::Complex;
    double c = 0.0;
    double log_c = 0.0;
    int t = 0;

    /// Complex field: c from the closed-form factorial-ratio constant.
    static BallVolumeModel complex_model(int n, int p);

    /// Real field: c estimated by Monte Carlo integration of the ordered
    /// simplex integral; the estimate's standard error is returned too.
    static BallVolumeModel real_model(int n, int p, std::int64_t samples, RngStream& rng,
                                      VolumeEstimate* estimate = nullptr);

    /// Externally supplied constant (tests, cached values).
    static BallVolumeModel with_constant(int n, int p, Field field, double c);
};

/// The closed-form constant c_{n,p,2} (complex field): a product of factorial
/// ratios divided by (np - p^2)!. Evaluated with exact double factorials for
/// small n and through log-gamma beyond; c(n, p) == c(n, n-p) exactly.
double complex_constant(int n, int p);

/// log c_{n,p,2}, usable for n in the hundreds where c itself over/underflows.
double complex_log_constant(int n, int p);

/// Monte Carlo estimate of the real-field constant c_{n,p,1}: the ordered
/// simplex integral of |Vandermonde(x)| * prod x_i^(a-1) times the
/// V_{n,q,1} / 2^q prefactor, with q = min(p, n-p) and a = (n - 2q + 1) / 2.
/// Sampling uses a Dirichlet(a, ..., a, 1) proposal so the power-law factor
/// cancels and the estimator stays finite-variance even when the integrand
/// is singular at x_i -> 0 (the p = n/2 case).
VolumeEstimate real_constant(int n, int p, std::int64_t samples, RngStream& rng);

struct BallVolume {
    double value = 0.0;
    /// Set when delta lies beyond the guaranteed range of the power law
    /// (delta > 1); the clamped value is an extrapolation there.
    bool extrapolated = false;
};

/// min(1, c * delta^t), clamped to the total measure. Throws ArgumentError
/// for delta < 0.
BallVolume ball_volume(const BallVolumeModel& model, double delta);

/// Fraction of Haar-uniform planes within chordal distance delta of a fixed
/// reference plane, with binomial standard error. By invariance of the
/// measure this is mu(B(delta)) for any center.
VolumeEstimate empirical_volume(int n, int p, Field field, double delta,
                                std::int64_t samples, RngStream& rng);

/// Barg's asymptotic comparison formula (delta / sqrt(p))^(beta * n * p).
/// Throws ArgumentError unless 0 < delta <= sqrt(p).
double barg_volume(int n, int p, Field field, double delta);

}  // namespace grassq
