// SPDX-License-Identifier: Apache-2.0
//
// grassq: quantization on real and complex Grassmann manifolds
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#include "grassq/volume.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "grassq/mc.hpp"
#include "grassq/subspace.hpp"

namespace grassq {

namespace {

void check_dims(int n, int p) {
    if (n < 1 || p < 1 || p > n) {
        throw DimensionError("invalid Grassmannian dimensions n=" + std::to_string(n) +
                             " p=" + std::to_string(p) + " (need 1 <= p <= n)");
    }
}

double log_factorial(int k) { return std::lgamma(static_cast<double>(k) + 1.0); }

// Exact-in-double factorial table; values beyond 18! carry at most a few ulp.
const std::vector<double>& factorial_table() {
    static const std::vector<double> table = [] {
        std::vector<double> f(171);
        f[0] = 1.0;
        for (int k = 1; k <= 170; ++k) f[k] = f[k - 1] * static_cast<double>(k);
        return f;
    }();
    return table;
}

// Surface area of the unit sphere in R^p: A(p) = 2 pi^{p/2} / Gamma(p/2).
double log_sphere_area(int p) {
    return std::log(2.0) + 0.5 * p * std::log(M_PI) - std::lgamma(0.5 * p);
}

// log V_{n,q,1} = sum_{i=1..q} log [ A(q-i+1)^2 A(n-q-i+1) / (2 A(n-i+1)) ].
double log_stiefel_factor(int n, int q) {
    double lv = 0.0;
    for (int i = 1; i <= q; ++i) {
        lv += 2.0 * log_sphere_area(q - i + 1) + log_sphere_area(n - q - i + 1) -
              std::log(2.0) - log_sphere_area(n - i + 1);
    }
    return lv;
}

}  // namespace

double complex_log_constant(int n, int p) {
    check_dims(n, p);
    const int q = std::min(p, n - p);
    if (q == 0) return 0.0;  // p == n: single-point manifold, c = 1
    const int t = q * (n - q);
    double lc = -log_factorial(t);
    for (int i = 1; i <= q; ++i) lc += log_factorial(n - i) - log_factorial(q - i);
    return lc;
}

double complex_constant(int n, int p) {
    check_dims(n, p);
    const int q = std::min(p, n - p);
    if (q == 0) return 1.0;
    const int t = q * (n - q);
    if (n <= 20) {
        // Small case: exact factorial arithmetic. The p = 1 value is exactly
        // 1 ((n-1)!/(n-1)!) and the duality c(n,p) = c(n,n-p) is bitwise.
        const auto& fact = factorial_table();
        double num = 1.0;
        for (int i = 1; i <= q; ++i) num *= fact[n - i] / fact[q - i];
        return num / fact[t];
    }
    return std::exp(complex_log_constant(n, p));
}

VolumeEstimate real_constant(int n, int p, std::int64_t samples, RngStream& rng) {
    check_dims(n, p);
    if (samples < 1) throw ArgumentError("real_constant: samples must be positive");
    const int q = std::min(p, n - p);
    if (q == 0) return {1.0, 0.0, samples};  // p == n: single point

    const double a = 0.5 * (n - 2 * q + 1);
    // Dirichlet(a,...,a,1) proposal: density C * prod x_i^(a-1) on the
    // simplex {x_i >= 0, sum <= 1} with C = Gamma(qa+1) / Gamma(a)^q. The
    // integrand's power-law factor cancels, leaving E[|Vandermonde|] / C.
    // Ordered region = unordered / q!.
    const double log_prefactor = log_stiefel_factor(n, q) - q * std::log(2.0) +
                                 q * std::lgamma(a) - std::lgamma(q * a + 1.0) -
                                 log_factorial(q);
    const double prefactor = std::exp(log_prefactor);

    RngStream root = rng.fork();
    auto chunks = run_chunked<MomentSums>(
        samples, kMcChunkSize, root,
        [&](RngStream& r, std::int64_t count, std::int64_t) {
            MomentSums acc;
            std::vector<double> x(static_cast<std::size_t>(q));
            for (std::int64_t s = 0; s < count; ++s) {
                double total = r.gamma(1.0);  // the slack coordinate
                for (int i = 0; i < q; ++i) {
                    x[static_cast<std::size_t>(i)] = r.gamma(a);
                    total += x[static_cast<std::size_t>(i)];
                }
                double vandermonde = 1.0;
                for (int i = 0; i < q; ++i)
                    for (int j = i + 1; j < q; ++j)
                        vandermonde *= std::abs(x[static_cast<std::size_t>(i)] -
                                                x[static_cast<std::size_t>(j)]) /
                                       total;
                acc.add(vandermonde);
            }
            return acc;
        });
    const MeanSe stat = reduce_moments(chunks);
    return {prefactor * stat.mean, prefactor * stat.std_error, stat.samples};
}

BallVolumeModel BallVolumeModel::complex_model(int n, int p) {
    check_dims(n, p);
    BallVolumeModel m;
    m.n = n;
    m.p = p;
    m.field = Field::Complex;
    m.c = complex_constant(n, p);
    m.log_c = complex_log_constant(n, p);
    m.t = 2 * p * (n - p);
    return m;
}

BallVolumeModel BallVolumeModel::real_model(int n, int p, std::int64_t samples,
                                            RngStream& rng, VolumeEstimate* estimate) {
    check_dims(n, p);
    const VolumeEstimate est = real_constant(n, p, samples, rng);
    if (estimate) *estimate = est;
    BallVolumeModel m;
    m.n = n;
    m.p = p;
    m.field = Field::Real;
    m.c = est.value;
    m.log_c = std::log(est.value);
    m.t = p * (n - p);
    return m;
}

BallVolumeModel BallVolumeModel::with_constant(int n, int p, Field field, double c) {
    check_dims(n, p);
    if (!(c > 0.0)) throw ArgumentError("ball volume constant must be positive");
    BallVolumeModel m;
    m.n = n;
    m.p = p;
    m.field = field;
    m.c = c;
    m.log_c = std::log(c);
    m.t = field_beta(field) * p * (n - p);
    return m;
}

BallVolume ball_volume(const BallVolumeModel& model, double delta) {
    if (delta < 0.0) throw ArgumentError("ball radius must be nonnegative");
    const int q = std::min(model.p, model.n - model.p);
    const double diameter = std::sqrt(static_cast<double>(q));
    if (delta > diameter) return {1.0, true};
    if (model.t == 0) return {1.0, false};  // single-point manifold
    const double raw = model.c * std::pow(delta, static_cast<double>(model.t));
    return {std::min(raw, 1.0), delta > 1.0};
}

VolumeEstimate empirical_volume(int n, int p, Field field, double delta,
                                std::int64_t samples, RngStream& rng) {
    check_dims(n, p);
    if (delta < 0.0) throw ArgumentError("ball radius must be nonnegative");
    if (samples < 1) throw ArgumentError("empirical_volume: samples must be positive");

    const int q = std::min(p, n - p);
    const double qd = static_cast<double>(q);
    const double threshold = delta * delta;
    RngStream root = rng.fork();
    auto chunks = run_chunked<std::int64_t>(
        samples, kMcChunkSize, root,
        [&](RngStream& r, std::int64_t count, std::int64_t) {
            std::int64_t hits = 0;
            for (std::int64_t s = 0; s < count; ++s) {
                const Subspace sample = haar_sample(n, p, field, r);
                // Reference plane span(e_1..e_p): the Gram block is just the
                // top p rows of the sampled basis.
                const double cos2 = sample.basis().topRows(p).squaredNorm();
                const double d2 = std::clamp(static_cast<double>(p) - cos2, 0.0, qd);
                if (d2 <= threshold) ++hits;
            }
            return hits;
        });
    std::int64_t hits = 0;
    for (const auto c : chunks) hits += c;
    const double value = static_cast<double>(hits) / static_cast<double>(samples);
    const double se = std::sqrt(value * (1.0 - value) / static_cast<double>(samples));
    return {value, se, samples};
}

double barg_volume(int n, int p, Field field, double delta) {
    check_dims(n, p);
    const double sqrt_p = std::sqrt(static_cast<double>(p));
    if (!(delta > 0.0) || delta > sqrt_p) {
        throw ArgumentError("barg_volume: delta must satisfy 0 < delta <= sqrt(p)");
    }
    const double exponent = static_cast<double>(field_beta(field)) * n * p;
    return std::pow(delta / sqrt_p, exponent);
}

}  // namespace grassq
