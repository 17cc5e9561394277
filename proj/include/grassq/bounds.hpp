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

#include "grassq/volume.hpp"

namespace grassq {

/// Sphere-packing bounds for a given minimum distance delta: a code of at
/// least gv_min_size exists, and no code exceeds hamming_max_size.
struct PackingBounds {
    double gv_min_size = 0.0;
    double hamming_max_size = 0.0;
    double delta = 0.0;
};

/// Distortion-rate sandwich at code size K; lower < upper for every K, and
/// both scale as K^(-2/t).
struct DrfBounds {
    double lower = 0.0;
    double upper = 0.0;
    std::int64_t K = 0;
    int t = 0;
};

/// Gilbert-Varshamov existence bound: c^-1 * delta^-t codewords fit with
/// minimum distance delta. Valid for 0 < delta <= 1; values up to the
/// manifold diameter are accepted as extrapolations. Throws RangeError
/// outside (0, sqrt(min(p, n-p))].
double gv_bound(const BallVolumeModel& model, double delta);

/// Hamming converse bound: no code with minimum distance delta has more
/// than c^-1 * (delta/2)^-t codewords.
double hamming_bound(const BallVolumeModel& model, double delta);

PackingBounds packing_bounds(const BallVolumeModel& model, double delta);

/// Distortion-rate lower bound (t/(t+2)) * (cK)^(-2/t). Throws ArgumentError
/// for K < 1.
double drf_lower(const BallVolumeModel& model, std::int64_t K);

/// Distortion-rate upper bound (2 Gamma(2/t) / t) * (cK)^(-2/t); equals the
/// large-K limit of the random-code ensemble average distortion.
double drf_upper(const BallVolumeModel& model, std::int64_t K);

DrfBounds drf_bounds(const BallVolumeModel& model, std::int64_t K);

}  // namespace grassq
