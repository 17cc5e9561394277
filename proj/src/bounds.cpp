// SPDX-License-Identifier: Apache-2.0
//
// grassq: quantization on real and complex Grassmann manifolds
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#include "grassq/bounds.hpp"

#include <cmath>
#include <string>

namespace grassq {

namespace {

void check_radius(const BallVolumeModel& model, double delta) {
    const int q = std::min(model.p, model.n - model.p);
    const double diameter = std::sqrt(static_cast<double>(q));
    if (!(delta > 0.0) || delta > diameter) {
        throw RangeError("packing bound radius " + std::to_string(delta) +
                         " outside (0, " + std::to_string(diameter) + "]");
    }
}

void check_code_size(const BallVolumeModel& model, std::int64_t K) {
    if (K < 1) throw ArgumentError("code size K must be at least 1");
    if (model.t < 1) throw ArgumentError("distortion-rate bounds need manifold dimension t >= 1");
}

double drf_scale(const BallVolumeModel& model, std::int64_t K) {
    return std::pow(model.c * static_cast<double>(K),
                    -2.0 / static_cast<double>(model.t));
}

}  // namespace

double gv_bound(const BallVolumeModel& model, double delta) {
    check_radius(model, delta);
    return std::pow(delta, -static_cast<double>(model.t)) / model.c;
}

double hamming_bound(const BallVolumeModel& model, double delta) {
    check_radius(model, delta);
    return std::pow(0.5 * delta, -static_cast<double>(model.t)) / model.c;
}

PackingBounds packing_bounds(const BallVolumeModel& model, double delta) {
    return {gv_bound(model, delta), hamming_bound(model, delta), delta};
}

double drf_lower(const BallVolumeModel& model, std::int64_t K) {
    check_code_size(model, K);
    const double t = static_cast<double>(model.t);
    return t / (t + 2.0) * drf_scale(model, K);
}

double drf_upper(const BallVolumeModel& model, std::int64_t K) {
    check_code_size(model, K);
    const double t = static_cast<double>(model.t);
    return 2.0 * std::tgamma(2.0 / t) / t * drf_scale(model, K);
}

DrfBounds drf_bounds(const BallVolumeModel& model, std::int64_t K) {
    return {drf_lower(model, K), drf_upper(model, K), K, model.t};
}

}  // namespace grassq
