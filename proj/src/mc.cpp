// SPDX-License-Identifier: Apache-2.0
//
// grassq: quantization on real and complex Grassmann manifolds
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#include "grassq/mc.hpp"

#include <cstdlib>

namespace grassq {

int default_worker_count() {
    static const int workers = [] {
        if (const char* env = std::getenv("GRASSQ_THREADS")) {
            const int v = std::atoi(env);
            if (v >= 1) return v;
        }
        return 1;
    }();
    return workers;
}

MeanSe reduce_moments(const std::vector<MomentSums>& chunks) {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::int64_t n = 0;
    for (const auto& c : chunks) {  // fixed order: deterministic reduction
        sum += c.sum;
        sum_sq += c.sum_sq;
        n += c.count;
    }
    MeanSe out;
    out.samples = n;
    if (n == 0) return out;
    out.mean = sum / static_cast<double>(n);
    if (n > 1) {
        const double var =
            std::max(0.0, (sum_sq - static_cast<double>(n) * out.mean * out.mean) /
                              static_cast<double>(n - 1));
        out.std_error = std::sqrt(var / static_cast<double>(n));
    }
    return out;
}

}  // namespace grassq
