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

#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "grassq/rng.hpp"

namespace grassq {

/// Worker count for chunked Monte Carlo loops: GRASSQ_THREADS if set, else 1.
/// Results never depend on this value, only wall time does.
int default_worker_count();

/// Per-chunk running sums for a scalar Monte Carlo estimate.
struct MomentSums {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::int64_t count = 0;

    void add(double x) {
        sum += x;
        sum_sq += x * x;
        ++count;
    }
};

struct MeanSe {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;
};

/// Combines per-chunk moment sums (in chunk order) into mean and standard
/// error of the mean.
MeanSe reduce_moments(const std::vector<MomentSums>& chunks);

constexpr std::int64_t kMcChunkSize = 8192;

/// Runs `fn(rng, count, chunk_index)` over a fixed chunk schedule covering
/// `total` samples and returns the per-chunk results in chunk order. The
/// schedule and every chunk's RNG depend only on (`total`, `chunk`, `root`),
/// so the reduced result is identical for any worker count.
template <typename T, typename Fn>
std::vector<T> run_chunked(std::int64_t total, std::int64_t chunk, const RngStream& root,
                           Fn&& fn, int workers = -1) {
    if (total < 0) throw ArgumentError("run_chunked: negative sample count");
    if (chunk <= 0) throw ArgumentError("run_chunked: chunk size must be positive");
    const std::int64_t n_chunks = (total + chunk - 1) / chunk;
    std::vector<T> results(static_cast<std::size_t>(n_chunks));
    if (n_chunks == 0) return results;
    if (workers < 0) workers = default_worker_count();
    if (workers > n_chunks) workers = static_cast<int>(n_chunks);

    auto run_one = [&](std::int64_t c) {
        RngStream rng = root.substream(static_cast<std::uint64_t>(c));
        const std::int64_t count = std::min(chunk, total - c * chunk);
        results[static_cast<std::size_t>(c)] = fn(rng, count, c);
    };

    if (workers <= 1) {
        for (std::int64_t c = 0; c < n_chunks; ++c) run_one(c);
        return results;
    }

    std::atomic<std::int64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::int64_t c = next.fetch_add(1);
                if (c >= n_chunks) return;
                run_one(c);
            }
        });
    }
    for (auto& t : pool) t.join();
    return results;
}

}  // namespace grassq
