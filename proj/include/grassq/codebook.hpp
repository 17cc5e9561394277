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
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "grassq/subspace.hpp"

namespace grassq {

struct CodebookMeta {
    std::string designer = "unspecified";
    std::uint64_t seed = 0;
    std::int64_t iterations = 0;  // in-memory only, not persisted
    double min_distance = 0.0;    // achieved minimum pairwise chordal distance
};

/// An ordered set of K planes sharing one manifold. The minimum pairwise
/// chordal distance is computed at construction and kept in meta.
class Codebook {
  public:
    /// Validates that all entries share (n, p, field) and fills in the
    /// achieved minimum distance. Throws ShapeError / ArgumentError.
    static Codebook from_entries(std::vector<Subspace> entries, CodebookMeta meta);

    int n() const { return n_; }
    int p() const { return p_; }
    Field field() const { return field_; }
    std::int64_t size() const { return static_cast<std::int64_t>(entries_.size()); }
    const Subspace& entry(std::int64_t i) const { return entries_[static_cast<std::size_t>(i)]; }
    const std::vector<Subspace>& entries() const { return entries_; }
    const CodebookMeta& meta() const { return meta_; }

    /// All codeword bases conjugate-transposed and stacked into one
    /// (K*p) x n matrix; quantization against a plane Q is then a single
    /// matrix product.
    const Eigen::MatrixXcd& stacked_adjoint() const { return stacked_; }

  private:
    Codebook() = default;

    int n_ = 0;
    int p_ = 0;
    Field field_ = Field::Complex;
    std::vector<Subspace> entries_;
    CodebookMeta meta_;
    Eigen::MatrixXcd stacked_;
};

/// Minimum pairwise chordal distance of a set of same-manifold planes.
double min_pairwise_distance(const std::vector<Subspace>& entries);

/// Nearest codeword index (ties broken toward the lowest index) and the
/// squared chordal distance to it.
std::pair<std::int64_t, double> quantize(const Codebook& codebook, const Subspace& q);

/// Monte Carlo estimate of the mean squared quantization distortion over
/// Haar-uniform sources.
struct DistortionReport {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;
    std::int64_t K = 0;
};

DistortionReport mean_distortion(const Codebook& codebook, std::int64_t samples,
                                 RngStream& rng);

/// K independent Haar-uniform codewords.
Codebook random_codebook(int n, int p, Field field, std::int64_t K, RngStream& rng);

struct DesignBudget {
    int candidates = 8;            // random initializations to screen
    std::int64_t iterations = 2000;  // repulsion steps on the best candidate
};

/// Max-min packing design: best of `candidates` random codebooks, then
/// iterative repulsion of the closest pair (local perturbation mixed with
/// fresh redraws, accepted only on strict min-distance improvement).
/// Deterministic given (seed, budget). With iterations == 0 the best random
/// initialization is returned, flagged by designer == "maxmin-init".
Codebook design_maxmin(int n, int p, Field field, std::int64_t K, DesignBudget budget,
                       RngStream& rng);

/// One random-code trial: a fresh K-codeword random code, the nearest
/// squared distances W_K of Haar sources to it, and K^(2/t) * mean(W_K).
struct RandomCodeTrial {
    std::int64_t K = 0;
    std::vector<double> nearest_sq_distances;
    double scaled_statistic = 0.0;
};

struct RandomCodeSummary {
    double scaled_mean = 0.0;   // mean over trials of K^(2/t) * mean(W_K)
    double scaled_se = 0.0;
    std::int64_t K = 0;
    int t = 0;
    std::int64_t trials = 0;
    std::int64_t samples_per_trial = 0;
    std::vector<RandomCodeTrial> per_trial;
};

/// Ensemble experiment behind the distortion-rate upper bound: the scaled
/// statistic converges to 2 Gamma(2/t) / t * c^(-2/t) as K grows.
RandomCodeSummary random_code_experiment(int n, int p, Field field, std::int64_t K,
                                         std::int64_t trials,
                                         std::int64_t samples_per_trial, RngStream& rng);

/// Writes the GRASSQ-CB v1 snapshot: two text header lines ("GRASSQ-CB v1",
/// then field/n/p/K/designer/seed/mindist) followed by a little-endian
/// binary payload of row-major doubles, (re, im) pairs for the complex
/// field. The iterations meta field is not persisted.
void save_codebook(const Codebook& codebook, const std::filesystem::path& path);

/// Throws ParseError on malformed or truncated files, ValidationError when a
/// stored entry is not orthonormal.
Codebook load_codebook(const std::filesystem::path& path);

}  // namespace grassq
