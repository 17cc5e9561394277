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
#include <optional>
#include <vector>

#include "grassq/bounds.hpp"
#include "grassq/codebook.hpp"

namespace grassq {

/// Rayleigh MIMO link with power on/off beamforming: s active beams at
/// P_on = rho / s each, rho the average received SNR (linear).
struct MimoConfig {
    int lt = 1;        // transmit antennas
    int lr = 1;        // receive antennas
    int s = 1;         // number of on-beams, 1 <= s <= lt
    double rho = 1.0;  // average received SNR, linear scale
    double rfb = 0.0;  // feedback bits per channel use

    double p_on() const { return rho / static_cast<double>(s); }
    void validate() const;
};

/// One channel draw: H with i.i.d. CN(0,1) entries, its singular values, the
/// top-s right singular vectors, and the eigenvalues of H H^H (descending).
struct ChannelSample {
    Eigen::MatrixXcd h;               // lr x lt
    Eigen::VectorXd singular_values;  // min(lr, lt), descending
    Eigen::VectorXd lambda;           // lr eigenvalues of H H^H, descending
    Eigen::MatrixXcd v_s;             // lt x s beamforming optimum
};

ChannelSample sample_channel(const MimoConfig& cfg, RngStream& rng);

/// Index of the codeword whose span is chordal-closest to span(V_s); the
/// suboptimal feedback map. The codebook must live on G_{lt,s}(C).
std::int64_t feedback_index(const Codebook& codebook, const ChannelSample& sample);

struct RateEstimate {
    double value = 0.0;      // nats per channel use
    double std_error = 0.0;
    std::int64_t samples = 0;
};

/// Perfect-CSI rate E[sum_{i<=s} ln(1 + P_on lambda_i)].
RateEstimate rate_perfect_csi(const MimoConfig& cfg, std::int64_t samples, RngStream& rng);

/// Finite-feedback rate E[ln det(I + P_on H P P^H H^H)] with P chosen by
/// feedback_index per sample.
RateEstimate rate_finite_feedback(const MimoConfig& cfg, const Codebook& codebook,
                                  std::int64_t samples, RngStream& rng);

/// Rate predicted from a distortion value D via the power-efficiency factor
/// eta = 1 - D / s: E[sum_{i<=s} ln(1 + eta P_on lambda_i)]. Throws
/// ArgumentError unless 0 <= D <= s.
RateEstimate rate_predicted(const MimoConfig& cfg, double drf_value, std::int64_t samples,
                            RngStream& rng);

/// ln det(I + p_on H P P^H H^H), evaluated through the s x s Gram form.
double beamformed_rate_nats(const Eigen::MatrixXcd& h, const Eigen::MatrixXcd& beamformer,
                            double p_on);

/// One grid point of a feedback-rate sweep.
struct MimoReport {
    double rfb = 0.0;
    double rfb_over_m2 = 0.0;
    RateEstimate simulated;
    double rate_opt = 0.0;
    double rate_opt_se = 0.0;
    double rate_pred_lower = 0.0;     // from drf_lower (optimistic distortion)
    double rate_pred_upper = 0.0;     // from drf_upper (pessimistic distortion)
    double rate_pred_measured = 0.0;  // from the codebook's measured distortion
    double eta_lower = 0.0;
    double eta_upper = 0.0;
    double eta_measured = 0.0;
    std::int64_t K = 0;
    bool computed = false;  // false when the sweep budget ran out first
};

enum class CodebookSource { MaxMin, Random };

struct MimoSweepConfig {
    MimoConfig base;
    std::vector<double> rfb_grid;       // bits per channel use, sorted ascending
    std::int64_t samples = 100000;      // per rate estimate
    std::int64_t distortion_samples = 100000;
    CodebookSource source = CodebookSource::MaxMin;
    DesignBudget budget;
    std::optional<std::filesystem::path> cache_dir;  // max-min codebook cache
    double budget_seconds = 0.0;        // 0 = unlimited
};

/// Per R_fb: simulated rate with a designed (or random) codebook of size
/// K = 2^R_fb, predictions from both distortion-rate bounds and from the
/// measured codebook distortion, and the perfect-CSI reference. Codebooks
/// are derived deterministically from the sweep seed; max-min designs are
/// cached under cache_dir when given.
std::vector<MimoReport> mimo_sweep(const MimoSweepConfig& cfg, RngStream& rng);

}  // namespace grassq
