// SPDX-License-Identifier: Apache-2.0
//
// grassq: quantization on real and complex Grassmann manifolds
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#include "grassq/mimo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "grassq/mc.hpp"

namespace grassq {

void MimoConfig::validate() const {
    if (lt < 1 || lr < 1) throw ArgumentError("antenna counts must be at least 1");
    if (s < 1 || s > lt) {
        throw ArgumentError("on-beam count s=" + std::to_string(s) +
                            " outside [1, L_T=" + std::to_string(lt) + "]");
    }
    if (!(rho >= 0.0)) throw ArgumentError("SNR rho must be nonnegative");
    if (!(rfb >= 0.0)) throw ArgumentError("feedback rate must be nonnegative");
}

ChannelSample sample_channel(const MimoConfig& cfg, RngStream& rng) {
    cfg.validate();
    ChannelSample out;
    out.h.resize(cfg.lr, cfg.lt);
    for (int c = 0; c < cfg.lt; ++c)
        for (int r = 0; r < cfg.lr; ++r) out.h(r, c) = rng.cgaussian();

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(out.h, Eigen::ComputeFullV);
    out.singular_values = svd.singularValues();
    out.lambda = Eigen::VectorXd::Zero(cfg.lr);
    for (int i = 0; i < out.singular_values.size() && i < cfg.lr; ++i) {
        out.lambda(i) = out.singular_values(i) * out.singular_values(i);
    }
    out.v_s = svd.matrixV().leftCols(cfg.s);
    return out;
}

std::int64_t feedback_index(const Codebook& codebook, const ChannelSample& sample) {
    const Subspace v = Subspace::from_orthonormal(sample.v_s, Field::Complex);
    return quantize(codebook, v).first;
}

namespace {

double sum_log_rate(const Eigen::VectorXd& lambda, int s, double gain) {
    double rate = 0.0;
    const int terms = std::min<int>(s, static_cast<int>(lambda.size()));
    for (int i = 0; i < terms; ++i) rate += std::log1p(gain * lambda(i));
    return rate;
}

RateEstimate lambda_rate_mc(const MimoConfig& cfg, double gain, std::int64_t samples,
                            RngStream& rng) {
    cfg.validate();
    if (samples < 1) throw ArgumentError("rate estimate needs samples >= 1");
    RngStream root = rng.fork();
    auto chunks = run_chunked<MomentSums>(
        samples, kMcChunkSize, root,
        [&](RngStream& r, std::int64_t count, std::int64_t) {
            MomentSums acc;
            for (std::int64_t i = 0; i < count; ++i) {
                const ChannelSample ch = sample_channel(cfg, r);
                acc.add(sum_log_rate(ch.lambda, cfg.s, gain));
            }
            return acc;
        });
    const MeanSe stat = reduce_moments(chunks);
    return {stat.mean, stat.std_error, stat.samples};
}

}  // namespace

double beamformed_rate_nats(const Eigen::MatrixXcd& h, const Eigen::MatrixXcd& beamformer,
                            double p_on) {
    // ln det(I_{lr} + p_on H P P^H H^H) = ln det(I_s + p_on (HP)^H (HP)).
    const Eigen::MatrixXcd hp = h * beamformer;
    const Eigen::MatrixXcd gram = hp.adjoint() * hp;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
    double rate = 0.0;
    for (int i = 0; i < eig.eigenvalues().size(); ++i) {
        rate += std::log1p(p_on * std::max(0.0, eig.eigenvalues()(i)));
    }
    return rate;
}

RateEstimate rate_perfect_csi(const MimoConfig& cfg, std::int64_t samples, RngStream& rng) {
    return lambda_rate_mc(cfg, cfg.p_on(), samples, rng);
}

RateEstimate rate_finite_feedback(const MimoConfig& cfg, const Codebook& codebook,
                                  std::int64_t samples, RngStream& rng) {
    cfg.validate();
    if (codebook.n() != cfg.lt || codebook.p() != cfg.s ||
        codebook.field() != Field::Complex) {
        throw ShapeError("beamforming codebook must live on G_{" + std::to_string(cfg.lt) +
                         "," + std::to_string(cfg.s) + "}(C)");
    }
    if (samples < 1) throw ArgumentError("rate estimate needs samples >= 1");
    const double p_on = cfg.p_on();
    RngStream root = rng.fork();
    auto chunks = run_chunked<MomentSums>(
        samples, kMcChunkSize, root,
        [&](RngStream& r, std::int64_t count, std::int64_t) {
            MomentSums acc;
            for (std::int64_t i = 0; i < count; ++i) {
                const ChannelSample ch = sample_channel(cfg, r);
                const std::int64_t idx = feedback_index(codebook, ch);
                acc.add(beamformed_rate_nats(ch.h, codebook.entry(idx).basis(), p_on));
            }
            return acc;
        });
    const MeanSe stat = reduce_moments(chunks);
    return {stat.mean, stat.std_error, stat.samples};
}

RateEstimate rate_predicted(const MimoConfig& cfg, double drf_value, std::int64_t samples,
                            RngStream& rng) {
    cfg.validate();
    if (!(drf_value >= 0.0) || drf_value > static_cast<double>(cfg.s)) {
        throw ArgumentError("distortion value " + std::to_string(drf_value) +
                            " outside [0, s]");
    }
    const double eta = 1.0 - drf_value / static_cast<double>(cfg.s);
    return lambda_rate_mc(cfg, eta * cfg.p_on(), samples, rng);
}

namespace {

std::filesystem::path cache_file_name(const std::filesystem::path& dir, const MimoConfig& cfg,
                                      std::int64_t K, std::uint64_t design_seed) {
    return dir / ("maxmin_C_n" + std::to_string(cfg.lt) + "_p" + std::to_string(cfg.s) +
                  "_K" + std::to_string(K) + "_seed" + std::to_string(design_seed) +
                  ".gqcb");
}

Codebook sweep_codebook(const MimoSweepConfig& cfg, std::int64_t K,
                        std::uint64_t design_seed) {
    RngStream design_rng(design_seed);
    if (cfg.source == CodebookSource::Random || K == 1) {
        return random_codebook(cfg.base.lt, cfg.base.s, Field::Complex, K, design_rng);
    }
    if (cfg.cache_dir) {
        const auto file = cache_file_name(*cfg.cache_dir, cfg.base, K, design_seed);
        if (std::filesystem::exists(file)) return load_codebook(file);
        Codebook cb = design_maxmin(cfg.base.lt, cfg.base.s, Field::Complex, K, cfg.budget,
                                    design_rng);
        std::filesystem::create_directories(*cfg.cache_dir);
        save_codebook(cb, file);
        return cb;
    }
    return design_maxmin(cfg.base.lt, cfg.base.s, Field::Complex, K, cfg.budget, design_rng);
}

}  // namespace

std::vector<MimoReport> mimo_sweep(const MimoSweepConfig& cfg, RngStream& rng) {
    cfg.base.validate();
    if (cfg.rfb_grid.empty()) throw ArgumentError("mimo sweep needs a nonempty R_fb grid");
    for (double rfb : cfg.rfb_grid) {
        if (!(rfb >= 0.0)) throw ArgumentError("feedback rates must be nonnegative");
    }
    const int m = std::min(cfg.base.lt, cfg.base.lr);
    const double m2 = static_cast<double>(m) * static_cast<double>(m);
    const BallVolumeModel model = BallVolumeModel::complex_model(cfg.base.lt, cfg.base.s);
    const double s = static_cast<double>(cfg.base.s);

    const auto start = std::chrono::steady_clock::now();
    auto out_of_budget = [&] {
        if (cfg.budget_seconds <= 0.0) return false;
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        return elapsed.count() > cfg.budget_seconds;
    };

    // The perfect-CSI reference is shared by every grid point.
    RngStream opt_rng = rng.fork();
    const RateEstimate opt = rate_perfect_csi(cfg.base, cfg.samples, opt_rng);

    std::vector<MimoReport> reports;
    reports.reserve(cfg.rfb_grid.size());
    for (double rfb : cfg.rfb_grid) {
        MimoConfig point_cfg = cfg.base;
        point_cfg.rfb = rfb;
        const std::int64_t K = std::llround(std::pow(2.0, rfb));

        MimoReport report;
        report.rfb = rfb;
        report.rfb_over_m2 = rfb / m2;
        report.K = K;
        report.rate_opt = opt.value;
        report.rate_opt_se = opt.std_error;
        if (out_of_budget()) {
            reports.push_back(report);  // computed stays false
            continue;
        }

        // Derived, not drawn: repeated sweeps with one seed reuse cached
        // codebooks byte-identically.
        const std::uint64_t design_seed =
            detail::derive_seed(rng.seed(), static_cast<std::uint64_t>(K), 0x4D);
        const Codebook codebook = sweep_codebook(cfg, K, design_seed);

        RngStream sim_rng = rng.fork();
        report.simulated = rate_finite_feedback(point_cfg, codebook, cfg.samples, sim_rng);

        const DrfBounds drf = model.t >= 1 ? drf_bounds(model, K) : DrfBounds{};
        const double d_lower = std::clamp(drf.lower, 0.0, s);
        const double d_upper = std::clamp(drf.upper, 0.0, s);
        report.eta_lower = 1.0 - d_lower / s;
        report.eta_upper = 1.0 - d_upper / s;

        RngStream pred_lo_rng = rng.fork();
        report.rate_pred_lower = rate_predicted(point_cfg, d_lower, cfg.samples, pred_lo_rng).value;
        RngStream pred_hi_rng = rng.fork();
        report.rate_pred_upper = rate_predicted(point_cfg, d_upper, cfg.samples, pred_hi_rng).value;

        RngStream dist_rng = rng.fork();
        const DistortionReport measured =
            mean_distortion(codebook, cfg.distortion_samples, dist_rng);
        const double d_measured = std::clamp(measured.mean, 0.0, s);
        report.eta_measured = 1.0 - d_measured / s;
        RngStream pred_m_rng = rng.fork();
        report.rate_pred_measured =
            rate_predicted(point_cfg, d_measured, cfg.samples, pred_m_rng).value;

        report.computed = true;
        reports.push_back(report);
    }
    return reports;
}

}  // namespace grassq
