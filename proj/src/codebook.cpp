// SPDX-License-Identifier: Apache-2.0
//
// grassq: quantization on real and complex Grassmann manifolds
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#include "grassq/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "grassq/mc.hpp"

namespace grassq {

namespace {

constexpr std::int64_t kMaxDesignSize = 4096;  // O(K^2) distance matrix cap

double clamp_d2(double d2, double q) { return std::clamp(d2, 0.0, q); }

// Squared chordal distance between two orthonormal bases on the same manifold.
double basis_d2(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, double q) {
    const double p = static_cast<double>(a.cols());
    return clamp_d2(p - (a.adjoint() * b).squaredNorm(), q);
}

Eigen::MatrixXcd stack_adjoints(const std::vector<Subspace>& entries) {
    const auto k = static_cast<Eigen::Index>(entries.size());
    const Eigen::Index n = entries.front().n();
    const Eigen::Index p = entries.front().p();
    Eigen::MatrixXcd s(k * p, n);
    for (Eigen::Index i = 0; i < k; ++i) {
        s.middleRows(i * p, p) = entries[static_cast<std::size_t>(i)].basis().adjoint();
    }
    return s;
}

}  // namespace

double min_pairwise_distance(const std::vector<Subspace>& entries) {
    const auto k = static_cast<std::int64_t>(entries.size());
    if (k < 2) return 0.0;
    const int n = entries.front().n();
    const int p = entries.front().p();
    const double q = static_cast<double>(std::min(p, n - p));
    const Eigen::MatrixXcd stacked = stack_adjoints(entries);
    double min_d2 = std::numeric_limits<double>::infinity();
    for (std::int64_t i = 0; i + 1 < k; ++i) {
        const auto rows = (k - 1 - i) * p;
        const Eigen::MatrixXcd grams =
            stacked.bottomRows(rows) * entries[static_cast<std::size_t>(i)].basis();
        for (std::int64_t j = i + 1; j < k; ++j) {
            const double d2 =
                clamp_d2(p - grams.middleRows((j - i - 1) * p, p).squaredNorm(), q);
            min_d2 = std::min(min_d2, d2);
        }
    }
    return std::sqrt(min_d2);
}

Codebook Codebook::from_entries(std::vector<Subspace> entries, CodebookMeta meta) {
    if (entries.empty()) throw ArgumentError("codebook needs at least one entry");
    const Subspace& first = entries.front();
    for (const auto& e : entries) {
        if (e.n() != first.n() || e.p() != first.p() || e.field() != first.field()) {
            throw ShapeError("codebook entries live on different manifolds");
        }
    }
    Codebook cb;
    cb.n_ = first.n();
    cb.p_ = first.p();
    cb.field_ = first.field();
    cb.meta_ = std::move(meta);
    cb.meta_.min_distance = min_pairwise_distance(entries);
    cb.entries_ = std::move(entries);
    cb.stacked_ = stack_adjoints(cb.entries_);
    return cb;
}

std::pair<std::int64_t, double> quantize(const Codebook& codebook, const Subspace& q) {
    if (q.n() != codebook.n() || q.p() != codebook.p() || q.field() != codebook.field()) {
        throw ShapeError("source plane does not match the codebook manifold");
    }
    const int p = codebook.p();
    const double qdim = static_cast<double>(std::min(p, codebook.n() - p));
    const Eigen::MatrixXcd grams = codebook.stacked_adjoint() * q.basis();
    std::int64_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::int64_t k = 0; k < codebook.size(); ++k) {
        const double d2 = clamp_d2(p - grams.middleRows(k * p, p).squaredNorm(), qdim);
        if (d2 < best_d2) {  // strict: ties keep the lowest index
            best_d2 = d2;
            best = k;
        }
    }
    return {best, best_d2};
}

DistortionReport mean_distortion(const Codebook& codebook, std::int64_t samples,
                                 RngStream& rng) {
    if (samples < 1) throw ArgumentError("mean_distortion: samples must be positive");
    RngStream root = rng.fork();
    auto chunks = run_chunked<MomentSums>(
        samples, kMcChunkSize, root,
        [&](RngStream& r, std::int64_t count, std::int64_t) {
            MomentSums acc;
            for (std::int64_t s = 0; s < count; ++s) {
                const Subspace q = haar_sample(codebook.n(), codebook.p(), codebook.field(), r);
                acc.add(quantize(codebook, q).second);
            }
            return acc;
        });
    const MeanSe stat = reduce_moments(chunks);
    return {stat.mean, stat.std_error, stat.samples, codebook.size()};
}

Codebook random_codebook(int n, int p, Field field, std::int64_t K, RngStream& rng) {
    if (K < 1) throw ArgumentError("code size K must be at least 1");
    std::vector<Subspace> entries;
    entries.reserve(static_cast<std::size_t>(K));
    const std::uint64_t seed = rng.seed();
    for (std::int64_t i = 0; i < K; ++i) entries.push_back(haar_sample(n, p, field, rng));
    CodebookMeta meta;
    meta.designer = "random";
    meta.seed = seed;
    return Codebook::from_entries(std::move(entries), std::move(meta));
}

namespace {

// Working state for the max-min search: squared-distance matrix plus per-row
// minima so one replacement costs O(K) instead of O(K^2).
struct PackingState {
    double q = 0.0;
    std::vector<Eigen::MatrixXcd> bases;
    Eigen::MatrixXd d2;          // symmetric, diagonal at +inf
    std::vector<double> rowmin;
    std::vector<std::int64_t> rowarg;

    std::int64_t size() const { return static_cast<std::int64_t>(bases.size()); }

    void rebuild() {
        const auto k = size();
        d2.setConstant(k, k, std::numeric_limits<double>::infinity());
        rowmin.assign(static_cast<std::size_t>(k), std::numeric_limits<double>::infinity());
        rowarg.assign(static_cast<std::size_t>(k), -1);
        for (std::int64_t i = 0; i < k; ++i) {
            for (std::int64_t j = i + 1; j < k; ++j) {
                const double d = basis_d2(bases[static_cast<std::size_t>(i)],
                                          bases[static_cast<std::size_t>(j)], q);
                d2(i, j) = d2(j, i) = d;
            }
        }
        for (std::int64_t i = 0; i < k; ++i) rescan_row(i);
    }

    void rescan_row(std::int64_t i) {
        double best = std::numeric_limits<double>::infinity();
        std::int64_t arg = -1;
        for (std::int64_t j = 0; j < size(); ++j) {
            if (j != i && d2(i, j) < best) {
                best = d2(i, j);
                arg = j;
            }
        }
        rowmin[static_cast<std::size_t>(i)] = best;
        rowarg[static_cast<std::size_t>(i)] = arg;
    }

    std::int64_t global_argmin() const {
        std::int64_t best = 0;
        for (std::int64_t i = 1; i < size(); ++i) {
            if (rowmin[static_cast<std::size_t>(i)] < rowmin[static_cast<std::size_t>(best)])
                best = i;
        }
        return best;
    }

    double global_min() const { return rowmin[static_cast<std::size_t>(global_argmin())]; }
};

}  // namespace

Codebook design_maxmin(int n, int p, Field field, std::int64_t K, DesignBudget budget,
                       RngStream& rng) {
    if (K < 2) throw ArgumentError("max-min design needs K >= 2");
    if (K > kMaxDesignSize) {
        throw ArgumentError("max-min design is capped at K = " +
                            std::to_string(kMaxDesignSize) + "; use random codebooks");
    }
    if (budget.candidates < 1) throw ArgumentError("design budget needs candidates >= 1");
    if (budget.iterations < 0) throw ArgumentError("design budget iterations must be >= 0");

    const std::uint64_t seed = rng.seed();
    RngStream init_root = rng.fork();
    RngStream refine_rng = rng.fork();

    PackingState state;
    state.q = static_cast<double>(std::min(p, n - p));

    // Screen random initializations, keep the best packing.
    double best_init = -1.0;
    std::vector<Eigen::MatrixXcd> best_bases;
    for (int c = 0; c < budget.candidates; ++c) {
        RngStream r = init_root.substream(static_cast<std::uint64_t>(c));
        std::vector<Eigen::MatrixXcd> bases;
        bases.reserve(static_cast<std::size_t>(K));
        std::vector<Subspace> entries;
        entries.reserve(static_cast<std::size_t>(K));
        for (std::int64_t i = 0; i < K; ++i) {
            entries.push_back(haar_sample(n, p, field, r));
            bases.push_back(entries.back().basis());
        }
        const double min_d = min_pairwise_distance(entries);
        if (min_d > best_init) {
            best_init = min_d;
            best_bases = std::move(bases);
        }
    }
    state.bases = std::move(best_bases);
    state.rebuild();

    // Repulsion: replace one member of the closest pair, accept only strict
    // improvements of the global minimum distance.
    double sigma = 0.5;
    std::vector<double> dnew(static_cast<std::size_t>(K));
    for (std::int64_t iter = 0; iter < budget.iterations; ++iter) {
        const std::int64_t i = state.global_argmin();
        const std::int64_t j = state.rowarg[static_cast<std::size_t>(i)];
        const double current = state.d2(i, j);
        const std::int64_t victim = (iter & 1) ? i : j;

        Eigen::MatrixXcd proposal;
        if (iter % 8 == 7) {
            proposal = haar_sample(n, p, field, refine_rng).basis();
        } else {
            Eigen::MatrixXcd noise(n, p);
            for (int col = 0; col < p; ++col) {
                for (int row = 0; row < n; ++row) {
                    noise(row, col) = field == Field::Real
                                          ? std::complex<double>(refine_rng.gaussian(), 0.0)
                                          : refine_rng.cgaussian();
                }
            }
            proposal = Subspace::span_of(
                           state.bases[static_cast<std::size_t>(victim)] + sigma * noise,
                           field)
                           .basis();
        }

        double prop_min = std::numeric_limits<double>::infinity();
        for (std::int64_t k = 0; k < K; ++k) {
            if (k == victim) continue;
            dnew[static_cast<std::size_t>(k)] =
                basis_d2(proposal, state.bases[static_cast<std::size_t>(k)], state.q);
            prop_min = std::min(prop_min, dnew[static_cast<std::size_t>(k)]);
        }

        bool accept = prop_min > current;
        if (accept) {
            // The full new global minimum: rows whose minimum sat on the
            // victim must be rescanned against the proposal.
            double new_global = prop_min;
            for (std::int64_t k = 0; k < K && accept; ++k) {
                if (k == victim) continue;
                double row;
                if (state.rowarg[static_cast<std::size_t>(k)] == victim) {
                    row = dnew[static_cast<std::size_t>(k)];
                    for (std::int64_t m = 0; m < K; ++m) {
                        if (m != k && m != victim) row = std::min(row, state.d2(k, m));
                    }
                } else {
                    row = std::min(state.rowmin[static_cast<std::size_t>(k)],
                                   dnew[static_cast<std::size_t>(k)]);
                }
                new_global = std::min(new_global, row);
            }
            accept = new_global > current;
        }

        if (accept) {
            state.bases[static_cast<std::size_t>(victim)] = proposal;
            for (std::int64_t k = 0; k < K; ++k) {
                if (k == victim) continue;
                state.d2(victim, k) = state.d2(k, victim) = dnew[static_cast<std::size_t>(k)];
            }
            for (std::int64_t k = 0; k < K; ++k) {
                if (k == victim) continue;
                if (state.rowarg[static_cast<std::size_t>(k)] == victim) {
                    state.rescan_row(k);
                } else if (dnew[static_cast<std::size_t>(k)] <
                           state.rowmin[static_cast<std::size_t>(k)]) {
                    state.rowmin[static_cast<std::size_t>(k)] =
                        dnew[static_cast<std::size_t>(k)];
                    state.rowarg[static_cast<std::size_t>(k)] = victim;
                }
            }
            state.rescan_row(victim);
            sigma = std::min(sigma * 1.25, 0.8);
        } else {
            sigma = std::max(sigma * 0.98, 1e-4);
        }
    }

    std::vector<Subspace> entries;
    entries.reserve(static_cast<std::size_t>(K));
    for (const auto& b : state.bases) entries.push_back(Subspace::from_orthonormal(b, field));
    CodebookMeta meta;
    meta.designer = budget.iterations == 0 ? "maxmin-init" : "maxmin";
    meta.seed = seed;
    meta.iterations = budget.iterations;
    return Codebook::from_entries(std::move(entries), std::move(meta));
}

RandomCodeSummary random_code_experiment(int n, int p, Field field, std::int64_t K,
                                         std::int64_t trials,
                                         std::int64_t samples_per_trial, RngStream& rng) {
    if (K < 1) throw ArgumentError("code size K must be at least 1");
    if (trials < 1 || samples_per_trial < 1) {
        throw ArgumentError("random_code_experiment needs trials >= 1 and samples >= 1");
    }
    const int t = field_beta(field) * p * (n - p);
    if (t < 1) throw ArgumentError("random_code_experiment needs manifold dimension t >= 1");
    const double scale = std::pow(static_cast<double>(K), 2.0 / static_cast<double>(t));

    RngStream root = rng.fork();
    auto per_trial = run_chunked<RandomCodeTrial>(
        trials, 1, root, [&](RngStream& r, std::int64_t, std::int64_t) {
            const Codebook code = random_codebook(n, p, field, K, r);
            RandomCodeTrial trial;
            trial.K = K;
            trial.nearest_sq_distances.reserve(static_cast<std::size_t>(samples_per_trial));
            double sum = 0.0;
            for (std::int64_t s = 0; s < samples_per_trial; ++s) {
                const Subspace q = haar_sample(n, p, field, r);
                const double w = quantize(code, q).second;
                trial.nearest_sq_distances.push_back(w);
                sum += w;
            }
            trial.scaled_statistic = scale * sum / static_cast<double>(samples_per_trial);
            return trial;
        });

    std::vector<MomentSums> stats(1);
    for (const auto& trial : per_trial) stats[0].add(trial.scaled_statistic);
    const MeanSe agg = reduce_moments(stats);

    RandomCodeSummary summary;
    summary.scaled_mean = agg.mean;
    summary.scaled_se = agg.std_error;
    summary.K = K;
    summary.t = t;
    summary.trials = trials;
    summary.samples_per_trial = samples_per_trial;
    summary.per_trial = std::move(per_trial);
    return summary;
}

}  // namespace grassq
