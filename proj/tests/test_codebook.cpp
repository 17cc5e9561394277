// SPDX-License-Identifier: Apache-2.0
//
// grassq: quantization on real and complex Grassmann manifolds
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

#include "grassq/bounds.hpp"
#include "grassq/codebook.hpp"
#include "test_util.hpp"

using grassq::Codebook;
using grassq::CodebookMeta;
using grassq::Field;
using grassq::RngStream;
using grassq::Subspace;

namespace {

std::vector<Subspace> haar_entries(int n, int p, Field field, std::int64_t k,
                                   RngStream& rng) {
    std::vector<Subspace> entries;
    for (std::int64_t i = 0; i < k; ++i) entries.push_back(grassq::haar_sample(n, p, field, rng));
    return entries;
}

// Independent linear scan using the angle-based distance route.
std::pair<std::int64_t, double> brute_force_quantize(const Codebook& cb, const Subspace& q) {
    std::int64_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::int64_t i = 0; i < cb.size(); ++i) {
        const double d = grassq::chordal_distance(cb.entry(i), q);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return {best, best_d * best_d};
}

}  // namespace

TEST_CASE("codebook construction validates shapes and records min distance") {
    RngStream rng(41);
    auto entries = haar_entries(3, 1, Field::Complex, 6, rng);
    const auto cb = Codebook::from_entries(entries, CodebookMeta{"test", 41, 0, 0.0});
    CHECK(cb.size() == 6);
    CHECK(cb.meta().min_distance ==
          doctest::Approx(grassq::min_pairwise_distance(entries)).epsilon(1e-12));

    auto mixed = haar_entries(3, 1, Field::Complex, 2, rng);
    mixed.push_back(grassq::haar_sample(3, 2, Field::Complex, rng));
    CHECK_THROWS_AS(Codebook::from_entries(mixed, CodebookMeta{}), grassq::ShapeError);
    CHECK_THROWS_AS(Codebook::from_entries({}, CodebookMeta{}), grassq::ArgumentError);
}

TEST_CASE("quantize: exact member, K = 1, tie to lowest index") {
    RngStream rng(42);
    auto entries = haar_entries(3, 1, Field::Complex, 5, rng);
    const Subspace target = entries[3];
    const auto cb = Codebook::from_entries(entries, CodebookMeta{"test", 42, 0, 0.0});
    const auto [idx, d2] = grassq::quantize(cb, target);
    CHECK(idx == 3);
    CHECK(d2 < 1e-12);

    const auto single = Codebook::from_entries(haar_entries(2, 1, Field::Complex, 1, rng),
                                               CodebookMeta{"test", 42, 0, 0.0});
    const Subspace q = grassq::haar_sample(2, 1, Field::Complex, rng);
    const auto [i0, dist] = grassq::quantize(single, q);
    CHECK(i0 == 0);
    CHECK(dist == doctest::Approx(grassq::squared_chordal_distance(single.entry(0), q))
                      .epsilon(1e-12));

    // duplicated entry: the earlier index wins
    std::vector<Subspace> dup = {entries[0], entries[0], entries[1]};
    const auto cb_dup = Codebook::from_entries(dup, CodebookMeta{"test", 42, 0, 0.0});
    CHECK(grassq::quantize(cb_dup, entries[0]).first == 0);

    CHECK_THROWS_AS(grassq::quantize(cb, grassq::haar_sample(4, 1, Field::Complex, rng)),
                    grassq::ShapeError);
}

TEST_CASE("quantize agrees with an independently coded linear scan") {
    RngStream rng(43);
    const auto cb = Codebook::from_entries(haar_entries(3, 1, Field::Complex, 16, rng),
                                           CodebookMeta{"test", 43, 0, 0.0});
    for (int trial = 0; trial < 200; ++trial) {
        const Subspace q = grassq::haar_sample(3, 1, Field::Complex, rng);
        const auto fast = grassq::quantize(cb, q);
        const auto slow = brute_force_quantize(cb, q);
        CHECK(fast.first == slow.first);
        CHECK(std::abs(fast.second - slow.second) < 1e-9);
    }
}

TEST_CASE("mean distortion: K = 1 on G_{2,1}(C) has analytic mean 1/2") {
    // d^2 against a fixed line is Uniform[0,1], so E[d^2] = 1/2.
    RngStream rng(44);
    const auto cb = Codebook::from_entries(haar_entries(2, 1, Field::Complex, 1, rng),
                                           CodebookMeta{"test", 44, 0, 0.0});
    const auto report = grassq::mean_distortion(cb, 40000, rng);
    CHECK(std::abs(report.mean - 0.5) <= 3.0 * report.std_error);
    CHECK(report.K == 1);
    CHECK(report.samples == 40000);
}

TEST_CASE("mean distortion: full-space codeword gives zero") {
    RngStream rng(45);
    const auto cb = Codebook::from_entries({Subspace::coordinate_plane(3, 3, Field::Complex)},
                                           CodebookMeta{"test", 45, 0, 0.0});
    const auto report = grassq::mean_distortion(cb, 2000, rng);
    CHECK(report.mean < 1e-12);
}

TEST_CASE("mean distortion is invariant under a global rotation") {
    RngStream rng(46);
    auto entries = haar_entries(3, 1, Field::Complex, 8, rng);
    const auto cb = Codebook::from_entries(entries, CodebookMeta{"test", 46, 0, 0.0});
    const auto u = grassq::haar_unitary(3, Field::Complex, rng);
    std::vector<Subspace> rotated;
    for (const auto& e : entries) rotated.push_back(grassq::apply_isometry(u, e));
    const auto cb_rot = Codebook::from_entries(rotated, CodebookMeta{"test", 46, 0, 0.0});

    RngStream eval_a(4646);
    RngStream eval_b(64646);
    const auto da = grassq::mean_distortion(cb, 40000, eval_a);
    const auto db = grassq::mean_distortion(cb_rot, 40000, eval_b);
    CHECK(std::abs(da.mean - db.mean) <= 3.0 * std::hypot(da.std_error, db.std_error));
}

TEST_CASE("nested codebooks: distortion never grows with more codewords") {
    RngStream rng(47);
    auto small = haar_entries(3, 1, Field::Complex, 8, rng);
    auto large = small;
    for (auto& extra : haar_entries(3, 1, Field::Complex, 8, rng)) large.push_back(extra);
    const auto cb_small = Codebook::from_entries(small, CodebookMeta{"test", 47, 0, 0.0});
    const auto cb_large = Codebook::from_entries(large, CodebookMeta{"test", 47, 0, 0.0});
    RngStream eval_a(4747);
    RngStream eval_b(74747);
    const auto ds = grassq::mean_distortion(cb_small, 30000, eval_a);
    const auto dl = grassq::mean_distortion(cb_large, 30000, eval_b);
    CHECK(dl.mean <= ds.mean + 3.0 * std::hypot(ds.std_error, dl.std_error));
}

TEST_CASE("max-min design: two lines in G_{2,1}(C) become orthogonal") {
    RngStream rng(48);
    const auto cb = grassq::design_maxmin(2, 1, Field::Complex, 2,
                                          grassq::DesignBudget{8, 4000}, rng);
    CHECK(cb.meta().min_distance == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(cb.meta().designer == "maxmin");
}

TEST_CASE("max-min design dominates the best of 200 random codebooks") {
    RngStream rng(49);
    const auto designed = grassq::design_maxmin(2, 1, Field::Complex, 4,
                                                grassq::DesignBudget{8, 3000}, rng);
    double best_random = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto entries = haar_entries(2, 1, Field::Complex, 4, rng);
        best_random = std::max(best_random, grassq::min_pairwise_distance(entries));
    }
    CHECK(designed.meta().min_distance >= best_random);
}

TEST_CASE("max-min design respects the Hamming-style converse with slack") {
    RngStream rng(50);
    const auto model = grassq::BallVolumeModel::complex_model(2, 1);
    const std::int64_t k = 64;
    const auto cb =
        grassq::design_maxmin(2, 1, Field::Complex, k, grassq::DesignBudget{6, 2500}, rng);
    const double cap =
        2.0 * std::pow(model.c * static_cast<double>(k), -1.0 / model.t) * 1.5;
    CHECK(cb.meta().min_distance <= cap);
}

TEST_CASE("max-min design is deterministic and budget-capped") {
    RngStream a(51);
    RngStream b(51);
    const auto cb1 = grassq::design_maxmin(3, 1, Field::Complex, 8,
                                           grassq::DesignBudget{4, 500}, a);
    const auto cb2 = grassq::design_maxmin(3, 1, Field::Complex, 8,
                                           grassq::DesignBudget{4, 500}, b);
    CHECK(cb1.meta().min_distance == cb2.meta().min_distance);
    for (std::int64_t i = 0; i < cb1.size(); ++i) {
        CHECK((cb1.entry(i).basis() - cb2.entry(i).basis()).cwiseAbs().maxCoeff() == 0.0);
    }

    RngStream c(51);
    const auto init_only = grassq::design_maxmin(3, 1, Field::Complex, 8,
                                                 grassq::DesignBudget{4, 0}, c);
    CHECK(init_only.meta().designer == "maxmin-init");
    CHECK(init_only.meta().min_distance <= cb1.meta().min_distance);

    RngStream d(51);
    CHECK_THROWS_AS(grassq::design_maxmin(3, 1, Field::Complex, 1,
                                          grassq::DesignBudget{4, 10}, d),
                    grassq::ArgumentError);
    CHECK_THROWS_AS(grassq::design_maxmin(3, 1, Field::Complex, 8,
                                          grassq::DesignBudget{0, 10}, d),
                    grassq::ArgumentError);
}

TEST_CASE("real-field design works through the same machinery") {
    RngStream rng(52);
    const auto cb = grassq::design_maxmin(3, 1, Field::Real, 4,
                                          grassq::DesignBudget{4, 1500}, rng);
    CHECK(cb.field() == Field::Real);
    CHECK(cb.meta().min_distance > 0.5);
    for (std::int64_t i = 0; i < cb.size(); ++i) {
        CHECK(cb.entry(i).basis().imag().cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("random-code experiment approaches its limiting constant") {
    RngStream rng(53);
    // G_{2,1}(C), t = 2, c = 1: limit constant is 2*Gamma(1)/2 = 1, and at
    // finite K the exact value is K/(K+1).
    const auto summary =
        grassq::random_code_experiment(2, 1, Field::Complex, 64, 24, 1200, rng);
    CHECK(summary.t == 2);
    CHECK(std::abs(summary.scaled_mean - 1.0) < 0.05);
    CHECK(summary.per_trial.size() == 24);

    // doubling K by 2^t quarters the unscaled mean
    RngStream rng2(54);
    const auto a = grassq::random_code_experiment(2, 1, Field::Complex, 32, 24, 1200, rng2);
    const auto b = grassq::random_code_experiment(2, 1, Field::Complex, 128, 24, 1200, rng2);
    const double unscaled_a = a.scaled_mean / std::pow(32.0, 1.0);
    const double unscaled_b = b.scaled_mean / std::pow(128.0, 1.0);
    CHECK(unscaled_a / unscaled_b == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("designed codebooks sit inside the distortion-rate sandwich") {
    RngStream rng(55);
    const auto model = grassq::BallVolumeModel::complex_model(3, 1);
    for (const std::int64_t k : {64LL, 1024LL}) {
        const auto cb = grassq::design_maxmin(3, 1, Field::Complex, k,
                                              grassq::DesignBudget{4, 3000}, rng);
        const auto report = grassq::mean_distortion(cb, 30000, rng);
        const auto bounds = grassq::drf_bounds(model, k);
        CHECK(report.mean >= bounds.lower);
        CHECK(report.mean <= 1.1 * bounds.upper);
    }
}

TEST_CASE("a single random codebook at K = 2^10 lands near the ensemble average") {
    RngStream rng(58);
    const auto model = grassq::BallVolumeModel::complex_model(4, 2);
    const auto cb = grassq::random_codebook(4, 2, Field::Complex, 1024, rng);
    const auto report = grassq::mean_distortion(cb, 20000, rng);
    const auto bounds = grassq::drf_bounds(model, 1024);
    CHECK(report.mean >= bounds.lower);
    CHECK(report.mean <= 1.25 * bounds.upper);
}

TEST_CASE("codebook file round-trip is exact") {
    RngStream rng(56);
    const auto dir = std::filesystem::temp_directory_path();
    const auto path = dir / "grassq_roundtrip_test.gqcb";

    for (Field field : {Field::Complex, Field::Real}) {
        auto entries = haar_entries(3, 2, field, 5, rng);
        const auto cb = Codebook::from_entries(entries, CodebookMeta{"maxmin", 77, 9, 0.0});
        grassq::save_codebook(cb, path);

        const auto loaded = grassq::load_codebook(path);
        CHECK(loaded.size() == cb.size());
        CHECK(loaded.n() == 3);
        CHECK(loaded.p() == 2);
        CHECK(loaded.field() == field);
        CHECK(loaded.meta().designer == "maxmin");
        CHECK(loaded.meta().seed == 77);
        CHECK(loaded.meta().min_distance == cb.meta().min_distance);
        for (std::int64_t i = 0; i < cb.size(); ++i) {
            CHECK((loaded.entry(i).basis() - cb.entry(i).basis()).cwiseAbs().maxCoeff() <=
                  1e-12);
        }
        // payload size: 2 text lines + 8 bytes per double
        const auto file_size = std::filesystem::file_size(path);
        const std::int64_t doubles = 5 * 3 * 2 * (field == Field::Complex ? 2 : 1);
        CHECK(static_cast<std::int64_t>(file_size) > 8 * doubles);
    }
    std::filesystem::remove(path);
}

TEST_CASE("codebook file errors: truncation, corruption, bad headers") {
    RngStream rng(57);
    const auto dir = std::filesystem::temp_directory_path();
    const auto path = dir / "grassq_io_error_test.gqcb";

    const auto cb = Codebook::from_entries(haar_entries(3, 1, Field::Complex, 4, rng),
                                           CodebookMeta{"test", 1, 0, 0.0});
    grassq::save_codebook(cb, path);

    // truncated payload
    {
        const std::string full = testutil::read_file(path.string());
        std::ofstream out(path, std::ios::binary);
        out << full.substr(0, full.size() - 11);
    }
    CHECK_THROWS_AS(grassq::load_codebook(path), grassq::ParseError);

    // non-orthonormal entry: scale one payload double
    grassq::save_codebook(cb, path);
    {
        std::string full = testutil::read_file(path.string());
        const std::size_t header_end = full.find('\n', full.find('\n') + 1) + 1;
        double v = 0.0;
        std::memcpy(&v, full.data() + header_end, 8);
        v *= 3.0;
        std::memcpy(full.data() + header_end, &v, 8);
        std::ofstream out(path, std::ios::binary);
        out << full;
    }
    try {
        grassq::load_codebook(path);
        CHECK(false);
    } catch (const grassq::ValidationError& e) {
        CHECK(std::string(e.what()).find("entry 0") != std::string::npos);
    }

    // wrong magic
    {
        std::ofstream out(path, std::ios::binary);
        out << "NOT-A-CODEBOOK\nfield=C n=3 p=1 K=1 designer=x seed=0 mindist=0\n";
    }
    CHECK_THROWS_AS(grassq::load_codebook(path), grassq::ParseError);

    // malformed header line
    {
        std::ofstream out(path, std::ios::binary);
        out << "GRASSQ-CB v1\nfield=C n=3 p=1 K=zebra designer=x seed=0 mindist=0\n";
    }
    CHECK_THROWS_AS(grassq::load_codebook(path), grassq::ParseError);

    CHECK_THROWS_AS(grassq::load_codebook(dir / "grassq_does_not_exist.gqcb"),
                    grassq::ParseError);

    // designer token with a space cannot be saved
    const auto bad = Codebook::from_entries(haar_entries(2, 1, Field::Complex, 2, rng),
                                            CodebookMeta{"two words", 1, 0, 0.0});
    CHECK_THROWS_AS(grassq::save_codebook(bad, path), grassq::ArgumentError);

    std::filesystem::remove(path);
}
