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
#include <vector>

#include "grassq/subspace.hpp"
#include "test_util.hpp"

using grassq::Field;
using grassq::RngStream;
using grassq::Subspace;

TEST_CASE("dimension and shape validation") {
    RngStream rng(1);
    CHECK_THROWS_AS(grassq::haar_sample(3, 4, Field::Complex, rng), grassq::DimensionError);
    CHECK_THROWS_AS(grassq::haar_sample(3, 0, Field::Complex, rng), grassq::DimensionError);
    CHECK_THROWS_AS(Subspace::coordinate_plane(2, 3, Field::Real), grassq::DimensionError);

    const auto p32 = grassq::haar_sample(3, 2, Field::Complex, rng);
    const auto p31 = grassq::haar_sample(3, 1, Field::Complex, rng);
    const auto p31r = grassq::haar_sample(3, 1, Field::Real, rng);
    CHECK_THROWS_AS(grassq::chordal_distance(p32, p31), grassq::ShapeError);
    CHECK_THROWS_AS(grassq::principal_angles(p31, p31r), grassq::ShapeError);

    Eigen::MatrixXcd skewed(3, 2);
    skewed << 1, 1, 0, 1, 0, 0;
    CHECK_THROWS_AS(Subspace::from_orthonormal(skewed, Field::Complex),
                    grassq::ArgumentError);
}

TEST_CASE("haar samples are orthonormal by construction") {
    RngStream rng(2);
    const auto real = grassq::haar_sample(4, 2, Field::Real, rng);
    CHECK(grassq::orthonormality_defect(real.basis()) <= 1e-10);
    CHECK(real.basis().imag().cwiseAbs().maxCoeff() == 0.0);

    const auto cplx = grassq::haar_sample(6, 3, Field::Complex, rng);
    CHECK(grassq::orthonormality_defect(cplx.basis()) <= 1e-10);
}

TEST_CASE("p = n is the whole space: distance zero to any plane") {
    RngStream rng(3);
    const auto full = grassq::haar_sample(3, 3, Field::Complex, rng);
    const auto fixed = Subspace::coordinate_plane(3, 3, Field::Complex);
    CHECK(grassq::chordal_distance(full, fixed) < 1e-9);
}

TEST_CASE("principal angles: identity, orthogonal lines, Gram identity") {
    RngStream rng(4);
    const auto p = grassq::haar_sample(5, 2, Field::Complex, rng);
    const auto same = grassq::principal_angles(p, p);
    CHECK(same.angles.size() == 2);
    CHECK(same.angles.maxCoeff() < 1e-8);

    const auto e1 = Subspace::coordinate_plane(2, 1, Field::Complex);
    Eigen::MatrixXcd e2m(2, 1);
    e2m << 0, 1;
    const auto e2 = Subspace::from_orthonormal(e2m, Field::Complex);
    const auto ortho = grassq::principal_angles(e1, e2);
    CHECK(ortho.angles(0) == doctest::Approx(M_PI / 2).epsilon(1e-12));

    // sum sin^2 theta_i == p - |U_P^H U_Q|_F^2, both sides computed directly
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = grassq::haar_sample(4, 2, Field::Complex, rng);
        const auto b = grassq::haar_sample(4, 2, Field::Complex, rng);
        const auto angles = grassq::principal_angles(a, b).angles;
        double lhs = 0.0;
        for (int i = 0; i < angles.size(); ++i) {
            lhs += std::sin(angles(i)) * std::sin(angles(i));
        }
        const double rhs = 2.0 - (a.basis().adjoint() * b.basis()).squaredNorm();
        CHECK(std::abs(lhs - rhs) < 1e-9);
    }
}

TEST_CASE("angles are sorted descending within [0, pi/2]") {
    RngStream rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const auto a = grassq::haar_sample(6, 3, Field::Real, rng);
        const auto b = grassq::haar_sample(6, 3, Field::Real, rng);
        const auto angles = grassq::principal_angles(a, b).angles;
        bool ok = true;
        for (int i = 0; i < angles.size(); ++i) {
            ok = ok && angles(i) >= 0.0 && angles(i) <= M_PI / 2 + 1e-12;
            if (i > 0) ok = ok && angles(i) <= angles(i - 1) + 1e-12;
        }
        CHECK(ok);
    }
}

TEST_CASE("angle count bound: p > n/2 forces intersection") {
    RngStream rng(6);
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = grassq::haar_sample(4, 3, Field::Complex, rng);
        const auto b = grassq::haar_sample(4, 3, Field::Complex, rng);
        const auto angles = grassq::principal_angles(a, b).angles;
        int zeros = 0;
        for (int i = 0; i < angles.size(); ++i) zeros += angles(i) < 1e-8;
        CHECK(zeros >= 2 * 3 - 4);  // 2p - n
    }
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = grassq::haar_sample(5, 3, Field::Real, rng);
        const auto b = grassq::haar_sample(5, 3, Field::Real, rng);
        const auto angles = grassq::principal_angles(a, b).angles;
        int zeros = 0;
        for (int i = 0; i < angles.size(); ++i) zeros += angles(i) < 1e-8;
        CHECK(zeros >= 1);
    }
}

TEST_CASE("chordal distance: fixed values and range") {
    RngStream rng(7);
    const auto p = grassq::haar_sample(4, 2, Field::Complex, rng);
    CHECK(grassq::chordal_distance(p, p) < 1e-9);

    const auto e1 = Subspace::coordinate_plane(2, 1, Field::Complex);
    Eigen::MatrixXcd e2m(2, 1);
    e2m << 0, 1;
    const auto e2 = Subspace::from_orthonormal(e2m, Field::Complex);
    CHECK(grassq::chordal_distance(e1, e2) == doctest::Approx(1.0).epsilon(1e-12));

    for (int trial = 0; trial < 100; ++trial) {
        const auto a = grassq::haar_sample(5, 3, Field::Complex, rng);
        const auto b = grassq::haar_sample(5, 3, Field::Complex, rng);
        const double d = grassq::chordal_distance(a, b);
        CHECK(d >= 0.0);
        CHECK(d <= std::sqrt(2.0) + 1e-12);  // sqrt(min(p, n-p))
    }
}

TEST_CASE("metric axioms on random triples") {
    RngStream rng(8);
    for (int trial = 0; trial < 10000; ++trial) {
        const auto a = grassq::haar_sample(3, 1, Field::Complex, rng);
        const auto b = grassq::haar_sample(3, 1, Field::Complex, rng);
        const auto c = grassq::haar_sample(3, 1, Field::Complex, rng);
        const double ab = grassq::chordal_distance(a, b);
        const double ba = grassq::chordal_distance(b, a);
        const double bc = grassq::chordal_distance(b, c);
        const double ac = grassq::chordal_distance(a, c);
        CHECK(std::abs(ab - ba) < 1e-12);
        CHECK(ac <= ab + bc + 1e-12);
        CHECK(ab >= 0.0);
    }
}

TEST_CASE("squared distance fast path agrees with the hybrid route") {
    RngStream rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = grassq::haar_sample(4, 2, Field::Complex, rng);
        const auto b = grassq::haar_sample(4, 2, Field::Complex, rng);
        const double d = grassq::chordal_distance(a, b);
        const double d2 = grassq::squared_chordal_distance(a, b);
        CHECK(std::abs(d * d - d2) < 1e-9);
    }
}

TEST_CASE("unitary invariance of the distance") {
    RngStream rng(10);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = grassq::haar_sample(4, 2, Field::Complex, rng);
        const auto b = grassq::haar_sample(4, 2, Field::Complex, rng);
        const auto u = grassq::haar_unitary(4, Field::Complex, rng);
        const double before = grassq::chordal_distance(a, b);
        const double after = grassq::chordal_distance(grassq::apply_isometry(u, a),
                                                      grassq::apply_isometry(u, b));
        CHECK(std::abs(before - after) < 1e-9);
    }
}

TEST_CASE("representative invariance: span(U) equals span(UQ)") {
    RngStream rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = grassq::haar_sample(5, 2, Field::Complex, rng);
        const auto q = grassq::haar_unitary(2, Field::Complex, rng);
        const auto rotated = Subspace::from_orthonormal(a.basis() * q, Field::Complex);
        CHECK(grassq::chordal_distance(a, rotated) < 1e-9);
    }
}

TEST_CASE("apply_isometry: identity, sign flip, validation") {
    RngStream rng(12);
    const auto p = grassq::haar_sample(3, 2, Field::Complex, rng);

    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(3, 3);
    CHECK(grassq::chordal_distance(grassq::apply_isometry(eye, p), p) < 1e-9);

    Eigen::MatrixXcd flip = Eigen::MatrixXcd::Identity(3, 3);
    flip(0, 0) = -1.0;
    const auto flipped = grassq::apply_isometry(flip, p);
    CHECK(grassq::orthonormality_defect(flipped.basis()) <= 1e-10);

    Eigen::MatrixXcd not_unitary = Eigen::MatrixXcd::Identity(3, 3) * 2.0;
    CHECK_THROWS_AS(grassq::apply_isometry(not_unitary, p), grassq::ArgumentError);
    CHECK_THROWS_AS(grassq::apply_isometry(Eigen::MatrixXcd::Identity(4, 4), p),
                    grassq::ArgumentError);

    const auto pr = grassq::haar_sample(3, 1, Field::Real, rng);
    Eigen::MatrixXcd complex_rot = grassq::haar_unitary(3, Field::Complex, rng);
    CHECK_THROWS_AS(grassq::apply_isometry(complex_rot, pr), grassq::ArgumentError);
}

TEST_CASE("haar distribution: squared distance to a fixed line is uniform on G_{2,1}(C)") {
    RngStream rng(13);
    const auto reference = Subspace::coordinate_plane(2, 1, Field::Complex);
    std::vector<double> d2;
    d2.reserve(100000);
    for (int i = 0; i < 100000; ++i) {
        const auto q = grassq::haar_sample(2, 1, Field::Complex, rng);
        d2.push_back(grassq::squared_chordal_distance(reference, q));
    }
    CHECK(testutil::ks_uniform_statistic(d2) < 0.01);
}
