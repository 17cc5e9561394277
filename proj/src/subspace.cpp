// SPDX-License-Identifier: Apache-2.0
//
// grassq: quantization on real and complex Grassmann manifolds
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#include "grassq/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace grassq {

namespace {

void check_dims(int n, int p) {
    if (n < 1 || p < 1 || p > n) {
        throw DimensionError("invalid Grassmannian dimensions n=" + std::to_string(n) +
                             " p=" + std::to_string(p) + " (need 1 <= p <= n)");
    }
}

void check_same_manifold(const Subspace& a, const Subspace& b) {
    if (a.n() != b.n() || a.p() != b.p() || a.field() != b.field()) {
        throw ShapeError("subspaces live on different manifolds: G_{" +
                         std::to_string(a.n()) + "," + std::to_string(a.p()) + "}(" +
                         field_code(a.field()) + ") vs G_{" + std::to_string(b.n()) + "," +
                         std::to_string(b.p()) + "}(" + field_code(b.field()) + ")");
    }
}

// QR-orthonormalizes columns in place, with each column scaled so that the
// corresponding R diagonal entry is positive real. For a Gaussian input this
// yields the invariant measure on the Stiefel manifold.
template <typename Matrix>
Matrix qr_orthonormalize(const Matrix& m) {
    const auto n = m.rows();
    const auto p = m.cols();
    Eigen::HouseholderQR<Matrix> qr(m);
    Matrix q = qr.householderQ() * Matrix::Identity(n, p);
    for (Eigen::Index j = 0; j < p; ++j) {
        const auto r = qr.matrixQR()(j, j);
        const double mag = std::abs(r);
        if (mag > 0.0) q.col(j) *= r / mag;
    }
    return q;
}

bool is_real_valued(const Eigen::MatrixXcd& m) {
    return m.imag().cwiseAbs().maxCoeff() == 0.0;
}

}  // namespace

double orthonormality_defect(const Eigen::MatrixXcd& basis) {
    const Eigen::MatrixXcd gram = basis.adjoint() * basis;
    const auto p = basis.cols();
    return (gram - Eigen::MatrixXcd::Identity(p, p)).cwiseAbs().maxCoeff();
}

Subspace Subspace::from_orthonormal(Eigen::MatrixXcd basis, Field field) {
    check_dims(static_cast<int>(basis.rows()), static_cast<int>(basis.cols()));
    if (field == Field::Real && !is_real_valued(basis)) {
        throw ArgumentError("real subspace basis has nonzero imaginary parts");
    }
    const double defect = orthonormality_defect(basis);
    if (!(defect <= kOrthonormalTol)) {
        throw ArgumentError("basis is not orthonormal: defect " + std::to_string(defect));
    }
    return Subspace(std::move(basis), field);
}

Subspace Subspace::span_of(const Eigen::MatrixXcd& m, Field field) {
    check_dims(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
    if (field == Field::Real) {
        if (!is_real_valued(m)) {
            throw ArgumentError("real subspace basis has nonzero imaginary parts");
        }
        Eigen::MatrixXd q = qr_orthonormalize<Eigen::MatrixXd>(m.real());
        return Subspace(q.cast<std::complex<double>>(), field);
    }
    return Subspace(qr_orthonormalize<Eigen::MatrixXcd>(m), field);
}

Subspace Subspace::coordinate_plane(int n, int p, Field field) {
    check_dims(n, p);
    return Subspace(Eigen::MatrixXcd::Identity(n, p), field);
}

Subspace haar_sample(int n, int p, Field field, RngStream& rng) {
    check_dims(n, p);
    if (field == Field::Real) {
        Eigen::MatrixXd g(n, p);
        for (int j = 0; j < p; ++j)
            for (int i = 0; i < n; ++i) g(i, j) = rng.gaussian();
        Eigen::MatrixXd q = qr_orthonormalize<Eigen::MatrixXd>(g);
        return Subspace::from_orthonormal(q.cast<std::complex<double>>(), field);
    }
    Eigen::MatrixXcd g(n, p);
    for (int j = 0; j < p; ++j)
        for (int i = 0; i < n; ++i) g(i, j) = rng.cgaussian();
    return Subspace::from_orthonormal(qr_orthonormalize<Eigen::MatrixXcd>(g), field);
}

Eigen::MatrixXcd haar_unitary(int n, Field field, RngStream& rng) {
    return haar_sample(n, n, field, rng).basis();
}

PrincipalAngles principal_angles(const Subspace& P, const Subspace& Q) {
    check_same_manifold(P, Q);
    const int p = P.p();
    const Eigen::MatrixXcd m = P.basis().adjoint() * Q.basis();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    Eigen::VectorXd cosines = svd.singularValues();  // descending

    Eigen::VectorXd angles(p);
    for (int i = 0; i < p; ++i) {
        const double c = std::clamp(cosines(p - 1 - i), 0.0, 1.0);
        angles(i) = std::acos(c);  // descending in i
    }

    // acos loses ~sqrt(eps) near cos = 1; recover small angles from the
    // singular values of (I - U_P U_P^H) U_Q, which are exactly sin(theta).
    if (cosines(0) > 1.0 - 1e-4) {
        const Eigen::MatrixXcd complement = Q.basis() - P.basis() * m;
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd_sin(complement);
        const Eigen::VectorXd sines = svd_sin.singularValues();  // descending
        for (int i = 0; i < p; ++i) {
            const double s = std::clamp(sines(i), 0.0, 1.0);
            if (s < M_SQRT1_2) angles(i) = std::asin(s);
        }
    }
    return PrincipalAngles{std::move(angles)};
}

double chordal_distance(const Subspace& P, const Subspace& Q) {
    check_same_manifold(P, Q);
    const int p = P.p();
    const int q = std::min(p, P.n() - p);
    const double max_d = std::sqrt(static_cast<double>(q));
    const Eigen::MatrixXcd m = P.basis().adjoint() * Q.basis();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const Eigen::VectorXd cosines = svd.singularValues();

    if (cosines(0) > 1.0 - 1e-4) {
        // Cancellation-free route: |(I - U_P U_P^H) U_Q|_F = sqrt(sum sin^2).
        const double d = (Q.basis() - P.basis() * m).norm();
        return std::min(d, max_d);
    }
    double sum = 0.0;
    for (int i = 0; i < p; ++i) {
        const double c = std::min(cosines(i), 1.0);
        sum += std::max(0.0, 1.0 - c * c);
    }
    return std::min(std::sqrt(sum), max_d);
}

double squared_chordal_distance(const Subspace& P, const Subspace& Q) {
    check_same_manifold(P, Q);
    const int p = P.p();
    const double q = static_cast<double>(std::min(p, P.n() - p));
    const double d2 = static_cast<double>(p) - (P.basis().adjoint() * Q.basis()).squaredNorm();
    return std::clamp(d2, 0.0, q);
}

Subspace apply_isometry(const Eigen::MatrixXcd& A, const Subspace& P) {
    if (A.rows() != A.cols() || A.rows() != P.n()) {
        throw ArgumentError("isometry must be a square " + std::to_string(P.n()) + "x" +
                            std::to_string(P.n()) + " matrix");
    }
    const double defect = orthonormality_defect(A);
    if (!(defect <= kOrthonormalTol)) {
        throw ArgumentError("isometry is not unitary: defect " + std::to_string(defect));
    }
    if (P.field() == Field::Real && A.imag().cwiseAbs().maxCoeff() != 0.0) {
        throw ArgumentError("isometry applied to a real subspace must be real (orthogonal)");
    }
    return Subspace::from_orthonormal(A * P.basis(), P.field());
}

}  // namespace grassq
