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

#include <Eigen/Dense>

#include "grassq/field.hpp"
#include "grassq/rng.hpp"

namespace grassq {

/// Orthonormality tolerance for constructing and validating bases.
constexpr double kOrthonormalTol = 1e-10;

/// Max-abs entry of B^H B - I (plain transpose when B is real-valued).
double orthonormality_defect(const Eigen::MatrixXcd& basis);

/// A point on the Grassmann manifold G_{n,p}: a p-dimensional plane through
/// the origin of R^n or C^n, represented by one orthonormal basis. All
/// operations are invariant under right multiplication of the basis by a
/// unitary, i.e. they depend on the plane only.
///
/// Real subspaces are stored with exactly zero imaginary parts.
class Subspace {
  public:
    /// Wraps an orthonormal basis; throws ArgumentError if the columns are
    /// not orthonormal to kOrthonormalTol, DimensionError on bad (n, p).
    static Subspace from_orthonormal(Eigen::MatrixXcd basis, Field field);

    /// Column span of an arbitrary full-rank matrix (QR orthonormalization).
    static Subspace span_of(const Eigen::MatrixXcd& m, Field field);

    /// span(e_1, ..., e_p): the fixed reference plane used by estimators.
    static Subspace coordinate_plane(int n, int p, Field field);

    int n() const { return static_cast<int>(basis_.rows()); }
    int p() const { return static_cast<int>(basis_.cols()); }
    Field field() const { return field_; }
    const Eigen::MatrixXcd& basis() const { return basis_; }

  private:
    Subspace(Eigen::MatrixXcd basis, Field field)
        : basis_(std::move(basis)), field_(field) {}

    Eigen::MatrixXcd basis_;
    Field field_;
};

/// Principal angles between two planes, in [0, pi/2], sorted descending.
struct PrincipalAngles {
    Eigen::VectorXd angles;
};

/// Draws a plane from the invariant (uniform) measure on G_{n,p}: i.i.d.
/// Gaussian n x p matrix orthonormalized by QR with the R diagonal phase
/// normalized. Throws DimensionError unless 1 <= p <= n.
Subspace haar_sample(int n, int p, Field field, RngStream& rng);

/// Haar-distributed n x n unitary (orthogonal for Field::Real).
Eigen::MatrixXcd haar_unitary(int n, Field field, RngStream& rng);

/// theta_i = arccos sigma_i with sigma_i the singular values of U_P^H U_Q
/// clamped to [0, 1]; small angles are refined through the complementary
/// projection so that near-identical planes report angles at roundoff level.
PrincipalAngles principal_angles(const Subspace& P, const Subspace& Q);

/// Chordal distance d_c = sqrt(sum_i sin^2 theta_i); range [0, sqrt(min(p, n-p))].
double chordal_distance(const Subspace& P, const Subspace& Q);

/// d_c^2 via the Gram identity sum sin^2 theta_i = p - |U_P^H U_Q|_F^2,
/// clamped to [0, min(p, n-p)]. The cheap path used by quantizer loops.
double squared_chordal_distance(const Subspace& P, const Subspace& Q);

/// span(A U_P) for a unitary (orthogonal) n x n matrix A.
/// Throws ArgumentError if A is not unitary to kOrthonormalTol, or if A has
/// nonzero imaginary parts while P is real.
Subspace apply_isometry(const Eigen::MatrixXcd& A, const Subspace& P);

}  // namespace grassq
