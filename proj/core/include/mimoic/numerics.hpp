/*
 * Copyright 2026 The mimoic Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

     http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.

*/

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace mimoic {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Raised when a linear-algebra precondition (Hermitian input, positive
/// definiteness, full rank) does not hold.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace numerics {

/// Relative Frobenius tolerance used to accept a matrix as Hermitian.
inline constexpr double kHermitianTolerance = 1e-10;
/// Smallest admissible eigenvalue of a positive definite matrix, relative to
/// the largest one.
inline constexpr double kPositiveDefiniteFloor = 1e-12;

}  // namespace numerics

/// Square complex matrix equal to its own conjugate transpose.
///
/// Construction checks the relative Frobenius asymmetry against
/// kHermitianTolerance and then stores the exact Hermitian part, so every
/// downstream eigen-solver sees a bit-exact Hermitian matrix.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const CMatrix& entries);

  /// Zero matrix of the given dimension.
  static HermitianMatrix zero(Eigen::Index dim);
  /// Scaled identity.
  static HermitianMatrix identity(Eigen::Index dim, double scale = 1.0);

  [[nodiscard]] Eigen::Index dim() const { return entries_.rows(); }
  [[nodiscard]] const CMatrix& matrix() const { return entries_; }

  /// Returns *this + scale * I.
  [[nodiscard]] HermitianMatrix plus_identity(double scale) const;

  HermitianMatrix& operator+=(const HermitianMatrix& other);
  HermitianMatrix& operator-=(const HermitianMatrix& other);
  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }

  /// Adds weight * x x^H.
  void add_outer(const CVector& x, double weight);

  /// W^H A W, stored as its exact Hermitian part without the asymmetry check.
  /// Rounding in the product can exceed the tolerance for ill-conditioned A.
  [[nodiscard]] HermitianMatrix congruence(const CMatrix& w) const;

  /// W^H W.
  [[nodiscard]] static HermitianMatrix gram(const CMatrix& w);

 private:
  struct Trusted {};
  HermitianMatrix(CMatrix entries, Trusted) : entries_(std::move(entries)) {}

  CMatrix entries_;
};

/// Full spectrum of a Hermitian matrix, eigenvalues ascending.
struct EigResult {
  RVector values;
  CMatrix vectors;
};

/// Generalized eigenpairs of a Hermitian pencil (R, B) with B positive
/// definite. Values are descending and vectors are B-orthonormal
/// (vectors^H B vectors = I).
struct GevdResult {
  RVector values;
  CMatrix vectors;
};

/// Ascending eigendecomposition with deterministic phase: each eigenvector is
/// rotated so its largest-magnitude entry is real and nonnegative.
EigResult hermitian_eig_sorted(const HermitianMatrix& a);

/// Generalized eigendecomposition by symmetric reduction: B = L L^H,
/// C = L^-1 R L^-H, ordinary EVD of C, back-transform by L^-H.
/// Throws NumericError naming the smallest eigenvalue of B when B fails the
/// positive-definite floor or the dimensions differ.
GevdResult gevd_hpd(const HermitianMatrix& r, const HermitianMatrix& b);

/// Solves B X = rhs for Hermitian positive definite B (Cholesky).
CMatrix solve_hpd(const HermitianMatrix& b, const CMatrix& rhs);

/// Rotates every column so its largest-magnitude entry is real nonnegative.
void normalize_column_phases(CMatrix& columns);

/// Scales every column to unit 2-norm. Throws NumericError on a zero column.
void normalize_columns(CMatrix& columns);

/// Relative Frobenius distance between a and a^H.
double hermitian_defect(const CMatrix& a);

}  // namespace mimoic
