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

#include "mimoic/numerics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace mimoic {

double hermitian_defect(const CMatrix& a) {
  if (a.rows() != a.cols()) {
    return std::numeric_limits<double>::infinity();
  }
  const double scale = a.norm();
  if (scale == 0.0) {
    return 0.0;
  }
  return (a - a.adjoint()).norm() / scale;
}

HermitianMatrix::HermitianMatrix(const CMatrix& entries) {
  if (entries.rows() != entries.cols()) {
    std::ostringstream msg;
    msg << "HermitianMatrix: matrix is " << entries.rows() << "x" << entries.cols()
        << ", expected square";
    throw NumericError(msg.str());
  }
  const double defect = hermitian_defect(entries);
  if (defect > numerics::kHermitianTolerance) {
    std::ostringstream msg;
    msg << "HermitianMatrix: relative asymmetry " << defect << " exceeds "
        << numerics::kHermitianTolerance;
    throw NumericError(msg.str());
  }
  entries_ = 0.5 * (entries + entries.adjoint());
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index dim) {
  return HermitianMatrix(CMatrix::Zero(dim, dim), Trusted{});
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index dim, double scale) {
  return HermitianMatrix(CMatrix::Identity(dim, dim) * scale, Trusted{});
}

HermitianMatrix HermitianMatrix::plus_identity(double scale) const {
  CMatrix out = entries_;
  out.diagonal().array() += scale;
  return HermitianMatrix(std::move(out), Trusted{});
}

HermitianMatrix HermitianMatrix::congruence(const CMatrix& w) const {
  const CMatrix product = w.adjoint() * entries_ * w;
  return HermitianMatrix(0.5 * (product + product.adjoint()), Trusted{});
}

HermitianMatrix HermitianMatrix::gram(const CMatrix& w) {
  const CMatrix product = w.adjoint() * w;
  return HermitianMatrix(0.5 * (product + product.adjoint()), Trusted{});
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& other) {
  if (entries_.size() == 0) {
    entries_ = other.entries_;
    return *this;
  }
  entries_ += other.entries_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& other) {
  entries_ -= other.entries_;
  return *this;
}

void HermitianMatrix::add_outer(const CVector& x, double weight) {
  const Eigen::Index n = entries_.rows();
  for (Eigen::Index c = 0; c < n; ++c) {
    entries_(c, c) += weight * std::norm(x(c));
    for (Eigen::Index r = c + 1; r < n; ++r) {
      entries_(r, c) += weight * x(r) * std::conj(x(c));
      entries_(c, r) = std::conj(entries_(r, c));
    }
  }
}

void normalize_column_phases(CMatrix& columns) {
  for (Eigen::Index c = 0; c < columns.cols(); ++c) {
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < columns.rows(); ++r) {
      const double mag = std::abs(columns(r, c));
      if (mag > best) {
        best = mag;
        pivot = r;
      }
    }
    if (best <= 0.0) {
      continue;
    }
    const Complex rotation = std::conj(columns(pivot, c)) / best;
    columns.col(c) *= rotation;
    columns(pivot, c) = Complex(best, 0.0);
  }
}

void normalize_columns(CMatrix& columns) {
  for (Eigen::Index c = 0; c < columns.cols(); ++c) {
    const double n = columns.col(c).norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
      std::ostringstream msg;
      msg << "normalize_columns: column " << c << " has norm " << n;
      throw NumericError(msg.str());
    }
    columns.col(c) /= n;
  }
}

EigResult hermitian_eig_sorted(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw NumericError("hermitian_eig_sorted: eigensolver did not converge");
  }
  EigResult out{solver.eigenvalues(), solver.eigenvectors()};
  normalize_column_phases(out.vectors);
  return out;
}

namespace {

void require_positive_definite(const HermitianMatrix& b, const char* who) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(b.matrix(), Eigen::EigenvaluesOnly);
  const RVector& ev = solver.eigenvalues();
  const double smallest = ev.size() ? ev(0) : 0.0;
  const double largest = ev.size() ? ev(ev.size() - 1) : 0.0;
  if (solver.info() != Eigen::Success || !(largest > 0.0) ||
      !(smallest > numerics::kPositiveDefiniteFloor * largest)) {
    std::ostringstream msg;
    msg << who << ": matrix is not positive definite (smallest eigenvalue " << smallest
        << ", largest " << largest << ")";
    throw NumericError(msg.str());
  }
}

}  // namespace

GevdResult gevd_hpd(const HermitianMatrix& r, const HermitianMatrix& b) {
  if (r.dim() != b.dim()) {
    std::ostringstream msg;
    msg << "gevd_hpd: pencil dimensions differ (" << r.dim() << " vs " << b.dim() << ")";
    throw NumericError(msg.str());
  }
  require_positive_definite(b, "gevd_hpd");

  const Eigen::LLT<CMatrix> llt(b.matrix());
  if (llt.info() != Eigen::Success) {
    throw NumericError("gevd_hpd: Cholesky factorization of B failed");
  }
  const auto lower = llt.matrixL();
  // C = L^-1 R L^-H
  CMatrix c = lower.solve(r.matrix());
  c = lower.solve(c.adjoint().eval()).adjoint();
  const EigResult reduced = hermitian_eig_sorted(HermitianMatrix(0.5 * (c + c.adjoint())));

  GevdResult out;
  out.values = reduced.values.reverse();
  CMatrix y = reduced.vectors.rowwise().reverse();
  out.vectors = llt.matrixU().solve(y);
  normalize_column_phases(out.vectors);
  return out;
}

CMatrix solve_hpd(const HermitianMatrix& b, const CMatrix& rhs) {
  if (b.dim() != rhs.rows()) {
    std::ostringstream msg;
    msg << "solve_hpd: B is " << b.dim() << "x" << b.dim() << " but rhs has " << rhs.rows()
        << " rows";
    throw NumericError(msg.str());
  }
  const Eigen::LLT<CMatrix> llt(b.matrix());
  if (llt.info() != Eigen::Success) {
    throw NumericError("solve_hpd: matrix is not positive definite");
  }
  // pivots of the Cholesky factor bound the conditioning from below
  const RVector pivots = llt.matrixLLT().diagonal().real().cwiseAbs2();
  if (!(pivots.minCoeff() > numerics::kPositiveDefiniteFloor * pivots.maxCoeff())) {
    std::ostringstream msg;
    msg << "solve_hpd: matrix is numerically singular (pivot ratio "
        << pivots.minCoeff() / pivots.maxCoeff() << ")";
    throw NumericError(msg.str());
  }
  return llt.solve(rhs);
}

}  // namespace mimoic
