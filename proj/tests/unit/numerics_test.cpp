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

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "mimoic/numerics.hpp"
#include "test_support.hpp"

namespace mimoic {
namespace {

using testing::random_complex;
using testing::random_hermitian;
using testing::random_hpd;

TEST(HermitianMatrix, RejectsNonHermitian) {
  CMatrix a = CMatrix::Identity(3, 3);
  a(0, 1) = Complex(1.0, 0.0);
  EXPECT_THROW(HermitianMatrix{a}, NumericError);
  EXPECT_THROW(HermitianMatrix{CMatrix(2, 3)}, NumericError);
}

TEST(HermitianMatrix, StoresExactHermitianPart) {
  std::mt19937_64 rng(3);
  CMatrix a = random_hermitian(4, rng).matrix();
  a(1, 2) += Complex(1e-13, 1e-13);
  const HermitianMatrix h(a);
  EXPECT_EQ(hermitian_defect(h.matrix()), 0.0);
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_EQ(h.matrix()(i, i).imag(), 0.0);
}

TEST(HermitianMatrix, AddOuterMatchesDenseUpdate) {
  std::mt19937_64 rng(4);
  HermitianMatrix h = random_hermitian(3, rng);
  const CVector x = random_complex(3, 1, rng);
  const CMatrix expected = h.matrix() + 2.5 * x * x.adjoint();
  h.add_outer(x, 2.5);
  EXPECT_LE((h.matrix() - expected).norm(), 1e-12 * expected.norm());
  EXPECT_EQ(hermitian_defect(h.matrix()), 0.0);
}

TEST(HermitianEig, IdentityHasUnitSpectrum) {
  const EigResult r = hermitian_eig_sorted(HermitianMatrix::identity(4));
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(r.values(i), 1.0);
  EXPECT_LE((r.vectors.adjoint() * r.vectors - CMatrix::Identity(4, 4)).norm(), 1e-12);
}

TEST(HermitianEig, DiagonalIsSortedWithPermutedBasis) {
  CMatrix d = CMatrix::Zero(3, 3);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  d(2, 2) = 2.0;
  const EigResult r = hermitian_eig_sorted(HermitianMatrix(d));
  EXPECT_NEAR(r.values(0), 1.0, 1e-14);
  EXPECT_NEAR(r.values(1), 2.0, 1e-14);
  EXPECT_NEAR(r.values(2), 3.0, 1e-14);
  const int expected_index[3] = {1, 2, 0};
  for (int c = 0; c < 3; ++c) {
    EXPECT_NEAR(std::abs(r.vectors(expected_index[c], c)), 1.0, 1e-14);
    // phase convention: dominant entry real and nonnegative
    EXPECT_NEAR(r.vectors(expected_index[c], c).real(), 1.0, 1e-14);
  }
}

TEST(HermitianEig, ResidualBoundOnRandomInput) {
  std::mt19937_64 rng(7);
  const HermitianMatrix a = random_hermitian(4, rng);
  const EigResult r = hermitian_eig_sorted(a);
  for (Eigen::Index c = 0; c < 4; ++c) {
    const CVector v = r.vectors.col(c);
    EXPECT_LE((a.matrix() * v - r.values(c) * v).norm(), 1e-8 * a.matrix().norm());
    if (c > 0) {
      EXPECT_LE(r.values(c - 1), r.values(c));
    }
  }
}

TEST(HermitianEig, BitIdenticalOnRepeat) {
  std::mt19937_64 rng(8);
  const HermitianMatrix a = random_hermitian(5, rng);
  const EigResult x = hermitian_eig_sorted(a);
  const EigResult y = hermitian_eig_sorted(a);
  EXPECT_TRUE(x.values == y.values);
  EXPECT_TRUE(x.vectors == y.vectors);
}

TEST(Gevd, IdentityPencilIsOrdinaryDescendingEvd) {
  std::mt19937_64 rng(9);
  const HermitianMatrix r = random_hermitian(4, rng);
  const GevdResult g = gevd_hpd(r, HermitianMatrix::identity(4));
  const EigResult e = hermitian_eig_sorted(r);
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_NEAR(g.values(i), e.values(3 - i), 1e-12);
}

TEST(Gevd, EqualPencilHasUnitValues) {
  std::mt19937_64 rng(10);
  const HermitianMatrix b = random_hpd(4, rng);
  const GevdResult g = gevd_hpd(b, b);
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_NEAR(g.values(i), 1.0, 1e-10);
}

TEST(Gevd, TwoByTwoDiagonalByHand) {
  CMatrix r = CMatrix::Zero(2, 2);
  r(0, 0) = 4.0;
  r(1, 1) = 1.0;
  CMatrix b = CMatrix::Zero(2, 2);
  b(0, 0) = 2.0;
  b(1, 1) = 1.0;
  const GevdResult g = gevd_hpd(HermitianMatrix(r), HermitianMatrix(b));
  // lambda_i = r_ii / b_ii, v_i = e_i / sqrt(b_ii)
  EXPECT_NEAR(g.values(0), 4.0 / 2.0, 1e-14);
  EXPECT_NEAR(g.values(1), 1.0 / 1.0, 1e-14);
  EXPECT_NEAR(std::abs(g.vectors(0, 0)), 1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(std::abs(g.vectors(1, 0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(g.vectors(1, 1)), 1.0, 1e-14);
}

TEST(Gevd, MatchesIndependentSolverAndResidual) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const HermitianMatrix r = random_hermitian(4, rng);
    const HermitianMatrix b = random_hpd(4, rng);
    const GevdResult g = gevd_hpd(r, b);

    const Eigen::GeneralizedSelfAdjointEigenSolver<CMatrix> oracle(r.matrix(), b.matrix());
    ASSERT_EQ(oracle.info(), Eigen::Success);
    for (Eigen::Index i = 0; i < 4; ++i) {
      EXPECT_NEAR(g.values(i), oracle.eigenvalues()(3 - i), 1e-8 * (1.0 + std::abs(g.values(i))));
    }
    const CMatrix gram = g.vectors.adjoint() * b.matrix() * g.vectors;
    EXPECT_LE((gram - CMatrix::Identity(4, 4)).norm(), 1e-9);
    for (Eigen::Index c = 0; c < 4; ++c) {
      const CVector v = g.vectors.col(c);
      const CVector res = r.matrix() * v - g.values(c) * (b.matrix() * v);
      EXPECT_LE(res.norm(), 1e-8 * (r.matrix().norm() + std::abs(g.values(c)) * b.matrix().norm()));
    }
  }
}

TEST(Gevd, ValuesAgreeWithSquareRootReduction) {
  // Any factor L with L L^H = B gives the same spectrum; use the Hermitian
  // square root instead of the Cholesky factor.
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const HermitianMatrix r = random_hermitian(4, rng);
    const HermitianMatrix b = random_hpd(4, rng);
    const Eigen::SelfAdjointEigenSolver<CMatrix> sb(b.matrix());
    const CMatrix inv_sqrt = sb.eigenvectors() *
                             sb.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                             sb.eigenvectors().adjoint();
    const CMatrix c = inv_sqrt * r.matrix() * inv_sqrt;
    const EigResult e = hermitian_eig_sorted(HermitianMatrix(CMatrix((c + c.adjoint()) / 2.0)));
    const GevdResult g = gevd_hpd(r, b);
    for (Eigen::Index i = 0; i < 4; ++i) EXPECT_NEAR(g.values(i), e.values(3 - i), 1e-8);
  }
}

TEST(Gevd, RejectsIndefiniteAndNamesEigenvalue) {
  CMatrix b = CMatrix::Identity(3, 3);
  b(2, 2) = -0.5;
  try {
    gevd_hpd(HermitianMatrix::identity(3), HermitianMatrix(b));
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("-0.5"), std::string::npos) << e.what();
  }
  EXPECT_THROW(gevd_hpd(HermitianMatrix::identity(3), HermitianMatrix::identity(2)),
               NumericError);
}

TEST(SolveHpd, IdentityAndScalarCases) {
  std::mt19937_64 rng(13);
  const CMatrix x = random_complex(4, 3, rng);
  EXPECT_LE((solve_hpd(HermitianMatrix::identity(4), x) - x).norm(), 1e-14 * x.norm());
  EXPECT_LE((solve_hpd(HermitianMatrix::identity(4, 2.0), x) - x / 2.0).norm(), 1e-14 * x.norm());
}

TEST(SolveHpd, ResidualOnRandomInput) {
  std::mt19937_64 rng(14);
  const HermitianMatrix b = random_hpd(4, rng);
  const CMatrix x = random_complex(4, 2, rng);
  const CMatrix s = solve_hpd(b, x);
  EXPECT_LE((b.matrix() * s - x).norm(), 1e-8 * x.norm());
}

TEST(SolveHpd, RejectsSingularAndIndefinite) {
  CMatrix singular = CMatrix::Identity(3, 3);
  singular(2, 2) = 0.0;
  EXPECT_THROW(solve_hpd(HermitianMatrix(singular), CMatrix::Ones(3, 1)), NumericError);
  EXPECT_THROW(solve_hpd(HermitianMatrix::identity(3, -1.0), CMatrix::Ones(3, 1)), NumericError);
}

TEST(Columns, NormalizeAndPhase) {
  std::mt19937_64 rng(15);
  CMatrix m = random_complex(4, 3, rng);
  normalize_columns(m);
  for (Eigen::Index c = 0; c < 3; ++c) EXPECT_NEAR(m.col(c).norm(), 1.0, 1e-14);
  normalize_column_phases(m);
  for (Eigen::Index c = 0; c < 3; ++c) {
    Eigen::Index i = 0;
    m.col(c).cwiseAbs().maxCoeff(&i);
    EXPECT_GE(m(i, c).real(), 0.0);
    EXPECT_NEAR(m(i, c).imag(), 0.0, 1e-15);
  }
  CMatrix z = CMatrix::Zero(3, 2);
  EXPECT_THROW(normalize_columns(z), NumericError);
}

}  // namespace
}  // namespace mimoic
