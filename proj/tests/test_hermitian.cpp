// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "helpers.hpp"
#include "qmht/error.hpp"
#include "qmht/hermitian.hpp"

using namespace qmht;
using testing_util::diag;

namespace {

CMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index d) {
  std::normal_distribution<double> g;
  CMatrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  return a + a.adjoint();
}

}  // namespace

TEST(HermitianMatrix, SymmetrizesSmallDeviation) {
  CMatrix m(2, 2);
  m << 1.0, Complex(0.5, 1e-14), Complex(0.5, 0.0), 2.0;
  const HermitianMatrix h(m);
  EXPECT_EQ(h(0, 1), std::conj(h(1, 0)));
}

TEST(HermitianMatrix, RejectsNonHermitian) {
  CMatrix m(2, 2);
  m << 1.0, 1.0, 0.0, 1.0;
  EXPECT_THROW(HermitianMatrix{m}, Error);
  EXPECT_THROW(HermitianMatrix{CMatrix(2, 3)}, Error);
}

TEST(SpectralDecompose, DiagonalInput) {
  const SpectralDecomposition s = spectral_decompose(diag({0.7, 0.3}).hermitian());
  EXPECT_DOUBLE_EQ(s.eigenvalues(0), 0.7);
  EXPECT_DOUBLE_EQ(s.eigenvalues(1), 0.3);
  EXPECT_EQ(s.eigenvectors, CMatrix::Identity(2, 2));
}

TEST(SpectralDecompose, RankOneProjector) {
  CMatrix m(2, 2);
  m << 0.5, 0.5, 0.5, 0.5;
  const SpectralDecomposition s = spectral_decompose(HermitianMatrix(m));
  EXPECT_NEAR(s.eigenvalues(0), 1.0, 1e-12);
  EXPECT_NEAR(s.eigenvalues(1), 0.0, 1e-12);
  EXPECT_NEAR(s.eigenvectors(0, 0).real(), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(s.eigenvectors(1, 0).real(), 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(SpectralDecompose, ReconstructsRandomInputs) {
  std::mt19937_64 rng(11);
  for (Eigen::Index d = 1; d <= 16; ++d) {
    const CMatrix a = random_hermitian(rng, d);
    const SpectralDecomposition s = spectral_decompose(HermitianMatrix(a));
    EXPECT_LE(max_abs_entry(s.reconstruct() - a), 1e-9) << "d = " << d;
    for (Eigen::Index j = 0; j < d; ++j) {
      EXPECT_NEAR(s.eigenvectors.col(j).norm(), 1.0, 1e-12);
      if (j > 0) EXPECT_GE(s.eigenvalues(j - 1), s.eigenvalues(j));
    }
    EXPECT_LE(max_abs_entry(s.eigenvectors.adjoint() * s.eigenvectors - CMatrix::Identity(d, d)), 1e-10);
  }
}

TEST(SpectralDecompose, PhaseConvention) {
  std::mt19937_64 rng(3);
  const SpectralDecomposition s = spectral_decompose(HermitianMatrix(random_hermitian(rng, 5)));
  for (Eigen::Index j = 0; j < 5; ++j) {
    for (Eigen::Index k = 0; k < 5; ++k) {
      if (std::abs(s.eigenvectors(k, j)) > 1e-10) {
        EXPECT_GT(s.eigenvectors(k, j).real(), 0.0);
        EXPECT_EQ(s.eigenvectors(k, j).imag(), 0.0);
        break;
      }
    }
  }
}

TEST(SpectralDecompose, DegenerateBlockIsOrthonormal) {
  // Eigenvalue 1 twice and 0 once in a rotated basis.
  std::mt19937_64 rng(5);
  const oracle::Mat q = oracle::random_subspace(rng, 3, 3);
  CMatrix d = CMatrix::Zero(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 1.0;
  const CMatrix a = q * d * q.adjoint();
  const SpectralDecomposition s = spectral_decompose(HermitianMatrix(a));
  EXPECT_LE(max_abs_entry(s.eigenvectors.adjoint() * s.eigenvectors - CMatrix::Identity(3, 3)), 1e-12);
  EXPECT_LE(max_abs_entry(s.reconstruct() - a), 1e-9);
}

TEST(DensityMatrix, Invariants) {
  CMatrix bad(2, 2);
  bad << 0.6, 0.0, 0.0, 0.6;
  EXPECT_THROW(DensityMatrix::from_matrix(bad), Error);
  CMatrix neg(2, 2);
  neg << 1.1, 0.0, 0.0, -0.1;
  EXPECT_THROW(DensityMatrix::from_matrix(neg), Error);
  CMatrix tiny(2, 2);
  tiny << 1.0 + 5e-11, 0.0, 0.0, -5e-11;
  const DensityMatrix rho = DensityMatrix::from_matrix(tiny);
  EXPECT_EQ(rho.spectrum().eigenvalues(1), 0.0);
  EXPECT_EQ(rho.rank(), 1);
}

TEST(DensityMatrix, PureStateKeepsVector) {
  const DensityMatrix rho = testing_util::plus();
  EXPECT_EQ(rho.rank(), 1);
  EXPECT_NEAR(rho.spectrum().eigenvalues(0), 1.0, 1e-15);
  EXPECT_NEAR(rho.spectrum().eigenvectors(0, 0).real(), 1.0 / std::sqrt(2.0), 1e-15);
  // Orthogonal pure states have exactly orthogonal top vectors.
  const Complex o = testing_util::ket0().spectrum().vector(0).dot(testing_util::ket1().spectrum().vector(0));
  EXPECT_EQ(o, Complex(0.0, 0.0));
}

TEST(FractionalPower, Examples) {
  const HermitianMatrix half = fractional_power(diag({0.25, 0.75}), 0.5);
  EXPECT_NEAR(half(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(half(1, 1).real(), std::sqrt(0.75), 1e-15);

  const DensityMatrix p = testing_util::plus();
  for (double t : {0.1, 0.5, 1.0}) {
    EXPECT_LE(max_abs_entry(fractional_power(p, t).matrix() - p.matrix()), 1e-12);
  }

  const HermitianMatrix supp = fractional_power(diag({0.5, 0.5, 0.0}), 0.0);
  CMatrix expect = CMatrix::Zero(3, 3);
  expect(0, 0) = expect(1, 1) = 1.0;
  EXPECT_EQ(supp.matrix(), expect);
  EXPECT_THROW(fractional_power(p, 1.5), Error);
}

TEST(FractionalPower, IdentityAtOneAndOracle) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const oracle::Mat m = oracle::random_density(rng, 4, 1 + trial % 4);
    const DensityMatrix rho = testing_util::from_oracle(m);
    EXPECT_LE(max_abs_entry(fractional_power(rho, 1.0).matrix() - rho.matrix()), 1e-10);
    EXPECT_LE(max_abs_entry(fractional_power(rho, 0.3).matrix() - oracle::psd_power(m, 0.3)), 1e-9);
  }
}

TEST(PositivePart, Examples) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 0.5;
  m(1, 1) = -0.3;
  const PositivePart b = positive_part_and_support(HermitianMatrix(m));
  EXPECT_EQ(b.positive(0, 0), Complex(0.5, 0.0));
  EXPECT_EQ(b.positive(1, 1), Complex(0.0, 0.0));
  EXPECT_EQ(b.support(0, 0), Complex(1.0, 0.0));
  EXPECT_EQ(b.support(1, 1), Complex(0.0, 0.0));

  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  const PositivePart c = positive_part_and_support(HermitianMatrix(m));
  EXPECT_EQ(c.positive(0, 0), Complex(1.0, 0.0));
  EXPECT_EQ(c.support(1, 1), Complex(0.0, 0.0));

  const PositivePart z = positive_part_and_support(HermitianMatrix(CMatrix(-CMatrix::Identity(2, 2))));
  EXPECT_EQ(max_abs_entry(z.positive.matrix()), 0.0);
  EXPECT_EQ(max_abs_entry(z.support.matrix()), 0.0);
}

TEST(PositivePart, RandomIsPsdAndDominates) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const CMatrix a = random_hermitian(rng, 5);
    const PositivePart p = positive_part_and_support(HermitianMatrix(a));
    EXPECT_GE(oracle::lambda_min(p.positive.matrix()), -1e-10);
    EXPECT_GE(oracle::lambda_min(p.positive.matrix() - a), -1e-10);
  }
}

TEST(PositivePart, CommutingMatchesEntrywise) {
  CMatrix a = CMatrix::Zero(4, 4);
  a.diagonal() << 0.3, -0.2, 0.0, 1.5;
  const PositivePart p = positive_part_and_support(HermitianMatrix(a));
  CMatrix expect = CMatrix::Zero(4, 4);
  expect.diagonal() << 0.3, 0.0, 0.0, 1.5;
  EXPECT_LE(max_abs_entry(p.positive.matrix() - expect), 1e-15);
}

TEST(GramMinEigenvalue, Examples) {
  CVector a(2), b(2);
  a << 1.0, 0.0;
  b << 0.5, std::sqrt(0.75);
  const std::vector<CVector> pair{a, b};
  EXPECT_NEAR(gram_min_eigenvalue(pair).lambda_min, 0.5, 1e-12);

  std::mt19937_64 rng(2);
  const oracle::Mat q = oracle::random_subspace(rng, 4, 4);
  std::vector<CVector> ortho;
  for (Eigen::Index j = 0; j < 4; ++j) ortho.push_back(q.col(j));
  EXPECT_NEAR(gram_min_eigenvalue(ortho).lambda_min, 1.0, 1e-12);

  const std::vector<CVector> twice{b, b};
  EXPECT_NEAR(gram_min_eigenvalue(twice).lambda_min, 0.0, 1e-12);
  EXPECT_THROW(gram_min_eigenvalue(std::vector<CVector>{}), Error);
}

TEST(GramMinEigenvalue, RandomSetsArePsd) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<CVector> vs;
    for (int k = 0; k < 6; ++k) vs.push_back(oracle::random_unit(rng, 3));
    EXPECT_GE(gram_min_eigenvalue(vs).lambda_min, -1e-10);
  }
}
