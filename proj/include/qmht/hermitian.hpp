// SPDX-License-Identifier: Apache-2.0
//
// Dense complex Hermitian linear algebra: spectral decomposition with a
// deterministic eigenvector convention, the support-restricted power calculus,
// positive parts, and Gram matrices.
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qmht/error.hpp"

namespace qmht {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Relative threshold below which an eigenvalue counts as zero.
inline constexpr double kZeroEigenvalueRel = 1e-12;
/// Negative eigenvalues of a density matrix down to this value are clamped.
inline constexpr double kPsdClampTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;

double max_abs_entry(const CMatrix& m);

/// True when `value` is zero relative to `largest` (the largest eigenvalue of
/// the same spectrum, or any positive scale).
inline bool is_zero_eigenvalue(double value, double largest) {
  return value <= kZeroEigenvalueRel * largest;
}

class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  /// Symmetrizes `entries`. Throws when the input is not square or is far
  /// from Hermitian (relative deviation above 1e-8).
  explicit HermitianMatrix(CMatrix entries);

  static HermitianMatrix identity(Eigen::Index dim);
  static HermitianMatrix zero(Eigen::Index dim);

  Eigen::Index dim() const { return m_.rows(); }
  const CMatrix& matrix() const { return m_; }
  Complex operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }

  double trace() const { return m_.trace().real(); }

  HermitianMatrix operator+(const HermitianMatrix& o) const;
  HermitianMatrix operator-(const HermitianMatrix& o) const;
  HermitianMatrix operator*(double s) const;

 private:
  CMatrix m_;
};

/// Eigenpairs sorted by descending eigenvalue. Eigenvectors are the columns of
/// `eigenvectors`; each has its first nonzero component real and positive.
/// Within a cluster of equal eigenvalues the vectors are ordered ascending in
/// lexicographic order of (re, im) components.
struct SpectralDecomposition {
  RVector eigenvalues;
  CMatrix eigenvectors;

  Eigen::Index dim() const { return eigenvalues.size(); }
  CVector vector(Eigen::Index j) const { return eigenvectors.col(j); }
  double largest() const { return eigenvalues.size() ? eigenvalues(0) : 0.0; }
  /// Number of eigenvalues that are nonzero under the zero threshold.
  Eigen::Index rank() const;
  CMatrix reconstruct() const;
};

SpectralDecomposition spectral_decompose(const HermitianMatrix& h);

/// Smallest eigenvalue of a Hermitian matrix (values only).
double min_eigenvalue(const CMatrix& h);
double max_eigenvalue(const CMatrix& h);

/// Phase-normalize in place: first component with modulus above 1e-10 times
/// the vector norm becomes real positive.
void normalize_phase(CVector& v);

/// A quantum state: Hermitian, PSD, unit trace. The spectrum is computed once
/// on construction; eigenvalues in [-1e-10, 0) and those below the zero
/// threshold are snapped to exactly zero.
class DensityMatrix {
 public:
  DensityMatrix() = default;

  /// Throws kInvalidArgument when the trace is off by more than 1e-10 or an
  /// eigenvalue is below -1e-10.
  static DensityMatrix from_matrix(const HermitianMatrix& h);
  static DensityMatrix from_matrix(const CMatrix& m) {
    return from_matrix(HermitianMatrix(m));
  }
  /// |psi><psi|. `psi` must be normalized within 1e-10. The returned
  /// spectrum carries `psi` itself (phase-normalized) as the top eigenvector.
  static DensityMatrix pure(const CVector& psi);
  /// diag(p); the canonical basis is the eigenbasis.
  static DensityMatrix diagonal(std::span<const double> p);

  Eigen::Index dim() const { return h_.dim(); }
  const HermitianMatrix& hermitian() const { return h_; }
  const CMatrix& matrix() const { return h_.matrix(); }
  const SpectralDecomposition& spectrum() const { return spec_; }
  Eigen::Index rank() const { return spec_.rank(); }

 private:
  DensityMatrix(HermitianMatrix h, SpectralDecomposition s)
      : h_(std::move(h)), spec_(std::move(s)) {}

  HermitianMatrix h_;
  SpectralDecomposition spec_;
};

/// rho^t with 0^t := 0 for every t in [0, 1], so t = 0 gives the support
/// projector.
HermitianMatrix fractional_power(const DensityMatrix& rho, double t);

struct PositivePart {
  HermitianMatrix positive;  // a_+
  HermitianMatrix support;   // projector onto the eigenspaces of a_+
};

/// Keeps eigenvalues strictly above 1e-12 * max|lambda|.
PositivePart positive_part_and_support(const HermitianMatrix& a);

/// Projector onto the span of eigenvectors with nonzero eigenvalue.
HermitianMatrix support_projector(const DensityMatrix& rho);

struct GramResult {
  HermitianMatrix gram;  // gram(k, l) = <v_k | v_l>
  double lambda_min;
};

GramResult gram_min_eigenvalue(std::span<const CVector> vectors);

}  // namespace qmht
