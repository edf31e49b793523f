// SPDX-License-Identifier: Apache-2.0
#include "qmht/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qmht {

double max_abs_entry(const CMatrix& m) {
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

HermitianMatrix::HermitianMatrix(CMatrix entries) {
  if (entries.rows() != entries.cols()) {
    fail(ErrorCode::kDimensionMismatch, "Hermitian matrix must be square");
  }
  const double scale = std::max(1.0, max_abs_entry(entries));
  const double deviation = max_abs_entry(entries - entries.adjoint());
  if (deviation > 1e-8 * scale) {
    std::ostringstream os;
    os << "matrix is not Hermitian (max |a - a^*| = " << deviation << ")";
    fail(ErrorCode::kInvalidArgument, os.str());
  }
  m_ = 0.5 * (entries + entries.adjoint());
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index dim) {
  return HermitianMatrix(CMatrix::Identity(dim, dim));
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index dim) {
  return HermitianMatrix(CMatrix::Zero(dim, dim));
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const {
  if (dim() != o.dim()) fail(ErrorCode::kDimensionMismatch, "dimension mismatch");
  return HermitianMatrix(m_ + o.m_);
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& o) const {
  if (dim() != o.dim()) fail(ErrorCode::kDimensionMismatch, "dimension mismatch");
  return HermitianMatrix(m_ - o.m_);
}

HermitianMatrix HermitianMatrix::operator*(double s) const {
  return HermitianMatrix(m_ * s);
}

Eigen::Index SpectralDecomposition::rank() const {
  const double top = largest();
  Eigen::Index r = 0;
  for (Eigen::Index j = 0; j < eigenvalues.size(); ++j) {
    if (eigenvalues(j) > 0.0 && !is_zero_eigenvalue(eigenvalues(j), top)) ++r;
  }
  return r;
}

CMatrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() *
         eigenvectors.adjoint();
}

void normalize_phase(CVector& v) {
  const double norm = v.norm();
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const double mod = std::abs(v(k));
    if (mod > 1e-10 * norm) {
      v *= std::conj(v(k)) / mod;
      v(k) = Complex(mod, 0.0);
      return;
    }
  }
}

namespace {

bool lex_less(const CVector& a, const CVector& b) {
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    if (a(k).real() != b(k).real()) return a(k).real() < b(k).real();
    if (a(k).imag() != b(k).imag()) return a(k).imag() < b(k).imag();
  }
  return false;
}

void orthonormalize_columns(CMatrix& block) {
  for (Eigen::Index c = 0; c < block.cols(); ++c) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index p = 0; p < c; ++p) {
        block.col(c) -= block.col(p).dot(block.col(c)) * block.col(p);
      }
    }
    block.col(c).normalize();
  }
}

// Sorts descending, re-orthonormalizes each block of tied eigenvalues, fixes
// phases and orders tied vectors lexicographically.
SpectralDecomposition canonicalize(const RVector& values, const CMatrix& vectors) {
  const Eigen::Index n = values.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return values(a) > values(b);
  });

  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = values(order[static_cast<std::size_t>(k)]);
    out.eigenvectors.col(k) = vectors.col(order[static_cast<std::size_t>(k)]);
  }

  const double scale = n ? out.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  const double tie = kZeroEigenvalueRel * scale;
  Eigen::Index begin = 0;
  while (begin < n) {
    Eigen::Index end = begin + 1;
    while (end < n && out.eigenvalues(end - 1) - out.eigenvalues(end) <= tie) ++end;
    const Eigen::Index len = end - begin;
    CMatrix block = out.eigenvectors.middleCols(begin, len);
    if (len > 1) orthonormalize_columns(block);
    std::vector<CVector> cols;
    cols.reserve(static_cast<std::size_t>(len));
    for (Eigen::Index c = 0; c < len; ++c) {
      CVector v = block.col(c);
      normalize_phase(v);
      cols.push_back(std::move(v));
    }
    std::stable_sort(cols.begin(), cols.end(), lex_less);
    for (Eigen::Index c = 0; c < len; ++c) {
      out.eigenvectors.col(begin + c) = cols[static_cast<std::size_t>(c)];
    }
    begin = end;
  }
  return out;
}

bool is_diagonal(const CMatrix& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (r != c && m(r, c) != Complex(0.0, 0.0)) return false;
    }
  }
  return true;
}

}  // namespace

SpectralDecomposition spectral_decompose(const HermitianMatrix& h) {
  const CMatrix& m = h.matrix();
  if (is_diagonal(m)) {
    return canonicalize(m.diagonal().real(), CMatrix::Identity(m.rows(), m.cols()));
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
  if (es.info() != Eigen::Success) {
    fail(ErrorCode::kNumerical, "Hermitian eigensolver did not converge");
  }
  return canonicalize(es.eigenvalues(), es.eigenvectors());
}

double min_eigenvalue(const CMatrix& h) {
  if (h.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double max_eigenvalue(const CMatrix& h) {
  if (h.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(h.rows() - 1);
}

DensityMatrix DensityMatrix::from_matrix(const HermitianMatrix& h) {
  const double tr = h.trace();
  if (std::abs(tr - 1.0) > kTraceTol) {
    std::ostringstream os;
    os << "density matrix trace is " << tr << ", expected 1";
    fail(ErrorCode::kInvalidArgument, os.str());
  }
  SpectralDecomposition spec = spectral_decompose(h);
  const double top = spec.largest();
  for (Eigen::Index j = 0; j < spec.dim(); ++j) {
    double& v = spec.eigenvalues(j);
    if (v < -kPsdClampTol) {
      std::ostringstream os;
      os << "density matrix has negative eigenvalue " << v;
      fail(ErrorCode::kInvalidArgument, os.str());
    }
    if (is_zero_eigenvalue(v, top)) v = 0.0;
  }
  spec = canonicalize(spec.eigenvalues, spec.eigenvectors);
  return DensityMatrix(h, std::move(spec));
}

DensityMatrix DensityMatrix::pure(const CVector& psi) {
  const Eigen::Index d = psi.size();
  if (d == 0) fail(ErrorCode::kInvalidArgument, "empty state vector");
  if (std::abs(psi.norm() - 1.0) > kTraceTol) {
    fail(ErrorCode::kInvalidArgument, "pure state vector is not normalized");
  }
  CVector top = psi;
  normalize_phase(top);

  // Complement from a full QR of psi.
  Eigen::HouseholderQR<CMatrix> qr{CMatrix(top)};
  CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  CMatrix vecs(d, d);
  vecs.col(0) = top;
  for (Eigen::Index c = 1; c < d; ++c) {
    CVector v = q.col(c);
    v -= top.dot(v) * top;
    vecs.col(c) = v.normalized();
  }
  RVector vals = RVector::Zero(d);
  vals(0) = 1.0;
  SpectralDecomposition spec = canonicalize(vals, vecs);
  // canonicalize keeps the unit eigenvalue first and does not touch a
  // singleton cluster beyond its phase, which is already fixed.
  spec.eigenvectors.col(0) = top;
  return DensityMatrix(HermitianMatrix(top * top.adjoint()), std::move(spec));
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> p) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(p.size()),
                            static_cast<Eigen::Index>(p.size()));
  for (std::size_t k = 0; k < p.size(); ++k) {
    m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = p[k];
  }
  return from_matrix(HermitianMatrix(m));
}

HermitianMatrix fractional_power(const DensityMatrix& rho, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    fail(ErrorCode::kInvalidArgument, "fractional power exponent must lie in [0, 1]");
  }
  const SpectralDecomposition& s = rho.spectrum();
  CMatrix out = CMatrix::Zero(rho.dim(), rho.dim());
  for (Eigen::Index j = 0; j < s.dim(); ++j) {
    const double lam = s.eigenvalues(j);
    if (lam <= 0.0) continue;
    const CVector v = s.eigenvectors.col(j);
    out += std::pow(lam, t) * (v * v.adjoint());
  }
  return HermitianMatrix(out);
}

PositivePart positive_part_and_support(const HermitianMatrix& a) {
  const Eigen::Index d = a.dim();
  SpectralDecomposition s = spectral_decompose(a);
  const double scale = d ? s.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  CMatrix pos = CMatrix::Zero(d, d);
  CMatrix supp = CMatrix::Zero(d, d);
  if (scale > 0.0) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const double lam = s.eigenvalues(j);
      if (lam <= kZeroEigenvalueRel * scale) continue;
      const CMatrix proj = s.eigenvectors.col(j) * s.eigenvectors.col(j).adjoint();
      pos += lam * proj;
      supp += proj;
    }
  }
  return {HermitianMatrix(pos), HermitianMatrix(supp)};
}

HermitianMatrix support_projector(const DensityMatrix& rho) {
  return fractional_power(rho, 0.0);
}

GramResult gram_min_eigenvalue(std::span<const CVector> vectors) {
  if (vectors.empty()) fail(ErrorCode::kInvalidArgument, "Gram matrix of an empty family");
  const auto n = static_cast<Eigen::Index>(vectors.size());
  const Eigen::Index dim = vectors.front().size();
  CMatrix g(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (vectors[static_cast<std::size_t>(k)].size() != dim) {
      fail(ErrorCode::kDimensionMismatch, "Gram vectors differ in dimension");
    }
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = 0; l < n; ++l) {
      g(k, l) = vectors[static_cast<std::size_t>(k)].dot(vectors[static_cast<std::size_t>(l)]);
    }
  }
  HermitianMatrix gram(g);
  return {gram, min_eigenvalue(gram.matrix())};
}

}  // namespace qmht
