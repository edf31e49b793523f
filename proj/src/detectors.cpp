// SPDX-License-Identifier: Apache-2.0
#include "qmht/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qmht/chernoff.hpp"
#include "qmht/product_source.hpp"

namespace qmht {

namespace {

constexpr double kDetectorTol = 1e-9;
constexpr std::size_t kNoLimit = std::numeric_limits<std::size_t>::max();

void require_same_dim(std::span<const DensityMatrix> states) {
  if (states.empty()) fail(ErrorCode::kInvalidArgument, "empty hypothesis set");
  for (const DensityMatrix& rho : states) {
    if (rho.dim() != states.front().dim()) {
      fail(ErrorCode::kDimensionMismatch, "states differ in dimension");
    }
  }
}

double trace_product(const CMatrix& a, const CMatrix& b) {
  return (a.cwiseProduct(b.transpose())).sum().real();
}

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

struct ExplicitRun {
  GsDiagnostics diagnostics;
  std::vector<CMatrix> elements;
};

// Densifies a run: the N selected directions plus a completion of the basis
// from the canonical vectors, labelled 0.
ExplicitRun densify(const GsRun& run, const ProductEigenSource& source) {
  const Eigen::Index dim = run.dimension;
  ExplicitRun out;
  GsDiagnostics& diag = out.diagnostics;
  for (std::size_t s = 0; s < run.selected.size(); ++s) {
    const GsCandidate& c = run.selected[s];
    diag.selection_order.emplace_back(c.hypothesis,
                                      source.eigenpairs(c.hypothesis)[c.local].indices.front());
    diag.selected_values.push_back(c.value);
    diag.basis.push_back(run.basis[s].to_dense(dim));
    diag.labels.push_back(run.labels[s]);
  }
  for (Eigen::Index k = 0; k < dim && static_cast<Eigen::Index>(diag.basis.size()) < dim; ++k) {
    CVector v = CVector::Unit(dim, k);
    for (int pass = 0; pass < 2; ++pass) {
      for (const CVector& e : diag.basis) v -= e.dot(v) * e;
    }
    const double norm = v.norm();
    if (norm < 1e-3) continue;
    diag.basis.push_back(v / norm);
    diag.labels.push_back(0);
  }
  if (static_cast<Eigen::Index>(diag.basis.size()) != dim) {
    fail(ErrorCode::kNumerical, "basis completion failed");
  }
  diag.gram_n = run.selected.empty() ? HermitianMatrix(CMatrix(0, 0))
                                     : HermitianMatrix(run_gram_matrix(run, source));
  diag.stopping_index = static_cast<int>(run.selected.size());
  diag.lambda_min_gram = run.lambda_min_gram;

  out.elements.assign(static_cast<std::size_t>(run.hypotheses), CMatrix::Zero(dim, dim));
  for (std::size_t s = 0; s < diag.basis.size(); ++s) {
    out.elements[static_cast<std::size_t>(diag.labels[s])] +=
        diag.basis[s] * diag.basis[s].adjoint();
  }
  return out;
}

}  // namespace

Detector Detector::make(std::vector<HermitianMatrix> elements, DetectorKind kind) {
  if (elements.empty()) fail(ErrorCode::kInvalidArgument, "detector needs at least one element");
  const Eigen::Index d = elements.front().dim();
  CMatrix sum = CMatrix::Zero(d, d);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i].dim() != d) fail(ErrorCode::kDimensionMismatch, "detector elements differ in dimension");
    const double lmin = min_eigenvalue(elements[i].matrix());
    if (lmin < -kDetectorTol) {
      std::ostringstream os;
      os << "detector element " << i << " is not PSD (lambda_min = " << lmin << ")";
      fail(ErrorCode::kNumerical, os.str());
    }
    sum += elements[i].matrix();
  }
  if (max_abs_entry(sum - CMatrix::Identity(d, d)) > kDetectorTol) {
    fail(ErrorCode::kNumerical, "detector elements do not sum to the identity");
  }
  if (kind == DetectorKind::kPVM) {
    for (std::size_t i = 0; i < elements.size(); ++i) {
      const CMatrix& e = elements[i].matrix();
      if (max_abs_entry(e * e - e) > kDetectorTol) {
        fail(ErrorCode::kNumerical, "PVM element is not a projector");
      }
      for (std::size_t j = i + 1; j < elements.size(); ++j) {
        if (max_abs_entry(e * elements[j].matrix()) > kDetectorTol) {
          fail(ErrorCode::kNumerical, "PVM elements are not mutually orthogonal");
        }
      }
    }
  }
  Detector det;
  det.elements_ = std::move(elements);
  det.kind_ = kind;
  return det;
}

ErrorReport evaluate_errors(std::span<const DensityMatrix> states, const Detector& det) {
  require_same_dim(states);
  if (states.size() != det.size()) {
    fail(ErrorCode::kDimensionMismatch, "number of states and detector elements differ");
  }
  if (states.front().dim() != det.dim()) {
    fail(ErrorCode::kDimensionMismatch, "detector and states differ in dimension");
  }
  ErrorReport rep;
  double total = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const double succ = trace_product(states[i].matrix(), det[i].matrix());
    rep.successes.push_back(succ);
    rep.per_hypothesis.push_back(1.0 - succ);
    total += 1.0 - succ;
  }
  rep.averaged = total / static_cast<double>(states.size());
  return rep;
}

Detector holevo_helstrom(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dim() != rho2.dim()) fail(ErrorCode::kDimensionMismatch, "states differ in dimension");
  const PositivePart pp = positive_part_and_support(rho2.hermitian() - rho1.hermitian());
  const Eigen::Index d = rho1.dim();
  return Detector::make({HermitianMatrix(CMatrix::Identity(d, d) - pp.support.matrix()), pp.support},
                        DetectorKind::kPVM);
}

std::vector<int> classical_ml(const RMatrix& prob) {
  if (prob.rows() == 0 || prob.cols() == 0) fail(ErrorCode::kInvalidArgument, "empty probability matrix");
  for (Eigen::Index i = 0; i < prob.rows(); ++i) {
    if ((prob.row(i).array() < 0.0).any() || !prob.row(i).allFinite()) {
      fail(ErrorCode::kInvalidArgument, "probability rows must be nonnegative");
    }
    if (std::abs(prob.row(i).sum() - 1.0) > 1e-10) {
      fail(ErrorCode::kInvalidArgument, "probability rows must sum to 1");
    }
  }
  std::vector<GsCandidate> entries;
  entries.reserve(static_cast<std::size_t>(prob.size()));
  for (Eigen::Index i = 0; i < prob.rows(); ++i) {
    for (Eigen::Index w = 0; w < prob.cols(); ++w) {
      entries.push_back({prob(i, w), static_cast<int>(i), static_cast<std::size_t>(w)});
    }
  }
  std::vector<int> label(static_cast<std::size_t>(prob.cols()), -1);
  std::size_t remaining = label.size();
  for (const GsCandidate& e : selection_order(std::move(entries))) {
    if (label[e.local] >= 0) continue;  // column already eliminated
    label[e.local] = e.hypothesis;
    if (--remaining == 0) break;
  }
  return label;
}

GsDetector gs_detector(std::span<const DensityMatrix> states) {
  require_same_dim(states);
  if (states.size() < 2) fail(ErrorCode::kInvalidArgument, "Gram-Schmidt detector needs r >= 2");
  const ProductEigenSource source(states, 1, kNoLimit);
  const GsRun run = run_gram_schmidt(source);
  ExplicitRun ex = densify(run, source);
  std::vector<HermitianMatrix> elems;
  for (CMatrix& e : ex.elements) elems.emplace_back(std::move(e));
  return {Detector::make(std::move(elems), DetectorKind::kPVM), std::move(ex.diagnostics)};
}

double pairwise_overlap_sum(std::span<const DensityMatrix> states) {
  double sum = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      sum += 2.0 * binary_qcb(states[i], states[j]).q_star;
    }
  }
  return sum;
}

double lemma3_bound(std::span<const DensityMatrix> states, const GsDiagnostics& diag) {
  if (!(diag.lambda_min_gram > 0.0)) {
    fail(ErrorCode::kNumerical, "lambda_min of the Gram matrix is not positive");
  }
  return pairwise_overlap_sum(states) /
         (static_cast<double>(states.size()) * diag.lambda_min_gram);
}

Detector pgm(std::span<const DensityMatrix> states, std::span<const double> priors) {
  require_same_dim(states);
  if (priors.size() != states.size()) fail(ErrorCode::kInvalidArgument, "one prior per state required");
  double total = 0.0;
  for (double p : priors) {
    if (!(p >= 0.0)) fail(ErrorCode::kInvalidArgument, "priors must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-10) fail(ErrorCode::kInvalidArgument, "priors must sum to 1");

  const Eigen::Index d = states.front().dim();
  CMatrix avg = CMatrix::Zero(d, d);
  for (std::size_t i = 0; i < states.size(); ++i) avg += priors[i] * states[i].matrix();
  const SpectralDecomposition s = spectral_decompose(HermitianMatrix(avg));
  CMatrix inv_sqrt = CMatrix::Zero(d, d);
  CMatrix supp = CMatrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double lam = s.eigenvalues(j);
    if (lam <= 0.0 || is_zero_eigenvalue(lam, s.largest())) continue;
    const CMatrix proj = s.eigenvectors.col(j) * s.eigenvectors.col(j).adjoint();
    inv_sqrt += proj / std::sqrt(lam);
    supp += proj;
  }
  std::vector<HermitianMatrix> elems;
  for (std::size_t i = 0; i < states.size(); ++i) {
    CMatrix e = inv_sqrt * (priors[i] * states[i].matrix()) * inv_sqrt;
    if (i == 0) e += CMatrix::Identity(d, d) - supp;
    elems.emplace_back(e);
  }
  return Detector::make(std::move(elems), DetectorKind::kPOVM);
}

CommonBasis simultaneous_diagonalize(std::span<const DensityMatrix> states) {
  require_same_dim(states);
  const Eigen::Index d = states.front().dim();
  bool all_diagonal = true;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const CMatrix& a = states[i].matrix();
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      const CMatrix& b = states[j].matrix();
      if (max_abs_entry(a * b - b * a) > 1e-10) {
        fail(ErrorCode::kInvalidArgument, "states do not commute");
      }
    }
    CMatrix off = a;
    off.diagonal().setZero();
    if (max_abs_entry(off) != 0.0) all_diagonal = false;
  }

  CommonBasis out;
  if (all_diagonal) {
    out.basis = CMatrix::Identity(d, d);
  } else {
    // A generic combination of commuting states has their joint eigenbasis.
    CMatrix mix = CMatrix::Zero(d, d);
    for (std::size_t i = 0; i < states.size(); ++i) {
      mix += std::sqrt(2.0 + static_cast<double>(i)) * states[i].matrix();
    }
    out.basis = spectral_decompose(HermitianMatrix(mix)).eigenvectors;
  }
  out.probabilities.resize(static_cast<Eigen::Index>(states.size()), d);
  for (std::size_t i = 0; i < states.size(); ++i) {
    const CMatrix diag = out.basis.adjoint() * states[i].matrix() * out.basis;
    CMatrix off = diag;
    off.diagonal().setZero();
    if (max_abs_entry(off) > 1e-9) {
      fail(ErrorCode::kNumerical, "could not find a common eigenbasis");
    }
    out.probabilities.row(static_cast<Eigen::Index>(i)) = diag.diagonal().real().cwiseMax(0.0).transpose();
  }
  return out;
}

BayesCommuting bayes_commuting(std::span<const DensityMatrix> states) {
  const CommonBasis cb = simultaneous_diagonalize(states);
  const Eigen::Index d = cb.basis.rows();
  const auto r = static_cast<Eigen::Index>(states.size());
  RVector m(d);
  std::vector<CMatrix> elems(states.size(), CMatrix::Zero(d, d));
  for (Eigen::Index j = 0; j < d; ++j) {
    m(j) = cb.probabilities.col(j).maxCoeff();
    Eigen::Index label = 0;
    for (Eigen::Index i = 0; i < r; ++i) {
      if (cb.probabilities(i, j) >= m(j) - 1e-12) {
        label = i;
        break;
      }
    }
    elems[static_cast<std::size_t>(label)] += cb.basis.col(j) * cb.basis.col(j).adjoint();
  }
  std::vector<HermitianMatrix> hel;
  for (CMatrix& e : elems) hel.emplace_back(std::move(e));

  BayesCommuting out{Detector::make(std::move(hel), DetectorKind::kPVM), m.sum(),
                     HermitianMatrix(cb.basis * m.cast<Complex>().asDiagonal() * cb.basis.adjoint())};
  const BayesConditionReport rep = verify_bayes_conditions(states, out.detector, 1e-9);
  if (!rep.passed()) fail(ErrorCode::kNumerical, "commuting Bayes rule fails its optimality conditions");
  return out;
}

BayesConditionReport verify_bayes_conditions(std::span<const DensityMatrix> states,
                                             const Detector& det, double tol) {
  require_same_dim(states);
  if (states.size() != det.size() || states.front().dim() != det.dim()) {
    fail(ErrorCode::kDimensionMismatch, "detector does not match the hypothesis set");
  }
  const Eigen::Index d = det.dim();
  CMatrix m = CMatrix::Zero(d, d);
  for (std::size_t i = 0; i < states.size(); ++i) m += states[i].matrix() * det[i].matrix();

  BayesConditionReport rep;
  rep.hermitian_residual = max_abs_entry(m - m.adjoint());
  rep.hermitian = rep.hermitian_residual <= tol;
  const CMatrix mh = 0.5 * (m + m.adjoint());
  rep.min_dominance_eigenvalue = std::numeric_limits<double>::infinity();
  rep.max_complementary_residual = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const CMatrix gap = mh - states[i].matrix();
    rep.min_dominance_eigenvalue = std::min(rep.min_dominance_eigenvalue, min_eigenvalue(gap));
    const CMatrix left = (m - states[i].matrix()) * det[i].matrix();
    const CMatrix right = det[i].matrix() * (m - states[i].matrix());
    rep.max_complementary_residual =
        std::max({rep.max_complementary_residual, spectral_norm(left), spectral_norm(right)});
  }
  rep.dominates = rep.min_dominance_eigenvalue >= -tol;
  rep.complementary = rep.max_complementary_residual <= tol;
  return rep;
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "epsilon must lie in (0, 1)");
  }
  if (epsilon > kEpsilonMax) {
    std::ostringstream os;
    os << "epsilon " << epsilon << " exceeds the validity bound 1/sqrt(2)";
    fail(ErrorCode::kInvalidArgument, os.str());
  }
  const double delta = std::sqrt(1.0 - epsilon * epsilon);
  // (delta eps - eps^2)(|u><u| + |f><f|) + 2 eps^2 |u><u| in the basis {u, f}.
  CMatrix cert = CMatrix::Identity(2, 2) * (delta * epsilon - epsilon * epsilon);
  cert(0, 0) += 2.0 * epsilon * epsilon;
  if (min_eigenvalue(cert) < -1e-12) {
    fail(ErrorCode::kInvalidArgument, "epsilon fails the positivity certificate");
  }
}

EpsilonDetector epsilon_detector(std::span<const DensityMatrix> states, double epsilon) {
  require_same_dim(states);
  if (states.size() < 2) fail(ErrorCode::kInvalidArgument, "epsilon detector needs r >= 2");
  check_epsilon(epsilon);
  const ProductEigenSource source(states, 1, kNoLimit,
                                  ProductEigenSource::Embedding::kPerturbed, epsilon);
  const GsRun run = run_gram_schmidt(source);
  ExplicitRun ex = densify(run, source);

  const Eigen::Index d = states.front().dim();
  std::vector<HermitianMatrix> blocks;
  for (const CMatrix& e : ex.elements) blocks.emplace_back(CMatrix(e.topLeftCorner(d, d)));

  EpsilonDetector out{Detector::make(std::move(blocks), DetectorKind::kPOVM),
                      std::move(ex.diagnostics), {}, epsilon};
  CVector u;
  for (int i = 0; i < source.hypotheses(); ++i) {
    CMatrix rho = CMatrix::Zero(source.dimension(), source.dimension());
    for (const GsCandidate& c : source.candidates()) {
      if (c.hypothesis != i) continue;
      source.materialize(c, u);
      rho += c.value * (u * u.adjoint());
    }
    // Absorb the rounding of the eigenvalue sum so the trace check holds.
    rho /= rho.trace().real();
    out.embedded_states.push_back(DensityMatrix::from_matrix(rho));
  }
  return out;
}

double lemma6_bound(int r, double epsilon, double overlap_sum) {
  return (2.0 * epsilon + overlap_sum / (epsilon * epsilon)) / static_cast<double>(r);
}

}  // namespace qmht
