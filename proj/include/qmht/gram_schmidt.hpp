// SPDX-License-Identifier: Apache-2.0
//
// The eigenvalue-ordered Gram-Schmidt decision rule, written against an
// abstract source of eigenpairs so the same loop serves single-copy states,
// tensor powers with implicit product eigenvectors, and the epsilon embedding.
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qmht/hermitian.hpp"

namespace qmht {

/// Tolerance of the span-membership test: a candidate is eliminated when its
/// residual against the basis built so far has norm at most this value.
inline constexpr double kSpanTol = 1e-9;

/// Eigenpair (value, vector) of hypothesis `hypothesis`; `local` indexes the
/// source's own list for that hypothesis.
struct GsCandidate {
  double value;
  int hypothesis;
  std::size_t local;
};

class CandidateSource {
 public:
  virtual ~CandidateSource() = default;

  virtual Eigen::Index dimension() const = 0;
  virtual int hypotheses() const = 0;
  /// Eigenpairs with nonzero value, per hypothesis in descending value order
  /// with `local` increasing along ties.
  virtual std::vector<GsCandidate> candidates() const = 0;
  /// Writes the unit eigenvector of `c` into `out` (resized to dimension()).
  virtual void materialize(const GsCandidate& c, CVector& out) const = 0;
  /// <v_a | v_b>
  virtual Complex overlap(const GsCandidate& a, const GsCandidate& b) const = 0;
};

/// Sparse storage for basis vectors; exact zeros are dropped.
struct SparseVector {
  std::vector<Eigen::Index> index;
  std::vector<Complex> value;

  static SparseVector from_dense(const CVector& v);
  CVector to_dense(Eigen::Index dim) const;
  /// <this | v>
  Complex dot(const CVector& v) const;
  /// y += a * this
  void axpy(Complex a, CVector& y) const;
};

/// Orders candidates for selection: descending value, where values within
/// 1e-12 relative of each other count as tied, ties broken by (hypothesis,
/// local) ascending.
std::vector<GsCandidate> selection_order(std::vector<GsCandidate> cands);

struct GsRun {
  Eigen::Index dimension = 0;
  int hypotheses = 0;
  std::vector<GsCandidate> selected;  // (i(s), j(s)) for s = 1..N
  std::vector<SparseVector> basis;    // e_1..e_N
  std::vector<int> labels;            // phi(e_s), 0-based hypothesis
  double lambda_min_gram = 1.0;       // lambda_min(Gamma_N)

  std::size_t stopping_index() const { return selected.size(); }
};

/// Runs the selection loop. Each candidate is examined once, in selection
/// order: if its residual against span(e_1..e_s) has norm <= span_tol it is
/// eliminated, otherwise it becomes e_{s+1} with its hypothesis as label.
/// Orthogonalization uses modified Gram-Schmidt with one reorthogonalization
/// pass when cancellation is detected.
GsRun run_gram_schmidt(const CandidateSource& source, double span_tol = kSpanTol);

/// lambda_min of the Gram matrix of `count` vectors whose pairwise overlaps are
/// given by `overlap`. Exact-zero overlaps split the matrix into independent
/// blocks, each diagonalized separately.
double block_gram_min_eigenvalue(std::size_t count,
                                 const std::function<Complex(std::size_t, std::size_t)>& overlap);

/// The Gram matrix of the selected vectors of a run.
CMatrix run_gram_matrix(const GsRun& run, const CandidateSource& source);

/// Error probabilities of the PVM {sum_{s: label i} |e_s><e_s|}, with the
/// orthogonal complement of span(e_1..e_N) assigned to hypothesis 0, against
/// the states whose eigenpairs `states` enumerates (same dimension as run).
/// Returns Err_i per hypothesis.
std::vector<double> run_errors(const GsRun& run, const CandidateSource& states);

}  // namespace qmht
