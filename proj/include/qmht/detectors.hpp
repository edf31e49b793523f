// SPDX-License-Identifier: Apache-2.0
//
// Quantum detectors (POVMs) for r hypotheses and their error probabilities
// under a uniform prior. Hypothesis indices are 0-based throughout.
#pragma once

#include <span>
#include <utility>
#include <vector>

#include "qmht/gram_schmidt.hpp"
#include "qmht/hermitian.hpp"

namespace qmht {

enum class DetectorKind { kPVM, kPOVM };

/// r PSD elements summing to the identity.
class Detector {
 public:
  /// Validates: each element PSD (lambda_min >= -1e-9), sum equal to the
  /// identity within 1e-9 max-entry, and for kPVM idempotent, mutually
  /// orthogonal elements within 1e-9. Throws kNumerical otherwise.
  static Detector make(std::vector<HermitianMatrix> elements, DetectorKind kind);

  const std::vector<HermitianMatrix>& elements() const { return elements_; }
  const HermitianMatrix& operator[](std::size_t i) const { return elements_[i]; }
  std::size_t size() const { return elements_.size(); }
  Eigen::Index dim() const { return elements_.empty() ? 0 : elements_.front().dim(); }
  DetectorKind kind() const { return kind_; }

 private:
  std::vector<HermitianMatrix> elements_;
  DetectorKind kind_ = DetectorKind::kPOVM;
};

struct ErrorReport {
  std::vector<double> per_hypothesis;  // Err_i
  std::vector<double> successes;       // Succ_i = tr[rho_i E_i]
  double averaged = 0.0;               // Err = mean of Err_i
};

ErrorReport evaluate_errors(std::span<const DensityMatrix> states, const Detector& det);

/// {1 - P, P} with P = supp (rho2 - rho1)_+. The kernel of rho2 - rho1 goes to
/// hypothesis 0.
Detector holevo_helstrom(const DensityMatrix& rho1, const DensityMatrix& rho2);

/// Classical maximum-likelihood rule by repeated extraction of the largest
/// remaining entry of the r x d probability matrix. Ties go to the smallest
/// (i, omega). Returns the label of each column.
std::vector<int> classical_ml(const RMatrix& prob);

struct GsDiagnostics {
  std::vector<std::pair<int, int>> selection_order;  // (i(s), j(s)), s = 1..N
  std::vector<double> selected_values;               // lambda_{i(s), j(s)}
  std::vector<CVector> basis;                        // full orthonormal basis
  std::vector<int> labels;                           // label of each basis vector
  HermitianMatrix gram_n;                            // Gamma_N
  int stopping_index = 0;                            // N
  double lambda_min_gram = 1.0;                      // lambda_min(Gamma_N)
};

struct GsDetector {
  Detector detector;
  GsDiagnostics diagnostics;
};

/// The eigenvalue-ordered Gram-Schmidt PVM. Directions beyond the N selected
/// ones complete the basis (Gram-Schmidt on the canonical basis) and carry
/// label 0.
GsDetector gs_detector(std::span<const DensityMatrix> states);

/// Sum over ordered pairs i != j of inf_s tr[rho_i^{1-s} rho_j^s].
double pairwise_overlap_sum(std::span<const DensityMatrix> states);

/// lambda_min(Gamma_N)^{-1} * r^{-1} * pairwise_overlap_sum. Throws kNumerical
/// when lambda_min(Gamma_N) <= 0.
double lemma3_bound(std::span<const DensityMatrix> states, const GsDiagnostics& diag);

/// rho^{-1/2} p_i rho_i rho^{-1/2}, rho = sum p_i rho_i, inverse on supp rho;
/// 1 - supp rho is added to element 0.
Detector pgm(std::span<const DensityMatrix> states, std::span<const double> priors);

/// Orthonormal common eigenbasis (columns) and the r x d matrix of diagonal
/// entries p_ij = <v_j|rho_i|v_j>. Throws kInvalidArgument when some pair of
/// states fails to commute within 1e-10.
struct CommonBasis {
  CMatrix basis;
  RMatrix probabilities;
};
CommonBasis simultaneous_diagonalize(std::span<const DensityMatrix> states);

struct BayesCommuting {
  Detector detector;
  double mu = 0.0;  // tr M, the maximal total success sum_i tr[rho_i E_i]
  HermitianMatrix m;
};

/// Bayes rule for commuting states: M = diag(max_i p_ij) in the common basis,
/// slot j assigned to the smallest maximizing i. Verifies the optimality
/// conditions at 1e-9 and throws kNumerical if they fail.
BayesCommuting bayes_commuting(std::span<const DensityMatrix> states);

struct BayesConditionReport {
  bool hermitian = false;      // M = sum rho_i E_i is Hermitian
  bool dominates = false;      // M >= rho_i for all i
  bool complementary = false;  // (M - rho_i) E_i = 0 for all i
  double hermitian_residual = 0.0;
  double min_dominance_eigenvalue = 0.0;
  double max_complementary_residual = 0.0;

  bool passed() const { return hermitian && dominates && complementary; }
};

BayesConditionReport verify_bayes_conditions(std::span<const DensityMatrix> states,
                                             const Detector& det, double tol);

/// Largest epsilon accepted by epsilon_detector.
inline constexpr double kEpsilonMax = 0.70710678118654752440;

struct EpsilonDetector {
  Detector detector;                           // POVM on C^d
  GsDiagnostics embedded;                      // Gram-Schmidt run on C^{(r+1)d}
  std::vector<DensityMatrix> embedded_states;  // perturbed states on C^{(r+1)d}
  double epsilon = 0.0;
};

/// Throws kInvalidArgument unless 0 < epsilon <= 1/sqrt(2) and the 2x2
/// positivity certificate (delta eps - eps^2) I + 2 eps^2 |u><u| is PSD.
void check_epsilon(double epsilon);

/// Builds perturbed embedded states, runs the Gram-Schmidt rule on them in
/// dimension (r+1)d, and keeps the upper-left d x d blocks.
EpsilonDetector epsilon_detector(std::span<const DensityMatrix> states, double epsilon);

/// r^{-1} (2 eps + eps^{-2} K) for a given pairwise overlap sum K.
double lemma6_bound(int r, double epsilon, double overlap_sum);

}  // namespace qmht
