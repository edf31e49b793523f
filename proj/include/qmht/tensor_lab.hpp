// SPDX-License-Identifier: Apache-2.0
//
// n-copy experiments on rho_1^{(x)n}, ..., rho_r^{(x)n} using the implicit
// product eigenstructure of the tensor powers.
#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qmht/chernoff.hpp"
#include "qmht/detectors.hpp"
#include "qmht/power_eigen.hpp"

namespace qmht {

enum class DetectorFamily { kGs, kEpsilon, kHelstrom, kClassicalMl };

std::string_view to_string(DetectorFamily kind);
/// Accepts "gs", "epsilon", "helstrom", "classical-ml". Throws kParse.
DetectorFamily family_from_string(std::string_view name);

struct ExperimentRow {
  int n = 0;
  DetectorFamily kind = DetectorFamily::kGs;
  double err = 0.0;
  double exponent = 0.0;  // -(1/n) log err, +inf when err == 0
  std::vector<double> per_hypothesis;
  std::optional<double> lemma3_bound;     // gs only
  std::optional<double> lambda_min_gram;  // gs and epsilon
  std::optional<double> epsilon;          // epsilon only
  std::optional<double> lemma6_bound;     // epsilon only
  std::optional<int> stopping_index;      // gs and epsilon
};

struct SlopeEstimate {
  DetectorFamily kind = DetectorFamily::kGs;
  std::optional<double> slope;  // absent when fewer than two usable points
};

struct ExperimentReport {
  std::vector<ExperimentRow> rows;  // ordered by n, then by requested kind
  MultipleChernoffResult qcb;
  std::vector<SlopeEstimate> slopes;

  const ExperimentRow* find(int n, DetectorFamily kind) const;
};

struct ExperimentOptions {
  std::optional<double> epsilon_override;
  std::size_t dense_limit = default_dense_limit();
};

/// Least-squares slope of -log err_n against n over the upper half of the
/// n-range. Rows with err == 0 are skipped.
std::optional<double> slope_exponent(std::span<const ExperimentRow> rows, DetectorFamily kind);

/// K_n = sum over ordered pairs i != j of (q*_ij)^n.
double overlap_sum_power(const MultipleChernoffResult& qcb, int n);

/// min(K^{1/3}, 1/sqrt(2) - 1e-6).
double epsilon_from_overlap_sum(double overlap_sum);

/// epsilon_from_overlap_sum(K_n) for the given states.
double epsilon_schedule(std::span<const DensityMatrix> states, int n);

/// Runs every requested detector family for n in [n_min, n_max]. Throws
/// kLimitExceeded when d^{n_max} exceeds the dense limit, kInvalidArgument for
/// a family that does not apply to the states.
ExperimentReport run_power_experiment(std::span<const DensityMatrix> base, int n_min, int n_max,
                                      std::span<const DetectorFamily> kinds,
                                      const ExperimentOptions& options = {});

struct LiPair {
  int i = 0;
  int j = 0;
  double lambda_max = 0.0;  // lambda_max(P_i P_j P_i)
  bool holds = false;       // lambda_max < 1 - 1e-9
};

/// Pairwise trivial-intersection test of the state supports.
std::vector<LiPair> pairwise_li_check(std::span<const DensityMatrix> states);

/// lambda_min of the Gram matrix of all nonzero-eigenvalue eigenvectors of the
/// n-copy states, for each n. Throws kInvalidArgument when some pair of
/// supports intersects.
std::vector<std::pair<int, double>> gram_convergence_check(std::span<const DensityMatrix> base,
                                                           int n_min, int n_max,
                                                           std::size_t dense_limit =
                                                               default_dense_limit());

}  // namespace qmht
