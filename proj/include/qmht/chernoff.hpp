// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "qmht/hermitian.hpp"

namespace qmht {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Binary quantum Chernoff bound: xi = -log inf_s Q(s).
struct ChernoffResult {
  double xi = 0.0;      // +inf when q_star == 0
  double s_star = 0.5;  // a minimizer of Q on [0, 1]
  double q_star = 1.0;  // Q(s_star)
};

/// Minimum of the pairwise bounds. Pair indices are 0-based, first < second.
struct MultipleChernoffResult {
  double xi = 0.0;
  std::pair<int, int> argmin_pair{0, 1};
  std::map<std::pair<int, int>, ChernoffResult> pairwise;
};

/// Q(s) = tr[rho^{1-s} sigma^s] restricted to the supports of both states.
/// Eigen-overlaps are computed once so repeated evaluation is cheap.
class OverlapCurve {
 public:
  OverlapCurve(const DensityMatrix& rho, const DensityMatrix& sigma);

  double operator()(double s) const;

 private:
  std::vector<double> lambda_;  // log eigenvalues of rho on its support
  std::vector<double> mu_;      // log eigenvalues of sigma on its support
  RMatrix weight_;              // |<v_j|w_k>|^2
};

double q_overlap(const DensityMatrix& rho, const DensityMatrix& sigma, double s);

struct GoldenResult {
  double x;
  double fx;
};

/// Golden-section minimization of a unimodal function on [lo, hi] until the
/// bracket is at most `tol` wide.
GoldenResult golden_section_minimize(const std::function<double(double)>& f, double lo,
                                     double hi, double tol);

/// Minimizes Q on [0, 1]: 64-point uniform grid, then golden-section search in
/// the bracket around the best grid point, to |ds| <= 1e-8.
ChernoffResult binary_qcb(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Requires at least two pairwise distinct states (max-entry distance above
/// 1e-10). Ties in xi resolve to the lexicographically smallest pair.
MultipleChernoffResult multiple_qcb(std::span<const DensityMatrix> states);

}  // namespace qmht
