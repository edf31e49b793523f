// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "qmht/hermitian.hpp"

namespace testing_util {

inline qmht::DensityMatrix ket(std::vector<qmht::Complex> amps) {
  qmht::CVector v(static_cast<Eigen::Index>(amps.size()));
  for (std::size_t k = 0; k < amps.size(); ++k) v(static_cast<Eigen::Index>(k)) = amps[k];
  return qmht::DensityMatrix::pure(v / v.norm());
}

inline qmht::DensityMatrix ket0() { return ket({1.0, 0.0}); }
inline qmht::DensityMatrix ket1() { return ket({0.0, 1.0}); }
inline qmht::DensityMatrix plus() { return ket({1.0, 1.0}); }

inline qmht::DensityMatrix diag(std::vector<double> p) { return qmht::DensityMatrix::diagonal(p); }

inline qmht::DensityMatrix from_oracle(const oracle::Mat& m) {
  return qmht::DensityMatrix::from_matrix(qmht::CMatrix(m));
}

inline qmht::DensityMatrix random_state(std::mt19937_64& rng, Eigen::Index d, Eigen::Index rank) {
  return from_oracle(oracle::random_density(rng, d, rank));
}

}  // namespace testing_util
