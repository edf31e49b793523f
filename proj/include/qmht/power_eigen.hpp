// SPDX-License-Identifier: Apache-2.0
//
// Implicit eigenstructure of tensor powers rho^{(x)n}: eigenvalues are products
// of base eigenvalues and eigenvectors are Kronecker products of base
// eigenvectors, addressed by index tuples and only materialized on request.
#pragma once

#include <cstddef>
#include <optional>
#include <queue>
#include <span>
#include <vector>

#include "qmht/hermitian.hpp"

namespace qmht {

inline constexpr std::size_t kDefaultDenseLimit = 16384;

/// The d^n cap: QMHT_DENSE_LIMIT when set to a positive integer, otherwise
/// kDefaultDenseLimit.
std::size_t default_dense_limit();

/// d^n, throwing kLimitExceeded when it exceeds `limit`.
std::size_t checked_power_dim(Eigen::Index d, int n, std::size_t limit);

struct PowerEigenpair {
  double value;
  std::vector<int> indices;  // base eigen-indices, one per tensor factor
};

/// Product of base eigenvalues. Multiplication runs over the sorted multiset
/// of indices so permuted tuples give bitwise identical values.
double product_value(const RVector& base_values, std::span<const int> indices);

/// Position of the tuple in Kronecker (row-major, base d) order.
std::size_t kron_index(std::span<const int> indices, Eigen::Index d);

/// The Kronecker product of the indexed columns of `base_vectors`.
CVector kron_vector(const CMatrix& base_vectors, std::span<const int> indices);

/// Yields the eigenpairs of rho^{(x)n} in descending value order, ties broken
/// by ascending index tuple. Base values must be sorted descending.
class PowerEigenStream {
 public:
  PowerEigenStream(RVector base_values, int n);

  std::optional<PowerEigenpair> next();

 private:
  struct Node {
    double value;
    std::vector<int> indices;
  };
  struct Later {
    bool operator()(const Node& a, const Node& b) const {
      if (a.value != b.value) return a.value < b.value;
      return a.indices > b.indices;
    }
  };

  RVector base_;
  int n_;
  std::priority_queue<Node, std::vector<Node>, Later> heap_;
};

/// All d^n eigenpairs of rho^{(x)n}, descending.
std::vector<PowerEigenpair> kron_power_eigenpairs(
    const DensityMatrix& rho, int n, std::size_t dense_limit = default_dense_limit());

}  // namespace qmht
