// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "qmht/gram_schmidt.hpp"
#include "qmht/power_eigen.hpp"

namespace qmht {

/// Eigenpairs of rho_i^{(x)n} for a hypothesis set, optionally embedded into
/// C^{(r+1) d^n}. In the perturbed embedding the eigenvector v of hypothesis i
/// with Kronecker position j maps to delta*v (+) epsilon*f_{i+1,j}, where
/// delta = sqrt(1 - epsilon^2) and f_{i+1,j} is the j-th basis vector of the
/// (i+1)-th extra block. The unperturbed embedding keeps only v in block 0.
class ProductEigenSource final : public CandidateSource {
 public:
  enum class Embedding { kNone, kPerturbed, kUnperturbed };

  /// Product eigenvalues at or below 1e-15 times the largest one of the same
  /// state are dropped.
  ProductEigenSource(std::span<const DensityMatrix> base, int n, std::size_t dense_limit,
                     Embedding embedding = Embedding::kNone, double epsilon = 0.0);

  Eigen::Index dimension() const override { return dim_; }
  int hypotheses() const override { return static_cast<int>(pairs_.size()); }
  std::vector<GsCandidate> candidates() const override;
  void materialize(const GsCandidate& c, CVector& out) const override;
  Complex overlap(const GsCandidate& a, const GsCandidate& b) const override;

  Eigen::Index power_dim() const { return power_dim_; }
  int copies() const { return n_; }
  const std::vector<PowerEigenpair>& eigenpairs(int i) const {
    return pairs_[static_cast<std::size_t>(i)];
  }
  /// The same eigenpairs under a different embedding.
  ProductEigenSource with_embedding(Embedding embedding, double epsilon) const;

 private:
  ProductEigenSource() = default;

  int n_ = 0;
  Eigen::Index base_dim_ = 0;
  Eigen::Index power_dim_ = 0;
  Eigen::Index dim_ = 0;
  Embedding embedding_ = Embedding::kNone;
  double epsilon_ = 0.0;
  double delta_ = 1.0;
  std::vector<CMatrix> base_vectors_;                // eigenvector columns per state
  std::vector<std::vector<CMatrix>> base_overlap_;   // [i][k](p, q) = <v_ip | v_kq>
  std::vector<std::vector<PowerEigenpair>> pairs_;   // nonzero eigenpairs per state
};

}  // namespace qmht
