// SPDX-License-Identifier: Apache-2.0
#include "qmht/product_source.hpp"

#include <cmath>

namespace qmht {

namespace {
constexpr double kProductValueRel = 1e-15;
}

ProductEigenSource::ProductEigenSource(std::span<const DensityMatrix> base, int n,
                                       std::size_t dense_limit, Embedding embedding,
                                       double epsilon)
    : n_(n), embedding_(embedding) {
  if (base.empty()) fail(ErrorCode::kInvalidArgument, "empty hypothesis set");
  base_dim_ = base.front().dim();
  for (const DensityMatrix& rho : base) {
    if (rho.dim() != base_dim_) fail(ErrorCode::kDimensionMismatch, "states differ in dimension");
  }
  power_dim_ = static_cast<Eigen::Index>(checked_power_dim(base_dim_, n, dense_limit));
  const auto r = static_cast<Eigen::Index>(base.size());

  if (embedding_ == Embedding::kNone) {
    dim_ = power_dim_;
  } else {
    if (embedding_ == Embedding::kPerturbed && !(epsilon > 0.0 && epsilon < 1.0)) {
      fail(ErrorCode::kInvalidArgument, "embedding epsilon must lie in (0, 1)");
    }
    epsilon_ = embedding_ == Embedding::kPerturbed ? epsilon : 0.0;
    delta_ = std::sqrt(1.0 - epsilon_ * epsilon_);
    dim_ = (r + 1) * power_dim_;
  }

  for (const DensityMatrix& rho : base) base_vectors_.push_back(rho.spectrum().eigenvectors);
  base_overlap_.resize(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    for (std::size_t k = 0; k < base.size(); ++k) {
      if (i == k) {
        base_overlap_[i].push_back(CMatrix::Identity(base_dim_, base_dim_));
      } else {
        base_overlap_[i].push_back(base_vectors_[i].adjoint() * base_vectors_[k]);
      }
    }
  }

  for (const DensityMatrix& rho : base) {
    std::vector<PowerEigenpair> keep;
    PowerEigenStream stream(rho.spectrum().eigenvalues, n);
    double top = -1.0;
    while (auto p = stream.next()) {
      if (top < 0.0) top = p->value;
      if (p->value <= 0.0 || p->value <= kProductValueRel * top) break;
      keep.push_back(std::move(*p));
    }
    pairs_.push_back(std::move(keep));
  }
}

ProductEigenSource ProductEigenSource::with_embedding(Embedding embedding, double epsilon) const {
  ProductEigenSource out = *this;
  out.embedding_ = embedding;
  if (embedding == Embedding::kNone) {
    out.dim_ = power_dim_;
    out.epsilon_ = 0.0;
    out.delta_ = 1.0;
    return out;
  }
  if (embedding == Embedding::kPerturbed && !(epsilon > 0.0 && epsilon < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "embedding epsilon must lie in (0, 1)");
  }
  out.epsilon_ = embedding == Embedding::kPerturbed ? epsilon : 0.0;
  out.delta_ = std::sqrt(1.0 - out.epsilon_ * out.epsilon_);
  out.dim_ = (static_cast<Eigen::Index>(pairs_.size()) + 1) * power_dim_;
  return out;
}

std::vector<GsCandidate> ProductEigenSource::candidates() const {
  std::vector<GsCandidate> out;
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    for (std::size_t j = 0; j < pairs_[i].size(); ++j) {
      out.push_back({pairs_[i][j].value, static_cast<int>(i), j});
    }
  }
  return out;
}

void ProductEigenSource::materialize(const GsCandidate& c, CVector& out) const {
  const PowerEigenpair& p = pairs_[static_cast<std::size_t>(c.hypothesis)][c.local];
  const CVector v = kron_vector(base_vectors_[static_cast<std::size_t>(c.hypothesis)], p.indices);
  if (embedding_ == Embedding::kNone) {
    out = v;
    return;
  }
  out = CVector::Zero(dim_);
  out.head(power_dim_) = delta_ * v;
  if (embedding_ == Embedding::kPerturbed) {
    const auto block = static_cast<Eigen::Index>(c.hypothesis) + 1;
    out(block * power_dim_ + static_cast<Eigen::Index>(kron_index(p.indices, base_dim_))) = epsilon_;
  }
}

Complex ProductEigenSource::overlap(const GsCandidate& a, const GsCandidate& b) const {
  const PowerEigenpair& pa = pairs_[static_cast<std::size_t>(a.hypothesis)][a.local];
  const PowerEigenpair& pb = pairs_[static_cast<std::size_t>(b.hypothesis)][b.local];
  const CMatrix& table = base_overlap_[static_cast<std::size_t>(a.hypothesis)]
                                      [static_cast<std::size_t>(b.hypothesis)];
  Complex prod(1.0, 0.0);
  for (int m = 0; m < n_; ++m) {
    prod *= table(pa.indices[static_cast<std::size_t>(m)], pb.indices[static_cast<std::size_t>(m)]);
    if (prod == Complex(0.0, 0.0)) break;
  }
  if (embedding_ == Embedding::kNone) return prod;
  Complex out = delta_ * delta_ * prod;
  if (embedding_ == Embedding::kPerturbed && a.hypothesis == b.hypothesis && a.local == b.local) {
    out += epsilon_ * epsilon_;
  }
  return out;
}

}  // namespace qmht
