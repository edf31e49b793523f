// SPDX-License-Identifier: Apache-2.0
#include "qmht/power_eigen.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <sstream>

namespace qmht {

std::size_t default_dense_limit() {
  const char* env = std::getenv("QMHT_DENSE_LIMIT");
  if (env == nullptr || *env == '\0') return kDefaultDenseLimit;
  std::size_t value = 0;
  const char* end = env + std::strlen(env);
  auto [ptr, ec] = std::from_chars(env, end, value);
  if (ec != std::errc() || ptr != end || value == 0) return kDefaultDenseLimit;
  return value;
}

std::size_t checked_power_dim(Eigen::Index d, int n, std::size_t limit) {
  if (d <= 0 || n <= 0) fail(ErrorCode::kInvalidArgument, "tensor power needs d >= 1, n >= 1");
  std::size_t total = 1;
  for (int k = 0; k < n; ++k) {
    if (total > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(d)) {
      total = std::numeric_limits<std::size_t>::max();
      break;
    }
    total *= static_cast<std::size_t>(d);
    if (total > limit) break;
  }
  if (total > limit) {
    std::ostringstream os;
    os << "dimension " << d << "^" << n << " exceeds the dense limit " << limit;
    fail(ErrorCode::kLimitExceeded, os.str());
  }
  return total;
}

double product_value(const RVector& base_values, std::span<const int> indices) {
  std::vector<int> counts(static_cast<std::size_t>(base_values.size()), 0);
  for (int j : indices) ++counts[static_cast<std::size_t>(j)];
  double v = 1.0;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    for (int c = 0; c < counts[j]; ++c) v *= base_values(static_cast<Eigen::Index>(j));
  }
  return v;
}

std::size_t kron_index(std::span<const int> indices, Eigen::Index d) {
  std::size_t x = 0;
  for (int j : indices) x = x * static_cast<std::size_t>(d) + static_cast<std::size_t>(j);
  return x;
}

CVector kron_vector(const CMatrix& base_vectors, std::span<const int> indices) {
  const Eigen::Index d = base_vectors.rows();
  CVector cur = CVector::Ones(1);
  for (int j : indices) {
    CVector next(cur.size() * d);
    for (Eigen::Index k = 0; k < cur.size(); ++k) {
      next.segment(k * d, d) = cur(k) * base_vectors.col(j);
    }
    cur.swap(next);
  }
  return cur;
}

PowerEigenStream::PowerEigenStream(RVector base_values, int n)
    : base_(std::move(base_values)), n_(n) {
  if (n_ <= 0 || base_.size() == 0) {
    fail(ErrorCode::kInvalidArgument, "power stream needs n >= 1 and a nonempty base");
  }
  std::vector<int> zero(static_cast<std::size_t>(n_), 0);
  heap_.push({product_value(base_, zero), std::move(zero)});
}

std::optional<PowerEigenpair> PowerEigenStream::next() {
  if (heap_.empty()) return std::nullopt;
  Node top = heap_.top();
  heap_.pop();

  // Each tuple has one parent: decrement its last nonzero coordinate. So a
  // tuple spawns children only at or after that coordinate.
  int last = 0;
  for (int k = n_ - 1; k >= 0; --k) {
    if (top.indices[static_cast<std::size_t>(k)] > 0) {
      last = k;
      break;
    }
  }
  for (int k = last; k < n_; ++k) {
    if (top.indices[static_cast<std::size_t>(k)] + 1 < base_.size()) {
      std::vector<int> child = top.indices;
      ++child[static_cast<std::size_t>(k)];
      const double v = product_value(base_, child);
      heap_.push({v, std::move(child)});
    }
  }
  return PowerEigenpair{top.value, std::move(top.indices)};
}

std::vector<PowerEigenpair> kron_power_eigenpairs(const DensityMatrix& rho, int n,
                                                  std::size_t dense_limit) {
  const std::size_t total = checked_power_dim(rho.dim(), n, dense_limit);
  std::vector<PowerEigenpair> out;
  out.reserve(total);
  PowerEigenStream stream(rho.spectrum().eigenvalues, n);
  while (auto p = stream.next()) out.push_back(std::move(*p));
  return out;
}

}  // namespace qmht
