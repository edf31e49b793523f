// SPDX-License-Identifier: Apache-2.0
#include "qmht/gram_schmidt.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace qmht {

SparseVector SparseVector::from_dense(const CVector& v) {
  SparseVector out;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (v(k) != Complex(0.0, 0.0)) {
      out.index.push_back(k);
      out.value.push_back(v(k));
    }
  }
  return out;
}

CVector SparseVector::to_dense(Eigen::Index dim) const {
  CVector out = CVector::Zero(dim);
  for (std::size_t k = 0; k < index.size(); ++k) out(index[k]) = value[k];
  return out;
}

Complex SparseVector::dot(const CVector& v) const {
  Complex acc(0.0, 0.0);
  for (std::size_t k = 0; k < index.size(); ++k) acc += std::conj(value[k]) * v(index[k]);
  return acc;
}

void SparseVector::axpy(Complex a, CVector& y) const {
  for (std::size_t k = 0; k < index.size(); ++k) y(index[k]) += a * value[k];
}

std::vector<GsCandidate> selection_order(std::vector<GsCandidate> cands) {
  auto by_index = [](const GsCandidate& a, const GsCandidate& b) {
    if (a.hypothesis != b.hypothesis) return a.hypothesis < b.hypothesis;
    return a.local < b.local;
  };
  std::sort(cands.begin(), cands.end(), [&](const GsCandidate& a, const GsCandidate& b) {
    if (a.value != b.value) return a.value > b.value;
    return by_index(a, b);
  });
  if (cands.empty()) return cands;

  const double tie = kZeroEigenvalueRel * cands.front().value;
  std::size_t begin = 0;
  while (begin < cands.size()) {
    std::size_t end = begin + 1;
    while (end < cands.size() && cands[end - 1].value - cands[end].value <= tie) ++end;
    std::sort(cands.begin() + static_cast<std::ptrdiff_t>(begin),
              cands.begin() + static_cast<std::ptrdiff_t>(end), by_index);
    begin = end;
  }
  return cands;
}

GsRun run_gram_schmidt(const CandidateSource& source, double span_tol) {
  GsRun run;
  run.dimension = source.dimension();
  run.hypotheses = source.hypotheses();

  const std::vector<GsCandidate> order = selection_order(source.candidates());
  CVector r(run.dimension);
  for (const GsCandidate& cand : order) {
    if (static_cast<Eigen::Index>(run.basis.size()) == run.dimension) break;  // span is full
    source.materialize(cand, r);
    const double start = r.norm();
    for (int pass = 0; pass < 2; ++pass) {
      const double before = r.norm();
      for (const SparseVector& e : run.basis) {
        const Complex w = e.dot(r);
        if (w != Complex(0.0, 0.0)) e.axpy(-w, r);
      }
      // A second pass only when the first one cancelled most of the vector.
      if (r.norm() > 0.5 * before) break;
    }
    const double residual = r.norm();
    if (residual <= span_tol * std::max(1.0, start)) continue;
    r /= residual;
    run.basis.push_back(SparseVector::from_dense(r));
    run.selected.push_back(cand);
    run.labels.push_back(cand.hypothesis);
  }

  run.lambda_min_gram = run.selected.empty()
                            ? 1.0
                            : block_gram_min_eigenvalue(run.selected.size(),
                                                        [&](std::size_t a, std::size_t b) {
                                                          return source.overlap(run.selected[a],
                                                                                run.selected[b]);
                                                        });
  return run;
}

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

double block_gram_min_eigenvalue(
    std::size_t count, const std::function<Complex(std::size_t, std::size_t)>& overlap) {
  DisjointSets sets(count);
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t b = a + 1; b < count; ++b) {
      if (sets.find(a) == sets.find(b)) continue;
      if (overlap(a, b) != Complex(0.0, 0.0)) sets.unite(a, b);
    }
  }
  std::vector<std::vector<std::size_t>> blocks(count);
  for (std::size_t a = 0; a < count; ++a) blocks[sets.find(a)].push_back(a);

  double lambda_min = std::numeric_limits<double>::infinity();
  for (const auto& block : blocks) {
    if (block.empty()) continue;
    const auto m = static_cast<Eigen::Index>(block.size());
    if (m == 1) {
      lambda_min = std::min(lambda_min, overlap(block[0], block[0]).real());
      continue;
    }
    CMatrix g(m, m);
    for (Eigen::Index k = 0; k < m; ++k) {
      for (Eigen::Index l = k; l < m; ++l) {
        const Complex v = overlap(block[static_cast<std::size_t>(k)], block[static_cast<std::size_t>(l)]);
        g(k, l) = v;
        g(l, k) = std::conj(v);
      }
      g(k, k) = Complex(g(k, k).real(), 0.0);
    }
    lambda_min = std::min(lambda_min, min_eigenvalue(g));
  }
  return lambda_min;
}

CMatrix run_gram_matrix(const GsRun& run, const CandidateSource& source) {
  const auto n = static_cast<Eigen::Index>(run.selected.size());
  CMatrix g(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = 0; l < n; ++l) {
      g(k, l) = source.overlap(run.selected[static_cast<std::size_t>(k)],
                               run.selected[static_cast<std::size_t>(l)]);
    }
  }
  return g;
}

std::vector<double> run_errors(const GsRun& run, const CandidateSource& states) {
  if (states.dimension() != run.dimension || states.hypotheses() != run.hypotheses) {
    fail(ErrorCode::kDimensionMismatch, "error evaluation: run and states do not match");
  }
  std::vector<double> err(static_cast<std::size_t>(run.hypotheses), 0.0);
  CVector v(run.dimension);
  for (const GsCandidate& c : states.candidates()) {
    states.materialize(c, v);
    double other = 0.0, total = 0.0;
    for (std::size_t s = 0; s < run.basis.size(); ++s) {
      const double w = std::norm(run.basis[s].dot(v));
      total += w;
      if (run.labels[s] != c.hypothesis) other += w;
    }
    double miss = other;
    if (c.hypothesis != 0) miss += std::max(0.0, v.squaredNorm() - total);
    err[static_cast<std::size_t>(c.hypothesis)] += c.value * miss;
  }
  return err;
}

}  // namespace qmht
