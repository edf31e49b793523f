// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "helpers.hpp"
#include "qmht/detectors.hpp"
#include "qmht/gram_schmidt.hpp"
#include "qmht/product_source.hpp"

using namespace qmht;
using namespace testing_util;

namespace {

constexpr std::size_t kBig = std::size_t{1} << 20;

// Candidates given as explicit vectors.
class VectorSource final : public CandidateSource {
 public:
  VectorSource(Eigen::Index dim, int r) : dim_(dim), r_(r) {}
  void add(double value, int hyp, CVector v) {
    std::size_t local = 0;
    for (const auto& e : entries_) local += e.first.hypothesis == hyp;
    entries_.push_back({{value, hyp, local}, std::move(v)});
  }
  Eigen::Index dimension() const override { return dim_; }
  int hypotheses() const override { return r_; }
  std::vector<GsCandidate> candidates() const override {
    std::vector<GsCandidate> out;
    for (const auto& e : entries_) out.push_back(e.first);
    return out;
  }
  void materialize(const GsCandidate& c, CVector& out) const override { out = find(c); }
  Complex overlap(const GsCandidate& a, const GsCandidate& b) const override {
    return find(a).dot(find(b));
  }

 private:
  const CVector& find(const GsCandidate& c) const {
    for (const auto& e : entries_) {
      if (e.first.hypothesis == c.hypothesis && e.first.local == c.local) return e.second;
    }
    throw std::out_of_range("candidate");
  }
  Eigen::Index dim_;
  int r_;
  std::vector<std::pair<GsCandidate, CVector>> entries_;
};

}  // namespace

TEST(SelectionOrder, DescendingWithLexicographicTies) {
  std::vector<GsCandidate> c{{0.5, 1, 0}, {0.5, 0, 1}, {0.9, 1, 1}, {0.5 + 1e-14, 0, 0}, {0.1, 0, 2}};
  const auto order = selection_order(c);
  ASSERT_EQ(order.size(), 5u);
  EXPECT_EQ(order[0].value, 0.9);
  EXPECT_EQ(order[1].hypothesis, 0);
  EXPECT_EQ(order[1].local, 0u);
  EXPECT_EQ(order[2].hypothesis, 0);
  EXPECT_EQ(order[2].local, 1u);
  EXPECT_EQ(order[3].hypothesis, 1);
  EXPECT_EQ(order[4].value, 0.1);
}

TEST(SparseVector, RoundTripAndOps) {
  CVector v = CVector::Zero(5);
  v(1) = Complex(0.0, 2.0);
  v(4) = 1.0;
  const SparseVector s = SparseVector::from_dense(v);
  EXPECT_EQ(s.index.size(), 2u);
  EXPECT_EQ(s.to_dense(5), v);
  CVector w = CVector::Ones(5);
  EXPECT_EQ(s.dot(w), Complex(1.0, -2.0));
  s.axpy(Complex(2.0, 0.0), w);
  EXPECT_EQ(w(1), Complex(1.0, 4.0));
}

TEST(RunGramSchmidt, EliminatesVectorsInsideTheSpan) {
  VectorSource src(2, 3);
  CVector a(2), b(2), c(2);
  a << 1.0, 0.0;
  b << 0.0, 1.0;
  c << std::sqrt(0.5), std::sqrt(0.5);
  src.add(0.9, 0, a);
  src.add(0.8, 1, b);
  src.add(0.7, 2, c);  // inside span(a, b) and never selected
  const GsRun run = run_gram_schmidt(src);
  ASSERT_EQ(run.selected.size(), 2u);
  EXPECT_EQ(run.labels, (std::vector<int>{0, 1}));
  EXPECT_NEAR(run.lambda_min_gram, 1.0, 1e-15);
}

TEST(RunGramSchmidt, RandomBasisIsOrthonormalAndMonotone) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<DensityMatrix> states;
    for (int i = 0; i < 3; ++i) states.push_back(random_state(rng, 4, 1 + (trial + i) % 4));
    const ProductEigenSource src(states, 1, kBig);
    const GsRun run = run_gram_schmidt(src);
    CMatrix b(4, static_cast<Eigen::Index>(run.basis.size()));
    for (std::size_t s = 0; s < run.basis.size(); ++s) b.col(static_cast<Eigen::Index>(s)) = run.basis[s].to_dense(4);
    EXPECT_LE(max_abs_entry(b.adjoint() * b - CMatrix::Identity(b.cols(), b.cols())), 1e-9);
    for (std::size_t s = 1; s < run.selected.size(); ++s) {
      EXPECT_GE(run.selected[s - 1].value, run.selected[s].value);
    }
    EXPECT_GT(run.lambda_min_gram, 0.0);
    EXPECT_NEAR(run.lambda_min_gram, oracle::lambda_min(run_gram_matrix(run, src)), 1e-10);
  }
}

TEST(BlockGram, SplitsOnExactZeros) {
  // Two orthogonal blocks: {e0, (e0+e1)/sqrt2} and {e2}.
  std::vector<CVector> v(3, CVector::Zero(3));
  v[0](0) = 1.0;
  v[1](0) = v[1](1) = std::sqrt(0.5);
  v[2](2) = 1.0;
  const double lam = block_gram_min_eigenvalue(3, [&](std::size_t a, std::size_t b) { return v[a].dot(v[b]); });
  EXPECT_NEAR(lam, 1.0 - std::sqrt(0.5), 1e-12);
}

TEST(RunErrors, MatchesExplicitDetector) {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<DensityMatrix> states;
    for (int i = 0; i < 3; ++i) states.push_back(random_state(rng, 3, 1 + (trial + i) % 3));
    const ProductEigenSource src(states, 1, kBig);
    const GsRun run = run_gram_schmidt(src);
    const std::vector<double> err = run_errors(run, src);
    const ErrorReport rep = evaluate_errors(states, gs_detector(states).detector);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(err[i], rep.per_hypothesis[i], 1e-10);
  }
}
