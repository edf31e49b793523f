// SPDX-License-Identifier: Apache-2.0
#include "qmht/tensor_lab.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qmht/product_source.hpp"

namespace qmht {

namespace {

constexpr double kLiTol = 1e-9;

std::optional<CommonBasis> try_common_basis(std::span<const DensityMatrix> base) {
  try {
    return simultaneous_diagonalize(base);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidArgument) return std::nullopt;
    throw;
  }
}

// r x d^n product distributions in Kronecker order.
RMatrix product_probabilities(const RMatrix& base, int n, std::size_t dense_limit) {
  const Eigen::Index d = base.cols();
  const auto dim = static_cast<Eigen::Index>(checked_power_dim(d, n, dense_limit));
  RMatrix out(base.rows(), dim);
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  for (Eigen::Index x = 0; x < dim; ++x) {
    for (Eigen::Index i = 0; i < base.rows(); ++i) {
      const RVector row = base.row(i).transpose();
      out(i, x) = product_value(row, idx);
    }
    for (int m = n - 1; m >= 0; --m) {
      if (++idx[static_cast<std::size_t>(m)] < d) break;
      idx[static_cast<std::size_t>(m)] = 0;
    }
  }
  return out;
}

void finish_row(ExperimentRow& row, std::vector<double> per_hypothesis) {
  double total = 0.0;
  for (double e : per_hypothesis) total += e;
  row.per_hypothesis = std::move(per_hypothesis);
  row.err = total / static_cast<double>(row.per_hypothesis.size());
  row.exponent = row.err > 0.0 ? -std::log(row.err) / row.n : kInfinity;
}

ExperimentRow gs_row(std::span<const DensityMatrix> base, int n, const MultipleChernoffResult& qcb,
                     std::size_t limit) {
  const ProductEigenSource source(base, n, limit);
  const GsRun run = run_gram_schmidt(source);
  ExperimentRow row;
  row.n = n;
  row.kind = DetectorFamily::kGs;
  finish_row(row, run_errors(run, source));
  if (!(run.lambda_min_gram > 0.0)) {
    fail(ErrorCode::kNumerical, "lambda_min of the Gram matrix is not positive");
  }
  row.lambda_min_gram = run.lambda_min_gram;
  row.lemma3_bound = overlap_sum_power(qcb, n) /
                     (static_cast<double>(base.size()) * run.lambda_min_gram);
  row.stopping_index = static_cast<int>(run.stopping_index());
  return row;
}

ExperimentRow epsilon_row(std::span<const DensityMatrix> base, int n,
                          const MultipleChernoffResult& qcb, const ExperimentOptions& options) {
  const double k = overlap_sum_power(qcb, n);
  const double eps = options.epsilon_override ? *options.epsilon_override
                                              : epsilon_from_overlap_sum(k);
  check_epsilon(eps);
  const ProductEigenSource plain(base, n, options.dense_limit);
  const ProductEigenSource perturbed =
      plain.with_embedding(ProductEigenSource::Embedding::kPerturbed, eps);
  const GsRun run = run_gram_schmidt(perturbed);
  ExperimentRow row;
  row.n = n;
  row.kind = DetectorFamily::kEpsilon;
  finish_row(row, run_errors(run, plain.with_embedding(ProductEigenSource::Embedding::kUnperturbed, 0.0)));
  row.lambda_min_gram = run.lambda_min_gram;
  row.epsilon = eps;
  row.lemma6_bound = lemma6_bound(static_cast<int>(base.size()), eps, k);
  row.stopping_index = static_cast<int>(run.stopping_index());
  return row;
}

std::vector<double> helstrom_classical(const RMatrix& prob) {
  double scale = 0.0;
  for (Eigen::Index x = 0; x < prob.cols(); ++x) {
    scale = std::max(scale, std::abs(prob(1, x) - prob(0, x)));
  }
  double err0 = 0.0, err1 = 0.0;
  for (Eigen::Index x = 0; x < prob.cols(); ++x) {
    if (prob(1, x) - prob(0, x) > kZeroEigenvalueRel * scale) {
      err0 += prob(0, x);
    } else {
      err1 += prob(1, x);
    }
  }
  return {err0, err1};
}

// Helstrom test restricted to the span of the nonzero eigenvectors, which
// contains the support of rho_2^{(x)n} - rho_1^{(x)n}.
std::vector<double> helstrom_compressed(std::span<const DensityMatrix> base, int n,
                                        std::size_t limit) {
  const ProductEigenSource source(base, n, limit);
  const GsRun span = run_gram_schmidt(source);
  const auto m = static_cast<Eigen::Index>(span.basis.size());
  CMatrix b(source.dimension(), m);
  for (Eigen::Index k = 0; k < m; ++k) b.col(k) = span.basis[static_cast<std::size_t>(k)].to_dense(source.dimension());

  std::vector<CMatrix> coeff(2);
  std::vector<RVector> values(2);
  CVector v;
  for (int i = 0; i < 2; ++i) {
    const auto& pairs = source.eigenpairs(i);
    coeff[static_cast<std::size_t>(i)].resize(static_cast<Eigen::Index>(pairs.size()), m);
    values[static_cast<std::size_t>(i)].resize(static_cast<Eigen::Index>(pairs.size()));
    for (std::size_t j = 0; j < pairs.size(); ++j) {
      source.materialize({pairs[j].value, i, j}, v);
      coeff[static_cast<std::size_t>(i)].row(static_cast<Eigen::Index>(j)) = v.adjoint() * b;
      values[static_cast<std::size_t>(i)](static_cast<Eigen::Index>(j)) = pairs[j].value;
    }
  }
  auto compressed = [&](int i) -> CMatrix {
    const CMatrix& c = coeff[static_cast<std::size_t>(i)];
    return c.adjoint() * values[static_cast<std::size_t>(i)].cast<Complex>().asDiagonal() * c;
  };
  const SpectralDecomposition s =
      spectral_decompose(HermitianMatrix(CMatrix(compressed(1) - compressed(0))));
  const double scale = m ? s.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  std::vector<Eigen::Index> positive;
  for (Eigen::Index k = 0; k < m; ++k) {
    if (s.eigenvalues(k) > kZeroEigenvalueRel * scale) positive.push_back(k);
  }
  double succ[2] = {0.0, 0.0};  // tr[rho_i P]
  for (int i = 0; i < 2; ++i) {
    const CMatrix& c = coeff[static_cast<std::size_t>(i)];
    for (Eigen::Index k : positive) {
      const CVector a = c * s.eigenvectors.col(k);
      for (Eigen::Index j = 0; j < a.size(); ++j) {
        succ[i] += values[static_cast<std::size_t>(i)](j) * std::norm(a(j));
      }
    }
  }
  return {std::clamp(succ[0], 0.0, 1.0), std::clamp(1.0 - succ[1], 0.0, 1.0)};
}

ExperimentRow helstrom_row(std::span<const DensityMatrix> base, int n,
                           const std::optional<CommonBasis>& common, std::size_t limit) {
  if (base.size() != 2) fail(ErrorCode::kInvalidArgument, "helstrom requires exactly two states");
  ExperimentRow row;
  row.n = n;
  row.kind = DetectorFamily::kHelstrom;
  finish_row(row, common ? helstrom_classical(product_probabilities(common->probabilities, n, limit))
                         : helstrom_compressed(base, n, limit));
  return row;
}

ExperimentRow classical_row(int n, int r, const std::optional<CommonBasis>& common,
                            std::size_t limit) {
  if (!common) fail(ErrorCode::kInvalidArgument, "classical-ml requires commuting states");
  const RMatrix prob = product_probabilities(common->probabilities, n, limit);
  const std::vector<int> label = classical_ml(prob);
  std::vector<double> err(static_cast<std::size_t>(r), 1.0);
  for (Eigen::Index x = 0; x < prob.cols(); ++x) {
    const int i = label[static_cast<std::size_t>(x)];
    err[static_cast<std::size_t>(i)] -= prob(i, x);
  }
  for (double& e : err) e = std::max(e, 0.0);
  ExperimentRow row;
  row.n = n;
  row.kind = DetectorFamily::kClassicalMl;
  finish_row(row, std::move(err));
  return row;
}

}  // namespace

std::string_view to_string(DetectorFamily kind) {
  switch (kind) {
    case DetectorFamily::kGs: return "gs";
    case DetectorFamily::kEpsilon: return "epsilon";
    case DetectorFamily::kHelstrom: return "helstrom";
    case DetectorFamily::kClassicalMl: return "classical-ml";
  }
  return "?";
}

DetectorFamily family_from_string(std::string_view name) {
  for (DetectorFamily k : {DetectorFamily::kGs, DetectorFamily::kEpsilon, DetectorFamily::kHelstrom,
                           DetectorFamily::kClassicalMl}) {
    if (to_string(k) == name) return k;
  }
  fail(ErrorCode::kParse, "unknown detector '" + std::string(name) + "'");
}

const ExperimentRow* ExperimentReport::find(int n, DetectorFamily kind) const {
  for (const ExperimentRow& row : rows) {
    if (row.n == n && row.kind == kind) return &row;
  }
  return nullptr;
}

std::optional<double> slope_exponent(std::span<const ExperimentRow> rows, DetectorFamily kind) {
  int lo = 0, hi = 0;
  bool any = false;
  for (const ExperimentRow& row : rows) {
    if (row.kind != kind) continue;
    lo = any ? std::min(lo, row.n) : row.n;
    hi = any ? std::max(hi, row.n) : row.n;
    any = true;
  }
  if (!any) return std::nullopt;
  const double mid = 0.5 * (lo + hi);
  std::vector<double> xs, ys;
  for (const ExperimentRow& row : rows) {
    if (row.kind != kind || row.n < mid || !(row.err > 0.0)) continue;
    xs.push_back(row.n);
    ys.push_back(-std::log(row.err));
  }
  if (xs.size() < 2) return std::nullopt;
  const auto count = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k] / count;
    my += ys[k] / count;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  return sxy / sxx;
}

double overlap_sum_power(const MultipleChernoffResult& qcb, int n) {
  double k = 0.0;
  for (const auto& [pair, res] : qcb.pairwise) k += 2.0 * std::pow(res.q_star, n);
  return k;
}

double epsilon_from_overlap_sum(double overlap_sum) {
  return std::min(std::cbrt(overlap_sum), kEpsilonMax - 1e-6);
}

double epsilon_schedule(std::span<const DensityMatrix> states, int n) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "n must be at least 1");
  return epsilon_from_overlap_sum(overlap_sum_power(multiple_qcb(states), n));
}

ExperimentReport run_power_experiment(std::span<const DensityMatrix> base, int n_min, int n_max,
                                      std::span<const DetectorFamily> kinds,
                                      const ExperimentOptions& options) {
  if (n_min < 1 || n_max < n_min) fail(ErrorCode::kInvalidArgument, "invalid n range");
  if (base.empty()) fail(ErrorCode::kInvalidArgument, "empty hypothesis set");
  checked_power_dim(base.front().dim(), n_max, options.dense_limit);

  ExperimentReport report;
  report.qcb = multiple_qcb(base);
  const bool wants_common = std::any_of(kinds.begin(), kinds.end(), [](DetectorFamily k) {
    return k == DetectorFamily::kHelstrom || k == DetectorFamily::kClassicalMl;
  });
  const std::optional<CommonBasis> common = wants_common ? try_common_basis(base) : std::nullopt;

  for (int n = n_min; n <= n_max; ++n) {
    for (DetectorFamily kind : kinds) {
      switch (kind) {
        case DetectorFamily::kGs:
          report.rows.push_back(gs_row(base, n, report.qcb, options.dense_limit));
          break;
        case DetectorFamily::kEpsilon:
          report.rows.push_back(epsilon_row(base, n, report.qcb, options));
          break;
        case DetectorFamily::kHelstrom:
          report.rows.push_back(helstrom_row(base, n, common, options.dense_limit));
          break;
        case DetectorFamily::kClassicalMl:
          report.rows.push_back(
              classical_row(n, static_cast<int>(base.size()), common, options.dense_limit));
          break;
      }
    }
  }
  for (DetectorFamily kind : kinds) {
    report.slopes.push_back({kind, slope_exponent(report.rows, kind)});
  }
  return report;
}

std::vector<LiPair> pairwise_li_check(std::span<const DensityMatrix> states) {
  std::vector<HermitianMatrix> proj;
  for (const DensityMatrix& rho : states) proj.push_back(support_projector(rho));
  std::vector<LiPair> out;
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      if (states[i].dim() != states[j].dim()) {
        fail(ErrorCode::kDimensionMismatch, "states differ in dimension");
      }
      const CMatrix& pi = proj[i].matrix();
      const double lmax = max_eigenvalue(pi * proj[j].matrix() * pi);
      out.push_back({static_cast<int>(i), static_cast<int>(j), lmax, lmax < 1.0 - kLiTol});
    }
  }
  return out;
}

std::vector<std::pair<int, double>> gram_convergence_check(std::span<const DensityMatrix> base,
                                                           int n_min, int n_max,
                                                           std::size_t dense_limit) {
  if (n_min < 1 || n_max < n_min) fail(ErrorCode::kInvalidArgument, "invalid n range");
  for (const LiPair& p : pairwise_li_check(base)) {
    if (!p.holds) {
      std::ostringstream os;
      os << "supports of states " << p.i + 1 << " and " << p.j + 1
         << " intersect (lambda_max = " << p.lambda_max << ")";
      fail(ErrorCode::kInvalidArgument, os.str());
    }
  }
  std::vector<std::pair<int, double>> out;
  for (int n = n_min; n <= n_max; ++n) {
    const ProductEigenSource source(base, n, dense_limit);
    const std::vector<GsCandidate> cands = source.candidates();
    out.emplace_back(n, block_gram_min_eigenvalue(cands.size(), [&](std::size_t a, std::size_t b) {
                       return source.overlap(cands[a], cands[b]);
                     }));
  }
  return out;
}

}  // namespace qmht
