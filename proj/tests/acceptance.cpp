// SPDX-License-Identifier: Apache-2.0
// Acceptance checks. One PASS/FAIL line per criterion; nonzero exit if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "qmht/chernoff.hpp"
#include "qmht/detectors.hpp"
#include "qmht/tensor_lab.hpp"

using namespace qmht;
using namespace testing_util;

namespace {

const double kLog2 = std::log(2.0);

struct Outcome {
  bool pass = true;
  int findings = 0;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (++findings <= 3) detail << (findings > 1 ? "; " : "") << what;
  }
  std::string summary() const {
    std::string s = detail.str();
    if (findings > 3) s += "; (" + std::to_string(findings - 3) + " more)";
    return s;
  }
};

int failures = 0;

void criterion(int id, const char* name, double time_limit_s, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_limit_s > 0.0 && secs >= time_limit_s) {
    std::ostringstream s;
    s << "runtime " << secs << " s >= " << time_limit_s << " s";
    out.require(false, s.str());
  }
  if (!out.pass) ++failures;
  std::printf("%s criterion %d (%s) [%.2f s]%s%s\n", out.pass ? "PASS" : "FAIL", id, name, secs,
              out.pass ? "" : ": ", out.pass ? "" : out.summary().c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::vector<DensityMatrix> commuting_pair() { return {diag({0.5, 0.5}), diag({1.0, 0.0})}; }
std::vector<DensityMatrix> zero_plus() { return {ket0(), plus()}; }
std::vector<DensityMatrix> zero_plus_one() { return {ket0(), plus(), ket1()}; }

std::vector<oracle::Mat> to_oracle(const std::vector<DensityMatrix>& s) {
  std::vector<oracle::Mat> out;
  for (const DensityMatrix& rho : s) out.push_back(rho.matrix());
  return out;
}

// State proportional to a random full-rank operator on the column span of q.
DensityMatrix state_on_subspace(std::mt19937_64& rng, const oracle::Mat& q) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  oracle::Mat m = oracle::Mat::Zero(q.rows(), q.rows());
  for (Eigen::Index c = 0; c < q.cols(); ++c) m += u(rng) * q.col(c) * q.col(c).adjoint();
  return DensityMatrix::from_matrix(m / m.trace().real());
}

void ceiling_check(Outcome& out, const char* label, const std::vector<DensityMatrix>& s, int n_max,
                   const std::vector<DetectorFamily>& kinds) {
  const ExperimentReport rep = run_power_experiment(s, 1, n_max, kinds);
  for (const ExperimentRow& row : rep.rows) {
    if (!(row.exponent <= rep.qcb.xi + 0.02)) {
      std::ostringstream m;
      m << label << " " << to_string(row.kind) << " n=" << row.n << " exponent " << row.exponent << " > xi + 0.02 = "
        << rep.qcb.xi + 0.02;
      out.require(false, m.str());
    }
  }
}

}  // namespace

int main() {
  criterion(1, "commuting attainability", 5.0, [](Outcome& out) {
    const ExperimentReport rep = run_power_experiment(commuting_pair(), 1, 12, std::vector<DetectorFamily>{DetectorFamily::kGs});
    for (const ExperimentRow& row : rep.rows) {
      const double expected = kLog2 - kLog2 / row.n;
      if (std::abs(row.exponent - expected) > 1e-6) {
        out.require(false, fmt("n=%g exponent %.12g, expected %.12g", row.n, row.exponent, expected));
      }
    }
  });

  criterion(2, "pure-state attainability", 30.0, [](Outcome& out) {
    const auto s = zero_plus();
    const ExperimentReport rep = run_power_experiment(s, 1, 12, std::vector<DetectorFamily>{DetectorFamily::kGs});
    for (std::size_t k = 1; k < rep.rows.size(); ++k) {
      if (!(rep.rows[k].exponent > rep.rows[k - 1].exponent)) {
        out.require(false, fmt("exponent not increasing at n=%g: %.12g -> %.12g", rep.rows[k].n,
                               rep.rows[k - 1].exponent, rep.rows[k].exponent));
      }
    }
    const double e12 = rep.find(12, DetectorFamily::kGs)->exponent;
    out.require(e12 >= 0.80 * kLog2, fmt("exponent_12 %.12g < 0.8 log 2", e12));
    for (const ExperimentRow& row : rep.rows) {
      if (!(row.err <= *row.lemma3_bound)) out.require(false, fmt("error exceeds lemma3_bound at n=%g", row.n));
    }
  });

  criterion(3, "exponent ceiling", 0.0, [](Outcome& out) {
    ceiling_check(out, "commuting", commuting_pair(), 12,
                  {DetectorFamily::kGs, DetectorFamily::kEpsilon, DetectorFamily::kHelstrom,
                   DetectorFamily::kClassicalMl});
    ceiling_check(out, "{0,+}", zero_plus(), 12,
                  {DetectorFamily::kGs, DetectorFamily::kEpsilon, DetectorFamily::kHelstrom});
    ceiling_check(out, "{0,+,1}", zero_plus_one(), 10, {DetectorFamily::kGs, DetectorFamily::kEpsilon});
  });

  criterion(4, "single-copy error bound", 60.0, [](Outcome& out) {
    std::mt19937_64 rng(20240501);
    std::uniform_int_distribution<int> dd(2, 6), rr(2, 4);
    int violations = 0;
    for (int trial = 0; trial < 500; ++trial) {
      const int d = dd(rng), r = rr(rng);
      std::uniform_int_distribution<int> rank(1, d);
      std::vector<DensityMatrix> s;
      for (int i = 0; i < r; ++i) s.push_back(random_state(rng, d, rank(rng)));
      const GsDetector g = gs_detector(s);
      const double err = evaluate_errors(s, g.detector).averaged;
      if (!(err <= lemma3_bound(s, g.diagnostics))) ++violations;
    }
    out.require(violations == 0, fmt("%g violations", violations));
  });

  criterion(5, "Gram convergence", 0.0, [](Outcome& out) {
    const auto seq = gram_convergence_check(zero_plus(), 1, 10);
    double prev = -1.0;
    for (const auto& [n, lam] : seq) {
      const double expected = 1.0 - std::pow(2.0, -0.5 * n);
      if (std::abs(lam - expected) > 1e-8) out.require(false, fmt("n=%g lambda_min %.12g, expected %.12g", n, lam, expected));
      if (!(lam > prev)) out.require(false, fmt("not monotone at n=%g", n));
      prev = lam;
    }
  });

  criterion(6, "subspace intersection test", 0.0, [](Outcome& out) {
    std::mt19937_64 rng(6006);
    std::uniform_int_distribution<int> kk(1, 5);
    int violations = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const bool intersecting = trial % 2 == 0;
      int k1 = kk(rng), k2 = kk(rng);
      oracle::Mat a, b;
      if (intersecting) {
        const oracle::Vec shared = oracle::random_unit(rng, 6);
        a = oracle::random_subspace(rng, 6, k1, {shared});
        b = oracle::random_subspace(rng, 6, k2, {shared});
      } else {
        while (k1 + k2 > 6) k2 = kk(rng);
        a = oracle::random_subspace(rng, 6, k1);
        b = oracle::random_subspace(rng, 6, k2);
      }
      const std::vector<DensityMatrix> s{state_on_subspace(rng, a), state_on_subspace(rng, b)};
      const double lam = pairwise_li_check(s)[0].lambda_max;
      if (intersecting ? !(lam >= 1.0 - 1e-9) : !(lam < 1.0)) ++violations;
    }
    out.require(violations == 0, fmt("%g violations", violations));
  });

  criterion(7, "embedding machinery", 0.0, [](Outcome& out) {
    std::mt19937_64 rng(707);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const std::vector<DensityMatrix> s{random_state(rng, 3, 2), random_state(rng, 3, 3)};
      for (double eps : {0.2, 0.5}) {
        const EpsilonDetector det = epsilon_detector(s, eps);
        const double factor = (1.0 - eps * eps) * (1.0 - eps * eps);
        for (double t : {0.1, 0.5, 0.9}) {
          const double lhs = q_overlap(det.embedded_states[0], det.embedded_states[1], t);
          const double rhs = factor * q_overlap(s[0], s[1], t);
          worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
        }
        if (!(det.embedded.lambda_min_gram >= eps * eps * (1.0 - 1e-12))) {
          out.require(false, fmt("lambda_min %.12g < eps^2 at eps=%g", det.embedded.lambda_min_gram, eps));
        }
      }
    }
    out.require(worst <= 1e-10, fmt("overlap identity relative error %.3g", worst));
    const ExperimentReport rep = run_power_experiment(zero_plus(), 1, 8, std::vector<DetectorFamily>{DetectorFamily::kEpsilon});
    for (const ExperimentRow& row : rep.rows) {
      const double e = *row.epsilon;
      if (!(*row.lambda_min_gram >= e * e * (1.0 - 1e-12))) out.require(false, fmt("sweep lambda_min < eps^2 at n=%g", row.n));
      if (!(row.err <= *row.lemma6_bound)) out.require(false, fmt("error exceeds lemma6_bound at n=%g", row.n));
    }
  });

  criterion(8, "epsilon detector trend", 0.0, [](Outcome& out) {
    const ExperimentReport rep = run_power_experiment(zero_plus(), 1, 8, std::vector<DetectorFamily>{DetectorFamily::kEpsilon});
    for (const ExperimentRow& row : rep.rows) {
      if (row.n >= 6 && !(row.exponent > rep.qcb.xi / 3.0)) {
        out.require(false, fmt("n=%g exponent %.12g <= xi/3 = %.12g", row.n, row.exponent, rep.qcb.xi / 3.0));
      }
    }
  });

  criterion(9, "binary optimality", 0.0, [](Outcome& out) {
    const auto s = zero_plus();
    const Detector h = holevo_helstrom(s[0], s[1]);
    const double err = evaluate_errors(s, h).averaged;
    const double expected = 0.5 * (1.0 - 1.0 / std::sqrt(2.0));
    out.require(std::abs(err - expected) <= 1e-10, fmt("Err %.15g, expected %.15g", err, expected));
    out.require(verify_bayes_conditions(s, h, 1e-8).passed(), "Bayes conditions fail at 1e-8");
    const ExperimentReport rep = run_power_experiment(s, 1, 12, std::vector<DetectorFamily>{DetectorFamily::kHelstrom});
    const double e12 = rep.find(12, DetectorFamily::kHelstrom)->exponent;
    out.require(e12 >= 0.80 * kLog2, fmt("exponent_12 %.12g < 0.8 log 2", e12));
  });

  criterion(10, "pretty-good measurement lower bound", 0.0, [](Outcome& out) {
    std::mt19937_64 rng(1010);
    const std::vector<double> priors{0.5, 0.5};
    int violations = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const int d = 2 + trial % 4;
      const std::vector<DensityMatrix> s{random_state(rng, d, 1), random_state(rng, d, 1)};
      const double succ_pgm = 1.0 - evaluate_errors(s, pgm(s, priors)).averaged;
      const double succ_h = 1.0 - evaluate_errors(s, holevo_helstrom(s[0], s[1])).averaged;
      if (!(succ_pgm >= succ_h * succ_h - 1e-9)) ++violations;
    }
    out.require(violations == 0, fmt("%g violations", violations));
  });

  criterion(11, "implicit versus explicit evaluation", 0.0, [](Outcome& out) {
    std::mt19937_64 rng(1111);
    std::uniform_int_distribution<int> rr(2, 4), rank(1, 2);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const int r = rr(rng);
      std::vector<DensityMatrix> s;
      for (int i = 0; i < r; ++i) s.push_back(random_state(rng, 2, rank(rng)));
      const ExperimentReport rep = run_power_experiment(s, 1, 4, std::vector<DetectorFamily>{DetectorFamily::kGs});
      for (int n = 1; n <= 4; ++n) {
        const oracle::EagerResult ref = oracle::eager_gram_schmidt(to_oracle(s), n);
        const ExperimentRow* row = rep.find(n, DetectorFamily::kGs);
        for (int i = 0; i < r; ++i) {
          const auto k = static_cast<std::size_t>(i);
          worst = std::max(worst, std::abs(row->per_hypothesis[k] - ref.errors[k]));
        }
        worst = std::max(worst, std::abs(*row->lambda_min_gram - ref.lambda_min_gram));
      }
    }
    out.require(worst <= 1e-9, fmt("max deviation %.3g", worst));
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
