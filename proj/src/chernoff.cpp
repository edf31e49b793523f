// SPDX-License-Identifier: Apache-2.0
#include "qmht/chernoff.hpp"

#include <algorithm>
#include <sstream>

namespace qmht {

namespace {

constexpr int kGridPoints = 64;
constexpr double kGoldenTol = 1e-8;

double xi_from_q(double q) {
  if (q <= 0.0) return kInfinity;
  return std::max(0.0, -std::log(q));
}

}  // namespace

OverlapCurve::OverlapCurve(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    fail(ErrorCode::kDimensionMismatch, "overlap curve: states differ in dimension");
  }
  const SpectralDecomposition& a = rho.spectrum();
  const SpectralDecomposition& b = sigma.spectrum();
  std::vector<Eigen::Index> ja, kb;
  for (Eigen::Index j = 0; j < a.dim(); ++j) {
    if (a.eigenvalues(j) > 0.0) {
      ja.push_back(j);
      lambda_.push_back(a.eigenvalues(j));
    }
  }
  for (Eigen::Index k = 0; k < b.dim(); ++k) {
    if (b.eigenvalues(k) > 0.0) {
      kb.push_back(k);
      mu_.push_back(b.eigenvalues(k));
    }
  }
  weight_.resize(static_cast<Eigen::Index>(ja.size()), static_cast<Eigen::Index>(kb.size()));
  for (std::size_t j = 0; j < ja.size(); ++j) {
    for (std::size_t k = 0; k < kb.size(); ++k) {
      weight_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
          std::norm(a.eigenvectors.col(ja[j]).dot(b.eigenvectors.col(kb[k])));
    }
  }
}

double OverlapCurve::operator()(double s) const {
  double q = 0.0;
  for (std::size_t j = 0; j < lambda_.size(); ++j) {
    const double lj = std::pow(lambda_[j], 1.0 - s);
    for (std::size_t k = 0; k < mu_.size(); ++k) {
      const double w = weight_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
      if (w != 0.0) q += lj * std::pow(mu_[k], s) * w;
    }
  }
  return q;
}

double q_overlap(const DensityMatrix& rho, const DensityMatrix& sigma, double s) {
  if (!(s >= 0.0 && s <= 1.0)) fail(ErrorCode::kInvalidArgument, "s must lie in [0, 1]");
  return OverlapCurve(rho, sigma)(s);
}

GoldenResult golden_section_minimize(const std::function<double(double)>& f, double lo,
                                     double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? GoldenResult{c, fc} : GoldenResult{d, fd};
}

ChernoffResult binary_qcb(const DensityMatrix& rho, const DensityMatrix& sigma) {
  const OverlapCurve curve(rho, sigma);

  std::vector<double> grid(kGridPoints);
  int best = 0;
  double lo_val = kInfinity, hi_val = -kInfinity;
  for (int k = 0; k < kGridPoints; ++k) {
    grid[static_cast<std::size_t>(k)] = curve(static_cast<double>(k) / (kGridPoints - 1));
    const double v = grid[static_cast<std::size_t>(k)];
    if (v < grid[static_cast<std::size_t>(best)]) best = k;
    lo_val = std::min(lo_val, v);
    hi_val = std::max(hi_val, v);
  }

  ChernoffResult out;
  if (hi_val - lo_val <= 1e-12 * std::max(1.0, hi_val)) {
    // Flat curve (pure states, identical or orthogonal supports).
    out.s_star = 0.5;
    out.q_star = std::max(0.0, curve(0.5));
    out.xi = xi_from_q(out.q_star);
    return out;
  }

  const double step = 1.0 / (kGridPoints - 1);
  const double lo = std::max(0.0, (best - 1) * step);
  const double hi = std::min(1.0, (best + 1) * step);
  const GoldenResult g = golden_section_minimize([&](double s) { return curve(s); }, lo, hi,
                                                 kGoldenTol);
  if (g.fx < grid[static_cast<std::size_t>(best)]) {
    out.s_star = g.x;
    out.q_star = g.fx;
  } else {
    out.s_star = best * step;
    out.q_star = grid[static_cast<std::size_t>(best)];
  }
  out.q_star = std::max(0.0, out.q_star);
  out.xi = xi_from_q(out.q_star);
  return out;
}

MultipleChernoffResult multiple_qcb(std::span<const DensityMatrix> states) {
  if (states.size() < 2) {
    fail(ErrorCode::kInvalidArgument, "multiple Chernoff bound needs at least two states");
  }
  const int r = static_cast<int>(states.size());
  for (int i = 0; i < r; ++i) {
    for (int j = i + 1; j < r; ++j) {
      if (states[static_cast<std::size_t>(i)].dim() != states[static_cast<std::size_t>(j)].dim()) {
        fail(ErrorCode::kDimensionMismatch, "states differ in dimension");
      }
      if (max_abs_entry(states[static_cast<std::size_t>(i)].matrix() -
                        states[static_cast<std::size_t>(j)].matrix()) <= 1e-10) {
        std::ostringstream os;
        os << "states " << i + 1 << " and " << j + 1 << " are duplicates";
        fail(ErrorCode::kInvalidArgument, os.str());
      }
    }
  }

  MultipleChernoffResult out;
  bool first = true;
  for (int i = 0; i < r; ++i) {
    for (int j = i + 1; j < r; ++j) {
      const ChernoffResult c = binary_qcb(states[static_cast<std::size_t>(i)],
                                          states[static_cast<std::size_t>(j)]);
      out.pairwise.emplace(std::make_pair(i, j), c);
      // Near-equal values count as ties so the earlier pair is kept.
      if (first || c.xi < out.xi - 1e-12 * std::max(1.0, std::abs(c.xi))) {
        out.xi = c.xi;
        out.argmin_pair = {i, j};
        first = false;
      }
    }
  }
  return out;
}

}  // namespace qmht
