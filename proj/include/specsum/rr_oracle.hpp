#pragma once

// Independent numerical oracle: Rayleigh-Ritz diagonalization in the
// unperturbed basis, tail completion of spectral sums (WKB for the linear
// potential, exact box levels, or the delta-impurity asymptotics), and
// least-squares fits of the coupling dependence.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <utility>
#include <vector>

#include "specsum/core.hpp"
#include "specsum/impurity1d.hpp"
#include "specsum/perturbative.hpp"

namespace specsum {

struct RRConfig {
  int basis_size = 2000;
  int kept_levels = 0;  // 0: trust the lowest basis_size/4 levels
  int resolved_kept() const { return kept_levels > 0 ? kept_levels : basis_size / 4; }
};

// Diagonalizes H_mn = eps_n delta_mn + lambda <m|V|n> on the truncated basis
// and returns the lowest kept_levels eigenvalues in increasing order.
template <class V>
std::vector<double> assemble_and_solve(const UnperturbedBasis& basis, V&& element, RRConfig cfg,
                                       double lambda = 1.0) {
  const int n = cfg.basis_size;
  if (n < 1 || cfg.resolved_kept() > n) throw std::invalid_argument("assemble_and_solve: bad RRConfig");
  Eigen::MatrixXd h(n, n);
  const int first = basis.first_index();
  for (int i = 0; i < n; ++i) {
    for (int k = i; k < n; ++k) {
      const double v = lambda * element(first + i, first + k);
      h(i, k) = v;
      h(k, i) = v;
    }
    h(i, i) += basis.eigenvalue(first + i);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw convergence_error("assemble_and_solve: eigensolver failed on a " + std::to_string(n) +
                            "x" + std::to_string(n) + " matrix");
  const auto& ev = solver.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + cfg.resolved_kept());
}

inline std::vector<double> assemble_and_solve(const UnperturbedBasis& basis,
                                              const PerturbationSpec& pert, RRConfig cfg) {
  return assemble_and_solve(
      basis, [&](int m, int k) { return matrix_element(basis, pert, m, k); }, cfg, pert.lambda);
}

// Four-term WKB eigenvalue approximation for the linear potential in a box.
inline double wkb_tail_linear(int n, double rho) {
  if (n < 1) throw std::invalid_argument("wkb_tail_linear: n >= 1");
  const double k = (2.0 * n + 1.0) * pi;
  const double r2 = rho * rho;
  return pi * pi * (2.0 * n + 1.0) * (2.0 * n + 1.0) / 8.0 + r2 / (6.0 * k * k) +
         2.0 * r2 * r2 / (9.0 * std::pow(k, 6)) + 8.0 * r2 * r2 * r2 / (9.0 * std::pow(k, 10));
}

// Model for the spectrum beyond the trusted numerical levels.
struct TailModel {
  enum class Kind { WkbLinear, BoxLevels, DeltaAsymptotic };
  Kind kind = Kind::BoxLevels;
  double rho = 0.0;
  double abar = 0.0;
  int cj_order = 3;

  static TailModel wkb_linear(double rho) { return {Kind::WkbLinear, rho, 0.0, 0}; }
  static TailModel box_levels() { return {Kind::BoxLevels, 0.0, 0.0, 0}; }
  static TailModel delta_asymptotic(double rho, double abar, int cj_order = 3) {
    return {Kind::DeltaAsymptotic, rho, abar, cj_order};
  }
};

// Z(s) = head over numerical eigenvalues + tail from the model. The bound
// aggregates the summation remainder and, for the WKB model, the systematic
// gap between the model's leading term and the true box levels.
inline ValueWithBound numeric_sum_rule(const RationalOrder& order,
                                       const std::vector<double>& eigenvalues,
                                       const TailModel& tail, const RRConfig& cfg) {
  const double s = order.value();
  const long N = std::min<long>(eigenvalues.size(), cfg.resolved_kept());
  if (N < 1) throw std::invalid_argument("numeric_sum_rule: no eigenvalues");
  num::KahanSum<long double> acc;
  for (long i = 0; i < N; ++i) {
    const double e = eigenvalues[i];
    if (e <= 0.0 && !order.is_integer())
      throw domain_error("numeric_sum_rule: negative eigenvalue with non-integer order");
    acc.add(order.is_integer() && e < 0.0
                ? 1.0L / powl(static_cast<long double>(e), order.numerator())
                : powl(static_cast<long double>(e), -static_cast<long double>(s)));
  }
  double bound = 0.0;
  switch (tail.kind) {
    case TailModel::Kind::BoxLevels: {
      const double scale = std::pow(2.0 / (pi * pi), s);
      const ValueWithBound t = num::power_tail(2.0 * s, N + 1);
      acc.add(scale * t.value);
      bound = scale * t.bound;
      break;
    }
    case TailModel::Kind::WkbLinear: {
      // leading (8/pi^2)^s (2n+1)^{-2s} plus directly summed rho corrections
      const double scale = std::pow(8.0 / (pi * pi), s);
      const ValueWithBound lead = num::odd_power_tail(2.0 * s, N + 1);
      acc.add(scale * lead.value);
      num::KahanSum<long double> corr;
      for (long n = N + 1; n <= N + 40000; ++n) {
        const double base = pi * pi * (2.0 * n + 1.0) * (2.0 * n + 1.0) / 8.0;
        const double term = std::pow(wkb_tail_linear(static_cast<int>(n), tail.rho), -s) -
                            std::pow(base, -s);
        corr.add(term);
        if (std::abs(term) < 1e-22 && n > N + 64) break;
      }
      acc.add(corr.value());
      // systematic model gap: WKB leading term vs the true box levels
      const double box_scale = std::pow(2.0 / (pi * pi), s);
      const double gap =
          std::abs(box_scale * num::power_tail(2.0 * s, N + 1).value - scale * lead.value);
      bound = scale * lead.bound + gap;
      break;
    }
    case TailModel::Kind::DeltaAsymptotic: {
      SpectrumApproximation spec;
      spec.tail_start = static_cast<int>(N);
      spec.asymptotic_order = tail.cj_order;
      spec.roots = {1.0};  // unused by the tail below
      const double scale = std::pow(2.0 / (pi * pi), s);
      const ValueWithBound t = num::power_tail(2.0 * s, N + 1);
      num::KahanSum<long double> corr;
      for (long n = N + 1; n <= N + 400000; ++n) {
        double e = 0.5 * double(n) * n * pi * pi;
        double rp = tail.rho;
        for (int j = 1; j <= tail.cj_order; ++j) {
          e += asymptotic_cj(j, static_cast<int>(n), tail.abar) * rp;
          rp *= tail.rho;
        }
        const double term = std::pow(e, -s) - std::pow(0.5 * double(n) * n * pi * pi, -s);
        corr.add(term);
        if (std::abs(term) < 1e-22 && n > N + 64) break;
      }
      acc.add(scale * t.value + corr.value());
      bound = scale * t.bound;
      break;
    }
  }
  return {static_cast<double>(acc.value()), bound};
}

struct FitResult {
  std::vector<double> coefficients;    // of t^k, t = rho (or rho^2 if even_only)
  std::vector<double> standard_errors;
  bool even_only = false;
};

// Least-squares polynomial fit of sum-rule samples against the coupling.
inline FitResult fit_coupling_dependence(const std::vector<std::pair<double, double>>& samples,
                                         bool even_only, int degree) {
  const int npts = static_cast<int>(samples.size());
  const int ncols = degree + 1;
  if (npts < ncols) throw domain_error("fit_coupling_dependence: need at least degree+1 samples");
  Eigen::MatrixXd x(npts, ncols);
  Eigen::VectorXd y(npts);
  for (int i = 0; i < npts; ++i) {
    const double t = even_only ? samples[i].first * samples[i].first : samples[i].first;
    double p = 1.0;
    for (int k = 0; k < ncols; ++k) {
      x(i, k) = p;
      p *= t;
    }
    y(i) = samples[i].second;
  }
  // scale columns for conditioning
  Eigen::VectorXd scale(ncols);
  for (int k = 0; k < ncols; ++k) {
    scale(k) = x.col(k).cwiseAbs().maxCoeff();
    if (scale(k) == 0.0) scale(k) = 1.0;
    x.col(k) /= scale(k);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < ncols)
    throw domain_error("fit_coupling_dependence: rank-deficient design matrix");
  const Eigen::VectorXd beta = qr.solve(y);
  const double rss = (x * beta - y).squaredNorm();
  const double sigma2 = (npts > ncols) ? rss / (npts - ncols) : 0.0;
  const Eigen::MatrixXd cov = sigma2 * (x.transpose() * x).inverse();

  FitResult out;
  out.even_only = even_only;
  out.coefficients.resize(ncols);
  out.standard_errors.resize(ncols);
  for (int k = 0; k < ncols; ++k) {
    out.coefficients[k] = beta(k) / scale(k);
    out.standard_errors[k] = std::sqrt(std::max(cov(k, k), 0.0)) / scale(k);
  }
  return out;
}

}  // namespace specsum
