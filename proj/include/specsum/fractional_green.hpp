#pragma once

// Perturbative coefficients of the full Green's function Q_ab on a truncated
// unperturbed basis, and of its fractional-order factor q^{[1/N]}_nm whose
// N-fold matrix product reproduces Q order by order in the coupling.

#include <Eigen/Dense>
#include <cmath>

#include "specsum/core.hpp"

namespace specsum {

// Coefficient matrix Q^(j) (fractional_index == 1) or q^{[1/N](j)} on the
// truncated basis. entry(a, b) uses 1-based slots; slot i is basis state
// first_index + i - 1.
struct GreenCoefficients {
  int order = 0;
  int fractional_index = 1;
  int basis_cutoff = 0;
  Eigen::MatrixXd mat;

  double entry(int a, int b) const {
    if (a < 1 || b < 1 || a > basis_cutoff || b > basis_cutoff)
      throw std::invalid_argument("GreenCoefficients: slot out of range");
    return mat(a - 1, b - 1);
  }
};

namespace detail {

inline Eigen::VectorXd eigenvalue_vector(const UnperturbedBasis& basis, int cutoff) {
  Eigen::VectorXd eps(cutoff);
  const int first = basis.first_index();
  for (int i = 0; i < cutoff; ++i) eps(i) = basis.eigenvalue(first + i);
  return eps;
}

template <class V>
Eigen::MatrixXd potential_matrix(const UnperturbedBasis& basis, V&& v, int cutoff) {
  Eigen::MatrixXd m(cutoff, cutoff);
  const int first = basis.first_index();
  for (int i = 0; i < cutoff; ++i)
    for (int k = i; k < cutoff; ++k) {
      const double val = v(first + i, first + k);
      m(i, k) = val;
      m(k, i) = val;
    }
  return m;
}

}  // namespace detail

// Q^(j) from the recursion Q^(0)_ab = delta_ab/eps_a,
// Q^(j)_ab = -sum_s <a|V|s> Q^(j-1)_sb / eps_a, inner sums truncated at cutoff.
template <class V>
GreenCoefficients q_order_Q(int j, const UnperturbedBasis& basis, V&& v, int cutoff) {
  if (j < 0 || cutoff < 1) throw std::invalid_argument("q_order_Q: need j >= 0, cutoff >= 1");
  const Eigen::VectorXd eps = detail::eigenvalue_vector(basis, cutoff);
  Eigen::MatrixXd q = eps.cwiseInverse().asDiagonal();
  if (j > 0) {
    const Eigen::MatrixXd vm = detail::potential_matrix(basis, v, cutoff);
    const Eigen::MatrixXd step = -(eps.cwiseInverse().asDiagonal() * vm);
    for (int k = 0; k < j; ++k) q = step * q;
  }
  return {j, 1, cutoff, std::move(q)};
}

// eta^{[1/N]}_nm = sum_{j=0}^{N-1} eps_n^{-j/N} eps_m^{-(N-1-j)/N}
inline double eta_coeff(int N, double eps_n, double eps_m) {
  if (N < 1 || eps_n <= 0 || eps_m <= 0) throw std::invalid_argument("eta_coeff: bad arguments");
  double acc = 0;
  for (int j = 0; j < N; ++j)
    acc += std::exp(-(double(j) / N) * std::log(eps_n) - (double(N - 1 - j) / N) * std::log(eps_m));
  return acc;
}

// xi^{[1/N]}_nrm = sum_{j=0}^{N-2} sum_{l=0}^{N-2-j}
//                  eps_n^{-j/N} eps_r^{-l/N} eps_m^{-(N-2-l-j)/N}
inline double xi_coeff(int N, double eps_n, double eps_r, double eps_m) {
  if (N < 2 || eps_n <= 0 || eps_r <= 0 || eps_m <= 0)
    throw std::invalid_argument("xi_coeff: bad arguments");
  double acc = 0;
  for (int j = 0; j <= N - 2; ++j)
    for (int l = 0; l <= N - 2 - j; ++l)
      acc += std::exp(-(double(j) / N) * std::log(eps_n) - (double(l) / N) * std::log(eps_r) -
                      (double(N - 2 - l - j) / N) * std::log(eps_m));
  return acc;
}

// Fractional coefficients q^{[1/N](j)} for j in {0, 1, 2}. N = 1 reduces to Q^(j).
template <class V>
GreenCoefficients q_fractional(int j, int N, const UnperturbedBasis& basis, V&& v, int cutoff) {
  if (j < 0 || j > 2) throw std::invalid_argument("q_fractional: only orders 0..2 are defined");
  if (N < 1 || cutoff < 1) throw std::invalid_argument("q_fractional: need N >= 1, cutoff >= 1");
  if (N == 1) return q_order_Q(j, basis, v, cutoff);

  const Eigen::VectorXd eps = detail::eigenvalue_vector(basis, cutoff);
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(cutoff, cutoff);
  if (j == 0) {
    for (int i = 0; i < cutoff; ++i) q(i, i) = std::pow(eps(i), -1.0 / N);
  } else {
    const Eigen::MatrixXd vm = detail::potential_matrix(basis, v, cutoff);
    if (j == 1) {
      for (int n = 0; n < cutoff; ++n)
        for (int m = 0; m < cutoff; ++m)
          q(n, m) = -vm(n, m) / (eta_coeff(N, eps(n), eps(m)) * eps(n) * eps(m));
    } else {
      for (int n = 0; n < cutoff; ++n)
        for (int m = 0; m < cutoff; ++m) {
          num::KahanSum<double> acc;
          for (int r = 0; r < cutoff; ++r) {
            const double core = vm(n, r) * vm(r, m) / (eps(n) * eps(r) * eps(m));
            const double correction =
                xi_coeff(N, eps(n), eps(r), eps(m)) /
                (eps(r) * eta_coeff(N, eps(n), eps(r)) * eta_coeff(N, eps(r), eps(m)));
            acc.add(core * (1.0 - correction));
          }
          q(n, m) = acc.value() / eta_coeff(N, eps(n), eps(m));
        }
    }
  }
  return {j, N, cutoff, std::move(q)};
}

struct CompositionResidual {
  double order0 = 0.0;
  double order1 = 0.0;
  double order2 = 0.0;
  double max() const { return std::max(order0, std::max(order1, order2)); }
};

// Multiplies q = q0 + lambda q1 + lambda^2 q2 with itself N times keeping
// terms through lambda^2 and compares against Q^(0..2): the identity is exact
// on the truncated space, so residuals probe only the implementation.
template <class V>
CompositionResidual composition_check(int N, const UnperturbedBasis& basis, V&& v, int cutoff,
                                      double lambda = 1.0) {
  if (N < 2) throw std::invalid_argument("composition_check: need N >= 2");
  const Eigen::MatrixXd q0 = q_fractional(0, N, basis, v, cutoff).mat;
  const Eigen::MatrixXd q1 = lambda * q_fractional(1, N, basis, v, cutoff).mat;
  const Eigen::MatrixXd q2 = lambda * lambda * q_fractional(2, N, basis, v, cutoff).mat;

  // truncated polynomial power
  Eigen::MatrixXd p0 = q0, p1 = q1, p2 = q2;
  for (int k = 1; k < N; ++k) {
    Eigen::MatrixXd n0 = p0 * q0;
    Eigen::MatrixXd n1 = p0 * q1 + p1 * q0;
    Eigen::MatrixXd n2 = p0 * q2 + p1 * q1 + p2 * q0;
    p0 = std::move(n0);
    p1 = std::move(n1);
    p2 = std::move(n2);
  }

  const Eigen::MatrixXd Q0 = q_order_Q(0, basis, v, cutoff).mat;
  const Eigen::MatrixXd Q1 = lambda * q_order_Q(1, basis, v, cutoff).mat;
  const Eigen::MatrixXd Q2 = lambda * lambda * q_order_Q(2, basis, v, cutoff).mat;

  auto rel = [](const Eigen::MatrixXd& got, const Eigen::MatrixXd& want) {
    const double scale = std::max(want.cwiseAbs().maxCoeff(), 1e-300);
    return (got - want).cwiseAbs().maxCoeff() / scale;
  };
  return {rel(p0, Q0), lambda == 0.0 ? 0.0 : rel(p1, Q1), lambda == 0.0 ? 0.0 : rel(p2, Q2)};
}

}  // namespace specsum
