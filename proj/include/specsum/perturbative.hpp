#pragma once

// Z(s) through second order in the coupling for a perturbed solvable problem,
// with closed-form matrix elements for the linear potential in a box, a Dirac
// delta in a box, and the quartic SHO perturbation, plus the [1,1] Pade
// extension used to locate sum-rule poles nonperturbatively.

#include <cmath>
#include <optional>
#include <string>

#include "specsum/core.hpp"

namespace specsum {

enum class PerturbationKind { LinearInBox, DeltaInBox, QuarticSHO };

// V(x) = rho * shape, with lambda the bookkeeping expansion parameter.
struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::LinearInBox;
  double rho = 1.0;
  double abar = 0.0;  // impurity position, DeltaInBox only
  double lambda = 1.0;

  static PerturbationSpec linear_in_box(double rho, double lambda = 1.0) {
    return {PerturbationKind::LinearInBox, rho, 0.0, lambda};
  }
  static PerturbationSpec delta_in_box(double rho, double abar, double lambda = 1.0) {
    if (std::abs(abar) > 0.5) throw domain_error("DeltaInBox: |abar| <= 1/2 required");
    return {PerturbationKind::DeltaInBox, rho, abar, lambda};
  }
  static PerturbationSpec quartic_sho(double rho, double lambda = 1.0) {
    return {PerturbationKind::QuarticSHO, rho, 0.0, lambda};
  }

  UnperturbedBasis natural_basis() const {
    return UnperturbedBasis(kind == PerturbationKind::QuarticSHO ? BasisKind::SHO1D
                                                                 : BasisKind::Box1D);
  }
};

// Closed-form box matrix elements of V = rho*y and V^2 (m, n >= 1).
inline std::pair<double, double> matrix_elements_linear(int m, int n, double rho) {
  if (m < 1 || n < 1) throw std::invalid_argument("matrix_elements_linear: indices >= 1");
  double v, v2;
  if (m == n) {
    v = 0.0;
    v2 = (pi * pi * n * n - 6.0) * rho * rho / (12.0 * pi * pi * n * n);
  } else {
    const double mn = static_cast<double>(m) * n;
    const double dm = static_cast<double>(m) - n;
    const double sm = static_cast<double>(m) + n;
    const double parity = ((m + n) % 2 == 0) ? 1.0 : -1.0;
    v = 4.0 * mn * rho * (parity - 1.0) / (pi * pi * dm * dm * sm * sm);
    v2 = 4.0 * mn * rho * rho * (parity + 1.0) / (pi * pi * dm * dm * sm * sm);
  }
  return {v, v2};
}

// <n|y^4|n> = (3/4)(2n^2 + 2n + 1) in the SHO basis (n >= 0).
inline double matrix_elements_quartic(int n) {
  if (n < 0) throw std::invalid_argument("matrix_elements_quartic: n >= 0");
  return 0.75 * (2.0 * double(n) * n + 2.0 * n + 1.0);
}

// Banded <m|y^4|n>: nonzero for |m-n| in {0, 2, 4}.
inline double quartic_band_element(int m, int n) {
  if (m < 0 || n < 0) throw std::invalid_argument("quartic_band_element: indices >= 0");
  if (m < n) std::swap(m, n);
  const int d = m - n;
  if (d == 0) return matrix_elements_quartic(n);
  if (d == 2) return 0.5 * (2.0 * n + 3.0) * std::sqrt(double(n + 1) * (n + 2));
  if (d == 4) return 0.25 * std::sqrt(double(n + 1) * (n + 2) * (n + 3) * (n + 4));
  return 0.0;
}

// <m|V|n> for the given perturbation in its natural basis.
inline double matrix_element(const UnperturbedBasis& basis, const PerturbationSpec& pert, int m,
                             int n) {
  switch (pert.kind) {
    case PerturbationKind::LinearInBox:
      return matrix_elements_linear(m, n, pert.rho).first;
    case PerturbationKind::DeltaInBox:
      return pert.rho * basis.eigenfunction(m, pert.abar) * basis.eigenfunction(n, pert.abar);
    default:
      return pert.rho * quartic_band_element(m, n);
  }
}

// <m|V^2|n> where a closed form exists (none for the delta impurity).
inline std::optional<double> matrix_element_V2(const PerturbationSpec& pert, int m, int n) {
  switch (pert.kind) {
    case PerturbationKind::LinearInBox:
      return matrix_elements_linear(m, n, pert.rho).second;
    case PerturbationKind::DeltaInBox:
      return std::nullopt;
    default: {
      // y^4 is banded, so <m|y^8|n> is a finite completeness sum.
      double acc = 0.0;
      for (int r = std::max(0, std::min(m, n) - 4); r <= std::max(m, n) + 4; ++r)
        acc += quartic_band_element(m, r) * quartic_band_element(r, n);
      return pert.rho * pert.rho * acc;
    }
  }
}

namespace detail {

// (eps_n^{-1-s} - eps_r^{-1-s}) / (eps_n - eps_r), with the analytic limit
// -(1+s) eps^{-2-s} taken for near-degenerate pairs.
inline double divided_power_difference(double s, double en, double er) {
  if (std::abs(en - er) < 1e-8 * std::abs(en)) {
    const double e = 0.5 * (en + er);
    return -(1.0 + s) * std::pow(e, -2.0 - s);
  }
  return (std::pow(en, -1.0 - s) - std::pow(er, -1.0 - s)) / (en - er);
}

// (eps_r eps_n^{-s-2} - eps_n eps_r^{-s-2}) / (eps_n - eps_r) with its
// analytic limit -(s+3) eps^{-s-2}.
inline double divided_power_difference_mixed(double s, double en, double er) {
  if (std::abs(en - er) < 1e-8 * std::abs(en)) {
    const double e = 0.5 * (en + er);
    return -(s + 3.0) * std::pow(e, -2.0 - s);
  }
  return (er * std::pow(en, -s - 2.0) - en * std::pow(er, -s - 2.0)) / (en - er);
}

// Integral-comparison estimate of the dropped tail sum_{n>last} f(n): sums a
// stretch of terms and closes with a power-law fit of the observed decay.
template <class F>
double tail_estimate(F&& term, long from, int stretch = 256) {
  num::KahanSum<double> acc;
  double a_prev = 0.0, a_last = 0.0;
  long n_last = from;
  for (long n = from; n < from + stretch; ++n) {
    const double a = term(n);
    acc.add(std::abs(a));
    a_prev = a_last;
    a_last = std::abs(a);
    n_last = n;
  }
  double rest = 0.0;
  if (a_last > 0.0 && a_prev > a_last) {
    double p = std::log(a_prev / a_last) / std::log(double(n_last) / double(n_last - 1));
    p = std::max(p, 1.1);
    rest = a_last * double(n_last) / (p - 1.0);
  }
  return acc.value() + rest;
}

}  // namespace detail

// Z(s) = Z0 - lambda s sum_n <n|V|n>/eps^{1+s} + lambda^2 Z2 with the
// second-order term assembled either from <n|V^2|n> (when the potential
// supplies it) or from the equivalent split double sum over matrix elements.
inline SumRuleEvaluation sum_rule_perturbative(const UnperturbedBasis& basis,
                                               const PerturbationSpec& pert,
                                               const RationalOrder& order, int cutoff) {
  if (cutoff < 1) throw std::invalid_argument("sum_rule_perturbative: cutoff >= 1");
  const double s = order.value();
  if (s <= basis.zeta_threshold())
    throw domain_error("sum_rule_perturbative: order 0 term diverges at s = " + order.str() +
                       " (requires s > " + std::to_string(basis.zeta_threshold()) + ")");
  if (pert.kind == PerturbationKind::QuarticSHO) {
    if (s <= 2.0)
      throw domain_error("sum_rule_perturbative: order 1 term diverges for QuarticSHO at s = " +
                         order.str() + " (requires s > 2)");
    if (s <= 3.0)
      throw domain_error("sum_rule_perturbative: order 2 term diverges for QuarticSHO at s = " +
                         order.str() + " (requires s > 3)");
  }

  const int first = basis.first_index();
  auto eps = [&](long n) { return basis.eigenvalue(static_cast<int>(n)); };
  auto vel = [&](long m, long n) {
    return matrix_element(basis, pert, static_cast<int>(m), static_cast<int>(n));
  };

  const ValueWithBound z0 = zeta_unperturbed_with_bound(basis, s);
  double bound = z0.bound;

  // first order
  num::KahanSum<double> s1;
  for (long n = first; n < first + cutoff; ++n) s1.add(vel(n, n) / std::pow(eps(n), 1.0 + s));
  const double z1 = -s * s1.value();
  bound += s * detail::tail_estimate(
                   [&](long n) { return vel(n, n) / std::pow(eps(n), 1.0 + s); }, first + cutoff);

  // second order
  const bool have_v2 = matrix_element_V2(pert, first, first).has_value();
  num::KahanSum<double> diag, offdiag;
  for (long n = first; n < first + cutoff; ++n) {
    const double vnn = vel(n, n);
    diag.add(vnn * vnn * std::pow(eps(n), -2.0 - s));
  }
  double z2;
  if (have_v2) {
    num::KahanSum<double> v2sum;
    for (long n = first; n < first + cutoff; ++n)
      v2sum.add(*matrix_element_V2(pert, static_cast<int>(n), static_cast<int>(n)) *
                std::pow(eps(n), -2.0 - s));
    for (long n = first; n < first + cutoff; ++n) {
      const double en = eps(n);
      for (long r = first; r < first + cutoff; ++r) {
        if (r == n) continue;
        const double v = vel(n, r);
        if (v == 0.0) continue;
        offdiag.add(detail::divided_power_difference_mixed(s, en, eps(r)) * v * v);
      }
    }
    z2 = 0.5 * s * (s + 3.0) * diag.value() - s * v2sum.value() - 0.5 * s * offdiag.value();
  } else {
    for (long n = first; n < first + cutoff; ++n) {
      const double en = eps(n);
      for (long r = first; r < first + cutoff; ++r) {
        if (r == n) continue;
        const double v = vel(n, r);
        if (v == 0.0) continue;
        offdiag.add(detail::divided_power_difference(s, en, eps(r)) * v * v);
      }
    }
    z2 = 0.5 * s * (s + 1.0) * diag.value() - 0.5 * s * offdiag.value();
  }
  // dropped rows n > cutoff of the double sum (the dominant truncation)
  bound += s * detail::tail_estimate(
                   [&](long n) {
                     const double v = vel(n, n + 1);
                     const double w = vel(n, std::max<long>(first, n - 1));
                     return (v * v + w * w) / std::pow(eps(n), 1.0 + s) / eps(n);
                   },
                   first + cutoff);

  SumRuleEvaluation ev;
  ev.s = order;
  ev.z0 = z0.value;
  ev.z1 = z1;
  ev.z2 = z2;
  ev.lambda = pert.lambda;
  ev.truncation_error = bound;
  ev.scale_factor = ScaleFactor{s, "Gamma^s with Gamma = M L^2 / hbar^2"};
  return ev;
}

// Rational function (a0 + a1 lambda) / (1 + b1 lambda) matching the series
// through O(lambda^2).
struct PadeForm {
  double a0 = 0.0;
  double a1 = 0.0;
  double b1 = 0.0;
  std::optional<double> pole_location;  // in lambda at the stored coupling

  double eval(double lambda) const { return (a0 + a1 * lambda) / (1.0 + b1 * lambda); }
};

inline PadeForm pade_extend(const SumRuleEvaluation& ev) {
  if (ev.z1 == 0.0 || std::abs(ev.z1) < 1e-300)
    throw domain_error("pade_extend: degenerate Pade, Z^(1) = 0 (series even in the coupling)");
  PadeForm p;
  p.a0 = ev.z0;
  p.a1 = (ev.z1 * ev.z1 - ev.z0 * ev.z2) / ev.z1;
  p.b1 = -ev.z2 / ev.z1;
  if (ev.z2 != 0.0) p.pole_location = ev.z1 / ev.z2;
  return p;
}

}  // namespace specsum
