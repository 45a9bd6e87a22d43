#pragma once

// Transformation between the 1D time-independent Schrodinger equation on
// [-L/2, L/2] and the heterogeneous Helmholtz equation -phi'' = E Sigma(u) phi
// on [-ell/2, ell/2], with order-1 sum rules computed on either side and the
// length map connecting them (hbar = m = 1 throughout).

#include <cmath>
#include <functional>
#include <utility>

#include "specsum/core.hpp"

namespace specsum {

// String density profile Sigma(u) > 0 on [-ell/2, ell/2].
struct DensityProfile {
  enum class Form { Borg, InverseSquare, Custom };

  Form form = Form::Custom;
  double alpha = 0.0;
  double beta = 1.0;
  double ell = 1.0;
  std::function<double(double)> sigma_fn;  // Custom only

  static DensityProfile borg(double alpha, double beta, double ell) {
    check_params(alpha, beta, ell);
    return {Form::Borg, alpha, beta, ell, {}};
  }
  static DensityProfile inverse_square(double alpha, double beta, double ell) {
    check_params(alpha, beta, ell);
    return {Form::InverseSquare, alpha, beta, ell, {}};
  }
  static DensityProfile custom(std::function<double(double)> sigma, double ell) {
    if (ell <= 0) throw domain_error("DensityProfile: ell > 0 required");
    DensityProfile d;
    d.form = Form::Custom;
    d.ell = ell;
    d.sigma_fn = std::move(sigma);
    return d;
  }

  double sigma(double u) const {
    switch (form) {
      case Form::Borg:
        return beta / std::pow(1.0 + alpha * u, 4);
      case Form::InverseSquare:
        return beta / ((1.0 + alpha * u) * (1.0 + alpha * u));
      default:
        return sigma_fn(u);
    }
  }

 private:
  static void check_params(double alpha, double beta, double ell) {
    if (ell <= 0) throw domain_error("DensityProfile: ell > 0 required");
    if (beta <= 0) throw domain_error("DensityProfile: beta > 0 required");
    if (std::abs(alpha) * ell / 2.0 >= 1.0)
      throw domain_error("DensityProfile: |alpha| ell / 2 < 1 required for positivity");
  }
};

// Transformed Schrodinger problem: x(u) monotone map, amplitude R = Sigma^{-1/4}
// (normalized to R(0) = Sigma(0)^{-1/4}), box length L, and potential V(x).
struct TransformedProblem {
  std::function<double(double)> x_of_u;
  std::function<double(double)> u_of_x;
  std::function<double(double)> R_of_u;
  std::function<double(double)> V_of_x;
  double L = 0.0;
};

// Box length L = x(ell/2) - x(-ell/2) of the transformed problem.
inline double length_map(const DensityProfile& d) {
  const double hl = d.ell / 2.0;
  switch (d.form) {
    case DensityProfile::Form::Borg:
      if (d.alpha == 0.0) return std::sqrt(d.beta / 2.0) * d.ell;
      return std::sqrt(d.beta) * d.ell / (std::sqrt(2.0) * (1.0 - d.alpha * d.alpha * hl * hl));
    case DensityProfile::Form::InverseSquare:
      if (d.alpha == 0.0) return std::sqrt(d.beta / 2.0) * d.ell;
      return std::sqrt(2.0 * d.beta) * std::atanh(d.alpha * hl) / d.alpha;
    default: {
      auto f = [&](double u) { return std::sqrt(d.sigma(u) / 2.0); };
      return num::adaptive_gauss<double>(f, -hl, hl, 1e-14);
    }
  }
}

// Builds the Schrodinger image of the density: map, amplitude, potential.
inline TransformedProblem transform(const DensityProfile& d) {
  const double hl = d.ell / 2.0;
  // validate positivity on a grid (closed forms are checked at construction)
  for (int i = 0; i <= 200; ++i) {
    const double u = -hl + d.ell * i / 200.0;
    if (!(d.sigma(u) > 0.0)) throw domain_error("transform: density must be positive");
  }
  TransformedProblem out;
  out.L = length_map(d);
  const double L = out.L;
  const double a = d.alpha, b = d.beta;

  switch (d.form) {
    case DensityProfile::Form::Borg: {
      if (a == 0.0) {
        const double c = std::sqrt(b / 2.0);
        out.x_of_u = [c](double u) { return c * u; };
        out.u_of_x = [c](double x) { return x / c; };
      } else {
        // x(u) = c1 - sqrt(b)/(sqrt(2) a (1 + a u))
        const double s = std::sqrt(b) / (std::sqrt(2.0) * a);
        const double c1 = -L / 2.0 + s / (1.0 - a * hl);
        out.x_of_u = [s, c1, a](double u) { return c1 - s / (1.0 + a * u); };
        out.u_of_x = [s, c1, a](double x) { return (s / (c1 - x) - 1.0) / a; };
      }
      out.V_of_x = [](double) { return 0.0; };
      break;
    }
    case DensityProfile::Form::InverseSquare: {
      if (a == 0.0) {
        const double c = std::sqrt(b / 2.0);
        out.x_of_u = [c](double u) { return c * u; };
        out.u_of_x = [c](double x) { return x / c; };
      } else {
        // x(u) = c1 + sqrt(b) ln(1 + a u)/(sqrt(2) a)
        const double s = std::sqrt(b) / (std::sqrt(2.0) * a);
        const double c1 = -L / 2.0 - s * std::log(1.0 - a * hl);
        out.x_of_u = [s, c1, a](double u) { return c1 + s * std::log(1.0 + a * u); };
        out.u_of_x = [s, c1, a](double x) { return (std::exp((x - c1) / s) - 1.0) / a; };
      }
      const double v0 = a * a / (4.0 * b);
      out.V_of_x = [v0](double) { return v0; };
      break;
    }
    default: {
      // numerical map: x(u) = -L/2 + Int_{-ell/2}^u sqrt(Sigma/2)
      auto integrand = [d](double u) { return std::sqrt(d.sigma(u) / 2.0); };
      const double lo = -hl;
      auto x_of_u = [integrand, lo, L](double u) {
        return -L / 2.0 + num::adaptive_gauss<double>(integrand, lo, u, 1e-13);
      };
      out.x_of_u = x_of_u;
      out.u_of_x = [x_of_u, hl](double x) {
        return num::brent_root([&](double u) { return x_of_u(u) - x; }, -hl, hl, 1e-13);
      };
      const double h = 1e-4 * d.ell;
      auto sig = [d](double u) { return d.sigma(u); };
      out.V_of_x = [sig, h, ux = out.u_of_x](double x) {
        const double u = ux(x);
        const double s0 = sig(u);
        // 5-point first and second derivatives
        const double s_m2 = sig(u - 2 * h), s_m1 = sig(u - h), s_p1 = sig(u + h),
                     s_p2 = sig(u + 2 * h);
        const double d1 = (-s_p2 + 8 * s_p1 - 8 * s_m1 + s_m2) / (12 * h);
        const double d2 = (-s_p2 + 16 * s_p1 - 30 * s0 + 16 * s_m1 - s_m2) / (12 * h * h);
        return -5.0 * d1 * d1 / (16.0 * s0 * s0 * s0) + d2 / (4.0 * s0 * s0);
      };
      break;
    }
  }
  auto sig = [d](double u) { return d.sigma(u); };
  out.R_of_u = [sig](double u) { return std::pow(sig(u), -0.25); };
  return out;
}

// Order-1 sum rule from the Helmholtz side:
// Z(1) = Int (ell/4 - u^2/ell) Sigma(u) du.
inline double helmholtz_Z1(const DensityProfile& d) {
  const double hl = d.ell / 2.0;
  if (d.form == DensityProfile::Form::InverseSquare && d.alpha != 0.0) {
    const double a = d.alpha, b = d.beta;
    return 4.0 * b * std::atanh(a * hl) / (a * a * a * d.ell) - 2.0 * b / (a * a);
  }
  auto f = [&](double u) { return (d.ell / 4.0 - u * u / d.ell) * d.sigma(u); };
  return num::adaptive_gauss<double>(f, -hl, hl, 1e-14);
}

// Order-1 sum rule of a box of length L with constant potential V0 >= 0:
// sum_n 1/(pi^2 n^2/(2 L^2) + V0) = (L/sqrt(2 V0)) coth(L sqrt(2 V0)) - 1/(2 V0),
// evaluated through the box resolvent trace (series across V0 = 0).
inline double schrodinger_Z1_const_potential(double L, double V0) {
  if (L <= 0) throw domain_error("schrodinger_Z1_const_potential: L > 0");
  if (V0 < 0) throw domain_error("schrodinger_Z1_const_potential: V0 >= 0");
  return L * L * box_resolvent_trace(V0 * L * L);
}

}  // namespace specsum
