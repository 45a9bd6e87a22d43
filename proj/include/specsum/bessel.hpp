#pragma once

// Bessel functions J_n, Y_n of integer order for real positive argument:
// ascending series in extended precision below x = 16, Hankel asymptotic
// expansions above, Miller downward recurrence for J_n with n > x and upward
// recurrence for Y_n. Accuracy over the range used by the disk problem
// (x <= 50, n <= 100) is at the 1e-13 level.
//
// The *_scaled helpers evaluate the series with the singular prefactors
// (x/2)^{+-n} and ln(x/2) factored out, as functions of t = x^2; they accept
// negative t (imaginary argument), which the disk trace uses to expand the
// partial-wave Green's function around zero energy.

#include <cmath>
#include <stdexcept>

#include "specsum/numeric.hpp"

namespace specsum::bessel {

namespace detail {

inline long double j0_series(long double x) {
  const long double q = 0.25L * x * x;
  long double term = 1.0L, acc = 1.0L;
  for (int m = 1; m < 200; ++m) {
    term *= -q / (static_cast<long double>(m) * m);
    acc += term;
    if (fabsl(term) < 1e-22L * fabsl(acc) + 1e-4900L) break;
  }
  return acc;
}

inline long double j1_series(long double x) {
  const long double q = 0.25L * x * x;
  long double term = 0.5L * x, acc = term;
  for (int m = 1; m < 200; ++m) {
    term *= -q / (static_cast<long double>(m) * (m + 1));
    acc += term;
    if (fabsl(term) < 1e-22L * fabsl(acc) + 1e-4900L) break;
  }
  return acc;
}

inline long double y0_series(long double x) {
  const long double q = 0.25L * x * x;
  long double term = 1.0L, acc = 0.0L, harmonic = 0.0L;
  for (int m = 1; m < 200; ++m) {
    term *= -q / (static_cast<long double>(m) * m);
    harmonic += 1.0L / m;
    const long double add = -term * harmonic;  // (-1)^{m+1} H_m q^m/(m!)^2
    acc += add;
    if (fabsl(add) < 1e-22L * (fabsl(acc) + 1.0L)) break;
  }
  const long double g = 0.57721566490153286060651209008240L;
  return 2.0L / pi_l * ((logl(x / 2) + g) * j0_series(x) + acc);
}

inline long double y1_series(long double x) {
  // A&S 9.1.11 at n = 1 with psi(k+1) = -gamma + H_k
  const long double g = 0.57721566490153286060651209008240L;
  const long double q = 0.25L * x * x;
  long double term = 0.5L * x;  // (x/2)^{2k+1}/(k!(k+1)!) at k = 0
  long double hk = 0.0L, hk1 = 1.0L;
  long double acc = term * (2.0L * (-g) + hk + hk1);
  for (int k = 1; k < 200; ++k) {
    term *= -q / (static_cast<long double>(k) * (k + 1));
    hk += 1.0L / k;
    hk1 += 1.0L / (k + 1);
    const long double add = term * (2.0L * (-g) + hk + hk1);
    acc += add;
    if (fabsl(add) < 1e-22L * (fabsl(acc) + 1.0L)) break;
  }
  return 2.0L / pi_l * logl(x / 2) * j1_series(x) - 2.0L / (pi_l * x) - acc / pi_l;
}

// Hankel asymptotic P, Q for order n in {0, 1}, x large.
inline void hankel_pq(int n, long double x, long double& p, long double& q) {
  const long double mu = 4.0L * n * n;
  const long double ex = 8.0L * x;
  p = 1.0L;
  q = 0.0L;
  long double term = 1.0L;
  for (int k = 1; k < 40; ++k) {
    const long double odd = 2.0L * k - 1.0L;
    term *= (mu - odd * odd) / (k * ex);
    if (fabsl(term) > 1.0L) break;  // divergence onset of the asymptotic series
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      default: p += term; break;
    }
    if (fabsl(term) < 1e-22L) break;
  }
}

inline long double jy01_asymptotic(int n, long double x, bool want_y) {
  long double p, q;
  hankel_pq(n, x, p, q);
  const long double chi = x - (2 * n + 1) * pi_l / 4;
  const long double amp = sqrtl(2.0L / (pi_l * x));
  return want_y ? amp * (p * sinl(chi) + q * cosl(chi)) : amp * (p * cosl(chi) - q * sinl(chi));
}

inline long double j01(int n, long double x) {
  if (x < 16.0L) return n == 0 ? j0_series(x) : j1_series(x);
  return jy01_asymptotic(n, x, false);
}

inline long double y01(int n, long double x) {
  if (x < 16.0L) return n == 0 ? y0_series(x) : y1_series(x);
  return jy01_asymptotic(n, x, true);
}

}  // namespace detail

// J_n(x) for n >= 0, x >= 0.
inline double J(int n, double xd) {
  if (n < 0 || xd < 0) throw std::invalid_argument("bessel::J: need n >= 0, x >= 0");
  const long double x = xd;
  if (n == 0) return static_cast<double>(detail::j01(0, x));
  if (x == 0.0L) return 0.0;
  if (n == 1) return static_cast<double>(detail::j01(1, x));
  if (x >= static_cast<long double>(n)) {
    // upward recurrence is stable for order below argument
    long double jm = detail::j01(0, x), j = detail::j01(1, x);
    for (int k = 1; k < n; ++k) {
      const long double jp = (2.0L * k / x) * j - jm;
      jm = j;
      j = jp;
    }
    return static_cast<double>(j);
  }
  // Miller downward recurrence with normalization 1 = J0 + 2 sum J_{2k}
  const int start = 2 * ((n + static_cast<int>(std::sqrt(40.0 * n))) / 2) + 2;
  long double jp = 0.0L, j = 1e-30L, result = 0.0L, norm = 0.0L;
  for (int k = start; k > 0; --k) {
    const long double jm = (2.0L * k / x) * j - jp;
    jp = j;
    j = jm;
    if (k - 1 == n) result = j;
    if ((k - 1) % 2 == 0) norm += (k - 1 == 0) ? j : 2.0L * j;
    if (fabsl(j) > 1e4500L) {  // rescale to avoid overflow
      jp /= 1e4500L;
      j /= 1e4500L;
      result /= 1e4500L;
      norm /= 1e4500L;
    }
  }
  return static_cast<double>(result / norm);
}

// Y_n(x) for n >= 0, x > 0 (upward recurrence; Y grows with order).
inline double Y(int n, double xd) {
  if (n < 0 || xd <= 0) throw std::invalid_argument("bessel::Y: need n >= 0, x > 0");
  const long double x = xd;
  if (n == 0) return static_cast<double>(detail::y01(0, x));
  long double ym = detail::y01(0, x), y = detail::y01(1, x);
  for (int k = 1; k < n; ++k) {
    const long double yp = (2.0L * k / x) * y - ym;
    ym = y;
    y = yp;
  }
  return static_cast<double>(y);
}

// --- Scaled series in t = x^2 (t may be negative) ---------------------------

// Jhat_n(t) = J_n(x) n! (2/x)^n as a series in t = x^2; entire in t.
template <class Real>
Real jhat_scaled(int n, Real t) {
  Real term = 1, acc = 1;
  for (int m = 1; m < 300; ++m) {
    term *= -t / (Real(4) * m * (n + m));
    acc += term;
    if (std::abs(term) < Real(1e-22L) * (std::abs(acc) + Real(1))) break;
  }
  return acc;
}

// V0(t) = sum_{m>=1} (-1)^{m+1} H_m (t/4)^m/(m!)^2: the regular part of Y0,
// Y0(x) = (2/pi)[(ln(x/2) + gamma) J0(x) + V0(x^2)].
template <class Real>
Real y0_regular_scaled(Real t) {
  Real term = 1, acc = 0, harm = 0;
  for (int m = 1; m < 300; ++m) {
    term *= -t / (Real(4) * m * m);
    harm += Real(1) / m;
    acc += -term * harm;
    if (std::abs(term) < Real(1e-22L) * (std::abs(acc) + Real(1))) break;
  }
  return acc;
}

// W_n(t): the log-free content of -pi (x/2)^n Y_n(x)/(n-1)!; combined with
// the explicit log term, Yhat_n(t) = W_n(t) - 2 ln(x/2) * n (t/4)^n Jhat_n(t)/(n!)^2.
template <class Real>
Real w_scaled(int n, Real t) {
  if (n < 1) throw std::invalid_argument("w_scaled: n >= 1");
  // finite sum S_n(t) = sum_{k=0}^{n-1} (t/4)^k (n-k-1)!/(k! (n-1)!)
  Real term = 1, acc = 1;
  for (int k = 1; k < n; ++k) {
    term *= t / (Real(4) * k * (n - k));
    acc += term;
  }
  // regular series Q_n(t) = sum_k (-1)^k [psi(k+1)+psi(n+k+1)] (t/4)^{n+k}
  //                          / (k! (n+k)! (n-1)!); vanishes fast with n
  const Real logpref =
      n * std::log(std::abs(t) / 4) - std::lgamma(Real(n + 1)) - std::lgamma(Real(n));
  if (logpref > Real(-11300)) {
    Real pref = std::exp(logpref);  // (t/4)^n / (n! (n-1)!)
    if (t < 0 && (n % 2 == 1)) pref = -pref;
    const Real gamma_e = Real(0.57721566490153286060651209008240L);
    Real psi_k = -gamma_e;       // psi(k+1) at k = 0
    Real psi_nk = -gamma_e;      // psi(n+k+1) at k = 0
    for (int m = 1; m <= n; ++m) psi_nk += Real(1) / m;
    Real term2 = pref, acc2 = 0;
    for (int k = 0; k < 300; ++k) {
      if (k > 0) {
        term2 *= -t / (Real(4) * k * (n + k));
        psi_k += Real(1) / k;
        psi_nk += Real(1) / (n + k);
      }
      const Real add = term2 * (psi_k + psi_nk);
      acc2 += add;
      if (std::abs(add) < Real(1e-25L) * (std::abs(acc) + Real(1))) break;
    }
    acc += acc2;
  }
  return acc;
}

// n (t/4)^n / (n!)^2 with sign handling for t < 0; underflows to zero.
template <class Real>
Real log_term_prefactor(int n, Real t) {
  if (n < 1) return Real(0);
  const Real lp = n * std::log(std::abs(t) / 4) - 2 * std::lgamma(Real(n + 1)) +
                  std::log(Real(n));
  if (lp < Real(-11300)) return Real(0);
  Real v = std::exp(lp);
  if (t < 0 && (n % 2 == 1)) v = -v;
  return v;
}

}  // namespace specsum::bessel
