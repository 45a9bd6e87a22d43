#pragma once

// Shared numerical kernels: compensated and pairwise summation,
// Euler-Maclaurin tails of power series, Gauss-Legendre panels with
// adaptive subdivision, Brent bracketed root finding, and polynomial
// (Neville) extrapolation used for Richardson limits.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace specsum {

inline constexpr double pi = 3.141592653589793238462643383279503;
inline constexpr long double pi_l = 3.141592653589793238462643383279503L;
inline constexpr double euler_gamma = 0.577215664901532860606512090082402;

// Thrown when a requested value lies outside the mathematical domain of an
// operation (divergent order, pole of a sum rule, parameter out of range).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Thrown when an iterative scheme fails to reach its target accuracy.
class convergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ValueWithBound {
  double value = 0.0;
  double bound = 0.0;  // estimate of the absolute error
};

namespace num {

template <class Real = double>
class KahanSum {
 public:
  void add(Real x) {
    const Real y = x - comp_;
    const Real t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  Real value() const { return sum_; }

 private:
  Real sum_ = 0;
  Real comp_ = 0;
};

template <class Real>
Real pairwise_sum(std::span<const Real> xs) {
  if (xs.size() <= 8) {
    Real s = 0;
    for (Real x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

// Bernoulli numbers B_2, B_4, ..., B_26.
inline constexpr std::array<long double, 13> bernoulli2k = {
    1.0L / 6.0L,         -1.0L / 30.0L,       1.0L / 42.0L,
    -1.0L / 30.0L,       5.0L / 66.0L,        -691.0L / 2730.0L,
    7.0L / 6.0L,         -3617.0L / 510.0L,   43867.0L / 798.0L,
    -174611.0L / 330.0L, 854513.0L / 138.0L,  -236364091.0L / 2730.0L,
    8553103.0L / 6.0L};

// Sum_{n>=from} n^{-p} for p > 1 via direct summation plus Euler-Maclaurin.
// bound holds the magnitude of the first omitted correction term.
inline ValueWithBound power_tail(double p, long from) {
  if (p <= 1.0) throw domain_error("power_tail: exponent must exceed 1");
  if (from < 1) throw std::invalid_argument("power_tail: from >= 1 required");
  const long N = std::max<long>(from, 24);
  long double acc = 0.0L;
  for (long n = from; n < N; ++n) acc += powl(static_cast<long double>(n), -static_cast<long double>(p));
  const long double Nl = static_cast<long double>(N);
  const long double pl = static_cast<long double>(p);
  const long double Np = powl(Nl, -pl);
  acc += Nl * Np / (pl - 1.0L) + 0.5L * Np;
  long double poch = pl;        // p (p+1) ... (p+2k-2)
  long double Npow = Np / Nl;   // N^{-p-2k+1}
  long double fact = 2.0L;      // (2k)!
  long double bound = 0.0L;
  for (std::size_t k = 1; k <= bernoulli2k.size(); ++k) {
    const long double term = bernoulli2k[k - 1] / fact * poch * Npow;
    if (fabsl(term) < 1e-25L * fabsl(acc)) {
      bound = fabsl(term);
      break;
    }
    acc += term;
    bound = fabsl(term);
    poch *= (pl + 2 * k - 1) * (pl + 2 * k);
    Npow /= Nl * Nl;
    fact *= (2 * k + 1) * (2 * k + 2);
  }
  return {static_cast<double>(acc), static_cast<double>(bound)};
}

// Riemann zeta for real argument p > 1.
inline double riemann_zeta(double p) { return power_tail(p, 1).value; }

// Sum_{n>=from} (2n+1)^{-p}, p > 1 (odd-integer power tails).
inline ValueWithBound odd_power_tail(double p, long from) {
  // 2n+1 over n>=from enumerates odd m >= 2*from+1:
  // sum = sum_{m>=M} m^{-p} - 2^{-p} sum_{j>=(M+1)/2} j^{-p}, M = 2*from+1.
  const long M = 2 * from + 1;
  const ValueWithBound all = power_tail(p, M);
  const ValueWithBound evens = power_tail(p, (M + 1) / 2);
  const double scale = std::pow(2.0, -p);
  return {all.value - scale * evens.value, all.bound + scale * evens.bound};
}

// --- Gauss-Legendre panels -------------------------------------------------

struct GaussRule {
  std::vector<long double> nodes;    // on (-1, 1)
  std::vector<long double> weights;
};

inline GaussRule make_gauss_rule(int n) {
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    long double x = cosl(pi_l * (i + 0.75L) / (n + 0.5L));
    long double pp = 0.0L;
    for (int it = 0; it < 100; ++it) {
      long double p0 = 1.0L, p1 = 0.0L;
      for (int j = 0; j < n; ++j) {
        const long double p2 = p1;
        p1 = p0;
        p0 = ((2 * j + 1) * x * p1 - j * p2) / (j + 1);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0L);
      const long double dx = p0 / pp;
      x -= dx;
      if (fabsl(dx) < 1e-21L) break;
    }
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = 2.0L / ((1.0L - x * x) * pp * pp);
    r.weights[n - 1 - i] = r.weights[i];
  }
  return r;
}

inline const GaussRule& gauss15() {
  static const GaussRule rule = make_gauss_rule(15);
  return rule;
}

template <class Real, class F>
Real gauss_panel(F&& f, Real a, Real b) {
  const GaussRule& g = gauss15();
  const Real mid = (a + b) / 2;
  const Real half = (b - a) / 2;
  Real acc = 0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    acc += static_cast<Real>(g.weights[i]) * f(mid + half * static_cast<Real>(g.nodes[i]));
  return acc * half;
}

template <class Real, class F>
Real adaptive_gauss_impl(F&& f, Real a, Real b, Real whole, Real tol, int depth, Real& err) {
  const Real mid = (a + b) / 2;
  const Real left = gauss_panel(f, a, mid);
  const Real right = gauss_panel(f, mid, b);
  const Real delta = (left + right) - whole;
  if (std::abs(delta) <= tol || depth >= 48) {
    err += std::abs(delta);
    return left + right;
  }
  return adaptive_gauss_impl(f, a, mid, left, tol / 2, depth + 1, err) +
         adaptive_gauss_impl(f, mid, b, right, tol / 2, depth + 1, err);
}

// Adaptive Gauss-Legendre integration of f over [a, b] to absolute tolerance.
template <class Real, class F>
Real adaptive_gauss(F&& f, Real a, Real b, Real tol, Real* err_out = nullptr) {
  Real err = 0;
  const Real whole = gauss_panel(f, a, b);
  const Real v = adaptive_gauss_impl(f, a, b, whole, tol, 0, err);
  if (err_out) *err_out = err;
  return v;
}

// --- Root finding ----------------------------------------------------------

// Brent's method on a bracketing interval [a, b] with f(a) f(b) <= 0.
template <class Real, class F>
Real brent_root(F&& f, Real a, Real b, Real fa, Real fb, Real xtol, int maxit = 200) {
  if (fa == 0) return a;
  if (fb == 0) return b;
  if (fa * fb > 0) throw std::invalid_argument("brent_root: interval does not bracket a root");
  Real c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < maxit; ++it) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const Real tol1 = 2 * std::numeric_limits<Real>::epsilon() * std::abs(b) + xtol / 2;
    const Real xm = (c - b) / 2;
    if (std::abs(xm) <= tol1 || fb == 0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      Real p, q, r;
      const Real s = fb / fa;
      if (a == c) {
        p = 2 * xm * s;
        q = 1 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2 * xm * q * (q - r) - (b - a) * (r - 1));
        q = (q - 1) * (r - 1) * (s - 1);
      }
      if (p > 0) q = -q;
      p = std::abs(p);
      if (2 * p < std::min(3 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
    fb = f(b);
    if ((fb > 0) == (fc > 0)) {
      c = a; fc = fa;
      d = b - a; e = d;
    }
  }
  throw convergence_error("brent_root: no convergence after max iterations");
}

template <class Real, class F>
Real brent_root(F&& f, Real a, Real b, Real xtol = 1e-14) {
  return brent_root(f, a, b, f(a), f(b), xtol);
}

// --- Extrapolation ---------------------------------------------------------

// Neville extrapolation of samples (x_i, y_i) to x = 0. If err_out is given
// it receives the magnitude of the final correction.
template <class Real>
Real neville_to_zero(std::span<const Real> xs, std::span<const Real> ys, Real* err_out = nullptr) {
  const std::size_t n = xs.size();
  if (n == 0 || ys.size() != n) throw std::invalid_argument("neville_to_zero: bad input");
  std::vector<Real> t(ys.begin(), ys.end());
  Real last = t[0];
  for (std::size_t m = 1; m < n; ++m) {
    for (std::size_t i = 0; i + m < n; ++i) {
      // value at x=0 of the polynomial through points i .. i+m
      t[i] = (xs[i + m] * t[i] - xs[i] * t[i + 1]) / (xs[i + m] - xs[i]);
    }
    last = t[0];
  }
  if (err_out) {
    Real prev = ys[0];
    // difference between full tableau and the one ignoring the last sample
    std::vector<Real> t2(ys.begin(), ys.end() - 1);
    for (std::size_t m = 1; m + 1 < n; ++m)
      for (std::size_t i = 0; i + m + 1 < n; ++i)
        t2[i] = (xs[i + m] * t2[i] - xs[i] * t2[i + 1]) / (xs[i + m] - xs[i]);
    prev = (n > 1) ? t2[0] : prev;
    *err_out = std::abs(last - prev);
  }
  return last;
}

// Central finite-difference derivative of order m in {1,2,3} with Richardson
// extrapolation over `levels` step halvings starting from h0.
template <class Real, class F>
Real richardson_derivative(F&& f, int m, Real h0, int levels, Real* err_out = nullptr) {
  if (m < 1 || m > 3) throw std::invalid_argument("richardson_derivative: order must be 1..3");
  std::vector<Real> hs(levels), ds(levels);
  const Real f0 = (m == 2) ? f(Real(0)) : Real(0);
  for (int j = 0; j < levels; ++j) {
    const Real h = h0 * std::pow(Real(2), j);
    Real d;
    switch (m) {
      case 1: d = (f(h) - f(-h)) / (2 * h); break;
      case 2: d = (f(h) - 2 * f0 + f(-h)) / (h * h); break;
      default: d = (f(2 * h) - 2 * f(h) + 2 * f(-h) - f(-2 * h)) / (2 * h * h * h); break;
    }
    hs[j] = h * h;  // even error expansion
    ds[j] = d;
  }
  return neville_to_zero<Real>(hs, ds, err_out);
}

}  // namespace num
}  // namespace specsum
