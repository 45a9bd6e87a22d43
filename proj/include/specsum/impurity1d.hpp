#pragma once

// Exact all-orders results for the unit box decorated with one or two Dirac
// delta impurities: Green's functions, closed-form sum rules Zbar(1..4),
// critical couplings, the transcendental spectrum with asymptotic tail
// completion, and the shifted resolvent sum rule with its derivative trick.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "specsum/core.hpp"

namespace specsum {

struct SingleImpurity {
  double rho = 0.0;
  double abar = 0.0;
  SingleImpurity(double rho_, double abar_) : rho(rho_), abar(abar_) {
    if (std::abs(abar) > 0.5) throw domain_error("SingleImpurity: |abar| <= 1/2 required");
  }
};

struct DoubleImpurity {
  double rho = 0.0;
  double mu = 0.0;
  double abar = 0.0;
  double bbar = 0.0;
  DoubleImpurity(double rho_, double mu_, double abar_, double bbar_)
      : rho(rho_), mu(mu_), abar(abar_), bbar(bbar_) {
    if (std::abs(abar) > 0.5 || std::abs(bbar) > 0.5)
      throw domain_error("DoubleImpurity: positions must lie in [-1/2, 1/2]");
  }
};

// Unperturbed box Green's function on [-1/2, 1/2]; the min/max form keeps the
// two theta branches continuous on the diagonal.
inline double green0_box(double x, double y) {
  if (std::abs(x) > 0.5 || std::abs(y) > 0.5)
    throw std::invalid_argument("green0_box: arguments in [-1/2, 1/2]");
  const double lo = std::min(x, y) + 0.5;
  const double hi = std::max(x, y) + 0.5;
  return 2.0 * lo * (1.0 - hi);
}

// Coupling at which a zero-energy state appears: rho_c = -2/(1 - 4 abar^2).
inline double critical_coupling(double abar) {
  if (std::abs(abar) >= 0.5)
    throw domain_error("critical_coupling: the Dirac delta falls on the border");
  return -2.0 / (1.0 - 4.0 * abar * abar);
}

// Coupling at which Zbar(1) vanishes: rho_0 = -4/(1 - 16 abar^4).
inline double sum_rule_zero_coupling(double abar) {
  if (std::abs(abar) >= 0.5)
    throw domain_error("sum_rule_zero_coupling: the Dirac delta falls on the border");
  const double a2 = abar * abar;
  return -4.0 / (1.0 - 16.0 * a2 * a2);
}

inline double green_single_delta(double x, double y, const SingleImpurity& cfg) {
  const double gaa = green0_box(cfg.abar, cfg.abar);
  const double den = 1.0 + cfg.rho * gaa;
  if (std::abs(den) < 1e-12 * std::max(1.0, std::abs(cfg.rho * gaa)))
    throw domain_error("green_single_delta: singular coupling (rho at the critical value)");
  return green0_box(x, y) -
         cfg.rho * green0_box(x, cfg.abar) * green0_box(cfg.abar, y) / den;
}

// Closed-form dimensionless sum rules Zbar(order), order in {1, 2, 3, 4}.
inline double sum_rule_exact(int order, const SingleImpurity& cfg) {
  const double r = cfg.rho;
  const double a2 = cfg.abar * cfg.abar;
  const double a4 = a2 * a2, a6 = a4 * a2, a8 = a4 * a4, a10 = a8 * a2, a12 = a8 * a4;
  const double den1 = 2.0 + r - 4.0 * r * a2;
  if (std::abs(den1) < 1e-12 * std::max(2.0, std::abs(r)))
    throw domain_error("sum_rule_exact: pole at the critical coupling rho_c(abar)");
  switch (order) {
    case 1:
      return (4.0 + r - 16.0 * r * a4) / (6.0 * den1);
    case 2:
      return (32.0 + r * r * (1.0 + 16.0 * a2 - 160.0 * a4 + 256.0 * a6 + 256.0 * a8) +
              r * (8.0 + 16.0 * a2 * (6.0 - 40.0 * a2 + 32.0 * a4))) /
             (180.0 * den1 * den1);
    case 3:
      return (256.0 + r * (78.0 + 1440.0 * a2 - 9408.0 * a4 + 10752.0 * a6 - 4608.0 * a8) +
              r * r * (12.0 + 480.0 * a2 - 3456.0 * a4 + 27648.0 * a8 - 24576.0 * a10) +
              r * r * r *
                  (1.0 + 48.0 * a2 - 432.0 * a4 + 6912.0 * a8 - 12288.0 * a10 - 4096.0 * a12)) /
             (3780.0 * den1 * den1 * den1);
    case 4: {
      const double w = 4.0 * a2 - 1.0;  // -(1 - 4 abar^2)
      const double num =
          6144.0 +
          64.0 * r * (37.0 + 756.0 * a2 - 4960.0 * a4 + 6272.0 * a6 - 3840.0 * a8 + 1024.0 * a10) +
          16.0 * r * r * w * w * (27.0 + 1600.0 * a2 + 4704.0 * a4 - 10752.0 * a6 + 5888.0 * a8) +
          48.0 * r * r * r * w * w * w * (-1.0 - 96.0 * a2 - 672.0 * a4 + 768.0 * a8) +
          3.0 * r * r * r * r * w * w * w * w *
              (1.0 + 112.0 * a2 + 1120.0 * a4 + 1792.0 * a6 + 256.0 * a8);
      return num / (226800.0 * den1 * den1 * den1 * den1);
    }
    default:
      throw std::invalid_argument("sum_rule_exact: order must be 1..4");
  }
}

// --- Transcendental spectrum ------------------------------------------------

// LHS of the eigenvalue condition as printed, regular at E = 0 and continued
// to negative energies (bound state) through the hyperbolic branch.
inline double spectrum_characteristic(double Etilde, const SingleImpurity& cfg) {
  const double u = 2.0 * cfg.abar;
  if (Etilde == 0.0) return 1.0 + 0.5 * cfg.rho * (1.0 - u * u);
  if (Etilde > 0) {
    const double k = std::sqrt(2.0 * Etilde);
    return cfg.rho * (std::cos(u * k) - std::cos(k)) / (k * k) + std::sin(k) / k;
  }
  const double q = std::sqrt(-2.0 * Etilde);
  return cfg.rho * (std::cosh(q) - std::cosh(u * q)) / (q * q) + std::sinh(q) / q;
}

// Solved low eigenvalues plus the asymptotic tail model parameters.
struct SpectrumApproximation {
  std::vector<double> roots;  // lowest `count` eigenvalues, increasing
  int asymptotic_order = 3;   // number of c_j coefficients used in the tail
  int tail_start = 0;         // levels beyond this index come from the tail
};

// Asymptotic eigenvalue coefficients: E_n ~ n^2 pi^2/2 + sum_j c_j(n) rho^j.
inline double asymptotic_cj(int j, int n, double abar) {
  if (n < 1) throw std::invalid_argument("asymptotic_cj: n >= 1");
  const double sgn = (n % 2 == 0) ? 1.0 : -1.0;  // (-1)^n
  const double np = n * pi;
  const double c2a = std::cos(2.0 * n * pi * abar);
  const double c4a = std::cos(4.0 * n * pi * abar);
  const double c6a = std::cos(6.0 * n * pi * abar);
  const double s2a = std::sin(2.0 * n * pi * abar);
  const double s4a = std::sin(4.0 * n * pi * abar);
  const double s6a = std::sin(6.0 * n * pi * abar);
  switch (j) {
    case 1:
      return 1.0 - sgn * c2a;
    case 2:
      return -3.0 / (4.0 * np * np) + sgn * c2a / (np * np) - c4a / (4.0 * np * np) +
             2.0 * sgn * abar * s2a / np - abar * s4a / np;
    case 3: {
      const double np2 = np * np, np3 = np2 * np, np4 = np2 * np2;
      return 5.0 / (2.0 * np4) - 1.0 / (3.0 * np2) +
             sgn * c2a * (-30.0 + np2 * (3.0 + 20.0 * abar * abar)) / (8.0 * np4) -
             c4a * (-3.0 + 8.0 * np2 * abar * abar) / (2.0 * np4) +
             sgn * c6a * (-6.0 + np2 * (-1.0 + 36.0 * abar * abar)) / (24.0 * np4) -
             5.0 * sgn * abar * s2a / np3 + 4.0 * abar * s4a / np3 - sgn * abar * s6a / np3;
    }
    default:
      throw std::invalid_argument("asymptotic_cj: j must be 1..3");
  }
}

namespace detail {

// F(k) = rho (cos(2 abar k) - cos k) + k sin k; roots k_n give E_n = k^2/2.
template <class Real>
Real spectrum_char_k(Real k, Real rho, Real u) {
  return rho * (std::cos(u * k) - std::cos(k)) + k * std::sin(k);
}

template <class Real>
Real spectrum_char_k_deriv(Real k, Real rho, Real u) {
  return rho * (-u * std::sin(u * k) + std::sin(k)) + std::sin(k) + k * std::cos(k);
}

inline double polish_root(double k0, double rho, double u) {
  long double k = k0;
  for (int it = 0; it < 4; ++it) {
    const long double f = spectrum_char_k<long double>(k, rho, u);
    const long double df = spectrum_char_k_deriv<long double>(k, rho, u);
    if (df == 0.0L) break;
    const long double step = f / df;
    k -= step;
    if (fabsl(step) < 1e-18L * k) break;
  }
  return static_cast<double>(k);
}

}  // namespace detail

// Lowest `count` solutions of the transcendental eigenvalue condition.
// For rho < rho_c the single bound state appears as a negative first entry.
inline SpectrumApproximation solve_spectrum(const SingleImpurity& cfg, int count,
                                            double precision = 1e-13) {
  if (count < 1) throw std::invalid_argument("solve_spectrum: count >= 1");
  SpectrumApproximation out;
  out.tail_start = count;
  out.roots.reserve(count);
  const UnperturbedBasis box = box1d();

  if (cfg.rho == 0.0) {
    for (int n = 1; n <= count; ++n) out.roots.push_back(box.eigenvalue(n));
    return out;
  }

  const double rho_c = critical_coupling(cfg.abar);
  const double at_zero = 1.0 + 0.5 * cfg.rho * (1.0 - 4.0 * cfg.abar * cfg.abar);
  if (std::abs(at_zero) < 1e-14)
    throw domain_error("solve_spectrum: zero-energy state exactly at the critical coupling");

  const double u = 2.0 * cfg.abar;
  std::vector<double> ks;  // positive roots in k = sqrt(2 E)

  // bound state for rho below the critical coupling
  if (cfg.rho < rho_c) {
    auto fb = [&](double q) {
      return cfg.rho * (std::cosh(q) - std::cosh(u * q)) + q * std::sinh(q);
    };
    double qlo = 1e-8, qhi = 1.0;
    while (fb(qhi) < 0.0) qhi *= 2.0;
    const double q = num::brent_root(fb, qlo, qhi, precision);
    out.roots.push_back(-0.5 * q * q);
  }

  auto F = [&](double k) { return detail::spectrum_char_k(k, cfg.rho, u); };
  auto moved = [&](int n) {
    // phi_n(abar)^2 = 1 - (-1)^n cos(2 n pi abar)
    const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    return 1.0 - sgn * std::cos(2.0 * n * pi * cfg.abar) > 1e-13;
  };

  const int max_interval = count + 8;
  for (int j = 0; j <= max_interval && static_cast<int>(ks.size()) < count; ++j) {
    if (j >= 1 && !moved(j)) ks.push_back(j * pi);  // state untouched by the delta
    double a = j * pi, b = (j + 1) * pi;
    // inset endpoints that are themselves roots (unmoved states, and k = 0)
    const double inset = 1e-7;
    if (j == 0 || !moved(j)) a += inset;
    if (!moved(j + 1)) b -= inset;
    const double fa = F(a);
    const double fb = F(b);
    if (fa == 0.0) {
      ks.push_back(a);
      continue;
    }
    if (fa * fb < 0.0) {
      double k = num::brent_root(F, a, b, fa, fb, precision);
      ks.push_back(detail::polish_root(k, cfg.rho, u));
    } else {
      // guard against a missed pair of roots: coarse scan
      const int scan = 32;
      double xp = a, fp = fa;
      for (int i = 1; i <= scan; ++i) {
        const double x = a + (b - a) * i / scan;
        const double fx = (i == scan) ? fb : F(x);
        if (fp * fx < 0.0) {
          double k = num::brent_root(F, xp, x, fp, fx, precision);
          ks.push_back(detail::polish_root(k, cfg.rho, u));
        }
        xp = x;
        fp = fx;
      }
    }
  }

  std::sort(ks.begin(), ks.end());
  for (double k : ks) {
    if (static_cast<int>(out.roots.size()) >= count) break;
    out.roots.push_back(0.5 * k * k);
  }
  if (static_cast<int>(out.roots.size()) < count)
    throw convergence_error("solve_spectrum: root bracketing failed below k = " +
                            std::to_string((max_interval + 1) * pi) + " (found " +
                            std::to_string(out.roots.size()) + " of " + std::to_string(count) +
                            ")");
  return out;
}

// Zbar(s) = sum over solved levels + asymptotic tail with integral closure.
inline double tail_completed_sum(const RationalOrder& order, const SpectrumApproximation& spec,
                                 const SingleImpurity& cfg) {
  if (spec.roots.empty()) throw std::invalid_argument("tail_completed_sum: empty spectrum");
  const double s = order.value();
  num::KahanSum<long double> acc;
  for (double e : spec.roots) {
    if (e <= 0.0 && !order.is_integer())
      throw domain_error("tail_completed_sum: negative eigenvalue with non-integer order");
    if (order.is_integer()) {
      long double p = 1.0L;
      for (long i = 0; i < order.numerator(); ++i) p *= e;
      acc.add(1.0L / p);
    } else {
      acc.add(powl(static_cast<long double>(e), -static_cast<long double>(s)));
    }
  }
  // tail: E_n ~ n^2 pi^2/2 + c1 rho + c2 rho^2 + c3 rho^3 beyond tail_start
  const long N = spec.tail_start;
  const double r = cfg.rho;
  auto easym = [&](long n) {
    double e = 0.5 * double(n) * n * pi * pi;
    double rp = r;
    for (int j = 1; j <= spec.asymptotic_order; ++j) {
      e += asymptotic_cj(j, static_cast<int>(n), cfg.abar) * rp;
      rp *= r;
    }
    return e;
  };
  const double lead_scale = std::pow(2.0 / (pi * pi), s);
  num::KahanSum<long double> diff;
  for (long n = N + 1; n <= N + 400000; ++n) {
    const double lead = std::pow(0.5 * double(n) * n * pi * pi, -s);
    const double term = std::pow(easym(n), -s) - lead;
    diff.add(term);
    if (std::abs(term) < 1e-22 && n > N + 64) break;
  }
  acc.add(diff.value());
  acc.add(lead_scale * num::power_tail(2.0 * s, N + 1).value);
  return static_cast<double>(acc.value());
}

// --- Shifted sum rule and the derivative trick -------------------------------

namespace detail {

// Zbar_gamma(1) = sum_n 1/(E_n + gammabar) assembled from the hyperbolic box
// Green's function and the exact single-impurity closure; valid for either
// sign of gammabar away from poles, with a series branch across gammabar = 0.
template <class Real>
Real shifted_sum_rule_impl(Real gammabar, Real rho, Real abar) {
  const Real w = 2 * gammabar;  // c^2
  const Real u = 2 * abar;
  const Real A = box_resolvent_trace_w(w);

  Real g0aa, B;
  if (std::abs(w) < Real(0.25L)) {
    // sinh(c)/c and the I(c)/c^4 bracket as series in w
    Real S = 0, t = 1;
    for (int k = 0; k <= 14; ++k) {
      S += t;
      t *= w / Real((2 * k + 2) * (2 * k + 3));
    }
    Real num_g = 0, wp = 1;  // sum_{k>=1} w^{k-1} (1 - u^{2k})/(2k)!
    Real fact = 2, upow = u * u;
    for (int k = 1; k <= 15; ++k) {
      num_g += wp * (1 - upow) / fact;
      wp *= w;
      upow *= u * u;
      fact *= Real((2 * k + 1) * (2 * k + 2));
    }
    g0aa = num_g / S;
    // i_k coefficients of I(c) = sum_{k>=2} i_k w^k (leading orders vanish)
    Real bnum = 0, wp2 = 1;
    for (int k = 2; k <= 16; ++k) {
      Real f2k = 1, f2k1 = 1;  // (2k)!, (2k+1)!
      for (int m = 2; m <= 2 * k; ++m) f2k *= m;
      f2k1 = f2k * (2 * k + 1);
      const Real term_sinh2 = std::pow(Real(4), k) / f2k1;
      const Real term_cosh =
          (1 - u * u) * (std::pow(1 + u, 2 * k - 1) + std::pow(1 - u, 2 * k - 1)) / (2 * f2k);
      Real term_cross = 0;  // sum_{j+l=k} u^{2l} / ((2j+1)! (2l)!)
      for (int l = 0; l <= k; ++l) {
        const int j = k - l;
        Real fj = 1, fl = 1;
        for (int m = 2; m <= 2 * j + 1; ++m) fj *= m;
        for (int m = 2; m <= 2 * l; ++m) fl *= m;
        term_cross += std::pow(u, 2 * l) / (fj * fl);
      }
      bnum += (term_sinh2 - term_cosh - term_cross) * wp2;
      wp2 *= w;
    }
    B = bnum / (S * S);
  } else if (w > 0) {
    const Real c = std::sqrt(w);
    const Real sh = std::sinh(c);
    g0aa = (std::cosh(c) - std::cosh(u * c)) / (c * sh);
    const Real I = 1 + std::sinh(2 * c) / (2 * c) - (Real(0.5) - abar) * std::cosh(c * (1 + u)) -
                   (Real(0.5) + abar) * std::cosh(c * (1 - u)) - sh * std::cosh(u * c) / c;
    B = I / (w * sh * sh);
  } else {
    const Real k = std::sqrt(-w);
    const Real sk = std::sin(k);
    if (std::abs(sk) < Real(1e-13))
      throw domain_error("shifted_sum_rule: gammabar at a pole of the box resolvent");
    g0aa = (std::cos(u * k) - std::cos(k)) / (k * sk);
    const Real I = 1 + std::sin(2 * k) / (2 * k) - (Real(0.5) - abar) * std::cos(k * (1 + u)) -
                   (Real(0.5) + abar) * std::cos(k * (1 - u)) - sk * std::cos(u * k) / k;
    B = I / (k * k * sk * sk);
  }

  const Real den = 1 + rho * g0aa;
  if (std::abs(den) < Real(1e-13) * std::max(Real(1), std::abs(rho * g0aa)))
    throw domain_error("shifted_sum_rule: gammabar at a pole (gammabar = -E_n)");
  return A - rho * B / den;
}

}  // namespace detail

// Sum_n 1/(E_n + gammabar) for the single impurity, exact to all orders.
inline double shifted_sum_rule(double gammabar, const SingleImpurity& cfg) {
  return detail::shifted_sum_rule_impl<double>(gammabar, cfg.rho, cfg.abar);
}

// Zbar(j) = ((-1)^{j-1}/(j-1)!) d^{j-1}/dgammabar^{j-1} Zbar_gamma(1) at 0,
// by central differences with Richardson extrapolation in extended precision.
inline double derivative_sum_rules(int j, const SingleImpurity& cfg) {
  if (j < 2 || j > 4) throw std::invalid_argument("derivative_sum_rules: j must be 2..4");
  const long double rho = cfg.rho, abar = cfg.abar;
  auto f = [&](long double g) { return detail::shifted_sum_rule_impl<long double>(g, rho, abar); };
  const int m = j - 1;
  const long double deriv = num::richardson_derivative(f, m, 1e-3L, 4);
  long double fact = 1;
  for (int i = 2; i < j; ++i) fact *= i;
  const long double sign = (j % 2 == 0) ? -1.0L : 1.0L;  // (-1)^{j-1}
  return static_cast<double>(sign * deriv / fact);
}

// --- Two impurities ----------------------------------------------------------

inline double green_double_delta(double x, double y, const DoubleImpurity& cfg) {
  if (cfg.abar == cfg.bbar)
    return green_single_delta(x, y, SingleImpurity(cfg.rho + cfg.mu, cfg.abar));
  const double gaa = green0_box(cfg.abar, cfg.abar);
  const double gbb = green0_box(cfg.bbar, cfg.bbar);
  const double gab = green0_box(cfg.abar, cfg.bbar);
  const double det = (1.0 + cfg.rho * gaa) * (1.0 + cfg.mu * gbb) - cfg.mu * cfg.rho * gab * gab;
  if (std::abs(det) < 1e-12 * std::max(1.0, std::abs(cfg.mu * cfg.rho * gab * gab)))
    throw domain_error("green_double_delta: singular denominator (critical coupling pair)");
  const double ga_x = green0_box(x, cfg.abar), ga_y = green0_box(cfg.abar, y);
  const double gb_x = green0_box(x, cfg.bbar), gb_y = green0_box(cfg.bbar, y);
  const double brace = cfg.rho * (1.0 + cfg.mu * gbb) * ga_x * ga_y +
                       cfg.mu * (1.0 + cfg.rho * gaa) * gb_x * gb_y -
                       cfg.mu * cfg.rho * gab * (ga_x * gb_y + gb_x * ga_y);
  return green0_box(x, y) - brace / det;
}

namespace detail {

inline double double_Z1_numerator(double a, double b, double rho, double mu) {
  const double a2 = a * a, b2 = b * b;
  return 4.0 + rho * (1.0 - 16.0 * a2 * a2) + mu * (1.0 - 16.0 * b2 * b2) -
         2.0 * mu * rho * (-1.0 + 2.0 * a) * (a - b) * (1.0 + 2.0 * b) *
             (1.0 + 4.0 * (a2 + b2 - a * b) + 2.0 * (b - a));
}

inline double double_Z1_denominator_branch(double a, double b, double rho, double mu) {
  return 12.0 + 6.0 * rho * (1.0 - 4.0 * a * a) + 6.0 * mu * (1.0 - 4.0 * b * b) -
         12.0 * mu * rho * (-1.0 + 2.0 * a) * (a - b) * (1.0 + 2.0 * b);
}

}  // namespace detail

// Denominator polynomial of the two-impurity Zbar(1) (active theta branch);
// its roots in the coupling are the critical pairs.
inline double double_Z1_denominator(const DoubleImpurity& cfg) {
  if (cfg.abar == cfg.bbar)
    return 6.0 * (2.0 + (cfg.rho + cfg.mu) * (1.0 - 4.0 * cfg.abar * cfg.abar));
  if (cfg.abar > cfg.bbar)
    return detail::double_Z1_denominator_branch(cfg.abar, cfg.bbar, cfg.rho, cfg.mu);
  return detail::double_Z1_denominator_branch(cfg.bbar, cfg.abar, cfg.mu, cfg.rho);
}

// Zbar(1) for two impurities, exact to all orders.
inline double sum_rule_double_Z1(const DoubleImpurity& cfg) {
  if (cfg.abar == cfg.bbar)
    return sum_rule_exact(1, SingleImpurity(cfg.rho + cfg.mu, cfg.abar));
  double a = cfg.abar, b = cfg.bbar, rho = cfg.rho, mu = cfg.mu;
  const char* branch = "F(abar, bbar, rho, mu)";
  if (a < b) {
    std::swap(a, b);
    std::swap(rho, mu);
    branch = "F(bbar, abar, mu, rho)";
  }
  const double den = detail::double_Z1_denominator_branch(a, b, rho, mu);
  if (std::abs(den) < 1e-10 * std::max({12.0, std::abs(rho), std::abs(mu), std::abs(mu * rho)}))
    throw domain_error(std::string("sum_rule_double_Z1: pole of branch ") + branch);
  return detail::double_Z1_numerator(a, b, rho, mu) / den;
}

}  // namespace specsum
