#pragma once

// Domain types shared by every module: rational sum-rule orders, the
// unperturbed reference problems (1D box, harmonic oscillator) in the
// dimensionless convention hbar = M = 1 with a unit box, and their
// spectral zeta values.

#include <cmath>
#include <numeric>
#include <optional>
#include <string>

#include "specsum/numeric.hpp"

namespace specsum {

// Exponent s = p/q of a sum rule Z(s) = sum_n E_n^{-s}, stored reduced.
class RationalOrder {
 public:
  RationalOrder(long numerator, long denominator = 1) {
    if (denominator == 0) throw std::invalid_argument("RationalOrder: zero denominator");
    if (denominator < 0) {
      numerator = -numerator;
      denominator = -denominator;
    }
    const long g = std::gcd(std::abs(numerator), denominator);
    num_ = numerator / g;
    den_ = denominator / g;
    if (num_ <= 0) throw domain_error("RationalOrder: order must be positive");
  }

  long numerator() const { return num_; }
  long denominator() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_integer() const { return den_ == 1; }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  static RationalOrder parse(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return RationalOrder(std::stol(text));
    return RationalOrder(std::stol(text.substr(0, slash)), std::stol(text.substr(slash + 1)));
  }

 private:
  long num_ = 1;
  long den_ = 1;
};

enum class BasisKind { Box1D, SHO1D };

// Eigenvalues and eigenfunctions of the solvable reference Hamiltonian.
// Box1D: eps_n = n^2 pi^2 / 2, n = 1, 2, ... on y in [-1/2, 1/2].
// SHO1D: eps_n = n + 1/2, n = 0, 1, ...
class UnperturbedBasis {
 public:
  explicit UnperturbedBasis(BasisKind kind) : kind_(kind) {}

  BasisKind kind() const { return kind_; }
  int first_index() const { return kind_ == BasisKind::Box1D ? 1 : 0; }

  double eigenvalue(int n) const {
    check_index(n);
    if (kind_ == BasisKind::Box1D) return 0.5 * n * n * pi * pi;
    return n + 0.5;
  }

  double eigenfunction(int n, double y) const {
    check_index(n);
    if (kind_ == BasisKind::Box1D) {
      if (y < -0.5 || y > 0.5) return 0.0;
      return std::sqrt(2.0) * std::sin(n * pi * (y + 0.5));
    }
    // normalized Hermite-function recurrence
    double h0 = std::pow(pi, -0.25) * std::exp(-0.5 * y * y);
    if (n == 0) return h0;
    double h1 = std::sqrt(2.0) * y * h0;
    for (int m = 1; m < n; ++m) {
      const double h2 = std::sqrt(2.0 / (m + 1)) * y * h1 - std::sqrt(double(m) / (m + 1)) * h0;
      h0 = h1;
      h1 = h2;
    }
    return h1;
  }

  // Convergence threshold of Z^(0)(s) = sum eps_n^{-s}.
  double zeta_threshold() const { return kind_ == BasisKind::Box1D ? 0.5 : 1.0; }

 private:
  void check_index(int n) const {
    if (n < first_index()) throw std::invalid_argument("UnperturbedBasis: index below first state");
  }
  BasisKind kind_;
};

inline UnperturbedBasis box1d() { return UnperturbedBasis(BasisKind::Box1D); }
inline UnperturbedBasis sho1d() { return UnperturbedBasis(BasisKind::SHO1D); }

// Z^(0)(s) = sum_n eps_n^{-s} with a truncation bound (zero for closed forms).
inline ValueWithBound zeta_unperturbed_with_bound(const UnperturbedBasis& basis, double s) {
  if (s <= basis.zeta_threshold())
    throw domain_error("zeta_unperturbed: series diverges at order s = " + std::to_string(s) +
                       " (requires s > " + std::to_string(basis.zeta_threshold()) + ")");
  if (basis.kind() == BasisKind::Box1D) {
    // eps_n = n^2 pi^2/2 -> (2/pi^2)^s zeta(2s)
    const double scale = std::pow(2.0 / (pi * pi), s);
    const ValueWithBound z = num::power_tail(2.0 * s, 1);
    return {scale * z.value, scale * z.bound};
  }
  // SHO: sum_{n>=0} (n+1/2)^{-s} summed directly with an Euler-Maclaurin tail
  const long head = 64;
  num::KahanSum<long double> acc;
  for (long n = 0; n < head; ++n) acc.add(powl(n + 0.5L, -static_cast<long double>(s)));
  const ValueWithBound tail = num::odd_power_tail(s, head);  // sum (2n+1)^{-s}, n>=head
  const double scale = std::pow(2.0, s);
  return {static_cast<double>(acc.value()) + scale * tail.value, scale * tail.bound};
}

inline double zeta_unperturbed(const UnperturbedBasis& basis, double s) {
  return zeta_unperturbed_with_bound(basis, s).value;
}

inline double zeta_unperturbed(const UnperturbedBasis& basis, const RationalOrder& s) {
  return zeta_unperturbed_with_bound(basis, s.value()).value;
}

// Dimensional prefactor record: physical Z(s) = Gamma^s * Zbar(s) with
// Gamma = M L^2 / hbar^2 (inverse energy scale of the unit problem).
struct ScaleFactor {
  double s = 1.0;
  std::string description = "Gamma^s with Gamma = M L^2 / hbar^2";
};

// Value of Z(s) with its per-order perturbative terms at bookkeeping
// coupling lambda: total = z0 + lambda z1 + lambda^2 z2.
struct SumRuleEvaluation {
  RationalOrder s{1};
  double z0 = 0.0;
  double z1 = 0.0;
  double z2 = 0.0;
  double lambda = 1.0;
  std::optional<double> pade;
  double truncation_error = 0.0;
  ScaleFactor scale_factor;

  double total() const { return z0 + lambda * z1 + lambda * lambda * z2; }
};

// Resolvent trace of the unit box, sum_n 1/(eps_n + gammabar), as a function
// of w = 2*gammabar: equals coth(c)/c - 1/c^2 at c = sqrt(w) for w > 0,
// -cot(k)/k + 1/k^2 at k = sqrt(-w) for w < 0, with a Bernoulli series
// across the removable point w = 0.
template <class Real>
Real box_resolvent_trace_w(Real w) {
  const Real wc = Real(0.25L);
  if (w > wc) {
    const Real c = std::sqrt(w);
    return Real(1) / (std::tanh(c) * c) - Real(1) / w;
  }
  if (w < -wc) {
    const Real k = std::sqrt(-w);
    return -std::cos(k) / (std::sin(k) * k) - Real(1) / w;
  }
  // A(w) = sum_{k>=1} 4^k B_{2k} / (2k)! * w^{k-1}
  Real acc = 0, pw = 1, four = 4, fact = 2;
  for (std::size_t k = 1; k <= num::bernoulli2k.size(); ++k) {
    acc += four * static_cast<Real>(num::bernoulli2k[k - 1]) / fact * pw;
    pw *= w;
    four *= 4;
    fact *= (2 * k + 1) * (2 * k + 2);
  }
  return acc;
}

template <class Real>
Real box_resolvent_trace(Real gammabar) {
  return box_resolvent_trace_w(Real(2) * gammabar);
}

}  // namespace specsum
