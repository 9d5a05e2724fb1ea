#pragma once

// q-series primitives over a base q = e^tau with Re(tau) < 0: truncated
// q^2-shifted factorials and the renormalized Jacobi theta function
//   theta(z) = (z; q^2)_inf (q^2 z^{-1}; q^2)_inf,
// which satisfies theta(q^2 z) = -z^{-1} theta(z).

#include <cmath>
#include <complex>
#include <functional>

#include "errors.hpp"

namespace bqkz {

using Complex = std::complex<double>;

constexpr Complex I_UNIT{0.0, 1.0};
constexpr double PI = 3.14159265358979323846;

// Base point of all q^2-shifted factorials. Re(tau) < 0 so |q| < 1.
struct QBase {
  Complex tau;
  Complex q;    // e^tau
  Complex qsq;  // e^{2 tau}

  explicit QBase(Complex tau_in)
      : tau(tau_in), q(std::exp(tau_in)), qsq(std::exp(2.0 * tau_in)) {
    if (!(tau.real() < 0.0))
      throw InvalidBase("QBase: Re(tau) must be negative");
  }
};

struct SeriesTolerance {
  double rel_tol = 1e-15;
  int max_terms = 500;
};

// (z; q^2)_inf = prod_{m>=0} (1 - z q^{2m}), truncated once |z q^{2m}| drops
// below rel_tol (and at least three factors were taken); the geometric tail
// then satisfies |tail - 1| <= |z q^{2m}| / (1 - |q^2|), reported through
// tail_bound when requested.
inline Complex qpoch(Complex z, const QBase& base, const SeriesTolerance& tol = {},
                     double* tail_bound = nullptr) {
  const double aq = std::abs(base.qsq);
  if (aq >= 1.0) throw InvalidBase("qpoch: |q^2| >= 1");
  Complex prod = 1.0;
  Complex zq = z;
  for (int m = 0; m < tol.max_terms; ++m) {
    prod *= (1.0 - zq);
    zq *= base.qsq;
    if (m >= 2 && std::abs(zq) < tol.rel_tol) {
      if (tail_bound) *tail_bound = std::abs(zq) / (1.0 - aq);
      return prod;
    }
  }
  throw TruncationNotConverged("qpoch: max_terms reached before |z q^{2m}| < rel_tol");
}

inline Complex theta(Complex z, const QBase& base, const SeriesTolerance& tol = {}) {
  if (z == 0.0) throw ZeroArgument("theta: z = 0");
  return qpoch(z, base, tol) * qpoch(base.qsq / z, base, tol);
}

// a(+x) a(-x), the +- contraction used throughout the weight-function formulas.
inline Complex pm_product(const std::function<Complex(Complex)>& f, Complex x) {
  return f(x) * f(-x);
}

}  // namespace bqkz
