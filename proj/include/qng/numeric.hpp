#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace qng {

std::vector<double> linspace(double lo, double hi, std::size_t n);
std::vector<double> logspace(double lo, double hi, std::size_t n);

/// e^z - 1 without cancellation for small |z|.
std::complex<double> cexpm1(std::complex<double> z);

/// 1 - e^{-k}(1 + k), accurate for small |k|.
double poisson_tail2(double k);
std::complex<double> poisson_tail2(std::complex<double> k);

/// Local maximum of f on [lo, hi] around an interior grid point `mid` with
/// f(mid) >= f(lo), f(hi). Brent's method (GSL) to relative tolerance rel_tol.
/// Returns (argmax, max).
std::pair<double, double> brent_maximize(const std::function<double(double)>& f,
                                         double lo, double mid, double hi,
                                         double rel_tol);

/// Bisection for a sign change of a predicate that is true at lo and false
/// at hi. Returns the last point where the predicate holds. Midpoints are
/// geometric when `geometric` is set (lo > 0 required).
double bisect_last_true(const std::function<bool(double)>& pred, double lo,
                        double hi, bool geometric, double rel_tol);

/// Golden-section maximization of a unimodal f on [lo, hi]. Templated so that
/// callers can evaluate in extended precision.
template <class T, class F>
T golden_section_maximize(F&& f, T lo, T hi, T abs_tol) {
  const T inv_phi = (std::sqrt(T(5)) - T(1)) / T(2);
  T x1 = hi - inv_phi * (hi - lo);
  T x2 = lo + inv_phi * (hi - lo);
  T f1 = f(x1);
  T f2 = f(x2);
  while (hi - lo > abs_tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
    if (!(x1 < x2)) break;
  }
  return (lo + hi) / T(2);
}

/// Gauss-Laguerre rule for the weight e^{-s} on [0, inf). Weights sum to 1.
/// Tables are built once per size and shared.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const QuadratureRule& gauss_laguerre(int n);

/// Unconstrained Nelder-Mead minimization (GSL nmsimplex2).
/// Returns the minimizer; `fmin` receives the minimum.
std::vector<double> nelder_mead_minimize(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> start, std::vector<double> step, double size_tol,
    int max_iter, double* fmin);

}  // namespace qng
