#include "qng/numeric.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_min.h>
#include <gsl/gsl_multimin.h>

#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "qng/errors.hpp"
#include "qng/parallel.hpp"

namespace qng {

int thread_count() {
  int n = omp_get_max_threads();
  if (const char* env = std::getenv("QNG_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0 && v < n) n = static_cast<int>(v);
  }
  return n < 1 ? 1 : n;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n < 2) return {lo};
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  out.back() = hi;
  return out;
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > 0.0)) throw DomainError("logspace needs positive bounds");
  auto e = linspace(std::log(lo), std::log(hi), n);
  for (auto& v : e) v = std::exp(v);
  e.front() = lo;
  e.back() = hi;
  return e;
}

std::complex<double> cexpm1(std::complex<double> z) {
  const double x = z.real();
  const double y = z.imag();
  const double s = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

namespace {

template <class T>
T tail2_impl(T k) {
  if (std::abs(k) < 0.5) {
    // 1 - e^{-k}(1+k) = sum_{n>=2} (-1)^n (n-1) k^n / n!
    T term = k * k / 2.0;
    T sum = 0.0;
    for (int n = 2; n < 40; ++n) {
      T add = static_cast<double>(n - 1) * term;
      sum += (n % 2 == 0) ? add : -add;
      if (std::abs(add) <= 1e-18 * std::abs(sum)) break;
      term *= k / static_cast<double>(n + 1);
    }
    return sum;
  }
  return T(1.0) - std::exp(-k) * (T(1.0) + k);
}

}  // namespace

double poisson_tail2(double k) { return tail2_impl(k); }
std::complex<double> poisson_tail2(std::complex<double> k) { return tail2_impl(k); }

namespace {

struct GslErrorsOff {
  GslErrorsOff() { gsl_set_error_handler_off(); }
};
const GslErrorsOff gsl_errors_off;

double gsl_trampoline(double x, void* p) {
  return -(*static_cast<const std::function<double(double)>*>(p))(x);
}

}  // namespace

std::pair<double, double> brent_maximize(const std::function<double(double)>& f,
                                         double lo, double mid, double hi,
                                         double rel_tol) {
  gsl_function fn{&gsl_trampoline, const_cast<std::function<double(double)>*>(&f)};
  std::unique_ptr<gsl_min_fminimizer, decltype(&gsl_min_fminimizer_free)> s(
      gsl_min_fminimizer_alloc(gsl_min_fminimizer_brent), &gsl_min_fminimizer_free);
  double fm = f(mid);
  if (gsl_min_fminimizer_set_with_values(s.get(), &fn, mid, -fm, lo, -f(lo), hi, -f(hi)) !=
      GSL_SUCCESS)
    return {mid, fm};
  for (int it = 0; it < 200; ++it) {
    if (gsl_min_fminimizer_iterate(s.get()) != GSL_SUCCESS) break;
    double a = gsl_min_fminimizer_x_lower(s.get());
    double b = gsl_min_fminimizer_x_upper(s.get());
    if (gsl_min_test_interval(a, b, 0.0, rel_tol) == GSL_SUCCESS) break;
  }
  return {gsl_min_fminimizer_x_minimum(s.get()), -gsl_min_fminimizer_f_minimum(s.get())};
}

double bisect_last_true(const std::function<bool(double)>& pred, double lo, double hi,
                        bool geometric, double rel_tol) {
  for (int it = 0; it < 2000; ++it) {
    if (geometric ? hi / lo - 1.0 <= rel_tol : hi - lo <= rel_tol * std::abs(hi)) break;
    double m = geometric ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (m <= lo || m >= hi) break;
    (pred(m) ? lo : hi) = m;
  }
  return lo;
}

const QuadratureRule& gauss_laguerre(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) {
    gsl_integration_fixed_workspace* w =
        gsl_integration_fixed_alloc(gsl_integration_fixed_laguerre, n, 0.0, 1.0, 0.0, 0.0);
    if (!w) throw ConvergenceError("cannot build Gauss-Laguerre rule");
    auto rule = std::make_unique<QuadratureRule>();
    const double* x = gsl_integration_fixed_nodes(w);
    const double* wt = gsl_integration_fixed_weights(w);
    rule->nodes.assign(x, x + n);
    rule->weights.assign(wt, wt + n);
    gsl_integration_fixed_free(w);
    slot = std::move(rule);
  }
  return *slot;
}

namespace {

struct NmContext {
  const std::function<double(const std::vector<double>&)>* f;
  std::size_t dim;
};

double nm_trampoline(const gsl_vector* v, void* p) {
  auto* ctx = static_cast<NmContext*>(p);
  std::vector<double> x(ctx->dim);
  for (std::size_t i = 0; i < ctx->dim; ++i) x[i] = gsl_vector_get(v, i);
  return (*ctx->f)(x);
}

}  // namespace

std::vector<double> nelder_mead_minimize(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> start,
    std::vector<double> step, double size_tol, int max_iter, double* fmin) {
  const std::size_t n = start.size();
  NmContext ctx{&f, n};
  gsl_multimin_function fn{&nm_trampoline, n, &ctx};
  gsl_vector* x = gsl_vector_alloc(n);
  gsl_vector* ss = gsl_vector_alloc(n);
  for (std::size_t i = 0; i < n; ++i) {
    gsl_vector_set(x, i, start[i]);
    gsl_vector_set(ss, i, step[i]);
  }
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
  gsl_multimin_fminimizer_set(s, &fn, x, ss);
  for (int it = 0; it < max_iter; ++it) {
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), size_tol) == GSL_SUCCESS) break;
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = gsl_vector_get(s->x, i);
  if (fmin) *fmin = s->fval;
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(x);
  gsl_vector_free(ss);
  return out;
}

}  // namespace qng
