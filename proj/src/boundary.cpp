#include "qng/boundary.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "qng/errors.hpp"
#include "qng/numeric.hpp"

namespace qng {

namespace {

constexpr double kSeriesCut = 2e-3;

// Taylor coefficients in eps = 1 - V of the boundary P_e and p_2+, orders 3..9.
constexpr std::array<double, 7> kSpadPeSeries = {
    1.0 / 16, 163.0 / 768, 403.0 / 1024, 51001.0 / 92160,
    10049.0 / 15360, 6198103.0 / 9175040, 606713627.0 / 990904320};
constexpr std::array<double, 7> kPnrdP2Series = {
    1.0 / 12, 7.0 / 32, 27.0 / 80, 235.0 / 576, 1145.0 / 2688, 4097.0 / 10240, 71111.0 / 207360};

double series(const std::array<double, 7>& c, double eps) {
  double s = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * eps + *it;
  return s * eps * eps * eps;
}

void check_control(double v, const char* name) {
  if (!(v > 0.0 && v <= 1.0))
    throw DomainError(std::string(name) + " must lie in (0, 1]");
}

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError(std::string(name) + " must lie in [0, 1]");
}

void check_range(const ThresholdPoint& p) {
  constexpr double tol = 1e-12;
  if (p.first < -tol || p.first > 1 + tol || p.second < -tol || p.second > 1 + tol)
    throw InvariantError("threshold point outside [0, 1]");
}

// A control value carried together with its complement eps = 1 - V so that
// both ends of (0, 1] keep full relative precision.
struct Ctl {
  double V;
  double eps;
  static Ctl from_v(double v) { return {v, 1.0 - v}; }
  static Ctl from_eps(double e) { return {1.0 - e, e}; }
  double log_v() const { return V < 0.5 ? std::log(V) : std::log1p(-eps); }
};

// Control parameterization shared by the grids: u in [0, 1] walks V log-spaced
// from 0.5e-12 up to 0.5, u in (1, 2] walks eps log-spaced from 0.5 down to
// 0.5e-12. u > 2 denotes V = 1.
Ctl control_from_u(double u) {
  if (u > 2.0) return {1.0, 0.0};
  if (u <= 1.0) return Ctl::from_v(0.5 * std::pow(10.0, -12.0 * (1.0 - u)));
  return Ctl::from_eps(0.5 * std::pow(10.0, -12.0 * (u - 1.0)));
}

// Log-domain values of P_0 and P_00 on the arbitrated curve.
void spad_logs(Ctl c, double& logp0, double& logp00) {
  const double V = c.V;
  const double eps = c.eps;
  logp0 = 0.5 * (c.log_v() - std::log1p(-0.25 * eps) - std::log1p(-0.75 * eps)) -
          eps * (1.0 + V) / (2.0 * V * (1.0 + 3.0 * V));
  logp00 = 0.5 * c.log_v() - std::log1p(-0.5 * eps) -
           eps * (V + 3.0) / (2.0 * V * (1.0 + 3.0 * V));
}

double spad_pe(Ctl c) {
  if (c.eps < kSeriesCut) return series(kSpadPeSeries, c.eps);
  double a, b;
  spad_logs(c, a, b);
  return std::expm1(b) - 2.0 * std::expm1(a);
}

double spad_ps(Ctl c) {
  double a, b;
  spad_logs(c, a, b);
  return -std::expm1(a);
}

double pnrd_p2(Ctl c) {
  const double eps = c.eps;
  const double t = c.V;
  if (eps < kSeriesCut) return series(kPnrdP2Series, eps);
  const double x = -eps / (2.0 * t) + std::log1p(eps * eps / ((2.0 - eps) * (2.0 - eps))) -
                   0.5 * c.log_v();
  return -std::expm1(x);
}

double pnrd_p1(Ctl c) {
  const double t = c.V;
  return 2.0 * std::exp(-c.eps / (2.0 * t)) * c.eps / (std::sqrt(t) * (1.0 + t) * (1.0 + t));
}

double monotonicity_defect(double (*second)(Ctl)) {
  double worst = 0.0;
  double prev = second(control_from_u(0.0));
  for (int i = 1; i < 10000; ++i) {
    double cur = second(i == 9999 ? Ctl{1.0, 0.0} : control_from_u(2.0 * i / 9998.0));
    worst = std::max(worst, cur - prev);
    prev = cur;
  }
  return worst;
}

void require_monotone() {
  static const bool ok = monotonicity_defect(&spad_pe) <= 0.0 &&
                         monotonicity_defect(&pnrd_p2) <= 0.0;
  if (!ok) throw InvariantError("boundary curve is not monotone in its control parameter");
}

// Solve second(c) = target for a curve decreasing in the control.
Ctl invert(double (*second)(Ctl), double target) {
  if (target < second(Ctl{0.5, 0.5})) {
    auto pred = [&](double eps) { return second(Ctl::from_eps(eps)) < target; };
    constexpr double tiny = 1e-100;
    if (!pred(tiny)) return Ctl::from_eps(tiny);
    return Ctl::from_eps(bisect_last_true(pred, tiny, 0.5, true, 1e-14));
  }
  auto pred = [&](double v) { return second(Ctl::from_v(v)) > target; };
  constexpr double tiny = 1e-300;
  if (!pred(tiny)) return Ctl::from_v(tiny);
  return Ctl::from_v(bisect_last_true(pred, tiny, 0.5, true, 1e-14));
}

}  // namespace

void GaussianPure::validate() const {
  if (!(intensity >= 0.0) || !std::isfinite(intensity))
    throw DomainError("intensity must be finite and non-negative");
  check_control(squeezing, "squeezing V");
  if (!std::isfinite(phase)) throw DomainError("phase must be finite");
}

ClickStats gaussian_click_probs(const GaussianPure& s) {
  s.validate();
  const double V = s.squeezing;
  const double I = s.intensity;
  const double c = std::cos(s.phase);
  const double sn = std::sin(s.phase);
  const double cos2 = std::cos(2.0 * s.phase);
  ClickStats out;
  const double eps = 1.0 - V;
  const double log_pref0 =
      0.5 * (std::log(V) - std::log1p(-0.25 * eps) - std::log1p(-0.75 * eps));
  const double exp0 =
      -I * (1.0 + 6.0 * V + V * V + (1.0 - V * V) * cos2) / (2.0 * (3.0 + V) * (1.0 + 3.0 * V));
  const double log_pref00 = 0.5 * std::log(V) - std::log1p(-0.5 * eps);
  const double exp00 = -I * (c * c + V * sn * sn) / (1.0 + V);
  const double a = log_pref0 + exp0;
  const double b = log_pref00 + exp00;
  out.p0 = std::exp(a);
  out.p00 = std::exp(b);
  out.ps = -std::expm1(a);
  out.pe = std::expm1(b) - 2.0 * std::expm1(a);
  return out;
}

double stationary_intensity(double V) {
  check_control(V, "V");
  return (V + 3.0) * (1.0 - V * V) / (2.0 * V * (1.0 + 3.0 * V));
}

ThresholdPoint spad_threshold(double V) {
  check_control(V, "V");
  const Ctl c = Ctl::from_v(V);
  ThresholdPoint p{V, spad_ps(c) + 0.0, spad_pe(c) + 0.0};
  check_range(p);
  return p;
}

ThresholdPoint spad_threshold_printed(double V) {
  check_control(V, "V");
  const double p0 = 4.0 * std::exp((V * V - 1.0) / (2.0 * V * (1.0 + 3.0 * V))) *
                    std::sqrt(V / (3.0 + 10.0 * V + 3.0 * V * V));
  const double p00 = 2.0 * std::exp((V - 1.0) / (2.0 * V)) * std::sqrt(V) / (1.0 + V);
  ThresholdPoint p{V, 1.0 - p0, 1.0 - 2.0 * p0 + p00};
  check_range(p);
  return p;
}

ThresholdPoint pnrd_threshold(double t) {
  check_control(t, "t");
  const Ctl c = Ctl::from_v(t);
  ThresholdPoint p{t, pnrd_p1(c) + 0.0, pnrd_p2(c) + 0.0};
  check_range(p);
  return p;
}

namespace {

template <class F>
WitnessOptimum maximize_on_controls(F&& F_u) {
  constexpr int n = 10001;
  std::vector<double> us(n + 1), fs(n + 1);
  for (int i = 0; i < n; ++i) us[i] = 2.0 * i / (n - 1);
  us[n] = 3.0;  // V = 1 exactly
  for (int i = 0; i <= n; ++i) fs[i] = F_u(us[i]);
  int best = 0;
  for (int i = 1; i <= n; ++i)
    if (fs[i] > fs[best]) best = i;
  if (best == 0 || best >= n - 1) return {fs[best], control_from_u(us[best]).V};
  auto [u, f] = brent_maximize(F_u, us[best - 1], us[best], us[best + 1], 1e-10);
  if (!(f >= fs[best])) return {fs[best], control_from_u(us[best]).V};
  return {f, control_from_u(u).V};
}

}  // namespace

WitnessOptimum witness_optimum(double a, SpadCurve curve) {
  if (!std::isfinite(a)) throw DomainError("witness weight must be finite");
  return maximize_on_controls([&](double u) {
    const Ctl c = control_from_u(u);
    if (curve == SpadCurve::Printed) {
      auto p = spad_threshold_printed(c.V);
      return p.first + a * p.second;
    }
    return spad_ps(c) + a * spad_pe(c);
  });
}

WitnessOptimum pnrd_witness_optimum(double a) {
  if (!std::isfinite(a)) throw DomainError("witness weight must be finite");
  return maximize_on_controls([&](double u) {
    const Ctl c = control_from_u(u);
    return pnrd_p1(c) + a * pnrd_p2(c);
  });
}

double witness_bound(double a) { return witness_optimum(a).value; }

double qng_margin_spad(double ps, double pe) {
  check_probability(ps, "P_s");
  check_probability(pe, "P_e");
  require_monotone();
  if (pe <= 0.0) return ps;
  if (pe >= 1.0) return ps - 1.0;
  return ps - spad_ps(invert(&spad_pe, pe));
}

double qng_margin_pnrd(double p1, double p2plus) {
  check_probability(p1, "p_1");
  check_probability(p2plus, "p_2+");
  require_monotone();
  if (p2plus <= 0.0) return p1;
  if (p2plus >= 1.0) return p1;
  return p1 - pnrd_p1(invert(&pnrd_p2, p2plus));
}

double nonclassicality_margin(double ps, double pe) { return ps * ps - pe; }

double spad_monotonicity_defect() { return monotonicity_defect(&spad_pe); }
double pnrd_monotonicity_defect() { return monotonicity_defect(&pnrd_p2); }

}  // namespace qng
