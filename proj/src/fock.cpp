#include "qng/fock.hpp"

#include <gsl/gsl_cdf.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>
#include <unsupported/Eigen/MatrixFunctions>

#include "qng/errors.hpp"
#include "qng/numeric.hpp"
#include "qng/parallel.hpp"

namespace qng::fock {

namespace {

constexpr double kInvTwoPi = 0.5 * std::numbers::inv_pi;
constexpr int kExplicitSplitLevels = 64;
constexpr int kMaxCutoff = 20000;

Mat padded(const Mat& m, int dim) {
  Mat out = Mat::Zero(dim, dim);
  const int n = std::min<int>(dim, static_cast<int>(m.rows()));
  out.topLeftCorner(n, n) = m.topLeftCorner(n, n);
  return out;
}

Mat annihilation(int dim) {
  Mat a = Mat::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

void FockMatrix::validate() const {
  if (entries.rows() != entries.cols() || entries.rows() == 0)
    throw InvariantError("density matrix must be square and non-empty");
  if ((entries - entries.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw InvariantError("density matrix is not Hermitian");
  if (std::abs(entries.trace() - cplx(1.0)) > 1e-10)
    throw InvariantError("density matrix trace differs from one");
  Eigen::SelfAdjointEigenSolver<Mat> es(entries, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw InvariantError("density matrix is not positive semidefinite");
}

FockMatrix projector(const FockVector& v) { return {v.amplitudes * v.amplitudes.adjoint()}; }

FockMatrix number_state(int n, int cutoff) {
  if (n < 0 || n > cutoff) throw DomainError("number state outside the cutoff");
  Mat m = Mat::Zero(cutoff + 1, cutoff + 1);
  m(n, n) = 1.0;
  return {m};
}

int coherent_cutoff(double alpha2) {
  int n = static_cast<int>(std::ceil(alpha2 + 10.0 * std::sqrt(alpha2 + 1.0) + 20.0));
  while (alpha2 > 0.0 && gsl_cdf_poisson_Q(static_cast<unsigned>(n), alpha2) >= 1e-14) ++n;
  return n;
}

FockVector coherent_fock(cplx alpha, int cutoff) {
  const double x = std::norm(alpha);
  if (cutoff < 0) cutoff = coherent_cutoff(x);
  if (x > 0.0 && gsl_cdf_poisson_Q(static_cast<unsigned>(cutoff), x) >= 1e-14)
    throw CutoffError("cutoff too small for coherent amplitude");
  Vec c(cutoff + 1);
  c(0) = std::exp(-0.5 * x);
  for (int n = 1; n <= cutoff; ++n) c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  return {c};
}

FockVector squeezed_displaced_fock(cplx alpha, cplx xi, int cutoff) {
  const double r = std::abs(xi);
  if (r > 3.0 + 1e-12) throw DomainError("squeezing |xi| must not exceed 3");
  const cplx phase = r > 0.0 ? xi / r : cplx(1.0);
  const double ch = std::cosh(r);
  const double sh = std::sinh(r);
  const double th = std::tanh(r);
  const int limit = cutoff < 0 ? kMaxCutoff : cutoff;
  std::vector<cplx> c;
  c.reserve(256);
  c.push_back(std::exp(-0.5 * std::norm(alpha) + 0.5 * std::conj(phase) * th * alpha * alpha) /
              std::sqrt(ch));
  double norm2 = std::norm(c[0]);
  for (int n = 0; n < limit; ++n) {
    if (cutoff < 0 && 1.0 - norm2 < 1e-12 && n > 2) break;
    const cplx prev = n > 0 ? c[n - 1] : cplx(0.0);
    const cplx next = (alpha * c[n] - phase * sh * std::sqrt(static_cast<double>(n)) * prev) /
                      (ch * std::sqrt(n + 1.0));
    c.push_back(next);
    norm2 += std::norm(next);
  }
  if (1.0 - norm2 >= 1e-12) throw CutoffError("cutoff too small for squeezed displaced state");
  Vec v(static_cast<Eigen::Index>(c.size()));
  for (std::size_t i = 0; i < c.size(); ++i) v(static_cast<Eigen::Index>(i)) = c[i];
  return {v};
}

FockVector gaussian_fock(const GaussianPure& g) {
  g.validate();
  // S(r) D(alpha)|0> has mean <a> = Re(alpha) e^{-r} + i Im(alpha) e^{r}; choose
  // alpha so that <a> = sqrt(I/2) e^{i phi}.
  const double r = -0.5 * std::log(g.squeezing);
  const double b = std::sqrt(0.5 * g.intensity);
  const cplx alpha(b * std::cos(g.phase) * std::exp(r), b * std::sin(g.phase) * std::exp(-r));
  return squeezed_displaced_fock(alpha, r);
}

FockMatrix rho_minus_fock(const HeraldedState& s, int cutoff, bool validate) {
  if (cutoff < 0)
    cutoff = coherent_cutoff(std::max(std::norm(s.alpha_e()), std::norm(s.alpha_g())));
  const Vec e = coherent_fock(s.alpha_e(), cutoff).amplitudes;
  const Vec g = coherent_fock(s.alpha_g(), cutoff).amplitudes;
  const double x = s.intensity();
  const double eta = s.eta();
  const double c = std::exp(-2.0 * (1.0 - eta) * eta * x);
  Mat rho = e * e.adjoint() + g * g.adjoint() - c * (e * g.adjoint() + g * e.adjoint());
  rho /= s.normalization();
  FockMatrix out{rho};
  if (validate) out.validate();
  return out;
}

FockVector odd_cat_fock(cplx alpha, int cutoff) {
  Vec v = coherent_fock(alpha, cutoff).amplitudes;
  for (Eigen::Index n = 0; n < v.size(); n += 2) v(n) = 0.0;
  v /= v.norm();
  return {v};
}

namespace {

// C(n, k) / 2^n for n <= kExplicitSplitLevels.
const Eigen::MatrixXd& split_weights() {
  static const Eigen::MatrixXd w = [] {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(kExplicitSplitLevels + 1, kExplicitSplitLevels + 1);
    for (int n = 0; n <= kExplicitSplitLevels; ++n)
      for (int k = 0; k <= n; ++k) t(n, k) = std::exp(log_binomial(n, k) - n * std::numbers::ln2);
    return t;
  }();
  return w;
}

}  // namespace

Eigen::MatrixXd split_photon_distribution(const Eigen::VectorXd& p) {
  const int n_max = static_cast<int>(p.size()) - 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_max + 1, n_max + 1);
  const Eigen::MatrixXd& w = split_weights();
  for (int n = 0; n <= n_max; ++n)
    for (int k = 0; k <= n; ++k) {
      const double c = n <= kExplicitSplitLevels ? w(n, k)
                                                 : std::exp(log_binomial(n, k) - n * std::numbers::ln2);
      m(k, n - k) += p(n) * c;
    }
  return m;
}

ClickStats hbt_probs_from_distribution(const Eigen::VectorXd& p) {
  const int n_max = static_cast<int>(p.size()) - 1;
  const int n_exp = std::min(n_max, kExplicitSplitLevels);
  const Eigen::MatrixXd joint = split_photon_distribution(p.head(n_exp + 1));
  ClickStats out;
  out.p00 = joint(0, 0);
  out.p0 = joint.row(0).sum();
  out.ps = joint.bottomRows(n_exp).sum();
  out.pe = joint.bottomRightCorner(n_exp, n_exp).sum();
  for (int n = n_exp + 1; n <= n_max; ++n) {
    const double h = std::ldexp(1.0, -n);
    out.p0 += p(n) * h;
    out.ps += p(n) * (1.0 - h);
    out.pe += p(n) * (1.0 - 2.0 * h);
  }
  return out;
}

ClickStats hbt_probs_fock(const FockMatrix& rho) {
  return hbt_probs_from_distribution(rho.entries.diagonal().real());
}

ClickStats hbt_probs_fock(const FockVector& psi) {
  return hbt_probs_from_distribution(psi.amplitudes.cwiseAbs2());
}

double hbt_no_click_shortcut(const FockMatrix& rho) {
  double s = 0.0;
  for (Eigen::Index n = 0; n < rho.entries.rows(); ++n)
    s += rho.entries(n, n).real() * std::ldexp(1.0, -static_cast<int>(n));
  return s;
}

FockProbs fock_probs(const FockMatrix& rho) {
  const Eigen::VectorXd d = rho.entries.diagonal().real();
  FockProbs out;
  out.p0 = d(0);
  out.p1 = d.size() > 1 ? d(1) : 0.0;
  out.p2plus = d.size() > 2 ? d.tail(d.size() - 2).sum() : 0.0;
  return out;
}

double mean_photon(const FockMatrix& rho) {
  double s = 0.0;
  for (Eigen::Index n = 1; n < rho.entries.rows(); ++n) s += n * rho.entries(n, n).real();
  return s;
}

Mat displacement_matrix(cplx beta, int cutoff, int pad) {
  const int dim = cutoff + 1 + pad;
  const Mat a = annihilation(dim);
  const Mat gen = beta * a.adjoint() - std::conj(beta) * a;
  const Mat d = gen.exp();
  return d.topLeftCorner(cutoff + 1, cutoff + 1);
}

FockMatrix displace(const FockMatrix& rho, cplx beta, int out_cutoff) {
  const int n = std::max(out_cutoff, rho.cutoff());
  const int dim = n + 1 + 20;
  const Mat a = annihilation(dim);
  const Mat d = (beta * a.adjoint() - std::conj(beta) * a).exp();
  const Mat r = padded(rho.entries, dim);
  const Mat out = d * r * d.adjoint();
  const int keep = (out_cutoff < 0 ? rho.cutoff() : out_cutoff) + 1;
  return {out.topLeftCorner(keep, keep)};
}

namespace {

double wigner_at_dim(const Mat& rho, cplx beta, int dim) {
  const Mat a = annihilation(dim);
  const Mat d = (-beta * a.adjoint() + std::conj(beta) * a).exp();
  const Mat r = padded(rho, dim);
  const Mat shifted = d * r * d.adjoint();
  double w = 0.0;
  for (int n = 0; n < dim; ++n) w += (n % 2 == 0 ? 1.0 : -1.0) * shifted(n, n).real();
  return kInvTwoPi * w;
}

}  // namespace

double wigner_fock(const FockMatrix& rho, cplx beta) {
  const int n = rho.cutoff() + 1;
  const double w1 = wigner_at_dim(rho.entries, beta, n + 20);
  const double w2 = wigner_at_dim(rho.entries, beta, 2 * n + 20);
  if (std::abs(w1 - w2) >= 1e-9) throw ConvergenceError("Wigner value changed under cutoff doubling");
  return w2;
}

FockMatrix pure_loss(const FockMatrix& rho, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("transmission must lie in [0, 1]");
  const int dim = static_cast<int>(rho.entries.rows());
  Mat out = Mat::Zero(dim, dim);
  for (int m = 0; m < dim; ++m)
    for (int mp = 0; mp < dim; ++mp) {
      cplx acc = 0.0;
      for (int k = 0; m + k < dim && mp + k < dim; ++k) {
        const double lw = 0.5 * (log_binomial(m + k, k) + log_binomial(mp + k, k));
        const double tw = std::pow(t, 0.5 * (m + mp)) * std::pow(1.0 - t, k);
        acc += rho.entries(m + k, mp + k) * std::exp(lw) * tw;
      }
      out(m, mp) = acc;
    }
  return {out};
}

double trace_distance(const FockMatrix& a, const FockMatrix& b) {
  const int dim = static_cast<int>(std::max(a.entries.rows(), b.entries.rows()));
  const Mat diff = padded(a.entries, dim) - padded(b.entries, dim);
  Eigen::SelfAdjointEigenSolver<Mat> es(diff, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double purity(const FockMatrix& rho) { return rho.entries.cwiseAbs2().sum(); }

namespace {

struct GridPoint {
  double intensity, squeezing, phase;
};

std::vector<GridPoint> oracle_grid() {
  std::vector<GridPoint> g;
  const auto is = linspace(0.0, 12.0, 60);
  const auto vs = logspace(0.01, 1.0, 60);
  const auto ps = linspace(0.0, 0.5 * std::numbers::pi, 14);
  g.reserve(is.size() * vs.size() * ps.size());
  for (double i : is)
    for (double v : vs)
      for (double p : ps) g.push_back({i, v, p});
  return g;
}

using Objective = double (*)(const FockVector&, double);

double spad_objective(const FockVector& psi, double a) {
  const ClickStats c = hbt_probs_fock(psi);
  return c.ps + a * c.pe;
}

double pnrd_objective(const FockVector& psi, double a) {
  const Eigen::VectorXd p = psi.amplitudes.cwiseAbs2();
  const double p1 = p.size() > 1 ? p(1) : 0.0;
  const double p2 = p.size() > 2 ? p.tail(p.size() - 2).sum() : 0.0;
  return p1 + a * p2;
}

constexpr double kMaxIntensity = 40.0;
constexpr double kMaxLogSqueeze = 6.0;

GaussianPure from_unconstrained(const std::vector<double>& y) {
  const double s0 = std::sin(y[0]);
  const double s1 = std::sin(y[1]);
  return {kMaxIntensity * s0 * s0, std::exp(-kMaxLogSqueeze * s1 * s1), y[2]};
}

std::vector<double> to_unconstrained(const GridPoint& g) {
  return {std::asin(std::sqrt(g.intensity / kMaxIntensity)),
          std::asin(std::sqrt(-std::log(g.squeezing) / kMaxLogSqueeze)), g.phase};
}

GaussianOptimum oracle(double a, Objective obj, bool parallel) {
  if (!std::isfinite(a)) throw DomainError("witness weight must be finite");
  const auto grid = oracle_grid();
  const long n = static_cast<long>(grid.size());
  std::vector<double> vals(grid.size());
  auto eval = [&](long i) {
    const auto& g = grid[static_cast<std::size_t>(i)];
    vals[static_cast<std::size_t>(i)] = obj(gaussian_fock({g.intensity, g.squeezing, g.phase}), a);
  };
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 16) num_threads(thread_count())
    for (long i = 0; i < n; ++i) eval(i);
  } else {
    for (long i = 0; i < n; ++i) eval(i);
  }
  // Grid order is lexicographic in (intensity, V, phase); strict comparison
  // keeps the first maximizer, so the reduction is order-independent.
  std::vector<long> order(grid.size());
  for (long i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](long x, long y) {
    return vals[static_cast<std::size_t>(x)] > vals[static_cast<std::size_t>(y)];
  });
  const auto& g0 = grid[static_cast<std::size_t>(order[0])];
  GaussianOptimum best{vals[static_cast<std::size_t>(order[0])], g0.intensity, g0.squeezing, g0.phase};
  // states beyond the representable cutoff are treated as infeasible
  const double infeasible = 1e3 * (1.0 + std::abs(a));
  auto f = [&](const std::vector<double>& y) {
    try {
      return -obj(gaussian_fock(from_unconstrained(y)), a);
    } catch (const CutoffError&) {
      return infeasible;
    }
  };
  for (int start = 0; start < 3; ++start) {
    const auto& g = grid[static_cast<std::size_t>(order[static_cast<std::size_t>(start)])];
    double fmin = 0.0;
    auto y = nelder_mead_minimize(f, to_unconstrained(g), {0.05, 0.05, 0.1}, 1e-8, 4000, &fmin);
    if (-fmin > best.value) {
      const GaussianPure p = from_unconstrained(y);
      best = {-fmin, p.intensity, p.squeezing, p.phase};
    }
  }
  return best;
}

}  // namespace

GaussianOptimum gaussian_bound_oracle(double a) { return oracle(a, &spad_objective, true); }
GaussianOptimum gaussian_bound_oracle_serial(double a) { return oracle(a, &spad_objective, false); }
GaussianOptimum pnrd_bound_oracle(double a) { return oracle(a, &pnrd_objective, true); }

}  // namespace qng::fock
