#include "qng/cavity.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qng/errors.hpp"
#include "qng/numeric.hpp"

namespace qng {

namespace {

constexpr double kInvTwoPi = 0.5 * std::numbers::inv_pi;

void require_rate(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0)
    throw DomainError(std::string(name) + " must be finite and non-negative");
}

}  // namespace

void CavityParams::validate() const {
  require_rate(gamma, "gamma");
  require_rate(kappa_l, "kappa_l");
  require_rate(kappa_r, "kappa_r");
  if (!(kappa_r > 0.0)) throw DomainError("kappa_r must be positive");
}

double cumulative_eta(const CavityParams& p) {
  p.validate();
  return cumulative_eta(p.gamma, p.kappa_l, p.kappa_r);
}

double optimal_kappa_r(double gamma, double kappa_l) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("gamma must be positive");
  if (!(kappa_l > 0.0) || !std::isfinite(kappa_l)) throw DomainError("kappa_l must be positive");
  return std::sqrt(kappa_l / gamma) * std::sqrt(1.0 + gamma * kappa_l);
}

bool negativity_condition(double gamma, double kappa_l) {
  require_rate(gamma, "gamma");
  require_rate(kappa_l, "kappa_l");
  return kappa_l * gamma < 0.125;
}

HeraldedState::HeraldedState(cplx alpha, cplx alpha_g, cplx alpha_e, double eta)
    : alpha_(alpha), alpha_g_(alpha_g), alpha_e_(alpha_e), eta_(eta) {
  const double x = std::norm(alpha);
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("alpha must be non-zero and finite");
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("eta must lie in (0, 1]");
  norm_ = -2.0 * std::expm1(-2.0 * eta * x);
  // cross weight -c <alpha_g|alpha_e>
  const double e = -2.0 * (1.0 - eta) * eta * x - 0.5 * std::norm(alpha_e - alpha_g);
  const double theta = std::imag(std::conj(alpha_g) * alpha_e);
  cross_weight_ = -std::exp(e) * cplx(std::cos(theta), std::sin(theta));
  const double s = std::sin(0.5 * theta);
  deficit_ = (-2.0 * std::expm1(e) + 2.0 * std::expm1(-2.0 * eta * x) +
              4.0 * std::exp(e) * s * s) /
             norm_;
}

HeraldedState HeraldedState::unchecked(cplx alpha, cplx alpha_g, cplx alpha_e, double eta) {
  return HeraldedState(alpha, alpha_g, alpha_e, eta);
}

std::array<Dyad, 4> HeraldedState::dyads(cplx shift) const {
  const cplx e = alpha_e_ + shift;
  const cplx g = alpha_g_ + shift;
  return {Dyad{e, e, 1.0}, Dyad{g, g, 1.0}, Dyad{e, g, cross_weight_},
          Dyad{g, e, std::conj(cross_weight_)}};
}

void HeraldedState::check_invariants(const CavityParams* params) const {
  const double lhs = eta_ * std::abs(alpha_);
  const double rhs = 0.5 * std::abs(alpha_e_ - alpha_g_);
  if (std::abs(lhs - rhs) > 1e-14 * std::max(1.0, lhs))
    throw InvariantError("eta|alpha| differs from |alpha_e - alpha_g|/2");
  if (std::abs(deficit_) > 1e-12) throw InvariantError("heralded state trace differs from one");
  if (params) {
    const HeraldedState ref = derive_state(*params, alpha_);
    auto close = [](cplx a, cplx b) {
      return std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(b));
    };
    if (!close(alpha_g_, ref.alpha_g_) || !close(alpha_e_, ref.alpha_e_) ||
        std::abs(eta_ - ref.eta_) > 1e-14)
      throw InvariantError("heralded state does not match its cavity parameters");
  }
}

HeraldedState derive_state(const CavityParams& p, cplx alpha) {
  p.validate();
  if (!(std::norm(alpha) > 0.0)) throw DomainError("alpha must be non-zero");
  const double s = p.kappa_l + p.kappa_r;
  const double rg = (p.kappa_l - p.kappa_r) / s;
  const double re = (1.0 + (p.kappa_l - p.kappa_r) * p.gamma) / (1.0 + s * p.gamma);
  const double eta = cumulative_eta(p.gamma, p.kappa_l, p.kappa_r);
  return HeraldedState::unchecked(alpha, rg * alpha, re * alpha, eta);
}

double herald_probability(const HeraldedState& s) {
  return -std::expm1(-2.0 * s.eta() * s.intensity());
}

ClickStats click_probabilities(const HeraldedState& s, cplx shift) {
  cplx ps = 0.0, pe = 0.0;
  for (const auto& d : s.dyads(shift)) {
    const cplx k = std::conj(d.bra) * d.ket;
    const cplx m = cexpm1(-0.5 * k);
    ps -= d.weight * m;
    pe += d.weight * m * m;
  }
  const double D = s.normalization();
  ClickStats out;
  out.ps = ps.real() / D - s.trace_deficit();
  out.pe = pe.real() / D - s.trace_deficit();
  out.p0 = 1.0 - out.ps;
  out.p00 = out.pe + 1.0 - 2.0 * out.ps;
  return out;
}

ClickStats click_probabilities(const HeraldedState& s) { return click_probabilities(s, 0.0); }

FockProbs fock_probabilities(const HeraldedState& s, cplx shift) {
  cplx p0 = 0.0, p1 = 0.0, p2 = 0.0;
  for (const auto& d : s.dyads(shift)) {
    const cplx k = std::conj(d.bra) * d.ket;
    p0 += d.weight * cexpm1(-k);
    p1 += d.weight * k * std::exp(-k);
    p2 += d.weight * poisson_tail2(k);
  }
  const double D = s.normalization();
  return {1.0 + s.trace_deficit() + p0.real() / D, p1.real() / D,
          p2.real() / D - s.trace_deficit()};
}

FockProbs fock_probabilities(const HeraldedState& s) { return fock_probabilities(s, 0.0); }

double mean_photon(const HeraldedState& s) {
  cplx n = 0.0;
  for (const auto& d : s.dyads()) n += d.weight * std::conj(d.bra) * d.ket;
  return n.real() / s.normalization();
}

double wigner_at(const HeraldedState& s, cplx beta) {
  cplx w = 0.0;
  for (const auto& d : s.dyads())
    w += d.weight * std::exp(-2.0 * (beta - d.ket) * std::conj(beta - d.bra));
  return kInvTwoPi * w.real() / s.normalization();
}

WignerMin min_wigner(const HeraldedState& s) {
  const cplx center = 0.5 * (s.alpha_e() + s.alpha_g());
  const double radius = 2.0 / (1.0 + std::abs(s.alpha_e() - s.alpha_g()));
  return min_on_patch([&](cplx b) { return wigner_at(s, b); }, center, radius);
}

double genoni_margin(double wigner_origin, double mean_photons) {
  return kInvTwoPi * std::exp(-2.0 * mean_photons * (1.0 + mean_photons)) - wigner_origin;
}

double genoni_margin(const HeraldedState& s) {
  return genoni_margin(wigner_at(s, 0.0), mean_photon(s));
}

}  // namespace qng
