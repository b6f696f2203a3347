#include "qng/noise.hpp"

#include <algorithm>
#include <numbers>

namespace qng {

namespace {

constexpr double kInvTwoPi = 0.5 * std::numbers::inv_pi;

// sum_n z^n / (n!)^2, the phase average of exp(A e^{it} + B e^{-it}) with z = AB.
cplx ring_average(cplx z) {
  cplx term = 1.0, sum = 1.0;
  for (int n = 1; n < 2000; ++n) {
    term *= z / (static_cast<double>(n) * n);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum) && static_cast<double>(n) * n > std::abs(z)) return sum;
  }
  throw ConvergenceError("ring-average series did not converge");
}

}  // namespace

void NoiseSpec::validate() const {
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) throw DomainError("nbar must be finite and non-negative");
}

NoiseKind parse_noise_kind(const std::string& name) {
  if (name == "none") return NoiseKind::None;
  if (name == "poissonian") return NoiseKind::Poissonian;
  if (name == "bose-einstein" || name == "bose_einstein") return NoiseKind::BoseEinstein;
  if (name == "background") return NoiseKind::Background;
  throw DomainError("unknown noise kind '" + name +
                    "' (supported: none, poissonian, bose-einstein, background)");
}

std::string to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::None: return "none";
    case NoiseKind::Poissonian: return "poissonian";
    case NoiseKind::BoseEinstein: return "bose-einstein";
    case NoiseKind::Background: return "background";
  }
  return "none";
}

void QuadratureSpec::validate() const {
  if (phase_nodes < 8 || radial_nodes < 8) throw DomainError("quadrature node counts must be at least 8");
}

ClickStats displaced_click_probs(const HeraldedState& s, cplx beta) {
  return click_probabilities(s, beta);
}

ClickStats noisy_click_probs(const HeraldedState& s, const NoiseSpec& n, const QuadratureSpec& q) {
  n.validate();
  const NoiseKind kind = n.effective_kind();
  if (kind == NoiseKind::None) return click_probabilities(s);
  if (kind == NoiseKind::Background)
    throw UnsupportedError("background noise is not a displacement noise; use background_click_probs");
  auto v = noise_average<2>(kind, n.nbar, q, [&](cplx b) {
    ClickStats c = click_probabilities(s, b);
    return std::array<double, 2>{c.ps, c.pe};
  });
  ClickStats out;
  out.ps = v[0];
  out.pe = v[1];
  out.p0 = 1.0 - out.ps;
  out.p00 = out.pe + 1.0 - 2.0 * out.ps;
  return out;
}

ClickStats background_click_probs(const ClickStats& c, double nbar) {
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) throw DomainError("nbar must be finite and non-negative");
  const double q = std::exp(-0.5 * nbar);
  const double l = -std::expm1(-0.5 * nbar);
  ClickStats out;
  out.ps = l + c.ps * q;
  out.pe = l * l + 2.0 * c.ps * q * l + c.pe * q * q;
  out.p0 = c.p0 * q;
  out.p00 = c.p00 * q * q;
  return out;
}

ClickStats background_click_probs(const HeraldedState& s, double nbar) {
  return background_click_probs(click_probabilities(s), nbar);
}

ClickStats click_probabilities(const HeraldedState& s, const NoiseSpec& n, const QuadratureSpec& q) {
  n.validate();
  switch (n.effective_kind()) {
    case NoiseKind::None: return click_probabilities(s);
    case NoiseKind::Background: return background_click_probs(s, n.nbar);
    default: return noisy_click_probs(s, n, q);
  }
}

FockProbs noisy_fock_probabilities(const HeraldedState& s, const NoiseSpec& n,
                                   const QuadratureSpec& q) {
  n.validate();
  const NoiseKind kind = n.effective_kind();
  if (kind == NoiseKind::None) return fock_probabilities(s);
  if (kind == NoiseKind::Background) {
    const FockProbs f = fock_probabilities(s);
    const double e = std::exp(-n.nbar);
    FockProbs out;
    out.p0 = f.p0 * e;
    out.p1 = e * (f.p1 + f.p0 * n.nbar);
    out.p2plus = 1.0 - out.p0 - out.p1;
    return out;
  }
  auto v = noise_average<2>(kind, n.nbar, q, [&](cplx b) {
    FockProbs f = fock_probabilities(s, b);
    return std::array<double, 2>{f.p1, f.p2plus};
  });
  return {1.0 - v[0] - v[1], v[0], v[1]};
}

double noisy_mean_photon(const HeraldedState& s, const NoiseSpec& n) {
  n.validate();
  return mean_photon(s) + (n.effective_kind() == NoiseKind::None ? 0.0 : n.nbar);
}

double noisy_wigner_at(const HeraldedState& s, const NoiseSpec& n, cplx beta) {
  n.validate();
  const NoiseKind kind = n.effective_kind();
  if (kind == NoiseKind::None) return wigner_at(s, beta);
  if (kind == NoiseKind::Background)
    throw UnsupportedError("the Wigner function is not modelled for background noise");
  cplx w = 0.0;
  for (const auto& d : s.dyads()) {
    const cplx u = beta - d.ket;
    const cplx v = std::conj(beta - d.bra);
    if (kind == NoiseKind::BoseEinstein) {
      const double g = 1.0 + 2.0 * n.nbar;
      w += d.weight * std::exp(-2.0 * u * v / g) / g;
    } else {
      w += d.weight * std::exp(-2.0 * u * v - 2.0 * n.nbar) * ring_average(4.0 * n.nbar * u * v);
    }
  }
  return kInvTwoPi * w.real() / s.normalization();
}

WignerMin noisy_min_wigner(const HeraldedState& s, const NoiseSpec& n) {
  if (n.effective_kind() == NoiseKind::None) return min_wigner(s);
  const cplx center = 0.5 * (s.alpha_e() + s.alpha_g());
  const double radius = 2.0 / (1.0 + std::abs(s.alpha_e() - s.alpha_g()));
  return min_on_patch([&](cplx b) { return noisy_wigner_at(s, n, b); }, center, radius);
}

double kappa_for_reading(const CavityParams& p, KappaReading r) {
  switch (r) {
    case KappaReading::Left: return p.kappa_l;
    case KappaReading::Right: return p.kappa_r;
    case KappaReading::Sum: return p.kappa_l + p.kappa_r;
  }
  return p.kappa_l + p.kappa_r;
}

ClickStats approx_click_probs(const HeraldedState& s, double nbar, const CavityParams& p,
                              bool background, KappaReading r) {
  const double eta = s.eta();
  const double f = (eta - 1.0) + 2.0 * eta * p.gamma * kappa_for_reading(p, r);
  ClickStats out;
  out.ps = 0.5 * eta;
  out.pe = eta * f * f * s.intensity() + (background ? 0.5 : 1.0) * eta * nbar;
  out.p0 = 1.0 - out.ps;
  out.p00 = out.pe + 1.0 - 2.0 * out.ps;
  return out;
}

bool approx_qng_condition(double alpha2, double nbar, double eta, bool broadband) {
  if (!(alpha2 >= 0.0) || !(nbar >= 0.0) || !(eta >= 0.0 && eta <= 1.0))
    throw DomainError("approximate condition needs alpha2, nbar >= 0 and eta in [0, 1]");
  return broadband ? 2.0 * alpha2 + nbar < eta * eta : alpha2 + nbar < 0.5 * eta * eta;
}

}  // namespace qng
