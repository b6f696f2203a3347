#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "qng/cavity.hpp"
#include "qng/errors.hpp"
#include "qng/numeric.hpp"

namespace qng {

enum class NoiseKind { None, Poissonian, BoseEinstein, Background };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::None;
  double nbar = 0.0;

  void validate() const;
  /// nbar = 0 collapses every kind to None.
  NoiseKind effective_kind() const { return nbar > 0.0 ? kind : NoiseKind::None; }
};

NoiseKind parse_noise_kind(const std::string& name);
std::string to_string(NoiseKind k);

struct QuadratureSpec {
  int phase_nodes = 64;
  int radial_nodes = 32;

  void validate() const;
  QuadratureSpec doubled() const { return {2 * phase_nodes, 2 * radial_nodes}; }
};

/// Click statistics of D(beta) rho D(beta)^dagger.
ClickStats displaced_click_probs(const HeraldedState& s, cplx beta);

/// Averages f(beta) over the displacement-noise density at fixed node counts.
/// Poissonian: |beta| = sqrt(nbar), uniform phase. Bose-Einstein: density
/// exp(-|beta|^2/nbar)/(pi nbar), Gauss-Laguerre in |beta|^2 times uniform phase.
template <std::size_t K, class F>
std::array<double, K> noise_average_fixed(NoiseKind kind, double nbar, const QuadratureSpec& q,
                                          F&& f) {
  std::array<double, K> acc{};
  auto add = [&acc](const std::array<double, K>& v, double w) {
    for (std::size_t i = 0; i < K; ++i) acc[i] += w * v[i];
  };
  const int m = q.phase_nodes;
  const double dtheta = 2.0 * std::numbers::pi / m;
  if (kind == NoiseKind::Poissonian) {
    const double r = std::sqrt(nbar);
    for (int j = 0; j < m; ++j) add(f(std::polar(r, j * dtheta)), 1.0 / m);
  } else if (kind == NoiseKind::BoseEinstein) {
    const QuadratureRule& rule = gauss_laguerre(q.radial_nodes);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double r = std::sqrt(nbar * rule.nodes[i]);
      // shift the phase grid per ring to avoid aligned nodes
      const double offset = 0.5 * dtheta * static_cast<double>(i % 2);
      for (int j = 0; j < m; ++j) add(f(std::polar(r, offset + j * dtheta)), rule.weights[i] / m);
    }
  } else {
    throw UnsupportedError("noise averaging needs poissonian or bose-einstein noise");
  }
  return acc;
}

/// noise_average_fixed with node doubling until every component changes by
/// less than 1e-9; at most four doublings, otherwise ConvergenceError.
template <std::size_t K, class F>
std::array<double, K> noise_average(NoiseKind kind, double nbar, const QuadratureSpec& q, F&& f) {
  q.validate();
  QuadratureSpec cur = q;
  auto prev = noise_average_fixed<K>(kind, nbar, cur, f);
  for (int d = 0; d < 4; ++d) {
    cur = cur.doubled();
    auto next = noise_average_fixed<K>(kind, nbar, cur, f);
    double diff = 0.0;
    for (std::size_t i = 0; i < K; ++i) diff = std::max(diff, std::abs(next[i] - prev[i]));
    if (diff < 1e-9) return next;
    prev = next;
  }
  throw ConvergenceError("noise quadrature did not converge after four node doublings");
}

/// Click statistics of the displacement-noise mixture (Poissonian or Bose-Einstein).
ClickStats noisy_click_probs(const HeraldedState& s, const NoiseSpec& n,
                             const QuadratureSpec& q = {});

/// Exact composition with independent Poissonian background photons split on
/// the beam splitter: P_0 gains exp(-nbar/2), P_00 gains exp(-nbar).
ClickStats background_click_probs(const HeraldedState& s, double nbar);
ClickStats background_click_probs(const ClickStats& signal, double nbar);

/// Dispatch over every noise kind.
ClickStats click_probabilities(const HeraldedState& s, const NoiseSpec& n,
                               const QuadratureSpec& q = {});

/// Vacuum, single-photon and multi-photon populations of the noisy state.
/// Displacement noise by quadrature; background by Poisson convolution.
FockProbs noisy_fock_probabilities(const HeraldedState& s, const NoiseSpec& n,
                                   const QuadratureSpec& q = {});

/// Mean photon number including the noise photons (nbar for every kind).
double noisy_mean_photon(const HeraldedState& s, const NoiseSpec& n);

/// Wigner function of the displacement-noise mixture, from the exact
/// convolution of each dyad kernel with the noise density.
double noisy_wigner_at(const HeraldedState& s, const NoiseSpec& n, cplx beta);
WignerMin noisy_min_wigner(const HeraldedState& s, const NoiseSpec& n);

/// Reading of the unsubscripted kappa in the small-intensity coincidence
/// term. The exact small-|alpha|^2 expansion of click_probabilities has the
/// factor (r_e + r_g)/2 = (eta - 1) + 2 eta gamma (kappa_l + kappa_r); the
/// sum reading matches it to O(|alpha|^2) while kappa_l or kappa_r alone
/// leave an O(1) relative error (see test_noise).
enum class KappaReading { Left, Right, Sum };
inline constexpr KappaReading kKappaReading = KappaReading::Sum;

double kappa_for_reading(const CavityParams& p, KappaReading r);

/// Leading-order P_s = eta/2 and P_e = eta f^2 |alpha|^2 + c eta nbar,
/// c = 1 for displacement noise and 1/2 for background noise.
ClickStats approx_click_probs(const HeraldedState& s, double nbar, const CavityParams& p,
                              bool background = false, KappaReading r = kKappaReading);

/// |alpha|^2 + nbar < eta^2/2 (narrowband) or 2|alpha|^2 + nbar < eta^2 (broadband).
bool approx_qng_condition(double alpha2, double nbar, double eta, bool broadband);

}  // namespace qng
