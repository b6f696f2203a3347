#pragma once

#include <array>
#include <complex>

#include "qng/types.hpp"

namespace qng {

using cplx = std::complex<double>;

/// Atom-cavity rates in units of the coupling g.
struct CavityParams {
  double gamma = 0.0;    // spontaneous emission
  double kappa_l = 0.0;  // loss-side mirror
  double kappa_r = 1.0;  // detector-side mirror

  void validate() const;
};

template <class T>
T cumulative_eta(T gamma, T kappa_l, T kappa_r) {
  const T s = kappa_l + kappa_r;
  return kappa_r / (s * (T(1) + gamma * s));
}

double cumulative_eta(const CavityParams& p);

/// kappa_r maximizing eta at fixed gamma > 0 and kappa_l > 0.
double optimal_kappa_r(double gamma, double kappa_l);

/// kappa_l * gamma < 1/8: Wigner negativity reachable at the optimal kappa_r.
bool negativity_condition(double gamma, double kappa_l);

/// Coherent dyad |ket><bra| scaled so that its trace is `weight`.
struct Dyad {
  cplx ket;
  cplx bra;
  cplx weight;
};

/// Heralded odd-cat-like state built from the four coherent dyads
/// |a_e><a_e| + |a_g><a_g| - c (|a_e><a_g| + h.c.), c = exp(-2(1-eta)eta|alpha|^2),
/// normalized by 2(1 - exp(-2 eta |alpha|^2)).
class HeraldedState {
 public:
  /// Builds a state from raw amplitudes without checking consistency.
  /// Used for harness self-tests; prefer derive_state.
  static HeraldedState unchecked(cplx alpha, cplx alpha_g, cplx alpha_e, double eta);

  cplx alpha() const { return alpha_; }
  cplx alpha_g() const { return alpha_g_; }
  cplx alpha_e() const { return alpha_e_; }
  double eta() const { return eta_; }
  double intensity() const { return std::norm(alpha_); }

  /// The four dyads of D(shift) rho D(shift)^dagger.
  std::array<Dyad, 4> dyads(cplx shift = 0.0) const;
  /// 2(1 - exp(-2 eta |alpha|^2)).
  double normalization() const { return norm_; }
  /// (sum of dyad traces - normalization) / normalization.
  double trace_deficit() const { return deficit_; }

  /// Throws InvariantError unless eta|alpha| = |alpha_e - alpha_g|/2 and the
  /// trace is one. With params, also recomputes the amplitudes and eta.
  void check_invariants(const CavityParams* params = nullptr) const;

 private:
  HeraldedState(cplx alpha, cplx alpha_g, cplx alpha_e, double eta);

  cplx alpha_, alpha_g_, alpha_e_;
  double eta_;
  double norm_;
  cplx cross_weight_;
  double deficit_;
};

HeraldedState derive_state(const CavityParams& p, cplx alpha);

/// 1 - exp(-2 eta |alpha|^2).
double herald_probability(const HeraldedState& s);

ClickStats click_probabilities(const HeraldedState& s);
FockProbs fock_probabilities(const HeraldedState& s);
double mean_photon(const HeraldedState& s);

/// Statistics of D(shift) rho D(shift)^dagger.
ClickStats click_probabilities(const HeraldedState& s, cplx shift);
FockProbs fock_probabilities(const HeraldedState& s, cplx shift);

/// W(beta) = Tr[rho D(beta) P D(beta)^dagger] / (2 pi), P the parity operator.
/// A coherent state |a> peaks at beta = a with value 1/(2 pi).
double wigner_at(const HeraldedState& s, cplx beta);

struct WignerMin {
  double value = 0.0;
  cplx location = 0.0;
};

/// Minimum of W near the fringe center (alpha_e + alpha_g)/2.
WignerMin min_wigner(const HeraldedState& s);

/// Minimum of a phase-space function f on a 41x41 patch of half-width
/// `radius` around `center`, followed by one finer patch around the best point.
/// The center itself is always a candidate.
template <class F>
WignerMin min_on_patch(F&& f, cplx center, double radius) {
  WignerMin best{f(center), center};
  constexpr int n = 41;
  cplx c = center;
  double r = radius;
  for (int pass = 0; pass < 2; ++pass) {
    const double h = 2.0 * r / (n - 1);
    cplx pass_center = c;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const cplx z = pass_center + cplx(-r + i * h, -r + j * h);
        const double w = f(z);
        if (w < best.value) best = {w, z};
      }
    c = best.location;
    r = 2.0 * h;
  }
  return best;
}

/// exp(-2 N (1 + N)) / (2 pi) - W(0); positive certifies non-Gaussianity.
double genoni_margin(const HeraldedState& s);
double genoni_margin(double wigner_origin, double mean_photons);

}  // namespace qng
