#pragma once

#include "qng/types.hpp"

namespace qng {

/// A point of a parametric Gaussian boundary curve.
struct ThresholdPoint {
  double control = 1.0;
  double first = 0.0;
  double second = 0.0;
};

/// Pure Gaussian state. `intensity` follows the convention of the Gaussian
/// click formulas: it is 2|<a>|^2 for the final mean amplitude <a>, and
/// `phase` is the angle of <a> measured from the squeezed quadrature
/// (see fock::gaussian_fock).
struct GaussianPure {
  double intensity = 0.0;
  double squeezing = 1.0;  // V = exp(-2|xi|), in (0, 1]
  double phase = 0.0;      // squeezing phase minus displacement phase

  void validate() const;
};

ClickStats gaussian_click_probs(const GaussianPure& s);

/// Intensity that extremizes the witness along phase 0 for squeezing V.
double stationary_intensity(double V);

/// SPAD boundary (P_s, P_e) at control V. Evaluated from the general Gaussian
/// click formulas at the stationary point, which the brute-force oracle
/// confirms is the true envelope.
ThresholdPoint spad_threshold(double V);

/// The closed-form P_0(V), P_00(V) exactly as displayed. Kept for comparison;
/// its P_00 exponent disagrees with the general formulas at the stationary point.
ThresholdPoint spad_threshold_printed(double V);

/// Photon-number-resolving boundary (p_1, p_2+) at control t.
ThresholdPoint pnrd_threshold(double t);

enum class SpadCurve { Arbitrated, Printed };

struct WitnessOptimum {
  double value = 0.0;
  double control = 1.0;  // maximizing V
};

/// max_V P_s(V) + a P_e(V) along the chosen SPAD curve.
WitnessOptimum witness_optimum(double a, SpadCurve curve = SpadCurve::Arbitrated);
double witness_bound(double a);

/// max_t p_1(t) + a p_2+(t) along the photon-number boundary.
WitnessOptimum pnrd_witness_optimum(double a);

/// Signed distance in P_s above the SPAD boundary at the same P_e.
/// Positive means quantum non-Gaussianity is certified.
double qng_margin_spad(double ps, double pe);

/// Signed distance in p_1 above the photon-number boundary at the same p_2+.
double qng_margin_pnrd(double p1, double p2plus);

/// P_s^2 - P_e; positive means nonclassical.
double nonclassicality_margin(double ps, double pe);

/// Largest violation of monotonicity (second coordinate against control) on
/// the 10^4-point check grid; 0 when the curve is monotone.
double spad_monotonicity_defect();
double pnrd_monotonicity_defect();

}  // namespace qng
