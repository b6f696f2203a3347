#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qng/boundary.hpp"
#include "qng/cavity.hpp"

namespace qng::fock {

using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

/// Pure state on levels 0..cutoff.
struct FockVector {
  Vec amplitudes;
  int cutoff() const { return static_cast<int>(amplitudes.size()) - 1; }
};

/// Dense density matrix on levels 0..cutoff.
struct FockMatrix {
  Mat entries;
  int cutoff() const { return static_cast<int>(entries.rows()) - 1; }
  /// Hermitian to 1e-12, unit trace to 1e-10, minimum eigenvalue >= -1e-10.
  void validate() const;
};

FockMatrix projector(const FockVector& v);
FockMatrix number_state(int n, int cutoff);

/// Smallest cutoff with Poisson tail beyond it below 1e-14, and at least
/// |alpha|^2 + 10 sqrt(|alpha|^2 + 1) + 20.
int coherent_cutoff(double alpha2);

/// e^{-|alpha|^2/2} alpha^n / sqrt(n!). cutoff < 0 selects automatically;
/// an explicit cutoff whose tail exceeds 1e-14 raises CutoffError.
FockVector coherent_fock(cplx alpha, int cutoff = -1);

/// S(xi) D(alpha)|0> with S(xi) = exp[(xi^* a^2 - xi a^dagger^2)/2].
/// cutoff < 0 extends until the norm deficit is below 1e-12.
FockVector squeezed_displaced_fock(cplx alpha, cplx xi, int cutoff = -1);

/// Fock state of a GaussianPure: squeezing xi = -ln(V)/2 (x quadrature squeezed)
/// and final mean amplitude <a> = sqrt(I/2) e^{i phi}.
FockVector gaussian_fock(const GaussianPure& g);

/// The heralded state assembled from coherent vectors with the displayed
/// coefficients. Validates the result unless `validate` is false.
FockMatrix rho_minus_fock(const HeraldedState& s, int cutoff = -1, bool validate = true);

/// Normalized odd cat |a> - |-a>.
FockVector odd_cat_fock(cplx alpha, int cutoff = -1);

/// Joint photon counts behind a balanced beam splitter for photon-number
/// distribution p: entry (k, j) is the probability of k photons on detector 1
/// and j on detector 2, built from the binomial split of each |n>.
Eigen::MatrixXd split_photon_distribution(const Eigen::VectorXd& p);

/// Click statistics from the explicit two-mode split. Levels n <= 64 are split
/// entry by entry; the remaining tail is accounted for in closed form.
ClickStats hbt_probs_fock(const FockMatrix& rho);
ClickStats hbt_probs_fock(const FockVector& psi);
ClickStats hbt_probs_from_distribution(const Eigen::VectorXd& p);

/// sum_n rho_nn 2^{-n}; the single-mode shortcut for P_0.
double hbt_no_click_shortcut(const FockMatrix& rho);

FockProbs fock_probs(const FockMatrix& rho);
double mean_photon(const FockMatrix& rho);

/// D(beta) as a matrix exponential on cutoff + 1 + pad levels, truncated.
Mat displacement_matrix(cplx beta, int cutoff, int pad = 20);

/// D(beta) rho D(beta)^dagger on a cutoff of `out_cutoff` (or the input cutoff).
FockMatrix displace(const FockMatrix& rho, cplx beta, int out_cutoff = -1);

/// Tr[rho D(beta) P D(beta)^dagger] / (2 pi), checked by doubling the working
/// cutoff; ConvergenceError if the two disagree by 1e-9 or more.
double wigner_fock(const FockMatrix& rho, cplx beta);

/// Pure-loss channel with transmission t.
FockMatrix pure_loss(const FockMatrix& rho, double t);

double trace_distance(const FockMatrix& a, const FockMatrix& b);
double purity(const FockMatrix& rho);

/// Brute-force maximum of P_s + a P_e over pure Gaussian states.
struct GaussianOptimum {
  double value = 0.0;
  double intensity = 0.0;
  double squeezing = 1.0;
  double phase = 0.0;
};
GaussianOptimum gaussian_bound_oracle(double a);
GaussianOptimum gaussian_bound_oracle_serial(double a);

/// Brute-force maximum of p_1 + a p_2+ over pure Gaussian states.
GaussianOptimum pnrd_bound_oracle(double a);

}  // namespace qng::fock
