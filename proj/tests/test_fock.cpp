#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "qng/boundary.hpp"
#include "qng/errors.hpp"
#include "qng/fock.hpp"

using namespace qng;
using namespace qng::fock;

namespace {

doctest::Approx Rel(double v) { return doctest::Approx(v).scale(0.0); }

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Mat annihilator(int dim) {
  Mat a = Mat::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

double max_abs_diff(const Vec& a, const Vec& b) {
  const int n = static_cast<int>(std::min(a.size(), b.size()));
  return (a.head(n) - b.head(n)).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("coherent_fock") {
  auto vac = coherent_fock(0.0);
  CHECK(vac.amplitudes(0) == cplx(1.0));
  CHECK(vac.amplitudes.tail(vac.cutoff()).norm() == 0.0);

  for (cplx a : {cplx(0.3, 0.1), cplx(-1.2, 0.8), cplx(0.0, 2.0)})
    for (cplx b : {cplx(1.0, -0.5), cplx(0.1, 0.1)}) {
      const int n = std::max(coherent_cutoff(std::norm(a)), coherent_cutoff(std::norm(b)));
      auto va = coherent_fock(a, n), vb = coherent_fock(b, n);
      CHECK(std::norm(va.amplitudes.dot(vb.amplitudes)) ==
            Rel(std::exp(-std::norm(a - b))).epsilon(1e-12));
    }

  const double norm2 = coherent_fock(2.0).amplitudes.squaredNorm();
  CHECK(norm2 <= 1.0 + 1e-15);
  CHECK(norm2 >= 1.0 - 1e-12);
  CHECK_THROWS_AS(coherent_fock(2.0, 10), CutoffError);
}

TEST_CASE("squeezed_displaced_fock") {
  const cplx a(0.4, -0.3);
  CHECK(max_abs_diff(squeezed_displaced_fock(a, 0.0).amplitudes, coherent_fock(a).amplitudes) <
        1e-14);

  auto sv = squeezed_displaced_fock(0.0, 0.6);
  for (int n = 1; n <= sv.cutoff(); n += 2) CHECK(std::abs(sv.amplitudes(n)) == 0.0);

  // V = 0.5: p_2m = (2m)! / (2^m m!)^2 tanh(r)^2m / cosh r
  const double r = 0.5 * std::log(2.0);
  auto v = squeezed_displaced_fock(0.0, r);
  for (int m = 0; 2 * m <= v.cutoff(); ++m) {
    const double logp = std::lgamma(2.0 * m + 1) - 2.0 * (m * std::log(2.0) + std::lgamma(m + 1.0)) +
                        2.0 * m * std::log(std::tanh(r)) - std::log(std::cosh(r));
    CHECK(std::abs(std::norm(v.amplitudes(2 * m)) - std::exp(logp)) < 1e-10);
  }
  CHECK(v.amplitudes.squaredNorm() >= 1.0 - 1e-12);
}

TEST_CASE("squeezing recurrence against the matrix exponential") {
  const int dim = 160;
  const Mat A = annihilator(dim);
  for (auto [alpha, xi] : {std::pair{cplx(0.5, 0.2), cplx(0.35)}, std::pair{cplx(-0.3, 0.7), cplx(0.2, -0.3)},
                           std::pair{cplx(1.1, 0.0), cplx(0.0, 0.5)}}) {
    const Mat gen = 0.5 * (std::conj(xi) * A * A - xi * A.adjoint() * A.adjoint());
    const Mat S = gen.exp();
    const Vec psi = S * coherent_fock(alpha, dim - 1).amplitudes;
    auto rec = squeezed_displaced_fock(alpha, xi);
    REQUIRE(rec.cutoff() < dim / 2);
    CHECK(max_abs_diff(rec.amplitudes, psi) < 1e-10);
  }
}

TEST_CASE("gaussian_fock convention") {
  // mean amplitude sqrt(I/2) e^{i phi}, x quadrature squeezed
  const Mat A = annihilator(200);
  for (double phi : {0.0, 0.6, 2.0}) {
    GaussianPure g{1.4, 0.4, phi};
    auto psi = gaussian_fock(g);
    Vec v = Vec::Zero(200);
    v.head(std::min<int>(200, psi.cutoff() + 1)) = psi.amplitudes.head(std::min<int>(200, psi.cutoff() + 1));
    const cplx mean = v.dot(A * v);
    CHECK(std::abs(mean - std::polar(std::sqrt(0.7), phi)) < 1e-10);
    // variance of x = a + a^dag around its mean is V
    const Mat X = A + A.adjoint();
    const double mx = v.dot(X * v).real();
    const double vx = v.dot(X * X * v).real() - mx * mx;
    CHECK(std::abs(vx - 0.4) < 1e-9);
  }
}

TEST_CASE("rho_minus_fock") {
  auto cat = derive_state({0.0, 0.0, 1.0}, cplx(0.7, 0.2));
  auto rho = rho_minus_fock(cat);
  auto odd = projector(odd_cat_fock(cplx(0.7, 0.2), rho.cutoff()));
  CHECK((rho.entries - odd.entries).cwiseAbs().maxCoeff() < 1e-12);

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    CavityParams p{1.5 * u(rng), 0.01 + u(rng), 0.05 + 2.0 * u(rng)};
    auto s = derive_state(p, std::polar(0.1 + 1.5 * u(rng), 6.0 * u(rng)));
    auto m = rho_minus_fock(s);
    CHECK(std::abs(m.entries.trace().real() - 1.0) < 1e-10);
    CHECK_NOTHROW(m.validate());
    if (s.eta() < 1.0 - 1e-9) CHECK(purity(m) < 1.0);
  }

  FockMatrix bad{Mat::Identity(3, 3) * 0.5};
  CHECK_THROWS_AS(bad.validate(), InvariantError);
  FockMatrix neg{Mat::Zero(2, 2)};
  neg.entries(0, 0) = 1.5;
  neg.entries(1, 1) = -0.5;
  CHECK_THROWS_AS(neg.validate(), InvariantError);
}

TEST_CASE("hbt_probs_fock") {
  auto vac = hbt_probs_fock(number_state(0, 5));
  CHECK(vac.ps == 0.0);
  CHECK(vac.pe == 0.0);
  auto one = hbt_probs_fock(number_state(1, 5));
  CHECK(one.ps == Rel(0.5).epsilon(1e-15));
  CHECK(std::abs(one.pe) < 1e-15);
  auto two = hbt_probs_fock(number_state(2, 5));
  CHECK(two.pe == Rel(0.5).epsilon(1e-15));

  auto coh = hbt_probs_fock(coherent_fock(1.0));
  const double q = 1.0 - std::exp(-0.5);
  CHECK(coh.ps == Rel(q).epsilon(1e-13));
  CHECK(coh.pe == Rel(q * q).epsilon(1e-12));

  // levels above the explicit split range
  auto bright = coherent_fock(std::sqrt(80.0));
  auto b = hbt_probs_fock(bright);
  CHECK(b.p0 == Rel(std::exp(-40.0)).epsilon(1e-9));
  CHECK(b.p00 == Rel(std::exp(-80.0)).epsilon(1e-9));
}

TEST_CASE("two-mode split against the single-mode shortcut") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    auto s = derive_state({0.32, 0.05 + u(rng), 0.1 + 2.0 * u(rng)}, std::polar(0.2 + 2.0 * u(rng), 1.0));
    auto rho = rho_minus_fock(s);
    CHECK(std::abs(hbt_probs_fock(rho).p0 - hbt_no_click_shortcut(rho)) < 1e-12);
  }
  Eigen::VectorXd p(4);
  p << 0.1, 0.2, 0.3, 0.4;
  auto m = split_photon_distribution(p);
  CHECK(m.sum() == Rel(1.0).epsilon(1e-15));
  CHECK(m(1, 2) == Rel(0.4 * 3.0 / 8.0).epsilon(1e-15));
  CHECK(m(2, 0) == Rel(0.3 / 4.0).epsilon(1e-15));
}

TEST_CASE("displacement and Wigner function") {
  CHECK(wigner_fock(number_state(0, 10), 0.0) == Rel(1.0 / kTwoPi).epsilon(1e-12));
  CHECK(wigner_fock(number_state(1, 10), 0.0) == Rel(-1.0 / kTwoPi).epsilon(1e-12));
  const cplx a(0.6, -0.4);
  auto coh = projector(coherent_fock(a));
  CHECK(wigner_fock(coh, a) == Rel(1.0 / kTwoPi).epsilon(1e-10));
  // W of a coherent state is a Gaussian of width 1/2 around a
  const cplx b(0.1, 0.3);
  CHECK(wigner_fock(coh, b) == Rel(std::exp(-2.0 * std::norm(b - a)) / kTwoPi).epsilon(1e-10));

  auto shifted = displace(number_state(0, 30), a);
  auto target = projector(coherent_fock(a, 30));
  CHECK((shifted.entries - target.entries).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("loss channel reproduces the heralded state") {
  for (CavityParams p : {CavityParams{0.32, 0.05, 0.398435}, CavityParams{0.32, 0.5, 1.3463},
                         CavityParams{0.1, 0.3, 0.2}}) {
    auto s = derive_state(p, std::polar(0.9, 0.3));
    auto rho = rho_minus_fock(s);
    const int n = rho.cutoff();
    auto lossy = pure_loss(projector(odd_cat_fock(std::sqrt(s.eta()) * s.alpha(), n + 20)), s.eta());
    auto out = displace(lossy, 0.5 * (s.alpha_e() + s.alpha_g()), n);
    CHECK(trace_distance(out, rho) < 1e-10);
  }
}

TEST_CASE("pure_loss") {
  auto one = pure_loss(number_state(1, 4), 0.3);
  CHECK(one.entries(1, 1).real() == Rel(0.3).epsilon(1e-15));
  CHECK(one.entries(0, 0).real() == Rel(0.7).epsilon(1e-15));
  auto coh = pure_loss(projector(coherent_fock(cplx(1.0, 0.5))), 0.64);
  auto target = projector(coherent_fock(0.8 * cplx(1.0, 0.5), coh.cutoff()));
  CHECK(trace_distance(coh, target) < 1e-12);
}

TEST_CASE("truncation robustness") {
  auto s = derive_state({0.32, 0.05, 0.398435}, std::sqrt(1.5));
  auto a = rho_minus_fock(s);
  auto b = rho_minus_fock(s, 2 * a.cutoff());
  auto ha = hbt_probs_fock(a), hb = hbt_probs_fock(b);
  CHECK(std::abs(ha.ps - hb.ps) < 1e-9);
  CHECK(std::abs(ha.pe - hb.pe) < 1e-9);
  CHECK(std::abs(fock_probs(a).p1 - fock_probs(b).p1) < 1e-9);
  CHECK(std::abs(wigner_fock(a, 0.3) - wigner_fock(b, 0.3)) < 1e-9);

  auto g = squeezed_displaced_fock(cplx(0.8, 0.2), 0.5);
  auto g2 = squeezed_displaced_fock(cplx(0.8, 0.2), 0.5, 2 * g.cutoff());
  auto pg = hbt_probs_fock(g), pg2 = hbt_probs_fock(g2);
  CHECK(std::abs(pg.ps - pg2.ps) < 1e-9);
  CHECK(std::abs(pg.pe - pg2.pe) < 1e-9);
}

TEST_CASE("Gaussian bound oracle") {
  auto o = gaussian_bound_oracle(-4.0);
  CHECK(o.value == Rel(0.123592051).epsilon(1e-8));
  CHECK(o.value == Rel(witness_bound(-4.0)).epsilon(1e-4));
  CHECK(std::abs(std::sin(o.phase)) < 1e-6);
  auto serial = gaussian_bound_oracle_serial(-4.0);
  CHECK(serial.value == o.value);
  CHECK(serial.intensity == o.intensity);

  CHECK(gaussian_bound_oracle(0.0).value > 0.99);
}
