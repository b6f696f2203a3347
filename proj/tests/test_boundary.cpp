#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "qng/boundary.hpp"
#include "qng/errors.hpp"
#include "qng/fock.hpp"
#include "qng/numeric.hpp"

using namespace qng;

namespace {

doctest::Approx Rel(double v) { return doctest::Approx(v).scale(0.0); }

// Reference values computed independently in 30-digit arithmetic.
constexpr double kPsHalf = 0.291642294660008337;
constexpr double kPeHalf = 0.0514697036513332569;
constexpr double kPePrintedHalf = 0.155127179293821206;
constexpr double kP1Half = 0.381228393315869687;
constexpr double kP2Half = 0.0469290167103257817;

// Brute-force Gaussian maxima from the Fock oracle (frozen).
constexpr double kOracle[][2] = {{-0.5, 0.5},          {-1.0, 0.297863196},
                                 {-2.0, 0.189442740},  {-4.0, 0.123592051},
                                 {-8.0, 0.082078185},  {-16.0, 0.055285734}};

}  // namespace

TEST_CASE("spad_threshold endpoints") {
  auto one = spad_threshold(1.0);
  CHECK(one.first == 0.0);
  CHECK(one.second == 0.0);
  auto tiny = spad_threshold(1e-6);
  CHECK(tiny.first == Rel(1.0).epsilon(1e-6));
  CHECK(tiny.second == Rel(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(spad_threshold(0.0), DomainError);
  CHECK_THROWS_AS(spad_threshold(1.0 + 1e-12), DomainError);
  CHECK_THROWS_AS(spad_threshold(-0.5), DomainError);
}

TEST_CASE("spad_threshold at V = 1/2") {
  auto p = spad_threshold(0.5);
  CHECK(p.first == Rel(kPsHalf).epsilon(1e-12));
  CHECK(p.second == Rel(kPeHalf).epsilon(1e-12));

  auto printed = spad_threshold_printed(0.5);
  CHECK(printed.first == Rel(kPsHalf).epsilon(1e-12));
  CHECK(printed.second == Rel(kPePrintedHalf).epsilon(1e-12));
}

TEST_CASE("spad_threshold is the Fock-oracle click statistics of the stationary state") {
  for (double V : {0.05, 0.2, 0.5, 0.8, 0.97}) {
    GaussianPure g{stationary_intensity(V), V, 0.0};
    auto fock = fock::hbt_probs_fock(fock::gaussian_fock(g));
    auto p = spad_threshold(V);
    CHECK(p.first == Rel(fock.ps).epsilon(1e-9));
    CHECK(std::abs(p.second - fock.pe) < 1e-12);
  }
}

TEST_CASE("pnrd_threshold") {
  auto one = pnrd_threshold(1.0);
  CHECK(one.first == 0.0);
  CHECK(one.second == 0.0);
  auto tiny = pnrd_threshold(1e-4);
  CHECK(std::abs(tiny.first) < 1e-6);
  CHECK(tiny.second == Rel(1.0).epsilon(1e-6));
  auto half = pnrd_threshold(0.5);
  CHECK(half.first == Rel(kP1Half).epsilon(1e-12));
  CHECK(half.second == Rel(kP2Half).epsilon(1e-12));
  CHECK_THROWS_AS(pnrd_threshold(0.0), DomainError);
  CHECK_THROWS_AS(pnrd_threshold(2.0), DomainError);
}

TEST_CASE("near V = 1 the curves stay smooth") {
  // series branch against direct evaluation just outside it
  for (double eps : {1e-3, 1.9e-3, 2.1e-3, 5e-3}) {
    auto p = spad_threshold(1.0 - eps);
    GaussianPure g{stationary_intensity(1.0 - eps), 1.0 - eps, 0.0};
    auto c = gaussian_click_probs(g);
    CHECK(p.first == Rel(c.ps).epsilon(1e-9));
    CHECK(p.second == Rel(c.pe).epsilon(1e-7));
    CHECK(p.second > 0.0);
  }
}

TEST_CASE("monotonicity on the check grid") {
  CHECK(spad_monotonicity_defect() == 0.0);
  CHECK(pnrd_monotonicity_defect() == 0.0);
  double prev = 2.0;
  for (double V : linspace(1e-3, 1.0, 2000)) {
    double s = spad_threshold(V).first;
    CHECK(s <= prev);
    prev = s;
  }
}

TEST_CASE("gaussian_click_probs") {
  auto vac = gaussian_click_probs({0.0, 1.0, 0.0});
  CHECK(vac.p0 == 1.0);
  CHECK(vac.p00 == 1.0);
  CHECK(vac.ps == 0.0);
  CHECK(vac.pe == 0.0);

  // squeezed vacuum: phase independent and equal to sum_n p_n 2^-n
  const double p0 = fock::hbt_probs_fock(fock::gaussian_fock({0.0, 0.5, 0.0})).p0;
  for (double phi : {0.0, 0.7, 2.0, 5.0})
    CHECK(gaussian_click_probs({0.0, 0.5, phi}).p0 == Rel(p0).epsilon(1e-12));
  // the boundary value 4 sqrt(V/((3+V)(1+3V))) e^{-0.3} needs the stationary intensity
  CHECK(gaussian_click_probs({stationary_intensity(0.5), 0.5, 0.0}).p0 ==
        Rel(4.0 * std::sqrt(0.5 / 8.75) * std::exp(-0.3)).epsilon(1e-13));

  CHECK_THROWS_AS(GaussianPure({-1.0, 1.0, 0.0}).validate(), DomainError);
  CHECK_THROWS_AS(GaussianPure({1.0, 0.0, 0.0}).validate(), DomainError);
}

TEST_CASE("coherent state: closed form vs Fock oracle") {
  // intensity is 2|<a>|^2, so intensity 1 is the coherent amplitude sqrt(1/2)
  auto c = gaussian_click_probs({1.0, 1.0, 0.0});
  auto f = fock::hbt_probs_fock(fock::coherent_fock(std::sqrt(0.5)));
  CHECK(c.ps == Rel(1.0 - std::exp(-0.25)).epsilon(1e-14));
  CHECK(c.pe == Rel(std::pow(1.0 - std::exp(-0.25), 2)).epsilon(1e-13));
  CHECK(c.ps == Rel(f.ps).epsilon(1e-12));
  CHECK(c.pe == Rel(f.pe).epsilon(1e-12));
}

TEST_CASE("gaussian_click_probs equals HBT of the Fock state on a grid") {
  for (double I : {0.1, 0.5, 2.0, 5.0})
    for (double V : {0.2, 0.6, 1.0})
      for (double phi : {0.0, 0.4, std::numbers::pi / 2, 2.5}) {
        GaussianPure g{I, V, phi};
        auto a = gaussian_click_probs(g);
        auto b = fock::hbt_probs_fock(fock::gaussian_fock(g));
        CHECK(a.p0 == Rel(b.p0).epsilon(1e-10));
        CHECK(a.p00 == Rel(b.p00).epsilon(1e-10));
      }
}

TEST_CASE("witness_bound") {
  CHECK(witness_bound(0.0) == Rel(1.0).epsilon(1e-10));
  // P_s ~ eps and P_e ~ eps^3 near V = 1, so the bound decays as |a|^{-1/2}
  double prev = 1.0;
  std::vector<double> scaled;
  for (double a : {-1e2, -1e4, -1e6, -1e8}) {
    const double w = witness_bound(a);
    CHECK(w < prev);
    scaled.push_back(w * std::sqrt(-a));
    prev = w;
  }
  CHECK(scaled[3] == Rel(scaled[2]).epsilon(1e-2));
  for (auto [a, v] : kOracle) CHECK(witness_bound(a) == Rel(v).epsilon(1e-8));
}

TEST_CASE("printed closed form disagrees with the oracle") {
  for (auto [a, v] : kOracle) {
    if (a == -0.5) continue;
    double printed = witness_optimum(a, SpadCurve::Printed).value;
    CHECK(std::abs(printed - v) / v > 1e-3);
  }
}

TEST_CASE("envelope invariance under intensity rescaling") {
  const double a = -4.0;
  for (double c : {0.5, 2.0}) {
    // max over I by scan and Brent, then the same over V
    auto over_I = [&](double V) {
      auto f = [&](double I) {
        auto p = gaussian_click_probs({c * I, V, 0.0});
        return p.ps + a * p.pe;
      };
      auto Is = linspace(0.0, 4.0 / c, 401);
      std::size_t k = 1;
      for (std::size_t i = 1; i + 1 < Is.size(); ++i)
        if (f(Is[i]) > f(Is[k])) k = i;
      return brent_maximize(f, Is[k - 1], Is[k], Is[k + 1], 1e-12).second;
    };
    auto Vs = linspace(0.05, 0.95, 91);
    std::size_t k = 1;
    for (std::size_t i = 1; i + 1 < Vs.size(); ++i)
      if (over_I(Vs[i]) > over_I(Vs[k])) k = i;
    const double best = brent_maximize(over_I, Vs[k - 1], Vs[k], Vs[k + 1], 1e-12).second;
    CHECK(best == Rel(witness_bound(a)).epsilon(1e-8));
  }
}

TEST_CASE("duality: every boundary point is a witness maximizer") {
  for (double V : {0.2, 0.4, 0.6, 0.8, 0.95}) {
    const double h = 1e-5;
    auto lo = spad_threshold(V - h);
    auto hi = spad_threshold(V + h);
    const double a = -(hi.first - lo.first) / (hi.second - lo.second);
    auto opt = witness_optimum(a);
    CHECK(opt.control == Rel(V).epsilon(1e-4));
    auto p = spad_threshold(V);
    CHECK(std::abs(qng_margin_spad(p.first, p.second)) < 1e-8);
  }
}

TEST_CASE("containment of random Gaussian states") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = -1.0;
  for (int i = 0; i < 10000; ++i) {
    GaussianPure g{8.0 * u(rng), std::exp(-5.0 * u(rng)), 2.0 * std::numbers::pi * u(rng)};
    auto p = gaussian_click_probs(g);
    worst = std::max(worst, qng_margin_spad(p.ps, p.pe));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("qng_margin_spad") {
  CHECK(std::abs(qng_margin_spad(0.0, 0.0)) < 1e-14);
  CHECK(qng_margin_spad(0.2917, 0.04) > 0.0);
  CHECK(qng_margin_spad(0.2917, 0.10) < 0.0);
  CHECK(qng_margin_spad(0.2917, 0.20) < 0.0);
  // a coherent state with P_e = 0.1 has P_s = sqrt(0.1) > 0.2917
  CHECK(qng_margin_spad(std::sqrt(0.1), 0.1) <= 1e-12);
  CHECK(qng_margin_spad(0.5, 0.0) > 0.0);
  CHECK_THROWS_AS(qng_margin_spad(1.5, 0.0), DomainError);
  CHECK_THROWS_AS(qng_margin_spad(0.5, -0.1), DomainError);
}

TEST_CASE("qng_margin_pnrd") {
  CHECK(std::abs(qng_margin_pnrd(0.0, 0.0)) < 1e-14);
  CHECK(qng_margin_pnrd(0.5, 0.0) > 0.0);
  auto h = pnrd_threshold(0.5);
  CHECK(std::abs(qng_margin_pnrd(h.first, h.second)) < 1e-10);
  CHECK(qng_margin_pnrd(h.first - 0.01, h.second) < 0.0);
  CHECK_THROWS_AS(qng_margin_pnrd(0.5, 1.2), DomainError);
}

TEST_CASE("pnrd witness against the Fock oracle") {
  const double a = -4.0;
  auto w = pnrd_witness_optimum(a);
  auto o = fock::pnrd_bound_oracle(a);
  CHECK(w.value == Rel(o.value).epsilon(1e-6));
}

TEST_CASE("nonclassicality_margin") {
  CHECK(nonclassicality_margin(0.0, 0.0) == 0.0);
  CHECK(nonclassicality_margin(0.5, 0.1) == Rel(0.15));
  for (double I : linspace(0.0, 10.0, 101)) {
    auto p = gaussian_click_probs({I, 1.0, 0.0});
    CHECK(nonclassicality_margin(p.ps, p.pe) <= 1e-15);
  }
}
