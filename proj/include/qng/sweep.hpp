#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qng/cavity.hpp"
#include "qng/noise.hpp"

namespace qng {

enum class Criterion { Spad, Pnrd, Genoni, Nonclassical, WignerNegativity };

Criterion parse_criterion(const std::string& name);
std::string to_string(Criterion c);
const std::vector<Criterion>& all_criteria();

/// Whether criterion_margin models this (criterion, noise) pair.
bool criterion_supported(Criterion c, NoiseKind k);

/// Signed margin of the state under a criterion; positive means certified.
/// Throws UnsupportedError for pairs rejected by criterion_supported.
double criterion_margin(const HeraldedState& s, Criterion c, const NoiseSpec& n,
                        const QuadratureSpec& q = {});

struct Bracket {
  double lo = 1e-8;
  double hi = 16.0;
  void validate() const;
};

struct MaxAlpha2 {
  std::optional<double> value;  // empty: nothing certifiable in the bracket
  bool unbounded = false;       // still certified at the upper end
  bool nonmonotonic = false;    // more than one sign change on the scan
};

/// Largest |alpha|^2 in the bracket with a positive margin: a 64-point
/// log-spaced scan, then geometric bisection to relative tolerance 1e-6.
MaxAlpha2 max_alpha2(const CavityParams& p, Criterion c, const NoiseSpec& n, const Bracket& b = {},
                     const QuadratureSpec& q = {});

enum class Scale { Linear, Log };

struct SweepSpec {
  std::string variable = "kappa_r";
  double lower = 0.05;
  double upper = 3.0;
  int points = 200;
  Scale scale = Scale::Linear;
};

struct Scenario {
  CavityParams params;
  SweepSpec sweep;
  Criterion criterion = Criterion::Spad;
  NoiseSpec noise;
  Bracket bracket;
  QuadratureSpec quadrature;
  /// When set, kappa_r follows optimal_kappa_r(gamma, kappa_l) times this factor.
  std::optional<double> kappa_r_fraction;

  void validate() const;
};

struct SweepRow {
  std::string swept_var;
  double swept_value = 0.0;
  std::optional<double> eta;
  std::optional<double> alpha2_max;
  double ps = 0.0, pe = 0.0, ph = 0.0, rate = 0.0;
  bool certified = false;
  std::string flags;
};

/// Variables accepted by SweepSpec::variable.
const std::vector<std::string>& sweep_variables();

/// Grid values of the sweep.
std::vector<double> sweep_grid(const SweepSpec& s);

/// Parameters and noise at one grid value.
void apply_sweep_value(const Scenario& sc, double value, CavityParams& p, NoiseSpec& n);

SweepRow evaluate_row(const Scenario& sc, double value);

/// Rows in grid order; rows are evaluated concurrently (QNG_THREADS caps the
/// thread count). Per-row failures are reported in the flags column.
std::vector<SweepRow> run_sweep(const Scenario& sc);
std::vector<SweepRow> run_sweep_serial(const Scenario& sc);

}  // namespace qng
