#include "qng/sweep.hpp"

#include <algorithm>
#include <cmath>

#include "qng/boundary.hpp"
#include "qng/errors.hpp"
#include "qng/numeric.hpp"
#include "qng/parallel.hpp"

namespace qng {

namespace {

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

std::string join_flags(const std::vector<std::string>& f) {
  std::string out;
  for (const auto& s : f) {
    if (!out.empty()) out += ';';
    out += s;
  }
  return out;
}

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ' ');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

Criterion parse_criterion(const std::string& name) {
  if (name == "spad") return Criterion::Spad;
  if (name == "pnrd") return Criterion::Pnrd;
  if (name == "genoni") return Criterion::Genoni;
  if (name == "nonclassical") return Criterion::Nonclassical;
  if (name == "wigner_negativity" || name == "wigner-negativity") return Criterion::WignerNegativity;
  throw DomainError("unknown criterion '" + name +
                    "' (supported: spad, pnrd, genoni, nonclassical, wigner_negativity)");
}

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::Spad: return "spad";
    case Criterion::Pnrd: return "pnrd";
    case Criterion::Genoni: return "genoni";
    case Criterion::Nonclassical: return "nonclassical";
    case Criterion::WignerNegativity: return "wigner_negativity";
  }
  return "spad";
}

const std::vector<Criterion>& all_criteria() {
  static const std::vector<Criterion> all{Criterion::Spad, Criterion::Pnrd, Criterion::Genoni,
                                          Criterion::Nonclassical, Criterion::WignerNegativity};
  return all;
}

bool criterion_supported(Criterion c, NoiseKind k) {
  if (k != NoiseKind::Background) return true;
  return c != Criterion::Genoni && c != Criterion::WignerNegativity;
}

double criterion_margin(const HeraldedState& s, Criterion c, const NoiseSpec& n,
                        const QuadratureSpec& q) {
  n.validate();
  const NoiseKind kind = n.effective_kind();
  if (!criterion_supported(c, kind))
    throw UnsupportedError("criterion " + to_string(c) + " is not modelled with " +
                           to_string(kind) + " noise");
  switch (c) {
    case Criterion::Spad: {
      const ClickStats cs = click_probabilities(s, n, q);
      return qng_margin_spad(clamp01(cs.ps), clamp01(cs.pe));
    }
    case Criterion::Nonclassical: {
      const ClickStats cs = click_probabilities(s, n, q);
      return nonclassicality_margin(cs.ps, cs.pe);
    }
    case Criterion::Pnrd: {
      const FockProbs f = noisy_fock_probabilities(s, n, q);
      return qng_margin_pnrd(clamp01(f.p1), clamp01(f.p2plus));
    }
    case Criterion::Genoni:
      return genoni_margin(noisy_wigner_at(s, n, 0.0), noisy_mean_photon(s, n));
    case Criterion::WignerNegativity:
      return -noisy_min_wigner(s, n).value;
  }
  throw UnsupportedError("unknown criterion");
}

void Bracket::validate() const {
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi))
    throw DomainError("alpha2 bracket must be positive and ordered");
}

MaxAlpha2 max_alpha2(const CavityParams& p, Criterion c, const NoiseSpec& n, const Bracket& b,
                     const QuadratureSpec& q) {
  p.validate();
  n.validate();
  b.validate();
  auto certified = [&](double x) {
    return criterion_margin(derive_state(p, std::sqrt(x)), c, n, q) > 0.0;
  };
  const auto xs = logspace(b.lo, b.hi, 64);
  std::vector<char> ok(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ok[i] = certified(xs[i]);
  MaxAlpha2 out;
  if (!ok.front()) return out;
  int changes = 0;
  std::size_t last_true = 0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    if (ok[i] != ok[i + 1]) ++changes;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (ok[i]) last_true = i;
  if (changes == 0) {
    out.value = b.hi;
    out.unbounded = true;
    return out;
  }
  if (changes > 1) {
    out.value = xs[last_true];
    out.nonmonotonic = true;
    return out;
  }
  out.value = bisect_last_true(certified, xs[last_true], xs[last_true + 1], true, 1e-6);
  return out;
}

void Scenario::validate() const {
  params.validate();
  noise.validate();
  bracket.validate();
  quadrature.validate();
  const auto& vars = sweep_variables();
  if (std::find(vars.begin(), vars.end(), sweep.variable) == vars.end()) {
    std::string names;
    for (const auto& v : vars) names += (names.empty() ? "" : ", ") + v;
    throw DomainError("unsupported sweep variable '" + sweep.variable + "' (supported: " + names + ")");
  }
  if (!(sweep.lower < sweep.upper)) throw DomainError("sweep lower must be below upper");
  if (sweep.points < 2) throw DomainError("sweep needs at least 2 points");
  if (sweep.scale == Scale::Log && !(sweep.lower > 0.0))
    throw DomainError("log sweep needs a positive lower bound");
  if (kappa_r_fraction) {
    if (!(*kappa_r_fraction > 0.0)) throw DomainError("kappa_r fraction must be positive");
    if (sweep.variable == "kappa_r")
      throw DomainError("kappa_r cannot be swept while it follows its optimum");
  }
}

const std::vector<std::string>& sweep_variables() {
  static const std::vector<std::string> vars{"kappa_r", "kappa_l", "gamma", "nbar", "kappa_l_gamma"};
  return vars;
}

std::vector<double> sweep_grid(const SweepSpec& s) {
  const auto n = static_cast<std::size_t>(s.points);
  return s.scale == Scale::Log ? logspace(s.lower, s.upper, n) : linspace(s.lower, s.upper, n);
}

void apply_sweep_value(const Scenario& sc, double value, CavityParams& p, NoiseSpec& n) {
  p = sc.params;
  n = sc.noise;
  const std::string& v = sc.sweep.variable;
  if (v == "kappa_r") p.kappa_r = value;
  else if (v == "kappa_l") p.kappa_l = value;
  else if (v == "gamma") p.gamma = value;
  else if (v == "nbar") n.nbar = value;
  else if (v == "kappa_l_gamma") {
    if (!(p.gamma > 0.0)) throw DomainError("kappa_l_gamma sweep needs gamma > 0");
    p.kappa_l = value / p.gamma;
  }
  if (sc.kappa_r_fraction) p.kappa_r = *sc.kappa_r_fraction * optimal_kappa_r(p.gamma, p.kappa_l);
}

SweepRow evaluate_row(const Scenario& sc, double value) {
  SweepRow row;
  row.swept_var = sc.sweep.variable;
  row.swept_value = value;
  std::vector<std::string> flags;
  try {
    CavityParams p;
    NoiseSpec n;
    apply_sweep_value(sc, value, p, n);
    row.eta = cumulative_eta(p);
    row.certified = criterion_margin(derive_state(p, std::sqrt(sc.bracket.lo)), sc.criterion, n,
                                     sc.quadrature) > 0.0;
    const MaxAlpha2 m = max_alpha2(p, sc.criterion, n, sc.bracket, sc.quadrature);
    if (!m.value) {
      flags.push_back("none_certifiable");
    } else {
      row.alpha2_max = m.value;
      const HeraldedState s = derive_state(p, std::sqrt(*m.value));
      const ClickStats cs = click_probabilities(s, n, sc.quadrature);
      row.ps = cs.ps;
      row.pe = cs.pe;
      row.ph = herald_probability(s);
      row.rate = row.ph * row.pe;
      if (m.unbounded) flags.push_back("unbounded_in_bracket");
      if (m.nonmonotonic) flags.push_back("nonmonotonic");
    }
  } catch (const std::exception& e) {
    row.alpha2_max.reset();
    row.certified = false;
    row.ps = row.pe = row.ph = row.rate = 0.0;
    flags.assign({"error=" + sanitize(e.what())});
  }
  row.flags = join_flags(flags);
  return row;
}

std::vector<SweepRow> run_sweep(const Scenario& sc) {
  sc.validate();
  const auto grid = sweep_grid(sc.sweep);
  std::vector<SweepRow> rows(grid.size());
  const long n = static_cast<long>(grid.size());
#pragma omp parallel for schedule(dynamic) num_threads(thread_count())
  for (long i = 0; i < n; ++i)
    rows[static_cast<std::size_t>(i)] = evaluate_row(sc, grid[static_cast<std::size_t>(i)]);
  return rows;
}

std::vector<SweepRow> run_sweep_serial(const Scenario& sc) {
  sc.validate();
  const auto grid = sweep_grid(sc.sweep);
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (double v : grid) rows.push_back(evaluate_row(sc, v));
  return rows;
}

}  // namespace qng
