#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "qng/boundary.hpp"
#include "qng/cavity.hpp"
#include "qng/errors.hpp"
#include "qng/noise.hpp"
#include "qng/numeric.hpp"
#include "qng/sweep.hpp"
#include "qng/validate.hpp"

namespace qng::cli {

using json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Values gathered from --config and the command line; flags win.
struct Settings {
  std::optional<double> gamma, kappa_l, kappa_r, alpha2, nbar, kappa_r_fraction;
  std::optional<double> alpha2_lo, alpha2_hi;
  std::optional<std::string> noise, criterion, format, output, variable, scale, kind;
  std::optional<double> lower, upper;
  std::optional<int> points;
  std::optional<long long> seed;
  std::optional<double> perturb_eta;
  bool serial = false;
};

template <class T>
void take(const json& j, const char* key, std::optional<T>& dst) {
  if (j.contains(key) && !j.at(key).is_null()) dst = j.at(key).get<T>();
}

void load_config(const std::string& path, Settings& s) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const std::exception& e) {
    throw UsageError("invalid config file " + path + ": " + e.what());
  }
  try {
    take(j, "gamma", s.gamma);
    take(j, "kappa_l", s.kappa_l);
    take(j, "kappa_r", s.kappa_r);
    take(j, "alpha2", s.alpha2);
    take(j, "noise", s.noise);
    take(j, "nbar", s.nbar);
    take(j, "criterion", s.criterion);
    take(j, "kappa_r_fraction", s.kappa_r_fraction);
    take(j, "format", s.format);
    take(j, "output", s.output);
    take(j, "seed", s.seed);
    take(j, "kind", s.kind);
    take(j, "points", s.points);
    if (j.contains("sweep")) {
      const json& w = j.at("sweep");
      take(w, "variable", s.variable);
      take(w, "lower", s.lower);
      take(w, "upper", s.upper);
      take(w, "points", s.points);
      take(w, "scale", s.scale);
    }
    if (j.contains("alpha2_bracket")) {
      const json& b = j.at("alpha2_bracket");
      if (!b.is_array() || b.size() != 2) throw UsageError("alpha2_bracket must be [lo, hi]");
      s.alpha2_lo = b[0].get<double>();
      s.alpha2_hi = b[1].get<double>();
    }
  } catch (const json::exception& e) {
    throw UsageError("invalid config value: " + std::string(e.what()));
  }
}

// Copies a command-line value over the config value when the flag was given.
template <class T>
void overlay(const CLI::Option* opt, const T& value, std::optional<T>& dst) {
  if (opt->count() > 0) dst = value;
}

template <class T>
T need(const std::optional<T>& v, const char* name) {
  if (!v) throw UsageError(std::string("missing required value --") + name);
  return *v;
}

CavityParams params_from(const Settings& s, bool need_kappa_r) {
  CavityParams p;
  p.gamma = need(s.gamma, "gamma");
  p.kappa_l = need(s.kappa_l, "kappa-l");
  p.kappa_r = need_kappa_r ? need(s.kappa_r, "kappa-r") : s.kappa_r.value_or(1.0);
  p.validate();
  return p;
}

NoiseSpec noise_from(const Settings& s) {
  NoiseSpec n;
  n.kind = parse_noise_kind(s.noise.value_or("none"));
  n.nbar = s.nbar.value_or(0.0);
  n.validate();
  if (n.kind != NoiseKind::None && !s.nbar) throw UsageError("--nbar is required with --noise");
  return n;
}

void write_output(const std::optional<std::string>& path, const std::string& text, std::ostream& out) {
  if (!path || *path == "-") {
    out << text;
    return;
  }
  std::ofstream f(*path, std::ios::binary);
  if (!f) throw UsageError("cannot write output file " + *path);
  f << text;
  if (!f) throw UsageError("failed writing output file " + *path);
}

json complex_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

std::string eval_report(const CavityParams& p, double alpha2, const NoiseSpec& n, bool as_json) {
  const HeraldedState s = derive_state(p, std::sqrt(alpha2));
  const ClickStats c = click_probabilities(s, n);
  const FockProbs f = noisy_fock_probabilities(s, n);
  json j;
  j["eta"] = s.eta();
  j["alpha_g"] = complex_json(s.alpha_g());
  j["alpha_e"] = complex_json(s.alpha_e());
  j["Ph"] = herald_probability(s);
  j["P0"] = c.p0;
  j["P00"] = c.p00;
  j["Ps"] = c.ps;
  j["Pe"] = c.pe;
  j["p0"] = f.p0;
  j["p1"] = f.p1;
  j["p2plus"] = f.p2plus;
  j["mean_photon"] = noisy_mean_photon(s, n);
  const bool wigner_ok = criterion_supported(Criterion::WignerNegativity, n.effective_kind());
  if (wigner_ok) {
    j["W00"] = noisy_wigner_at(s, n, 0.0);
    const WignerMin m = noisy_min_wigner(s, n);
    j["minW"] = m.value;
    j["minW_at"] = complex_json(m.location);
  } else {
    j["W00"] = nullptr;
    j["minW"] = nullptr;
    j["minW_at"] = nullptr;
  }
  json margins;
  for (Criterion cr : all_criteria()) {
    if (criterion_supported(cr, n.effective_kind()))
      margins[to_string(cr)] = criterion_margin(s, cr, n);
    else
      margins[to_string(cr)] = nullptr;
  }
  j["margins"] = margins;
  if (as_json) return j.dump(2) + "\n";
  std::ostringstream os;
  auto line = [&os](const std::string& k, const json& v) {
    os << k << " = ";
    if (v.is_null()) os << "unsupported";
    else if (v.is_object() && v.contains("re"))
      os << format_number(v["re"].get<double>()) << (v["im"].get<double>() < 0 ? " - " : " + ")
         << format_number(std::abs(v["im"].get<double>())) << "i";
    else os << format_number(v.get<double>());
    os << "\n";
  };
  for (const auto& [k, v] : j.items()) {
    if (k == "margins") continue;
    line(k, v);
  }
  for (const auto& [k, v] : j["margins"].items()) line("margin." + k, v);
  return os.str();
}

Scale parse_scale(const std::string& s) {
  if (s == "linear") return Scale::Linear;
  if (s == "log") return Scale::Log;
  throw UsageError("scale must be linear or log");
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "swept_var,swept_value,eta,alpha2_max,Ps,Pe,Ph,rate,certified,flags\n";
  for (const auto& r : rows) {
    os << r.swept_var << ',' << format_number(r.swept_value) << ','
       << (r.eta ? format_number(*r.eta) : "") << ',';
    if (r.alpha2_max) {
      os << format_number(*r.alpha2_max) << ',' << format_number(r.ps) << ',' << format_number(r.pe)
         << ',' << format_number(r.ph) << ',' << format_number(r.rate);
    } else {
      os << (r.flags.rfind("error=", 0) == 0 ? "" : "none") << ",,,,";
    }
    os << ',' << (r.certified ? "true" : "false") << ',' << r.flags << '\n';
  }
  return os.str();
}

std::string sweep_json(const std::vector<SweepRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json j;
    j["swept_var"] = r.swept_var;
    j["swept_value"] = r.swept_value;
    j["eta"] = r.eta ? json(*r.eta) : json(nullptr);
    const bool have = r.alpha2_max.has_value();
    j["alpha2_max"] = have ? json(*r.alpha2_max) : json(nullptr);
    j["Ps"] = have ? json(r.ps) : json(nullptr);
    j["Pe"] = have ? json(r.pe) : json(nullptr);
    j["Ph"] = have ? json(r.ph) : json(nullptr);
    j["rate"] = have ? json(r.rate) : json(nullptr);
    j["certified"] = r.certified;
    j["flags"] = r.flags;
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum non-Gaussianity thresholds for light from an atom in a cavity.\n"
               "All rates are in units of the atom-cavity coupling g."};
  app.require_subcommand(1);
  std::string config;
  app.add_option("--config", config, "JSON file with default values; flags override it");

  Settings cl;
  double gamma = 0, kappa_l = 0, kappa_r = 0, alpha2 = 0, nbar = 0, fraction = 0, lo = 0, hi = 0;
  double lower = 0, upper = 0, perturb = 0;
  int points = 0;
  long long seed = 1;
  std::string noise, criterion, format, output, variable, scale, kind;

  auto rates = [&](CLI::App* sub, bool with_kappa_r) {
    std::vector<CLI::Option*> o;
    o.push_back(sub->add_option("--gamma", gamma, "spontaneous emission rate (units of g)"));
    o.push_back(sub->add_option("--kappa-l", kappa_l, "loss-side mirror rate (units of g)"));
    o.push_back(with_kappa_r ? sub->add_option("--kappa-r", kappa_r, "detector-side mirror rate (units of g)")
                             : nullptr);
    return o;
  };

  CLI::App* eval = app.add_subcommand("eval", "evaluate one heralded state");
  auto eval_rates = rates(eval, true);
  auto* o_alpha2 = eval->add_option("--alpha2", alpha2, "incident intensity |alpha|^2");
  auto* o_noise = eval->add_option("--noise", noise, "none | poissonian | bose-einstein | background");
  auto* o_nbar = eval->add_option("--nbar", nbar, "mean number of noise photons");
  auto* o_format = eval->add_option("--format", format, "text | json");
  auto* o_output = eval->add_option("--output", output, "output path (default stdout)");

  CLI::App* sweep = app.add_subcommand("sweep", "threshold intensity along a parameter sweep");
  auto sweep_rates = rates(sweep, true);
  auto* s_var = sweep->add_option("--var", variable, "kappa_r | kappa_l | gamma | nbar | kappa_l_gamma");
  auto* s_lower = sweep->add_option("--lower", lower, "sweep lower bound");
  auto* s_upper = sweep->add_option("--upper", upper, "sweep upper bound");
  auto* s_points = sweep->add_option("--points", points, "number of grid points (>= 2)");
  auto* s_scale = sweep->add_option("--scale", scale, "linear | log");
  auto* s_crit = sweep->add_option("--criterion", criterion,
                                   "spad | pnrd | genoni | nonclassical | wigner_negativity");
  auto* s_noise = sweep->add_option("--noise", noise, "none | poissonian | bose-einstein | background");
  auto* s_nbar = sweep->add_option("--nbar", nbar, "mean number of noise photons");
  auto* s_frac = sweep->add_option("--kappa-r-opt-fraction", fraction,
                                   "set kappa_r to this multiple of its eta-maximizing value");
  auto* s_lo = sweep->add_option("--alpha2-lo", lo, "lower end of the |alpha|^2 bracket");
  auto* s_hi = sweep->add_option("--alpha2-hi", hi, "upper end of the |alpha|^2 bracket");
  auto* s_format = sweep->add_option("--format", format, "csv | json");
  auto* s_output = sweep->add_option("--output", output, "output path (default stdout)");
  bool serial = false;
  sweep->add_flag("--serial", serial, "evaluate rows on one thread");

  CLI::App* thr = app.add_subcommand("threshold", "Gaussian boundary curve as CSV control,first,second");
  auto* t_kind = thr->add_option("--kind", kind, "spad | pnrd | spad-printed");
  auto* t_points = thr->add_option("--points", points, "number of points (>= 2)");
  auto* t_output = thr->add_option("--output", output, "output path (default stdout)");

  CLI::App* val = app.add_subcommand("validate", "run the analytic-vs-oracle and invariant suites");
  auto* v_seed = val->add_option("--seed", seed, "seed for randomized parameter draws");
  auto* v_perturb = val->add_option("--perturb-eta", perturb,
                                    "relative perturbation of eta (harness self-test)");
  auto* v_output = val->add_option("--output", output, "report path (default stdout)");

  std::vector<std::string> rev(args.size() > 0 ? args.begin() + 1 : args.begin(), args.end());
  std::reverse(rev.begin(), rev.end());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kSuccess;
    }
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    Settings s;
    if (!config.empty()) load_config(config, s);
    auto overlay_rates = [&](const std::vector<CLI::Option*>& o) {
      overlay(o[0], gamma, s.gamma);
      overlay(o[1], kappa_l, s.kappa_l);
      if (o[2]) overlay(o[2], kappa_r, s.kappa_r);
    };
    if (eval->parsed()) {
      overlay_rates(eval_rates);
      overlay(o_alpha2, alpha2, s.alpha2);
      overlay(o_noise, noise, s.noise);
      overlay(o_nbar, nbar, s.nbar);
      overlay(o_format, format, s.format);
      overlay(o_output, output, s.output);
      const double x = need(s.alpha2, "alpha2");
      if (!(x > 0.0) || !std::isfinite(x)) throw UsageError("alpha2 must be positive");
      const CavityParams p = params_from(s, true);
      const NoiseSpec n = noise_from(s);
      const std::string fmt = s.format.value_or("text");
      if (fmt != "text" && fmt != "json") throw UsageError("format must be text or json");
      write_output(s.output, eval_report(p, x, n, fmt == "json"), out);
      return kSuccess;
    }
    if (sweep->parsed()) {
      overlay_rates(sweep_rates);
      overlay(s_var, variable, s.variable);
      overlay(s_lower, lower, s.lower);
      overlay(s_upper, upper, s.upper);
      overlay(s_points, points, s.points);
      overlay(s_scale, scale, s.scale);
      overlay(s_crit, criterion, s.criterion);
      overlay(s_noise, noise, s.noise);
      overlay(s_nbar, nbar, s.nbar);
      overlay(s_frac, fraction, s.kappa_r_fraction);
      overlay(s_lo, lo, s.alpha2_lo);
      overlay(s_hi, hi, s.alpha2_hi);
      overlay(s_format, format, s.format);
      overlay(s_output, output, s.output);
      Scenario sc;
      sc.sweep.variable = need(s.variable, "var");
      sc.sweep.lower = need(s.lower, "lower");
      sc.sweep.upper = need(s.upper, "upper");
      sc.sweep.points = need(s.points, "points");
      sc.sweep.scale = parse_scale(s.scale.value_or("linear"));
      const bool kr_swept = sc.sweep.variable == "kappa_r" || s.kappa_r_fraction.has_value();
      if (sc.sweep.variable != "gamma" && !s.gamma) throw UsageError("missing required value --gamma");
      if (sc.sweep.variable != "kappa_l" && sc.sweep.variable != "kappa_l_gamma" && !s.kappa_l)
        throw UsageError("missing required value --kappa-l");
      sc.params = {s.gamma.value_or(0.0), s.kappa_l.value_or(0.0),
                   kr_swept ? s.kappa_r.value_or(1.0) : need(s.kappa_r, "kappa-r")};
      sc.criterion = parse_criterion(s.criterion.value_or("spad"));
      sc.noise.kind = parse_noise_kind(s.noise.value_or("none"));
      sc.noise.nbar = s.nbar.value_or(0.0);
      sc.kappa_r_fraction = s.kappa_r_fraction;
      if (s.alpha2_lo) sc.bracket.lo = *s.alpha2_lo;
      if (s.alpha2_hi) sc.bracket.hi = *s.alpha2_hi;
      const std::string fmt = s.format.value_or("csv");
      if (fmt != "csv" && fmt != "json") throw UsageError("format must be csv or json");
      sc.validate();
      const auto rows = serial ? run_sweep_serial(sc) : run_sweep(sc);
      write_output(s.output, fmt == "csv" ? sweep_csv(rows) : sweep_json(rows), out);
      return kSuccess;
    }
    if (thr->parsed()) {
      overlay(t_kind, kind, s.kind);
      overlay(t_points, points, s.points);
      overlay(t_output, output, s.output);
      const std::string k = s.kind.value_or("spad");
      const int n = s.points.value_or(200);
      if (n < 2) throw UsageError("points must be at least 2");
      if (k != "spad" && k != "pnrd" && k != "spad-printed")
        throw UsageError("kind must be spad, pnrd or spad-printed");
      std::ostringstream os;
      os << "control,first,second\n";
      for (int i = 1; i <= n; ++i) {
        const double c = static_cast<double>(i) / n;
        const ThresholdPoint p = k == "spad"  ? spad_threshold(c)
                                 : k == "pnrd" ? pnrd_threshold(c)
                                               : spad_threshold_printed(c);
        os << format_number(p.control) << ',' << format_number(p.first) << ','
           << format_number(p.second) << '\n';
      }
      write_output(s.output, os.str(), out);
      return kSuccess;
    }
    if (val->parsed()) {
      overlay(v_seed, seed, s.seed);
      overlay(v_perturb, perturb, s.perturb_eta);
      overlay(v_output, output, s.output);
      ValidateOptions vo;
      const long long sd = s.seed.value_or(1);
      if (sd < 0) throw UsageError("seed must be non-negative");
      vo.seed = static_cast<std::uint64_t>(sd);
      vo.eta_perturbation = s.perturb_eta.value_or(0.0);
      const auto results = run_validation(vo);
      write_output(s.output, format_report(results), out);
      return all_passed(results) ? kSuccess : kValidationFailure;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const UnsupportedError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  }
  return kUsageError;
}

}  // namespace qng::cli
