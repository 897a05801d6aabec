#ifndef SEMISCAT_SCAN_HPP
#define SEMISCAT_SCAN_HPP

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "semiscat/core.hpp"
#include "semiscat/critical.hpp"
#include "semiscat/delta_step.hpp"
#include "semiscat/eckart.hpp"
#include "semiscat/parallel.hpp"
#include "semiscat/profile.hpp"
#include "semiscat/transfer.hpp"

namespace semiscat {

inline constexpr const char* kBuildId = "semiscat-1.0.0";

enum class ModelKind { DeltaStep, Eckart, ErfGauss };
enum class Engine { Analytic, Numeric, Both };
enum class Format { Csv, Json };

inline const char* to_string(ModelKind m) {
  switch (m) {
    case ModelKind::DeltaStep: return "delta-step";
    case ModelKind::Eckart: return "eckart";
    case ModelKind::ErfGauss: return "erf-gauss";
  }
  return "?";
}
inline const char* to_string(Engine e) {
  switch (e) {
    case Engine::Analytic: return "analytic";
    case Engine::Numeric: return "numeric";
    case Engine::Both: return "both";
  }
  return "?";
}

/// Invalid model or scan parameters (CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Model descriptor as given on the command line. For the Eckart model V2 is
/// either explicit or derived from (q, n).
struct ModelSpec {
  ModelKind kind = ModelKind::DeltaStep;
  double v1 = 0.0;
  cplx v2;
  double a = 1.0;
  std::optional<double> q;
  std::optional<int> n;
  Units units{};

  /// Fills V2 from (q, n) when given and checks the parameter domain.
  void resolve() {
    if (!std::isfinite(v1)) throw ConfigError("V1 must be finite");
    if (kind != ModelKind::DeltaStep && !(a > 0.0)) throw ConfigError("width a must be positive");
    if (q || n) {
      if (kind != ModelKind::Eckart) throw ConfigError("--q/--n apply to the eckart model only");
      if (!q || !n) throw ConfigError("--q and --n must be given together");
      if (!(*q > 0.0)) throw ConfigError("q must be positive");
      if (*n < 0) throw ConfigError("n must be non-negative");
      v2 = eckart_v2_for(a, *q, *n, units);
    }
    if (v2.real() < 0.0) throw ConfigError("Re V2 must be non-negative");
  }

  [[nodiscard]] bool has_closed_form() const { return kind != ModelKind::ErfGauss; }

  [[nodiscard]] PotentialProfile profile() const {
    switch (kind) {
      case ModelKind::DeltaStep: return PotentialProfile{DeltaStep{v1, v2}};
      case ModelKind::Eckart: return PotentialProfile{Eckart{v1, v2, a}};
      case ModelKind::ErfGauss: return PotentialProfile{ErfGauss{v1, v2, a}};
    }
    throw ConfigError("unknown model");
  }
  [[nodiscard]] DeltaStepParams delta_params() const { return {v1, v2, units}; }
  [[nodiscard]] EckartParams eckart_params() const { return {v1, v2, a, units}; }
};

/// Column groups of the scan output.
struct OutputSet {
  bool amplitudes = true;
  bool transmission = true;
  bool reflection_left = true;
  bool reflection_right = true;
  bool det_forward = true;
  bool det_reversed = true;

  static OutputSet parse(const std::vector<std::string>& names) {
    OutputSet o{false, false, false, false, false, false};
    for (const auto& n : names) {
      if (n == "amplitudes") o.amplitudes = true;
      else if (n == "T") o.transmission = true;
      else if (n == "R_L") o.reflection_left = true;
      else if (n == "R_R") o.reflection_right = true;
      else if (n == "abs_det_S_fwd") o.det_forward = true;
      else if (n == "abs_det_S_rev") o.det_reversed = true;
      else throw ConfigError("unknown output column group: " + n);
    }
    return o;
  }
};

struct ScanConfig {
  ModelSpec model;
  double e_min = 0.0;
  double e_max = 0.0;
  std::size_t steps = 0;
  OutputSet outputs;
  Engine engine = Engine::Analytic;
  double cap = 1e12;
  std::string out_path;
  Format format = Format::Csv;
  double step_tol = 1e-12;
  double eps_pot = 1e-12;
  unsigned threads = 0;

  void validate() {
    model.resolve();
    if (!(e_min > 0.0)) throw ConfigError("emin must be positive");
    if (!(e_max > e_min)) throw ConfigError("emax must exceed emin");
    if (steps < 2) throw ConfigError("steps must be at least 2");
    if (!(cap > 0.0)) throw ConfigError("cap must be positive");
    if (!(step_tol > 0.0)) throw ConfigError("step tolerance must be positive");
    if (engine != Engine::Numeric && !model.has_closed_form())
      throw ConfigError(std::string(to_string(model.kind)) + " has no closed form; use --engine numeric");
  }

  [[nodiscard]] double energy(std::size_t i) const {
    if (i + 1 == steps) return e_max;
    return e_min + (e_max - e_min) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
};

/// Values of one engine at one energy. Probabilities are NaN when the right
/// channel is closed; values above the cap are clipped and flagged.
struct EngineValues {
  std::array<cplx, 4> amplitudes{};  ///< t_L, r_L, r_R, t_R
  double transmission = 0.0;
  double reflection_left = 0.0;
  double reflection_right = 0.0;
  double det_forward = 0.0;
  double det_reversed = 0.0;
  bool capped = false;
  bool pole = false;  ///< forward S in pole state
  bool failed = false;
  std::string failure;
};

struct ScanRow {
  double energy = 0.0;
  WavenumberPair k;
  EngineValues primary;                ///< analytic, or numeric for engine=numeric
  std::optional<EngineValues> numeric;  ///< engine=both only
  [[nodiscard]] bool pole_flag() const { return primary.capped || (numeric && numeric->capped); }
};

struct ScanSummary {
  std::size_t rows = 0;
  std::size_t flagged_rows = 0;
  std::size_t failed_rows = 0;
  double max_transmission = 0.0;
  double max_transmission_energy = 0.0;
  double min_det_reversed = std::numeric_limits<double>::infinity();
  double min_det_reversed_energy = 0.0;
  std::optional<double> max_rel_discrepancy;  ///< engine=both
};

struct ScanResult {
  std::vector<ScanRow> rows;
  ScanSummary summary;
};

namespace detail {

inline double clip(double v, double cap, bool& capped) {
  if (std::isnan(v)) return v;
  if (!(v <= cap)) {
    capped = true;
    return cap;
  }
  return v;
}

inline cplx clip(cplx v, double cap, bool& capped) {
  const double m = std::abs(v);
  if (!std::isfinite(m)) {
    capped = true;
    return {cap, 0.0};
  }
  if (m > cap) {
    capped = true;
    return v * (cap / m);
  }
  return v;
}

inline void fill_from_s(EngineValues& ev, const PoleOr<ScatteringMatrix>& fwd, const PoleOr<ScatteringMatrix>& rev,
                        const WavenumberPair& k, double cap) {
  const double inf = std::numeric_limits<double>::infinity();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const bool open = k.right_channel_open();
  if (fwd.is_pole()) {
    ev.pole = true;
    for (auto& a : ev.amplitudes) a = clip(cplx(inf, 0.0), cap, ev.capped);
    ev.transmission = open ? clip(inf, cap, ev.capped) : nan;
    ev.reflection_left = open ? clip(inf, cap, ev.capped) : nan;
    ev.reflection_right = open ? clip(inf, cap, ev.capped) : nan;
    ev.det_forward = clip(inf, cap, ev.capped);
  } else {
    const ScatteringMatrix& s = fwd.value();
    ev.amplitudes = {clip(s.t_left, cap, ev.capped), clip(s.r_left, cap, ev.capped), clip(s.r_right, cap, ev.capped),
                     clip(s.t_right, cap, ev.capped)};
    if (open) {
      ev.transmission = clip(k.k_right.real() / k.k_left.real() * std::norm(s.t_left), cap, ev.capped);
      ev.reflection_left = clip(std::norm(s.r_left), cap, ev.capped);
      ev.reflection_right = clip(std::norm(s.r_right), cap, ev.capped);
    } else {
      ev.transmission = ev.reflection_left = ev.reflection_right = nan;
    }
    ev.det_forward = clip(std::abs(det_s(s)), cap, ev.capped);
  }
  ev.det_reversed = rev.is_pole() ? clip(inf, cap, ev.capped) : clip(std::abs(det_s(rev.value())), cap, ev.capped);
}

inline void mark_failed(EngineValues& ev, const std::string& why) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  ev = EngineValues{};
  for (auto& a : ev.amplitudes) a = {nan, nan};
  ev.transmission = ev.reflection_left = ev.reflection_right = ev.det_forward = ev.det_reversed = nan;
  ev.failed = true;
  ev.failure = why;
}

}  // namespace detail

/// Closed-form S(k) and S(-k).
inline std::pair<PoleOr<ScatteringMatrix>, PoleOr<ScatteringMatrix>> analytic_pair(const ModelSpec& m, double e) {
  if (m.kind == ModelKind::DeltaStep) return {amplitudes_delta(m.delta_params(), e, false), amplitudes_delta(m.delta_params(), e, true)};
  if (m.kind == ModelKind::Eckart) return {amplitudes_eckart(m.eckart_params(), e, false), amplitudes_eckart(m.eckart_params(), e, true)};
  throw ConfigError("model has no closed form");
}

inline EngineValues evaluate_analytic(const ModelSpec& m, double e, double cap) {
  EngineValues ev;
  try {
    const auto [fwd, rev] = analytic_pair(m, e);
    const WavenumberPair k = wavenumbers(e, m.v1, m.units);
    detail::fill_from_s(ev, fwd, rev, k, cap);
  } catch (const std::exception& ex) {
    detail::mark_failed(ev, ex.what());
  }
  return ev;
}

inline EngineValues evaluate_numeric_values(const PotentialProfile& profile, const IntegrationWindow& window,
                                            const Units& units, double e, double cap) {
  EngineValues ev;
  try {
    const NumericPoint p = evaluate_numeric(profile, e, window, units);
    detail::fill_from_s(ev, p.s(false), p.s(true), p.k, cap);
  } catch (const std::exception& ex) {
    detail::mark_failed(ev, ex.what());
  }
  return ev;
}

/// Largest amplitude difference relative to the largest amplitude magnitude.
inline double amplitude_discrepancy(const ScatteringMatrix& ref, const ScatteringMatrix& other) {
  const std::array<cplx, 4> a{ref.t_left, ref.r_left, ref.r_right, ref.t_right};
  const std::array<cplx, 4> b{other.t_left, other.r_left, other.r_right, other.t_right};
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    diff = std::max(diff, std::abs(a[i] - b[i]));
    scale = std::max(scale, std::abs(a[i]));
  }
  return scale == 0.0 ? diff : diff / scale;
}

inline ScanResult run_scan(ScanConfig config) {
  config.validate();
  const PotentialProfile profile = config.model.profile();
  IntegrationWindow window = default_window(profile, config.eps_pot, config.step_tol);

  ScanResult result;
  result.rows = parallel_map<ScanRow>(
      config.steps,
      [&](std::size_t i) {
        ScanRow row;
        row.energy = config.energy(i);
        row.k = wavenumbers(row.energy, config.model.v1, config.model.units);
        switch (config.engine) {
          case Engine::Analytic: row.primary = evaluate_analytic(config.model, row.energy, config.cap); break;
          case Engine::Numeric:
            row.primary = evaluate_numeric_values(profile, window, config.model.units, row.energy, config.cap);
            break;
          case Engine::Both:
            row.primary = evaluate_analytic(config.model, row.energy, config.cap);
            row.numeric = evaluate_numeric_values(profile, window, config.model.units, row.energy, config.cap);
            break;
        }
        return row;
      },
      config.threads);

  ScanSummary& s = result.summary;
  s.rows = result.rows.size();
  if (config.engine == Engine::Both) s.max_rel_discrepancy = 0.0;
  for (const ScanRow& r : result.rows) {
    if (r.pole_flag()) ++s.flagged_rows;
    if (r.primary.failed || (r.numeric && r.numeric->failed)) ++s.failed_rows;
    if (!r.primary.failed && r.primary.transmission > s.max_transmission) {
      s.max_transmission = r.primary.transmission;
      s.max_transmission_energy = r.energy;
    }
    if (!r.primary.failed && r.primary.det_reversed < s.min_det_reversed) {
      s.min_det_reversed = r.primary.det_reversed;
      s.min_det_reversed_energy = r.energy;
    }
    if (r.numeric && !r.pole_flag() && !r.primary.failed && !r.numeric->failed) {
      double diff = 0.0, scale = 0.0;
      for (std::size_t j = 0; j < 4; ++j) {
        diff = std::max(diff, std::abs(r.primary.amplitudes[j] - r.numeric->amplitudes[j]));
        scale = std::max(scale, std::abs(r.primary.amplitudes[j]));
      }
      s.max_rel_discrepancy = std::max(*s.max_rel_discrepancy, scale == 0.0 ? diff : diff / scale);
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

/// Shortest-round-trip-safe, locale independent: 17 significant digits.
inline std::string format_number(double v) {
  if (v == 0.0) v = 0.0;
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

/// Column names in emission order for a configuration.
inline std::vector<std::string> scan_columns(const ScanConfig& c) {
  std::vector<std::string> cols{"E", "k_L_re", "k_L_im", "k_R_re", "k_R_im"};
  auto block = [&](const std::string& suffix) {
    if (c.outputs.amplitudes)
      for (const char* n : {"t_L", "r_L", "r_R", "t_R"}) {
        cols.push_back(std::string(n) + "_re" + suffix);
        cols.push_back(std::string(n) + "_im" + suffix);
      }
    if (c.outputs.transmission) cols.push_back("T" + suffix);
    if (c.outputs.reflection_left) cols.push_back("R_L" + suffix);
    if (c.outputs.reflection_right) cols.push_back("R_R" + suffix);
    if (c.outputs.det_forward) cols.push_back("abs_det_S_fwd" + suffix);
    if (c.outputs.det_reversed) cols.push_back("abs_det_S_rev" + suffix);
  };
  block("");
  if (c.engine == Engine::Both) block("_num");
  cols.push_back("pole_flag");
  return cols;
}

inline std::vector<double> scan_values(const ScanConfig& c, const ScanRow& r) {
  std::vector<double> v{r.energy, r.k.k_left.real(), r.k.k_left.imag(), r.k.k_right.real(), r.k.k_right.imag()};
  auto block = [&](const EngineValues& ev) {
    if (c.outputs.amplitudes)
      for (const cplx a : ev.amplitudes) {
        v.push_back(a.real());
        v.push_back(a.imag());
      }
    if (c.outputs.transmission) v.push_back(ev.transmission);
    if (c.outputs.reflection_left) v.push_back(ev.reflection_left);
    if (c.outputs.reflection_right) v.push_back(ev.reflection_right);
    if (c.outputs.det_forward) v.push_back(ev.det_forward);
    if (c.outputs.det_reversed) v.push_back(ev.det_reversed);
  };
  block(r.primary);
  if (r.numeric) block(*r.numeric);
  v.push_back(r.pole_flag() ? 1.0 : 0.0);
  return v;
}

inline void write_csv(std::ostream& os, const ScanConfig& c, const ScanResult& res) {
  const auto cols = scan_columns(c);
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const ScanRow& r : res.rows) {
    const auto vals = scan_values(c, r);
    for (std::size_t i = 0; i + 1 < vals.size(); ++i) os << (i ? "," : "") << format_number(vals[i]);
    os << ',' << (r.pole_flag() ? 1 : 0) << '\n';
  }
}

inline nlohmann::json summary_json(const ScanSummary& s) {
  nlohmann::json j{{"rows", s.rows},
                   {"flagged_rows", s.flagged_rows},
                   {"failed_rows", s.failed_rows},
                   {"max_T", s.max_transmission},
                   {"max_T_energy", s.max_transmission_energy},
                   {"min_abs_det_S_rev", std::isfinite(s.min_det_reversed) ? nlohmann::json(s.min_det_reversed) : nlohmann::json()},
                   {"min_abs_det_S_rev_energy", s.min_det_reversed_energy}};
  if (s.max_rel_discrepancy) j["max_rel_discrepancy"] = *s.max_rel_discrepancy;
  return j;
}

inline nlohmann::json config_json(const ScanConfig& c) {
  nlohmann::json j{{"model", to_string(c.model.kind)},
                   {"v1", c.model.v1},
                   {"v2-re", c.model.v2.real()},
                   {"v2-im", c.model.v2.imag()},
                   {"emin", c.e_min},
                   {"emax", c.e_max},
                   {"steps", c.steps},
                   {"engine", to_string(c.engine)},
                   {"cap", c.cap},
                   {"step-tol", c.step_tol}};
  if (c.model.kind != ModelKind::DeltaStep) j["a"] = c.model.a;
  if (c.model.q) j["q"] = *c.model.q;
  if (c.model.n) j["n"] = *c.model.n;
  return j;
}

inline void write_json(std::ostream& os, const ScanConfig& c, const ScanResult& res) {
  const auto cols = scan_columns(c);
  nlohmann::json rows = nlohmann::json::array();
  for (const ScanRow& r : res.rows) {
    const auto vals = scan_values(c, r);
    nlohmann::json row = nlohmann::json::object();
    for (std::size_t i = 0; i + 1 < vals.size(); ++i)
      row[cols[i]] = std::isnan(vals[i]) ? nlohmann::json() : nlohmann::json(vals[i] == 0.0 ? 0.0 : vals[i]);
    row["pole_flag"] = r.pole_flag();
    rows.push_back(std::move(row));
  }
  nlohmann::json doc{{"metadata", {{"build", kBuildId}, {"config", config_json(c)}, {"columns", cols},
                                   {"summary", summary_json(res.summary)}}},
                     {"rows", std::move(rows)}};
  os << doc.dump(1) << '\n';
}

// ---------------------------------------------------------------------------
// Analytic-vs-numeric comparison
// ---------------------------------------------------------------------------

struct CompareReport {
  double max_rel_error = 0.0;
  double worst_energy = 0.0;
  std::size_t samples_used = 0;
  std::size_t samples_skipped = 0;
  double bound = 1e-6;
  std::string failure;  ///< integration failure message, if any
  [[nodiscard]] bool passed() const { return failure.empty() && samples_used > 0 && max_rel_error < bound; }
};

/// Compares closed-form and numeric S(k), S(-k) on a uniform grid. Points
/// where the closed form is singular or |t_L| exceeds `pole_guard` are
/// skipped.
inline CompareReport compare_engines(ModelSpec model, double e_lo, double e_hi, std::size_t samples,
                                     double step_tol = 1e-12, double bound = 1e-6, double pole_guard = 1e6) {
  model.resolve();
  if (!model.has_closed_form()) throw ConfigError("compare needs a model with a closed form");
  if (!(e_lo > 0.0) || !(e_hi > e_lo)) throw ConfigError("compare: invalid energy range");
  if (samples < 2) throw ConfigError("compare: need at least 2 samples");
  const PotentialProfile profile = model.profile();
  const IntegrationWindow window = default_window(profile, 1e-12, step_tol);

  CompareReport rep;
  rep.bound = bound;
  struct Sample {
    bool used = false;
    double err = 0.0;
    std::string failure;
  };
  const auto results = parallel_map<Sample>(samples, [&](std::size_t i) {
    const double e = i + 1 == samples ? e_hi : e_lo + (e_hi - e_lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
    Sample out;
    std::pair<PoleOr<ScatteringMatrix>, PoleOr<ScatteringMatrix>> ana{Pole{}, Pole{}};
    try {
      ana = analytic_pair(model, e);
    } catch (const UnphysicalPoint&) {
      return out;
    }
    if (ana.first.is_pole() || ana.second.is_pole() || std::abs(ana.first->t_left) > pole_guard) return out;
    try {
      const NumericPoint p = evaluate_numeric(profile, e, window, model.units);
      const auto nf = p.s(false), nr = p.s(true);
      if (nf.is_pole() || nr.is_pole()) return out;
      out.used = true;
      out.err = std::max(amplitude_discrepancy(*ana.first, *nf), amplitude_discrepancy(*ana.second, *nr));
    } catch (const AccuracyFailure& ex) {
      out.failure = ex.what();
    }
    return out;
  });
  for (std::size_t i = 0; i < results.size(); ++i) {
    const Sample& s = results[i];
    if (!s.failure.empty() && rep.failure.empty()) rep.failure = s.failure;
    if (!s.used) {
      ++rep.samples_skipped;
      continue;
    }
    ++rep.samples_used;
    if (s.err > rep.max_rel_error) {
      rep.max_rel_error = s.err;
      rep.worst_energy = i + 1 == samples ? e_hi : e_lo + (e_hi - e_lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Critical-point report
// ---------------------------------------------------------------------------

struct CriticalReport {
  std::optional<Regime> regime;
  std::vector<std::string> lines;
  std::optional<double> energy;
};

namespace detail {

inline std::string fmt(const char* f, double v) {
  std::array<char, 128> b{};
  std::snprintf(b.data(), b.size(), f, v);
  return b.data();
}

inline std::string fmt_c(cplx z) {
  std::array<char, 128> b{};
  std::snprintf(b.data(), b.size(), "%.10g%+.10gi", z.real(), z.imag());
  return b.data();
}

}  // namespace detail

inline CriticalReport critical_report(ModelSpec model, bool numeric, double search_lo = 0.0, double search_hi = 0.0) {
  using detail::fmt;
  using detail::fmt_c;
  model.resolve();
  CriticalReport rep;
  auto& out = rep.lines;
  const PotentialProfile profile = model.profile();

  auto numeric_ss = [&](double e) {
    const IntegrationWindow w = default_window(profile);
    const double res = singularity_residual(profile, e, w, model.units);
    const CpaVerdict v = verify_cpa(profile, e, 1e-6, {std::nullopt, model.units});
    out.push_back("numeric: |m11|/||M|| = " + fmt("%.3e", res) + ", |det S(-k)| = " + fmt("%.3e", v.dip) +
                  (v.is_cpa ? " (CPA confirmed)" : " (CPA NOT confirmed)"));
  };
  auto numeric_refl = [&](double e) {
    const IntegrationWindow w = default_window(profile);
    out.push_back("numeric: |r_R| = " + fmt("%.3e", reflection_residual(profile, Side::Right, e, w, model.units)));
  };
  auto right_side = [&](const ScatteringMatrix& s) {
    const double t_r = s.k.k_left.real() / s.k.k_right.real() * std::norm(s.t_right);
    return "r_R=" + fmt_c(s.r_right) + ", t_R=" + fmt_c(s.t_right) + ", T_R=" + fmt("%.12g", t_r);
  };

  if (model.kind == ModelKind::DeltaStep) {
    const DeltaStepParams p = model.delta_params();
    out.push_back("model delta-step V1=" + fmt("%.12g", p.v1) + " V2=" + fmt_c(p.v2));
    if (p.v2.imag() != 0.0) {
      out.push_back("complex V2: no closed-form real critical energy; use scan or the numeric search");
      return rep;
    }
    rep.regime = classify_regime(p);
    out.push_back(std::string("regime: ") + to_string(*rep.regime));
    if (*rep.regime == Regime::Boundary) {
      out.push_back("Boundary U^2=V1: no SS, no reflectionless energy");
    } else if (*rep.regime == Regime::SpectralSingularity && !ss_energy_delta(p).energy) {
      out.push_back("U^2+V1<=0: k_L+k_R exceeds U at every energy, no SS");
    } else if (*rep.regime == Regime::SpectralSingularity) {
      const double e = *ss_energy_delta(p).energy;
      rep.energy = e;
      const auto d = det_s_delta(p, e, true);
      const double dip = d.is_pole() ? std::numeric_limits<double>::infinity() : std::abs(d.value());
      out.push_back("SS at E=" + fmt("%.12g", e) + "; " + (dip < 1e-10 ? "CPA verified" : "CPA NOT verified") +
                    ", |det S(-k)|=" + fmt("%.3e", dip) + (dip < 1e-10 ? "<1e-10" : ""));
      if (numeric) numeric_ss(e);
    } else {
      const double e = *reflectionless_energy_delta(p).energy;
      rep.energy = e;
      const auto s = amplitudes_delta(p, e);
      out.push_back("right-reflectionless E_i=" + fmt("%.12g", e) + ", " + right_side(s.value()));
      if (numeric) numeric_refl(e);
    }
    return rep;
  }

  if (model.kind == ModelKind::Eckart) {
    const EckartParams p = model.eckart_params();
    out.push_back("model eckart V1=" + fmt("%.12g", p.v1) + " a=" + fmt("%.12g", p.a) + " V2=" + fmt_c(p.v2));
    std::optional<EckartFamily> fam;
    if (model.q && model.n) fam = EckartFamily{*model.q, *model.n};
    else fam = eckart_family(p);
    if (!fam) {
      out.push_back("V2 is outside the closed-form families (Im gamma not a positive half-integer)");
      return rep;
    }
    out.push_back("family q=" + fmt("%.12g", fam->q) + " n=" + std::to_string(fam->n));
    rep.regime = classify_regime(EckartFamilyParams{p.v1, p.a, fam->q, fam->n, p.units});
    out.push_back(std::string("regime: ") + to_string(*rep.regime));
    if (*rep.regime == Regime::Boundary) {
      out.push_back("Boundary W^2=V1: no SS, no reflectionless energy");
    } else if (*rep.regime == Regime::SpectralSingularity) {
      const auto c = ss_condition_eckart(p.v1, p.a, fam->q, fam->n, p.units);
      if (!c) {
        out.push_back("W^2+V1<=0: alpha+beta exceeds q at every energy, no SS");
        return rep;
      }
      rep.energy = c->energy;
      const CpaIdentity id = cpa_identity_check(p, c->energy);
      out.push_back("SS at E=" + fmt("%.12g", c->energy) + "; " + (id.residual <= 1e-10 ? "CPA verified" : "CPA NOT verified") +
                    ", |1/Y-1/Z|/|1/Z|=" + fmt("%.3e", id.residual));
      if (numeric) numeric_ss(c->energy);
    } else {
      const auto c = reflectionless_condition_eckart(p.v1, p.a, fam->q, fam->n, p.units);
      rep.energy = c->energy;
      const auto s = amplitudes_eckart(p, c->energy);
      const char* label = c->kind == ReflectionlessKind::Ei ? "E_i" : "E_z";
      out.push_back(std::string("right-reflectionless ") + label + "=" + fmt("%.12g", c->energy) + ", " + right_side(s.value()));
      if (numeric) numeric_refl(c->energy);
    }
    return rep;
  }

  // erf/Gauss: numeric search only.
  out.push_back("model erf-gauss V1=" + fmt("%.12g", model.v1) + " a=" + fmt("%.12g", model.a) + " V2=" + fmt_c(model.v2));
  if (search_hi <= search_lo) {
    search_lo = model.v1 + 0.1;
    search_hi = model.v1 + 10.0;
  }
  out.push_back("no closed form; numeric search on (" + fmt("%.6g", search_lo) + ", " + fmt("%.6g", search_hi) + ")");
  SearchOptions so;
  so.units = model.units;
  const auto ss = find_spectral_singularities(profile, search_lo, search_hi, 0, so);
  for (const auto& cp : ss) out.push_back("SS at E=" + fmt("%.12g", cp.energy) + ", |m11|/||M||=" + fmt("%.3e", cp.residual));
  for (const Side side : {Side::Left, Side::Right}) {
    for (const auto& cp : find_reflectionless(profile, side, search_lo, search_hi, 0, so)) {
      out.push_back(std::string(side == Side::Left ? "left" : "right") + "-reflectionless at E=" + fmt("%.12g", cp.energy) +
                    ", |r|=" + fmt("%.3e", cp.residual) +
                    (cp.transmission ? ", T=" + fmt("%.12g", cp.transmission->probability) : std::string()));
    }
  }
  if (ss.empty()) out.push_back("no spectral singularity found");
  return rep;
}

}  // namespace semiscat

#endif  // SEMISCAT_SCAN_HPP
