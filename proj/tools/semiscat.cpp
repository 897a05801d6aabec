// semiscat: energy scans, critical-point reports and engine comparison for
// semi-infinite complex potentials.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "semiscat.hpp"

namespace {

using namespace semiscat;

enum Exit : int { kOk = 0, kCompareFailed = 1, kUsage = 2, kIo = 3 };

struct ModelFlags {
  std::string model = "delta-step";
  double v1 = 0.0;
  double v2_re = 0.0;
  double v2_im = 0.0;
  double a = 1.0;
  std::optional<double> q;
  std::optional<int> n;
  double mu = 0.5;
  double hbar = 1.0;

  [[nodiscard]] ModelSpec spec() const {
    ModelSpec m;
    if (model == "delta-step") m.kind = ModelKind::DeltaStep;
    else if (model == "eckart") m.kind = ModelKind::Eckart;
    else if (model == "erf-gauss") m.kind = ModelKind::ErfGauss;
    else throw ConfigError("unknown model: " + model);
    m.v1 = v1;
    m.v2 = {v2_re, v2_im};
    m.a = a;
    m.q = q;
    m.n = n;
    m.units = Units(mu, hbar);
    return m;
  }
};

void add_model_flags(CLI::App* sub, ModelFlags& f) {
  sub->add_option("--model", f.model, "delta-step | eckart | erf-gauss")
      ->check(CLI::IsMember({"delta-step", "eckart", "erf-gauss"}));
  sub->add_option("--v1", f.v1, "asymptotic step height V1");
  sub->add_option("--v2-re", f.v2_re, "Re V2");
  sub->add_option("--v2-im", f.v2_im, "Im V2");
  sub->add_option("--a", f.a, "width (eckart, erf-gauss)");
  sub->add_option("--q", f.q, "eckart family parameter q > 0 (derives V2)");
  sub->add_option("--n", f.n, "eckart family index n >= 0 (derives V2)");
  sub->add_option("--mu", f.mu, "mass (default 1/2)");
  sub->add_option("--hbar", f.hbar, "reduced Planck constant (default 1)");
}

void add_config_flag(CLI::App* sub, std::string& path) {
  sub->add_option("--config", path, "JSON file with the same field names as the flags; flags win");
}

// Fills options not given on the command line from the JSON config file.
void apply_config(CLI::App* sub, const std::string& path) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot read config file " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "config") continue;
    CLI::Option* opt = nullptr;
    try {
      opt = sub->get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw ConfigError("config file: unknown field " + key);
    }
    if (opt->count() > 0) continue;
    auto as_string = [](const nlohmann::json& v) {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_boolean()) return std::string(v.get<bool>() ? "true" : "false");
      return v.dump();
    };
    if (value.is_array()) {
      std::vector<std::string> items;
      for (const auto& v : value) items.push_back(as_string(v));
      opt->add_result(items);
    } else {
      opt->add_result(as_string(value));
    }
    opt->run_callback();
  }
}

int run_scan_cmd(const ScanConfig& config) {
  const ScanResult res = run_scan(config);
  std::ostringstream buf;
  if (config.format == Format::Csv) write_csv(buf, config, res);
  else write_json(buf, config, res);

  if (config.out_path.empty() || config.out_path == "-") {
    std::cout << buf.str();
    std::cout.flush();
    if (!std::cout) return kIo;
  } else {
    std::ofstream out(config.out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot open " << config.out_path << " for writing\n";
      return kIo;
    }
    out << buf.str();
    out.close();
    if (!out) {
      std::cerr << "error: write to " << config.out_path << " failed\n";
      return kIo;
    }
  }

  const ScanSummary& s = res.summary;
  std::cerr << "rows " << s.rows << ", flagged " << s.flagged_rows << ", failed " << s.failed_rows << "\n";
  std::cerr << "max T " << format_number(s.max_transmission) << " at E=" << format_number(s.max_transmission_energy)
            << "\n";
  if (std::isfinite(s.min_det_reversed))
    std::cerr << "min |det S(-k)| " << format_number(s.min_det_reversed)
              << " at E=" << format_number(s.min_det_reversed_energy) << "\n";
  if (s.max_rel_discrepancy) std::cerr << "max relative discrepancy " << format_number(*s.max_rel_discrepancy) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scattering from semi-infinite complex potentials"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kBuildId);

  ModelFlags model;
  std::string config_path;

  // scan
  auto* scan = app.add_subcommand("scan", "tabulate S-matrix quantities on an energy grid");
  ScanConfig sc;
  std::string engine = "analytic", format = "csv";
  std::vector<std::string> outputs;
  add_model_flags(scan, model);
  add_config_flag(scan, config_path);
  scan->add_option("--emin", sc.e_min, "lowest energy (> 0)");
  scan->add_option("--emax", sc.e_max, "highest energy");
  scan->add_option("--steps", sc.steps, "grid points, endpoints included (>= 2)");
  scan->add_option("--engine", engine, "analytic | numeric | both")->check(CLI::IsMember({"analytic", "numeric", "both"}));
  scan->add_option("--out", sc.out_path, "output file (stdout when omitted)");
  scan->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  scan->add_option("--outputs", outputs, "column groups: amplitudes T R_L R_R abs_det_S_fwd abs_det_S_rev");
  scan->add_option("--cap", sc.cap, "clip magnitudes above this value (default 1e12)");
  scan->add_option("--step-tol", sc.step_tol, "integrator tolerance (numeric engine)");
  scan->add_option("--threads", sc.threads, "worker threads (0 = all cores)");

  // critical
  auto* crit = app.add_subcommand("critical", "report regime and critical energies");
  bool numeric = false;
  double search_lo = 0.0, search_hi = 0.0;
  add_model_flags(crit, model);
  add_config_flag(crit, config_path);
  crit->add_flag("--numeric", numeric, "confirm with the numeric transfer matrix");
  crit->add_option("--emin", search_lo, "search range start (erf-gauss)");
  crit->add_option("--emax", search_hi, "search range end (erf-gauss)");

  // compare
  auto* cmp = app.add_subcommand("compare", "closed form vs numeric transfer matrix");
  double c_lo = 0.0, c_hi = 0.0, c_tol = 1e-12;
  std::size_t samples = 50;
  add_model_flags(cmp, model);
  add_config_flag(cmp, config_path);
  cmp->add_option("--emin", c_lo, "range start");
  cmp->add_option("--emax", c_hi, "range end");
  cmp->add_option("--samples", samples, "uniform samples (>= 2)");
  cmp->add_option("--step-tol", c_tol, "integrator tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    CLI::App* active = app.get_subcommands().front();
    apply_config(active, config_path);

    if (active == scan) {
      sc.model = model.spec();
      sc.engine = engine == "numeric" ? Engine::Numeric : engine == "both" ? Engine::Both : Engine::Analytic;
      sc.format = format == "json" ? Format::Json : Format::Csv;
      if (!outputs.empty()) sc.outputs = OutputSet::parse(outputs);
      return run_scan_cmd(sc);
    }
    if (active == crit) {
      const CriticalReport rep = critical_report(model.spec(), numeric, search_lo, search_hi);
      for (const auto& line : rep.lines) std::cout << line << '\n';
      return kOk;
    }
    const CompareReport rep = compare_engines(model.spec(), c_lo, c_hi, samples, c_tol);
    std::cout << "samples used " << rep.samples_used << ", skipped " << rep.samples_skipped << '\n';
    std::cout << "max relative error " << format_number(rep.max_rel_error) << " at E=" << format_number(rep.worst_energy)
              << '\n';
    if (!rep.failure.empty()) std::cout << "integration failure: " << rep.failure << '\n';
    std::cout << (rep.passed() ? "PASS" : "FAIL") << " (bound " << rep.bound << ")\n";
    return rep.passed() ? kOk : kCompareFailed;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const AccuracyFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCompareFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
