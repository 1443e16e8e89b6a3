// Command-line front end.
//
//   qpmspdc maker-fringes    (--config PATH | --preset NAME) [--alpha-max-deg A] [--alpha-step-deg S]
//   qpmspdc design-poling    (--config PATH | --preset NAME)
//   qpmspdc pump-propagate   (--config PATH | --preset NAME) [--field-out PATH]
//   qpmspdc coincidence-scan (--config PATH | --preset NAME) [--mode analytic|oracle|both]
//                            [--scan both-together|signal-only|idler-only] [--oracle-mapping M]
//                            [--joint-out PATH]
//   common: [--out PATH] [--plot PATH.svg] [--threads N]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical/physical guard.
#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qpmspdc/biphoton.hpp"
#include "qpmspdc/cli/config.hpp"
#include "qpmspdc/cli/pipelines.hpp"
#include "qpmspdc/io.hpp"

namespace qpmspdc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitGuard = 3;

struct CommonArgs {
  std::string config;
  std::string preset;
  std::string out;
  std::string plot;
  unsigned threads = 0;  // 0: use the config value
};

namespace detail {

inline Scenario loadScenario(const CommonArgs& a) {
  if (a.config.empty() == a.preset.empty()) throw ConfigError("exactly one of --config or --preset is required");
  ScenarioConfig cfg = a.config.empty() ? presetConfig(a.preset) : loadConfig(a.config);
  if (a.threads > 0) cfg.numerics.threads = a.threads;
  return toScenario(cfg);
}

inline std::string sourceName(const CommonArgs& a) { return a.config.empty() ? "preset:" + a.preset : a.config; }

inline void emit(const CommonArgs& a, const std::string& content, std::ostream& out) {
  if (a.out.empty())
    out << content;
  else
    io::writeFile(a.out, content);
}

inline void plot(const CommonArgs& a, const std::vector<io::Series>& s, const std::string& title,
                 const std::string& xl, const std::string& yl) {
  if (!a.plot.empty()) io::writeFile(a.plot, io::svgPlot(s, title, xl, yl));
}

inline double deg(double d) { return d * kPi / 180.0; }

}  // namespace detail

// ---------------------------------------------------------------------------

inline void cmdMakerFringes(const CommonArgs& a, double alpha_max_deg, double alpha_step_deg, std::ostream& out) {
  if (!(alpha_step_deg > 0.0)) throw ConfigError("--alpha-step-deg must be positive");
  if (!(alpha_max_deg >= 0.0)) throw ConfigError("--alpha-max-deg must be >= 0");
  const Scenario s = detail::loadScenario(a);
  const MakerCurve c = makerFringes(s, detail::deg(alpha_max_deg), detail::deg(alpha_step_deg));
  io::Table t;
  t.meta("source", detail::sourceName(a));
  t.meta("angle_convention",
         s.numerics.angle_convention == phasematch::AngleConvention::External ? "external" : "internal");
  t.meta("poling_period_m", s.crystal.poling_period);
  t.meta("first_zero_rad", c.first_zero);
  t.columns = {"alpha_rad", "efficiency"};
  for (std::size_t j = 0; j < c.alpha.size(); ++j) t.rows.push_back({c.alpha[j], c.efficiency[j]});
  detail::emit(a, io::toCsv(t), out);
  std::vector<double> alpha_deg(c.alpha.size());
  std::transform(c.alpha.begin(), c.alpha.end(), alpha_deg.begin(), [](double r) { return r * 180.0 / kPi; });
  detail::plot(a, {{"", alpha_deg, c.efficiency}}, "QPM efficiency vs emission angle", "alpha (deg)", "efficiency");
}

inline std::string formatPolingReport(const PolingReport& r) {
  using io::formatNumber;
  std::ostringstream os;
  os << "poling_period_m = " << formatNumber(r.period) << '\n'
     << "poling_period_um = " << formatNumber(r.period * 1e6) << '\n'
     << "configured_period_m = " << formatNumber(r.configured_period) << '\n'
     << "collinear_residual_rad_per_m = " << formatNumber(r.residual) << '\n'
     << "n_pump = " << formatNumber(r.n_pump) << '\n'
     << "n_signal = " << formatNumber(r.n_signal) << '\n'
     << "n_idler = " << formatNumber(r.n_idler) << '\n'
     << "pump_group_index = " << formatNumber(r.pump_group_index) << '\n'
     << "configured_period_matching_temperature_c = "
     << (r.matching_temperature ? formatNumber(*r.matching_temperature) : std::string("none")) << '\n'
     << "index_model = " << r.index_model << '\n';
  return os.str();
}

inline void cmdDesignPoling(const CommonArgs& a, std::ostream& out) {
  const Scenario s = detail::loadScenario(a);
  detail::emit(a, formatPolingReport(designPoling(s)), out);
}

inline io::Table fieldTable(const field::SampledField& w, bool complex_columns) {
  io::Table t;
  t.meta("wavelength_m", w.wavelength);
  t.meta("plane_z_m", w.plane_z);
  t.meta("grid_samples", static_cast<double>(w.grid.samples));
  t.meta("grid_extent_m", w.grid.extent);
  if (complex_columns) {
    t.columns = {"x_m", "re", "im", "intensity"};
    for (std::size_t j = 0; j < w.values.size(); ++j)
      t.rows.push_back({w.grid.x(j), w.values[j].real(), w.values[j].imag(), std::norm(w.values[j])});
  } else {
    t.columns = {"x_m", "intensity"};
    for (std::size_t j = 0; j < w.values.size(); ++j) t.rows.push_back({w.grid.x(j), std::norm(w.values[j])});
  }
  return t;
}

inline void cmdPumpPropagate(const CommonArgs& a, const std::string& field_out, std::ostream& out) {
  const Scenario s = detail::loadScenario(a);
  const field::SampledField w = pumpPropagate(s);
  io::Table t = fieldTable(w, false);
  t.metadata.insert(t.metadata.begin(), {"source", detail::sourceName(a)});
  detail::emit(a, io::toCsv(t), out);
  if (!field_out.empty()) io::writeFile(field_out, io::toCsv(fieldTable(w, true)));
  if (!a.plot.empty()) {
    const double half = std::max(s.detection.scan_range, 4.0 * s.pump.waist_radius);
    io::Series series{"", {}, {}};
    for (std::size_t j = 0; j < w.values.size(); ++j)
      if (std::abs(w.grid.x(j)) <= half) {
        series.x.push_back(w.grid.x(j) * 1e3);
        series.y.push_back(std::norm(w.values[j]));
      }
    detail::plot(a, {series}, "Pump intensity at the detection plane", "x (mm)", "intensity (arb.)");
  }
}

enum class ScanMethod { Analytic, Oracle, Both };

struct ScanOutcome {
  std::optional<biphoton::ScanResult> analytic;
  std::optional<biphoton::ScanResult> oracle;
  std::optional<double> cross_correlation;
};

inline ScanOutcome runScan(const Scenario& s, ScanMethod method, biphoton::ScanMode mode) {
  ScanOutcome o;
  if (method != ScanMethod::Oracle) o.analytic = scanAnalytic(s, mode);
  if (method != ScanMethod::Analytic) o.oracle = scanOracle(s, mode);
  if (o.analytic && o.oracle)
    o.cross_correlation = biphoton::normalizedCrossCorrelation(o.analytic->rates, o.oracle->rates);
  return o;
}

inline io::Table scanTable(const ScanOutcome& o, const Scenario& s, const std::string& source) {
  const auto& first = o.analytic ? *o.analytic : *o.oracle;
  io::Table t;
  t.meta("source", source);
  t.meta("mode", std::string(biphoton::toString(first.mode)));
  t.meta("z_D_m", first.geometry.distance);
  t.meta("slit_width_m", first.geometry.slit_width);
  t.meta("poling_period_m", s.crystal.poling_period);
  t.meta("collinear_drop", first.collinear_drop);
  if (o.analytic) t.meta("analytic_normalization_peak", o.analytic->normalization_peak);
  if (o.oracle) {
    t.meta("oracle_method", o.oracle->method);
    t.meta("oracle_normalization_peak", o.oracle->normalization_peak);
  }
  if (o.cross_correlation) t.meta("cross_correlation", *o.cross_correlation);
  for (const auto& w : first.warnings) t.meta("warning", w);
  for (const auto& n : first.notes) t.meta("note", n);
  if (o.analytic && o.oracle) {
    t.columns = {"p_m", "analytic", "oracle"};
    for (std::size_t j = 0; j < first.positions.size(); ++j)
      t.rows.push_back({first.positions[j], o.analytic->rates[j], o.oracle->rates[j]});
  } else {
    t.columns = {"p_m", "rate"};
    for (std::size_t j = 0; j < first.positions.size(); ++j) t.rows.push_back({first.positions[j], first.rates[j]});
  }
  return t;
}

/// |Psi|^2 on a square (q_s, q_i) grid covering the detector angles.
inline io::Table jointTable(const Scenario& s, std::size_t samples = 129) {
  const auto psi = jointAmplitude(s);
  const double k = s.frequencies.signal() / kSpeedOfLight;
  const double p_max = s.detection.scan_range / 2.0 + s.detection.slit_width + std::abs(s.detection.fixed_position);
  const double q_half = k * p_max / s.detection.distance;
  const auto axis = biphoton::QAxis{-q_half, 2.0 * q_half / static_cast<double>(samples - 1), samples};
  const auto g = psi.sample(axis, axis, s.numerics.threads);
  io::Table t;
  t.meta("normalization", g.normalization);
  t.columns = {"qs", "qi", "abs2"};
  for (std::size_t a = 0; a < samples; ++a)
    for (std::size_t b = 0; b < samples; ++b) t.rows.push_back({axis.at(a), axis.at(b), std::norm(g.at(a, b))});
  return t;
}

inline void cmdCoincidenceScan(const CommonArgs& a, ScanMethod method, biphoton::ScanMode mode,
                               std::optional<biphoton::OracleMapping> mapping, const std::string& joint_out,
                               std::ostream& out, std::ostream& err) {
  Scenario s = detail::loadScenario(a);
  if (mapping) s.numerics.oracle_mapping = *mapping;
  const ScanOutcome o = runScan(s, method, mode);
  const auto& first = o.analytic ? *o.analytic : *o.oracle;
  for (const auto& w : first.warnings) err << "warning: " << w << '\n';
  for (const auto& n : first.notes) err << "note: " << n << '\n';
  detail::emit(a, io::toCsv(scanTable(o, s, detail::sourceName(a))), out);
  if (o.cross_correlation && !a.out.empty()) out << "cross_correlation = " << io::formatNumber(*o.cross_correlation) << '\n';
  if (!joint_out.empty()) io::writeFile(joint_out, io::toCsv(jointTable(s)));
  if (!a.plot.empty()) {
    std::vector<double> p_mm(first.positions.size());
    std::transform(first.positions.begin(), first.positions.end(), p_mm.begin(), [](double p) { return p * 1e3; });
    std::vector<io::Series> series;
    if (o.analytic) series.push_back({"analytic", p_mm, o.analytic->rates});
    if (o.oracle) series.push_back({"oracle", p_mm, o.oracle->rates});
    detail::plot(a, series, "Coincidence scan", "detector position (mm)", "normalized coincidences");
  }
}

// ---------------------------------------------------------------------------

/// Runs the CLI on an argument list (without the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transverse biphoton correlations from quasi-phase-matched down-conversion"};
  app.require_subcommand(1);
  CommonArgs common;
  auto addCommon = [&](CLI::App* sub) {
    auto* cfg = sub->add_option("--config", common.config, "scenario config file");
    auto* pre = sub->add_option("--preset", common.preset, "bundled scenario (paper-config-1, paper-config-2)");
    cfg->excludes(pre);
    sub->add_option("--out", common.out, "output file (default: standard output)");
    sub->add_option("--plot", common.plot, "SVG plot file");
    sub->add_option("--threads", common.threads, "worker threads (overrides the config)")->check(CLI::Range(1u, 1024u));
  };

  double alpha_max_deg = 1.0;
  double alpha_step_deg = 0.01;
  auto* maker = app.add_subcommand("maker-fringes", "QPM efficiency versus emission angle");
  addCommon(maker);
  maker->add_option("--alpha-max-deg", alpha_max_deg, "largest emission angle (deg)");
  maker->add_option("--alpha-step-deg", alpha_step_deg, "angle step (deg)");

  auto* design = app.add_subcommand("design-poling", "collinear poling period report");
  addCommon(design);

  std::string field_out;
  auto* pump = app.add_subcommand("pump-propagate", "pump intensity at the detection plane");
  addCommon(pump);
  pump->add_option("--field-out", field_out, "also write x_m,re,im,intensity");

  std::string method_name = "both";
  std::string scan_name = "both-together";
  std::string mapping_name;
  std::string joint_out;
  auto* scan = app.add_subcommand("coincidence-scan", "coincidence counts versus detector position");
  addCommon(scan);
  scan->add_option("--mode", method_name, "analytic, oracle or both")
      ->check(CLI::IsMember({"analytic", "oracle", "both"}));
  scan->add_option("--scan", scan_name, "both-together, signal-only or idler-only")
      ->check(CLI::IsMember({"both-together", "signal-only", "idler-only"}));
  scan->add_option("--oracle-mapping", mapping_name, "sum-fresnel or far-field")
      ->check(CLI::IsMember({"sum-fresnel", "far-field"}));
  scan->add_option("--joint-out", joint_out, "write |Psi|^2 as qs,qi,abs2");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (maker->parsed()) {
      cmdMakerFringes(common, alpha_max_deg, alpha_step_deg, out);
    } else if (design->parsed()) {
      cmdDesignPoling(common, out);
    } else if (pump->parsed()) {
      cmdPumpPropagate(common, field_out, out);
    } else if (scan->parsed()) {
      const ScanMethod method = method_name == "analytic" ? ScanMethod::Analytic
                                : method_name == "oracle" ? ScanMethod::Oracle
                                                          : ScanMethod::Both;
      const biphoton::ScanMode mode = scan_name == "signal-only"  ? biphoton::ScanMode::SignalOnly
                                      : scan_name == "idler-only" ? biphoton::ScanMode::IdlerOnly
                                                                  : biphoton::ScanMode::BothTogether;
      std::optional<biphoton::OracleMapping> mapping;
      if (mapping_name == "sum-fresnel") mapping = biphoton::OracleMapping::SumFresnel;
      if (mapping_name == "far-field") mapping = biphoton::OracleMapping::FarField;
      cmdCoincidenceScan(common, method, mode, mapping, joint_out, out, err);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidInput& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NoPhaseMatching& e) {
    err << "no phase matching: " << e.what() << '\n';
    return kExitGuard;
  } catch (const OutOfRange& e) {
    err << "out of range: " << e.what() << '\n';
    return kExitGuard;
  } catch (const GuardError& e) {
    err << "guard: " << e.what() << '\n';
    return kExitGuard;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitGuard;
  }
  return kExitOk;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, out, err);
}

}  // namespace qpmspdc::cli
