// Scenario configuration: a strict INI-like format.
//
//   [crystal] [pump] [detection] [numerics]   once each ([numerics] optional)
//   [element]                                  zero or more, in path order
//
// Keys carry their unit as a suffix (wavelength_nm, length_mm, ...). Unknown
// keys, duplicate keys and malformed values are errors. Values are kept in the
// human units they were written in; conversion to SI happens in toScenario().
#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qpmspdc/biphoton.hpp"
#include "qpmspdc/core.hpp"
#include "qpmspdc/dispersion.hpp"
#include "qpmspdc/field.hpp"
#include "qpmspdc/io.hpp"
#include "qpmspdc/phasematch.hpp"

namespace qpmspdc::cli {

struct CrystalBlock {
  double length_mm = 0.0;
  double poling_period_um = 0.0;
  double duty_cycle = 0.5;
  int qpm_order = 1;
  double temperature_c = 20.0;
  Axis pump_axis = Axis::Y;
  Axis signal_axis = Axis::Y;
  Axis idler_axis = Axis::Z;
  InteractionType type = InteractionType::TypeII;
  std::string index_model = "ktp-kato-takaoka";  // | constant | table
  double constant_index = 0.0;                   // index_model = constant
  std::string index_table;                       // index_model = table
  bool operator==(const CrystalBlock&) const = default;
};

struct PumpBlock {
  double wavelength_nm = 0.0;
  double waist_radius_mm = 0.0;
  double waist_position_mm = 0.0;
  std::optional<double> pulse_duration_fs;  // nullopt: cw
  bool operator==(const PumpBlock&) const = default;
};

enum class ElementKind { Lens, Slits, Slab };

struct ElementBlock {
  ElementKind kind = ElementKind::Lens;
  double position_mm = 0.0;
  double focal_length_mm = 0.0;  // lens
  double slit_width_um = 0.0;    // slits
  double separation_um = 0.0;    // slits, centre to centre
  int slit_count = 2;            // slits
  double distance_mm = 0.0;      // slab
  double index = 1.0;            // slab
  bool operator==(const ElementBlock&) const = default;
};

struct DetectionBlock {
  double distance_mm = 0.0;
  double slit_width_mm = 0.0;
  double scan_range_mm = 0.0;
  double scan_step_mm = 0.0;
  double filter_center_nm = 0.0;
  double filter_fwhm_nm = 0.0;
  double fixed_position_mm = 0.0;
  bool operator==(const DetectionBlock&) const = default;
};

enum class PolingSource { Design, Config };

struct NumericsBlock {
  std::size_t grid_samples = 16384;
  double grid_extent_mm = 81.92;
  phasematch::AngleConvention angle_convention = phasematch::AngleConvention::External;
  bool normalize = true;
  PolingSource poling_source = PolingSource::Design;
  int slit_samples = 10;
  double regime_threshold = 0.05;
  double paraxial_bound = phasematch::kDefaultParaxialBound;
  biphoton::OracleMapping oracle_mapping = biphoton::OracleMapping::SumFresnel;
  unsigned threads = 1;
  bool operator==(const NumericsBlock&) const = default;
};

struct ScenarioConfig {
  CrystalBlock crystal;
  PumpBlock pump;
  std::vector<ElementBlock> elements;
  DetectionBlock detection;
  NumericsBlock numerics;
  std::string base_dir;  // resolves relative index_table paths; not serialized
  bool operator==(const ScenarioConfig& o) const {
    return crystal == o.crystal && pump == o.pump && elements == o.elements && detection == o.detection &&
           numerics == o.numerics;
  }
};

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

struct Entry {
  std::string value;
  int line;
};

struct Section {
  std::string name;
  int line;
  std::map<std::string, Entry> entries;
};

inline std::vector<Section> parseIni(std::istream& in, const std::string& source) {
  std::vector<Section> sections;
  std::string raw;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw ConfigError(source + ":" + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (const auto c = line.find_first_of("#;"); c != std::string::npos) line.erase(c);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("malformed section header");
      sections.push_back({trim(std::string_view(line).substr(1, line.size() - 2)), lineno, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'");
    if (sections.empty()) fail("key outside of a section");
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) fail("empty key");
    if (value.empty()) fail("empty value for '" + key + "'");
    if (!sections.back().entries.emplace(key, Entry{value, lineno}).second) fail("duplicate key '" + key + "'");
  }
  return sections;
}

/// Consumes keys from a section; finish() rejects whatever is left.
class Reader {
 public:
  Reader(const Section& s, std::string source) : s_(s), source_(std::move(source)) {}

  [[nodiscard]] bool has(const std::string& key) const { return s_.entries.count(key) != 0; }

  std::string text(const std::string& key) {
    const auto it = s_.entries.find(key);
    if (it == s_.entries.end()) error("missing required key '" + key + "'");
    used_.insert(key);
    return it->second.value;
  }

  double number(const std::string& key) { return toNumber(key, text(key)); }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  long long integer(const std::string& key) {
    const std::string v = text(key);
    long long out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) at(key, "expected an integer, got '" + v + "'");
    return out;
  }
  long long integer(const std::string& key, long long fallback) { return has(key) ? integer(key) : fallback; }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const std::string v = text(key);
    if (v == "true") return true;
    if (v == "false") return false;
    at(key, "expected true or false, got '" + v + "'");
    return false;
  }

  template <class E>
  E choice(const std::string& key, const std::map<std::string, E>& options, std::optional<E> fallback = {}) {
    if (!has(key)) {
      if (fallback) return *fallback;
      text(key);  // throws
    }
    const std::string v = text(key);
    const auto it = options.find(v);
    if (it == options.end()) {
      std::string allowed;
      for (const auto& [name, _] : options) allowed += (allowed.empty() ? "" : ", ") + name;
      at(key, "invalid value '" + v + "' (allowed: " + allowed + ")");
    }
    return it->second;
  }

  void finish() const {
    for (const auto& [key, e] : s_.entries)
      if (!used_.count(key))
        throw ConfigError(source_ + ":" + std::to_string(e.line) + ": unknown key '" + key + "' in [" + s_.name + "]");
  }

  [[noreturn]] void at(const std::string& key, const std::string& msg) const {
    const auto it = s_.entries.find(key);
    const int line = it == s_.entries.end() ? s_.line : it->second.line;
    throw ConfigError(source_ + ":" + std::to_string(line) + ": " + key + ": " + msg);
  }

  [[noreturn]] void error(const std::string& msg) const {
    throw ConfigError(source_ + ":" + std::to_string(s_.line) + ": [" + s_.name + "] " + msg);
  }

 private:
  double toNumber(const std::string& key, const std::string& v) const {
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out))
      at(key, "expected a finite number, got '" + v + "'");
    return out;
  }

  const Section& s_;
  std::string source_;
  std::set<std::string> used_;
};

inline const std::map<std::string, Axis>& axisNames() {
  static const std::map<std::string, Axis> m{{"x", Axis::X}, {"y", Axis::Y}, {"z", Axis::Z}};
  return m;
}

}  // namespace detail

inline ScenarioConfig parseConfig(std::istream& in, const std::string& source = "<config>") {
  using detail::Reader;
  const auto sections = detail::parseIni(in, source);
  ScenarioConfig cfg;
  std::set<std::string> seen;
  for (const auto& s : sections) {
    Reader r(s, source);
    if (s.name != "element" && !seen.insert(s.name).second) r.error("section appears more than once");
    if (s.name == "crystal") {
      auto& c = cfg.crystal;
      c.length_mm = r.number("length_mm");
      c.poling_period_um = r.number("poling_period_um");
      c.duty_cycle = r.number("duty_cycle", 0.5);
      c.qpm_order = static_cast<int>(r.integer("qpm_order", 1));
      c.temperature_c = r.number("temperature_c");
      c.pump_axis = r.choice("pump_axis", detail::axisNames(), std::optional(Axis::Y));
      c.signal_axis = r.choice("signal_axis", detail::axisNames(), std::optional(Axis::Y));
      c.idler_axis = r.choice("idler_axis", detail::axisNames(), std::optional(Axis::Z));
      c.type = r.choice<InteractionType>("type", {{"I", InteractionType::TypeI}, {"II", InteractionType::TypeII}},
                                         InteractionType::TypeII);
      c.index_model = r.choice<std::string>(
          "index_model", {{"ktp-kato-takaoka", "ktp-kato-takaoka"}, {"constant", "constant"}, {"table", "table"}},
          std::string("ktp-kato-takaoka"));
      if (c.index_model == "constant") c.constant_index = r.number("constant_index");
      if (c.index_model == "table") c.index_table = r.text("index_table");
    } else if (s.name == "pump") {
      auto& p = cfg.pump;
      p.wavelength_nm = r.number("wavelength_nm");
      p.waist_radius_mm = r.number("waist_radius_mm");
      p.waist_position_mm = r.number("waist_position_mm", 0.0);
      if (r.has("pulse_duration_fs") && r.text("pulse_duration_fs") == "cw")
        p.pulse_duration_fs.reset();
      else
        p.pulse_duration_fs = r.number("pulse_duration_fs");
    } else if (s.name == "element") {
      ElementBlock e;
      e.kind = r.choice<ElementKind>("type", {{"lens", ElementKind::Lens}, {"slits", ElementKind::Slits},
                                              {"slab", ElementKind::Slab}});
      e.position_mm = r.number("position_mm");
      switch (e.kind) {
        case ElementKind::Lens: e.focal_length_mm = r.number("focal_length_mm"); break;
        case ElementKind::Slits:
          e.slit_width_um = r.number("slit_width_um");
          e.slit_count = static_cast<int>(r.integer("slit_count", 2));
          e.separation_um = r.number("separation_um", 0.0);
          break;
        case ElementKind::Slab:
          e.distance_mm = r.number("distance_mm");
          e.index = r.number("index", 1.0);
          break;
      }
      cfg.elements.push_back(e);
    } else if (s.name == "detection") {
      auto& d = cfg.detection;
      d.distance_mm = r.number("distance_mm");
      d.slit_width_mm = r.number("slit_width_mm");
      d.scan_range_mm = r.number("scan_range_mm");
      d.scan_step_mm = r.number("scan_step_mm");
      d.filter_center_nm = r.number("filter_center_nm");
      d.filter_fwhm_nm = r.number("filter_fwhm_nm");
      d.fixed_position_mm = r.number("fixed_position_mm", 0.0);
    } else if (s.name == "numerics") {
      auto& n = cfg.numerics;
      const long long samples = r.integer("grid_samples", 16384);
      if (samples < 4) r.at("grid_samples", "must be a power of two >= 4");
      n.grid_samples = static_cast<std::size_t>(samples);
      n.grid_extent_mm = r.number("grid_extent_mm", 81.92);
      n.angle_convention = r.choice<phasematch::AngleConvention>(
          "angle_convention",
          {{"external", phasematch::AngleConvention::External}, {"internal", phasematch::AngleConvention::Internal}},
          phasematch::AngleConvention::External);
      n.normalize = r.boolean("normalize", true);
      n.poling_source = r.choice<PolingSource>("poling_source",
                                               {{"design", PolingSource::Design}, {"config", PolingSource::Config}},
                                               PolingSource::Design);
      n.slit_samples = static_cast<int>(r.integer("slit_samples", 10));
      n.regime_threshold = r.number("regime_threshold", 0.05);
      n.paraxial_bound = r.number("paraxial_bound", phasematch::kDefaultParaxialBound);
      n.oracle_mapping = r.choice<biphoton::OracleMapping>(
          "oracle_mapping",
          {{"sum-fresnel", biphoton::OracleMapping::SumFresnel}, {"far-field", biphoton::OracleMapping::FarField}},
          biphoton::OracleMapping::SumFresnel);
      const long long threads = r.integer("threads", 1);
      if (threads < 1 || threads > 1024) r.at("threads", "must lie in [1, 1024]");
      n.threads = static_cast<unsigned>(threads);
    } else {
      r.error("unknown section");
    }
    r.finish();
  }
  for (const char* required : {"crystal", "pump", "detection"})
    if (!seen.count(required)) throw ConfigError(source + ": missing section [" + std::string(required) + "]");
  return cfg;
}

inline ScenarioConfig parseConfigString(const std::string& text, const std::string& source = "<config>") {
  std::istringstream in(text);
  return parseConfig(in, source);
}

inline ScenarioConfig loadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  ScenarioConfig cfg = parseConfig(in, path);
  cfg.base_dir = std::filesystem::path(path).parent_path().string();
  return cfg;
}

// ---------------------------------------------------------------------------
// Serialization

inline std::string serializeConfig(const ScenarioConfig& cfg) {
  using io::formatNumber;
  std::ostringstream os;
  const auto& c = cfg.crystal;
  os << "[crystal]\n"
     << "length_mm = " << formatNumber(c.length_mm) << '\n'
     << "poling_period_um = " << formatNumber(c.poling_period_um) << '\n'
     << "duty_cycle = " << formatNumber(c.duty_cycle) << '\n'
     << "qpm_order = " << c.qpm_order << '\n'
     << "temperature_c = " << formatNumber(c.temperature_c) << '\n'
     << "pump_axis = " << toString(c.pump_axis) << '\n'
     << "signal_axis = " << toString(c.signal_axis) << '\n'
     << "idler_axis = " << toString(c.idler_axis) << '\n'
     << "type = " << (c.type == InteractionType::TypeI ? "I" : "II") << '\n'
     << "index_model = " << c.index_model << '\n';
  if (c.index_model == "constant") os << "constant_index = " << formatNumber(c.constant_index) << '\n';
  if (c.index_model == "table") os << "index_table = " << c.index_table << '\n';

  const auto& p = cfg.pump;
  os << "\n[pump]\n"
     << "wavelength_nm = " << formatNumber(p.wavelength_nm) << '\n'
     << "waist_radius_mm = " << formatNumber(p.waist_radius_mm) << '\n'
     << "waist_position_mm = " << formatNumber(p.waist_position_mm) << '\n'
     << "pulse_duration_fs = " << (p.pulse_duration_fs ? formatNumber(*p.pulse_duration_fs) : std::string("cw"))
     << '\n';

  for (const auto& e : cfg.elements) {
    os << "\n[element]\n";
    switch (e.kind) {
      case ElementKind::Lens:
        os << "type = lens\nposition_mm = " << formatNumber(e.position_mm) << "\nfocal_length_mm = "
           << formatNumber(e.focal_length_mm) << '\n';
        break;
      case ElementKind::Slits:
        os << "type = slits\nposition_mm = " << formatNumber(e.position_mm) << "\nslit_width_um = "
           << formatNumber(e.slit_width_um) << "\nslit_count = " << e.slit_count
           << "\nseparation_um = " << formatNumber(e.separation_um) << '\n';
        break;
      case ElementKind::Slab:
        os << "type = slab\nposition_mm = " << formatNumber(e.position_mm) << "\ndistance_mm = "
           << formatNumber(e.distance_mm) << "\nindex = " << formatNumber(e.index) << '\n';
        break;
    }
  }

  const auto& d = cfg.detection;
  os << "\n[detection]\n"
     << "distance_mm = " << formatNumber(d.distance_mm) << '\n'
     << "slit_width_mm = " << formatNumber(d.slit_width_mm) << '\n'
     << "scan_range_mm = " << formatNumber(d.scan_range_mm) << '\n'
     << "scan_step_mm = " << formatNumber(d.scan_step_mm) << '\n'
     << "filter_center_nm = " << formatNumber(d.filter_center_nm) << '\n'
     << "filter_fwhm_nm = " << formatNumber(d.filter_fwhm_nm) << '\n'
     << "fixed_position_mm = " << formatNumber(d.fixed_position_mm) << '\n';

  const auto& n = cfg.numerics;
  os << "\n[numerics]\n"
     << "grid_samples = " << n.grid_samples << '\n'
     << "grid_extent_mm = " << formatNumber(n.grid_extent_mm) << '\n'
     << "angle_convention = "
     << (n.angle_convention == phasematch::AngleConvention::External ? "external" : "internal") << '\n'
     << "normalize = " << (n.normalize ? "true" : "false") << '\n'
     << "poling_source = " << (n.poling_source == PolingSource::Design ? "design" : "config") << '\n'
     << "slit_samples = " << n.slit_samples << '\n'
     << "regime_threshold = " << formatNumber(n.regime_threshold) << '\n'
     << "paraxial_bound = " << formatNumber(n.paraxial_bound) << '\n'
     << "oracle_mapping = " << biphoton::toString(n.oracle_mapping) << '\n'
     << "threads = " << n.threads << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Presets

inline constexpr std::string_view kPresetCommon = R"(
[crystal]
length_mm = 9.6
poling_period_um = 11.4617
duty_cycle = 0.5
qpm_order = 1
temperature_c = 40
pump_axis = y
signal_axis = y
idler_axis = z
type = II
index_model = ktp-kato-takaoka

[pump]
wavelength_nm = 413
waist_radius_mm = 0.5
waist_position_mm = 0
pulse_duration_fs = 200
)";

inline constexpr std::string_view kPresetConfig1Tail = R"(
# f = 50 cm lens 3 cm in front of the crystal
[element]
type = lens
position_mm = -30
focal_length_mm = 500

[detection]
distance_mm = 500
slit_width_mm = 0.1
scan_range_mm = 1
scan_step_mm = 0.01
filter_center_nm = 826
filter_fwhm_nm = 2
fixed_position_mm = 0
)";

inline constexpr std::string_view kPresetConfig2Tail = R"(
# double slit (100 um slits, 200 um centre to centre) 1 cm in front of the crystal
[element]
type = slits
position_mm = -10
slit_width_um = 100
slit_count = 2
separation_um = 200

[detection]
distance_mm = 500
slit_width_mm = 0.1
scan_range_mm = 4
scan_step_mm = 0.025
filter_center_nm = 826
filter_fwhm_nm = 2
fixed_position_mm = 0
)";

inline std::vector<std::string> presetNames() { return {"paper-config-1", "paper-config-2"}; }

inline std::string presetText(const std::string& name) {
  if (name == "paper-config-1") return std::string(kPresetCommon) + std::string(kPresetConfig1Tail);
  if (name == "paper-config-2") return std::string(kPresetCommon) + std::string(kPresetConfig2Tail);
  throw ConfigError("unknown preset '" + name + "' (available: paper-config-1, paper-config-2)");
}

inline ScenarioConfig presetConfig(const std::string& name) { return parseConfigString(presetText(name), name); }

// ---------------------------------------------------------------------------
// Conversion to SI domain objects

struct Scenario {
  CrystalSpec crystal;             // poling period as used by the pipelines
  double configured_period = 0.0;  // m, as written in the config
  PumpSpec pump;
  std::vector<field::PlacedElement> elements;
  DetectionGeometry detection;
  field::Grid grid;
  dispersion::IndexModelPtr model;
  FrequencyPair frequencies{1.0, 1.0, 2.0};
  NumericsBlock numerics;

  [[nodiscard]] biphoton::ScanOptions scanOptions(biphoton::ScanMode mode = biphoton::ScanMode::BothTogether) const {
    biphoton::ScanOptions o;
    o.mode = mode;
    o.slit_samples = numerics.slit_samples;
    o.regime_threshold = numerics.regime_threshold;
    o.convention = numerics.angle_convention;
    o.mapping = numerics.oracle_mapping;
    o.threads = numerics.threads;
    return o;
  }
};

inline dispersion::IndexModelPtr makeIndexModel(const ScenarioConfig& cfg) {
  const auto& c = cfg.crystal;
  if (c.index_model == "constant") return std::make_shared<const dispersion::ConstantIndexModel>(c.constant_index);
  if (c.index_model == "table") {
    std::filesystem::path p(c.index_table);
    if (p.is_relative() && !cfg.base_dir.empty()) p = std::filesystem::path(cfg.base_dir) / p;
    return std::make_shared<const dispersion::TabulatedIndexModel>(dispersion::TabulatedIndexModel::load(p.string()));
  }
  return dispersion::defaultKtpModel();
}

/// Re-validates every physical invariant after unit conversion. Invariant
/// violations are configuration errors. With poling_source = design the
/// crystal's period is replaced by the collinear design value, which may
/// throw NoPhaseMatching.
inline Scenario toScenario(const ScenarioConfig& cfg) {
  Scenario s;
  try {
    const auto& c = cfg.crystal;
    s.crystal.length = c.length_mm * 1e-3;
    s.crystal.poling_period = c.poling_period_um * 1e-6;
    s.crystal.duty_cycle = c.duty_cycle;
    s.crystal.qpm_order = c.qpm_order;
    s.crystal.temperature = c.temperature_c;
    s.crystal.pump_axis = c.pump_axis;
    s.crystal.signal_axis = c.signal_axis;
    s.crystal.idler_axis = c.idler_axis;
    s.crystal.type = c.type;
    s.crystal.validate();
    s.configured_period = s.crystal.poling_period;

    const auto& p = cfg.pump;
    s.pump.wavelength = p.wavelength_nm * 1e-9;
    s.pump.waist_radius = p.waist_radius_mm * 1e-3;
    s.pump.waist_position = p.waist_position_mm * 1e-3;
    if (p.pulse_duration_fs) s.pump.pulse_duration = *p.pulse_duration_fs * 1e-15;
    s.pump.validate();

    for (const auto& e : cfg.elements) {
      field::OpticalElement el;
      switch (e.kind) {
        case ElementKind::Lens: el = field::ThinLens{e.focal_length_mm * 1e-3}; break;
        case ElementKind::Slits:
          el = field::MultiSlit{e.slit_width_um * 1e-6, e.separation_um * 1e-6, e.slit_count};
          break;
        case ElementKind::Slab: el = field::FreeSpace{e.distance_mm * 1e-3, e.index}; break;
      }
      field::validate(el);
      s.elements.push_back({e.position_mm * 1e-3, el});
    }

    const auto& d = cfg.detection;
    s.detection.distance = d.distance_mm * 1e-3;
    s.detection.slit_width = d.slit_width_mm * 1e-3;
    s.detection.scan_range = d.scan_range_mm * 1e-3;
    s.detection.scan_step = d.scan_step_mm * 1e-3;
    s.detection.filter_center = d.filter_center_nm * 1e-9;
    s.detection.filter_fwhm = d.filter_fwhm_nm * 1e-9;
    s.detection.fixed_position = d.fixed_position_mm * 1e-3;
    s.detection.validate();
    qpmspdc::detail::require(s.detection.distance > s.crystal.length / 2.0,
                             "detection distance must exceed half the crystal length");

    s.grid = {cfg.numerics.grid_samples, cfg.numerics.grid_extent_mm * 1e-3};
    s.grid.validate();
    const auto& n = cfg.numerics;
    qpmspdc::detail::require(n.slit_samples >= 1, "slit_samples must be >= 1");
    qpmspdc::detail::require(n.regime_threshold > 0.0 && n.regime_threshold < 1.0,
                             "regime_threshold must lie in (0, 1)");
    qpmspdc::detail::require(n.paraxial_bound > 0.0 && n.paraxial_bound < 1.0, "paraxial_bound must lie in (0, 1)");
    s.numerics = n;
    s.model = makeIndexModel(cfg);
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  s.frequencies = FrequencyPair::degenerate(s.pump.omega());
  if (cfg.numerics.poling_source == PolingSource::Design)
    s.crystal.poling_period = phasematch::designPolingPeriod(s.frequencies, s.crystal, *s.model);
  return s;
}

}  // namespace qpmspdc::cli
