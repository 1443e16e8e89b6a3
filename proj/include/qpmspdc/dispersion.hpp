// Refractive-index and group-index models for the nonlinear crystal.
#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qpmspdc/core.hpp"

namespace qpmspdc::dispersion {

struct Window {
  double min_wavelength;  // m
  double max_wavelength;  // m

  [[nodiscard]] bool contains(double wavelength) const {
    return wavelength >= min_wavelength && wavelength <= max_wavelength;
  }
};

/// Phase index n(lambda, axis, T). Implementations must be immutable after
/// construction; evaluation is const and thread-safe.
class IndexModel {
 public:
  virtual ~IndexModel() = default;

  [[nodiscard]] virtual std::string id() const = 0;
  [[nodiscard]] virtual Window window(Axis axis) const = 0;

  /// Raw evaluation; callers inside the window only. Use refractiveIndex().
  [[nodiscard]] virtual double evaluate(double wavelength, Axis axis, double temperature) const = 0;
};

using IndexModelPtr = std::shared_ptr<const IndexModel>;

inline double refractiveIndex(const IndexModel& model, double wavelength, Axis axis, double temperature) {
  const Window w = model.window(axis);
  if (!(wavelength > 0.0) || !w.contains(wavelength)) {
    std::ostringstream os;
    os << model.id() << ": wavelength " << wavelength * 1e9 << " nm on axis " << toString(axis)
       << " outside validity window [" << w.min_wavelength * 1e9 << ", " << w.max_wavelength * 1e9 << "] nm";
    throw OutOfRange(os.str(), w.min_wavelength, w.max_wavelength);
  }
  return model.evaluate(wavelength, axis, temperature);
}

/// Central-difference step for the group index: max(1e-12 m, 1e-6 lambda).
inline double groupIndexStep(double wavelength) { return std::max(1e-12, 1e-6 * wavelength); }

/// n_g = n - lambda dn/dlambda, central differences on the phase index.
inline double groupIndex(const IndexModel& model, double wavelength, Axis axis, double temperature,
                         double step = 0.0) {
  const double h = step > 0.0 ? step : groupIndexStep(wavelength);
  const double n = refractiveIndex(model, wavelength, axis, temperature);
  const double np = refractiveIndex(model, wavelength + h, axis, temperature);
  const double nm = refractiveIndex(model, wavelength - h, axis, temperature);
  return n - wavelength * (np - nm) / (2.0 * h);
}

// ---------------------------------------------------------------------------

/// n = const on every axis. Test model.
class ConstantIndexModel final : public IndexModel {
 public:
  explicit ConstantIndexModel(double n, Window w = {1e-9, 1e-3}) : n_(n), window_(w) {
    detail::require(n > 0.0, "constant index must be positive");
  }
  [[nodiscard]] std::string id() const override { return "constant"; }
  [[nodiscard]] Window window(Axis) const override { return window_; }
  [[nodiscard]] double evaluate(double, Axis, double) const override { return n_; }

 private:
  double n_;
  Window window_;
};

/// n = a + b lambda (lambda in m). Test model with an analytic group index.
class LinearIndexModel final : public IndexModel {
 public:
  LinearIndexModel(double a, double b, Window w) : a_(a), b_(b), window_(w) {}
  [[nodiscard]] std::string id() const override { return "linear"; }
  [[nodiscard]] Window window(Axis) const override { return window_; }
  [[nodiscard]] double evaluate(double wavelength, Axis, double) const override { return a_ + b_ * wavelength; }

 private:
  double a_;
  double b_;
  Window window_;
};

/// KTP principal indices.
///
///   n^2(lambda) = A + B/(lambda^2 - C) + D/(lambda^2 - E)        (lambda in um)
///   dn/dT       = (a3/lambda^3 + a2/lambda^2 + a1/lambda + a0) 1e-5 /K
///   n(lambda,T) = n(lambda) + dn/dT (T - 20 C)
///
/// K. Kato and E. Takaoka, "Sellmeier and thermo-optic dispersion formulas
/// for KTP", Appl. Opt. 41, 5040 (2002).
class KtpKatoTakaoka final : public IndexModel {
 public:
  static constexpr double kReferenceTemperature = 20.0;

  [[nodiscard]] std::string id() const override {
    return "ktp-kato-takaoka-2002 (K. Kato, E. Takaoka, Appl. Opt. 41, 5040 (2002))";
  }
  [[nodiscard]] Window window(Axis) const override { return {0.35e-6, 3.55e-6}; }

  [[nodiscard]] double evaluate(double wavelength, Axis axis, double temperature) const override {
    const auto& s = sellmeier(axis);
    const auto& t = thermo(axis);
    const double l = wavelength * 1e6;
    const double l2 = l * l;
    const double n20 = std::sqrt(s[0] + s[1] / (l2 - s[2]) + s[3] / (l2 - s[4]));
    const double dndt = (t[0] / (l2 * l) + t[1] / l2 + t[2] / l + t[3]) * 1e-5;
    return n20 + dndt * (temperature - kReferenceTemperature);
  }

 private:
  static const std::array<double, 5>& sellmeier(Axis axis) {
    static constexpr std::array<double, 5> x{3.29100, 0.04140, 0.03978, 9.35522, 31.45571};
    static constexpr std::array<double, 5> y{3.45018, 0.04341, 0.04597, 16.98825, 39.43799};
    static constexpr std::array<double, 5> z{4.59423, 0.06206, 0.04763, 110.80672, 86.12171};
    switch (axis) {
      case Axis::X: return x;
      case Axis::Y: return y;
      case Axis::Z: return z;
    }
    return z;
  }
  static const std::array<double, 4>& thermo(Axis axis) {
    static constexpr std::array<double, 4> x{0.1717, -0.5353, 0.8416, 0.1627};
    static constexpr std::array<double, 4> y{0.1997, -0.4063, 0.5154, 0.5425};
    static constexpr std::array<double, 4> z{0.9221, -2.9220, 3.6677, -0.1897};
    switch (axis) {
      case Axis::X: return x;
      case Axis::Y: return y;
      case Axis::Z: return z;
    }
    return z;
  }
};

/// Tabulated indices with linear interpolation and no extrapolation.
/// Temperature is ignored (a table is taken at one temperature).
class TabulatedIndexModel final : public IndexModel {
 public:
  struct Sample {
    double wavelength;  // m
    double index;
  };

  TabulatedIndexModel(std::map<Axis, std::vector<Sample>> table, std::string name)
      : table_(std::move(table)), name_(std::move(name)) {
    for (auto& [axis, samples] : table_) {
      std::sort(samples.begin(), samples.end(),
                [](const Sample& a, const Sample& b) { return a.wavelength < b.wavelength; });
      detail::require(samples.size() >= 2, "tabulated index needs at least two samples per axis");
      for (std::size_t i = 1; i < samples.size(); ++i)
        detail::require(samples[i].wavelength > samples[i - 1].wavelength,
                        "tabulated index has duplicate wavelengths on axis " + std::string(toString(axis)));
      for (const auto& s : samples) detail::require(s.index > 1.0, "tabulated index values must exceed 1");
    }
  }

  /// Parses `wavelength_nm axis index` records; '#' starts a comment.
  static TabulatedIndexModel parse(std::istream& in, std::string name) {
    std::map<Axis, std::vector<Sample>> table;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      double wl_nm = 0.0;
      std::string axis;
      double n = 0.0;
      if (!(ls >> wl_nm)) continue;  // blank line
      if (!(ls >> axis >> n))
        throw ConfigError(name + ":" + std::to_string(lineno) + ": expected 'wavelength_nm axis index'");
      std::string extra;
      if (ls >> extra) throw ConfigError(name + ":" + std::to_string(lineno) + ": trailing content");
      table[parseAxis(axis)].push_back({wl_nm / 1e9, n});
    }
    if (table.empty()) throw ConfigError(name + ": no index samples");
    return TabulatedIndexModel(std::move(table), std::move(name));
  }

  static TabulatedIndexModel load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open index table '" + path + "'");
    return parse(in, path);
  }

  [[nodiscard]] std::string id() const override { return "table:" + name_; }

  [[nodiscard]] Window window(Axis axis) const override {
    const auto it = table_.find(axis);
    if (it == table_.end()) return {0.0, -1.0};  // empty window
    return {it->second.front().wavelength, it->second.back().wavelength};
  }

  [[nodiscard]] double evaluate(double wavelength, Axis axis, double) const override {
    const auto& s = table_.at(axis);
    auto hi = std::lower_bound(s.begin(), s.end(), wavelength,
                               [](const Sample& a, double w) { return a.wavelength < w; });
    if (hi == s.begin()) return hi->index;
    if (hi == s.end()) return s.back().index;
    if (hi->wavelength == wavelength) return hi->index;
    const auto lo = hi - 1;
    const double t = (wavelength - lo->wavelength) / (hi->wavelength - lo->wavelength);
    return lo->index + t * (hi->index - lo->index);
  }

 private:
  std::map<Axis, std::vector<Sample>> table_;
  std::string name_;
};

inline IndexModelPtr defaultKtpModel() { return std::make_shared<const KtpKatoTakaoka>(); }

}  // namespace qpmspdc::dispersion
