// Two-photon joint amplitude and coincidence-scan prediction.
//
// The joint amplitude for transverse wavevectors (q_s, q_i) is
//
//   Psi(q_s, q_i) = E~(q_s + q_i) sinc(L_z A / 2) exp(-dw^2 / (2 Gamma)) exp(i L_z A / 2)
//
// with A = dk_z - n_g dw / c. The pump spectrum E~ is referenced to the
// crystal entrance face; the exp(i L_z A / 2) factor then carries the pump and
// the down-converted photons to the crystal centre.
//
// Coincidences are predicted two ways:
//  * analytic: C(p_s, p_i) ~ |W((p_s + p_i)/2)|^2, W the pump propagated to
//    the detection plane;
//  * oracle: directly from Psi. The default mapping propagates the sum
//    coordinate (q_s + q_i) exactly in Fresnel form and evaluates the
//    difference coordinate at its stationary point (far field). The
//    FarField mapping evaluates Psi at q_j = k_j p_j / z_D for both photons.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qpmspdc/core.hpp"
#include "qpmspdc/dispersion.hpp"
#include "qpmspdc/field.hpp"
#include "qpmspdc/parallel.hpp"
#include "qpmspdc/phasematch.hpp"

namespace qpmspdc::biphoton {

using Complex = std::complex<double>;

/// exp(-dw^2 / (2 Gamma)); for a CW pump 1 at dw == 0 and 0 otherwise.
inline double spectralEnvelope(const FrequencyPair& freqs, const PumpSpec& pump) {
  const double dw = freqs.deltaOmega();
  const auto gamma = pump.gamma();
  if (!gamma) return dw == 0.0 ? 1.0 : 0.0;
  return std::exp(-dw * dw / (2.0 * *gamma));
}

/// Gaussian interference filter, FWHM defined in wavelength.
inline double filterTransmission(double omega, const DetectionGeometry& geometry) {
  qpmspdc::detail::require(geometry.filter_center > 0.0 && geometry.filter_fwhm > 0.0, "filter parameters must be positive");
  const double lambda = wavelengthFromAngularFrequency(omega);
  const double u = (lambda - geometry.filter_center) / geometry.filter_fwhm;
  return std::exp(-4.0 * std::log(2.0) * u * u);
}

// ---------------------------------------------------------------------------

struct JointAmplitudeOptions {
  bool normalize = true;      // scale so that max |Psi| <= 1 (grids: == 1)
  bool include_phase = true;  // keep exp(i L_z A / 2)
  double paraxial_bound = phasematch::kDefaultParaxialBound;
};

/// Uniform axis q = start + j * step, j in [0, count).
struct QAxis {
  double start;
  double step;
  std::size_t count;

  static QAxis centered(std::size_t count, double half_extent) {
    qpmspdc::detail::require(count >= 2 && half_extent > 0.0, "invalid q axis");
    const double step = 2.0 * half_extent / static_cast<double>(count);
    return {-half_extent, step, count};
  }
  [[nodiscard]] double at(std::size_t j) const { return start + static_cast<double>(j) * step; }
  [[nodiscard]] double maxAbs() const { return std::max(std::abs(start), std::abs(at(count - 1))); }
};

/// Sampled joint amplitude on a (q_s, q_i) grid, row-major in q_s.
struct JointAmplitudeGrid {
  QAxis signal_axis;
  QAxis idler_axis;
  std::vector<Complex> values;
  double normalization = 1.0;  // factor applied to raw values

  [[nodiscard]] const Complex& at(std::size_t js, std::size_t ji) const {
    return values[js * idler_axis.count + ji];
  }
};

/// Evaluator for Psi(q_s, q_i) at fixed frequencies. Immutable; shareable
/// across threads.
class JointAmplitude {
 public:
  JointAmplitude(field::AngularSpectrum pump_spectrum, const CrystalSpec& crystal, const FrequencyPair& freqs,
                 const dispersion::IndexModel& model, const PumpSpec& pump, JointAmplitudeOptions options = {})
      : pump_(std::move(pump_spectrum)), tw_(freqs, crystal, model), options_(options) {
    pump.validate();
    const double lp = wavelengthFromAngularFrequency(freqs.pump());
    qpmspdc::detail::require(std::abs(pump_.wavelength - lp) <= 1e-9 * lp,
                    "pump spectrum wavelength does not match the pump frequency");
    envelope_ = spectralEnvelope(freqs, pump);
    group_term_ = freqs.deltaOmega() == 0.0
                      ? 0.0
                      : phasematch::pumpGroupIndex(freqs, crystal, model) * freqs.deltaOmega() / kSpeedOfLight;
    constant_mismatch_ = tw_.collinearMismatch() - group_term_;
    const double peak = pump_.maxAbs() * (envelope_ > 0.0 ? envelope_ : 1.0);
    scale_ = options_.normalize && peak > 0.0 ? 1.0 / peak : 1.0;
  }

  /// A(q_s, q_i) = dk_z(q_s, q_i) - n_g dw / c.
  [[nodiscard]] double mismatch(double q_s, double q_i) const {
    tw_.checkParaxial(q_s, q_i, options_.paraxial_bound);
    return constant_mismatch_ + tw_.transverseTerms(q_s, q_i);
  }

  /// Crystal factor sinc(L A/2) env exp(i L A/2), including the normalization scale.
  [[nodiscard]] Complex crystalFactor(double q_s, double q_i) const {
    const double half_phase = tw_.crystal().length * mismatch(q_s, q_i) / 2.0;
    const double magnitude = sinc(half_phase) * envelope_ * scale_;
    if (!options_.include_phase) return {magnitude, 0.0};
    return std::polar(1.0, half_phase) * magnitude;
  }

  /// |crystal factor|^2, independent of the phase option by construction.
  [[nodiscard]] double crystalFactorIntensity(double q_s, double q_i) const {
    const double s = sinc(tw_.crystal().length * mismatch(q_s, q_i) / 2.0) * envelope_ * scale_;
    return s * s;
  }

  /// Psi(q_s, q_i) with E~ linearly interpolated on the pump grid.
  [[nodiscard]] Complex operator()(double q_s, double q_i) const {
    return pump_.at(q_s + q_i) * crystalFactor(q_s, q_i);
  }

  [[nodiscard]] double intensity(double q_s, double q_i) const {
    return std::norm(pump_.at(q_s + q_i)) * crystalFactorIntensity(q_s, q_i);
  }

  /// Samples Psi on a grid; the pump band must cover every q_s + q_i.
  [[nodiscard]] JointAmplitudeGrid sample(const QAxis& qs_axis, const QAxis& qi_axis, unsigned threads = 1) const {
    const double needed = qs_axis.maxAbs() + qi_axis.maxAbs();
    if (needed > pump_.qExtentHalf()) {
      std::ostringstream os;
      os << "joint-amplitude grid needs pump q-extent >= " << needed << " rad/m (|q_s + q_i| max); pump band is "
         << pump_.qExtentHalf() << " rad/m. Refine the pump grid spacing to at most "
         << kPi / needed << " m";
      throw GuardError(os.str());
    }
    JointAmplitudeGrid g{qs_axis, qi_axis, std::vector<Complex>(qs_axis.count * qi_axis.count), scale_};
    parallelFor(qs_axis.count, threads, [&](std::size_t js) {
      const double qs = qs_axis.at(js);
      for (std::size_t ji = 0; ji < qi_axis.count; ++ji) g.values[js * qi_axis.count + ji] = (*this)(qs, qi_axis.at(ji));
    });
    if (options_.normalize) {
      double m = 0.0;
      for (const auto& v : g.values) m = std::max(m, std::abs(v));
      if (m > 0.0) {
        for (auto& v : g.values) v /= m;
        g.normalization = scale_ / m;
      }
    }
    return g;
  }

  [[nodiscard]] const field::AngularSpectrum& pumpSpectrum() const { return pump_; }
  [[nodiscard]] const phasematch::ThreeWave& threeWave() const { return tw_; }
  [[nodiscard]] const CrystalSpec& crystal() const { return tw_.crystal(); }
  [[nodiscard]] const FrequencyPair& frequencies() const { return tw_.frequencies(); }
  [[nodiscard]] double envelope() const { return envelope_; }
  [[nodiscard]] double scale() const { return scale_; }
  [[nodiscard]] const JointAmplitudeOptions& options() const { return options_; }

 private:
  field::AngularSpectrum pump_;
  phasematch::ThreeWave tw_;
  JointAmplitudeOptions options_;
  double envelope_ = 1.0;
  double group_term_ = 0.0;
  double constant_mismatch_ = 0.0;
  double scale_ = 1.0;
};

// ---------------------------------------------------------------------------
// Scans

enum class ScanMode { BothTogether, SignalOnly, IdlerOnly };

inline std::string_view toString(ScanMode m) {
  switch (m) {
    case ScanMode::BothTogether: return "both-together";
    case ScanMode::SignalOnly: return "signal-only";
    case ScanMode::IdlerOnly: return "idler-only";
  }
  return "?";
}

enum class OracleMapping {
  SumFresnel,  // Fresnel in q_s + q_i, stationary phase in the difference
  FarField,    // q_j = k_j p_j / z_D for both photons
};

inline std::string_view toString(OracleMapping m) {
  return m == OracleMapping::SumFresnel ? "sum-fresnel" : "far-field";
}

struct ScanResult {
  std::vector<double> positions;  // m, strictly increasing
  std::vector<double> rates;      // normalized to unit maximum
  ScanMode mode = ScanMode::BothTogether;
  DetectionGeometry geometry;
  std::string method;
  double normalization_peak = 0.0;  // raw maximum before normalization
  double collinear_drop = 0.0;      // efficiencyDropOverScan for this scan
  std::vector<std::string> warnings;
  std::vector<std::string> notes;
};

/// Detector positions -range/2 + j step, j = 0..floor(range/step).
inline std::vector<double> scanPositions(const DetectionGeometry& g) {
  g.validate();
  const auto count = static_cast<std::size_t>(std::floor(g.scan_range / g.scan_step + 1e-9)) + 1;
  std::vector<double> p(count);
  for (std::size_t j = 0; j < count; ++j) p[j] = -g.scan_range / 2.0 + static_cast<double>(j) * g.scan_step;
  return p;
}

/// Midpoint offsets across a slit of width w; a single zero when w == 0.
inline std::vector<double> slitOffsets(double width, int samples) {
  qpmspdc::detail::require(samples >= 1, "slit quadrature needs at least one sample");
  if (width == 0.0) return {0.0};
  std::vector<double> o(static_cast<std::size_t>(samples));
  for (int j = 0; j < samples; ++j) o[static_cast<std::size_t>(j)] = -width / 2.0 + (j + 0.5) * width / samples;
  return o;
}

namespace detail {
/// (signal, idler) detector centres for a scan position.
inline std::pair<double, double> detectorCentres(ScanMode mode, double p, double fixed) {
  switch (mode) {
    case ScanMode::BothTogether: return {p, p};
    case ScanMode::SignalOnly: return {p, fixed};
    case ScanMode::IdlerOnly: return {fixed, p};
  }
  return {p, p};
}

inline void normalize(ScanResult& r) {
  double m = 0.0;
  for (double v : r.rates) m = std::max(m, v);
  r.normalization_peak = m;
  if (m > 0.0)
    for (double& v : r.rates) v /= m;
}
}  // namespace detail

struct RegimeCheck {
  double drop = 0.0;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;
};

/// Near-collinear regime check: Maker-efficiency drop over the scanned angles.
inline RegimeCheck checkRegime(const phasematch::MakerProfile& maker, const DetectionGeometry& g, double threshold) {
  RegimeCheck r;
  const double extent = g.scan_range + std::abs(g.fixed_position) * 2.0;
  r.drop = phasematch::efficiencyDropOverScan(maker, extent, g.distance);
  std::ostringstream os;
  os << "phase-matching efficiency drops by " << r.drop * 100.0 << "% across the scan";
  if (r.drop > threshold) {
    r.warnings.push_back(os.str() + " (threshold " + std::to_string(threshold * 100.0) +
                         "%): outside the near-collinear regime, pump-transfer relation not guaranteed");
  } else if (r.drop > 0.01) {
    r.notes.push_back(os.str() + " (above the 1% near-collinear margin)");
  }
  return r;
}

struct ScanOptions {
  ScanMode mode = ScanMode::BothTogether;
  int slit_samples = 10;
  double regime_threshold = 0.05;
  phasematch::AngleConvention convention = phasematch::AngleConvention::External;
  OracleMapping mapping = OracleMapping::SumFresnel;
  unsigned threads = 1;
};

/// C(p) ~ |W(R)|^2 with R = (x_s + x_i)/2, integrated incoherently over both
/// detector slits (midpoint rule). Regime diagnostics go to the metadata.
inline ScanResult coincidenceScanAnalytic(const field::SampledField& detection_plane_pump,
                                          const phasematch::MakerProfile& maker, const DetectionGeometry& geometry,
                                          const ScanOptions& opts) {
  geometry.validate();
  ScanResult r;
  r.mode = opts.mode;
  r.geometry = geometry;
  r.method = "analytic";
  r.positions = scanPositions(geometry);
  r.rates.assign(r.positions.size(), 0.0);
  const auto intensity = detection_plane_pump.intensity();
  const auto offsets = slitOffsets(geometry.slit_width, opts.slit_samples);
  const double weight = 1.0 / static_cast<double>(offsets.size() * offsets.size());
  parallelFor(r.positions.size(), opts.threads, [&](std::size_t j) {
    const auto [cs, ci] = detail::detectorCentres(opts.mode, r.positions[j], geometry.fixed_position);
    double acc = 0.0;
    for (double os : offsets)
      for (double oi : offsets) acc += detection_plane_pump.intensityAt(((cs + os) + (ci + oi)) / 2.0, intensity);
    r.rates[j] = acc * weight;
  });
  detail::normalize(r);
  auto regime = checkRegime(maker, geometry, opts.regime_threshold);
  r.collinear_drop = regime.drop;
  r.warnings = std::move(regime.warnings);
  r.notes = std::move(regime.notes);
  return r;
}

namespace detail {

/// Sum-coordinate Fresnel / difference-coordinate stationary-phase
/// evaluation of the detection-plane two-photon amplitude.
class SumFresnelEvaluator {
 public:
  SumFresnelEvaluator(const JointAmplitude& psi, double z_d) : psi_(psi) {
    const double air = z_d - psi.crystal().length / 2.0;
    qpmspdc::detail::require(air > 0.0, "detection plane must lie beyond the crystal exit face");
    const double ks = psi.frequencies().signal() / kSpeedOfLight;
    const double ki = psi.frequencies().idler() / kSpeedOfLight;
    a_s_ = air / (2.0 * ks);
    a_i_ = air / (2.0 * ki);
  }

  /// T(Q, xi) for every pump node Q.
  [[nodiscard]] std::vector<Complex> kernel(double xi) const {
    const auto& spec = psi_.pumpSpectrum();
    const double sum = a_s_ + a_i_;
    const double diff = a_s_ - a_i_;
    std::vector<Complex> t(spec.values.size());
    for (std::size_t j = 0; j < t.size(); ++j) {
      if (spec.values[j] == Complex(0.0, 0.0)) continue;
      const double q_sum = spec.q(j);
      const double u = xi - diff * q_sum;
      const double q_half = u / (2.0 * sum);
      const double phase = u * u / (4.0 * sum) - sum * q_sum * q_sum / 4.0;
      t[j] = spec.values[j] * psi_.crystalFactor(q_sum / 2.0 + q_half, q_sum / 2.0 - q_half) * std::polar(1.0, phase);
    }
    return t;
  }

  /// Psi(X, xi) = sum_Q T(Q, xi) exp(i Q X) dQ (constant factors dropped).
  [[nodiscard]] Complex amplitude(const std::vector<Complex>& kernel, double x_mean) const {
    const auto& spec = psi_.pumpSpectrum();
    Complex acc(0.0, 0.0);
    for (std::size_t j = 0; j < kernel.size(); ++j) {
      if (kernel[j] == Complex(0.0, 0.0)) continue;
      acc += kernel[j] * std::polar(1.0, spec.q(j) * x_mean);
    }
    return acc;
  }

 private:
  const JointAmplitude& psi_;
  double a_s_ = 0.0;
  double a_i_ = 0.0;
};

}  // namespace detail

/// Coincidence scan computed directly from the joint amplitude.
inline ScanResult coincidenceScanOracle(const JointAmplitude& psi, const phasematch::MakerProfile& maker,
                                        const DetectionGeometry& geometry, const ScanOptions& opts) {
  geometry.validate();
  ScanResult r;
  r.mode = opts.mode;
  r.geometry = geometry;
  r.method = std::string("oracle/") + std::string(toString(opts.mapping));
  r.positions = scanPositions(geometry);
  r.rates.assign(r.positions.size(), 0.0);
  const auto offsets = slitOffsets(geometry.slit_width, opts.slit_samples);
  const double weight = 1.0 / static_cast<double>(offsets.size() * offsets.size());

  if (opts.mapping == OracleMapping::FarField) {
    const double ks = psi.frequencies().signal() / kSpeedOfLight;
    const double ki = psi.frequencies().idler() / kSpeedOfLight;
    parallelFor(r.positions.size(), opts.threads, [&](std::size_t j) {
      const auto [cs, ci] = detail::detectorCentres(opts.mode, r.positions[j], geometry.fixed_position);
      double acc = 0.0;
      for (double os : offsets)
        for (double oi : offsets)
          acc += psi.intensity(ks * (cs + os) / geometry.distance, ki * (ci + oi) / geometry.distance);
      r.rates[j] = acc * weight;
    });
  } else {
    const detail::SumFresnelEvaluator eval(psi, geometry.distance);
    // Group scan positions by the centre separation so that kernels are
    // shared; for both-together scans every position shares one group.
    std::map<double, std::vector<std::size_t>> groups;
    for (std::size_t j = 0; j < r.positions.size(); ++j) {
      const auto [cs, ci] = detail::detectorCentres(opts.mode, r.positions[j], geometry.fixed_position);
      groups[cs - ci].push_back(j);
    }
    for (const auto& [separation, members] : groups) {
      std::vector<double> xis;
      for (double os : offsets)
        for (double oi : offsets) xis.push_back(separation + (os - oi));
      std::sort(xis.begin(), xis.end());
      xis.erase(std::unique(xis.begin(), xis.end()), xis.end());
      std::vector<std::vector<Complex>> kernels(xis.size());
      parallelFor(xis.size(), opts.threads, [&](std::size_t k) { kernels[k] = eval.kernel(xis[k]); });
      auto kernelFor = [&](double xi) -> const std::vector<Complex>& {
        const auto it = std::lower_bound(xis.begin(), xis.end(), xi);
        return kernels[static_cast<std::size_t>(it - xis.begin())];
      };
      parallelFor(members.size(), opts.threads, [&](std::size_t m) {
        const std::size_t j = members[m];
        const auto [cs, ci] = detail::detectorCentres(opts.mode, r.positions[j], geometry.fixed_position);
        double acc = 0.0;
        for (double os : offsets)
          for (double oi : offsets) {
            const double xi = separation + (os - oi);
            acc += std::norm(eval.amplitude(kernelFor(xi), ((cs + os) + (ci + oi)) / 2.0));
          }
        r.rates[j] = acc * weight;
      });
    }
  }
  detail::normalize(r);
  auto regime = checkRegime(maker, geometry, opts.regime_threshold);
  r.collinear_drop = regime.drop;
  r.warnings = std::move(regime.warnings);
  r.notes = std::move(regime.notes);
  return r;
}

// ---------------------------------------------------------------------------
// Curve comparison

/// Zero-lag normalized cross-correlation (Pearson) of two equal-length curves.
inline double normalizedCrossCorrelation(const std::vector<double>& a, const std::vector<double>& b) {
  qpmspdc::detail::require(a.size() == b.size() && a.size() >= 2, "curves must have equal length >= 2");
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(a.size());
  mb /= static_cast<double>(b.size());
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return saa == sbb ? 1.0 : 0.0;
  return sab / std::sqrt(saa * sbb);
}

enum class FringeFeature { Maxima, Minima };

/// Positions of interior local extrema, parabolically refined. Maxima below
/// `min_fraction` of the global maximum are ignored.
inline std::vector<double> fringeExtrema(const std::vector<double>& x, const std::vector<double>& y,
                                         FringeFeature feature, double min_fraction = 0.05) {
  qpmspdc::detail::require(x.size() == y.size() && x.size() >= 3, "fringe analysis needs at least three samples");
  const double top = *std::max_element(y.begin(), y.end());
  std::vector<double> out;
  for (std::size_t j = 1; j + 1 < y.size(); ++j) {
    const bool hit = feature == FringeFeature::Maxima
                         ? (y[j] > y[j - 1] && y[j] >= y[j + 1] && y[j] >= min_fraction * top)
                         : (y[j] < y[j - 1] && y[j] <= y[j + 1]);
    if (!hit) continue;
    const double denom = y[j - 1] - 2.0 * y[j] + y[j + 1];
    const double shift = denom != 0.0 ? 0.5 * (y[j - 1] - y[j + 1]) / denom : 0.0;
    out.push_back(x[j] + shift * (x[j + 1] - x[j]));
  }
  return out;
}

/// Mean spacing between consecutive extrema of one kind. Minima are the
/// robust choice for two-slit patterns: the single-slit envelope pulls the
/// side maxima inwards but leaves the cos^2 zeros in place.
inline double fringePeriod(const std::vector<double>& x, const std::vector<double>& y,
                           FringeFeature feature = FringeFeature::Minima, double min_fraction = 0.05) {
  const auto e = fringeExtrema(x, y, feature, min_fraction);
  if (e.size() < 2) throw GuardError("fewer than two fringe extrema in the curve");
  return (e.back() - e.front()) / static_cast<double>(e.size() - 1);
}

}  // namespace qpmspdc::biphoton
