// Longitudinal phase mismatch, QPM grating decomposition, Maker-fringe
// efficiency and poling-period design.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>

#include "qpmspdc/core.hpp"
#include "qpmspdc/dispersion.hpp"

namespace qpmspdc::phasematch {

struct QpmGrating {
  double poling_period;  // m
  double duty_cycle;
  int order;

  static QpmGrating fromCrystal(const CrystalSpec& c) { return {c.poling_period, c.duty_cycle, c.qpm_order}; }

  void validate() const {
    detail::require(poling_period > 0.0, "poling period must be positive");
    detail::require(duty_cycle > 0.0 && duty_cycle < 1.0, "duty cycle must lie in (0, 1)");
    detail::require(order >= 1, "QPM order must be >= 1");
  }
};

/// K_m = 2 pi m / Lambda.
inline double gratingVector(const QpmGrating& g) {
  g.validate();
  return kTwoPi * g.order / g.poling_period;
}

/// G_m = sinc(m pi D).
inline double fourierCoefficient(const QpmGrating& g) {
  g.validate();
  return sinc(g.order * kPi * g.duty_cycle);
}

enum class AngleConvention {
  External,  // alpha measured in air; q = k_vac sin(alpha)
  Internal,  // alpha measured inside the crystal; q = n k_vac sin(alpha)
};

inline constexpr double kDefaultParaxialBound = 0.2;

/// Indices and in-crystal wavenumbers K_j = n_j omega_j / c for one
/// frequency triple. The collinear balance is kept in extended precision:
/// the three wavenumbers are ~1e7 rad/m and cancel to well below 1 rad/m.
class ThreeWave {
 public:
  ThreeWave(const FrequencyPair& freqs, const CrystalSpec& crystal, const dispersion::IndexModel& model)
      : freqs_(freqs), crystal_(crystal) {
    crystal.validate();
    n_p_ = dispersion::refractiveIndex(model, wavelengthFromAngularFrequency(freqs.pump()), crystal.pump_axis,
                                       crystal.temperature);
    n_s_ = dispersion::refractiveIndex(model, wavelengthFromAngularFrequency(freqs.signal()), crystal.signal_axis,
                                       crystal.temperature);
    n_i_ = dispersion::refractiveIndex(model, wavelengthFromAngularFrequency(freqs.idler()), crystal.idler_axis,
                                       crystal.temperature);
    k_p_ = static_cast<long double>(n_p_) * freqs.pump() / kSpeedOfLight;
    k_s_ = static_cast<long double>(n_s_) * freqs.signal() / kSpeedOfLight;
    k_i_ = static_cast<long double>(n_i_) * freqs.idler() / kSpeedOfLight;
  }

  [[nodiscard]] const FrequencyPair& frequencies() const { return freqs_; }
  [[nodiscard]] const CrystalSpec& crystal() const { return crystal_; }
  [[nodiscard]] double nPump() const { return n_p_; }
  [[nodiscard]] double nSignal() const { return n_s_; }
  [[nodiscard]] double nIdler() const { return n_i_; }
  [[nodiscard]] double kPump() const { return static_cast<double>(k_p_); }
  [[nodiscard]] double kSignal() const { return static_cast<double>(k_s_); }
  [[nodiscard]] double kIdler() const { return static_cast<double>(k_i_); }

  /// k_p - k_s - k_i without the grating term.
  [[nodiscard]] long double materialMismatch() const { return k_p_ - k_s_ - k_i_; }

  /// k_p - k_s - k_i - 2 pi m / Lambda.
  [[nodiscard]] double collinearMismatch() const {
    const long double grating = static_cast<long double>(kTwoPi) * crystal_.qpm_order / crystal_.poling_period;
    return static_cast<double>(materialMismatch() - grating);
  }

  /// Paraxial transverse terms of the mismatch for transverse wavevectors
  /// (rad/m, signed, same x direction).
  [[nodiscard]] double transverseTerms(double q_s, double q_i) const {
    const long double qs = q_s;
    const long double qi = q_i;
    const long double qp = qs + qi;
    return static_cast<double>(qi * qi / (2 * k_i_) + qs * qs / (2 * k_s_) - qp * qp / (2 * k_p_));
  }

  void checkParaxial(double q_s, double q_i, double bound) const {
    const double rs = std::abs(q_s) / kSignal();
    const double ri = std::abs(q_i) / kIdler();
    if (rs >= bound || ri >= bound) {
      std::ostringstream os;
      os << "paraxial guard: |q_s|/k_s = " << rs << ", |q_i|/k_i = " << ri << " (bound " << bound << ")";
      throw GuardError(os.str());
    }
  }

 private:
  FrequencyPair freqs_;
  CrystalSpec crystal_;
  double n_p_ = 0.0, n_s_ = 0.0, n_i_ = 0.0;
  long double k_p_ = 0.0L, k_s_ = 0.0L, k_i_ = 0.0L;
};

struct MismatchInputs {
  FrequencyPair frequencies;
  double q_s = 0.0;  // rad/m
  double q_i = 0.0;  // rad/m
  CrystalSpec crystal;
  std::reference_wrapper<const dispersion::IndexModel> model;
  double paraxial_bound = kDefaultParaxialBound;
};

/// Paraxial longitudinal mismatch
///   (n0 w0 - ni wi - ns ws)/c - 2 pi m/Lambda
///     + c qi^2/(2 ni wi) + c qs^2/(2 ns ws) - c (qi+qs)^2/(2 n0 w0).
inline double deltaKzParaxial(const MismatchInputs& in) {
  const ThreeWave tw(in.frequencies, in.crystal, in.model.get());
  tw.checkParaxial(in.q_s, in.q_i, in.paraxial_bound);
  return tw.collinearMismatch() + tw.transverseTerms(in.q_s, in.q_i);
}

/// A = dk_z - n_g dw/c in terms of emission angles, idler and signal on
/// opposite sides of the axis:
///   (n0 w0 - ni wi - ns ws)/c - n_g (w0 - wi - ws)/c
///   + [sin^2(ai) ni wi + sin^2(as) ns ws - (sin(ai) ni wi - sin(as) ns ws)^2/(n0 w0)] / (2c)
///   - 2 pi m / Lambda
inline double mismatchA(const ThreeWave& tw, double alpha_i, double alpha_s, double pump_group_index,
                        double paraxial_bound = kDefaultParaxialBound) {
  const double si = std::sin(alpha_i);
  const double ss = std::sin(alpha_s);
  if (std::abs(si) >= paraxial_bound || std::abs(ss) >= paraxial_bound) {
    std::ostringstream os;
    os << "paraxial guard: |sin alpha_i| = " << std::abs(si) << ", |sin alpha_s| = " << std::abs(ss) << " (bound "
       << paraxial_bound << ")";
    throw GuardError(os.str());
  }
  const long double ki = tw.kIdler();
  const long double ks = tw.kSignal();
  const long double kp = tw.kPump();
  const long double cross = si * ki - ss * ks;
  const long double angular = (si * si * ki + ss * ss * ks - cross * cross / kp) / 2;
  const long double group = static_cast<long double>(pump_group_index) * tw.frequencies().deltaOmega() / kSpeedOfLight;
  return static_cast<double>(static_cast<long double>(tw.collinearMismatch()) - group + angular);
}

inline double mismatchA(double alpha_i, double alpha_s, const FrequencyPair& freqs, const CrystalSpec& crystal,
                        const dispersion::IndexModel& model, double pump_group_index) {
  return mismatchA(ThreeWave(freqs, crystal, model), alpha_i, alpha_s, pump_group_index);
}

/// Pump group index at the pump frequency, pump axis and crystal temperature.
inline double pumpGroupIndex(const FrequencyPair& freqs, const CrystalSpec& crystal,
                             const dispersion::IndexModel& model) {
  return dispersion::groupIndex(model, wavelengthFromAngularFrequency(freqs.pump()), crystal.pump_axis,
                                crystal.temperature);
}

/// Maker-fringe evaluator for the symmetric emission alpha_i = alpha_s = alpha.
class MakerProfile {
 public:
  MakerProfile(const FrequencyPair& freqs, const CrystalSpec& crystal, const dispersion::IndexModel& model,
               AngleConvention convention = AngleConvention::External)
      : tw_(freqs, crystal, model), convention_(convention),
        n_g_(pumpGroupIndex(freqs, crystal, model)) {}

  /// Internal emission angles (idler, signal) for an angle in the chosen convention.
  [[nodiscard]] std::pair<double, double> internalAngles(double alpha) const {
    if (convention_ == AngleConvention::Internal) return {alpha, alpha};
    const double s = std::sin(alpha);
    return {std::asin(std::clamp(s / tw_.nIdler(), -1.0, 1.0)), std::asin(std::clamp(s / tw_.nSignal(), -1.0, 1.0))};
  }

  [[nodiscard]] double mismatch(double alpha) const {
    const auto [ai, as] = internalAngles(alpha);
    return mismatchA(tw_, ai, as, n_g_);
  }

  /// sinc^2(L_z A / 2); equals 1 at a collinear design point.
  [[nodiscard]] double efficiency(double alpha) const {
    const double s = sinc(tw_.crystal().length * mismatch(alpha) / 2.0);
    return s * s;
  }

  /// Smallest alpha > 0 with L_z A(alpha)/2 on a nonzero multiple of pi.
  /// Bisection with bracket expansion, relative tolerance 1e-10, <= 200 iterations.
  [[nodiscard]] double firstZero() const {
    const double half_l = tw_.crystal().length / 2.0;
    const double phase0 = half_l * mismatch(0.0);
    double k = std::floor(phase0 / kPi) + 1.0;
    if (k == 0.0) k = 1.0;
    const double target = k * kPi;
    auto g = [&](double a) { return half_l * mismatch(a) - target; };
    double lo = 0.0;
    double hi = 1e-3;
    while (g(hi) < 0.0) {
      lo = hi;
      hi *= 2.0;
      if (hi > 0.5) throw GuardError("first Maker zero lies outside the paraxial domain");
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-10 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  [[nodiscard]] const ThreeWave& threeWave() const { return tw_; }
  [[nodiscard]] double pumpGroupIndexValue() const { return n_g_; }
  [[nodiscard]] AngleConvention convention() const { return convention_; }

 private:
  ThreeWave tw_;
  AngleConvention convention_;
  double n_g_;
};

inline double makerEfficiency(double alpha, const FrequencyPair& freqs, const CrystalSpec& crystal,
                              const dispersion::IndexModel& model,
                              AngleConvention convention = AngleConvention::External) {
  return MakerProfile(freqs, crystal, model, convention).efficiency(alpha);
}

/// Lambda = 2 pi m / (k_p - k_s - k_i) for collinear generation.
inline double designPolingPeriod(const FrequencyPair& freqs, const CrystalSpec& crystal,
                                 const dispersion::IndexModel& model) {
  const ThreeWave tw(freqs, crystal.withPoling(1.0), model);
  const long double denom = tw.materialMismatch();
  if (!(denom > 1e-12L * tw.kPump())) {
    std::ostringstream os;
    os << "no quasi-phase-matching solution: k_p - k_s - k_i = " << static_cast<double>(denom)
       << " rad/m (must be positive)";
    throw NoPhaseMatching(os.str());
  }
  return static_cast<double>(static_cast<long double>(kTwoPi) * crystal.qpm_order / denom);
}

/// Wavelength form; signal/idler frequencies follow from the wavelengths.
inline double designPolingPeriod(double pump_wavelength, double signal_wavelength, double idler_wavelength,
                                 const CrystalSpec& crystal, const dispersion::IndexModel& model) {
  const FrequencyPair f(angularFrequency(signal_wavelength), angularFrequency(idler_wavelength),
                        angularFrequency(pump_wavelength));
  return designPolingPeriod(f, crystal, model);
}

/// Temperature at which the crystal's poling period phase-matches
/// collinearly, searched by bisection on [t_lo, t_hi].
inline double phaseMatchingTemperature(const FrequencyPair& freqs, const CrystalSpec& crystal,
                                       const dispersion::IndexModel& model, double t_lo = -50.0,
                                       double t_hi = 250.0) {
  auto f = [&](double t) {
    CrystalSpec c = crystal;
    c.temperature = t;
    return ThreeWave(freqs, c, model).collinearMismatch();
  };
  double flo = f(t_lo);
  const double fhi = f(t_hi);
  if (flo == 0.0) return t_lo;
  if ((flo < 0.0) == (fhi < 0.0))
    throw NoPhaseMatching("collinear mismatch does not change sign between " + std::to_string(t_lo) + " and " +
                          std::to_string(t_hi) + " C");
  for (int it = 0; it < 200 && (t_hi - t_lo) > 1e-10 * std::max(1.0, std::abs(t_hi)); ++it) {
    const double mid = 0.5 * (t_lo + t_hi);
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      t_lo = mid;
      flo = fm;
    } else {
      t_hi = mid;
    }
  }
  return 0.5 * (t_lo + t_hi);
}

/// Small-angle detector mapping alpha = p / z_D.
inline double detectorAngle(double p, double z_d) {
  detail::require(z_d > 0.0, "detection distance must be positive");
  return p / z_d;
}

/// 1 - min efficiency over detector positions spanning [-range/2, range/2].
inline double efficiencyDropOverScan(const MakerProfile& maker, double scan_range, double z_d, int samples = 401) {
  detail::require(scan_range >= 0.0, "scan range must be >= 0");
  detail::require(samples >= 2, "need at least two scan samples");
  if (scan_range == 0.0) return 1.0 - maker.efficiency(0.0);
  double worst = 1.0;
  for (int j = 0; j < samples; ++j) {
    const double p = -scan_range / 2.0 + scan_range * j / (samples - 1);
    worst = std::min(worst, maker.efficiency(detectorAngle(p, z_d)));
  }
  return 1.0 - worst;
}

inline double efficiencyDropOverScan(double scan_range, double z_d, const FrequencyPair& freqs,
                                     const CrystalSpec& crystal, const dispersion::IndexModel& model,
                                     AngleConvention convention = AngleConvention::External) {
  return efficiencyDropOverScan(MakerProfile(freqs, crystal, model, convention), scan_range, z_d);
}

}  // namespace qpmspdc::phasematch
