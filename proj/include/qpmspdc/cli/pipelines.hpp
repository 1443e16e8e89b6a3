// The four analysis pipelines on a converted Scenario. Each returns plain
// data; formatting and file output live in app.hpp.
#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qpmspdc/biphoton.hpp"
#include "qpmspdc/cli/config.hpp"
#include "qpmspdc/dispersion.hpp"
#include "qpmspdc/field.hpp"
#include "qpmspdc/phasematch.hpp"

namespace qpmspdc::cli {

struct MakerCurve {
  std::vector<double> alpha;  // rad
  std::vector<double> efficiency;
  double first_zero = 0.0;    // rad
};

inline MakerCurve makerFringes(const Scenario& s, double alpha_max, double alpha_step) {
  if (!(alpha_step > 0.0) || !std::isfinite(alpha_step)) throw ConfigError("alpha step must be positive");
  if (!(alpha_max >= 0.0) || !std::isfinite(alpha_max)) throw ConfigError("alpha maximum must be >= 0");
  const phasematch::MakerProfile maker(s.frequencies, s.crystal, *s.model, s.numerics.angle_convention);
  MakerCurve c;
  const auto count = static_cast<std::size_t>(std::floor(alpha_max / alpha_step + 1e-9)) + 1;
  if (count > 10'000'000) throw ConfigError("alpha range/step gives too many samples");
  c.alpha.resize(count);
  c.efficiency.resize(count);
  for (std::size_t j = 0; j < count; ++j) {
    c.alpha[j] = static_cast<double>(j) * alpha_step;
    c.efficiency[j] = maker.efficiency(c.alpha[j]);
  }
  c.first_zero = maker.firstZero();
  return c;
}

struct PolingReport {
  double period = 0.0;             // m, collinear design value
  double configured_period = 0.0;  // m
  double residual = 0.0;           // rad/m, collinear mismatch at the design period
  double n_pump = 0.0;
  double n_signal = 0.0;
  double n_idler = 0.0;
  double pump_group_index = 0.0;
  std::optional<double> matching_temperature;  // C, for the configured period
  std::string index_model;
};

inline PolingReport designPoling(const Scenario& s) {
  PolingReport r;
  r.period = phasematch::designPolingPeriod(s.frequencies, s.crystal, *s.model);
  r.configured_period = s.configured_period;
  const phasematch::ThreeWave tw(s.frequencies, s.crystal.withPoling(r.period), *s.model);
  r.residual = tw.collinearMismatch();
  r.n_pump = tw.nPump();
  r.n_signal = tw.nSignal();
  r.n_idler = tw.nIdler();
  r.pump_group_index = phasematch::pumpGroupIndex(s.frequencies, s.crystal, *s.model);
  r.index_model = s.model->id();
  try {
    r.matching_temperature =
        phasematch::phaseMatchingTemperature(s.frequencies, s.crystal.withPoling(s.configured_period), *s.model);
  } catch (const NoPhaseMatching&) {
  } catch (const OutOfRange&) {
  }
  return r;
}

inline double pumpIndex(const Scenario& s) {
  return dispersion::refractiveIndex(*s.model, s.pump.wavelength, s.crystal.pump_axis, s.crystal.temperature);
}

inline field::PumpBeam pumpBeam(const Scenario& s) {
  return {s.pump.wavelength, s.pump.waist_radius, s.pump.waist_position};
}

/// Pump field W at the detection plane.
inline field::SampledField pumpPropagate(const Scenario& s) {
  return field::detectionPlaneProfile(pumpBeam(s), s.elements, {s.crystal.length, pumpIndex(s)},
                                      s.detection.distance, s.grid);
}

inline phasematch::MakerProfile makerProfile(const Scenario& s) {
  return {s.frequencies, s.crystal, *s.model, s.numerics.angle_convention};
}

inline biphoton::JointAmplitude jointAmplitude(const Scenario& s, bool include_phase = true) {
  const auto entrance = field::fieldAtCrystalEntrance(pumpBeam(s), s.elements, s.grid);
  biphoton::JointAmplitudeOptions o;
  o.normalize = s.numerics.normalize;
  o.include_phase = include_phase;
  o.paraxial_bound = s.numerics.paraxial_bound;
  return {field::transformToAngularSpectrum(entrance), s.crystal, s.frequencies, *s.model, s.pump, o};
}

inline biphoton::ScanResult scanAnalytic(const Scenario& s, biphoton::ScanMode mode = biphoton::ScanMode::BothTogether) {
  return biphoton::coincidenceScanAnalytic(pumpPropagate(s), makerProfile(s), s.detection, s.scanOptions(mode));
}

inline biphoton::ScanResult scanOracle(const Scenario& s, biphoton::ScanMode mode = biphoton::ScanMode::BothTogether) {
  return biphoton::coincidenceScanOracle(jointAmplitude(s), makerProfile(s), s.detection, s.scanOptions(mode));
}

}  // namespace qpmspdc::cli
