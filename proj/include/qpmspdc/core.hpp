// Units, constants, shared domain types and elementary math.
//
// Everything inside the library is SI (m, s, rad/s, rad/m). Temperatures are
// degrees Celsius. Human-facing units are converted at the config boundary.
#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qpmspdc {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// ---------------------------------------------------------------------------
// Errors

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A value violates a documented precondition or type invariant.
struct InvalidInput : Error {
  using Error::Error;
};

/// A configuration file or command line could not be parsed.
struct ConfigError : Error {
  using Error::Error;
};

/// Evaluation outside a model's validity window.
struct OutOfRange : Error {
  OutOfRange(const std::string& what, double lo, double hi) : Error(what), lower(lo), upper(hi) {}
  double lower;
  double upper;
};

/// A numerical guard tripped (paraxiality, aliasing, grid size, ...).
struct GuardError : Error {
  using Error::Error;
};

/// No quasi-phase-matching solution exists for the requested process.
struct NoPhaseMatching : Error {
  using Error::Error;
};

namespace detail {
inline void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidInput(msg);
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Elementary math

/// Unnormalized sinc: sin(x)/x, with sinc(0) = 1.
///
/// This is the phase-matching convention. It is NOT sin(pi x)/(pi x).
inline double sinc(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

/// omega = 2 pi c / lambda.
inline double angularFrequency(double wavelength) {
  detail::require(wavelength > 0.0 && std::isfinite(wavelength), "wavelength must be positive and finite");
  return kTwoPi * kSpeedOfLight / wavelength;
}

/// lambda = 2 pi c / omega.
inline double wavelengthFromAngularFrequency(double omega) {
  detail::require(omega > 0.0 && std::isfinite(omega), "angular frequency must be positive and finite");
  return kTwoPi * kSpeedOfLight / omega;
}

/// Gamma = 1/tau^2 for a Gaussian pump envelope exp(-Gamma t^2).
/// tau is used as given; no FWHM conversion.
inline double gammaFromPulseWidth(double tau) {
  detail::require(tau > 0.0 && std::isfinite(tau), "pulse duration must be positive and finite");
  return 1.0 / (tau * tau);
}

// ---------------------------------------------------------------------------
// Domain types

enum class Axis { X, Y, Z };

inline std::string_view toString(Axis a) {
  switch (a) {
    case Axis::X: return "x";
    case Axis::Y: return "y";
    case Axis::Z: return "z";
  }
  return "?";
}

inline Axis parseAxis(std::string_view s) {
  if (s == "x" || s == "X") return Axis::X;
  if (s == "y" || s == "Y") return Axis::Y;
  if (s == "z" || s == "Z") return Axis::Z;
  throw InvalidInput("unknown crystal axis '" + std::string(s) + "' (expected x, y or z)");
}

enum class InteractionType { TypeI, TypeII };

/// Poled crystal geometry and polarization assignment.
struct CrystalSpec {
  double length = 0.0;          // L_z, m
  double poling_period = 0.0;   // Lambda, m
  double duty_cycle = 0.5;      // D
  int qpm_order = 1;            // m
  double temperature = 20.0;    // deg C
  Axis pump_axis = Axis::Y;
  Axis signal_axis = Axis::Y;
  Axis idler_axis = Axis::Z;
  InteractionType type = InteractionType::TypeII;

  void validate() const {
    detail::require(length > 0.0 && std::isfinite(length), "crystal length must be positive");
    detail::require(poling_period > 0.0 && !std::isnan(poling_period), "poling period must be positive");
    detail::require(duty_cycle > 0.0 && duty_cycle < 1.0, "duty cycle must lie in (0, 1)");
    detail::require(qpm_order >= 1, "QPM order must be >= 1");
    detail::require(std::isfinite(temperature), "temperature must be finite");
    if (type == InteractionType::TypeII)
      detail::require(signal_axis != idler_axis, "type-II crystal needs distinct signal and idler axes");
  }

  /// Copy with a different poling period.
  [[nodiscard]] CrystalSpec withPoling(double period) const {
    CrystalSpec c = *this;
    c.poling_period = period;
    c.validate();
    return c;
  }
};

/// Pump beam. A missing pulse duration means CW.
struct PumpSpec {
  double wavelength = 0.0;                // m
  double waist_radius = 0.0;              // m, e^-2 irradiance radius
  double waist_position = 0.0;            // m, longitudinal (crystal entrance face at 0)
  std::optional<double> pulse_duration;   // s; nullopt => CW

  void validate() const {
    detail::require(wavelength > 0.0 && std::isfinite(wavelength), "pump wavelength must be positive");
    detail::require(waist_radius > 0.0 && std::isfinite(waist_radius), "pump waist radius must be positive");
    detail::require(std::isfinite(waist_position), "pump waist position must be finite");
    if (pulse_duration)
      detail::require(*pulse_duration > 0.0 && std::isfinite(*pulse_duration), "pulse duration must be positive");
  }

  [[nodiscard]] bool isCw() const { return !pulse_duration.has_value(); }
  [[nodiscard]] double omega() const { return angularFrequency(wavelength); }

  /// Gamma = 1/tau^2; undefined for CW.
  [[nodiscard]] std::optional<double> gamma() const {
    if (!pulse_duration) return std::nullopt;
    return gammaFromPulseWidth(*pulse_duration);
  }
};

/// Detector placement, scan and interference filters.
struct DetectionGeometry {
  double distance = 0.0;        // z_D, m (crystal centre to detection plane)
  double slit_width = 0.0;      // m
  double scan_range = 0.0;      // m, total extent centred on the axis
  double scan_step = 0.0;       // m
  double filter_center = 0.0;   // m
  double filter_fwhm = 0.0;     // m
  double fixed_position = 0.0;  // m, position of the non-scanned detector

  void validate() const {
    detail::require(distance > 0.0 && std::isfinite(distance), "detection distance z_D must be positive");
    detail::require(slit_width >= 0.0 && std::isfinite(slit_width), "detector slit width must be >= 0");
    detail::require(scan_step > 0.0 && std::isfinite(scan_step), "scan step must be positive");
    detail::require(scan_step <= scan_range, "scan step must not exceed scan range");
    detail::require(filter_center > 0.0, "filter centre wavelength must be positive");
    detail::require(filter_fwhm > 0.0, "filter FWHM must be positive");
    detail::require(std::isfinite(fixed_position), "fixed detector position must be finite");
  }
};

/// Signal/idler angular frequencies together with the pump frequency.
class FrequencyPair {
 public:
  FrequencyPair(double omega_s, double omega_i, double omega_pump)
      : omega_s_(omega_s), omega_i_(omega_i), omega_p_(omega_pump),
        delta_omega_(omega_pump - omega_s - omega_i) {
    detail::require(omega_s > 0.0 && std::isfinite(omega_s), "signal frequency must be positive");
    detail::require(omega_i > 0.0 && std::isfinite(omega_i), "idler frequency must be positive");
    detail::require(omega_pump > 0.0 && std::isfinite(omega_pump), "pump frequency must be positive");
  }

  /// omega_s = omega_i = omega_p / 2, delta_omega = 0 exactly.
  static FrequencyPair degenerate(double omega_pump) {
    return {omega_pump / 2.0, omega_pump / 2.0, omega_pump};
  }

  [[nodiscard]] double signal() const { return omega_s_; }
  [[nodiscard]] double idler() const { return omega_i_; }
  [[nodiscard]] double pump() const { return omega_p_; }
  [[nodiscard]] double deltaOmega() const { return delta_omega_; }

 private:
  double omega_s_;
  double omega_i_;
  double omega_p_;
  double delta_omega_;
};

}  // namespace qpmspdc
