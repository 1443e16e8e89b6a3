// Scalar 1D pump-field synthesis and paraxial angular-spectrum propagation.
//
// Grids are centred: x_n = (n - N/2) dx, q_j = (j - N/2) dq, dq = 2 pi / extent.
// The transform pair is the continuous-normalized Fourier transform
//   E~(q) = (2 pi)^-1/2 Int E(x) exp(-i q x) dx,
// sampled, so that sum |E|^2 dx == sum |E~|^2 dq exactly (Parseval).
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "qpmspdc/core.hpp"
#include "qpmspdc/fft.hpp"

namespace qpmspdc::field {

using Complex = std::complex<double>;

struct Grid {
  std::size_t samples = 4096;
  double extent = 20e-3;  // m

  void validate() const {
    qpmspdc::detail::require(samples >= 4 && std::has_single_bit(samples), "sample count must be a power of two >= 4");
    qpmspdc::detail::require(extent > 0.0 && std::isfinite(extent), "grid extent must be positive");
  }
  [[nodiscard]] double spacing() const { return extent / static_cast<double>(samples); }
  [[nodiscard]] double x(std::size_t n) const {
    return (static_cast<double>(n) - static_cast<double>(samples / 2)) * spacing();
  }
  [[nodiscard]] double qSpacing() const { return kTwoPi / extent; }
  [[nodiscard]] double q(std::size_t j) const {
    return (static_cast<double>(j) - static_cast<double>(samples / 2)) * qSpacing();
  }
  bool operator==(const Grid&) const = default;
};

namespace detail {
inline double interpolateReal(const std::vector<double>& v, double pos) {
  if (!(pos >= 0.0) || pos > static_cast<double>(v.size() - 1)) return 0.0;
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= v.size()) return v.back();
  const double t = pos - static_cast<double>(i);
  return v[i] + t * (v[i + 1] - v[i]);
}
}  // namespace detail

/// Complex field on a uniform transverse grid at plane z.
struct SampledField {
  Grid grid;
  double wavelength = 0.0;  // vacuum, m
  double plane_z = 0.0;     // m
  std::vector<Complex> values;

  [[nodiscard]] double power() const {
    double s = 0.0;
    for (const auto& v : values) s += std::norm(v);
    return s * grid.spacing();
  }

  [[nodiscard]] std::vector<double> intensity() const {
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(), [](const Complex& v) { return std::norm(v); });
    return out;
  }

  /// Linear interpolation of |E|^2; zero outside the grid.
  [[nodiscard]] double intensityAt(double x, const std::vector<double>& cached_intensity) const {
    const double pos = x / grid.spacing() + static_cast<double>(grid.samples / 2);
    return detail::interpolateReal(cached_intensity, pos);
  }
};

/// Angular spectrum E~(q) on the grid conjugate to a SampledField's grid.
struct AngularSpectrum {
  Grid grid;  // the position-space grid this spectrum is conjugate to
  double wavelength = 0.0;
  std::vector<Complex> values;

  [[nodiscard]] double qSpacing() const { return grid.qSpacing(); }
  [[nodiscard]] double q(std::size_t j) const { return grid.q(j); }
  /// Largest |q| that lies inside the sampled band.
  [[nodiscard]] double qExtentHalf() const { return qSpacing() * static_cast<double>(grid.samples / 2 - 1); }

  [[nodiscard]] double power() const {
    double s = 0.0;
    for (const auto& v : values) s += std::norm(v);
    return s * qSpacing();
  }

  /// Linear complex interpolation in q; zero outside the band.
  [[nodiscard]] Complex at(double q_value) const {
    const double pos = q_value / qSpacing() + static_cast<double>(grid.samples / 2);
    if (!(pos >= 0.0) || pos > static_cast<double>(values.size() - 1)) return {0.0, 0.0};
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= values.size()) return values.back();
    const double t = pos - static_cast<double>(i);
    if (t == 0.0) return values[i];
    return values[i] + t * (values[i + 1] - values[i]);
  }

  [[nodiscard]] double maxAbs() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
  }
};

// ---------------------------------------------------------------------------
// Transforms

inline AngularSpectrum transformToAngularSpectrum(const SampledField& f) {
  f.grid.validate();
  const std::size_t n = f.grid.samples;
  std::vector<Complex> buf(f.values);
  for (std::size_t k = 1; k < n; k += 2) buf[k] = -buf[k];
  auto out = fft::dft(buf, fft::Direction::Forward);
  const double scale = f.grid.spacing() / std::sqrt(kTwoPi);
  for (std::size_t k = 0; k < n; ++k) out[k] *= (k % 2 ? -scale : scale);
  return {f.grid, f.wavelength, std::move(out)};
}

inline SampledField transformToField(const AngularSpectrum& s, double plane_z) {
  s.grid.validate();
  const std::size_t n = s.grid.samples;
  std::vector<Complex> buf(s.values);
  for (std::size_t k = 1; k < n; k += 2) buf[k] = -buf[k];
  auto out = fft::dft(buf, fft::Direction::Backward);
  const double scale = s.qSpacing() / std::sqrt(kTwoPi);
  for (std::size_t k = 0; k < n; ++k) out[k] *= (k % 2 ? -scale : scale);
  return {s.grid, s.wavelength, plane_z, std::move(out)};
}

// ---------------------------------------------------------------------------
// Sources

/// Largest single propagation distance the transfer function can carry on
/// this grid without the band edge wrapping around: n * extent * dx / lambda.
inline double maxPropagationDistance(const Grid& g, double wavelength, double medium_index = 1.0) {
  return medium_index * g.extent * g.spacing() / wavelength;
}

/// 1D Gaussian beam E = sqrt(q0/q) exp(i k x^2 / (2 q)), q = dz - i z_R,
/// evaluated dz after (dz < 0: before) its waist. Irradiance falls to e^-2
/// at |x| = w(dz); at the waist the amplitude is exp(-x^2/w0^2).
inline SampledField gaussianBeam(double waist_radius, double wavelength, const Grid& grid, double dz = 0.0) {
  grid.validate();
  qpmspdc::detail::require(waist_radius > 0.0, "waist radius must be positive");
  qpmspdc::detail::require(wavelength > 0.0, "wavelength must be positive");
  if (grid.extent < 8.0 * waist_radius) {
    std::ostringstream os;
    os << "grid too small: extent " << grid.extent << " m < 8 x waist (" << 8.0 * waist_radius << " m)";
    throw GuardError(os.str());
  }
  const double k = kTwoPi / wavelength;
  const double z_r = kPi * waist_radius * waist_radius / wavelength;
  const Complex q0(0.0, -z_r);
  const Complex q(dz, -z_r);
  const Complex pre = std::sqrt(q0 / q);
  SampledField f{grid, wavelength, 0.0, std::vector<Complex>(grid.samples)};
  for (std::size_t j = 0; j < grid.samples; ++j) {
    const double x = grid.x(j);
    f.values[j] = pre * std::exp(Complex(0.0, k * x * x / 2.0) / q);
  }
  return f;
}

/// Gaussian at its waist: amplitude exp(-x^2/w0^2), flat phase.
inline SampledField gaussianSource(double waist_radius, double wavelength, const Grid& grid) {
  SampledField f = gaussianBeam(waist_radius, wavelength, grid, 0.0);
  for (auto& v : f.values) v = {v.real(), 0.0};
  return f;
}

// ---------------------------------------------------------------------------
// Propagation and elements

/// Paraxial angular-spectrum propagation: E~(q) *= exp(-i q^2 d / (2 k n)).
inline SampledField propagate(const SampledField& f, double distance, double medium_index = 1.0) {
  qpmspdc::detail::require(distance >= 0.0 && std::isfinite(distance), "propagation distance must be >= 0");
  qpmspdc::detail::require(medium_index > 0.0, "medium index must be positive");
  if (distance == 0.0) return f;
  const double limit = maxPropagationDistance(f.grid, f.wavelength, medium_index);
  if (distance > limit * (1.0 + 1e-12)) {
    const double dx = f.grid.spacing();
    const double needed_extent = distance * f.wavelength / (medium_index * dx);
    const auto needed = std::bit_ceil(static_cast<std::size_t>(std::ceil(needed_extent / dx)));
    std::ostringstream os;
    os << "aliasing guard: propagating " << distance << " m needs extent*dx/lambda >= d; this grid allows " << limit
       << " m. At the current spacing use at least " << needed << " samples (extent " << needed * dx << " m)";
    throw GuardError(os.str());
  }
  AngularSpectrum s = transformToAngularSpectrum(f);
  const double k = kTwoPi / f.wavelength * medium_index;
  for (std::size_t j = 0; j < s.values.size(); ++j) {
    const double q = s.q(j);
    s.values[j] *= std::polar(1.0, -q * q * distance / (2.0 * k));
  }
  return transformToField(s, f.plane_z + distance);
}

struct ThinLens {
  double focal_length;  // m, > 0 converging
};

/// slit_count slits of equal width, centres spaced by center_separation and
/// symmetric about x = 0.
struct MultiSlit {
  double slit_width;
  double center_separation;
  int slit_count;
};

/// Homogeneous slab (or plain free space when index = 1).
struct FreeSpace {
  double distance;
  double index = 1.0;
};

using OpticalElement = std::variant<ThinLens, MultiSlit, FreeSpace>;

inline void validate(const OpticalElement& e) {
  std::visit(
      [](const auto& el) {
        using T = std::decay_t<decltype(el)>;
        if constexpr (std::is_same_v<T, ThinLens>) {
          qpmspdc::detail::require(el.focal_length != 0.0 && std::isfinite(el.focal_length),
                                   "lens focal length must be nonzero");
        } else if constexpr (std::is_same_v<T, MultiSlit>) {
          qpmspdc::detail::require(el.slit_width > 0.0, "slit width must be positive");
          qpmspdc::detail::require(el.slit_count >= 1, "slit count must be >= 1");
          qpmspdc::detail::require(el.slit_count == 1 || el.center_separation > 0.0,
                                   "slit separation must be positive");
        } else {
          qpmspdc::detail::require(el.distance >= 0.0, "free-space distance must be >= 0");
          qpmspdc::detail::require(el.index > 0.0, "free-space index must be positive");
        }
      },
      e);
}

/// Binary transmission of a multi-slit aperture sampled on the grid.
/// A sample belongs to a slit when its position lies in [c - w/2, c + w/2).
inline std::vector<double> slitMask(const MultiSlit& s, const Grid& g) {
  const double total = (s.slit_count - 1) * s.center_separation + s.slit_width;
  if (total > g.extent) {
    std::ostringstream os;
    os << "aperture (" << total << " m) wider than grid (" << g.extent << " m)";
    throw GuardError(os.str());
  }
  const double eps = 1e-9 * g.spacing();
  std::vector<double> mask(g.samples, 0.0);
  for (int m = 0; m < s.slit_count; ++m) {
    const double c = (m - (s.slit_count - 1) / 2.0) * s.center_separation;
    const double lo = c - s.slit_width / 2.0 - eps;
    const double hi = c + s.slit_width / 2.0 - eps;
    for (std::size_t j = 0; j < g.samples; ++j) {
      const double x = g.x(j);
      if (x >= lo && x < hi) mask[j] = 1.0;
    }
  }
  return mask;
}

inline SampledField applyElement(const SampledField& f, const OpticalElement& e) {
  validate(e);
  if (const auto* lens = std::get_if<ThinLens>(&e)) {
    SampledField out = f;
    const double k = kTwoPi / f.wavelength;
    for (std::size_t j = 0; j < out.values.size(); ++j) {
      const double x = f.grid.x(j);
      out.values[j] *= std::polar(1.0, -k * x * x / (2.0 * lens->focal_length));
    }
    return out;
  }
  if (const auto* slits = std::get_if<MultiSlit>(&e)) {
    SampledField out = f;
    const auto mask = slitMask(*slits, f.grid);
    for (std::size_t j = 0; j < out.values.size(); ++j) out.values[j] *= mask[j];
    return out;
  }
  const auto& fs = std::get<FreeSpace>(e);
  return propagate(f, fs.distance, fs.index);
}

// ---------------------------------------------------------------------------
// Pump path: source -> elements -> crystal -> detection plane
//
// Longitudinal coordinate: crystal entrance face at z = 0, crystal exit at
// z = L_z, detection plane at z = L_z/2 + z_D (z_D measured from the crystal
// centre). Elements sit at z <= 0.

struct PlacedElement {
  double position;  // m
  OpticalElement element;
};

struct CrystalSlab {
  double length;  // m
  double index;   // pump phase index inside the crystal
};

struct PumpBeam {
  double wavelength;
  double waist_radius;
  double waist_position;
};

namespace detail {
inline void checkPath(const std::vector<PlacedElement>& elements) {
  double prev = -std::numeric_limits<double>::infinity();
  for (const auto& pe : elements) {
    validate(pe.element);
    qpmspdc::detail::require(std::isfinite(pe.position), "element position must be finite");
    qpmspdc::detail::require(pe.position >= prev, "element positions must be non-decreasing");
    double end = pe.position;
    if (const auto* fs = std::get_if<FreeSpace>(&pe.element)) end += fs->distance;
    qpmspdc::detail::require(end <= 0.0, "elements must lie before the crystal entrance face (z <= 0)");
    prev = end;
  }
}
}  // namespace detail

/// Pump field at the crystal entrance face (z = 0).
inline SampledField fieldAtCrystalEntrance(const PumpBeam& pump, const std::vector<PlacedElement>& elements,
                                           const Grid& grid) {
  detail::checkPath(elements);
  double z = std::min(pump.waist_position, 0.0);
  if (!elements.empty()) z = std::min(z, elements.front().position);
  SampledField f = gaussianBeam(pump.waist_radius, pump.wavelength, grid, z - pump.waist_position);
  f.plane_z = z;
  for (const auto& pe : elements) {
    f = propagate(f, pe.position - f.plane_z);
    f = applyElement(f, pe.element);
    if (const auto* fs = std::get_if<FreeSpace>(&pe.element)) f.plane_z = pe.position + fs->distance;
  }
  f = propagate(f, 0.0 - f.plane_z);
  f.plane_z = 0.0;
  return f;
}

/// Pump field W at the detection plane z = L_z/2 + z_D. The crystal interior
/// is traversed with its pump index (effective free-space length L_z/n).
inline SampledField detectionPlaneProfile(const PumpBeam& pump, const std::vector<PlacedElement>& elements,
                                          const CrystalSlab& crystal, double z_d, const Grid& grid) {
  qpmspdc::detail::require(crystal.length > 0.0 && crystal.index > 0.0, "invalid crystal slab");
  qpmspdc::detail::require(z_d > crystal.length / 2.0, "detection plane must lie beyond the crystal exit face");
  SampledField f = fieldAtCrystalEntrance(pump, elements, grid);
  f = propagate(f, crystal.length, crystal.index);
  f = propagate(f, z_d - crystal.length / 2.0);
  f.plane_z = crystal.length / 2.0 + z_d;
  return f;
}

// ---------------------------------------------------------------------------
// Beam diagnostics

/// 2 sqrt(<(x - <x>)^2>) of the irradiance; equals w for a Gaussian.
inline double secondMomentWidth(const SampledField& f) {
  double s0 = 0.0, s1 = 0.0;
  for (std::size_t j = 0; j < f.values.size(); ++j) {
    const double i = std::norm(f.values[j]);
    s0 += i;
    s1 += i * f.grid.x(j);
  }
  const double mean = s1 / s0;
  double s2 = 0.0;
  for (std::size_t j = 0; j < f.values.size(); ++j) {
    const double d = f.grid.x(j) - mean;
    s2 += std::norm(f.values[j]) * d * d;
  }
  return 2.0 * std::sqrt(s2 / s0);
}

inline double peakIntensity(const SampledField& f) {
  double m = 0.0;
  for (const auto& v : f.values) m = std::max(m, std::norm(v));
  return m;
}

/// Analytic Gaussian-beam radius w(z) = w0 sqrt(1 + (z/z_R)^2).
inline double gaussianWidth(double waist_radius, double wavelength, double z) {
  const double z_r = kPi * waist_radius * waist_radius / wavelength;
  return waist_radius * std::sqrt(1.0 + (z / z_r) * (z / z_r));
}

}  // namespace qpmspdc::field
