#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "qpmspdc/core.hpp"

using namespace qpmspdc;

TEST(Sinc, ClosedForms) {
  EXPECT_EQ(sinc(0.0), 1.0);
  EXPECT_NEAR(sinc(kPi), 0.0, 1e-16);
  EXPECT_NEAR(sinc(kPi / 2), 2.0 / kPi, 1e-15);
  EXPECT_NEAR(sinc(0.6366198), std::sin(0.6366198) / 0.6366198, 1e-16);
}

TEST(Sinc, SmallArgumentSeriesIsContinuous) {
  for (double x : {1e-12, 1e-8, 5e-5, 9.9e-5, 1.01e-4, 1e-3}) {
    EXPECT_NEAR(sinc(x), std::sin(x) / x, 1e-15) << x;
  }
}

TEST(Sinc, EvenAndBounded) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-200.0, 200.0);
  for (int i = 0; i < 20000; ++i) {
    const double x = u(rng);
    EXPECT_EQ(sinc(x), sinc(-x));
    if (x != 0.0) {
      EXPECT_LT(std::abs(sinc(x)), 1.0);
    }
  }
}

TEST(Conversions, AngularFrequency) {
  // 2 pi c / 413 nm, evaluated separately at 40 digits
  EXPECT_NEAR(angularFrequency(413e-9), 4.560899678713930e15, 1e0);
  EXPECT_NEAR(angularFrequency(826e-9), 4.560899678713930e15 / 2, 1e0);
  // four-figure rounding of the same number
  EXPECT_NEAR(angularFrequency(413e-9) / 4.5606e15, 1.0, 1e-4);
  EXPECT_THROW(angularFrequency(0.0), InvalidInput);
  EXPECT_THROW(angularFrequency(-1e-6), InvalidInput);
}

TEST(Conversions, WavelengthRoundTrip) {
  for (double l : {0.35e-6, 413e-9, 826e-9, 1.55e-6, 3.5e-6}) {
    EXPECT_NEAR(wavelengthFromAngularFrequency(angularFrequency(l)) / l, 1.0, 1e-15);
  }
  EXPECT_THROW(wavelengthFromAngularFrequency(0.0), InvalidInput);
}

TEST(Conversions, Gamma) {
  EXPECT_NEAR(gammaFromPulseWidth(200e-15) / 2.5e25, 1.0, 1e-14);
  EXPECT_EQ(gammaFromPulseWidth(1.0), 1.0);
  EXPECT_NEAR(gammaFromPulseWidth(400e-15) / gammaFromPulseWidth(200e-15), 0.25, 1e-15);
  EXPECT_THROW(gammaFromPulseWidth(0.0), InvalidInput);
  EXPECT_THROW(gammaFromPulseWidth(-1.0), InvalidInput);
}

TEST(Axis, ParseAndPrint) {
  for (Axis a : {Axis::X, Axis::Y, Axis::Z}) EXPECT_EQ(parseAxis(toString(a)), a);
  EXPECT_THROW(parseAxis("w"), InvalidInput);
}

namespace {
CrystalSpec referenceCrystal() {
  CrystalSpec c;
  c.length = 9.6e-3;
  c.poling_period = 11.4617e-6;
  c.temperature = 40.0;
  return c;
}

DetectionGeometry referenceDetection() {
  return {0.5, 0.1e-3, 4e-3, 25e-6, 826e-9, 2e-9, 0.0};
}
}  // namespace

TEST(CrystalSpec, Boundaries) {
  EXPECT_NO_THROW(referenceCrystal().validate());
  auto with = [](auto mutate) {
    CrystalSpec c = referenceCrystal();
    mutate(c);
    return c;
  };
  EXPECT_THROW(with([](CrystalSpec& c) { c.length = 0.0; }).validate(), InvalidInput);
  EXPECT_THROW(with([](CrystalSpec& c) { c.length = -1e-3; }).validate(), InvalidInput);
  EXPECT_THROW(with([](CrystalSpec& c) { c.poling_period = 0.0; }).validate(), InvalidInput);
  EXPECT_THROW(with([](CrystalSpec& c) { c.duty_cycle = 0.0; }).validate(), InvalidInput);
  EXPECT_THROW(with([](CrystalSpec& c) { c.duty_cycle = 1.0; }).validate(), InvalidInput);
  EXPECT_NO_THROW(with([](CrystalSpec& c) { c.duty_cycle = 1e-9; }).validate());
  EXPECT_NO_THROW(with([](CrystalSpec& c) { c.duty_cycle = 1 - 1e-9; }).validate());
  EXPECT_THROW(with([](CrystalSpec& c) { c.qpm_order = 0; }).validate(), InvalidInput);
  EXPECT_NO_THROW(with([](CrystalSpec& c) { c.qpm_order = 1; }).validate());
  EXPECT_THROW(with([](CrystalSpec& c) { c.temperature = std::numeric_limits<double>::quiet_NaN(); }).validate(),
               InvalidInput);
  // type II needs distinct signal / idler axes; type I does not
  EXPECT_THROW(with([](CrystalSpec& c) { c.idler_axis = Axis::Y; }).validate(), InvalidInput);
  EXPECT_NO_THROW(with([](CrystalSpec& c) {
                    c.idler_axis = Axis::Y;
                    c.type = InteractionType::TypeI;
                  }).validate());
}

TEST(PumpSpec, BoundariesAndGamma) {
  PumpSpec p{413e-9, 0.5e-3, 0.0, 200e-15};
  EXPECT_NO_THROW(p.validate());
  EXPECT_FALSE(p.isCw());
  EXPECT_NEAR(*p.gamma() / 2.5e25, 1.0, 1e-14);
  PumpSpec cw = p;
  cw.pulse_duration.reset();
  EXPECT_TRUE(cw.isCw());
  EXPECT_FALSE(cw.gamma().has_value());
  for (auto bad : {PumpSpec{0.0, 0.5e-3, 0.0, 200e-15}, PumpSpec{413e-9, 0.0, 0.0, 200e-15},
                   PumpSpec{-413e-9, 0.5e-3, 0.0, {}}, PumpSpec{413e-9, 0.5e-3, 0.0, 0.0},
                   PumpSpec{413e-9, 0.5e-3, std::numeric_limits<double>::infinity(), {}}}) {
    EXPECT_THROW(bad.validate(), InvalidInput);
  }
}

TEST(DetectionGeometry, Boundaries) {
  EXPECT_NO_THROW(referenceDetection().validate());
  auto with = [](auto mutate) {
    DetectionGeometry g = referenceDetection();
    mutate(g);
    return g;
  };
  EXPECT_THROW(with([](DetectionGeometry& g) { g.distance = 0.0; }).validate(), InvalidInput);
  EXPECT_THROW(with([](DetectionGeometry& g) { g.slit_width = -1e-6; }).validate(), InvalidInput);
  EXPECT_NO_THROW(with([](DetectionGeometry& g) { g.slit_width = 0.0; }).validate());
  EXPECT_THROW(with([](DetectionGeometry& g) { g.scan_step = 0.0; }).validate(), InvalidInput);
  EXPECT_THROW(with([](DetectionGeometry& g) { g.scan_step = g.scan_range * 1.0001; }).validate(), InvalidInput);
  EXPECT_NO_THROW(with([](DetectionGeometry& g) { g.scan_step = g.scan_range; }).validate());
  EXPECT_THROW(with([](DetectionGeometry& g) { g.filter_fwhm = 0.0; }).validate(), InvalidInput);
  EXPECT_THROW(with([](DetectionGeometry& g) { g.filter_center = 0.0; }).validate(), InvalidInput);
}

TEST(FrequencyPair, DeltaOmegaAndValidation) {
  const double wp = angularFrequency(413e-9);
  const auto d = FrequencyPair::degenerate(wp);
  EXPECT_EQ(d.deltaOmega(), 0.0);
  EXPECT_EQ(d.signal(), d.idler());
  const FrequencyPair f(wp / 2 + 1e13, wp / 2 - 3e13, wp);
  EXPECT_NEAR(f.deltaOmega(), 2e13, 1.0);
  EXPECT_THROW(FrequencyPair(0.0, 1.0, 2.0), InvalidInput);
  EXPECT_THROW(FrequencyPair(1.0, -1.0, 2.0), InvalidInput);
  EXPECT_THROW(FrequencyPair(1.0, 1.0, 0.0), InvalidInput);
}
