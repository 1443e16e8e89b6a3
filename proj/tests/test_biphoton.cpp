#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qpmspdc/biphoton.hpp"
#include "qpmspdc/dispersion.hpp"
#include "qpmspdc/field.hpp"
#include "qpmspdc/phasematch.hpp"

using namespace qpmspdc;
using namespace qpmspdc::biphoton;

namespace {

constexpr double kLambda = 413e-9;
constexpr double kW0 = 0.5e-3;

const dispersion::KtpKatoTakaoka& ktp() {
  static const dispersion::KtpKatoTakaoka m;
  return m;
}

FrequencyPair degenerate() { return FrequencyPair::degenerate(angularFrequency(kLambda)); }

PumpSpec pulsedPump() { return {kLambda, kW0, 0.0, 200e-15}; }

CrystalSpec designed(double length = 9.6e-3) {
  CrystalSpec c;
  c.length = length;
  c.poling_period = 11.4617e-6;
  c.temperature = 40.0;
  c.poling_period = phasematch::designPolingPeriod(degenerate(), c, ktp());
  return c;
}

DetectionGeometry geometry(double z = 0.5, double slit = 0.1e-3, double range = 3e-3, double step = 25e-6) {
  return {z, slit, range, step, 826e-9, 2e-9, 0.0};
}

field::AngularSpectrum gaussianSpectrum(const field::Grid& g, double w0 = kW0) {
  return field::transformToAngularSpectrum(field::gaussianSource(w0, kLambda, g));
}

JointAmplitude makePsi(const field::AngularSpectrum& s, const CrystalSpec& c, JointAmplitudeOptions o = {}) {
  return {s, c, degenerate(), ktp(), pulsedPump(), o};
}

phasematch::MakerProfile maker(const CrystalSpec& c) { return {degenerate(), c, ktp()}; }

}  // namespace

TEST(SpectralEnvelope, Definition) {
  const PumpSpec p = pulsedPump();
  const double gamma = *p.gamma();
  const double w0 = angularFrequency(kLambda);
  EXPECT_EQ(spectralEnvelope(degenerate(), p), 1.0);
  const double dw = std::sqrt(2 * gamma);
  EXPECT_NEAR(spectralEnvelope(FrequencyPair(w0 / 2, w0 / 2 - dw, w0), p), std::exp(-1.0), 1e-12);
  EXPECT_NEAR(spectralEnvelope(FrequencyPair(w0 / 2, w0 / 2 - 1e13, w0), p), 0.1353352832366127, 1e-9);
  PumpSpec cw = p;
  cw.pulse_duration.reset();
  EXPECT_EQ(spectralEnvelope(degenerate(), cw), 1.0);
  EXPECT_EQ(spectralEnvelope(FrequencyPair(w0 / 2, w0 / 2 - 1.0, w0), cw), 0.0);
}

TEST(FilterTransmission, GaussianInWavelength) {
  const auto g = geometry();
  EXPECT_NEAR(filterTransmission(angularFrequency(826e-9), g), 1.0, 1e-12);
  EXPECT_NEAR(filterTransmission(angularFrequency(827e-9), g), 0.5, 1e-9);
  EXPECT_NEAR(filterTransmission(angularFrequency(825e-9), g), 0.5, 1e-9);
  EXPECT_NEAR(filterTransmission(angularFrequency(830e-9), g) / 1.52587890625e-5, 1.0, 1e-7);
  auto bad = g;
  bad.filter_fwhm = 0.0;
  EXPECT_THROW(filterTransmission(1e15, bad), InvalidInput);
}

TEST(FilterTransmission, ProductPeaksAtDegeneracy) {
  const auto g = geometry();
  const PumpSpec p = pulsedPump();
  const double w0 = angularFrequency(kLambda);
  auto product = [&](double ds, double di) {
    const FrequencyPair f(w0 / 2 + ds, w0 / 2 + di, w0);
    return spectralEnvelope(f, p) * filterTransmission(f.signal(), g) * filterTransmission(f.idler(), g);
  };
  const double peak = product(0.0, 0.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2e13, 2e13);
  for (int i = 0; i < 500; ++i) EXPECT_LE(product(u(rng), u(rng)), peak);
}

TEST(JointAmplitude, NodesMatchDirectEvaluation) {
  const field::Grid g{2048, 20e-3};
  const auto spec = gaussianSpectrum(g);
  const auto c = designed();
  const JointAmplitudeOptions raw{false, true};
  const auto psi = makePsi(spec, c, raw);
  const phasematch::ThreeWave tw(degenerate(), c, ktp());
  const double dq = spec.qSpacing();
  for (int a : {-40, -3, 0, 7, 25}) {
    for (int b : {-31, 0, 2, 19}) {
      const double qs = a * dq, qi = b * dq;
      const double A = tw.collinearMismatch() + tw.transverseTerms(qs, qi);
      const std::complex<double> expected =
          spec.values[static_cast<std::size_t>(1024 + a + b)] * sinc(c.length * A / 2) * std::polar(1.0, c.length * A / 2);
      EXPECT_NEAR(std::abs(psi(qs, qi) - expected), 0.0, 1e-15 * std::abs(expected) + 1e-300) << a << "," << b;
    }
  }
}

TEST(JointAmplitude, GridNormalisedToUnitMax) {
  const field::Grid g{2048, 20e-3};
  const auto psi = makePsi(gaussianSpectrum(g), designed());
  const auto ax = QAxis::centered(64, 2e4);
  const auto grid = psi.sample(ax, ax);
  double m = 0.0;
  for (const auto& v : grid.values) m = std::max(m, std::abs(v));
  EXPECT_NEAR(m, 1.0, 1e-15);
  // stored value equals the evaluator value times the grid normalization
  const auto raw = makePsi(gaussianSpectrum(g), designed(), {false, true});
  EXPECT_NEAR(std::abs(grid.at(10, 50) - raw(ax.at(10), ax.at(50)) * grid.normalization), 0.0, 1e-13);
}

TEST(JointAmplitude, GridIncompatibilityNamesRequiredExtent) {
  const field::Grid g{256, 20e-3};  // pump band ~ +-4e4 rad/m
  const auto psi = makePsi(gaussianSpectrum(g), designed());
  const auto ax = QAxis::centered(32, 3e4);
  try {
    (void)psi.sample(ax, ax);
    FAIL();
  } catch (const GuardError& e) {
    EXPECT_NE(std::string(e.what()).find("pump q-extent >= 60000"), std::string::npos) << e.what();
  }
}

TEST(JointAmplitude, PlaneWavePumpConservesMomentum) {
  const field::Grid g{1024, 20e-3};
  field::AngularSpectrum delta{g, kLambda, std::vector<std::complex<double>>(g.samples)};
  delta.values[g.samples / 2] = 1.0;
  const auto psi = makePsi(delta, designed());
  const double dq = delta.qSpacing();
  const QAxis ax{-100 * dq, dq, 201};
  const auto grid = psi.sample(ax, ax);
  for (std::size_t a = 0; a < ax.count; ++a)
    for (std::size_t b = 0; b < ax.count; ++b) {
      const bool on_line = std::abs(ax.at(a) + ax.at(b)) < dq;
      if (!on_line) {
        EXPECT_EQ(std::abs(grid.at(a, b)), 0.0);
      }
    }
  EXPECT_GT(std::abs(grid.at(100, 100)), 0.99);
}

TEST(JointAmplitude, ThinCrystalFactorizes) {
  const field::Grid g{2048, 20e-3};
  const auto spec = gaussianSpectrum(g);
  const auto psi = makePsi(spec, designed(1e-6), {false, true});
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e5, 1e5);
  const double ref = std::abs(psi(0.0, 0.0)) / std::abs(spec.at(0.0));
  for (int i = 0; i < 2000; ++i) {
    const double qs = u(rng), qi = u(rng);
    const double e = std::abs(spec.at(qs + qi));
    if (e < 1e-6 * spec.maxAbs()) continue;
    EXPECT_NEAR(std::abs(psi(qs, qi)) / e / ref, 1.0, 1e-6);
  }
}

TEST(JointAmplitude, PumpSwapFactorization) {
  const field::Grid g{2048, 20e-3};
  const auto e1 = gaussianSpectrum(g, 0.5e-3);
  auto e2f = field::applyElement(field::gaussianSource(1.2e-3, kLambda, g), field::MultiSlit{100e-6, 200e-6, 2});
  const auto e2 = field::transformToAngularSpectrum(e2f);
  const auto c = designed();
  const auto p1 = makePsi(e1, c, {false, true});
  const auto p2 = makePsi(e2, c, {false, true});
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2e5, 2e5);
  for (int i = 0; i < 2000; ++i) {
    const double qs = u(rng), qi = u(rng);
    const auto lhs = p1(qs, qi) * e2.at(qs + qi);
    const auto rhs = p2(qs, qi) * e1.at(qs + qi);
    EXPECT_LE(std::abs(lhs - rhs), 1e-10 * std::max(std::abs(lhs), 1e-300)) << qs << "," << qi;
  }
}

TEST(JointAmplitude, SymmetricForTypeILikeCrystal) {
  CrystalSpec c;
  c.length = 9.6e-3;
  c.poling_period = 1e-5;
  c.temperature = 40.0;
  c.type = InteractionType::TypeI;
  c.signal_axis = c.idler_axis = Axis::Z;
  c.pump_axis = Axis::Z;
  c.poling_period = phasematch::designPolingPeriod(degenerate(), c, ktp());
  const field::Grid g{2048, 20e-3};
  const auto psi = makePsi(gaussianSpectrum(g), c);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3e5, 3e5);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng), b = u(rng);
    EXPECT_EQ(psi(a, b), psi(b, a));
  }
}

TEST(JointAmplitude, CwPumpOffDegeneracyIsZero) {
  const field::Grid g{1024, 20e-3};
  PumpSpec cw = pulsedPump();
  cw.pulse_duration.reset();
  const double w0 = angularFrequency(kLambda);
  const JointAmplitude psi(gaussianSpectrum(g), designed(), FrequencyPair(w0 / 2 + 1e9, w0 / 2, w0), ktp(), cw);
  EXPECT_EQ(std::abs(psi(0.0, 0.0)), 0.0);
}

TEST(JointAmplitude, PhaseFactorDoesNotChangeMagnitude) {
  const field::Grid g{2048, 20e-3};
  const auto with = makePsi(gaussianSpectrum(g), designed());
  const auto without = makePsi(gaussianSpectrum(g), designed(), {true, false});
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-3e5, 3e5);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng), b = u(rng);
    EXPECT_NEAR(std::abs(with(a, b)), std::abs(without(a, b)), 1e-15);
    EXPECT_EQ(with.intensity(a, b), without.intensity(a, b));
  }
}

TEST(Scan, PositionsAndOffsets) {
  const auto p = scanPositions(geometry(0.5, 0.1e-3, 4e-3, 25e-6));
  ASSERT_EQ(p.size(), 161u);
  EXPECT_EQ(p.front(), -2e-3);
  EXPECT_NEAR(p.back(), 2e-3, 1e-18);
  EXPECT_NEAR(p[80], 0.0, 1e-18);
  for (std::size_t j = 1; j < p.size(); ++j) EXPECT_GT(p[j], p[j - 1]);
  const auto o = slitOffsets(1e-4, 10);
  EXPECT_NEAR(o.front(), -0.45e-4, 1e-18);
  EXPECT_NEAR(o.back(), 0.45e-4, 1e-18);
  EXPECT_EQ(slitOffsets(0.0, 10), std::vector<double>{0.0});
  EXPECT_THROW(slitOffsets(1e-4, 0), InvalidInput);
}

TEST(Scan, AnalyticGaussianMatchesDetectionPlaneWidth) {
  const field::Grid g{8192, 40.96e-3};
  const auto c = designed();
  const double n = dispersion::refractiveIndex(ktp(), kLambda, Axis::Y, 40.0);
  const auto w = field::detectionPlaneProfile({kLambda, kW0, 0.0}, {}, {c.length, n}, 0.5, g);
  const double width = field::gaussianWidth(kW0, kLambda, c.length / n + 0.5 - c.length / 2);
  const auto r = coincidenceScanAnalytic(w, maker(c), geometry(0.5, 0.0), {});
  for (std::size_t j = 0; j < r.positions.size(); ++j) {
    const double p = r.positions[j];
    EXPECT_NEAR(r.rates[j], std::exp(-2 * p * p / (width * width)), 1e-4) << p;
  }
  EXPECT_EQ(r.method, "analytic");
  EXPECT_EQ(*std::max_element(r.rates.begin(), r.rates.end()), 1.0);
  for (double v : r.rates) EXPECT_GE(v, 0.0);
}

TEST(Scan, AnalyticSlitLimit) {
  const field::Grid g{8192, 40.96e-3};
  const auto c = designed();
  const auto w = field::detectionPlaneProfile({kLambda, kW0, 0.0}, {{-0.01, field::MultiSlit{100e-6, 200e-6, 2}}},
                                              {c.length, 1.835}, 0.5, g);
  const auto cached = w.intensity();
  const auto r0 = coincidenceScanAnalytic(w, maker(c), geometry(0.5, 0.0), {});
  double peak = 0.0;
  for (double p : r0.positions) peak = std::max(peak, w.intensityAt(p, cached));
  for (std::size_t j = 0; j < r0.positions.size(); ++j) EXPECT_EQ(r0.rates[j], w.intensityAt(r0.positions[j], cached) / peak);
  const auto r1 = coincidenceScanAnalytic(w, maker(c), geometry(0.5, 1e-9), {});
  for (std::size_t j = 0; j < r0.rates.size(); ++j) EXPECT_NEAR(r1.rates[j], r0.rates[j], 1e-6);
}

TEST(Scan, PlaneWavePump) {
  const field::Grid g{1024, 20e-3};
  field::AngularSpectrum delta{g, kLambda, std::vector<std::complex<double>>(g.samples)};
  delta.values[g.samples / 2] = 1.0;
  const auto c = designed();
  const auto psi = makePsi(delta, c);
  ScanOptions far;
  far.mapping = OracleMapping::FarField;
  const auto rf = coincidenceScanOracle(psi, maker(c), geometry(0.5, 0.0), far);
  for (std::size_t j = 0; j < rf.positions.size(); ++j) {
    if (std::abs(rf.positions[j]) < 1e-12)
      EXPECT_EQ(rf.rates[j], 1.0);
    else
      EXPECT_EQ(rf.rates[j], 0.0) << rf.positions[j];
  }
  // at a finite distance the pairs image the (uniform) pump: flat
  const auto rs = coincidenceScanOracle(psi, maker(c), geometry(0.5, 0.0), {});
  for (double v : rs.rates) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(Scan, OracleMatchesAnalyticForGaussianPump) {
  const field::Grid g{4096, 40e-3};
  const auto c = designed();
  const double n = dispersion::refractiveIndex(ktp(), kLambda, Axis::Y, 40.0);
  const std::vector<field::PlacedElement> path{{-0.03, field::ThinLens{0.5}}};
  const auto w = field::detectionPlaneProfile({kLambda, kW0, 0.0}, path, {c.length, n}, 0.5, g);
  const auto entrance = field::fieldAtCrystalEntrance({kLambda, kW0, 0.0}, path, g);
  const auto psi = makePsi(field::transformToAngularSpectrum(entrance), c);
  const auto geo = geometry(0.5, 0.1e-3, 1e-3, 20e-6);
  const auto a = coincidenceScanAnalytic(w, maker(c), geo, {});
  const auto o = coincidenceScanOracle(psi, maker(c), geo, {});
  EXPECT_GE(normalizedCrossCorrelation(a.rates, o.rates), 0.99);
  EXPECT_EQ(o.method, "oracle/sum-fresnel");
}

TEST(Scan, SignalOnlyThinCrystalIsConditionalSpectrum) {
  const field::Grid g{4096, 40e-3};
  const auto spec = gaussianSpectrum(g, 2e-3);
  const auto c = designed(1e-6);
  const auto psi = makePsi(spec, c);
  ScanOptions o;
  o.mode = ScanMode::SignalOnly;
  o.mapping = OracleMapping::FarField;
  const auto geo = geometry(0.5, 0.0, 0.4e-3, 5e-6);
  const auto r = coincidenceScanOracle(psi, maker(c), geo, o);
  const double k = degenerate().signal() / kSpeedOfLight;
  double peak = 0.0;
  std::vector<double> expected;
  for (double p : r.positions) {
    expected.push_back(std::norm(spec.at(k * p / geo.distance)));
    peak = std::max(peak, expected.back());
  }
  for (std::size_t j = 0; j < r.positions.size(); ++j) EXPECT_NEAR(r.rates[j], expected[j] / peak, 1e-6);
}

TEST(Scan, PhaseFactorIrrelevanceIsBitwise) {
  const field::Grid g{4096, 40e-3};
  const auto c = designed();
  const auto spec = field::transformToAngularSpectrum(
      field::applyElement(field::gaussianSource(kW0, kLambda, g), field::MultiSlit{100e-6, 200e-6, 2}));
  const auto with = makePsi(spec, c);
  const auto without = makePsi(spec, c, {true, false});
  const auto geo = geometry(0.5, 0.1e-3, 2e-3, 25e-6);
  ScanOptions far;
  far.mapping = OracleMapping::FarField;
  for (ScanMode m : {ScanMode::BothTogether, ScanMode::SignalOnly, ScanMode::IdlerOnly}) {
    far.mode = m;
    EXPECT_EQ(coincidenceScanOracle(with, maker(c), geo, far).rates,
              coincidenceScanOracle(without, maker(c), geo, far).rates);
  }
  // The sum-coordinate transform sees the in-crystal phase; the curves stay
  // close but are not identical.
  const auto a = coincidenceScanOracle(with, maker(c), geo, {});
  const auto b = coincidenceScanOracle(without, maker(c), geo, {});
  EXPECT_GT(normalizedCrossCorrelation(a.rates, b.rates), 0.999);
}

TEST(Scan, ThreadCountDoesNotChangeResults) {
  const field::Grid g{2048, 20e-3};
  const auto c = designed();
  const auto psi = makePsi(gaussianSpectrum(g), c);
  const auto geo = geometry(0.5, 0.1e-3, 1e-3, 50e-6);
  ScanOptions o1, o4;
  o4.threads = 4;
  EXPECT_EQ(coincidenceScanOracle(psi, maker(c), geo, o1).rates, coincidenceScanOracle(psi, maker(c), geo, o4).rates);
  o1.mode = o4.mode = ScanMode::IdlerOnly;
  EXPECT_EQ(coincidenceScanOracle(psi, maker(c), geo, o1).rates, coincidenceScanOracle(psi, maker(c), geo, o4).rates);
  const auto ax = QAxis::centered(40, 1e4);
  EXPECT_EQ(psi.sample(ax, ax, 1).values, psi.sample(ax, ax, 3).values);
}

TEST(Scan, RegimeWarning) {
  const auto c = designed();
  const auto near = checkRegime(maker(c), geometry(1.0, 0.0, 3e-3, 25e-6), 0.05);
  EXPECT_TRUE(near.warnings.empty());
  EXPECT_TRUE(near.notes.empty());
  EXPECT_LT(near.drop, 0.01);
  const auto mid = checkRegime(maker(c), geometry(0.5, 0.0, 4e-3, 25e-6), 0.05);
  EXPECT_TRUE(mid.warnings.empty());
  EXPECT_EQ(mid.notes.size(), 1u);
  const auto bad = checkRegime(maker(c), geometry(0.025, 0.0, 4e-3, 25e-6), 0.05);
  ASSERT_EQ(bad.warnings.size(), 1u);
  EXPECT_NE(bad.warnings[0].find("near-collinear"), std::string::npos);
}

TEST(Curves, CrossCorrelation) {
  const std::vector<double> a{0, 1, 3, 2, 5};
  std::vector<double> b, neg;
  for (double v : a) {
    b.push_back(3 * v + 7);
    neg.push_back(-v);
  }
  EXPECT_NEAR(normalizedCrossCorrelation(a, a), 1.0, 1e-15);
  EXPECT_NEAR(normalizedCrossCorrelation(a, b), 1.0, 1e-15);
  EXPECT_NEAR(normalizedCrossCorrelation(a, neg), -1.0, 1e-15);
  EXPECT_THROW(normalizedCrossCorrelation(a, {1, 2}), InvalidInput);
}

TEST(Curves, FringePeriod) {
  std::vector<double> x, y;
  for (int j = -400; j <= 400; ++j) {
    x.push_back(j * 5e-6);
    const double u = kPi * x.back() / 1.05e-3;
    y.push_back(std::cos(u) * std::cos(u));
  }
  EXPECT_NEAR(fringePeriod(x, y), 1.05e-3, 1e-6);
  EXPECT_NEAR(fringePeriod(x, y, FringeFeature::Maxima), 1.05e-3, 1e-6);
  EXPECT_THROW(fringePeriod({0, 1, 2}, {0, 1, 2}), GuardError);
}
