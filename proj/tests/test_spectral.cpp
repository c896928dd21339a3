#include <gtest/gtest.h>

#include <cmath>

#include "nfrad/spectral.hpp"

using namespace nfrad;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

GapSystem black_pair(double t1, double t2) {
  return {LayerStack(Material::black()), LayerStack(Material::black()), 1e-6, t1, t2};
}

Material sic() { return Material::lorentz(6.7, {{3.2977, 1.494e14, 8.966e11}}); }

GapSystem sic_pair(double gap, double t1, double t2) { return {LayerStack(sic()), LayerStack(sic()), gap, t1, t2}; }

GapSystem mirrors(double t1, double t2) {
  const LayerStack m(Material::constant({-1e12, 0.0}));
  return {m, m, 1e-7, t1, t2};
}

}  // namespace

TEST(AutoWindow, ScalesWithTemperature) {
  const auto [lo, hi] = auto_window(300.0);
  EXPECT_DOUBLE_EQ(lo, 1e-7 * kBoltzmann * 300.0 / kHbar);
  EXPECT_DOUBLE_EQ(hi, 60.0 * kBoltzmann * 300.0 / kHbar);
}

TEST(HeatFlux, EqualTemperaturesGiveExactZero) {
  const auto r = heat_flux(sic_pair(1e-8, 300, 300));
  EXPECT_EQ(r.value, 0.0);
  EXPECT_TRUE(r.ok());
}

TEST(HeatFlux, BlackBodiesRecoverStefanBoltzmann) {
  const auto r = heat_flux(black_pair(400, 300));
  const double expected = kStefanBoltzmann * (std::pow(400.0, 4) - std::pow(300.0, 4));
  EXPECT_NEAR(expected, 992.32, 5e-3);
  EXPECT_LT(rel(r.value, expected), 1e-6);
  EXPECT_TRUE(r.ok());
  EXPECT_LE(r.error, 1e-8 * std::abs(r.value));
}

TEST(HeatFlux, AntisymmetricInTemperatures) {
  const GapSystem a = sic_pair(5e-8, 350, 280);
  GapSystem b = a;
  std::swap(b.t1, b.t2);
  const auto qa = heat_flux(a);
  const auto qb = heat_flux(b);
  EXPECT_EQ(qa.value, -qb.value);
  const auto qc = heat_flux(a.swapped());
  EXPECT_LE(std::abs(qa.value + qc.value), 1e-12 * std::abs(qa.value));
}

TEST(HeatFlux, AsymmetricPairReciprocity) {
  GapSystem s{LayerStack(sic()), LayerStack(Material::drude(1, 1.37e16, 4.05e13)), 30e-9, 320, 290};
  IntegrationSpec spec;
  spec.relative = 1e-7;
  const auto q12 = heat_flux(s, spec);
  GapSystem t = s.swapped();
  std::swap(t.t1, t.t2);
  const auto q = heat_flux(t, spec);
  EXPECT_LE(std::abs(q12.value - q.value), 1e-12 * std::abs(q12.value));
}

TEST(HeatFlux, NearFieldInverseSquareScaling) {
  IntegrationSpec spec;
  spec.relative = 1e-7;
  const double q10 = heat_flux(sic_pair(10e-9, 310, 290), spec).value;
  const double q20 = heat_flux(sic_pair(20e-9, 310, 290), spec).value;
  EXPECT_NEAR(q10 / q20, 4.0, 0.2);
}

TEST(HeatFlux, ThreadCountDoesNotChangeResult) {
  IntegrationSpec one;
  IntegrationSpec four;
  four.threads = 4;
  const auto a = heat_flux(sic_pair(50e-9, 330, 300), one);
  const auto b = heat_flux(sic_pair(50e-9, 330, 300), four);
  EXPECT_LE(std::abs(a.value - b.value), 1e-12 * std::abs(a.value));
  EXPECT_EQ(a.value, b.value);
}

TEST(HeatFlux, WindowIsSufficient) {
  const LayerStack metal(Material::drude(1, 1.37e16, 4.05e13));
  for (const GapSystem& sys : {black_pair(400, 300), sic_pair(20e-9, 400, 300), GapSystem{metal, metal, 50e-9, 300, 290}}) {
    const auto base = heat_flux(sys);
    IntegrationSpec wide;
    wide.window = std::pair{base.omega_lo * 0.5, base.omega_hi * 2.0};
    const auto w = heat_flux(sys, wide);
    EXPECT_LT(rel(w.value, base.value), 1e-7);
  }
}

TEST(HeatFlux, RejectsBothTemperaturesZero) {
  EXPECT_THROW(heat_flux(black_pair(0, 0)), std::invalid_argument);
}

TEST(HeatFlux, ExhaustedBudgetIsReported) {
  IntegrationSpec spec;
  spec.max_subdivisions = 1;
  spec.relative = 1e-13;
  const auto r = heat_flux(sic_pair(10e-9, 400, 300), spec);
  EXPECT_FALSE(r.ok());
  EXPECT_GT(r.value, 0.0);
}

TEST(Conductance, BlackBodies) {
  const auto g = conductance(black_pair(0, 0), 300.0);
  const double expected = 4.0 * kStefanBoltzmann * std::pow(300.0, 3);
  EXPECT_NEAR(expected, 6.124, 1e-3);
  EXPECT_LT(rel(g.value, expected), 1e-6);
}

TEST(Conductance, MatchesFiniteDifferenceOfHeatFlux) {
  const double t = 300.0, d = 0.05;
  for (const GapSystem& sys : {black_pair(0, 0), sic_pair(20e-9, 0, 0)}) {
    GapSystem hot = sys;
    hot.t1 = t + d;
    hot.t2 = t - d;
    const double fd = heat_flux(hot).value / (2 * d);
    EXPECT_LT(rel(conductance(sys, t).value, fd), 1e-4);
  }
}

TEST(Conductance, PositiveForAbsorbers) {
  EXPECT_GT(conductance(sic_pair(1e-6, 0, 0), 300.0).value, 0.0);
}

TEST(Conductance, MirrorsConductNothing) {
  const auto g = conductance(mirrors(0, 0), 300.0);
  EXPECT_LT(std::abs(g.value), 1e-10 * 4.0 * kStefanBoltzmann * std::pow(300.0, 3));
  EXPECT_TRUE(g.ok());
}

TEST(Conductance, RejectsNonPositiveTemperature) {
  EXPECT_THROW(conductance(black_pair(0, 0), 0.0), std::invalid_argument);
}

TEST(Pressure, BlackBodies) {
  const auto p = neq_pressure(black_pair(300, 0), 1, 300.0);
  const double expected = 2.0 / 3.0 * kStefanBoltzmann * std::pow(300.0, 4) / kSpeedOfLight;
  EXPECT_NEAR(expected, 1.0213e-6, 1e-10);
  EXPECT_LT(rel(std::abs(p.value), expected), 1e-6);
  EXPECT_LT(p.value, 0.0);
}

TEST(Pressure, SourceBodyTwoUsesSwappedSystem) {
  GapSystem s{LayerStack(sic()), LayerStack(Material::constant({4.0, 0.2})), 50e-9, 0, 0};
  const auto a = neq_pressure(s, 2, 300.0);
  const auto b = neq_pressure(s.swapped(), 1, 300.0);
  EXPECT_EQ(a.value, b.value);
  EXPECT_NE(a.value, neq_pressure(s, 1, 300.0).value);
}

TEST(Pressure, ZeroSourceTemperature) {
  EXPECT_EQ(neq_pressure(sic_pair(1e-8, 0, 0), 1, 0.0).value, 0.0);
}

TEST(Pressure, MirrorsFeelNoThermalPressure) {
  const auto p = neq_pressure(mirrors(300, 0), 1, 300.0);
  EXPECT_LT(std::abs(p.value), 1e-10 * 2.0 / 3.0 * kStefanBoltzmann * std::pow(300.0, 4) / kSpeedOfLight);
  EXPECT_TRUE(p.ok());
}

TEST(Pressure, WindowIsSufficient) {
  const LayerStack metal(Material::drude(1, 1.37e16, 4.05e13));
  for (const GapSystem& sys : {sic_pair(50e-9, 300, 0), GapSystem{metal, metal, 50e-9, 300, 0}}) {
    const auto base = neq_pressure(sys, 1, 300.0);
    IntegrationSpec wide;
    wide.window = std::pair{base.omega_lo * 0.5, base.omega_hi * 2.0};
    EXPECT_LT(rel(neq_pressure(sys, 1, 300.0, wide).value, base.value), 1e-7);
  }
}

TEST(Pressure, RejectsBadSource) {
  EXPECT_THROW(neq_pressure(black_pair(300, 0), 3, 300.0), std::invalid_argument);
  EXPECT_THROW(neq_pressure(black_pair(300, 0), 1, -1.0), std::invalid_argument);
}
