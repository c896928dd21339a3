#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nfrad/planar.hpp"

using namespace nfrad;

namespace {

constexpr double kW = 1.7e14;
const double kK0 = kW / kSpeedOfLight;

Response medium(cplx eps, cplx mu = 1.0) { return {eps, mu, false}; }
const Response kVac = medium(1.0);

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

struct RandomStacks {
  std::mt19937_64 rng{99};
  std::uniform_real_distribution<double> u{0.0, 1.0};

  double logu(double lo, double hi) { return lo * std::pow(hi / lo, u(rng)); }

  Material material() {
    switch (static_cast<int>(u(rng) * 3)) {
      case 0: return Material::constant({logu(0.2, 12) * (u(rng) < 0.25 ? -1 : 1), logu(1e-4, 4)}, {logu(0.5, 3), logu(1e-4, 1)});
      case 1: return Material::drude(logu(1, 5), logu(1e14, 1e16), logu(1e11, 1e14));
      default: return Material::lorentz(logu(1, 8), {{logu(0.1, 5), logu(5e13, 3e14), logu(1e11, 1e13)}});
    }
  }

  LayerStack stack() {
    std::vector<Film> films;
    const int n = static_cast<int>(u(rng) * 4);
    for (int i = 0; i < n; ++i) films.push_back({material(), logu(1e-9, 1e-5)});
    return LayerStack(material(), films);
  }
};

}  // namespace

TEST(Kz, NormalIncidenceVacuum) {
  const cplx k = kz(1.0, 1.0, kW, 0.0);
  EXPECT_EQ(k.imag(), 0.0);
  EXPECT_DOUBLE_EQ(k.real(), kK0);
}

TEST(Kz, EvanescentVacuumIsPositiveImaginary) {
  const cplx k = kz(1.0, 1.0, kW, 2.0 * kK0);
  EXPECT_EQ(k.real(), 0.0);
  EXPECT_NEAR(k.imag(), std::sqrt(3.0) * kK0, 1e-14 * kK0);
}

TEST(Kz, LossyDielectricAgainstDirectSquareRoot) {
  const cplx eps(4.0, 0.1);
  const double krho = 1.5 * kK0;
  const cplx k = kz(eps, 1.0, kW, krho);
  const std::complex<long double> arg = std::complex<long double>(4.0L, 0.1L) * (long double)(kK0 * kK0) -
                                        (long double)(krho * krho);
  const std::complex<long double> ref = std::sqrt(arg);
  EXPECT_GT(k.imag(), 0.0);
  EXPECT_LT(std::abs(std::complex<long double>(k) - ref) / std::abs(ref), 1e-14L);
}

TEST(Kz, BranchOverRandomMedia) {
  RandomStacks g;
  for (int i = 0; i < 10000; ++i) {
    const cplx eps(g.logu(0.1, 20) * (g.u(g.rng) < 0.3 ? -1 : 1), g.logu(1e-8, 5) * (g.u(g.rng) < 0.1 ? 0 : 1));
    const cplx mu(g.logu(0.3, 3), g.logu(1e-8, 1) * (g.u(g.rng) < 0.5 ? 0 : 1));
    const double krho = g.logu(1e-3, 100) * kK0;
    const cplx k = kz(eps, mu, kW, krho);
    ASSERT_GE(k.imag(), 0.0);
    if (k.imag() == 0.0) {
      ASSERT_GE(k.real(), 0.0);
    }
    const cplx vac = kz(1.0, 1.0, kW, krho);
    if (krho > kK0) {
      ASSERT_EQ(vac.real(), 0.0);
      ASSERT_GT(vac.imag(), 0.0);
    }
  }
}

TEST(Fresnel, IdenticalMediaGiveZero) {
  const Response m = medium({4.0, 0.3}, {1.2, 0.1});
  for (Polarization pol : kPolarizations)
    for (double krho : {0.0, 0.5 * kK0, 3.0 * kK0}) EXPECT_EQ(interface_reflection(m, m, pol, kW, krho), cplx(0.0, 0.0));
}

TEST(Fresnel, NormalIncidenceOnDielectric) {
  // k_z in eps = 4 is 2 k0.
  const cplx rs = interface_reflection(kVac, medium(4.0), Polarization::s, kW, 0.0);
  const cplx rp = interface_reflection(kVac, medium(4.0), Polarization::p, kW, 0.0);
  EXPECT_NEAR(rs.real(), (kK0 - 2 * kK0) / (kK0 + 2 * kK0), 1e-15);
  EXPECT_NEAR(rp.real(), (4 * kK0 - 2 * kK0) / (4 * kK0 + 2 * kK0), 1e-15);
  EXPECT_NEAR(std::abs(rs), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(std::abs(rp), 1.0 / 3.0, 1e-15);
  EXPECT_LT(rs.real() * rp.real(), 0.0);
}

TEST(Fresnel, DualMediumSwapsPolarizations) {
  for (double krho : {0.0, 0.3 * kK0, 0.999 * kK0, 1.5 * kK0, 40 * kK0}) {
    const Response a = medium({4.0, 0.2}, {1.5, 0.05});
    const Response b = medium({1.5, 0.05}, {4.0, 0.2});
    const Response from = medium({2.0, 0.01}, {1.1, 0.0});
    const Response from_dual = medium({1.1, 0.0}, {2.0, 0.01});
    EXPECT_EQ(interface_reflection(from, a, Polarization::s, kW, krho), interface_reflection(from_dual, b, Polarization::p, kW, krho));
    EXPECT_EQ(interface_reflection(from, a, Polarization::p, kW, krho), interface_reflection(from_dual, b, Polarization::s, kW, krho));
  }
  EXPECT_EQ(interface_reflection(kVac, medium(1.0, 4.0), Polarization::s, kW, 0.0),
            interface_reflection(kVac, medium(4.0, 1.0), Polarization::p, kW, 0.0));
  EXPECT_EQ(interface_reflection(kVac, medium(1.0, 4.0), Polarization::p, kW, 0.0),
            interface_reflection(kVac, medium(4.0, 1.0), Polarization::s, kW, 0.0));
}

TEST(Fresnel, VanishingDenominatorIsFlagged) {
  // eps = mu = -1 is index matched to vacuum with inverted weights.
  EXPECT_THROW(interface_reflection(kVac, medium(-1.0, -1.0), Polarization::s, kW, 0.4 * kK0), DegenerateInterfaceError);
}

TEST(Stack, BareInterface) {
  const Material m = Material::constant({4.0, 0.5});
  for (Polarization pol : kPolarizations)
    EXPECT_EQ(stack_reflection(LayerStack(m), pol, kW, 0.7 * kK0),
              interface_reflection(kVac, eval_response(m, kW), pol, kW, 0.7 * kK0));
}

TEST(Stack, BlackTerminalIsExactlyZero) {
  for (Polarization pol : kPolarizations)
    for (double krho : {0.0, 0.5 * kK0, 5.0 * kK0}) EXPECT_EQ(stack_reflection(LayerStack(Material::black()), pol, kW, krho), cplx(0.0, 0.0));
}

TEST(Stack, ContrastFreeFilm) {
  const Material m = Material::drude(1.0, 1.37e16, 4.05e13);
  for (Polarization pol : kPolarizations) {
    for (double krho : {0.0, 0.6 * kK0, 2.0 * kK0, 1e3 * kK0}) {
      const cplx bare = stack_reflection(LayerStack(m), pol, kW, krho);
      const cplx filmed = stack_reflection(LayerStack(m, {{m, 37e-9}}), pol, kW, krho);
      EXPECT_LT(rel(filmed, bare), 1e-14) << to_string(pol) << " " << krho;
    }
  }
}

TEST(Stack, OpaqueFilmLimit) {
  const Material film = Material::constant({3.0, 1.0});
  const Material substrate = Material::constant({12.0, 0.1});
  for (Polarization pol : kPolarizations) {
    for (double krho : {0.0, 0.8 * kK0, 3.0 * kK0}) {
      const cplx thick = stack_reflection(LayerStack(substrate, {{film, 1e-2}}), pol, kW, krho);
      const cplx interface = interface_reflection(kVac, eval_response(film, kW), pol, kW, krho);
      EXPECT_LT(rel(thick, interface), 1e-14);
    }
  }
}

TEST(Stack, QuarterWaveFilmMatchesAiry) {
  // n = 2 film on vacuum-like terminal with k_z d = pi/2.
  const double d = std::numbers::pi / (4.0 * kK0);
  const LayerStack stack(Material::vacuum(), {{Material::constant(4.0), d}});
  const cplx rs = stack_reflection(stack, Polarization::s, kW, 0.0);
  const cplx rp = stack_reflection(stack, Polarization::p, kW, 0.0);
  EXPECT_NEAR(rs.real(), -0.6, 1e-14);
  EXPECT_NEAR(std::abs(rs), 0.6, 1e-14);
  EXPECT_NEAR(std::abs(rp), 0.6, 1e-14);
  EXPECT_NEAR(rs.imag(), 0.0, 1e-14);
}

TEST(Stack, SingleFilmMatchesAiryAtObliqueIncidence) {
  // Film (n1) on substrate (n2), s polarization, arbitrary thickness.
  const cplx e1(5.0, 0.3), e2(2.0, 0.0);
  const double d = 0.83e-6, krho = 0.45 * kK0;
  const cplx k0z = std::sqrt(cplx(kK0 * kK0 - krho * krho));
  const cplx k1z = std::sqrt(e1 * kK0 * kK0 - krho * krho);
  const cplx k2z = std::sqrt(e2 * kK0 * kK0 - krho * krho);
  const cplx r01 = (k0z - k1z) / (k0z + k1z);
  const cplx r12 = (k1z - k2z) / (k1z + k2z);
  const cplx ph = std::exp(cplx(0, 2) * k1z * d);
  const cplx airy = (r01 + r12 * ph) / (1.0 + r01 * r12 * ph);
  const LayerStack stack(Material::constant(e2), {{Material::constant(e1), d}});
  EXPECT_LT(rel(stack_reflection(stack, Polarization::s, kW, krho), airy), 1e-13);
}

TEST(Stack, ZeroThicknessFilmIsTransparent) {
  RandomStacks g;
  for (int i = 0; i < 500; ++i) {
    const LayerStack base = g.stack();
    auto films = base.films();
    const std::size_t at = static_cast<std::size_t>(g.u(g.rng) * (films.size() + 1));
    films.insert(films.begin() + static_cast<std::ptrdiff_t>(at), Film{g.material(), 0.0});
    const LayerStack padded(base.terminal(), films);
    const double w = g.logu(1e13, 1e15);
    const double krho = g.logu(1e-3, 30) * w / kSpeedOfLight;
    for (Polarization pol : kPolarizations) {
      const cplx a = stack_reflection(base, pol, w, krho);
      const cplx b = stack_reflection(padded, pol, w, krho);
      EXPECT_LE(std::abs(a - b), 1e-14 * std::abs(a) + 1e-300) << i;
    }
  }
}

TEST(Stack, PassiveBoundForPropagatingWaves) {
  RandomStacks g;
  int violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const LayerStack s = g.stack();
    const double w = g.logu(1e13, 1e15);
    const double krho = g.u(g.rng) * w / kSpeedOfLight;
    for (Polarization pol : kPolarizations)
      if (std::abs(stack_reflection(s, pol, w, krho)) > 1.0 + 1e-13) ++violations;
  }
  EXPECT_EQ(violations, 0);
}

TEST(Stack, DualityIsBitwise) {
  RandomStacks g;
  for (int i = 0; i < 2000; ++i) {
    const LayerStack s = g.stack();
    const LayerStack d = s.dual();
    const double w = g.logu(1e13, 1e15);
    const double krho = g.logu(1e-3, 50) * w / kSpeedOfLight;
    ASSERT_EQ(stack_reflection(s, Polarization::s, w, krho), stack_reflection(d, Polarization::p, w, krho));
    ASSERT_EQ(stack_reflection(s, Polarization::p, w, krho), stack_reflection(d, Polarization::s, w, krho));
  }
}

TEST(Stack, RejectsInvalidFilms) {
  EXPECT_THROW(LayerStack(Material::vacuum(), {{Material::constant(2.0), -1e-9}}), std::invalid_argument);
  EXPECT_THROW(LayerStack(Material::vacuum(), {{Material::constant(2.0), NAN}}), std::invalid_argument);
  EXPECT_THROW(LayerStack(Material::vacuum(), {{Material::black(), 1e-9}}), std::invalid_argument);
}

TEST(Stack, AbsorbedMatchesOneMinusNormSquared) {
  RandomStacks g;
  for (int i = 0; i < 5000; ++i) {
    const LayerStack s = g.stack();
    const double w = g.logu(1e13, 1e15);
    const double k0 = w / kSpeedOfLight;
    const double krho = g.u(g.rng) < 0.5 ? g.u(g.rng) * k0 : k0 * (1.0 + g.logu(1e-6, 1e3));
    const StackAtFrequency at(s, w);
    for (Polarization pol : kPolarizations) {
      const double krho_sq = krho * krho;
      const Reflection r = at.reflect(pol, krho_sq, kz(1.0, 1.0, w, krho));
      const double direct = 1.0 - std::norm(r.r);
      ASSERT_LE(std::abs(r.absorbed - direct), 1e-12 * std::max(1.0, std::norm(r.r))) << i;
    }
  }
}

TEST(Stack, LosslessMirrorAbsorbsExactlyNothing) {
  const StackAtFrequency at(LayerStack(Material::constant({-1e12, 0.0})), kW);
  for (Polarization pol : kPolarizations) {
    for (double f : {0.0, 1e-6, 0.3, 0.999999}) {
      const double krho = f * kK0;
      const Reflection r = at.reflect(pol, krho * krho, kz(1.0, 1.0, kW, krho));
      EXPECT_EQ(r.absorbed, 0.0);
      EXPECT_NEAR(std::abs(r.r), 1.0, 1e-15);
    }
  }
}
