#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cohscat/asymptotics.hpp"
#include "cohscat/errors.hpp"
#include "fixtures.hpp"

using namespace cohscat;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

}  // namespace

TEST_CASE("first-order term is the forward amplitude") {
  const HostMedium h = fixtures::host();
  const TMatrix tm = fixtures::skewed(fixtures::cavity(0.3));
  const Mixture mix = Mixture::explicitDensity(0.02, 0.3, 1.0);
  const ExpansionResult p = expandOrder2(tm, h, mix, Polarization::P);
  const ExpansionResult s = expandOrder2(tm, h, mix, Polarization::SV);
  CHECK(std::abs(p.order1 - (-4.0 * I * mix.n0 * farField(tm, Channel::LL, 0.0))) < 1e-15);
  CHECK(std::abs(s.order1 - (-4.0 * I * mix.n0 * farField(tm, Channel::TT, 0.0))) < 1e-15);
  CHECK(p.order0 == cplx(h.kL * h.kL));
  CHECK(std::abs(p.xiSquared - (p.order0 + p.order1 + p.order2)) < 1e-15);
  CHECK(p.xi().real() > 0.0);
  CHECK(p.kTb == doctest::Approx(2.0));
  // Without scatterers every expansion collapses onto k.
  const Mixture none = Mixture::explicitDensity(0.0, 0.3, 1.0);
  CHECK(expandOrder3(tm, h, none, Polarization::SV).xi() == cplx(h.kT));
  CHECK(expandLongWavelength(tm, h, 0.0, Polarization::P).xi() == cplx(h.kL));
}

TEST_CASE("scalar reduction of the second-order term") {
  // With only LL non-zero, d2 = -16/k^2 sum D0_{m-n} T_m T_n.
  const HostMedium h = fixtures::host();
  const TMatrix cav = fixtures::cavity(0.3, 5);
  TMatrix tm(5);
  for (int n = -5; n <= 5; ++n) tm.set(Channel::LL, n, cav(Channel::LL, n));
  const double b = 0.9;
  const Mixture mix = Mixture::explicitDensity(1.0, 0.3, b);
  cplx sum = 0.0;
  for (int m = -5; m <= 5; ++m) {
    for (int n = -5; n <= 5; ++n) {
      sum += qbarAtK(m - n, h.kL, b).D0 * tm(Channel::LL, m) * tm(Channel::LL, n);
    }
  }
  const cplx d2 = -16.0 / (h.kL * h.kL) * sum;
  CHECK(std::abs(expandOrder2(tm, h, mix, Polarization::P).order2 - d2) < 1e-13 * std::abs(d2));
}

TEST_CASE("order-3 pieces") {
  const HostMedium h = fixtures::host();
  const TMatrix tm = fixtures::skewed(fixtures::cavity(0.2));
  const Mixture mix = Mixture::explicitDensity(0.05, 0.2, 0.6);
  const Order3Terms t = expandOrder3Correction(tm, h, mix, Polarization::P);
  CHECK(t.d3() == cplx(0.0, 64.0) * t.y3());
  const ExpansionResult r3 = expandOrder3(tm, h, mix, Polarization::P);
  REQUIRE(r3.order3.has_value());
  CHECK(std::abs(*r3.order3 - t.d3() * std::pow(mix.n0, 3)) < 1e-15);
  // Circular scatterers have no forward mode conversion, so the coupling
  // contributions vanish.
  const Order3Terms c = expandOrder3Correction(fixtures::cavity(0.2), h, mix, Polarization::P);
  CHECK(std::abs(c.couplingSquare) < 1e-14);
}

TEST_CASE("long-wavelength limit is the small-b limit of the general expansion") {
  const HostMedium h = fixtures::host();
  const TMatrix tm = fixtures::skewed(fixtures::cavity(0.2));
  const double n0 = 0.3;
  for (Polarization pol : {Polarization::P, Polarization::SV}) {
    const cplx lw = expandLongWavelength(tm, h, n0, pol).order2;
    double prev = 0.0;
    for (double b : {1e-3, 5e-4}) {
      const cplx gen = expandOrder2(tm, h, Mixture::explicitDensity(n0, 0.0, b), pol).order2;
      const double err = std::abs(gen - lw) / std::abs(lw);
      CHECK(err < 1e-3);
      if (prev > 0.0) CHECK(err < prev);
      prev = err;
    }
  }
}

TEST_CASE("coupling sums: series, quadrature and the imaginary-angle identity") {
  const HostMedium h = fixtures::host();
  const TMatrix tm = fixtures::skewed(fixtures::cavity(0.4));
  const CouplingSums s = couplingSums(tm, h);
  CHECK(s.kappa == doctest::Approx(2.0));
  CHECK(std::abs(s.SL - s.SLIntegral) < 1e-10 * std::abs(s.SL));
  CHECK(std::abs(s.SL + s.ST - gLT(tm, cplx(0.0, std::log(s.kappa)))) < 1e-12 * std::abs(s.gAtImaginary));
  CHECK(s.nodes >= 64);
  CHECK(std::abs(couplingSeriesSL(tm, 3.0) - couplingIntegralSL(tm, 3.0)) < 1e-10 * std::abs(couplingSeriesSL(tm, 3.0)));
}

TEST_CASE("self term: series equals the cotangent integral over [0, pi]") {
  const HostMedium h = fixtures::host();
  const TMatrix tm = fixtures::skewed(fixtures::cavity(0.5));
  for (Channel c : kAllChannels) {
    const cplx ser = selfTermSeries(tm, c, h.kL);
    const cplx quad = selfTermIntegral(tm, c, h.kL);
    CAPTURE(channelName(c));
    CHECK(std::abs(ser - quad) < 1e-10 * std::abs(ser));
  }
}

TEST_CASE("Linton-Martin form equals the long-wavelength expansion") {
  const HostMedium h = fixtures::host();
  const TMatrix tms[] = {fixtures::cavity(0.3), fixtures::skewed(fixtures::cavity(0.3)),
                         buildInclusionTMatrix(h, {2.0, 0.6, 1.3}, 0.3, 8)};
  const double n0 = 0.2;
  for (const TMatrix& tm : tms) {
    const cplx p = expandLongWavelength(tm, h, n0, Polarization::P).xiSquared;
    const cplx s = expandLongWavelength(tm, h, n0, Polarization::SV).xiSquared;
    for (SelfTermPath path : {SelfTermPath::Series, SelfTermPath::Quadrature}) {
      const LintonMartinResult lm = lintonMartinElastic(tm, h, n0, path);
      CHECK(fixtures::relErr(lm.xiSquared, p) < 1e-10);
      CHECK(fixtures::relErr(lm.xiPrimeSquared, s) < 1e-10);
    }
  }
}

TEST_CASE("acoustic reduction of the Linton-Martin form") {
  const HostMedium h = fixtures::host();
  const TMatrix cav = fixtures::cavity(0.3, 6);
  TMatrix tm(6);
  for (int n = -6; n <= 6; ++n) tm.set(Channel::LL, n, cav(Channel::LL, n));
  const double n0 = 0.1;
  const cplx scalar = lintonMartinScalar(tm, Channel::LL, h.kL, n0);
  CHECK(std::abs(lintonMartinElastic(tm, h, n0).xiSquared - scalar) < 1e-15);
  // Textbook form: k^2 - 4i n0 f(0) + (8 n0^2 / (pi k^2)) int_0^pi cot(t/2) d/dt f(t)^2 dt
  // for a symmetric f, evaluated here through the equivalent sum.
  cplx self = 0.0;
  for (int m = -6; m <= 6; ++m) {
    for (int n = -6; n <= 6; ++n) {
      self += static_cast<double>(std::abs(m - n)) * tm(Channel::LL, m) * tm(Channel::LL, n);
    }
  }
  const cplx expected = h.kL * h.kL - 4.0 * I * n0 * farField(tm, Channel::LL, 0.0) -
                        8.0 * n0 * n0 / (h.kL * h.kL) * self;
  CHECK(std::abs(scalar - expected) < 1e-15);
}

TEST_CASE("L/T interchange") {
  const TMatrix tm = fixtures::skewed(fixtures::cavity(0.3, 4));
  const TMatrix sw = interchangeLT(tm);
  for (int n = -4; n <= 4; ++n) {
    CHECK(sw(Channel::LL, n) == tm(Channel::TT, n));
    CHECK(sw(Channel::LT, n) == tm(Channel::TL, n));
  }
  CHECK(interchangeLT(sw) == tm);
  CHECK(std::string(regimeName(Regime::LintonMartin)) != "");
}

TEST_CASE("second-order expansion tracks the exact root") {
  const HostMedium h = fixtures::host();
  const double a = 0.2, b = 0.6;
  const TMatrix tm = fixtures::skewed(fixtures::cavity(a));
  for (Polarization pol : {Polarization::P, Polarization::SV}) {
    double prev2 = 0.0, prev3 = 0.0;
    for (double c : {4e-3, 2e-3, 1e-3}) {
      const Mixture mix = Mixture::explicitDensity(c / (kPi * a * a), a, b);
      const EffectiveRoots r = solveRoots(tm, h, mix);
      const cplx exact = pol == Polarization::P ? r.xi : r.xiPrime;
      const double e2 = std::abs(exact - expandOrder2(tm, h, mix, pol).xi());
      const double e3 = std::abs(exact - expandOrder3(tm, h, mix, pol).xi());
      CHECK(e3 < e2);
      if (prev2 > 0.0) {
        CHECK(prev2 / e2 > 6.5);
        CHECK(prev3 / e3 > 13.0);
      }
      prev2 = e2;
      prev3 = e3;
    }
  }
}
