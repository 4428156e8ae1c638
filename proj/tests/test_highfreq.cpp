#include <doctest.h>

#include <cmath>

#include "cohscat/errors.hpp"
#include "cohscat/highfreq.hpp"
#include "fixtures.hpp"

using namespace cohscat;

namespace {

const cplx I(0.0, 1.0);

}  // namespace

TEST_CASE("P/Q coefficients of the two variants") {
  const HostMedium h = fixtures::host();
  const Mixture mix = Mixture::explicitDensity(0.05, 0.2, 1.5);
  const cplx xi(1.1, 0.02);
  const PQCoefficients wt = pqCoefficients(HighFreqVariant::WatermanTruell, xi, h, mix);
  CHECK(std::abs(wt.PL - 2.0 * mix.n0 / (I * h.kL * (h.kL - xi))) < 1e-15);
  CHECK(std::abs(wt.QT - 2.0 * mix.n0 / (I * h.kT * (h.kT + xi))) < 1e-15);

  // At b -> 0 the high-kb coefficients differ from Waterman-Truell by the
  // factor sqrt(k/xi) and, for Q, an extra -i.
  const Mixture tiny = Mixture::explicitDensity(0.05, 0.0, 1e-15);
  const PQCoefficients hk = pqCoefficients(HighFreqVariant::HighKB, xi, h, tiny);
  const cplx rL = std::sqrt(h.kL / xi), rT = std::sqrt(h.kT / xi);
  CHECK(std::abs(hk.PL - rL * wt.PL) < 1e-12 * std::abs(wt.PL));
  CHECK(std::abs(hk.QL + I * rL * wt.QL) < 1e-12 * std::abs(wt.QL));
  CHECK(std::abs(hk.PT - rT * wt.PT) < 1e-12 * std::abs(wt.PT));
  CHECK(std::abs(hk.QT + I * rT * wt.QT) < 1e-12 * std::abs(wt.QT));

  CHECK_THROWS_AS(pqCoefficients(HighFreqVariant::HighKB, cplx(h.kL), h, mix), PoleError);
  CHECK_THROWS_AS(pqCoefficients(HighFreqVariant::WatermanTruell, cplx(h.kT), h, mix), PoleError);
}

TEST_CASE("determinant factorizes when mode conversion vanishes") {
  const HostMedium h = fixtures::host();
  const TMatrix tm = fixtures::cavity(0.5);
  const FarFieldPair ff = farFieldPair(tm);
  CHECK(ff.uncoupled());
  CHECK(!farFieldPair(fixtures::skewed(tm)).uncoupled());
  const Mixture mix = Mixture::explicitDensity(0.05, 0.5, 2.0);
  for (HighFreqVariant v : {HighFreqVariant::HighKB, HighFreqVariant::WatermanTruell}) {
    for (cplx xi : {cplx(1.05, 0.01), cplx(1.7, 0.2), cplx(2.1, 0.05)}) {
      const PQCoefficients pq = pqCoefficients(v, xi, h, mix);
      const cplx d4 = modalDeterminant4(pq, ff);
      const cplx prod =
          uncoupledDeterminant(pq, Polarization::P, ff) * uncoupledDeterminant(pq, Polarization::SV, ff);
      CHECK(std::abs(d4 - prod) < 1e-12 * std::max(1.0, std::abs(prod)));
    }
  }
}

TEST_CASE("Waterman-Truell root matches its closed form") {
  const HostMedium h = fixtures::host();
  const TMatrix tm = fixtures::cavity(0.4);
  const Mixture mix = Mixture::explicitDensity(0.1, 0.4, 1.0);
  const FarFieldPair ff = farFieldPair(tm);
  for (Polarization pol : {Polarization::P, Polarization::SV}) {
    const cplx xi = uncoupledRoot(HighFreqVariant::WatermanTruell, pol, ff, h, mix);
    const cplx closed = watermanTruellClosedForm(pol, ff, h, mix.n0);
    CHECK(std::abs(xi * xi - closed) < 1e-12 * std::abs(closed));
  }
  const HighFreqRoots r = solveHighFreq(HighFreqVariant::WatermanTruell, tm, h, mix);
  CHECK(r.uncoupledPath);
  CHECK(std::abs(r.xi * r.xi - watermanTruellClosedForm(Polarization::P, ff, h, mix.n0)) < 1e-12);
}

TEST_CASE("coupled determinant and the eight-unknown system") {
  const HostMedium h = fixtures::host();
  const TMatrix tm = fixtures::skewed(fixtures::cavity(0.4));
  const Mixture mix = Mixture::explicitDensity(0.05, 0.4, 3.0);
  for (HighFreqVariant v : {HighFreqVariant::HighKB, HighFreqVariant::WatermanTruell}) {
    const HighFreqRoots r = solveHighFreq(v, tm, h, mix);
    CHECK(!r.uncoupledPath);
    CHECK(std::abs(r.xi - h.kL) < std::abs(r.xiPrime - h.kL));
    for (cplx xi : {r.xi, r.xiPrime}) {
      CHECK(eightUnknownResidual(v, xi, tm, h, mix) < 1e-10);
    }
    // Away from a root the residual is O(1).
    CHECK(eightUnknownResidual(v, cplx(1.5, 0.1), tm, h, mix) > 1e-3);
  }
  // Forcing the determinant path on an uncoupled T-matrix gives the same roots.
  const TMatrix cav = fixtures::cavity(0.4);
  HighFreqOptions force;
  force.forceDeterminant = true;
  const HighFreqRoots a = solveHighFreq(HighFreqVariant::HighKB, cav, h, mix);
  const HighFreqRoots b = solveHighFreq(HighFreqVariant::HighKB, cav, h, mix, force);
  CHECK(fixtures::relErr(b.xi, a.xi) < 1e-11);
  CHECK(fixtures::relErr(b.xiPrime, a.xiPrime) < 1e-11);
}

TEST_CASE("high-frequency roots without scatterers") {
  const HostMedium h = fixtures::host();
  const HighFreqRoots r =
      solveHighFreq(HighFreqVariant::HighKB, fixtures::cavity(0.4), h, Mixture::explicitDensity(0.0, 0.4, 3.0));
  CHECK(r.xi == cplx(h.kL));
  CHECK(r.xiPrime == cplx(h.kT));
  CHECK(std::string(variantName(HighFreqVariant::WatermanTruell)) == "waterman-truell");
}
