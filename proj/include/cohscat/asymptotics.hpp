#pragma once

// Low-concentration expansions of the coherent wavenumbers,
//
//   xi^2 = k^2 + d1 n0 + d2 n0^2 + d3 n0^3 + ...,
//
// in the general (finite k b) case, in the long-wavelength limit, and in the
// far-field form that generalizes the scalar Linton-Martin formula. The
// quasi-SV expansions follow from the quasi-P ones by interchanging the L and
// T labels everywhere (channels LL <-> TT, LT <-> TL, and kL <-> kT).

#include <optional>

#include "cohscat/effective.hpp"

namespace cohscat {

enum class Polarization { P, SV };
enum class Regime { General, LongWavelength, LintonMartin };

const char* regimeName(Regime r);

struct ExpansionResult {
  cplx xiSquared;
  cplx order0;
  cplx order1;  // d1 n0
  cplx order2;  // d2 n0^2
  std::optional<cplx> order3;
  Regime regime = Regime::General;
  /// kT b, reported so callers can judge the long-wavelength assumption.
  double kTb = 0.0;

  /// Root with Re > 0.
  cplx xi() const;
};

/// d1 = -4i f(0); d2 from the hole kernel at xi = k.
ExpansionResult expandOrder2(const TMatrix& tm, const HostMedium& host, const Mixture& mix,
                             Polarization pol);

/// The five contributions to y3, where d3 = (-4i)^3 y3 = 64i y3:
///   qbarProduct    e^t T Qbar T Qbar T e
///   derivative     f(0) e^t T Qbar' T e
///   couplingSquare (f_other(0) - f(0)) p0 / Delta^2
///   crossA, crossB the two mixed products divided by Delta,
/// with Delta = k^2 - k_other^2, p0 = f^{ab}(0) f^{ba}(0), and Qbar, Qbar'
/// evaluated at xi = k.
struct Order3Terms {
  cplx qbarProduct;
  cplx derivative;
  cplx couplingSquare;
  cplx crossA;
  cplx crossB;

  cplx y3() const { return qbarProduct + derivative + couplingSquare + crossA + crossB; }
  cplx d3() const { return cplx(0.0, 64.0) * y3(); }
};

Order3Terms expandOrder3Correction(const TMatrix& tm, const HostMedium& host, const Mixture& mix,
                                   Polarization pol);

/// expandOrder2 plus d3 n0^3.
ExpansionResult expandOrder3(const TMatrix& tm, const HostMedium& host, const Mixture& mix,
                             Polarization pol);

/// k b -> 0 limit; independent of b.
ExpansionResult expandLongWavelength(const TMatrix& tm, const HostMedium& host, double n0,
                                     Polarization pol);

/// G_LT(theta) = f^LT(theta) f^TL(-theta) + f^TL(theta) f^LT(-theta).
cplx gLT(const TMatrix& tm, cplx theta);

struct CouplingSums {
  cplx SL;          // double-sum form
  cplx SLIntegral;  // quadrature form
  cplx ST;          // G_LT(i log kappa) - SL
  cplx gAtImaginary;
  double kappa = 0.0;
  int nodes = 0;
};

CouplingSums couplingSums(const TMatrix& tm, const HostMedium& host);
/// sum_{m,n} kappa^{-|m-n|} (T^LT_m T^TL_n + T^TL_m T^LT_n) / 2.
cplx couplingSeriesSL(const TMatrix& tm, double kappa);
/// (kappa^2 - 1)/(2 pi) int_0^pi G_LT / (1 - 2 kappa cos + kappa^2), node count
/// doubled until stable to relTol.
cplx couplingIntegralSL(const TMatrix& tm, double kappa, double relTol = 1e-12,
                        int* nodesUsed = nullptr);

/// (8/(pi k^2)) int_0^pi cot(theta/2) d/dtheta[f(theta) f(-theta)] dtheta by
/// quadrature of the far field; the integrand tends to 2 h''(0) at theta = 0.
cplx selfTermIntegral(const TMatrix& tm, Channel c, double k, double relTol = 1e-12,
                      int* nodesUsed = nullptr);
/// The same term from the coefficients: -(8/k^2) sum |m-n| T_m T_n.
cplx selfTermSeries(const TMatrix& tm, Channel c, double k);

enum class SelfTermPath { Series, Quadrature };

struct LintonMartinResult {
  cplx xiSquared;
  cplx xiPrimeSquared;
  /// Individual O(n0^2) contributions, for inspection.
  cplx selfP, selfSV, coupling, imaginaryAngleTerm;
};

/// Far-field form of the long-wavelength expansion for both branches.
/// The coupling term is evaluated by quadrature of G_LT; the self terms by
/// the chosen path.
LintonMartinResult lintonMartinElastic(const TMatrix& tm, const HostMedium& host, double n0,
                                       SelfTermPath path = SelfTermPath::Series);

/// Scalar formula: k^2 - 4i n0 f(0) + self term, for one channel.
cplx lintonMartinScalar(const TMatrix& tm, Channel c, double k, double n0,
                        SelfTermPath path = SelfTermPath::Series);

/// Interchange the L and T roles: swaps LL <-> TT and LT <-> TL.
TMatrix interchangeLT(const TMatrix& tm);

}  // namespace cohscat
