#pragma once

// Large k b limit of the modal equations and the elastic Waterman-Truell
// variant. Both reduce the modal system to a 4x4 determinant in the forward
// and backward far fields f^{ab}(0), f^{ab}(pi):
//
//   | 1+f^LL(0)P_L  f^LL(pi)P_L    f^TL(0)P_L     f^TL(pi)P_L   |
//   | f^LL(pi)Q_L   1+f^LL(0)Q_L   f^TL(pi)Q_L    f^TL(0)Q_L    |
//   | f^LT(0)P_T    f^LT(pi)P_T    1+f^TT(0)P_T   f^TT(pi)P_T   |
//   | f^LT(pi)Q_T   f^LT(0)Q_T     f^TT(pi)Q_T    1+f^TT(0)Q_T  |
//
// acting on (P_LT, Q_LT, P_TL, Q_TL). The two variants differ only in P, Q;
// note that they use different phase conventions for Q.

#include <array>

#include "cohscat/asymptotics.hpp"

namespace cohscat {

enum class HighFreqVariant { HighKB, WatermanTruell };

const char* variantName(HighFreqVariant v);

struct PQCoefficients {
  cplx PL, QL, PT, QT;
  HighFreqVariant variant = HighFreqVariant::HighKB;
};

/// Throws PoleError when |xi -+ k_alpha| < 1e-10 k_alpha.
PQCoefficients pqCoefficients(HighFreqVariant variant, cplx xi, const HostMedium& host,
                              const Mixture& mix);

/// f^{ab}(0) and f^{ab}(pi), indexed by Channel.
struct FarFieldPair {
  std::array<cplx, 4> forward{};
  std::array<cplx, 4> backward{};

  cplx f0(Channel c) const { return forward[static_cast<int>(c)]; }
  cplx fpi(Channel c) const { return backward[static_cast<int>(c)]; }
  /// True when all mode-converted amplitudes vanish to within tol.
  bool uncoupled(double tol = 1e-14) const;
};

FarFieldPair farFieldPair(const TMatrix& tm);

Eigen::Matrix4cd modalMatrix4(const PQCoefficients& pq, const FarFieldPair& ff);
cplx modalDeterminant4(const PQCoefficients& pq, const FarFieldPair& ff);

/// [1 + f(0)P][1 + f(0)Q] - f(pi)^2 P Q for one polarization.
cplx uncoupledDeterminant(const PQCoefficients& pq, Polarization pol, const FarFieldPair& ff);

/// Root of the uncoupled equation for one polarization.
cplx uncoupledRoot(HighFreqVariant variant, Polarization pol, const FarFieldPair& ff,
                   const HostMedium& host, const Mixture& mix);

/// Waterman-Truell closed form xi^2 = (k + c f(0))^2 - (c f(pi))^2 with
/// c = -2i n0 / k.
cplx watermanTruellClosedForm(Polarization pol, const FarFieldPair& ff, const HostMedium& host,
                              double n0);

struct HighFreqRoots {
  cplx xi;
  cplx xiPrime;
  HighFreqVariant variant = HighFreqVariant::HighKB;
  bool uncoupledPath = false;
  double residualP = 0.0;
  double residualSV = 0.0;
};

struct HighFreqOptions {
  /// Force the 4x4 determinant even for uncoupled far fields.
  bool forceDeterminant = false;
  int maxIterations = 80;
  double relTolerance = 1e-13;
};

HighFreqRoots solveHighFreq(HighFreqVariant variant, const TMatrix& tm, const HostMedium& host,
                            const Mixture& mix, const HighFreqOptions& options = {});

/// Residual of the untruncated-structure modal system (amplitudes
/// A_n = -P - (-1)^n Q, checked against the defining sums over the T-matrix
/// entries) at xi, relative to the amplitude norm.
double eightUnknownResidual(HighFreqVariant variant, cplx xi, const TMatrix& tm,
                            const HostMedium& host, const Mixture& mix);

}  // namespace cohscat
