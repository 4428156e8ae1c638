#pragma once

// Coherent-wave dispersion with the hole correction.
//
// With eps = -4i n0 and y_alpha = xi^2 - k_alpha^2, the coherent wavenumbers
// are the roots of
//
//   F(xi) = (y_L - eps M_LL)(y_T - eps M_TT) - eps^2 M_LT M_TL,
//   M_ab  = e_a^t (I - eps T Qbar)^{-1} T e_b,
//
// where Qbar^alpha_{mn} = [(i pi/2) N^alpha_{m-n}(xi) - 1] / y_alpha and N is
// the hole kernel. Vectors are ordered (L modes -N..N, T modes -N..N) and
// T acts as (T a)_L = T^LL a_L + T^TL a_T, (T a)_T = T^LT a_L + T^TT a_T.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

#include "cohscat/tmatrix.hpp"

namespace cohscat {

enum class Wave { L, T };

/// Number density n0, hole radius b, cylinder radius a, concentration c.
struct Mixture {
  double n0 = 0.0;
  double b = 0.0;
  double a = 0.0;
  double c = 0.0;

  /// Any two of {n0, a, b, c} (NaN = not given), closed by n0 pi b^2 = 1 and
  /// c = a^2/b^2. Three values (n0, a, b) are taken verbatim with c = a^2/b^2.
  static Mixture resolve(double n0, double a, double b, double c);
  /// Explicit density and radii; c = a^2/b^2.
  static Mixture explicitDensity(double n0, double a, double b);

  /// True when b <= 2a (closest approach shorter than a diameter).
  bool holeOverlapWarning() const { return b <= 2.0 * a; }
  void validate() const;
};

/// zeta b J_p'(zeta b) H_p(k b) - k b J_p(zeta b) H_p'(k b).
cplx holeKernelN(int p, cplx zeta, double kAlpha, double b);
/// N_0 .. N_pmax at one zeta (N is even in p).
std::vector<cplx> holeKernelSequence(int pmax, cplx zeta, double kAlpha, double b);
/// dN_p/dzeta for p = 0..pmax.
std::vector<cplx> holeKernelDerivativeSequence(int pmax, cplx zeta, double kAlpha, double b);

/// Limit of k^2 Qbar and k^4 dQbar/d(xi^2) at xi = k.
struct QbarLimit {
  cplx D0;
  cplx D1;
};
QbarLimit qbarAtK(int p, double k, double b);

inline constexpr double kPoleGuard = 1e-8;

/// [(i pi/2) N_{m-n}(xi) - 1] / (xi^2 - k^2). Throws PoleError within
/// kPoleGuard * k of the pole; callers then use qbarAtK.
cplx qbarElement(int m, int n, Wave alpha, cplx xi, const HostMedium& host, const Mixture& mix);

/// Qbar_p for p = 0..pmax, switching to D0 + y D1/k^2 near the pole.
std::vector<cplx> qbarSequence(int pmax, Wave alpha, cplx xi, const HostMedium& host, double b);

struct MatrixM {
  cplx LL, LT, TL, TT;
};

/// Default modal truncation max(order, ceil(kT b) + 8).
int defaultTruncation(const TMatrix& tm, const HostMedium& host, const Mixture& mix);

/// Block T of size 2(2N+1), N >= tm.order().
Eigen::MatrixXcd blockT(const TMatrix& tm, int N);
/// Block-diagonal Qbar of size 2(2N+1) at xi.
Eigen::MatrixXcd blockQbar(cplx xi, const HostMedium& host, double b, int N);

MatrixM matrixM(const TMatrix& tm, const HostMedium& host, const Mixture& mix, cplx xi, int Ntr);
cplx dispersionF(cplx xi, const TMatrix& tm, const HostMedium& host, const Mixture& mix, int Ntr);

/// I - eps Qbar T - eps e_L e_L^t T / y_L - eps e_T e_T^t T / y_T: the
/// homogeneous modal system whose null vectors are the coherent amplitudes.
Eigen::MatrixXcd modalSystem(cplx xi, const TMatrix& tm, const HostMedium& host,
                             const Mixture& mix, int Ntr);

enum class RootMethod { Newton, Muller };

struct SolverOptions {
  RootMethod method = RootMethod::Newton;
  int maxIterations = 80;
  /// |F| tolerance relative to kT^4.
  double relTolerance = 1e-12;
  /// Modal truncation; <= 0 selects defaultTruncation.
  int truncation = 0;
  /// Explicit seeds; NaN selects the O(n0^2) expansion.
  cplx seedP{std::nan(""), 0.0};
  cplx seedSV{std::nan(""), 0.0};
};

struct BranchRoot {
  cplx xi;
  double residual = 0.0;
  int iterations = 0;
  std::vector<double> history;
};

struct EffectiveRoots {
  cplx xi;       // quasi-P
  cplx xiPrime;  // quasi-SV
  double residualP = 0.0;
  double residualSV = 0.0;
  int iterationsP = 0;
  int iterationsSV = 0;
  int truncationUsed = 0;
  int orderUsed = 0;
  std::vector<double> historyP;
  std::vector<double> historySV;
};

/// Single root of F from a seed.
BranchRoot solveBranch(const std::function<cplx(cplx)>& F, cplx seed, double kScale,
                       double tolerance, const SolverOptions& options);

EffectiveRoots solveRoots(const TMatrix& tm, const HostMedium& host, const Mixture& mix,
                          const SolverOptions& options = {});

/// Doubles the builder order from startOrder until both roots are stable to
/// relStability (modes beyond the T-matrix order decouple exactly, so
/// convergence is governed by the order of the scatterer expansion).
EffectiveRoots solveRootsAdaptive(const std::function<TMatrix(int)>& builder, int startOrder,
                                  const HostMedium& host, const Mixture& mix,
                                  const SolverOptions& options = {}, double relStability = 1e-10,
                                  int maxOrder = 128);

/// Re > 0, Im >= 0; Im in (-1e-12 kL, 0) is clamped to zero. Throws
/// ConvergenceError for roots outside the forward branch.
cplx applyBranchConvention(cplx xi, double kL);

}  // namespace cohscat
