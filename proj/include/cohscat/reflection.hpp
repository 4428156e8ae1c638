#pragma once

// Reflection of a plane P or SV wave at the boundary of the half-space
// occupied by the scatterers. R^{ab} is the ratio of the reflected potential
// of type b to the incident potential of type a.

#include "cohscat/effective.hpp"

namespace cohscat {

struct ReflectionSet {
  cplx LL, LT, TL, TT;
};

enum class Incidence { P, SV };

/// Null vector of the modal system at a root, scaled so that its
/// largest-magnitude entry is 1.
struct ModalAmplitudes {
  Eigen::VectorXcd v;
  double sigmaMin = 0.0;
  double sigmaNext = 0.0;
  double residual = 0.0;  // |A v| / |v|
  int truncation = 0;
};

/// Minimum ratio sigmaNext / sigmaMin accepted as an isolated null direction.
inline constexpr double kNullSeparation = 1e3;

/// Throws AmbiguityError when the smallest singular value is not isolated.
ModalAmplitudes nullVector(cplx xi, const TMatrix& tm, const HostMedium& host, const Mixture& mix,
                           int Ntr);

struct ExtinctionScales {
  cplx quasiP;
  cplx quasiSV;
};

/// Scales of the two null vectors such that the extinction conditions
/// reproduce the incident amplitudes (AL, AT).
ExtinctionScales extinctionScales(const ModalAmplitudes& a, const ModalAmplitudes& b, cplx xi,
                                  cplx xiPrime, cplx AL, cplx AT, const TMatrix& tm,
                                  const HostMedium& host, const Mixture& mix);

/// Left-hand sides of the extinction conditions for given scales.
std::array<cplx, 2> extinctionResidual(const ModalAmplitudes& a, const ModalAmplitudes& b,
                                       cplx xi, cplx xiPrime, const ExtinctionScales& s,
                                       const TMatrix& tm, const HostMedium& host,
                                       const Mixture& mix);

/// Reflected (L, T) potential amplitudes for the scaled null vectors.
std::array<cplx, 2> reflectedAmplitudes(const ModalAmplitudes& a, const ModalAmplitudes& b,
                                        cplx xi, cplx xiPrime, const ExtinctionScales& s,
                                        const TMatrix& tm, const HostMedium& host,
                                        const Mixture& mix);

struct ReflectionResult {
  ReflectionSet R;
  EffectiveRoots roots;
  double sigmaMinP = 0.0;
  double sigmaMinSV = 0.0;
  double nullResidual = 0.0;
};

/// Exact coefficients (both incidences) from the coherent roots.
ReflectionResult reflectionExact(const TMatrix& tm, const HostMedium& host, const Mixture& mix,
                                 const SolverOptions& options = {});
/// As above with the roots supplied.
ReflectionResult reflectionExact(const TMatrix& tm, const HostMedium& host, const Mixture& mix,
                                 const EffectiveRoots& roots, int Ntr);

/// R^{ab} = 2i n0 f^{ab}(pi) / ((k_a + k_b) k_b).
ReflectionSet reflectionLeading(const TMatrix& tm, const HostMedium& host, double n0);

}  // namespace cohscat
