#pragma once

#include <complex>

#include "cohscat/tmatrix.hpp"

namespace fixtures {

using cohscat::cplx;

// kL = 1, kT = 2 (Poisson-like host with cL = 2 cT).
inline cohscat::HostMedium host() { return {1.0, 2.0, 1.0, 1.0}; }

inline cohscat::TMatrix cavity(double a, int order = 8) {
  return cohscat::buildCavityTMatrix(host(), a, order);
}

// Cavity entries with eta T^LL added to LT and eta T^TT to TL, so that the
// mode-converted far fields no longer vanish at 0 and pi.
inline cohscat::TMatrix skewed(const cohscat::TMatrix& base, double eta = 0.3) {
  using cohscat::Channel;
  cohscat::TMatrix t = base;
  for (int n = -t.order(); n <= t.order(); ++n) {
    t.set(Channel::LT, n, base(Channel::LT, n) + eta * base(Channel::LL, n));
    t.set(Channel::TL, n, base(Channel::TL, n) + eta * base(Channel::TT, n));
  }
  return t;
}

inline double relErr(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

}  // namespace fixtures
