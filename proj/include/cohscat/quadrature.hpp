#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace cohscat::quadrature {

struct Rule {
  std::vector<double> nodes;    // on (-1, 1)
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule.
const Rule& gaussLegendre(int n);

/// Integral of f over [lo, hi] with an n-point rule.
std::complex<double> integrate(const std::function<std::complex<double>(double)>& f, double lo,
                               double hi, int n);

struct Adaptive {
  std::complex<double> value;
  int nodes = 0;
};

/// Doubles the node count from startNodes until two successive values agree
/// to relTol (relative to 1 + |value|). Throws ConvergenceError past maxNodes.
Adaptive integrateDoubling(const std::function<std::complex<double>(double)>& f, double lo,
                           double hi, double relTol = 1e-10, int startNodes = 64,
                           int maxNodes = 4096);

}  // namespace cohscat::quadrature
