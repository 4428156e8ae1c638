#pragma once

// Cylinder functions of integer order.
//
//   J_n(z)       complex argument, any finite z
//   Y_n(x)       real argument x > 0
//   H_n^(1)(x)   = J_n(x) + i Y_n(x), real x > 0
//
// J_n uses the ascending series for small |z| and Miller's backward
// recurrence otherwise, normalized with the generating-function sum
// exp(-/+ i z) = J_0 + 2 sum (-/+ i)^n J_n. Y_0 and Y_1 come from Neumann
// expansions in J_{2k}, J_{2k+1} for moderate x and from the Hankel
// asymptotic expansion for x > kAsymptoticX; higher orders of Y follow by
// forward recurrence, which is stable for the dominant solution.

#include <complex>
#include <vector>

namespace cohscat::specfun {

using cplx = std::complex<double>;

inline constexpr int kMaxOrder = 512;
inline constexpr double kSeriesRadius = 6.0;
inline constexpr double kAsymptoticX = 50.0;

cplx besselJ(int n, cplx z);
/// (J_{n-1}(z) - J_{n+1}(z)) / 2
cplx besselJPrime(int n, cplx z);
/// J_0(z) ... J_nmax(z).
std::vector<cplx> besselJSequence(int nmax, cplx z);

double besselY(int n, double x);
/// Y_0(x) ... Y_nmax(x).
std::vector<double> besselYSequence(int nmax, double x);

cplx hankel1(int n, double x);
cplx hankel1Prime(int n, double x);
/// H_0^(1)(x) ... H_nmax^(1)(x).
std::vector<cplx> hankel1Sequence(int nmax, double x);

}  // namespace cohscat::specfun
