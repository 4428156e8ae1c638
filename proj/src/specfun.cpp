#include "cohscat/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cohscat/errors.hpp"

namespace cohscat::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = std::numbers::egamma;
constexpr double kMaxImag = 700.0;

void checkOrder(int n) {
  if (n > kMaxOrder || n < -kMaxOrder) {
    throw DomainError("cylinder function order " + std::to_string(n) + " exceeds " +
                      std::to_string(kMaxOrder));
  }
}

void checkArgument(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError("cylinder function argument is not finite");
  }
  if (std::abs(z.imag()) > kMaxImag) {
    throw RangeError("|Im z| too large for double-precision Bessel evaluation");
  }
}

double paritySign(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

// Ascending series, each order summed independently.
std::vector<cplx> seriesSequence(int nmax, cplx z) {
  std::vector<cplx> out(static_cast<std::size_t>(nmax) + 1);
  const cplx half = 0.5 * z;
  const cplx q = -half * half;
  cplx lead = 1.0;  // (z/2)^n / n!
  for (int n = 0; n <= nmax; ++n) {
    if (n > 0) lead *= half / static_cast<double>(n);
    cplx term = lead;
    cplx sum = term;
    for (int k = 1; k < 200; ++k) {
      term *= q / (static_cast<double>(k) * static_cast<double>(n + k));
      sum += term;
      if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    out[static_cast<std::size_t>(n)] = sum;
  }
  return out;
}

std::vector<cplx> millerSequence(int nmax, cplx z) {
  const double az = std::abs(z);
  const double top = std::max(static_cast<double>(nmax), az);
  int start = static_cast<int>(top + 30.0 + std::sqrt(60.0 * top));
  if (start % 2) ++start;

  // exp(-iz) when Im z >= 0, exp(iz) otherwise: the larger of the two.
  const cplx unitPhase = (z.imag() >= 0.0) ? cplx(0.0, -1.0) : cplx(0.0, 1.0);
  std::vector<cplx> powers(4);
  powers[0] = 1.0;
  for (int i = 1; i < 4; ++i) powers[i] = powers[i - 1] * unitPhase;

  std::vector<cplx> out(static_cast<std::size_t>(nmax) + 1);
  cplx next = 0.0;
  cplx cur = 1e-300;
  cplx norm = 0.0;
  for (int k = start; k >= 1; --k) {
    // cur = J_k (unnormalized), next = J_{k+1}
    if (k <= nmax) out[static_cast<std::size_t>(k)] = cur;
    norm += 2.0 * powers[static_cast<std::size_t>(k % 4)] * cur;
    const cplx prev = (2.0 * k / z) * cur - next;
    next = cur;
    cur = prev;
    if (std::abs(cur) > 1e250) {
      const double s = 1e-250;
      cur *= s;
      next *= s;
      norm *= s;
      for (int j = k; j <= std::min(nmax, start); ++j) out[static_cast<std::size_t>(j)] *= s;
    }
  }
  out[0] = cur;
  norm += cur;
  const cplx target = std::exp(unitPhase * z);
  const cplx scale = target / norm;
  for (auto& v : out) v *= scale;
  return out;
}

// Hankel asymptotic expansion for orders 0 and 1.
void hankelAsymptotic01(double x, double j[2], double y[2]) {
  for (int nu = 0; nu < 2; ++nu) {
    const double mu = 4.0 * nu * nu;
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    double last = 1.0;
    for (int k = 1; k < 60; ++k) {
      const double odd = 2.0 * k - 1.0;
      term *= (mu - odd * odd) / (static_cast<double>(k) * 8.0 * x);
      if (std::abs(term) > std::abs(last)) break;
      last = term;
      // k odd contributes to Q, k even to P, alternating signs in pairs.
      const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
      if (k % 2) {
        q += sign * term;
      } else {
        p += sign * term;
      }
      if (std::abs(term) < 1e-18) break;
    }
    const double chi = x - (0.5 * nu + 0.25) * kPi;
    const double amp = std::sqrt(2.0 / (kPi * x));
    j[nu] = amp * (p * std::cos(chi) - q * std::sin(chi));
    y[nu] = amp * (p * std::sin(chi) + q * std::cos(chi));
  }
}

// Neumann expansions of Y_0, Y_1 in terms of J_k(x).
void neumannY01(double x, double y[2]) {
  const int kmax = static_cast<int>(x + 40.0 + std::sqrt(60.0 * x));
  const auto jc = (x < kSeriesRadius) ? seriesSequence(kmax, cplx(x, 0.0))
                                      : millerSequence(kmax, cplx(x, 0.0));
  auto J = [&](int k) { return jc[static_cast<std::size_t>(k)].real(); };
  const double logTerm = std::log(0.5 * x) + kEulerGamma;

  double s0 = 0.0;
  for (int k = 1; 2 * k <= kmax; ++k) s0 += paritySign(k) * J(2 * k) / k;
  y[0] = (2.0 / kPi) * logTerm * J(0) - (4.0 / kPi) * s0;

  double s1 = 0.0;
  for (int k = 1; 2 * k + 1 <= kmax; ++k) {
    s1 += paritySign(k) * (2.0 * k + 1.0) * J(2 * k + 1) / (static_cast<double>(k) * (k + 1.0));
  }
  y[1] = -2.0 / (kPi * x) * J(0) + (2.0 / kPi) * (logTerm - 1.0) * J(1) - (2.0 / kPi) * s1;
}

}  // namespace

std::vector<cplx> besselJSequence(int nmax, cplx z) {
  checkOrder(nmax);
  checkArgument(z);
  if (nmax < 0) return {};
  if (z == cplx(0.0, 0.0)) {
    std::vector<cplx> out(static_cast<std::size_t>(nmax) + 1, cplx(0.0, 0.0));
    out[0] = 1.0;
    return out;
  }
  if (std::abs(z) < kSeriesRadius) return seriesSequence(nmax, z);
  return millerSequence(nmax, z);
}

cplx besselJ(int n, cplx z) {
  checkOrder(n);
  const int m = std::abs(n);
  const cplx v = besselJSequence(m, z)[static_cast<std::size_t>(m)];
  return (n < 0) ? paritySign(m) * v : v;
}

cplx besselJPrime(int n, cplx z) {
  checkOrder(n);
  const int m = std::abs(n) + 1;
  const auto seq = besselJSequence(m, z);
  auto J = [&](int k) {
    const int a = std::abs(k);
    const cplx v = seq[static_cast<std::size_t>(a)];
    return (k < 0) ? paritySign(a) * v : v;
  };
  return 0.5 * (J(n - 1) - J(n + 1));
}

std::vector<double> besselYSequence(int nmax, double x) {
  checkOrder(nmax);
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("Y_n(x) requires finite x > 0");
  }
  if (nmax < 0) return {};
  double y01[2];
  if (x > kAsymptoticX) {
    double j01[2];
    hankelAsymptotic01(x, j01, y01);
  } else {
    neumannY01(x, y01);
  }
  std::vector<double> out(static_cast<std::size_t>(nmax) + 1);
  out[0] = y01[0];
  if (nmax >= 1) out[1] = y01[1];
  for (int n = 1; n < nmax; ++n) {
    const double v = (2.0 * n / x) * out[static_cast<std::size_t>(n)] -
                     out[static_cast<std::size_t>(n - 1)];
    if (!std::isfinite(v)) {
      throw RangeError("Y_" + std::to_string(n + 1) + "(" + std::to_string(x) + ") overflows");
    }
    out[static_cast<std::size_t>(n + 1)] = v;
  }
  return out;
}

double besselY(int n, double x) {
  checkOrder(n);
  const int m = std::abs(n);
  const double v = besselYSequence(m, x)[static_cast<std::size_t>(m)];
  return (n < 0) ? paritySign(m) * v : v;
}

std::vector<cplx> hankel1Sequence(int nmax, double x) {
  const auto ys = besselYSequence(nmax, x);
  const auto js = besselJSequence(nmax, cplx(x, 0.0));
  std::vector<cplx> out(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) out[i] = cplx(js[i].real(), ys[i]);
  return out;
}

cplx hankel1(int n, double x) {
  checkOrder(n);
  const int m = std::abs(n);
  const cplx v = hankel1Sequence(m, x)[static_cast<std::size_t>(m)];
  return (n < 0) ? paritySign(m) * v : v;
}

cplx hankel1Prime(int n, double x) {
  checkOrder(n);
  const int m = std::abs(n) + 1;
  const auto seq = hankel1Sequence(m, x);
  auto H = [&](int k) {
    const int a = std::abs(k);
    const cplx v = seq[static_cast<std::size_t>(a)];
    return (k < 0) ? paritySign(a) * v : v;
  };
  return 0.5 * (H(n - 1) - H(n + 1));
}

}  // namespace cohscat::specfun
