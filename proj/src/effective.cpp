#include "cohscat/effective.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "cohscat/asymptotics.hpp"
#include "cohscat/errors.hpp"
#include "cohscat/specfun.hpp"

namespace cohscat {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

bool given(double v) { return !std::isnan(v); }

cplx parityPick(const std::vector<cplx>& seq, int k) {
  const int m = std::abs(k);
  const cplx v = seq[static_cast<std::size_t>(m)];
  return (k < 0 && (m % 2)) ? -v : v;
}

cplx primeAt(const std::vector<cplx>& seq, int p) {
  return 0.5 * (parityPick(seq, p - 1) - parityPick(seq, p + 1));
}

double kOf(Wave w, const HostMedium& host) { return w == Wave::L ? host.kL : host.kT; }

cplx epsilonOf(const Mixture& mix) { return cplx(0.0, -4.0 * mix.n0); }

void requireTruncation(const TMatrix& tm, int Ntr) {
  if (Ntr < tm.order()) {
    throw DomainError("modal truncation " + std::to_string(Ntr) + " below T-matrix order " +
                      std::to_string(tm.order()));
  }
}

}  // namespace

Mixture Mixture::resolve(double n0, double a, double b, double c) {
  const int count = given(n0) + given(a) + given(b) + given(c);
  if (count == 3 && given(n0) && given(a) && given(b)) return explicitDensity(n0, a, b);
  if (count != 2) {
    throw DomainError("mixture needs exactly two of {n0, a, b, c}, or n0 with a and b");
  }
  Mixture m;
  if (given(a) && given(b)) {
    m.a = a;
    m.b = b;
    m.n0 = 1.0 / (kPi * b * b);
  } else if (given(a) && given(c)) {
    m.a = a;
    m.b = a / std::sqrt(c);
    m.n0 = c / (kPi * a * a);
  } else if (given(n0) && given(a)) {
    m.n0 = n0;
    m.a = a;
    m.b = 1.0 / std::sqrt(kPi * n0);
  } else if (given(n0) && given(c)) {
    m.n0 = n0;
    m.b = 1.0 / std::sqrt(kPi * n0);
    m.a = m.b * std::sqrt(c);
  } else if (given(b) && given(c)) {
    m.b = b;
    m.a = b * std::sqrt(c);
    m.n0 = 1.0 / (kPi * b * b);
  } else {
    throw DomainError("n0 and b are tied by n0 pi b^2 = 1; give a or c as well");
  }
  m.c = m.a * m.a / (m.b * m.b);
  m.validate();
  return m;
}

Mixture Mixture::explicitDensity(double n0, double a, double b) {
  Mixture m{n0, b, a, a * a / (b * b)};
  m.validate();
  return m;
}

void Mixture::validate() const {
  if (!(n0 >= 0.0) || !std::isfinite(n0)) throw DomainError("n0 must be non-negative");
  if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("hole radius b must be positive");
  if (!(a >= 0.0) || !std::isfinite(a)) throw DomainError("cylinder radius a must be non-negative");
  if (a > b) throw DomainError("cylinder radius exceeds the hole radius (c > 1)");
}

std::vector<cplx> holeKernelSequence(int pmax, cplx zeta, double kAlpha, double b) {
  if (!(b > 0.0) || !(kAlpha > 0.0)) throw DomainError("hole kernel needs b > 0 and k > 0");
  const cplx z = zeta * b;
  const double x = kAlpha * b;
  const auto J = specfun::besselJSequence(pmax + 1, z);
  const auto H = specfun::hankel1Sequence(pmax + 1, x);
  std::vector<cplx> out(static_cast<std::size_t>(pmax) + 1);
  for (int p = 0; p <= pmax; ++p) {
    out[static_cast<std::size_t>(p)] =
        z * primeAt(J, p) * H[static_cast<std::size_t>(p)] - x * J[static_cast<std::size_t>(p)] * primeAt(H, p);
  }
  return out;
}

std::vector<cplx> holeKernelDerivativeSequence(int pmax, cplx zeta, double kAlpha, double b) {
  const cplx z = zeta * b;
  const double x = kAlpha * b;
  const auto J = specfun::besselJSequence(pmax + 1, z);
  const auto H = specfun::hankel1Sequence(pmax + 1, x);
  std::vector<cplx> out(static_cast<std::size_t>(pmax) + 1);
  for (int p = 0; p <= pmax; ++p) {
    const double p2 = static_cast<double>(p) * p;
    const auto up = static_cast<std::size_t>(p);
    out[up] = -b * ((z - p2 / z) * J[up] * H[up] + x * primeAt(J, p) * primeAt(H, p));
  }
  return out;
}

cplx holeKernelN(int p, cplx zeta, double kAlpha, double b) {
  const int m = std::abs(p);
  return holeKernelSequence(m, zeta, kAlpha, b)[static_cast<std::size_t>(m)];
}

QbarLimit qbarAtK(int p, double k, double b) {
  const double x = k * b;
  if (!(x > 0.0)) throw DomainError("qbarAtK needs k b > 0");
  const int m = std::abs(p);
  const auto J = specfun::besselJSequence(m + 1, cplx(x, 0.0));
  const auto H = specfun::hankel1Sequence(m + 1, x);
  const cplx JH = J[static_cast<std::size_t>(m)] * H[static_cast<std::size_t>(m)];
  const cplx JpHp = primeAt(J, m) * primeAt(H, m);
  const double p2 = static_cast<double>(m) * m;
  const double x2 = x * x;
  const cplx D0 = -I * kPi / 4.0 * ((x2 - p2) * JH + x2 * JpHp);
  const cplx D1 = -0.5 * D0 + p2 / 8.0 - x2 / 8.0 * (1.0 + I * kPi * JH);
  return {D0, D1};
}

cplx qbarElement(int m, int n, Wave alpha, cplx xi, const HostMedium& host, const Mixture& mix) {
  const double k = kOf(alpha, host);
  if (std::abs(xi - k) < kPoleGuard * k) {
    throw PoleError("xi within the pole guard of k; use qbarAtK");
  }
  const cplx N = holeKernelN(m - n, xi, k, mix.b);
  return (I * kPi / 2.0 * N - 1.0) / (xi * xi - k * k);
}

std::vector<cplx> qbarSequence(int pmax, Wave alpha, cplx xi, const HostMedium& host, double b) {
  const double k = kOf(alpha, host);
  std::vector<cplx> out(static_cast<std::size_t>(pmax) + 1);
  const cplx y = xi * xi - k * k;
  if (std::abs(xi - k) < kPoleGuard * k) {
    for (int p = 0; p <= pmax; ++p) {
      const auto lim = qbarAtK(p, k, b);
      out[static_cast<std::size_t>(p)] = (lim.D0 + y * lim.D1 / (k * k)) / (k * k);
    }
    return out;
  }
  const auto N = holeKernelSequence(pmax, xi, k, b);
  for (int p = 0; p <= pmax; ++p) {
    out[static_cast<std::size_t>(p)] = (I * kPi / 2.0 * N[static_cast<std::size_t>(p)] - 1.0) / y;
  }
  return out;
}

int defaultTruncation(const TMatrix& tm, const HostMedium& host, const Mixture& mix) {
  return std::max(tm.order(), static_cast<int>(std::ceil(host.kT * mix.b)) + 8);
}

Eigen::MatrixXcd blockT(const TMatrix& tm, int N) {
  requireTruncation(tm, N);
  const int d = 2 * N + 1;
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
  for (int n = -tm.order(); n <= tm.order(); ++n) {
    const int i = n + N;
    T(i, i) = tm(Channel::LL, n);
    T(i, d + i) = tm(Channel::TL, n);
    T(d + i, i) = tm(Channel::LT, n);
    T(d + i, d + i) = tm(Channel::TT, n);
  }
  return T;
}

Eigen::MatrixXcd blockQbar(cplx xi, const HostMedium& host, double b, int N) {
  const int d = 2 * N + 1;
  Eigen::MatrixXcd Q = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
  const auto qL = qbarSequence(2 * N, Wave::L, xi, host, b);
  const auto qT = qbarSequence(2 * N, Wave::T, xi, host, b);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const auto p = static_cast<std::size_t>(std::abs(i - j));
      Q(i, j) = qL[p];
      Q(d + i, d + j) = qT[p];
    }
  }
  return Q;
}

MatrixM matrixM(const TMatrix& tm, const HostMedium& host, const Mixture& mix, cplx xi, int Ntr) {
  requireTruncation(tm, Ntr);
  // Rows of T beyond the T-matrix order vanish, so those modes decouple from
  // the solve exactly; the system is assembled on |n| <= order.
  const int N = tm.order();
  const int d = 2 * N + 1;
  const cplx eps = epsilonOf(mix);
  const Eigen::MatrixXcd T = blockT(tm, N);
  Eigen::MatrixXcd E = Eigen::MatrixXcd::Zero(2 * d, 2);
  E.block(0, 0, d, 1).setOnes();
  E.block(d, 1, d, 1).setOnes();
  const Eigen::MatrixXcd TE = T * E;

  Eigen::MatrixXcd X;
  if (eps == cplx(0.0, 0.0)) {
    X = TE;
  } else {
    const Eigen::MatrixXcd Q = blockQbar(xi, host, mix.b, N);
    const Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(2 * d, 2 * d) - eps * T * Q;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    const double rc = lu.rcond();
    if (!(rc > 1e-14)) {
      throw ConditioningError("I - eps T Qbar is singular near xi", -1, rc);
    }
    X = lu.solve(TE);
  }
  const Eigen::MatrixXcd M = E.transpose() * X;
  return {M(0, 0), M(0, 1), M(1, 0), M(1, 1)};
}

cplx dispersionF(cplx xi, const TMatrix& tm, const HostMedium& host, const Mixture& mix, int Ntr) {
  const MatrixM M = matrixM(tm, host, mix, xi, Ntr);
  const cplx eps = epsilonOf(mix);
  const cplx yL = xi * xi - host.kL * host.kL;
  const cplx yT = xi * xi - host.kT * host.kT;
  return (yL - eps * M.LL) * (yT - eps * M.TT) - eps * eps * M.LT * M.TL;
}

Eigen::MatrixXcd modalSystem(cplx xi, const TMatrix& tm, const HostMedium& host,
                             const Mixture& mix, int Ntr) {
  requireTruncation(tm, Ntr);
  const int d = 2 * Ntr + 1;
  const cplx eps = epsilonOf(mix);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(2 * d, 2 * d);
  if (eps == cplx(0.0, 0.0)) return A;
  const cplx yL = xi * xi - host.kL * host.kL;
  const cplx yT = xi * xi - host.kT * host.kT;
  if (yL == cplx(0.0, 0.0) || yT == cplx(0.0, 0.0)) {
    throw PoleError("modal system evaluated at a host wavenumber");
  }
  const Eigen::MatrixXcd T = blockT(tm, Ntr);
  const Eigen::MatrixXcd Q = blockQbar(xi, host, mix.b, Ntr);
  A -= eps * Q * T;
  // e_L e_L^t T: every L row receives the column sums of the L rows of T.
  const Eigen::RowVectorXcd sumL = T.topRows(d).colwise().sum();
  const Eigen::RowVectorXcd sumT = T.bottomRows(d).colwise().sum();
  for (int i = 0; i < d; ++i) {
    A.row(i) -= (eps / yL) * sumL;
    A.row(d + i) -= (eps / yT) * sumT;
  }
  return A;
}

cplx applyBranchConvention(cplx xi, double kL) {
  if (!(xi.real() > 0.0)) {
    throw ConvergenceError("root has non-positive real part", {});
  }
  if (xi.imag() < 0.0) {
    if (xi.imag() > -1e-12 * kL) return {xi.real(), 0.0};
    throw ConvergenceError("root has negative imaginary part (growing wave)", {});
  }
  return xi;
}

namespace {

BranchRoot newton(const std::function<cplx(cplx)>& F, cplx seed, double kScale, double tol,
                  int maxIter) {
  BranchRoot r;
  cplx x = seed;
  cplx prevX{};
  cplx prevF{};
  bool havePrev = false;
  const double h = 1e-6 * kScale;
  for (int it = 0; it <= maxIter; ++it) {
    const cplx fx = F(x);
    r.history.push_back(std::abs(fx));
    if (std::abs(fx) < tol) {
      r.xi = x;
      r.residual = std::abs(fx);
      r.iterations = it;
      return r;
    }
    if (it == maxIter) break;
    cplx d = (F(x + h) - F(x - h)) / (2.0 * h);
    if (!std::isfinite(std::abs(d)) || d == cplx(0.0, 0.0)) {
      if (!havePrev) throw ConvergenceError("vanishing derivative at seed", r.history);
      d = (fx - prevF) / (x - prevX);  // secant fallback
    }
    cplx step = fx / d;
    // Damping: cap the step and backtrack while |F| grows.
    const double cap = 0.25 * kScale;
    if (std::abs(step) > cap) step *= cap / std::abs(step);
    cplx trial = x - step;
    for (int k = 0; k < 6; ++k) {
      const cplx ft = F(trial);
      if (std::isfinite(std::abs(ft)) && std::abs(ft) <= std::abs(fx)) break;
      step *= 0.5;
      trial = x - step;
    }
    prevX = x;
    prevF = fx;
    havePrev = true;
    x = trial;
    if (std::abs(x - prevX) <= 1e-16 * std::abs(x)) {
      // Stagnated at machine resolution; accept if within a modest factor.
      const double fr = std::abs(F(x));
      r.history.push_back(fr);
      if (fr < 1e3 * tol) {
        r.xi = x;
        r.residual = fr;
        r.iterations = it + 1;
        return r;
      }
      break;
    }
  }
  throw ConvergenceError("Newton iteration did not converge", r.history);
}

BranchRoot muller(const std::function<cplx(cplx)>& F, cplx seed, double kScale, double tol,
                  int maxIter) {
  BranchRoot r;
  cplx x0 = seed - 1e-3 * kScale;
  cplx x1 = seed + 1e-3 * kScale;
  cplx x2 = seed;
  cplx f0 = F(x0), f1 = F(x1), f2 = F(x2);
  for (int it = 0; it <= maxIter; ++it) {
    r.history.push_back(std::abs(f2));
    if (std::abs(f2) < tol) {
      r.xi = x2;
      r.residual = std::abs(f2);
      r.iterations = it;
      return r;
    }
    if (it == maxIter) break;
    const cplx h1 = x1 - x0, h2 = x2 - x1;
    const cplx d1 = (f1 - f0) / h1, d2 = (f2 - f1) / h2;
    const cplx a = (d2 - d1) / (h2 + h1);
    const cplx b = a * h2 + d2;
    const cplx disc = std::sqrt(b * b - 4.0 * a * f2);
    const cplx den = (std::abs(b + disc) > std::abs(b - disc)) ? b + disc : b - disc;
    if (den == cplx(0.0, 0.0)) break;
    const cplx x3 = x2 - 2.0 * f2 / den;
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f2;
    x2 = x3;
    f2 = F(x2);
  }
  throw ConvergenceError("Muller iteration did not converge", r.history);
}

cplx expansionSeed(const TMatrix& tm, const HostMedium& host, const Mixture& mix,
                   Polarization pol) {
  const cplx x2 = expandOrder2(tm, host, mix, pol).xiSquared;
  cplx s = std::sqrt(x2);
  if (s.real() < 0.0) s = -s;
  return s;
}

}  // namespace

BranchRoot solveBranch(const std::function<cplx(cplx)>& F, cplx seed, double kScale,
                       double tolerance, const SolverOptions& options) {
  if (options.method == RootMethod::Muller) {
    return muller(F, seed, kScale, tolerance, options.maxIterations);
  }
  return newton(F, seed, kScale, tolerance, options.maxIterations);
}

EffectiveRoots solveRoots(const TMatrix& tm, const HostMedium& host, const Mixture& mix,
                          const SolverOptions& options) {
  host.validate();
  mix.validate();
  const int Ntr = options.truncation > 0 ? options.truncation : defaultTruncation(tm, host, mix);
  requireTruncation(tm, Ntr);
  const double tol = options.relTolerance * std::pow(host.kT, 4);
  auto F = [&](cplx xi) { return dispersionF(xi, tm, host, mix, Ntr); };

  const cplx seedP = std::isnan(options.seedP.real())
                         ? expansionSeed(tm, host, mix, Polarization::P)
                         : options.seedP;
  const cplx seedSV = std::isnan(options.seedSV.real())
                          ? expansionSeed(tm, host, mix, Polarization::SV)
                          : options.seedSV;

  BranchRoot p = solveBranch(F, seedP, host.kL, tol, options);
  BranchRoot s = solveBranch(F, seedSV, host.kL, tol, options);
  p.xi = applyBranchConvention(p.xi, host.kL);
  s.xi = applyBranchConvention(s.xi, host.kL);

  if (std::abs(p.xi - s.xi) < 1e-8 * std::abs(p.xi)) {
    throw DegenerateRootsError("quasi-P and quasi-SV iterations converged to the same root");
  }
  // The root nearest kL is the quasi-P wave.
  if (std::abs(s.xi - host.kL) < std::abs(p.xi - host.kL)) std::swap(p, s);

  EffectiveRoots out;
  out.xi = p.xi;
  out.xiPrime = s.xi;
  out.residualP = p.residual;
  out.residualSV = s.residual;
  out.iterationsP = p.iterations;
  out.iterationsSV = s.iterations;
  out.truncationUsed = Ntr;
  out.orderUsed = tm.order();
  out.historyP = std::move(p.history);
  out.historySV = std::move(s.history);
  return out;
}

EffectiveRoots solveRootsAdaptive(const std::function<TMatrix(int)>& builder, int startOrder,
                                  const HostMedium& host, const Mixture& mix,
                                  const SolverOptions& options, double relStability,
                                  int maxOrder) {
  int order = std::max(1, startOrder);
  SolverOptions opt = options;
  opt.truncation = 0;
  EffectiveRoots prev = solveRoots(builder(order), host, mix, opt);
  while (order < maxOrder) {
    order = std::min(2 * order, maxOrder);
    opt.seedP = prev.xi;
    opt.seedSV = prev.xiPrime;
    EffectiveRoots cur = solveRoots(builder(order), host, mix, opt);
    const bool stable = std::abs(cur.xi - prev.xi) <= relStability * std::abs(cur.xi) &&
                        std::abs(cur.xiPrime - prev.xiPrime) <= relStability * std::abs(cur.xiPrime);
    if (stable) return cur;
    prev = std::move(cur);
  }
  throw ConvergenceError("roots not stable under order doubling up to " + std::to_string(maxOrder),
                         {});
}

}  // namespace cohscat
