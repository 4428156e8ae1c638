#include "cohscat/highfreq.hpp"

#include <cmath>
#include <numbers>

#include "cohscat/errors.hpp"

namespace cohscat {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

// P (k - xi) and Q (k + xi): the coefficients with their poles removed.
struct Cleared {
  cplx Pt, Qt;
};

Cleared cleared(HighFreqVariant v, cplx xi, double k, const Mixture& mix) {
  const double n0 = mix.n0;
  if (v == HighFreqVariant::WatermanTruell) {
    const cplx c = 2.0 * n0 / (I * k);
    return {c, c};
  }
  const cplx root = std::sqrt(k / xi);
  const double b = mix.b;
  return {2.0 * n0 / (I * k) * root * std::exp(I * (k - xi) * b),
          -2.0 * n0 / k * root * std::exp(I * (k + xi) * b)};
}

// Rows multiplied by (kL - xi), (kL + xi), (kT - xi), (kT + xi).
Eigen::Matrix4cd clearedMatrix(HighFreqVariant v, cplx xi, const HostMedium& host,
                               const Mixture& mix, const FarFieldPair& ff) {
  const Cleared L = cleared(v, xi, host.kL, mix);
  const Cleared T = cleared(v, xi, host.kT, mix);
  const cplx LL0 = ff.f0(Channel::LL), LLp = ff.fpi(Channel::LL);
  const cplx TL0 = ff.f0(Channel::TL), TLp = ff.fpi(Channel::TL);
  const cplx LT0 = ff.f0(Channel::LT), LTp = ff.fpi(Channel::LT);
  const cplx TT0 = ff.f0(Channel::TT), TTp = ff.fpi(Channel::TT);
  Eigen::Matrix4cd M;
  M << (host.kL - xi) + LL0 * L.Pt, LLp * L.Pt, TL0 * L.Pt, TLp * L.Pt,
      LLp * L.Qt, (host.kL + xi) + LL0 * L.Qt, TLp * L.Qt, TL0 * L.Qt,
      LT0 * T.Pt, LTp * T.Pt, (host.kT - xi) + TT0 * T.Pt, TTp * T.Pt,
      LTp * T.Qt, LT0 * T.Qt, TTp * T.Qt, (host.kT + xi) + TT0 * T.Qt;
  return M;
}

cplx clearedUncoupled(HighFreqVariant v, Polarization pol, cplx xi, const HostMedium& host,
                      const Mixture& mix, const FarFieldPair& ff) {
  const double k = pol == Polarization::P ? host.kL : host.kT;
  const Channel ch = pol == Polarization::P ? Channel::LL : Channel::TT;
  const Cleared c = cleared(v, xi, k, mix);
  const cplx f0 = ff.f0(ch), fpi = ff.fpi(ch);
  return ((k - xi) + f0 * c.Pt) * ((k + xi) + f0 * c.Qt) - fpi * fpi * c.Pt * c.Qt;
}

cplx seedFor(Polarization pol, const FarFieldPair& ff, const HostMedium& host, double n0) {
  const double k = pol == Polarization::P ? host.kL : host.kT;
  const Channel ch = pol == Polarization::P ? Channel::LL : Channel::TT;
  cplx s = std::sqrt(k * k - 4.0 * I * n0 * ff.f0(ch));
  return s.real() < 0.0 ? -s : s;
}

}  // namespace

const char* variantName(HighFreqVariant v) {
  return v == HighFreqVariant::HighKB ? "high-kb" : "waterman-truell";
}

PQCoefficients pqCoefficients(HighFreqVariant variant, cplx xi, const HostMedium& host,
                              const Mixture& mix) {
  PQCoefficients pq;
  pq.variant = variant;
  auto one = [&](double k, cplx& P, cplx& Q) {
    if (std::abs(xi - k) < 1e-10 * k || std::abs(xi + k) < 1e-10 * k) {
      throw PoleError("P/Q coefficients evaluated at xi = +-k");
    }
    const Cleared c = cleared(variant, xi, k, mix);
    P = c.Pt / (k - xi);
    Q = c.Qt / (k + xi);
  };
  one(host.kL, pq.PL, pq.QL);
  one(host.kT, pq.PT, pq.QT);
  return pq;
}

bool FarFieldPair::uncoupled(double tol) const {
  for (Channel c : {Channel::LT, Channel::TL}) {
    if (std::abs(f0(c)) > tol || std::abs(fpi(c)) > tol) return false;
  }
  return true;
}

FarFieldPair farFieldPair(const TMatrix& tm) {
  FarFieldPair ff;
  for (Channel c : kAllChannels) {
    cplx f0 = 0.0, fpi = 0.0;
    for (int n = -tm.order(); n <= tm.order(); ++n) {
      f0 += tm(c, n);
      fpi += (n % 2 == 0 ? 1.0 : -1.0) * tm(c, n);
    }
    ff.forward[static_cast<int>(c)] = f0;
    ff.backward[static_cast<int>(c)] = fpi;
  }
  return ff;
}

Eigen::Matrix4cd modalMatrix4(const PQCoefficients& pq, const FarFieldPair& ff) {
  const cplx LL0 = ff.f0(Channel::LL), LLp = ff.fpi(Channel::LL);
  const cplx TL0 = ff.f0(Channel::TL), TLp = ff.fpi(Channel::TL);
  const cplx LT0 = ff.f0(Channel::LT), LTp = ff.fpi(Channel::LT);
  const cplx TT0 = ff.f0(Channel::TT), TTp = ff.fpi(Channel::TT);
  Eigen::Matrix4cd M;
  M << 1.0 + LL0 * pq.PL, LLp * pq.PL, TL0 * pq.PL, TLp * pq.PL,
      LLp * pq.QL, 1.0 + LL0 * pq.QL, TLp * pq.QL, TL0 * pq.QL,
      LT0 * pq.PT, LTp * pq.PT, 1.0 + TT0 * pq.PT, TTp * pq.PT,
      LTp * pq.QT, LT0 * pq.QT, TTp * pq.QT, 1.0 + TT0 * pq.QT;
  return M;
}

cplx modalDeterminant4(const PQCoefficients& pq, const FarFieldPair& ff) {
  return modalMatrix4(pq, ff).determinant();
}

cplx uncoupledDeterminant(const PQCoefficients& pq, Polarization pol, const FarFieldPair& ff) {
  const bool p = pol == Polarization::P;
  const Channel ch = p ? Channel::LL : Channel::TT;
  const cplx P = p ? pq.PL : pq.PT;
  const cplx Q = p ? pq.QL : pq.QT;
  const cplx f0 = ff.f0(ch), fpi = ff.fpi(ch);
  return (1.0 + f0 * P) * (1.0 + f0 * Q) - fpi * fpi * P * Q;
}

cplx watermanTruellClosedForm(Polarization pol, const FarFieldPair& ff, const HostMedium& host,
                              double n0) {
  const double k = pol == Polarization::P ? host.kL : host.kT;
  const Channel ch = pol == Polarization::P ? Channel::LL : Channel::TT;
  const cplx c = -2.0 * I * n0 / k;
  const cplx a = k + c * ff.f0(ch);
  const cplx d = c * ff.fpi(ch);
  return a * a - d * d;
}

cplx uncoupledRoot(HighFreqVariant variant, Polarization pol, const FarFieldPair& ff,
                   const HostMedium& host, const Mixture& mix) {
  host.validate();
  const double k = pol == Polarization::P ? host.kL : host.kT;
  if (mix.n0 == 0.0) return k;
  SolverOptions opt;
  const auto F = [&](cplx xi) { return clearedUncoupled(variant, pol, xi, host, mix, ff); };
  const double tol = 1e-13 * k * k;
  const BranchRoot r = solveBranch(F, seedFor(pol, ff, host, mix.n0), host.kL, tol, opt);
  return applyBranchConvention(r.xi, host.kL);
}

HighFreqRoots solveHighFreq(HighFreqVariant variant, const TMatrix& tm, const HostMedium& host,
                            const Mixture& mix, const HighFreqOptions& options) {
  host.validate();
  mix.validate();
  const FarFieldPair ff = farFieldPair(tm);
  HighFreqRoots out;
  out.variant = variant;
  if (mix.n0 == 0.0) {
    out.xi = host.kL;
    out.xiPrime = host.kT;
    out.uncoupledPath = ff.uncoupled();
    return out;
  }
  if (!options.forceDeterminant && ff.uncoupled()) {
    out.uncoupledPath = true;
    out.xi = uncoupledRoot(variant, Polarization::P, ff, host, mix);
    out.xiPrime = uncoupledRoot(variant, Polarization::SV, ff, host, mix);
    out.residualP = std::abs(clearedUncoupled(variant, Polarization::P, out.xi, host, mix, ff));
    out.residualSV =
        std::abs(clearedUncoupled(variant, Polarization::SV, out.xiPrime, host, mix, ff));
    return out;
  }
  SolverOptions opt;
  opt.maxIterations = options.maxIterations;
  const auto F = [&](cplx xi) { return clearedMatrix(variant, xi, host, mix, ff).determinant(); };
  const double tol = options.relTolerance * std::pow(host.kT, 4);
  BranchRoot p = solveBranch(F, seedFor(Polarization::P, ff, host, mix.n0), host.kL, tol, opt);
  BranchRoot s = solveBranch(F, seedFor(Polarization::SV, ff, host, mix.n0), host.kL, tol, opt);
  p.xi = applyBranchConvention(p.xi, host.kL);
  s.xi = applyBranchConvention(s.xi, host.kL);
  if (std::abs(p.xi - s.xi) < 1e-8 * std::abs(p.xi)) {
    throw DegenerateRootsError("high-frequency branches converged to the same root");
  }
  if (std::abs(s.xi - host.kL) < std::abs(p.xi - host.kL)) std::swap(p, s);
  out.xi = p.xi;
  out.xiPrime = s.xi;
  out.residualP = p.residual;
  out.residualSV = s.residual;
  return out;
}

double eightUnknownResidual(HighFreqVariant variant, cplx xi, const TMatrix& tm,
                            const HostMedium& host, const Mixture& mix) {
  const FarFieldPair ff = farFieldPair(tm);
  const PQCoefficients pq = pqCoefficients(variant, xi, host, mix);
  const Eigen::Matrix4cd M = modalMatrix4(pq, ff);
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(M, Eigen::ComputeFullV);
  const Eigen::Vector4cd u = svd.matrixV().col(3);
  const cplx PLT = u(0), QLT = u(1), PTL = u(2), QTL = u(3);

  // Amplitudes with A_{-n} = A_n and A_{n+2} = A_n.
  cplx sumL = 0.0, altL = 0.0, sumT = 0.0, altT = 0.0;
  double ampNorm = 0.0;
  for (int n = -tm.order(); n <= tm.order(); ++n) {
    const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    const cplx AL = -PLT - sgn * QLT;
    const cplx AT = -PTL - sgn * QTL;
    ampNorm = std::max({ampNorm, std::abs(AL), std::abs(AT)});
    const cplx srcL = tm(Channel::LL, n) * AL + tm(Channel::TL, n) * AT;
    const cplx srcT = tm(Channel::TT, n) * AT + tm(Channel::LT, n) * AL;
    sumL += srcL;
    altL += sgn * srcL;
    sumT += srcT;
    altT += sgn * srcT;
  }
  const Eigen::Vector4cd r(PLT - pq.PL * sumL, QLT - pq.QL * altL, PTL - pq.PT * sumT,
                           QTL - pq.QT * altT);
  return r.norm() / std::max(ampNorm, u.norm());
}

}  // namespace cohscat
