#include "cohscat/asymptotics.hpp"

#include <cmath>
#include <numbers>

#include "cohscat/errors.hpp"
#include "cohscat/quadrature.hpp"

namespace cohscat {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

// Quantities seen from the branch being expanded: "A" is the wave whose
// wavenumber is perturbed, "B" the other one. For SV the T-matrix is
// relabelled so that the LL channel always means A -> A.
struct Oriented {
  TMatrix tm;
  double kA;
  double kB;
};

Oriented orient(const TMatrix& tm, const HostMedium& host, Polarization pol) {
  host.validate();
  if (pol == Polarization::P) return {tm, host.kL, host.kT};
  return {interchangeLT(tm), host.kT, host.kL};
}

cplx channelSum(const TMatrix& tm, Channel c) {
  cplx s = 0.0;
  for (const auto& v : tm.channel(c)) s += v;
  return s;
}

// sum_{m,n} w(|m-n|) x_m y_n for sequences indexed n = -N..N.
template <class W>
cplx toeplitzForm(const std::vector<cplx>& x, const std::vector<cplx>& y, W&& w) {
  const int d = static_cast<int>(x.size());
  cplx s = 0.0;
  for (int i = 0; i < d; ++i) {
    cplx row = 0.0;
    for (int j = 0; j < d; ++j) row += w(std::abs(i - j)) * y[static_cast<std::size_t>(j)];
    s += x[static_cast<std::size_t>(i)] * row;
  }
  return s;
}

struct ModalBlocks {
  Eigen::MatrixXcd T, Q, Qp;
  Eigen::VectorXcd eA, eB;
};

// Block T, Qbar and dQbar/d(xi^2) at xi = kA in the oriented frame.
ModalBlocks modalBlocksAtKA(const Oriented& o, double b) {
  const int N = o.tm.order();
  const int d = 2 * N + 1;
  const double kA = o.kA, kB = o.kB;
  const double y = kA * kA - kB * kB;
  ModalBlocks m;
  m.T = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
  for (int n = -N; n <= N; ++n) {
    const int i = n + N;
    m.T(i, i) = o.tm(Channel::LL, n);
    m.T(i, d + i) = o.tm(Channel::TL, n);
    m.T(d + i, i) = o.tm(Channel::LT, n);
    m.T(d + i, d + i) = o.tm(Channel::TT, n);
  }
  std::vector<cplx> qA(2 * N + 1), qpA(2 * N + 1), qB(2 * N + 1), qpB(2 * N + 1);
  const auto NB = holeKernelSequence(2 * N, kA, kB, b);
  const auto dNB = holeKernelDerivativeSequence(2 * N, kA, kB, b);
  for (int p = 0; p <= 2 * N; ++p) {
    const auto up = static_cast<std::size_t>(p);
    const auto lim = qbarAtK(p, kA, b);
    qA[up] = lim.D0 / (kA * kA);
    qpA[up] = lim.D1 / (kA * kA * kA * kA);
    const cplx num = I * kPi / 2.0 * NB[up] - 1.0;
    qB[up] = num / y;
    const cplx dNdxi2 = dNB[up] / (2.0 * kA);
    qpB[up] = I * kPi / 2.0 * dNdxi2 / y - num / (y * y);
  }
  m.Q = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
  m.Qp = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const auto p = static_cast<std::size_t>(std::abs(i - j));
      m.Q(i, j) = qA[p];
      m.Q(d + i, d + j) = qB[p];
      m.Qp(i, j) = qpA[p];
      m.Qp(d + i, d + j) = qpB[p];
    }
  }
  m.eA = Eigen::VectorXcd::Zero(2 * d);
  m.eB = Eigen::VectorXcd::Zero(2 * d);
  m.eA.head(d).setOnes();
  m.eB.tail(d).setOnes();
  return m;
}

ExpansionResult order2Oriented(const Oriented& o, const Mixture& mix) {
  const int N = o.tm.order();
  const double kA = o.kA, kB = o.kB;
  std::vector<cplx> D0(2 * N + 1);
  for (int p = 0; p <= 2 * N; ++p) D0[static_cast<std::size_t>(p)] = qbarAtK(p, kA, mix.b).D0;
  const auto NB = holeKernelSequence(2 * N, kA, kB, mix.b);

  const auto& LL = o.tm.channel(Channel::LL);
  const cplx s1 = toeplitzForm(LL, LL, [&](int p) { return D0[static_cast<std::size_t>(p)]; });
  const cplx s2 = toeplitzForm(o.tm.channel(Channel::TL), o.tm.channel(Channel::LT),
                               [&](int p) { return NB[static_cast<std::size_t>(p)]; });
  const cplx d1 = -4.0 * I * channelSum(o.tm, Channel::LL);
  const cplx d2 = -16.0 / (kA * kA) * s1 - 8.0 * I * kPi / (kA * kA - kB * kB) * s2;

  ExpansionResult r;
  r.order0 = kA * kA;
  r.order1 = d1 * mix.n0;
  r.order2 = d2 * mix.n0 * mix.n0;
  r.xiSquared = r.order0 + r.order1 + r.order2;
  r.regime = Regime::General;
  return r;
}

cplx selfIntegrand(const TMatrix& tm, Channel c, double theta) {
  if (theta < 1e-6) {
    // cot(theta/2) ~ 2/theta and h'(theta) ~ h''(0) theta.
    const int N = tm.order();
    cplx f0 = 0.0, f1 = 0.0, f2 = 0.0;
    for (int n = -N; n <= N; ++n) {
      const cplx t = tm(c, n);
      f0 += t;
      f1 += I * static_cast<double>(n) * t;
      f2 -= static_cast<double>(n) * n * t;
    }
    return 2.0 * (2.0 * f2 * f0 - 2.0 * f1 * f1);
  }
  const cplx fp = farField(tm, c, theta);
  const cplx fm = farField(tm, c, -theta);
  const cplx dp = farFieldDerivative(tm, c, theta);
  const cplx dm = farFieldDerivative(tm, c, -theta);
  const cplx hprime = dp * fm - fp * dm;
  return hprime / std::tan(0.5 * theta);
}

}  // namespace

const char* regimeName(Regime r) {
  switch (r) {
    case Regime::General: return "general";
    case Regime::LongWavelength: return "longWavelength";
    case Regime::LintonMartin: return "lintonMartin";
  }
  return "?";
}

cplx ExpansionResult::xi() const {
  cplx s = std::sqrt(xiSquared);
  return s.real() < 0.0 ? -s : s;
}

TMatrix interchangeLT(const TMatrix& tm) {
  TMatrix out(tm.order());
  out.channel(Channel::LL) = tm.channel(Channel::TT);
  out.channel(Channel::TT) = tm.channel(Channel::LL);
  out.channel(Channel::LT) = tm.channel(Channel::TL);
  out.channel(Channel::TL) = tm.channel(Channel::LT);
  return out;
}

ExpansionResult expandOrder2(const TMatrix& tm, const HostMedium& host, const Mixture& mix,
                             Polarization pol) {
  ExpansionResult r = order2Oriented(orient(tm, host, pol), mix);
  r.kTb = host.kT * mix.b;
  return r;
}

Order3Terms expandOrder3Correction(const TMatrix& tm, const HostMedium& host, const Mixture& mix,
                                   Polarization pol) {
  const Oriented o = orient(tm, host, pol);
  const ModalBlocks m = modalBlocksAtKA(o, mix.b);
  const double delta = o.kA * o.kA - o.kB * o.kB;
  const Eigen::VectorXcd TeA = m.T * m.eA;
  const Eigen::VectorXcd TeB = m.T * m.eB;
  const cplx y1 = m.eA.dot(TeA);  // f^AA(0); dot() conjugates, eA is real
  const cplx t0 = m.eB.dot(TeB);
  const cplx fAB = m.eA.dot(TeB);  // e_A^t T e_B
  const cplx fBA = m.eB.dot(TeA);

  Order3Terms t;
  t.qbarProduct = m.eA.dot(m.T * (m.Q * (m.T * (m.Q * TeA))));
  t.derivative = y1 * m.eA.dot(m.T * (m.Qp * TeA));
  t.couplingSquare = (t0 - y1) * fAB * fBA / (delta * delta);
  t.crossA = fAB * m.eB.dot(m.T * (m.Q * TeA)) / delta;
  t.crossB = fBA * m.eA.dot(m.T * (m.Q * TeB)) / delta;
  return t;
}

ExpansionResult expandOrder3(const TMatrix& tm, const HostMedium& host, const Mixture& mix,
                             Polarization pol) {
  ExpansionResult r = expandOrder2(tm, host, mix, pol);
  const cplx d3 = expandOrder3Correction(tm, host, mix, pol).d3();
  r.order3 = d3 * mix.n0 * mix.n0 * mix.n0;
  r.xiSquared += *r.order3;
  return r;
}

ExpansionResult expandLongWavelength(const TMatrix& tm, const HostMedium& host, double n0,
                                     Polarization pol) {
  const Oriented o = orient(tm, host, pol);
  const double kA = o.kA, kB = o.kB;
  const double ratio = kA / kB;
  const auto& LL = o.tm.channel(Channel::LL);
  const cplx self = toeplitzForm(LL, LL, [](int p) { return static_cast<double>(p); });
  const cplx coupling = toeplitzForm(o.tm.channel(Channel::LT), o.tm.channel(Channel::TL),
                                     [&](int p) { return std::pow(ratio, p); });
  const cplx d1 = -4.0 * I * channelSum(o.tm, Channel::LL);
  const cplx d2 = -8.0 / (kA * kA) * self - 16.0 / (kA * kA - kB * kB) * coupling;
  ExpansionResult r;
  r.order0 = kA * kA;
  r.order1 = d1 * n0;
  r.order2 = d2 * n0 * n0;
  r.xiSquared = r.order0 + r.order1 + r.order2;
  r.regime = Regime::LongWavelength;
  return r;
}

cplx gLT(const TMatrix& tm, cplx theta) {
  return farField(tm, Channel::LT, theta) * farField(tm, Channel::TL, -theta) +
         farField(tm, Channel::TL, theta) * farField(tm, Channel::LT, -theta);
}

cplx couplingSeriesSL(const TMatrix& tm, double kappa) {
  const auto& LT = tm.channel(Channel::LT);
  const auto& TL = tm.channel(Channel::TL);
  auto w = [&](int p) { return std::pow(kappa, -p); };
  return 0.5 * (toeplitzForm(LT, TL, w) + toeplitzForm(TL, LT, w));
}

cplx couplingIntegralSL(const TMatrix& tm, double kappa, double relTol, int* nodesUsed) {
  auto f = [&](double th) {
    return gLT(tm, th) / (1.0 - 2.0 * kappa * std::cos(th) + kappa * kappa);
  };
  const auto res = quadrature::integrateDoubling(f, 0.0, kPi, relTol);
  if (nodesUsed) *nodesUsed = res.nodes;
  return (kappa * kappa - 1.0) / (2.0 * kPi) * res.value;
}

CouplingSums couplingSums(const TMatrix& tm, const HostMedium& host) {
  host.validate();
  CouplingSums s;
  s.kappa = host.kappa();
  s.SL = couplingSeriesSL(tm, s.kappa);
  s.SLIntegral = couplingIntegralSL(tm, s.kappa, 1e-12, &s.nodes);
  s.gAtImaginary = gLT(tm, cplx(0.0, std::log(s.kappa)));
  s.ST = s.gAtImaginary - s.SL;
  return s;
}

cplx selfTermSeries(const TMatrix& tm, Channel c, double k) {
  const auto& t = tm.channel(c);
  return -8.0 / (k * k) * toeplitzForm(t, t, [](int p) { return static_cast<double>(p); });
}

cplx selfTermIntegral(const TMatrix& tm, Channel c, double k, double relTol, int* nodesUsed) {
  const auto res = quadrature::integrateDoubling(
      [&](double th) { return selfIntegrand(tm, c, th); }, 0.0, kPi, relTol);
  if (nodesUsed) *nodesUsed = res.nodes;
  return 8.0 / (kPi * k * k) * res.value;
}

cplx lintonMartinScalar(const TMatrix& tm, Channel c, double k, double n0, SelfTermPath path) {
  const cplx self =
      path == SelfTermPath::Series ? selfTermSeries(tm, c, k) : selfTermIntegral(tm, c, k);
  return k * k - 4.0 * I * n0 * farField(tm, c, 0.0) + n0 * n0 * self;
}

LintonMartinResult lintonMartinElastic(const TMatrix& tm, const HostMedium& host, double n0,
                                       SelfTermPath path) {
  host.validate();
  const double kL = host.kL, kT = host.kT;
  LintonMartinResult r;
  if (path == SelfTermPath::Series) {
    r.selfP = selfTermSeries(tm, Channel::LL, kL);
    r.selfSV = selfTermSeries(tm, Channel::TT, kT);
  } else {
    r.selfP = selfTermIntegral(tm, Channel::LL, kL);
    r.selfSV = selfTermIntegral(tm, Channel::TT, kT);
  }
  const auto integral = quadrature::integrateDoubling(
      [&](double th) { return gLT(tm, th) / (kT * kT - 2.0 * kL * kT * std::cos(th) + kL * kL); },
      0.0, kPi, 1e-13);
  r.coupling = 8.0 / kPi * integral.value;
  r.imaginaryAngleTerm =
      -16.0 / (kT * kT - kL * kL) * gLT(tm, cplx(0.0, std::log(host.kappa())));
  const double n2 = n0 * n0;
  r.xiSquared = kL * kL - 4.0 * I * n0 * farField(tm, Channel::LL, 0.0) + n2 * (r.selfP + r.coupling);
  r.xiPrimeSquared = kT * kT - 4.0 * I * n0 * farField(tm, Channel::TT, 0.0) +
                     n2 * (r.selfSV + r.coupling + r.imaginaryAngleTerm);
  return r;
}

}  // namespace cohscat
