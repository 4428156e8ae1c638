#include "cohscat/reflection.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "cohscat/errors.hpp"

namespace cohscat {

namespace {

const cplx I(0.0, 1.0);

cplx epsilonOf(const Mixture& mix) { return cplx(0.0, -4.0 * mix.n0); }

// (e_L^t T v, e_T^t T v) and the same with the parity matrix J applied.
struct Projections {
  cplx L, T, JL, JT;
};

Projections project(const Eigen::VectorXcd& v, const TMatrix& tm, int Ntr) {
  const int d = 2 * Ntr + 1;
  Projections p{0.0, 0.0, 0.0, 0.0};
  for (int n = -tm.order(); n <= tm.order(); ++n) {
    const int i = n + Ntr;
    const cplx aL = v(i), aT = v(d + i);
    const cplx sL = tm(Channel::LL, n) * aL + tm(Channel::TL, n) * aT;
    const cplx sT = tm(Channel::LT, n) * aL + tm(Channel::TT, n) * aT;
    const double j = (n % 2 == 0) ? 1.0 : -1.0;
    p.L += sL;
    p.T += sT;
    p.JL += j * sL;
    p.JT += j * sT;
  }
  return p;
}

// eps (xi + k) / (2 k (xi^2 - k^2)).
cplx extinctionWeight(cplx eps, cplx xi, double k) {
  return eps * (xi + k) / (2.0 * k * (xi * xi - k * k));
}

// eps (k - xi) / (2 k (xi^2 - k^2)).
cplx reflectionWeight(cplx eps, cplx xi, double k) {
  return eps * (k - xi) / (2.0 * k * (xi * xi - k * k));
}

Eigen::Matrix2cd extinctionMatrix(const Projections& pa, const Projections& pb, cplx xi,
                                  cplx xiPrime, const HostMedium& host, const Mixture& mix) {
  const cplx eps = epsilonOf(mix);
  Eigen::Matrix2cd E;
  E << extinctionWeight(eps, xi, host.kL) * pa.L, extinctionWeight(eps, xiPrime, host.kL) * pb.L,
      extinctionWeight(eps, xi, host.kT) * pa.T, extinctionWeight(eps, xiPrime, host.kT) * pb.T;
  return E;
}

}  // namespace

ModalAmplitudes nullVector(cplx xi, const TMatrix& tm, const HostMedium& host, const Mixture& mix,
                           int Ntr) {
  const Eigen::MatrixXcd A = modalSystem(xi, tm, host, mix, Ntr);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const Eigen::Index last = s.size() - 1;
  ModalAmplitudes out;
  out.truncation = Ntr;
  out.sigmaMin = s(last);
  out.sigmaNext = last > 0 ? s(last - 1) : 0.0;
  const double ratio = out.sigmaMin > 0.0 ? out.sigmaNext / out.sigmaMin
                                          : std::numeric_limits<double>::infinity();
  if (!(ratio >= kNullSeparation)) {
    throw AmbiguityError("null direction of the modal system is not isolated", ratio);
  }
  Eigen::VectorXcd v = svd.matrixV().col(last);
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  v /= v(imax);
  out.residual = (A * v).norm() / v.norm();
  out.v = std::move(v);
  return out;
}

ExtinctionScales extinctionScales(const ModalAmplitudes& a, const ModalAmplitudes& b, cplx xi,
                                  cplx xiPrime, cplx AL, cplx AT, const TMatrix& tm,
                                  const HostMedium& host, const Mixture& mix) {
  const Projections pa = project(a.v, tm, a.truncation);
  const Projections pb = project(b.v, tm, b.truncation);
  const Eigen::Matrix2cd E = extinctionMatrix(pa, pb, xi, xiPrime, host, mix);
  Eigen::FullPivLU<Eigen::Matrix2cd> lu(E);
  const double scale = E.cwiseAbs().maxCoeff();
  if (!lu.isInvertible() || std::abs(E.determinant()) < 1e-14 * scale * scale) {
    throw ConditioningError("extinction system is singular", -1, 0.0);
  }
  const Eigen::Vector2cd s = lu.solve(Eigen::Vector2cd(AL, AT));
  return {s(0), s(1)};
}

std::array<cplx, 2> extinctionResidual(const ModalAmplitudes& a, const ModalAmplitudes& b,
                                       cplx xi, cplx xiPrime, const ExtinctionScales& s,
                                       const TMatrix& tm, const HostMedium& host,
                                       const Mixture& mix) {
  const Projections pa = project(a.v, tm, a.truncation);
  const Projections pb = project(b.v, tm, b.truncation);
  const Eigen::Vector2cd lhs =
      extinctionMatrix(pa, pb, xi, xiPrime, host, mix) * Eigen::Vector2cd(s.quasiP, s.quasiSV);
  return {lhs(0), lhs(1)};
}

std::array<cplx, 2> reflectedAmplitudes(const ModalAmplitudes& a, const ModalAmplitudes& b,
                                        cplx xi, cplx xiPrime, const ExtinctionScales& s,
                                        const TMatrix& tm, const HostMedium& host,
                                        const Mixture& mix) {
  const cplx eps = epsilonOf(mix);
  const Projections pa = project(a.v, tm, a.truncation);
  const Projections pb = project(b.v, tm, b.truncation);
  const cplx RL = reflectionWeight(eps, xi, host.kL) * pa.JL * s.quasiP +
                  reflectionWeight(eps, xiPrime, host.kL) * pb.JL * s.quasiSV;
  const cplx RT = reflectionWeight(eps, xi, host.kT) * pa.JT * s.quasiP +
                  reflectionWeight(eps, xiPrime, host.kT) * pb.JT * s.quasiSV;
  return {RL, RT};
}

ReflectionResult reflectionExact(const TMatrix& tm, const HostMedium& host, const Mixture& mix,
                                 const EffectiveRoots& roots, int Ntr) {
  ReflectionResult out;
  out.roots = roots;
  if (mix.n0 == 0.0) {
    out.R = {0.0, 0.0, 0.0, 0.0};
    return out;
  }
  const ModalAmplitudes a = nullVector(roots.xi, tm, host, mix, Ntr);
  const ModalAmplitudes b = nullVector(roots.xiPrime, tm, host, mix, Ntr);
  out.sigmaMinP = a.sigmaMin;
  out.sigmaMinSV = b.sigmaMin;
  out.nullResidual = std::max(a.residual, b.residual);

  const auto sP = extinctionScales(a, b, roots.xi, roots.xiPrime, 1.0, 0.0, tm, host, mix);
  const auto sS = extinctionScales(a, b, roots.xi, roots.xiPrime, 0.0, 1.0, tm, host, mix);
  const auto rP = reflectedAmplitudes(a, b, roots.xi, roots.xiPrime, sP, tm, host, mix);
  const auto rS = reflectedAmplitudes(a, b, roots.xi, roots.xiPrime, sS, tm, host, mix);
  out.R = {rP[0], rP[1], rS[0], rS[1]};
  return out;
}

ReflectionResult reflectionExact(const TMatrix& tm, const HostMedium& host, const Mixture& mix,
                                 const SolverOptions& options) {
  const EffectiveRoots roots = solveRoots(tm, host, mix, options);
  return reflectionExact(tm, host, mix, roots, roots.truncationUsed);
}

ReflectionSet reflectionLeading(const TMatrix& tm, const HostMedium& host, double n0) {
  const cplx pi(std::numbers::pi, 0.0);
  auto R = [&](Channel c, double ka, double kb) {
    return 2.0 * I * n0 * farField(tm, c, pi) / ((ka + kb) * kb);
  };
  return {R(Channel::LL, host.kL, host.kL), R(Channel::LT, host.kL, host.kT),
          R(Channel::TL, host.kT, host.kL), R(Channel::TT, host.kT, host.kT)};
}

}  // namespace cohscat
