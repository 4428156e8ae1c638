#include "cohscat/tmatrix.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cohscat/errors.hpp"
#include "cohscat/specfun.hpp"

namespace cohscat {

namespace {

using json = nlohmann::json;

constexpr double kRcondFloor = 1e-14;

// Cylinder function Z_n(x) and Z_n'(x) for one family, read from a
// precomputed sequence Z_0..Z_{nmax+1} using Z_{-n} = (-1)^n Z_n.
struct Cyl {
  cplx z;
  cplx zp;
};

Cyl pick(const std::vector<cplx>& seq, int n) {
  auto at = [&](int k) {
    const int m = std::abs(k);
    const cplx v = seq[static_cast<std::size_t>(m)];
    return (k < 0 && (m % 2)) ? -v : v;
  };
  return {at(n), 0.5 * (at(n - 1) - at(n + 1))};
}

// Displacement and traction of the mode-n potentials at r, e^{in theta}
// factored out. Rows: u_r, u_theta, sigma_rr, sigma_rtheta.
// L-type: phi = Z(k r);  T-type: psi = Z(k r); u = grad phi + curl(psi e_z).
Eigen::Vector4cd lColumn(const Cyl& c, double k, int n, double r, double mu, double rhoOmega2) {
  const cplx in(0.0, static_cast<double>(n));
  const double n2 = static_cast<double>(n) * n;
  Eigen::Vector4cd v;
  v(0) = k * c.zp;
  v(1) = in * c.z / r;
  v(2) = -rhoOmega2 * c.z + 2.0 * mu * (-k * c.zp / r + n2 * c.z / (r * r));
  v(3) = 2.0 * mu * in * (k * c.zp / r - c.z / (r * r));
  return v;
}

Eigen::Vector4cd tColumn(const Cyl& c, double k, int n, double r, double mu) {
  const cplx in(0.0, static_cast<double>(n));
  const double n2 = static_cast<double>(n) * n;
  Eigen::Vector4cd v;
  v(0) = in * c.z / r;
  v(1) = -k * c.zp;
  v(2) = 2.0 * mu * in * (k * c.zp / r - c.z / (r * r));
  v(3) = mu * (2.0 * k * c.zp / r + (k * k - 2.0 * n2 / (r * r)) * c.z);
  return v;
}

// Fields needed for every mode up to nmax.
struct BoundarySequences {
  std::vector<cplx> jL, hL, jT, hT;
  std::vector<cplx> jLin, jTin;  // inclusion interior only
};

BoundarySequences sequences(const HostMedium& host, double a, int nmax,
                            const InclusionMaterial* inc) {
  BoundarySequences s;
  s.jL = specfun::besselJSequence(nmax + 1, cplx(host.kL * a, 0.0));
  s.jT = specfun::besselJSequence(nmax + 1, cplx(host.kT * a, 0.0));
  s.hL = specfun::hankel1Sequence(nmax + 1, host.kL * a);
  s.hT = specfun::hankel1Sequence(nmax + 1, host.kT * a);
  if (inc) {
    s.jLin = specfun::besselJSequence(nmax + 1, cplx(inc->kL * a, 0.0));
    s.jTin = specfun::besselJSequence(nmax + 1, cplx(inc->kT * a, 0.0));
  }
  return s;
}

double rcondOf(const Eigen::PartialPivLU<Eigen::MatrixXcd>& lu) { return lu.rcond(); }

// Solves A x = rhs after scaling every column of A to unit max norm: the
// outgoing columns grow like (n/ka)^n while the regular ones decay, so the
// raw system is hopelessly scaled at high order even when well posed.
Eigen::MatrixXcd solveEquilibrated(Eigen::MatrixXcd A, const Eigen::MatrixXcd& rhs,
                                   const char* what, int n) {
  Eigen::VectorXd colScale(A.cols());
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    const double m = A.col(j).cwiseAbs().maxCoeff();
    colScale(j) = m > 0.0 ? 1.0 / m : 1.0;
  }
  A = A * colScale.asDiagonal();
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
  const double rc = rcondOf(lu);
  if (!(rc > kRcondFloor)) {
    throw ConditioningError(std::string(what) + " boundary system singular at mode " +
                                std::to_string(n),
                            n, rc);
  }
  return colScale.asDiagonal() * lu.solve(rhs);
}

// Returns {LL, LT, TL, TT} for mode n.
std::array<cplx, 4> cavityMode(const HostMedium& host, double a, int n,
                               const BoundarySequences& s) {
  const double mu = host.shearModulus();
  const double rw2 = host.rho * host.omega * host.omega;
  const double scale = a * a / mu;
  const auto hl = lColumn(pick(s.hL, n), host.kL, n, a, mu, rw2);
  const auto ht = tColumn(pick(s.hT, n), host.kT, n, a, mu);
  const auto jl = lColumn(pick(s.jL, n), host.kL, n, a, mu, rw2);
  const auto jt = tColumn(pick(s.jT, n), host.kT, n, a, mu);

  Eigen::MatrixXcd A(2, 2);
  A << hl(2), ht(2), hl(3), ht(3);
  A *= scale;
  Eigen::MatrixXcd rhs(2, 2);
  rhs << -jl(2), -jt(2), -jl(3), -jt(3);
  rhs *= scale;
  const Eigen::MatrixXcd x = solveEquilibrated(A, rhs, "cavity", n);
  // Column 0: unit L incidence -> (LL, LT); column 1: unit T incidence -> (TL, TT).
  return {x(0, 0), x(1, 0), x(0, 1), x(1, 1)};
}

std::array<cplx, 4> inclusionMode(const HostMedium& host, const InclusionMaterial& inc, double a,
                                  int n, const BoundarySequences& s) {
  const double mu = host.shearModulus();
  const double rw2 = host.rho * host.omega * host.omega;
  const double muIn = inc.rho * host.omega * host.omega / (inc.kT * inc.kT);
  const double rw2In = inc.rho * host.omega * host.omega;

  const auto hl = lColumn(pick(s.hL, n), host.kL, n, a, mu, rw2);
  const auto ht = tColumn(pick(s.hT, n), host.kT, n, a, mu);
  const auto jl = lColumn(pick(s.jL, n), host.kL, n, a, mu, rw2);
  const auto jt = tColumn(pick(s.jT, n), host.kT, n, a, mu);
  const auto il = lColumn(pick(s.jLin, n), inc.kL, n, a, muIn, rw2In);
  const auto it = tColumn(pick(s.jTin, n), inc.kT, n, a, muIn);

  Eigen::MatrixXcd A(4, 4);
  A.col(0) = hl;
  A.col(1) = ht;
  A.col(2) = -il;
  A.col(3) = -it;
  Eigen::MatrixXcd rhs(4, 2);
  rhs.col(0) = -jl;
  rhs.col(1) = -jt;
  // Displacement rows ~ 1/length, traction rows ~ mu/length^2.
  const Eigen::Vector4d rowScale(a, a, a * a / mu, a * a / mu);
  A = rowScale.asDiagonal() * A;
  rhs = rowScale.asDiagonal() * rhs;
  const Eigen::MatrixXcd x = solveEquilibrated(A, rhs, "inclusion", n);
  return {x(0, 0), x(1, 0), x(0, 1), x(1, 1)};
}

template <class ModeFn>
TMatrix assemble(int order, ModeFn&& mode) {
  TMatrix tm(order);
  for (int n = -order; n <= order; ++n) {
    const auto e = mode(n);
    for (Channel c : kAllChannels) {
      const cplx v = e[static_cast<int>(c)];
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw ConditioningError("non-finite T-matrix entry at mode " + std::to_string(n), n, 0.0);
      }
      tm.set(c, n, v);
    }
  }
  return tm;
}

template <class ModeFn>
int autoOrder(double kTa, double relTol, int maxOrder, ModeFn&& mode) {
  double peak = 0.0;
  const int floorOrder = static_cast<int>(std::ceil(kTa)) + 2;
  for (int n = 0; n <= maxOrder; ++n) {
    const auto e = mode(n);
    double m = 0.0;
    for (const auto& v : e) m = std::max(m, std::abs(v));
    peak = std::max(peak, m);
    if (n >= std::max(1, floorOrder) && m < relTol * peak) return n;
  }
  throw ConvergenceError("T-matrix entries do not decay below tolerance by order " +
                             std::to_string(maxOrder),
                         {});
}

// Runs search(cap) with a cap that grows from just above k a, so that
// Y_n is never tabulated far past the orders that matter (it overflows for
// n >> k a).
template <class Search>
int growingSearch(double ka, int maxOrder, Search&& search) {
  int cap = std::min(maxOrder, static_cast<int>(std::ceil(ka)) + 16);
  while (true) {
    try {
      return search(cap);
    } catch (const ConvergenceError&) {
      if (cap >= maxOrder) throw;
      cap = std::min(maxOrder, 2 * cap);
    }
  }
}

void checkRadius(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("cylinder radius must be positive");
}

void checkOrderArg(int order) {
  if (order < 0 || order > specfun::kMaxOrder - 1) {
    throw DomainError("T-matrix order out of range: " + std::to_string(order));
  }
}

}  // namespace

const char* channelName(Channel c) {
  switch (c) {
    case Channel::LL: return "LL";
    case Channel::LT: return "LT";
    case Channel::TL: return "TL";
    case Channel::TT: return "TT";
  }
  return "?";
}

HostMedium HostMedium::fromSpeeds(double rho, double cL, double cT, double omega) {
  if (!(cL > 0.0) || !(cT > 0.0)) throw DomainError("wave speeds must be positive");
  HostMedium h{omega / cL, omega / cT, rho, omega};
  h.validate();
  return h;
}

void HostMedium::validate() const {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError("omega must be positive");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("rho must be positive");
  if (!(kL > 0.0) || !(kT > kL) || !std::isfinite(kT)) {
    throw DomainError("host wavenumbers must satisfy kT > kL > 0");
  }
}

TMatrix::TMatrix(int order) : order_(order) {
  if (order < 0) throw DomainError("T-matrix order must be non-negative");
  for (auto& v : data_) v.assign(static_cast<std::size_t>(2 * order + 1), cplx(0.0, 0.0));
}

cplx TMatrix::operator()(Channel c, int n) const {
  if (n < -order_ || n > order_) return {0.0, 0.0};
  return data_[static_cast<int>(c)][static_cast<std::size_t>(n + order_)];
}

void TMatrix::set(Channel c, int n, cplx value) {
  if (n < -order_ || n > order_) throw DomainError("mode index outside T-matrix order");
  data_[static_cast<int>(c)][static_cast<std::size_t>(n + order_)] = value;
}

double TMatrix::maxAbs() const {
  double m = 0.0;
  for (const auto& ch : data_)
    for (const auto& v : ch) m = std::max(m, std::abs(v));
  return m;
}

double TMatrix::tailAbs() const {
  double m = 0.0;
  for (const auto& ch : data_) {
    if (ch.empty()) continue;
    m = std::max({m, std::abs(ch.front()), std::abs(ch.back())});
  }
  return m;
}

cplx farField(const TMatrix& tm, Channel c, cplx theta) {
  const cplx unit = std::exp(cplx(0.0, 1.0) * theta);
  const cplx inv = 1.0 / unit;
  if (!std::isfinite(std::abs(unit)) || !std::isfinite(std::abs(inv))) {
    throw RangeError("far-field angle has excessive imaginary part");
  }
  const auto& t = tm.channel(c);
  const int N = tm.order();
  cplx sum = t[static_cast<std::size_t>(N)];
  cplx up = 1.0;
  cplx down = 1.0;
  for (int n = 1; n <= N; ++n) {
    up *= unit;
    down *= inv;
    sum += t[static_cast<std::size_t>(N + n)] * up + t[static_cast<std::size_t>(N - n)] * down;
  }
  if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag())) {
    throw RangeError("far-field evaluation overflowed");
  }
  return sum;
}

cplx farFieldDerivative(const TMatrix& tm, Channel c, cplx theta) {
  const cplx unit = std::exp(cplx(0.0, 1.0) * theta);
  const cplx inv = 1.0 / unit;
  const auto& t = tm.channel(c);
  const int N = tm.order();
  cplx sum = 0.0;
  cplx up = 1.0;
  cplx down = 1.0;
  for (int n = 1; n <= N; ++n) {
    up *= unit;
    down *= inv;
    sum += cplx(0.0, n) *
           (t[static_cast<std::size_t>(N + n)] * up - t[static_cast<std::size_t>(N - n)] * down);
  }
  if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag())) {
    throw RangeError("far-field derivative overflowed");
  }
  return sum;
}

TMatrix buildCavityTMatrix(const HostMedium& host, double a, int order) {
  host.validate();
  checkRadius(a);
  checkOrderArg(order);
  const auto s = sequences(host, a, order, nullptr);
  return assemble(order, [&](int n) { return cavityMode(host, a, n, s); });
}

TMatrix buildInclusionTMatrix(const HostMedium& host, const InclusionMaterial& inclusion, double a,
                              int order) {
  host.validate();
  checkRadius(a);
  checkOrderArg(order);
  if (!(inclusion.rho > 0.0) || !(inclusion.kL > 0.0) || !(inclusion.kT > inclusion.kL)) {
    throw DomainError("inclusion must satisfy rho > 0 and kT > kL > 0");
  }
  const auto s = sequences(host, a, order, &inclusion);
  return assemble(order, [&](int n) { return inclusionMode(host, inclusion, a, n, s); });
}

int autoCavityOrder(const HostMedium& host, double a, double relTol, int maxOrder) {
  host.validate();
  checkRadius(a);
  return growingSearch(host.kT * a, maxOrder, [&](int cap) {
    const auto s = sequences(host, a, cap, nullptr);
    return autoOrder(host.kT * a, relTol, cap, [&](int n) { return cavityMode(host, a, n, s); });
  });
}

int autoInclusionOrder(const HostMedium& host, const InclusionMaterial& inclusion, double a,
                       double relTol, int maxOrder) {
  host.validate();
  checkRadius(a);
  const double kmax = std::max(host.kT, inclusion.kT);
  return growingSearch(kmax * a, maxOrder, [&](int cap) {
    const auto s = sequences(host, a, cap, &inclusion);
    return autoOrder(kmax * a, relTol, cap,
                     [&](int n) { return inclusionMode(host, inclusion, a, n, s); });
  });
}

TMatrix tmatrixFromJsonText(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("document", e.what());
  }
  if (!doc.is_object()) throw ParseError("document", "expected a JSON object");
  for (const auto& item : doc.items()) {
    if (item.key() != "order" && item.key() != "channels") {
      throw ParseError(item.key(), "unknown key");
    }
  }
  if (!doc.contains("order")) throw ParseError("order", "missing");
  if (!doc["order"].is_number_integer()) throw ParseError("order", "must be an integer");
  const long long order = doc["order"].get<long long>();
  if (order < 0 || order >= specfun::kMaxOrder) throw ParseError("order", "out of range");
  if (!doc.contains("channels") || !doc["channels"].is_object()) {
    throw ParseError("channels", "missing or not an object");
  }
  const auto& chans = doc["channels"];
  for (const auto& item : chans.items()) {
    const auto& k = item.key();
    if (k != "LL" && k != "LT" && k != "TL" && k != "TT") {
      throw ParseError("channels." + k, "unknown channel");
    }
  }
  TMatrix tm(static_cast<int>(order));
  for (Channel c : kAllChannels) {
    const std::string name = channelName(c);
    if (!chans.contains(name)) throw ParseError(name, "missing channel");
    const auto& arr = chans[name];
    if (!arr.is_array() || arr.size() != static_cast<std::size_t>(2 * order + 1)) {
      throw ParseError(name, "expected " + std::to_string(2 * order + 1) + " entries");
    }
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto& e = arr[i];
      const std::string field = name + "[" + std::to_string(i) + "]";
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw ParseError(field, "expected [re, im]");
      }
      const double re = e[0].get<double>();
      const double im = e[1].get<double>();
      if (!std::isfinite(re) || !std::isfinite(im)) throw ParseError(field, "non-finite entry");
      tm.set(c, static_cast<int>(i) - static_cast<int>(order), cplx(re, im));
    }
  }
  return tm;
}

std::string tmatrixToJsonText(const TMatrix& tm) {
  json doc;
  doc["order"] = tm.order();
  json chans = json::object();
  for (Channel c : kAllChannels) {
    json arr = json::array();
    for (const auto& v : tm.channel(c)) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw DomainError(std::string("non-finite entry in channel ") + channelName(c));
      }
      arr.push_back(json::array({v.real(), v.imag()}));
    }
    chans[channelName(c)] = std::move(arr);
  }
  doc["channels"] = std::move(chans);
  return doc.dump(2) + "\n";
}

TMatrix loadTMatrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return tmatrixFromJsonText(ss.str());
}

void saveTMatrix(const TMatrix& tm, const std::filesystem::path& path) {
  const std::string text = tmatrixToJsonText(tm);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace cohscat
