#pragma once

// Single-cylinder T-matrix in the regular-in / outgoing-out convention:
// an incident wave of type alpha, J_n(k_alpha r) e^{in theta}, scatters into
// T_n^{alpha beta} H_n^(1)(k_beta r) e^{in theta} of type beta. The far-field
// amplitude is f^{alpha beta}(theta) = sum_n T_n^{alpha beta} e^{in theta}.
// See docs/tmatrix_convention.md for the boundary-condition algebra.

#include <array>
#include <complex>
#include <filesystem>
#include <string>
#include <vector>

namespace cohscat {

using cplx = std::complex<double>;

/// Channel alpha-beta: incident wave type alpha, scattered type beta.
enum class Channel { LL = 0, LT = 1, TL = 2, TT = 3 };

inline constexpr std::array<Channel, 4> kAllChannels{Channel::LL, Channel::LT, Channel::TL,
                                                     Channel::TT};

const char* channelName(Channel c);

/// Elastic host at a fixed angular frequency.
struct HostMedium {
  double kL = 0.0;
  double kT = 0.0;
  double rho = 0.0;
  double omega = 0.0;

  static HostMedium fromSpeeds(double rho, double cL, double cT, double omega);

  double kappa() const { return kT / kL; }
  double shearModulus() const { return rho * omega * omega / (kT * kT); }
  double pWaveModulus() const { return rho * omega * omega / (kL * kL); }

  /// Throws DomainError unless kT > kL > 0, rho > 0, omega > 0.
  void validate() const;
};

/// Material of an elastic inclusion, at the host's frequency.
struct InclusionMaterial {
  double rho = 0.0;
  double kL = 0.0;
  double kT = 0.0;
};

class TMatrix {
public:
  TMatrix() = default;
  /// Zero-filled T-matrix of the given order.
  explicit TMatrix(int order);

  int order() const { return order_; }
  int size() const { return 2 * order_ + 1; }

  /// Entry T_n for |n| <= order, zero beyond.
  cplx operator()(Channel c, int n) const;
  void set(Channel c, int n, cplx value);

  /// Entries ordered n = -order..order.
  const std::vector<cplx>& channel(Channel c) const { return data_[static_cast<int>(c)]; }
  std::vector<cplx>& channel(Channel c) { return data_[static_cast<int>(c)]; }

  /// max_n |T_n| over all channels.
  double maxAbs() const;
  /// max over channels of |T_{+-order}|.
  double tailAbs() const;

  bool operator==(const TMatrix& other) const = default;

private:
  int order_ = 0;
  std::array<std::vector<cplx>, 4> data_{};
};

/// f(theta) = sum_n T_n e^{in theta} for complex theta.
cplx farField(const TMatrix& tm, Channel c, cplx theta);
/// df/dtheta.
cplx farFieldDerivative(const TMatrix& tm, Channel c, cplx theta);

/// Traction-free circular cavity of radius a.
TMatrix buildCavityTMatrix(const HostMedium& host, double a, int order);
/// Welded elastic inclusion of radius a.
TMatrix buildInclusionTMatrix(const HostMedium& host, const InclusionMaterial& inclusion, double a,
                              int order);

/// Smallest order at which the builder's outermost entries fall below
/// relTol * max|T|, searched up to maxOrder.
int autoCavityOrder(const HostMedium& host, double a, double relTol = 1e-12, int maxOrder = 200);
int autoInclusionOrder(const HostMedium& host, const InclusionMaterial& inclusion, double a,
                       double relTol = 1e-12, int maxOrder = 200);

/// JSON: {"order": N, "channels": {"LL": [[re, im], ...], ...}}, entries n = -N..N.
TMatrix tmatrixFromJsonText(const std::string& text);
std::string tmatrixToJsonText(const TMatrix& tm);
TMatrix loadTMatrix(const std::filesystem::path& path);
void saveTMatrix(const TMatrix& tm, const std::filesystem::path& path);

}  // namespace cohscat
