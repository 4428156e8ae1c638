#include "cohscat/quadrature.hpp"

#include <boost/math/special_functions/legendre.hpp>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "cohscat/errors.hpp"

namespace cohscat::quadrature {

namespace {

Rule makeRule(int n) {
  // Boost returns the non-negative zeros of P_n; mirror them.
  std::vector<double> zeros = boost::math::legendre_p_zeros<double>(n);
  std::sort(zeros.begin(), zeros.end());
  Rule r;
  auto add = [&](double x) {
    const double dp = boost::math::legendre_p_prime(n, x);
    r.nodes.push_back(x);
    r.weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
  };
  for (auto it = zeros.rbegin(); it != zeros.rend(); ++it) {
    if (*it != 0.0) add(-*it);
  }
  for (double z : zeros) add(z);
  return r;
}

}  // namespace

const Rule& gaussLegendre(int n) {
  if (n < 1) throw DomainError("Gauss-Legendre rule needs n >= 1");
  static std::mutex mutex;
  static std::map<int, Rule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, makeRule(n)).first;
  return it->second;
}

std::complex<double> integrate(const std::function<std::complex<double>(double)>& f, double lo,
                               double hi, int n) {
  const Rule& r = gaussLegendre(n);
  const double mid = 0.5 * (hi + lo);
  const double half = 0.5 * (hi - lo);
  std::complex<double> sum = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    sum += r.weights[i] * f(mid + half * r.nodes[i]);
  }
  return half * sum;
}

Adaptive integrateDoubling(const std::function<std::complex<double>(double)>& f, double lo,
                           double hi, double relTol, int startNodes, int maxNodes) {
  int n = startNodes;
  std::complex<double> prev = integrate(f, lo, hi, n);
  std::vector<double> history;
  while (2 * n <= maxNodes) {
    n *= 2;
    const std::complex<double> cur = integrate(f, lo, hi, n);
    const double diff = std::abs(cur - prev);
    history.push_back(diff);
    if (diff <= relTol * (1.0 + std::abs(cur))) return {cur, n};
    prev = cur;
  }
  throw ConvergenceError("quadrature not converged with " + std::to_string(n) + " nodes",
                         history);
}

}  // namespace cohscat::quadrature
