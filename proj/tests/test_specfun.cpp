#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cohscat/errors.hpp"
#include "cohscat/specfun.hpp"

using namespace cohscat;
using namespace cohscat::specfun;

namespace {

struct JCase {
  int n;
  cplx z;
  cplx expected;
};

// Reference values from mpmath at 40 digits.
const JCase kJCases[] = {
    {0, {2.0, 0.0}, {0.22389077914123566805, 0.0}},
    {5, {30.0, 2.0}, {-0.52749214544396010865, -0.094282955867984023593}},
    {0, {80.0, 0.5}, {-0.07855170623007362474, 0.029229432726406720019}},
    {3, {12.5, -3.0}, {0.81023380761740210015, 1.9215646928654227848}},
    {60, {45.0, 1.0}, {1.299381325141982637e-05, 1.6214670986100290461e-05}},
    {2, {1.5, 0.5}, {0.23015373693050232828, 0.12964645503533636827}},
    {10, {7.0, 0.0}, {0.023539344388267134807, 0.0}},
    {1, {100.0, 0.0}, {-0.077145352014112158033, 0.0}},
};

struct YCase {
  int n;
  double x;
  double expected;
};

const YCase kYCases[] = {
    {0, 0.1, -1.5342386513503668083},   {0, 60.0, 0.047358952209449399203},
    {7, 75.0, 0.060351914443739680827}, {3, 0.5, -42.059494304723882688},
    {20, 0.1, -4.0607084201263677101e+42}, {1, 51.0, -0.11162839844565153181},
};

}  // namespace

TEST_CASE("J_n matches high-precision reference values") {
  for (const auto& c : kJCases) {
    CAPTURE(c.n);
    CAPTURE(c.z);
    const cplx v = besselJ(c.n, c.z);
    CHECK(std::abs(v - c.expected) <= 1e-13 * std::max(1.0, std::abs(c.expected)));
  }
}

TEST_CASE("Y_n matches high-precision reference values") {
  for (const auto& c : kYCases) {
    CAPTURE(c.n);
    CAPTURE(c.x);
    CHECK(std::abs(besselY(c.n, c.x) - c.expected) <= 1e-13 * std::max(1.0, std::abs(c.expected)));
  }
}

TEST_CASE("Wronskian J_n Y_n' - J_n' Y_n = 2/(pi x)") {
  for (double x : {0.01, 0.3, 1.0, 5.5, 6.5, 20.0, 49.0, 51.0, 120.0}) {
    for (int n : {0, 1, 2, 5, 12, 30}) {
      const cplx h = hankel1(n, x), hp = hankel1Prime(n, x);
      const double J = h.real(), Y = h.imag(), Jp = hp.real(), Yp = hp.imag();
      const double w = J * Yp - Jp * Y;
      const double expected = 2.0 / (std::numbers::pi * x);
      CAPTURE(x);
      CAPTURE(n);
      const double scale = std::max(expected, std::abs(J * Yp) + std::abs(Jp * Y));
      CHECK(std::abs(w - expected) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("three-term recurrence and reflection in the order") {
  for (cplx z : {cplx(0.7, 0.2), cplx(9.0, -1.0), cplx(33.0, 0.0)}) {
    for (int n = 1; n < 20; ++n) {
      const cplx lhs = besselJ(n - 1, z) + besselJ(n + 1, z);
      const cplx rhs = 2.0 * n / z * besselJ(n, z);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    }
    for (int n = 0; n < 8; ++n) {
      const double s = n % 2 == 0 ? 1.0 : -1.0;
      CHECK(std::abs(besselJ(-n, z) - s * besselJ(n, z)) <= 1e-15 * std::max(1.0, std::abs(besselJ(n, z))));
    }
  }
  for (int n = 0; n < 6; ++n) {
    const double s = n % 2 == 0 ? 1.0 : -1.0;
    CHECK(hankel1(-n, 3.0) == s * hankel1(n, 3.0));
  }
}

TEST_CASE("sequences agree with single evaluations across regime boundaries") {
  for (cplx z : {cplx(5.99, 0.0), cplx(6.01, 0.0), cplx(2.0, 4.0)}) {
    const auto seq = besselJSequence(25, z);
    for (int n = 0; n <= 25; ++n) {
      CHECK(std::abs(seq[static_cast<std::size_t>(n)] - besselJ(n, z)) <=
            1e-14 * std::max(1.0, std::abs(besselJ(n, z))));
    }
  }
  // Y changes method at x = 50; both sides must be continuous.
  for (int n : {0, 1, 4}) {
    const double below = besselY(n, 50.0 - 1e-9), above = besselY(n, 50.0 + 1e-9);
    const double slope = hankel1Prime(n, 50.0).imag();
    CHECK(std::abs(above - below - 2e-9 * slope) < 1e-15);
  }
  const auto h = hankel1Sequence(10, 2.5);
  for (int n = 0; n <= 10; ++n) CHECK(std::abs(h[static_cast<std::size_t>(n)] - hankel1(n, 2.5)) < 1e-12 * std::abs(h[static_cast<std::size_t>(n)]));
}

TEST_CASE("argument errors") {
  CHECK_THROWS_AS(besselY(0, 0.0), DomainError);
  CHECK_THROWS_AS(besselY(0, -1.0), DomainError);
  CHECK_THROWS_AS(hankel1(1, 0.0), DomainError);
  CHECK_THROWS_AS(besselJ(0, cplx(1.0, 800.0)), RangeError);
  CHECK_THROWS_AS(besselYSequence(400, 0.01), RangeError);
}
