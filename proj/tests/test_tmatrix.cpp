#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "cohscat/errors.hpp"
#include "cohscat/tmatrix.hpp"
#include "fixtures.hpp"

using namespace cohscat;

namespace {

struct CavityCase {
  Channel c;
  int n;
  cplx expected;
};

// Traction-free cavity, kL = 1, kT = 2, rho = omega = 1, a = 0.1. Reference
// stresses computed independently from numerical derivatives of the
// displacement potentials (mpmath, 30 digits).
const CavityCase kCavity[] = {
    {Channel::LL, 0, {-0.00059066773487175794, 0.024296478067792859}},
    {Channel::LT, 1, {-0.0076180030832233733, 0.00014425931358298989}},
    {Channel::TL, 1, {0.0076180030832233733, -0.00014425931358298989}},
    {Channel::TT, 2, {-0.0019919087205565884, 0.043242789725484969}},
    {Channel::LT, 2, {0.010851373459265712, 0.00049985098838982358}},
    {Channel::TT, 0, {-2.4015328869825927e-8, -0.00015496879780488041}},
    {Channel::LL, 1, {-7.2564394291669484e-5, -0.0038084572959131771}},
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("cavity T-matrix matches an independent boundary-value computation") {
  const TMatrix tm = fixtures::cavity(0.1, 6);
  for (const auto& c : kCavity) {
    CAPTURE(channelName(c.c));
    CAPTURE(c.n);
    CHECK(fixtures::relErr(tm(c.c, c.n), c.expected) < 1e-10);
  }
}

TEST_CASE("circular scatterers: LL/TT even and LT/TL odd in n") {
  const HostMedium h = fixtures::host();
  const TMatrix cav = buildCavityTMatrix(h, 0.4, 8);
  const TMatrix inc = buildInclusionTMatrix(h, {2.0, 0.6, 1.3}, 0.4, 8);
  for (const TMatrix* tm : {&cav, &inc}) {
    for (int n = 0; n <= 8; ++n) {
      CHECK((*tm)(Channel::LL, -n) == (*tm)(Channel::LL, n));
      CHECK((*tm)(Channel::TT, -n) == (*tm)(Channel::TT, n));
      CHECK((*tm)(Channel::LT, -n) == -(*tm)(Channel::LT, n));
      CHECK((*tm)(Channel::TL, -n) == -(*tm)(Channel::TL, n));
    }
    for (Channel c : {Channel::LT, Channel::TL}) {
      CHECK(std::abs(farField(*tm, c, 0.0)) < 1e-15);
      CHECK(std::abs(farField(*tm, c, std::numbers::pi)) < 1e-14);
    }
  }
}

TEST_CASE("lossless scatterers conserve energy flux") {
  // Outgoing potentials of either type carry the same flux per unit
  // amplitude, so S_n = I + 2 T_n is unitary for each n.
  const HostMedium h = fixtures::host();
  const TMatrix cav = buildCavityTMatrix(h, 0.7, 10);
  const TMatrix inc = buildInclusionTMatrix(h, {3.0, 0.8, 1.5}, 0.7, 10);
  for (const TMatrix* tm : {&cav, &inc}) {
    for (int n = -10; n <= 10; ++n) {
      Eigen::Matrix2cd S;
      S << 1.0 + 2.0 * (*tm)(Channel::LL, n), 2.0 * (*tm)(Channel::TL, n),
          2.0 * (*tm)(Channel::LT, n), 1.0 + 2.0 * (*tm)(Channel::TT, n);
      CAPTURE(n);
      CHECK((S.adjoint() * S - Eigen::Matrix2cd::Identity()).norm() < 1e-12);
    }
  }
}

TEST_CASE("inclusion limits") {
  const HostMedium h = fixtures::host();
  SUBCASE("inclusion of host material does not scatter") {
    const TMatrix tm = buildInclusionTMatrix(h, {h.rho, h.kL, h.kT}, 0.5, 6);
    CHECK(tm.maxAbs() < 1e-14);
  }
  SUBCASE("vanishing inclusion density approaches the cavity") {
    const TMatrix inc = buildInclusionTMatrix(h, {1e-10, 1.3, 2.9}, 0.5, 6);
    const TMatrix cav = buildCavityTMatrix(h, 0.5, 6);
    for (Channel c : kAllChannels) {
      for (int n = -6; n <= 6; ++n) {
        CHECK(std::abs(inc(c, n) - cav(c, n)) < 1e-8 * cav.maxAbs());
      }
    }
  }
}

TEST_CASE("automatic order reaches the requested decay") {
  const HostMedium h = fixtures::host();
  for (double a : {0.01, 0.2, 2.0, 10.0}) {
    const int N = autoCavityOrder(h, a);
    const TMatrix tm = buildCavityTMatrix(h, a, N);
    CAPTURE(a);
    CHECK(N >= static_cast<int>(std::ceil(h.kT * a)));
    CHECK(tm.tailAbs() < 1e-12 * tm.maxAbs());
  }
  CHECK(autoInclusionOrder(h, {2.0, 0.6, 1.3}, 1.0) > 0);
}

TEST_CASE("far field and derivative") {
  const TMatrix tm = fixtures::skewed(fixtures::cavity(0.5));
  const cplx th(0.4, 0.1);
  const double h = 1e-6;
  for (Channel c : kAllChannels) {
    const cplx fd = (farField(tm, c, th + h) - farField(tm, c, th - h)) / (2.0 * h);
    CHECK(std::abs(fd - farFieldDerivative(tm, c, th)) < 1e-8);
  }
  TMatrix one(2);
  one.set(Channel::LL, 1, 1.0);
  CHECK(std::abs(farField(one, Channel::LL, cplx(0.0, -std::log(3.0))) - 3.0) < 1e-14);
  CHECK(one(Channel::LL, 5) == 0.0);
}

TEST_CASE("JSON save/load is bit-identical") {
  const TMatrix tm = fixtures::skewed(buildInclusionTMatrix(fixtures::host(), {2.0, 0.6, 1.3}, 0.8, 9));
  const auto dir = std::filesystem::temp_directory_path() / "cohscat_tm_roundtrip";
  std::filesystem::create_directories(dir);
  const auto p1 = dir / "a.json", p2 = dir / "b.json";
  saveTMatrix(tm, p1);
  const TMatrix back = loadTMatrix(p1);
  CHECK(back == tm);
  saveTMatrix(back, p2);
  CHECK(slurp(p1) == slurp(p2));
  CHECK(tmatrixFromJsonText(tmatrixToJsonText(tm)) == tm);
}

TEST_CASE("JSON parse errors name the offending field") {
  auto fieldOf = [](const std::string& text) {
    try {
      tmatrixFromJsonText(text);
    } catch (const ParseError& e) {
      return e.field();
    }
    return std::string("<none>");
  };
  const std::string ok = R"("LL":[[0,0],[1,0],[0,0]],"LT":[[0,0],[0,0],[0,0]],"TL":[[0,0],[0,0],[0,0]],"TT":[[0,0],[0,0],[0,0]])";
  CHECK(fieldOf(R"({"order":1,"channels":{)" + ok + "}}") == "<none>");
  CHECK(fieldOf(R"({"order":1,"channels":{)" + ok + R"(},"extra":1})") == "extra");
  CHECK(fieldOf(R"({"channels":{)" + ok + "}}") == "order");
  CHECK(fieldOf(R"({"order":1,"channels":{"LL":[[0,0],[1,0],[0,0]],"LT":[[0,0],[0,0],[0,0]],"TT":[[0,0],[0,0],[0,0]]}})") == "TL");
  CHECK(fieldOf(R"({"order":1,"channels":{"LL":[[0,0],[1,0]],"LT":[[0,0],[0,0],[0,0]],"TL":[[0,0],[0,0],[0,0]],"TT":[[0,0],[0,0],[0,0]]}})") == "LL");
  CHECK(fieldOf(R"({"order":1,"channels":{"LL":[[0,0],[1,0],[0,"x"]],"LT":[[0,0],[0,0],[0,0]],"TL":[[0,0],[0,0],[0,0]],"TT":[[0,0],[0,0],[0,0]]}})") == "LL[2]");
  CHECK(fieldOf("not json") == "document");
  CHECK_THROWS_AS(loadTMatrix("/nonexistent/tm.json"), ParseError);
}

TEST_CASE("builder argument checks") {
  const HostMedium h = fixtures::host();
  CHECK_THROWS_AS(buildCavityTMatrix(h, 0.0, 4), DomainError);
  CHECK_THROWS_AS(buildCavityTMatrix(h, 0.1, -1), DomainError);
  CHECK_THROWS_AS(buildCavityTMatrix({2.0, 1.0, 1.0, 1.0}, 0.1, 4), DomainError);
  CHECK_THROWS_AS(buildInclusionTMatrix(h, {1.0, 2.0, 1.0}, 0.1, 4), DomainError);
  const HostMedium s = HostMedium::fromSpeeds(2.0, 4.0, 2.0, 8.0);
  CHECK(s.kL == doctest::Approx(2.0));
  CHECK(s.kT == doctest::Approx(4.0));
  CHECK(s.shearModulus() == doctest::Approx(8.0));
}
