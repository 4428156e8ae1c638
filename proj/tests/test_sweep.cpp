#include <doctest.h>

#include <cmath>
#include <string>

#include "cohscat/errors.hpp"
#include "cohscat/sweep.hpp"

using namespace cohscat;

namespace {

const std::string kBase = R"({
  "host": {"rho": 1.0, "cL": 2.0, "cT": 1.0},
  "omega": 1.0,
  "scatterer": {"type": "cavity", "radius": 0.2},
  "mixture": MIXTURE,
  "sweep": SWEEP,
  "methods": METHODS
})";

std::string config(const std::string& mixture, const std::string& sweep, const std::string& methods) {
  std::string s = kBase;
  s.replace(s.find("MIXTURE"), 7, mixture);
  s.replace(s.find("SWEEP"), 5, sweep);
  s.replace(s.find("METHODS"), 7, methods);
  return s;
}

std::string fieldOf(const std::string& text) {
  try {
    parseConfig(text);
  } catch (const ParseError& e) {
    return e.field();
  }
  return "<none>";
}

const ResultRow& find(const std::vector<ResultRow>& rows, int index, const std::string& method,
                      const std::string& branch) {
  for (const auto& r : rows) {
    if (r.sweepIndex == index && r.method == method && r.branch == branch) return r;
  }
  FAIL("row not found");
  return rows.front();
}

}  // namespace

TEST_CASE("config validation names the offending field") {
  const std::string sweep = R"({"axis": "c", "values": [0.001, 0.002]})";
  CHECK(fieldOf(config("{}", sweep, R"(["full"])")) == "<none>");
  CHECK(fieldOf(config(R"({"q": 1})", sweep, R"(["full"])")) == "mixture.q");
  CHECK(fieldOf(config("{}", R"({"axis": "c", "values": [0.002, 0.001]})", R"(["full"])")) == "sweep.values");
  CHECK(fieldOf(config("{}", R"({"axis": "c", "values": [0.001, 0.001]})", R"(["full"])")) == "sweep.values");
  CHECK(fieldOf(config("{}", R"({"axis": "k", "values": [1]})", R"(["full"])")) == "sweep.axis");
  CHECK(fieldOf(config("{}", sweep, "[]")) == "methods");
  CHECK(fieldOf(config("{}", sweep, R"(["magic"])")) == "methods");
  CHECK(fieldOf(config(R"({"c": 0.1})", sweep, R"(["full"])")) == "mixture.c");
  CHECK(fieldOf(config(R"({"a": 0.3})", sweep, R"(["full"])")) == "mixture.a");
  CHECK(fieldOf(R"({"host": {"rho": 1, "cL": 1, "cT": 2}})") == "host.cT");
  CHECK(fieldOf("[1, 2") == "config");
}

TEST_CASE("config closure: c with a gives b = a / sqrt(c)") {
  const RunConfig cfg = parseConfig(config("{}", R"({"axis": "c", "values": [0.04]})", R"(["order2"])"));
  const PointSetup p = setupPoint(cfg, 0.04);
  CHECK(p.mixture.b == doctest::Approx(0.2 / std::sqrt(0.04)).epsilon(1e-15));
  const auto rows = runSweep(cfg, 1);
  CHECK(rows.front().b == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("without scatterers every method returns the host wavenumbers") {
  const RunConfig cfg = parseConfig(config(R"({"b": 0.6})", R"({"axis": "n0", "values": [0.0]})",
                                           R"(["full", "order2", "order3", "longwave", "linton-martin",
                                               "high-kb", "waterman-truell", "reflection-exact"])"));
  const auto rows = runSweep(cfg, 2);
  CHECK(rows.size() == 16);
  for (const auto& r : rows) {
    CAPTURE(r.method);
    CAPTURE(r.message);
    REQUIRE(r.status == "ok");
    REQUIRE(r.xi.has_value());
    CHECK(*r.xi == cplx(r.branch == "quasiP" ? 0.5 : 1.0));
  }
}

TEST_CASE("order2 and full differ at third order in n0") {
  const RunConfig cfg = parseConfig(config(R"({"b": 0.6})", R"({"axis": "n0", "values": [0.02, 0.04]})",
                                           R"(["full", "order2"])"));
  const auto rows = runSweep(cfg, 1);
  for (const char* branch : {"quasiP", "quasiSV"}) {
    const double d1 = std::abs(*find(rows, 0, "full", branch).xi - *find(rows, 0, "order2", branch).xi);
    const double d2 = std::abs(*find(rows, 1, "full", branch).xi - *find(rows, 1, "order2", branch).xi);
    CHECK(d2 / d1 == doctest::Approx(8.0).epsilon(0.2));
  }
}

TEST_CASE("row order and output are independent of the thread count") {
  const RunConfig cfg = parseConfig(config(R"({"b": 0.6})", R"({"axis": "n0", "values": [0.01, 0.02, 0.03, 0.04]})",
                                           R"(["order3", "full", "reflection-leading"])"));
  const auto one = runSweep(cfg, 1);
  const auto four = runSweep(cfg, 4);
  CHECK(formatCsv(one) == formatCsv(four));
  CHECK(formatJson(one) == formatJson(four));
  CHECK(one[0].method == "order3");
  CHECK(one[2].method == "full");
  CHECK(one[1].branch == "quasiSV");
  CHECK(one.back().sweepIndex == 3);
  CHECK(allSucceeded(one));
}

TEST_CASE("CSV layout") {
  const RunConfig cfg = parseConfig(config(R"({"b": 0.6})", R"({"axis": "n0", "values": [0.01]})",
                                           R"(["reflection-leading"])"));
  const std::string csv = formatCsv(runSweep(cfg, 1));
  const std::string header = csv.substr(0, csv.find('\n'));
  CHECK(header.rfind("sweep_index,sweep_value,omega,n0,a,b,c,method,branch,status,re_xi,im_xi,phase_velocity,attenuation", 0) == 0);
  CHECK(header.find("r_tt_im,message") != std::string::npos);
  CHECK(formatNumber(0.1) == "0.1");
  CHECK(std::stod(formatNumber(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("per-point failures are recorded and the run continues") {
  std::string text = config(R"({"b": 0.6})", R"({"axis": "n0", "values": [0.01, 0.02]})", R"(["full", "order2"])");
  text.insert(text.rfind('}'), R"(, "solver": {"truncation": 1})");
  const auto rows = runSweep(parseConfig(text), 2);
  CHECK(!allSucceeded(rows));
  CHECK(find(rows, 0, "full", "quasiP").status == "failed");
  CHECK(!find(rows, 0, "full", "quasiP").message.empty());
  CHECK(find(rows, 1, "order2", "quasiSV").status == "ok");
}

TEST_CASE("method comparison") {
  SUBCASE("a method listed twice has zero divergence") {
    const RunConfig cfg = parseConfig(config(R"({"b": 0.6})", R"({"axis": "n0", "values": [0.01, 0.02]})",
                                             R"(["order2", "order2"])"));
    const CompareReport rep = compareMethods(cfg, 1);
    REQUIRE(rep.pairs.size() == 4);
    for (const auto& d : rep.pairs) CHECK(d.relDiff == 0.0);
  }
  SUBCASE("Waterman-Truell departs from full at second order in n0") {
    const RunConfig cfg = parseConfig(config(R"({"b": 0.6})", R"({"axis": "n0", "values": [0.01, 0.02]})",
                                             R"(["full", "waterman-truell"])"));
    const CompareReport rep = compareMethods(cfg, 2);
    double d[2] = {0.0, 0.0};
    for (const auto& p : rep.pairs) {
      if (p.branch == "quasiP") d[p.sweepIndex] = p.relDiff;
    }
    CHECK(d[1] / d[0] == doctest::Approx(4.0).epsilon(0.2));
    REQUIRE(rep.regimes.size() == 2);
    CHECK(rep.regimes[0].method == "waterman-truell");
    CHECK(rep.regimes[0].points == 2);
    CHECK(formatCompareCsv(rep).rfind("sweep_index,sweep_value,branch,method_a,method_b,rel_diff", 0) == 0);
    CHECK(formatCompareJson(rep).find("valid_up_to") != std::string::npos);
  }
  SUBCASE("fewer than two wavenumber methods is a config error") {
    const RunConfig cfg = parseConfig(config(R"({"b": 0.6})", R"({"axis": "n0", "values": [0.01]})",
                                             R"(["full", "reflection-exact"])"));
    CHECK_THROWS_AS(compareMethods(cfg, 1), ParseError);
  }
}

TEST_CASE("omega sweeps rebuild the scatterer; file scatterers cannot be swept in omega") {
  std::string text = config(R"({"c": 0.01})", R"({"axis": "omega", "values": [1.0, 2.0]})", R"(["order2"])");
  text.erase(text.find("\"omega\": 1.0,"), 13);
  const RunConfig cfg = parseConfig(text);
  const auto rows = runSweep(cfg, 1);
  CHECK(rows[2].omega == 2.0);
  CHECK(rows[2].xi->real() == doctest::Approx(1.0).epsilon(0.05));

  std::string file = text;
  const std::string cavity = R"({"type": "cavity", "radius": 0.2})";
  file.replace(file.find(cavity), cavity.size(), R"({"type": "file", "path": "x.json"})");
  CHECK(fieldOf(file) == "sweep.axis");
  CHECK(fieldOf(config("{}", R"({"axis": "c", "values": [0.01]})", R"(["full"])").insert(1, R"("threads": 0,)")) == "threads");
}
