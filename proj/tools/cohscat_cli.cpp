// cohscat: effective wavenumbers and reflection coefficients of elastic
// waves in a half-space of randomly placed parallel cylinders.
//
//   cohscat tmatrix build   --config run.json [--omega w] [--out tm.json]
//   cohscat tmatrix inspect <tm.json> [--format csv|json]
//   cohscat dispersion      --config run.json [--out f] [--format csv|json] [--threads n]
//   cohscat reflection      --config run.json [...]
//   cohscat compare         --config run.json [...]
//
// Exit status: 0 when every point succeeded, 2 when any point failed,
// 1 for usage or configuration errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cohscat/errors.hpp"
#include "cohscat/sweep.hpp"

using namespace cohscat;

namespace {

struct Options {
  std::string config;
  std::string out;
  std::string format;
  int threads = 0;
  double omega = 0.0;
  std::string tmPath;
};

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << text;
}

RunConfig loadWithOverrides(const Options& o) {
  RunConfig cfg = loadConfig(o.config);
  if (!o.out.empty()) cfg.outputPath = o.out;
  if (!o.format.empty()) cfg.format = o.format;
  if (o.threads > 0) cfg.threads = o.threads;
  return cfg;
}

int runRows(RunConfig cfg, bool reflection) {
  std::vector<Method> keep;
  for (Method m : cfg.methods) {
    if (isReflectionMethod(m) == reflection) keep.push_back(m);
  }
  if (keep.empty()) {
    if (!reflection) throw ParseError("methods", "no wavenumber method listed");
    keep = {Method::ReflectionExact, Method::ReflectionLeading};
  }
  cfg.methods = keep;
  const auto rows = runSweep(cfg, cfg.threads);
  emit(cfg.format == "json" ? formatJson(rows) : formatCsv(rows), cfg.outputPath);
  return allSucceeded(rows) ? 0 : 2;
}

int runCompare(const RunConfig& cfg) {
  const CompareReport rep = compareMethods(cfg, cfg.threads);
  emit(cfg.format == "json" ? formatCompareJson(rep) : formatCompareCsv(rep), cfg.outputPath);
  for (const auto& d : rep.pairs) {
    if (!std::isfinite(d.relDiff)) return 2;
  }
  return 0;
}

int buildTMatrix(const Options& o) {
  const RunConfig cfg = loadConfig(o.config);
  if (cfg.scatterer.kind == ScattererSpec::Kind::File) {
    throw ParseError("scatterer.type", "tmatrix build needs a cavity or inclusion");
  }
  double omega = o.omega;
  if (!(omega > 0.0)) omega = cfg.axis == SweepAxis::Omega ? cfg.values.front() : cfg.omega;
  const HostMedium host = HostMedium::fromSpeeds(cfg.rho, cfg.cL, cfg.cT, omega);
  const TMatrix tm = buildScatterer(cfg, host);
  if (o.out.empty()) {
    std::cout << tmatrixToJsonText(tm);
  } else {
    saveTMatrix(tm, o.out);
  }
  return 0;
}

int inspectTMatrix(const Options& o) {
  const TMatrix tm = loadTMatrix(o.tmPath);
  const cplx pi(std::numbers::pi, 0.0);
  if (o.format == "json") {
    nlohmann::json doc;
    doc["order"] = tm.order();
    doc["max_abs"] = tm.maxAbs();
    doc["tail_abs"] = tm.tailAbs();
    for (Channel c : kAllChannels) {
      const cplx f0 = farField(tm, c, 0.0), fpi = farField(tm, c, pi);
      doc["far_field"][channelName(c)] = {{"f0", {f0.real(), f0.imag()}},
                                          {"fpi", {fpi.real(), fpi.imag()}}};
    }
    std::cout << doc.dump(2) << "\n";
    return 0;
  }
  std::cout << "order," << tm.order() << "\n"
            << "max_abs," << formatNumber(tm.maxAbs()) << "\n"
            << "tail_abs," << formatNumber(tm.tailAbs()) << "\n"
            << "channel,re_f0,im_f0,re_fpi,im_fpi\n";
  for (Channel c : kAllChannels) {
    const cplx f0 = farField(tm, c, 0.0), fpi = farField(tm, c, pi);
    std::cout << channelName(c) << "," << formatNumber(f0.real()) << ","
              << formatNumber(f0.imag()) << "," << formatNumber(fpi.real()) << ","
              << formatNumber(fpi.imag()) << "\n";
  }
  return 0;
}

void addRunFlags(CLI::App* app, Options& o) {
  app->add_option("--config", o.config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
  app->add_option("--out", o.out, "Output file (default: config output.path or stdout)");
  app->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherent elastic waves in a random array of cylinders"};
  app.require_subcommand(1);
  Options o;

  auto* tmatrix = app.add_subcommand("tmatrix", "Build or inspect a T-matrix file");
  tmatrix->require_subcommand(1);
  auto* build = tmatrix->add_subcommand("build", "Build the configured scatterer's T-matrix");
  build->add_option("--config", o.config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
  build->add_option("--omega", o.omega, "Angular frequency (default: from config)")
      ->check(CLI::PositiveNumber);
  build->add_option("--out", o.out, "Output file (default: stdout)");
  auto* inspect = tmatrix->add_subcommand("inspect", "Summarize a T-matrix file");
  inspect->add_option("file", o.tmPath, "T-matrix JSON")->required()->check(CLI::ExistingFile);
  inspect->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  auto* dispersion = app.add_subcommand("dispersion", "Effective wavenumbers over the sweep");
  addRunFlags(dispersion, o);
  auto* reflection = app.add_subcommand("reflection", "Reflection coefficients over the sweep");
  addRunFlags(reflection, o);
  auto* compare = app.add_subcommand("compare", "Pairwise divergence between methods");
  addRunFlags(compare, o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) return buildTMatrix(o);
    if (inspect->parsed()) return inspectTMatrix(o);
    if (dispersion->parsed()) return runRows(loadWithOverrides(o), false);
    if (reflection->parsed()) return runRows(loadWithOverrides(o), true);
    if (compare->parsed()) return runCompare(loadWithOverrides(o));
  } catch (const ParseError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
