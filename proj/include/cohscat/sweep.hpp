#pragma once

// Batch driver behind the command-line tool: parses a run configuration,
// evaluates the requested methods over a sweep and formats the result table.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cohscat/effective.hpp"

namespace cohscat {

enum class Method {
  Full,
  Order2,
  Order3,
  LongWave,
  LintonMartin,
  HighKB,
  WatermanTruell,
  ReflectionExact,
  ReflectionLeading,
};

const char* methodName(Method m);
Method methodFromName(const std::string& name);
bool isReflectionMethod(Method m);

enum class SweepAxis { Omega, N0, C };
const char* axisName(SweepAxis a);

struct ScattererSpec {
  enum class Kind { Cavity, Inclusion, File };
  Kind kind = Kind::Cavity;
  double radius = 0.0;
  int order = 0;  // 0 = automatic
  double rho = 0.0, cL = 0.0, cT = 0.0;  // inclusion material
  std::string path;                      // file
};

struct MixtureSpec {
  std::optional<double> n0, a, b, c;
};

struct RunConfig {
  double rho = 0.0, cL = 0.0, cT = 0.0;
  double omega = 0.0;
  ScattererSpec scatterer;
  MixtureSpec mixture;
  SweepAxis axis = SweepAxis::C;
  std::vector<double> values;
  std::vector<Method> methods;
  SolverOptions solver;
  double compareTolerance = 1e-2;
  std::string outputPath;
  std::string format = "csv";
  int threads = 1;
  /// Directory used to resolve relative file paths.
  std::filesystem::path baseDir;
};

/// Parses and validates a JSON configuration; unknown keys are rejected.
RunConfig parseConfig(const std::string& text, const std::filesystem::path& baseDir = {});
RunConfig loadConfig(const std::filesystem::path& path);

/// The concrete host, mixture and T-matrix at one sweep point.
struct PointSetup {
  HostMedium host;
  Mixture mixture;
  TMatrix tm;
};
PointSetup setupPoint(const RunConfig& cfg, double value);
TMatrix buildScatterer(const RunConfig& cfg, const HostMedium& host);

struct ResultRow {
  int sweepIndex = 0;
  double sweepValue = 0.0;
  double omega = 0.0, n0 = 0.0, a = 0.0, b = 0.0, c = 0.0;
  std::string method;
  std::string branch;  // quasiP | quasiSV
  std::string status;  // ok | failed
  std::optional<cplx> xi;
  std::optional<double> residual;
  std::optional<int> truncation;
  std::optional<cplx> r1, r2;  // quasiP: R^LL, R^LT; quasiSV: R^TL, R^TT
  std::string message;
};

/// Rows ordered by (sweep index, method order in the config, branch),
/// independent of the number of threads.
std::vector<ResultRow> runSweep(const RunConfig& cfg, int threads);
bool allSucceeded(const std::vector<ResultRow>& rows);

const std::vector<std::string>& csvColumns();
std::string formatCsv(const std::vector<ResultRow>& rows);
std::string formatJson(const std::vector<ResultRow>& rows);

struct PairDivergence {
  int sweepIndex = 0;
  double sweepValue = 0.0;
  std::string branch, methodA, methodB;
  double relDiff = 0.0;
};

struct MethodRegime {
  std::string method, branch;
  int pointsWithin = 0;
  int points = 0;
  /// Largest sweep value up to which every point stays within tolerance.
  std::optional<double> validUpTo;
};

struct CompareReport {
  std::vector<PairDivergence> pairs;
  std::vector<MethodRegime> regimes;  // relative to "full" when present
  double tolerance = 0.0;
};

CompareReport compareMethods(const RunConfig& cfg, int threads);
std::string formatCompareCsv(const CompareReport& r);
std::string formatCompareJson(const CompareReport& r);

/// "%.17g"; shortest text that round-trips.
std::string formatNumber(double v);

}  // namespace cohscat
