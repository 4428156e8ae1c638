#include "cohscat/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cohscat/asymptotics.hpp"
#include "cohscat/errors.hpp"
#include "cohscat/highfreq.hpp"
#include "cohscat/reflection.hpp"

namespace cohscat {

namespace {

using json = nlohmann::json;

const std::vector<std::pair<Method, const char*>> kMethodNames = {
    {Method::Full, "full"},
    {Method::Order2, "order2"},
    {Method::Order3, "order3"},
    {Method::LongWave, "longwave"},
    {Method::LintonMartin, "linton-martin"},
    {Method::HighKB, "high-kb"},
    {Method::WatermanTruell, "waterman-truell"},
    {Method::ReflectionExact, "reflection-exact"},
    {Method::ReflectionLeading, "reflection-leading"},
};

void allowKeys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ParseError(where, "expected an object");
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* k : keys) ok = ok || item.key() == k;
    if (!ok) {
      throw ParseError(where.empty() ? item.key() : where + "." + item.key(), "unknown key");
    }
  }
}

double number(const json& obj, const std::string& where, const char* key) {
  const std::string field = where.empty() ? key : where + "." + key;
  if (!obj.contains(key)) throw ParseError(field, "missing");
  if (!obj[key].is_number()) throw ParseError(field, "must be a number");
  const double v = obj[key].get<double>();
  if (!std::isfinite(v)) throw ParseError(field, "must be finite");
  return v;
}

double positive(const json& obj, const std::string& where, const char* key) {
  const double v = number(obj, where, key);
  if (!(v > 0.0)) throw ParseError(where + "." + key, "must be positive");
  return v;
}

std::optional<double> optionalNumber(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) return std::nullopt;
  return number(obj, where, key);
}

int parseOrder(const json& s) {
  if (!s.contains("order")) return 0;
  const auto& o = s["order"];
  if (o.is_string() && o.get<std::string>() == "auto") return 0;
  if (!o.is_number_integer() || o.get<long long>() < 1 || o.get<long long>() > 500) {
    throw ParseError("scatterer.order", "must be \"auto\" or an integer in [1, 500]");
  }
  return static_cast<int>(o.get<long long>());
}

ScattererSpec parseScatterer(const json& s) {
  if (!s.is_object()) throw ParseError("scatterer", "expected an object");
  if (!s.contains("type") || !s["type"].is_string()) throw ParseError("scatterer.type", "missing");
  const std::string type = s["type"].get<std::string>();
  ScattererSpec spec;
  if (type == "cavity") {
    allowKeys(s, "scatterer", {"type", "radius", "order"});
    spec.kind = ScattererSpec::Kind::Cavity;
    spec.radius = positive(s, "scatterer", "radius");
    spec.order = parseOrder(s);
  } else if (type == "inclusion") {
    allowKeys(s, "scatterer", {"type", "radius", "order", "rho", "cL", "cT"});
    spec.kind = ScattererSpec::Kind::Inclusion;
    spec.radius = positive(s, "scatterer", "radius");
    spec.order = parseOrder(s);
    spec.rho = positive(s, "scatterer", "rho");
    spec.cL = positive(s, "scatterer", "cL");
    spec.cT = positive(s, "scatterer", "cT");
    if (!(spec.cT < spec.cL)) throw ParseError("scatterer.cT", "must be below scatterer.cL");
  } else if (type == "file") {
    allowKeys(s, "scatterer", {"type", "path"});
    spec.kind = ScattererSpec::Kind::File;
    if (!s.contains("path") || !s["path"].is_string()) {
      throw ParseError("scatterer.path", "missing");
    }
    spec.path = s["path"].get<std::string>();
  } else {
    throw ParseError("scatterer.type", "must be cavity, inclusion or file");
  }
  return spec;
}

std::optional<double> axisSlot(const MixtureSpec& m, SweepAxis axis) {
  return axis == SweepAxis::N0 ? m.n0 : (axis == SweepAxis::C ? m.c : std::nullopt);
}

Mixture resolveMixture(const RunConfig& cfg, double value) {
  MixtureSpec m = cfg.mixture;
  if (cfg.axis == SweepAxis::N0) m.n0 = value;
  if (cfg.axis == SweepAxis::C) m.c = value;
  const double nan = std::nan("");
  return Mixture::resolve(m.n0.value_or(nan), m.a.value_or(nan), m.b.value_or(nan),
                          m.c.value_or(nan));
}

std::string clean(std::string s) {
  for (char& ch : s) {
    if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"') ch = ';';
  }
  return s;
}

ResultRow baseRow(int index, double value, const PointSetup& p, Method m, const char* branch) {
  ResultRow r;
  r.sweepIndex = index;
  r.sweepValue = value;
  r.omega = p.host.omega;
  r.n0 = p.mixture.n0;
  r.a = p.mixture.a;
  r.b = p.mixture.b;
  r.c = p.mixture.c;
  r.method = methodName(m);
  r.branch = branch;
  r.status = "ok";
  return r;
}

void evaluateMethod(Method m, int index, double value, const PointSetup& p, const RunConfig& cfg,
                    std::vector<ResultRow>& out) {
  ResultRow P = baseRow(index, value, p, m, "quasiP");
  ResultRow S = baseRow(index, value, p, m, "quasiSV");
  try {
    switch (m) {
      case Method::Full: {
        const auto roots = solveRoots(p.tm, p.host, p.mixture, cfg.solver);
        P.xi = roots.xi;
        S.xi = roots.xiPrime;
        P.residual = roots.residualP;
        S.residual = roots.residualSV;
        P.truncation = S.truncation = roots.truncationUsed;
        break;
      }
      case Method::Order2:
      case Method::Order3: {
        auto fn = m == Method::Order2 ? expandOrder2 : expandOrder3;
        P.xi = fn(p.tm, p.host, p.mixture, Polarization::P).xi();
        S.xi = fn(p.tm, p.host, p.mixture, Polarization::SV).xi();
        P.truncation = S.truncation = p.tm.order();
        break;
      }
      case Method::LongWave: {
        P.xi = expandLongWavelength(p.tm, p.host, p.mixture.n0, Polarization::P).xi();
        S.xi = expandLongWavelength(p.tm, p.host, p.mixture.n0, Polarization::SV).xi();
        P.truncation = S.truncation = p.tm.order();
        break;
      }
      case Method::LintonMartin: {
        const auto lm = lintonMartinElastic(p.tm, p.host, p.mixture.n0);
        auto root = [](cplx x2) {
          const cplx s = std::sqrt(x2);
          return s.real() < 0.0 ? -s : s;
        };
        P.xi = root(lm.xiSquared);
        S.xi = root(lm.xiPrimeSquared);
        P.truncation = S.truncation = p.tm.order();
        break;
      }
      case Method::HighKB:
      case Method::WatermanTruell: {
        const auto v = m == Method::HighKB ? HighFreqVariant::HighKB
                                           : HighFreqVariant::WatermanTruell;
        const auto r = solveHighFreq(v, p.tm, p.host, p.mixture);
        P.xi = r.xi;
        S.xi = r.xiPrime;
        P.residual = r.residualP;
        S.residual = r.residualSV;
        P.truncation = S.truncation = p.tm.order();
        break;
      }
      case Method::ReflectionExact: {
        const auto r = reflectionExact(p.tm, p.host, p.mixture, cfg.solver);
        P.xi = r.roots.xi;
        S.xi = r.roots.xiPrime;
        P.residual = r.roots.residualP;
        S.residual = r.roots.residualSV;
        P.truncation = S.truncation = r.roots.truncationUsed;
        P.r1 = r.R.LL;
        P.r2 = r.R.LT;
        S.r1 = r.R.TL;
        S.r2 = r.R.TT;
        break;
      }
      case Method::ReflectionLeading: {
        const auto R = reflectionLeading(p.tm, p.host, p.mixture.n0);
        P.r1 = R.LL;
        P.r2 = R.LT;
        S.r1 = R.TL;
        S.r2 = R.TT;
        break;
      }
    }
  } catch (const std::exception& e) {
    for (ResultRow* r : {&P, &S}) {
      r->status = "failed";
      r->message = clean(e.what());
      r->xi.reset();
      r->residual.reset();
      r->r1.reset();
      r->r2.reset();
    }
  }
  out.push_back(std::move(P));
  out.push_back(std::move(S));
}

std::vector<ResultRow> evaluatePoint(const RunConfig& cfg, int index) {
  const double value = cfg.values[static_cast<std::size_t>(index)];
  std::vector<ResultRow> rows;
  PointSetup p;
  try {
    p = setupPoint(cfg, value);
  } catch (const std::exception& e) {
    for (Method m : cfg.methods) {
      for (const char* branch : {"quasiP", "quasiSV"}) {
        ResultRow r;
        r.sweepIndex = index;
        r.sweepValue = value;
        r.method = methodName(m);
        r.branch = branch;
        r.status = "failed";
        r.message = clean(e.what());
        rows.push_back(std::move(r));
      }
    }
    return rows;
  }
  for (Method m : cfg.methods) evaluateMethod(m, index, value, p, cfg, rows);
  return rows;
}

template <class Fn>
void parallelFor(int count, int threads, Fn&& fn) {
  const int workers = std::max(1, std::min(threads, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

json optionalJson(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::vector<std::string> rowFields(const ResultRow& r) {
  auto num = [](const std::optional<double>& v) { return v ? formatNumber(*v) : std::string(); };
  std::vector<std::string> f;
  f.push_back(std::to_string(r.sweepIndex));
  f.push_back(formatNumber(r.sweepValue));
  f.push_back(formatNumber(r.omega));
  f.push_back(formatNumber(r.n0));
  f.push_back(formatNumber(r.a));
  f.push_back(formatNumber(r.b));
  f.push_back(formatNumber(r.c));
  f.push_back(r.method);
  f.push_back(r.branch);
  f.push_back(r.status);
  std::optional<double> re, im, vel, att;
  if (r.xi) {
    re = r.xi->real();
    im = r.xi->imag();
    vel = r.omega / r.xi->real();
    att = r.xi->imag();
  }
  f.push_back(num(re));
  f.push_back(num(im));
  f.push_back(num(vel));
  f.push_back(num(att));
  f.push_back(num(r.residual));
  f.push_back(r.truncation ? std::to_string(*r.truncation) : std::string());
  const bool sv = r.branch == "quasiSV";
  const std::optional<cplx>* slots[4] = {sv ? nullptr : &r.r1, sv ? nullptr : &r.r2,
                                         sv ? &r.r1 : nullptr, sv ? &r.r2 : nullptr};
  for (const auto* s : slots) {
    if (s && *s) {
      f.push_back(formatNumber((*s)->real()));
      f.push_back(formatNumber((*s)->imag()));
    } else {
      f.push_back("");
      f.push_back("");
    }
  }
  f.push_back(r.message);
  return f;
}

}  // namespace

const char* methodName(Method m) {
  for (const auto& [k, v] : kMethodNames) {
    if (k == m) return v;
  }
  return "?";
}

Method methodFromName(const std::string& name) {
  for (const auto& [k, v] : kMethodNames) {
    if (name == v) return k;
  }
  throw ParseError("methods", "unknown method '" + name + "'");
}

bool isReflectionMethod(Method m) {
  return m == Method::ReflectionExact || m == Method::ReflectionLeading;
}

const char* axisName(SweepAxis a) {
  switch (a) {
    case SweepAxis::Omega: return "omega";
    case SweepAxis::N0: return "n0";
    case SweepAxis::C: return "c";
  }
  return "?";
}

RunConfig parseConfig(const std::string& text, const std::filesystem::path& baseDir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("config", e.what());
  }
  allowKeys(doc, "", {"host", "omega", "scatterer", "mixture", "sweep", "methods", "solver",
                      "compare", "output", "threads"});
  RunConfig cfg;
  cfg.baseDir = baseDir;

  if (!doc.contains("host")) throw ParseError("host", "missing");
  allowKeys(doc["host"], "host", {"rho", "cL", "cT"});
  cfg.rho = positive(doc["host"], "host", "rho");
  cfg.cL = positive(doc["host"], "host", "cL");
  cfg.cT = positive(doc["host"], "host", "cT");
  if (!(cfg.cT < cfg.cL)) throw ParseError("host.cT", "must be below host.cL");

  if (!doc.contains("scatterer")) throw ParseError("scatterer", "missing");
  cfg.scatterer = parseScatterer(doc["scatterer"]);

  if (!doc.contains("mixture")) throw ParseError("mixture", "missing");
  allowKeys(doc["mixture"], "mixture", {"n0", "a", "b", "c"});
  cfg.mixture.n0 = optionalNumber(doc["mixture"], "mixture", "n0");
  cfg.mixture.a = optionalNumber(doc["mixture"], "mixture", "a");
  cfg.mixture.b = optionalNumber(doc["mixture"], "mixture", "b");
  cfg.mixture.c = optionalNumber(doc["mixture"], "mixture", "c");
  if (cfg.scatterer.kind != ScattererSpec::Kind::File) {
    if (cfg.mixture.a && *cfg.mixture.a != cfg.scatterer.radius) {
      throw ParseError("mixture.a", "differs from scatterer.radius");
    }
    cfg.mixture.a = cfg.scatterer.radius;
  }

  if (!doc.contains("sweep")) throw ParseError("sweep", "missing");
  const auto& sw = doc["sweep"];
  allowKeys(sw, "sweep", {"axis", "values"});
  if (!sw.contains("axis") || !sw["axis"].is_string()) throw ParseError("sweep.axis", "missing");
  const std::string axis = sw["axis"].get<std::string>();
  if (axis == "omega") {
    cfg.axis = SweepAxis::Omega;
  } else if (axis == "n0") {
    cfg.axis = SweepAxis::N0;
  } else if (axis == "c") {
    cfg.axis = SweepAxis::C;
  } else {
    throw ParseError("sweep.axis", "must be omega, n0 or c");
  }
  if (!sw.contains("values") || !sw["values"].is_array() || sw["values"].empty()) {
    throw ParseError("sweep.values", "must be a non-empty array");
  }
  for (const auto& v : sw["values"]) {
    if (!v.is_number() || !std::isfinite(v.get<double>()) || v.get<double>() < 0.0) {
      throw ParseError("sweep.values", "entries must be finite non-negative numbers");
    }
    if (!cfg.values.empty() && !(v.get<double>() > cfg.values.back())) {
      throw ParseError("sweep.values", "must be strictly increasing");
    }
    cfg.values.push_back(v.get<double>());
  }
  if (axisSlot(cfg.mixture, cfg.axis)) {
    throw ParseError(std::string("mixture.") + axis, "is the sweep axis; remove it from mixture");
  }
  if (cfg.axis == SweepAxis::Omega) {
    if (doc.contains("omega")) throw ParseError("omega", "is the sweep axis; remove it");
    if (cfg.scatterer.kind == ScattererSpec::Kind::File) {
      throw ParseError("sweep.axis", "an omega sweep needs a cavity or inclusion scatterer");
    }
    if (!(cfg.values.front() > 0.0)) throw ParseError("sweep.values", "omega must be positive");
  } else {
    cfg.omega = positive(doc, "", "omega");
  }

  if (!doc.contains("methods") || !doc["methods"].is_array() || doc["methods"].empty()) {
    throw ParseError("methods", "must be a non-empty array");
  }
  for (const auto& m : doc["methods"]) {
    if (!m.is_string()) throw ParseError("methods", "entries must be strings");
    cfg.methods.push_back(methodFromName(m.get<std::string>()));
  }

  if (doc.contains("solver")) {
    const auto& s = doc["solver"];
    allowKeys(s, "solver", {"method", "maxIterations", "relTolerance", "truncation"});
    if (s.contains("method")) {
      const std::string name = s["method"].is_string() ? s["method"].get<std::string>() : "";
      if (name == "newton") {
        cfg.solver.method = RootMethod::Newton;
      } else if (name == "muller") {
        cfg.solver.method = RootMethod::Muller;
      } else {
        throw ParseError("solver.method", "must be newton or muller");
      }
    }
    if (s.contains("maxIterations")) {
      if (!s["maxIterations"].is_number_integer() || s["maxIterations"].get<int>() < 1) {
        throw ParseError("solver.maxIterations", "must be a positive integer");
      }
      cfg.solver.maxIterations = s["maxIterations"].get<int>();
    }
    if (s.contains("relTolerance")) cfg.solver.relTolerance = positive(s, "solver", "relTolerance");
    if (s.contains("truncation")) {
      if (!s["truncation"].is_number_integer() || s["truncation"].get<int>() < 0) {
        throw ParseError("solver.truncation", "must be a non-negative integer");
      }
      cfg.solver.truncation = s["truncation"].get<int>();
    }
  }
  if (doc.contains("compare")) {
    allowKeys(doc["compare"], "compare", {"tolerance"});
    cfg.compareTolerance = positive(doc["compare"], "compare", "tolerance");
  }
  if (doc.contains("output")) {
    const auto& o = doc["output"];
    allowKeys(o, "output", {"path", "format"});
    if (o.contains("path")) {
      if (!o["path"].is_string()) throw ParseError("output.path", "must be a string");
      cfg.outputPath = o["path"].get<std::string>();
    }
    if (o.contains("format")) {
      const std::string f = o["format"].is_string() ? o["format"].get<std::string>() : "";
      if (f != "csv" && f != "json") throw ParseError("output.format", "must be csv or json");
      cfg.format = f;
    }
  }
  if (doc.contains("threads")) {
    if (!doc["threads"].is_number_integer() || doc["threads"].get<int>() < 1) {
      throw ParseError("threads", "must be a positive integer");
    }
    cfg.threads = doc["threads"].get<int>();
  }

  // Fail fast on an unusable mixture closure.
  resolveMixture(cfg, cfg.values.front() > 0.0 ? cfg.values.front() : cfg.values.back());
  return cfg;
}

RunConfig loadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parseConfig(ss.str(), path.parent_path());
}

TMatrix buildScatterer(const RunConfig& cfg, const HostMedium& host) {
  const auto& s = cfg.scatterer;
  switch (s.kind) {
    case ScattererSpec::Kind::Cavity: {
      const int order = s.order > 0 ? s.order : autoCavityOrder(host, s.radius);
      return buildCavityTMatrix(host, s.radius, order);
    }
    case ScattererSpec::Kind::Inclusion: {
      const InclusionMaterial inc{s.rho, host.omega / s.cL, host.omega / s.cT};
      const int order = s.order > 0 ? s.order : autoInclusionOrder(host, inc, s.radius);
      return buildInclusionTMatrix(host, inc, s.radius, order);
    }
    case ScattererSpec::Kind::File: {
      std::filesystem::path p(s.path);
      if (p.is_relative() && !cfg.baseDir.empty()) p = cfg.baseDir / p;
      return loadTMatrix(p);
    }
  }
  throw Error("unknown scatterer kind");
}

PointSetup setupPoint(const RunConfig& cfg, double value) {
  const double omega = cfg.axis == SweepAxis::Omega ? value : cfg.omega;
  PointSetup p;
  p.host = HostMedium::fromSpeeds(cfg.rho, cfg.cL, cfg.cT, omega);
  p.mixture = resolveMixture(cfg, value);
  p.tm = buildScatterer(cfg, p.host);
  return p;
}

std::vector<ResultRow> runSweep(const RunConfig& cfg, int threads) {
  const int count = static_cast<int>(cfg.values.size());
  std::vector<std::vector<ResultRow>> perPoint(static_cast<std::size_t>(count));
  parallelFor(count, threads, [&](int i) { perPoint[static_cast<std::size_t>(i)] = evaluatePoint(cfg, i); });
  std::vector<ResultRow> rows;
  for (auto& v : perPoint) {
    for (auto& r : v) rows.push_back(std::move(r));
  }
  return rows;
}

bool allSucceeded(const std::vector<ResultRow>& rows) {
  return std::all_of(rows.begin(), rows.end(), [](const ResultRow& r) { return r.status == "ok"; });
}

const std::vector<std::string>& csvColumns() {
  static const std::vector<std::string> cols = {
      "sweep_index", "sweep_value", "omega",    "n0",       "a",        "b",
      "c",           "method",      "branch",   "status",   "re_xi",    "im_xi",
      "phase_velocity", "attenuation", "residual", "truncation", "r_ll_re", "r_ll_im",
      "r_lt_re",     "r_lt_im",     "r_tl_re",  "r_tl_im",  "r_tt_re",  "r_tt_im",
      "message"};
  return cols;
}

std::string formatCsv(const std::vector<ResultRow>& rows) {
  std::string out;
  const auto& cols = csvColumns();
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
  out += "\n";
  for (const auto& r : rows) {
    const auto f = rowFields(r);
    for (std::size_t i = 0; i < f.size(); ++i) out += (i ? "," : "") + f[i];
    out += "\n";
  }
  return out;
}

std::string formatJson(const std::vector<ResultRow>& rows) {
  json arr = json::array();
  const auto& cols = csvColumns();
  for (const auto& r : rows) {
    const auto f = rowFields(r);
    json obj = json::object();
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const std::string& key = cols[i];
      const std::string& val = f[i];
      const bool text = key == "method" || key == "branch" || key == "status" || key == "message";
      if (text) {
        obj[key] = val;
      } else if (val.empty()) {
        obj[key] = nullptr;
      } else if (key == "sweep_index" || key == "truncation") {
        obj[key] = std::stoi(val);
      } else {
        obj[key] = std::stod(val);
      }
    }
    arr.push_back(std::move(obj));
  }
  json doc;
  doc["rows"] = std::move(arr);
  return doc.dump(2) + "\n";
}

CompareReport compareMethods(const RunConfig& cfgIn, int threads) {
  RunConfig cfg = cfgIn;
  cfg.methods.erase(std::remove_if(cfg.methods.begin(), cfg.methods.end(), isReflectionMethod),
                    cfg.methods.end());
  if (cfg.methods.size() < 2) throw ParseError("methods", "compare needs at least two wavenumber methods");
  const auto rows = runSweep(cfg, threads);

  CompareReport rep;
  rep.tolerance = cfg.compareTolerance;
  // (index, branch) -> method -> xi, in config order.
  std::map<std::pair<int, std::string>, std::vector<std::pair<std::string, std::optional<cplx>>>> grid;
  for (const auto& r : rows) grid[{r.sweepIndex, r.branch}].push_back({r.method, r.xi});
  for (const auto& [key, entries] : grid) {
    for (std::size_t i = 0; i < entries.size(); ++i) {
      for (std::size_t j = i + 1; j < entries.size(); ++j) {
        PairDivergence d;
        d.sweepIndex = key.first;
        d.sweepValue = cfg.values[static_cast<std::size_t>(key.first)];
        d.branch = key.second;
        d.methodA = entries[i].first;
        d.methodB = entries[j].first;
        if (entries[i].second && entries[j].second) {
          const cplx a = *entries[i].second, b = *entries[j].second;
          d.relDiff = std::abs(a - b) / std::abs(a);
        } else {
          d.relDiff = std::nan("");
        }
        rep.pairs.push_back(d);
      }
    }
  }
  const bool haveFull = std::find(cfg.methods.begin(), cfg.methods.end(), Method::Full) != cfg.methods.end();
  if (haveFull) {
    for (Method m : cfg.methods) {
      if (m == Method::Full) continue;
      for (const char* branch : {"quasiP", "quasiSV"}) {
        MethodRegime reg;
        reg.method = methodName(m);
        reg.branch = branch;
        bool contiguous = true;
        for (const auto& d : rep.pairs) {
          if (d.branch != branch) continue;
          const bool involves = (d.methodA == "full" && d.methodB == reg.method) ||
                                (d.methodB == "full" && d.methodA == reg.method);
          if (!involves) continue;
          ++reg.points;
          const bool within = std::isfinite(d.relDiff) && d.relDiff <= rep.tolerance;
          if (within) ++reg.pointsWithin;
          if (within && contiguous) {
            reg.validUpTo = d.sweepValue;
          } else {
            contiguous = false;
          }
        }
        rep.regimes.push_back(reg);
      }
    }
  }
  return rep;
}

std::string formatCompareCsv(const CompareReport& r) {
  std::string out = "sweep_index,sweep_value,branch,method_a,method_b,rel_diff\n";
  for (const auto& d : r.pairs) {
    out += std::to_string(d.sweepIndex) + "," + formatNumber(d.sweepValue) + "," + d.branch + "," +
           d.methodA + "," + d.methodB + "," +
           (std::isfinite(d.relDiff) ? formatNumber(d.relDiff) : std::string()) + "\n";
  }
  return out;
}

std::string formatCompareJson(const CompareReport& r) {
  json pairs = json::array();
  for (const auto& d : r.pairs) {
    pairs.push_back({{"sweep_index", d.sweepIndex},
                     {"sweep_value", d.sweepValue},
                     {"branch", d.branch},
                     {"method_a", d.methodA},
                     {"method_b", d.methodB},
                     {"rel_diff", std::isfinite(d.relDiff) ? json(d.relDiff) : json(nullptr)}});
  }
  json regimes = json::array();
  for (const auto& g : r.regimes) {
    regimes.push_back({{"method", g.method},
                       {"branch", g.branch},
                       {"points", g.points},
                       {"points_within", g.pointsWithin},
                       {"valid_up_to", optionalJson(g.validUpTo)}});
  }
  json doc;
  doc["tolerance"] = r.tolerance;
  doc["pairs"] = std::move(pairs);
  doc["regimes"] = std::move(regimes);
  return doc.dump(2) + "\n";
}

std::string formatNumber(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace cohscat
