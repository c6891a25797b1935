#include "twistdex/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "scenario_internal.hpp"
#include "twistdex/errors.hpp"
#include "twistdex/parallel.hpp"
#include "twistdex/prng.hpp"
#include "twistdex/version.hpp"

namespace twistdex {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void parseFail(const std::string& msg) {
  fail(ErrorCode::ParseError, msg);
}

void requireKeys(const json& j, const std::vector<std::string>& allowed,
                 const char* where) {
  if (!j.is_object()) {
    parseFail(std::string(where) + " must be a JSON object");
  }
  for (const auto& item : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      parseFail(std::string("unknown key \"") + item.key() + "\" in " + where);
    }
  }
}

Complex parseComplex(const json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return Complex(j[0].get<double>(), j[1].get<double>());
  }
  parseFail("complex values are numbers or [re, im] pairs");
}

ComplexMatrix parseMatrix(const json& j, const char* where) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    parseFail(std::string(where) + " must be a nonempty array of rows");
  }
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      parseFail(std::string(where) + " rows must all have the same length");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          parseComplex(j[r][c]);
    }
  }
  return m;
}

std::vector<ComplexMatrix> parseMatrixList(const json& j, const char* where) {
  if (!j.is_array()) parseFail(std::string(where) + " must be an array");
  std::vector<ComplexMatrix> out;
  out.reserve(j.size());
  for (const auto& item : j) out.push_back(parseMatrix(item, where));
  return out;
}

std::uint64_t parseSeed(const json& j) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  }
  parseFail("seeds must be nonnegative integers");
}

ScenarioIdempotent parseIdempotent(const json& j) {
  requireKeys(j, {"kind", "q", "seed", "select", "entries"}, "idempotents[]");
  ScenarioIdempotent out;
  out.kind = j.value("kind", std::string("seeded"));
  if (out.kind != "seeded" && out.kind != "explicit") {
    parseFail("idempotent kind must be \"seeded\" or \"explicit\"");
  }
  out.q = j.value("q", 1);
  if (j.contains("seed")) out.seed = parseSeed(j.at("seed"));
  if (j.contains("select")) {
    for (const auto& v : j.at("select")) out.select.push_back(v.get<int>());
  }
  if (j.contains("entries")) {
    out.entries = parseMatrixList(j.at("entries"), "idempotent entries");
  }
  if (out.kind == "explicit" && out.entries.empty()) {
    parseFail("explicit idempotents need entries");
  }
  return out;
}

ScenarioConnection parseConnection(const json& j) {
  requireKeys(j, {"q", "seed", "termCount", "terms"}, "connections[]");
  ScenarioConnection out;
  out.q = j.value("q", 1);
  if (j.contains("seed")) out.seed = parseSeed(j.at("seed"));
  out.termCount = j.value("termCount", 4);
  if (j.contains("terms")) {
    out.seeded = false;
    for (const auto& tj : j.at("terms")) {
      requireKeys(tj, {"i", "j", "left", "right"}, "connection term");
      ConnectionTerm term;
      term.i = tj.at("i").get<int>();
      term.j = tj.at("j").get<int>();
      term.left = parseMatrix(tj.at("left"), "connection term left");
      term.right = parseMatrix(tj.at("right"), "connection term right");
      out.terms.push_back(std::move(term));
    }
  }
  return out;
}

ScenarioFamily parseFamily(const json& j) {
  requireKeys(j, {"kind", "seed", "amplitude", "pieces"}, "homotopy families[]");
  ScenarioFamily out;
  out.kind = j.value("kind", std::string("polynomial"));
  if (out.kind != "polynomial" && out.kind != "doubling" && out.kind != "pieces") {
    parseFail("family kind must be \"polynomial\", \"doubling\" or \"pieces\"");
  }
  if (j.contains("seed")) out.seed = parseSeed(j.at("seed"));
  out.amplitude = j.value("amplitude", 0.4);
  if (j.contains("pieces")) {
    for (const auto& pj : j.at("pieces")) {
      requireKeys(pj, {"t0", "t1", "coefficients"}, "family piece");
      PolyPiece piece;
      piece.t0 = pj.value("t0", 0.0);
      piece.t1 = pj.value("t1", 1.0);
      piece.coefficients =
          parseMatrixList(pj.at("coefficients"), "piece coefficients");
      out.pieces.push_back(std::move(piece));
    }
  }
  if (out.kind == "pieces" && out.pieces.empty()) {
    parseFail("piecewise families need pieces");
  }
  return out;
}

Scenario parseScenarioJson(const json& doc) {
  requireKeys(doc,
              {"formatVersion", "name", "seed", "space", "summability", "dirac",
               "algebra", "automorphism", "conformal", "idempotents",
               "connections", "homotopy", "checks", "tolerances",
               "expectSignals"},
              "scenario");
  Scenario s;
  if (!doc.contains("formatVersion") || !doc.at("formatVersion").is_number_integer()) {
    parseFail("scenario needs an integer formatVersion");
  }
  s.formatVersion = doc.at("formatVersion").get<int>();
  if (s.formatVersion != 1) parseFail("unsupported scenario format version");
  s.name = doc.value("name", std::string());
  if (s.name.empty()) parseFail("scenario needs a name");
  if (doc.contains("seed")) s.seed = parseSeed(doc.at("seed"));

  if (!doc.contains("space")) parseFail("scenario needs a space");
  requireKeys(doc.at("space"), {"dimPlus", "dimMinus"}, "space");
  s.space.dimPlus = doc.at("space").value("dimPlus", 0);
  s.space.dimMinus = doc.at("space").value("dimMinus", 0);
  if (s.space.dimPlus < 0 || s.space.dimMinus < 0 || s.space.total() < 1 ||
      s.space.total() > 64) {
    parseFail("space dimensions must be nonnegative with total in [1, 64]");
  }
  s.summability = doc.value("summability", 1.0);

  if (doc.contains("dirac")) {
    const json& dj = doc.at("dirac");
    requireKeys(dj, {"kind", "matrix", "scale", "invertible"}, "dirac");
    s.diracKind = dj.value("kind", std::string("random-odd-selfadjoint"));
    if (s.diracKind != "random-odd-selfadjoint" && s.diracKind != "explicit" &&
        s.diracKind != "zero") {
      parseFail("dirac kind must be \"random-odd-selfadjoint\", \"explicit\" or \"zero\"");
    }
    if (dj.contains("matrix")) s.diracMatrix = parseMatrix(dj.at("matrix"), "dirac matrix");
    if (s.diracKind == "explicit" && s.diracMatrix.size() == 0) {
      parseFail("explicit dirac needs a matrix");
    }
    s.diracScale = dj.value("scale", 1.0);
    s.diracInvertible = dj.value("invertible", true);
  }

  if (doc.contains("algebra")) {
    const json& aj = doc.at("algebra");
    requireKeys(aj, {"kind", "generators"}, "algebra");
    s.algebraKind = aj.value("kind", std::string("full-even"));
    if (s.algebraKind != "full-even" && s.algebraKind != "generated") {
      parseFail("algebra kind must be \"full-even\" or \"generated\"");
    }
    if (aj.contains("generators")) {
      s.generators = parseMatrixList(aj.at("generators"), "algebra generators");
    }
    if (s.algebraKind == "generated" && s.generators.empty()) {
      parseFail("generated algebras need generators");
    }
  }

  if (doc.contains("automorphism")) {
    const json& sj = doc.at("automorphism");
    requireKeys(sj, {"kind", "k", "random", "spread", "spanningSet", "images",
                     "rootImages"},
                "automorphism");
    s.sigmaKind = sj.value("kind", std::string("identity"));
    if (s.sigmaKind != "identity" && s.sigmaKind != "inner" &&
        s.sigmaKind != "linear") {
      parseFail("automorphism kind must be \"identity\", \"inner\" or \"linear\"");
    }
    if (sj.contains("k")) s.innerK = parseMatrix(sj.at("k"), "automorphism k");
    s.innerRandom = sj.value("random", false);
    s.innerSpread = sj.value("spread", 0.3);
    if (s.sigmaKind == "inner" && !s.innerRandom && s.innerK.size() == 0) {
      parseFail("inner automorphisms need k or random: true");
    }
    if (sj.contains("spanningSet")) {
      s.linearSpan = parseMatrixList(sj.at("spanningSet"), "spanningSet");
    }
    if (sj.contains("images")) {
      s.linearImages = parseMatrixList(sj.at("images"), "images");
    }
    if (sj.contains("rootImages")) {
      s.linearRootImages = parseMatrixList(sj.at("rootImages"), "rootImages");
    }
    if (s.sigmaKind == "linear" &&
        (s.linearSpan.empty() || s.linearSpan.size() != s.linearImages.size())) {
      parseFail("linear automorphisms need matching spanningSet and images");
    }
  }

  if (doc.contains("conformal")) {
    const json& cj = doc.at("conformal");
    requireKeys(cj, {"enabled", "k", "random", "spread"}, "conformal");
    s.conformalEnabled = cj.value("enabled", false);
    if (cj.contains("k")) s.conformalK = parseMatrix(cj.at("k"), "conformal k");
    s.conformalRandom = cj.value("random", false);
    s.conformalSpread = cj.value("spread", 0.3);
    if (s.conformalEnabled && !s.conformalRandom && s.conformalK.size() == 0) {
      parseFail("conformal blocks need k or random: true");
    }
  }

  if (doc.contains("idempotents")) {
    for (const auto& ij : doc.at("idempotents")) {
      s.idempotents.push_back(parseIdempotent(ij));
    }
  }
  if (doc.contains("connections")) {
    for (const auto& cj : doc.at("connections")) {
      s.connections.push_back(parseConnection(cj));
    }
  }
  if (doc.contains("homotopy")) {
    const json& hj = doc.at("homotopy");
    requireKeys(hj, {"families", "cocycleDegree", "gridPoints", "panels",
                     "refinedPanels", "sampleTuples"},
                "homotopy");
    ScenarioHomotopy h;
    if (hj.contains("families")) {
      for (const auto& fj : hj.at("families")) h.families.push_back(parseFamily(fj));
    }
    if (h.families.empty()) parseFail("homotopy blocks need families");
    h.cocycleDegree = hj.value("cocycleDegree", 1);
    h.gridPoints = hj.value("gridPoints", 17);
    h.panels = hj.value("panels", 64);
    h.refinedPanels = hj.value("refinedPanels", 128);
    h.sampleTuples = hj.value("sampleTuples", 4);
    s.homotopy = std::move(h);
  }
  if (doc.contains("checks")) {
    for (const auto& cj : doc.at("checks")) {
      if (!cj.is_string()) parseFail("check names must be strings");
      s.checks.push_back(cj.get<std::string>());
    }
  }
  if (doc.contains("tolerances")) {
    const json& tj = doc.at("tolerances");
    requireKeys(tj, {"default", "overrides"}, "tolerances");
    s.defaultTolerance = tj.value("default", 0.0);
    if (tj.contains("overrides")) {
      for (const auto& item : tj.at("overrides").items()) {
        s.toleranceOverrides[item.key()] = item.value().get<double>();
      }
    }
  }
  if (doc.contains("expectSignals")) {
    for (const auto& item : doc.at("expectSignals").items()) {
      if (!item.value().is_string()) parseFail("expected signals must be strings");
      s.expectSignals[item.key()] = item.value().get<std::string>();
    }
  }
  return s;
}

// ----- materialization helpers -----

ComplexMatrix randomOddSelfadjoint(const GradedSpace& s, Prng& rng) {
  ComplexMatrix b(s.dimPlus, s.dimMinus);
  for (int i = 0; i < s.dimPlus; ++i) {
    for (int j = 0; j < s.dimMinus; ++j) b(i, j) = rng.complexSym();
  }
  ComplexMatrix m = ComplexMatrix::Zero(s.total(), s.total());
  m.topRightCorner(s.dimPlus, s.dimMinus) = b;
  m.bottomLeftCorner(s.dimMinus, s.dimPlus) = b.adjoint();
  return m;
}

ComplexMatrix randomPositiveEven(const GradedSpace& s, Prng& rng, double spread) {
  const auto hermitianBlock = [&rng](int n) {
    ComplexMatrix x(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) x(i, j) = rng.complexSym();
    }
    return ComplexMatrix(0.5 * (x + x.adjoint()));
  };
  ComplexMatrix h = ComplexMatrix::Zero(s.total(), s.total());
  if (s.dimPlus > 0) h.topLeftCorner(s.dimPlus, s.dimPlus) = hermitianBlock(s.dimPlus);
  if (s.dimMinus > 0) {
    h.bottomRightCorner(s.dimMinus, s.dimMinus) = hermitianBlock(s.dimMinus);
  }
  const double top = singularValues(h).maxCoeff();
  if (top > 0.0) h /= top;
  const double clamped = std::clamp(spread, 0.0, 0.9);
  return ComplexMatrix::Identity(s.total(), s.total()) + clamped * h;
}

}  // namespace

namespace detail {

Materialized materializeScenario(const Scenario& s, std::uint64_t seed) {
  // Algebra.
  MatrixAlgebra algebra = (s.algebraKind == "generated")
                              ? MatrixAlgebra::generated(s.space, s.generators)
                              : MatrixAlgebra::fullEven(s.space);

  // Automorphism.
  Automorphism sigma = Automorphism::identity(s.space);
  if (s.sigmaKind == "inner") {
    ComplexMatrix k = s.innerK;
    if (s.innerRandom) {
      Prng rng(seed ^ 0x1a2b3c4d5e6f7788ull);
      k = randomPositiveEven(s.space, rng, s.innerSpread);
    }
    sigma = Automorphism::inner(s.space, k);
  } else if (s.sigmaKind == "linear") {
    sigma = Automorphism::linear(s.space, s.linearSpan, s.linearImages);
    if (!s.linearRootImages.empty()) {
      sigma.declareRoot(
          Automorphism::linear(s.space, s.linearSpan, s.linearRootImages));
    }
  }

  // Operator.
  ComplexMatrix d;
  if (s.diracKind == "zero") {
    d = ComplexMatrix::Zero(s.space.total(), s.space.total());
  } else if (s.diracKind == "explicit") {
    d = s.diracScale * s.diracMatrix;
  } else {
    Prng rng(seed ^ 0x0d17ac0d17ac0d17ull);
    if (s.diracInvertible && s.space.dimPlus != s.space.dimMinus) {
      fail(ErrorCode::InvalidArgument,
           "an invertible odd operator needs equal sector dimensions");
    }
    bool found = false;
    for (int attempt = 0; attempt < 64 && !found; ++attempt) {
      const ComplexMatrix candidate = randomOddSelfadjoint(s.space, rng);
      if (!s.diracInvertible) {
        d = candidate;
        found = true;
        break;
      }
      const RealVector sv = singularValues(candidate);
      if (sv.minCoeff() > 1e-3 * sv.maxCoeff()) {
        d = candidate;
        found = true;
      }
    }
    if (!found) {
      fail(ErrorCode::NumericFailure,
           "could not draw a well-conditioned odd operator");
    }
    d *= s.diracScale;
  }

  Materialized mat{
      makeTwistedTriple(algebra, d, sigma, s.summability), {}, {}, {}};

  // Conformal deformation replaces the working triple; the base stays
  // available for transport checks.
  if (s.conformalEnabled) {
    ComplexMatrix k = s.conformalK;
    if (s.conformalRandom) {
      Prng rng(seed ^ 0xc0f0c0f0c0f0c0f0ull);
      k = randomPositiveEven(s.space, rng, s.conformalSpread);
    }
    TwistedTriple base = mat.triple;
    mat.triple = conformalDeformation(base, k);
    mat.conformalBase = std::move(base);
    mat.conformalK = k;
  }

  for (const auto& entry : s.idempotents) {
    if (entry.kind == "explicit") {
      mat.idempotents.push_back(
          makeIdempotent(mat.triple, entry.q, entry.entries));
    } else {
      mat.idempotents.push_back(
          seededIdempotent(mat.triple, entry.q, entry.seed, entry.select));
    }
  }
  return mat;
}

}  // namespace detail

Scenario parseScenario(const std::string& jsonText) {
  json doc;
  try {
    doc = json::parse(jsonText);
  } catch (const json::exception& e) {
    parseFail(std::string("scenario is not valid JSON: ") + e.what());
  }
  try {
    return parseScenarioJson(doc);
  } catch (const json::exception& e) {
    parseFail(std::string("scenario structure is malformed: ") + e.what());
  }
}

Scenario loadScenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) fail(ErrorCode::Io, "cannot read scenario file: " + path);
  return parseScenario(buf.str());
}

std::vector<std::string> listCheckNames() {
  std::vector<std::string> names;
  for (const auto& entry : detail::checkRegistry()) names.push_back(entry.name);
  return names;
}

RunReport runScenario(const Scenario& s, const RunOptions& opts) {
  RunReport rep;
  rep.scenarioName = s.name;
  rep.seed = opts.seed.value_or(s.seed);
  const int threads = resolveThreadCount(opts.threads);

  std::optional<detail::Materialized> mat;
  try {
    mat.emplace(detail::materializeScenario(s, rep.seed));
  } catch (const Error& err) {
    CheckResult r;
    r.name = "materialize";
    r.anchor = "scenario.materialize";
    r.signal = errorCodeName(err.code());
    const auto it = s.expectSignals.find("materialize");
    r.passed = (it != s.expectSignals.end() && it->second == r.signal);
    r.note = r.passed ? "signaled as expected" : err.what();
    rep.checks.push_back(std::move(r));
    rep.allPassed = rep.checks.back().passed;
    return rep;
  }

  const auto& registry = detail::checkRegistry();
  std::vector<const detail::RegisteredCheck*> selected;
  if (!s.checks.empty()) {
    for (const auto& name : s.checks) {
      const auto it = std::find_if(
          registry.begin(), registry.end(),
          [&name](const detail::RegisteredCheck& entry) { return name == entry.name; });
      if (it == registry.end()) {
        fail(ErrorCode::InvalidArgument, "unknown check name: " + name);
      }
      selected.push_back(&*it);
    }
  } else {
    const double opNorm = mat->triple.dirac.operatorNorm();
    const bool invertible =
        mat->triple.dirac.minSingularValue() > 1e-10 * std::max(opNorm, 1e-300);
    for (const auto& entry : registry) {
      if (!entry.applicable(s)) continue;
      if (entry.needsInvertible && !invertible) continue;
      selected.push_back(&entry);
    }
  }

  for (const auto* entry : selected) {
    double tol = entry->defaultTolerance;
    if (opts.tolerance) tol = *opts.tolerance;
    if (s.defaultTolerance > 0.0) tol = s.defaultTolerance;
    const auto ov = s.toleranceOverrides.find(entry->name);
    if (ov != s.toleranceOverrides.end()) tol = ov->second;

    const detail::CheckContext ctx{s, *mat, rep.seed, threads, tol};
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r;
    try {
      r = entry->fn(ctx);
      const auto it = s.expectSignals.find(entry->name);
      if (it != s.expectSignals.end()) {
        r.passed = false;
        r.note = "expected signal " + it->second + " but the check completed";
      }
    } catch (const Error& err) {
      r = CheckResult{};
      r.signal = errorCodeName(err.code());
      const auto it = s.expectSignals.find(entry->name);
      if (it != s.expectSignals.end() && it->second == r.signal) {
        r.passed = true;
        r.note = "signaled as expected";
      } else {
        r.passed = false;
        r.note = err.what();
      }
    }
    const auto t1 = std::chrono::steady_clock::now();
    r.name = entry->name;
    r.anchor = entry->anchor;
    if (r.tolerance == 0.0) r.tolerance = tol;
    r.wallMs = std::chrono::duration<double, std::milli>(t1 - t0).count();
    rep.checks.push_back(std::move(r));
  }

  rep.allPassed = true;
  for (const auto& c : rep.checks) {
    if (!c.passed) rep.allPassed = false;
  }
  return rep;
}

std::string reportToJsonLines(const RunReport& r) {
  std::string out;
  ordered_json header;
  header["type"] = "header";
  header["tool"] = "twistdex";
  header["version"] = kVersion;
  header["formatVersion"] = kReportFormatVersion;
  header["scenario"] = r.scenarioName;
  header["seed"] = r.seed;
  out += header.dump();
  out += "\n";

  int failures = 0;
  for (const auto& c : r.checks) {
    if (!c.passed) ++failures;
    ordered_json j;
    j["type"] = "check";
    j["name"] = c.name;
    j["anchor"] = c.anchor;
    j["passed"] = c.passed;
    j["residual"] = c.residual;
    j["scale"] = c.scale;
    j["tolerance"] = c.tolerance;
    j["signal"] = c.signal;
    j["note"] = c.note;
    ordered_json vals = ordered_json::object();
    for (const auto& [key, value] : c.values) vals[key] = value;
    j["values"] = vals;
    j["wallMs"] = c.wallMs;
    out += j.dump();
    out += "\n";
  }

  ordered_json summary;
  summary["type"] = "summary";
  summary["passed"] = r.allPassed;
  summary["checks"] = static_cast<int>(r.checks.size());
  summary["failures"] = failures;
  out += summary.dump();
  out += "\n";
  return out;
}

std::string reportToTable(const RunReport& r) {
  std::string out = "scenario " + r.scenarioName + " (seed " +
                    std::to_string(r.seed) + ")\n";
  int failures = 0;
  for (const auto& c : r.checks) {
    if (!c.passed) ++failures;
    char line[256];
    std::snprintf(line, sizeof(line), "%-6s %-22s residual %9.3e  tol %9.3e",
                  c.passed ? "PASS" : "FAIL", c.name.c_str(), c.residual,
                  c.tolerance);
    out += line;
    if (!c.signal.empty()) {
      out += "  signal ";
      out += c.signal;
    }
    if (!c.note.empty()) {
      out += "  (";
      out += c.note;
      out += ")";
    }
    out += "\n";
  }
  out += std::to_string(r.checks.size()) + " checks, " +
         std::to_string(failures) + " failures\n";
  return out;
}

}  // namespace twistdex
