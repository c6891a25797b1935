#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "scenario_internal.hpp"
#include "twistdex/chern.hpp"
#include "twistdex/connections.hpp"
#include "twistdex/cyclic.hpp"
#include "twistdex/errors.hpp"
#include "twistdex/index.hpp"
#include "twistdex/prng.hpp"

namespace twistdex {
namespace detail {
namespace {

constexpr double kTiny = 1e-300;

double relative(double x, double scale) { return x / std::max(scale, kTiny); }

std::string tag(const char* prefix, std::size_t i) {
  return std::string(prefix) + std::to_string(i);
}

const std::vector<Idempotent>& requireModules(const CheckContext& ctx) {
  if (ctx.mat.idempotents.empty()) {
    fail(ErrorCode::InvalidArgument, "this check needs at least one idempotent");
  }
  return ctx.mat.idempotents;
}

bool always(const Scenario&) { return true; }
bool hasModules(const Scenario& s) { return !s.idempotents.empty(); }
bool hasConformal(const Scenario& s) { return s.conformalEnabled; }
bool hasHomotopy(const Scenario& s) { return s.homotopy.has_value(); }
bool hasConnections(const Scenario& s) {
  return !s.connections.empty() && !s.idempotents.empty();
}

// ----- structural axioms -----

CheckResult checkValidateTriple(const CheckContext& ctx) {
  const ElementSampler sampler{ctx.seed ^ 0xa11ceull, 3, 1.0};
  const ValidationReport rep =
      validateTriple(ctx.mat.triple, sampler, 8, ctx.tolerance);
  CheckResult r;
  double worst = 0.0;
  for (const auto& issue : rep.issues) {
    if (issue.skipped) {
      r.note = issue.check + ": " + issue.note;
      continue;
    }
    const double rel = relative(issue.residual, issue.scale);
    worst = std::max(worst, rel);
    r.values.emplace_back(issue.check, rel);
  }
  r.residual = worst;
  r.passed = rep.allPassed();
  return r;
}

// ----- conformal transport -----

CheckResult checkConformalCommutator(const CheckContext& ctx) {
  if (!ctx.mat.conformalBase) {
    fail(ErrorCode::InvalidArgument, "scenario has no conformal block");
  }
  const TwistedTriple& base = *ctx.mat.conformalBase;
  const TwistedTriple& deformed = ctx.mat.triple;
  const ComplexMatrix& k = ctx.mat.conformalK;
  const ComplexMatrix kinv = k.inverse();
  const ComplexMatrix d = base.dirac.matrix();

  const ElementSampler sampler{ctx.seed ^ 0xc04f04ull, 3, 1.0};
  const std::vector<ComplexMatrix> samples = sampler.sample(base.algebra, 8);

  CheckResult r;
  double worst = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const ComplexMatrix lhs = twistedCommutator(deformed, samples[i]).matrix();
    const ComplexMatrix moved = k * samples[i] * kinv;
    const ComplexMatrix rhs = k * (d * moved - moved * d) * k;
    const double rel = relative((lhs - rhs).norm(),
                                std::max(lhs.norm(), rhs.norm()));
    worst = std::max(worst, rel);
    r.values.emplace_back(tag("sample.a", i), rel);
  }
  r.residual = worst;
  r.passed = worst <= ctx.tolerance;
  return r;
}

// ----- kernel dimensions and index bookkeeping -----

CheckResult checkIndexKernels(const CheckContext& ctx) {
  const auto& modules = requireModules(ctx);
  CheckResult r;
  double worst = 0.0;
  bool marginal = false;
  for (std::size_t i = 0; i < modules.size(); ++i) {
    const CompressedOperator c = compress(ctx.mat.triple, modules[i]);
    const IndexReport rep = indexFromCompressed(c);
    worst = std::max(worst, c.reconstructionResidual);
    marginal = marginal || rep.illConditioned || c.illConditioned;
    r.values.emplace_back(tag("index.e", i), rep.index);
    r.values.emplace_back(tag("kerPlus.e", i), rep.kerPlus);
    r.values.emplace_back(tag("kerMinus.e", i), rep.kerMinus);
  }
  if (marginal) r.note = "a rank decision was marginal";
  r.residual = worst;
  r.passed = worst <= ctx.tolerance;
  return r;
}

CheckResult checkAdjointIdentity(const CheckContext& ctx) {
  const auto& modules = requireModules(ctx);
  CheckResult r;
  double worst = 0.0;
  for (std::size_t i = 0; i < modules.size(); ++i) {
    const AdjointIdentityReport rep =
        adjointIdentityCheck(ctx.mat.triple, modules[i]);
    const double rel = std::max(rep.residualPlus, rep.residualMinus);
    worst = std::max(worst, rel);
    r.values.emplace_back(tag("residual.e", i), rel);
  }
  r.residual = worst;
  r.passed = worst <= ctx.tolerance;
  return r;
}

CheckResult checkParametrix(const CheckContext& ctx) {
  const auto& modules = requireModules(ctx);
  CheckResult r;
  double worst = 0.0;
  for (std::size_t i = 0; i < modules.size(); ++i) {
    const ParametrixReport rep = parametrixCheck(ctx.mat.triple, modules[i]);
    const double rel = std::max(rep.leftResidual, rep.rightResidual);
    worst = std::max(worst, rel);
    r.values.emplace_back(tag("residual.e", i), rel);
  }
  r.residual = worst;
  r.passed = worst <= ctx.tolerance;
  return r;
}

CheckResult checkTraceFormula(const CheckContext& ctx) {
  const auto& modules = requireModules(ctx);
  CheckResult r;
  double worst = 0.0;
  bool bookkeeping = true;
  for (std::size_t i = 0; i < modules.size(); ++i) {
    const TraceFormulaReport rep =
        traceFormulaCheck(ctx.mat.triple, modules[i], {1, 2, 3});
    const IndexReport idx = fredholmIndex(ctx.mat.triple, modules[i]);
    for (std::size_t m = 0; m < rep.residuals.size(); ++m) {
      worst = std::max(worst, rep.residuals[m]);
      r.values.emplace_back(tag("power", m + 1) + tag(".e", i), rep.residuals[m]);
    }
    if (rep.index != idx.indPlus) bookkeeping = false;
    r.values.emplace_back(tag("index.e", i), rep.index);
  }
  if (!bookkeeping) r.note = "trace index disagrees with kernel bookkeeping";
  r.residual = worst;
  r.passed = bookkeeping && worst <= ctx.tolerance;
  return r;
}

// ----- module-class invariance -----

CheckResult checkSimilarity(const CheckContext& ctx) {
  const auto& modules = requireModules(ctx);
  CheckResult r;
  double worst = 0.0;
  for (std::size_t i = 0; i < modules.size(); ++i) {
    const double ind = fredholmIndex(ctx.mat.triple, modules[i]).index;
    r.values.emplace_back(tag("index.e", i), ind);
    for (int j = 0; j < 3; ++j) {
      const std::uint64_t seed =
          ctx.seed ^ (0x51a1ull + 1000 * static_cast<std::uint64_t>(i) +
                      static_cast<std::uint64_t>(j));
      const auto g =
          seededInvertibleEntries(ctx.mat.triple, modules[i].q, seed);
      const Idempotent moved = conjugateIdempotent(ctx.mat.triple, modules[i], g);
      const double gap =
          std::abs(fredholmIndex(ctx.mat.triple, moved).index - ind);
      worst = std::max(worst, gap);
    }
  }
  r.residual = worst;
  r.passed = worst <= ctx.tolerance;
  return r;
}

CheckResult checkDirectSum(const CheckContext& ctx) {
  const auto& modules = requireModules(ctx);
  CheckResult r;
  double worst = 0.0;
  const auto testPair = [&](std::size_t a, std::size_t b) {
    const double indA = fredholmIndex(ctx.mat.triple, modules[a]).index;
    const double indB = fredholmIndex(ctx.mat.triple, modules[b]).index;
    const Idempotent sum = directSum(ctx.mat.triple, modules[a], modules[b]);
    const double indSum = fredholmIndex(ctx.mat.triple, sum).index;
    worst = std::max(worst, std::abs(indSum - indA - indB));
    r.values.emplace_back(
        tag("sum.e", a) + tag(".e", b), indSum);
  };
  if (modules.size() >= 2) {
    for (std::size_t i = 0; i + 1 < modules.size(); ++i) testPair(i, i + 1);
  } else {
    testPair(0, 0);
  }
  r.residual = worst;
  r.passed = worst <= ctx.tolerance;
  return r;
}

CheckResult checkRibbon(const CheckContext& ctx) {
  const auto& modules = requireModules(ctx);
  ribbonSquareRoot(ctx.mat.triple.sigma);
  CheckResult r;
  double worstForm = 0.0;
  double worstGap = 0.0;
  for (std::size_t i = 0; i < modules.size(); ++i) {
    const SigmaConjugationResult res =
        sigmaSelfadjointConjugate(ctx.mat.triple, modules[i]);
    const double form = std::max(
        {res.idempotentResidual, res.sigmaSelfadjointResidual,
         res.conjugacyResidual, res.absorbedLeftResidual,
         res.absorbedRightResidual});
    worstForm = std::max(worstForm, form);
    const double indE = fredholmIndex(ctx.mat.triple, modules[i]).index;
    const double indP = fredholmIndex(ctx.mat.triple, res.p).index;
    const double intGap = std::abs(indE - std::round(indE));
    worstGap = std::max({worstGap, intGap, std::abs(indP - indE)});
    r.values.emplace_back(tag("index.e", i), indE);
    r.values.emplace_back(tag("integerGap.e", i), intGap);
    r.values.emplace_back(tag("condition.e", i), res.conditionNumber);
  }
  r.residual = worstForm;
  r.passed = worstForm <= ctx.tolerance && worstGap <= 10.0 * ctx.tolerance;
  if (!r.passed && worstGap > 10.0 * ctx.tolerance) {
    r.note = "index failed to land on an integer";
  }
  return r;
}

// ----- cochain complex identities -----

CheckResult checkCocycleAlgebra(const CheckContext& ctx) {
  const int n = ctx.mat.triple.space.total();
  Prng rng(ctx.seed ^ 0xc0c7c1eull);
  const auto randomMatrix = [&rng, n]() {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m(i, j) = rng.complexSym();
    }
    return m;
  };
  const auto randomTuple = [&randomMatrix](int count) {
    std::vector<ComplexMatrix> args;
    args.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) args.push_back(randomMatrix());
    return args;
  };

  CheckResult r;
  double worst = 0.0;
  double scale = 0.0;
  int tuples = 0;
  for (int m = 1; m <= 3; ++m) {
    std::vector<ComplexMatrix> weights;
    for (int i = 0; i <= m; ++i) weights.push_back(randomMatrix());
    Cochain phi;
    phi.degree = m;
    phi.argDim = n;
    phi.eval = [weights](const std::vector<ComplexMatrix>& args) {
      ComplexMatrix acc = weights[0] * args[0];
      for (std::size_t j = 1; j < weights.size(); ++j) {
        acc = acc * weights[j] * args[j];
      }
      return acc.trace();
    };

    const Cochain bPhi = hochschildB(phi);
    const Cochain bb = hochschildB(bPhi);
    const Cochain lowered = connesB(phi);
    const Cochain anticommA = hochschildB(lowered);
    const Cochain anticommB = connesB(bPhi);
    Cochain rotated = phi;
    for (int i = 0; i <= m; ++i) rotated = cyclicT(rotated);
    std::optional<Cochain> doubleLowered;
    if (m >= 2) doubleLowered = connesB(lowered);

    for (int rep = 0; rep < 8; ++rep) {
      const auto base = randomTuple(m + 1);
      scale = std::max({scale, std::abs(phi(base)), std::abs(bPhi(randomTuple(m + 2))),
                        std::abs(lowered(randomTuple(m)))});
      worst = std::max(worst, std::abs(bb(randomTuple(m + 3))));
      worst = std::max(worst, std::abs(anticommA(base) + anticommB(base)));
      worst = std::max(worst, std::abs(rotated(base) - phi(base)));
      if (doubleLowered) {
        worst = std::max(worst, std::abs((*doubleLowered)(randomTuple(m - 1))));
      }
      tuples += doubleLowered ? 4 : 3;
    }
  }
  r.residual = relative(worst, scale);
  r.scale = scale;
  r.values.emplace_back("tuples", tuples);
  r.passed = r.residual <= ctx.tolerance;
  return r;
}

// ----- character pairings -----

CheckResult checkChernPairing(const CheckContext& ctx) {
  const auto& modules = requireModules(ctx);
  const TwistedTriple& t = ctx.mat.triple;
  const ComplexMatrix dinv = t.dirac.inverse().matrix();
  CheckResult r;
  double worst = 0.0;
  for (std::size_t i = 0; i < modules.size(); ++i) {
    const Idempotent& e = modules[i];
    const double ind = fredholmIndex(t, e).index;
    r.values.emplace_back(tag("index.e", i), ind);

    const Amplification amp(t.space, e.q);
    const ComplexMatrix dq = amp.diagonal(t.dirac.matrix());
    const ComplexMatrix dqinv = amp.diagonal(dinv);
    const ComplexMatrix em = e.realized.matrix();
    const ComplexMatrix sm = amp.applySigma(t.sigma, em);
    const ComplexMatrix x = dqinv * (dq * em - sm * dq);

    for (int k = 1; k <= 2; ++k) {
      const Cochain tau = tau2k(t, k);
      const Complex paired = pairCyclicCocycle(tau, t, e);
      double gap = std::abs(paired - Complex(ind, 0.0));

      const Complex shifted = pairNormalizedEven({tau}, t, e);
      gap = std::max(gap, std::abs(shifted - paired));

      ComplexMatrix power = x;
      for (int p = 1; p < 2 * k + 1; ++p) power = power * x;
      const Complex direct = 0.5 * supertrace(amp.amplifiedSpace(), power);
      gap = std::max(gap, std::abs(direct - paired));

      if (k == 1) {
        Cochain entrywise = tau;
        entrywise.lifted = nullptr;
        gap = std::max(gap,
                       std::abs(pairCyclicCocycle(entrywise, t, e) - paired));
      }
      worst = std::max(worst, gap);
      r.values.emplace_back(tag("pairing.k", k) + tag(".e", i), paired.real());
    }
  }
  r.residual = worst;
  r.passed = worst <= ctx.tolerance;
  return r;
}

CheckResult checkLemmaRelations(const CheckContext& ctx) {
  const TwistedTriple& t = ctx.mat.triple;
  const ElementSampler sampler{ctx.seed ^ 0x1e44aull, 3, 1.0};
  const std::vector<ComplexMatrix> samples = sampler.sample(t.algebra, 12);
  CheckResult r;
  double worst = 0.0;
  for (int k = 1; k <= 2; ++k) {
    const LemmaReport rep = lemmaRelations(t, k, samples);
    worst = std::max(worst, rep.maxResidual);
    r.values.emplace_back(tag("split.k", k), rep.splitResidual);
    r.values.emplace_back(tag("coboundaryPhi.k", k), rep.coboundaryPhi);
    r.values.emplace_back(tag("coboundaryPsi.k", k), rep.coboundaryPsi);
    r.values.emplace_back(tag("loweringPhi.k", k), rep.loweringPhi);
    r.values.emplace_back(tag("loweringPsi.k", k), rep.loweringPsi);
    r.values.emplace_back(tag("closed.k", k), rep.closedTau);
    r.values.emplace_back(tag("cyclic.k", k), rep.cyclicTau);
    r.values.emplace_back(tag("normalized.k", k), rep.normalizedTau);
  }
  r.residual = worst;
  r.passed = worst <= ctx.tolerance;
  return r;
}

CheckResult checkTauBar(const CheckContext& ctx) {
  const auto& modules = requireModules(ctx);
  const TwistedTriple& t = ctx.mat.triple;
  const DoubledTriple dt = invertibleDouble(t);
  const Cochain restricted = tauBar2k(dt, 1);
  const double opNorm = t.dirac.operatorNorm();
  const bool invertible =
      t.dirac.minSingularValue() > 1e-10 * std::max(opNorm, kTiny);
  std::optional<Cochain> direct;
  if (invertible) direct = tau2k(t, 1);

  CheckResult r;
  double worst = 0.0;
  for (std::size_t i = 0; i < modules.size(); ++i) {
    const double ind = fredholmIndex(t, modules[i]).index;
    const Complex paired = pairCyclicCocycle(restricted, t, modules[i]);
    double gap = std::abs(paired - Complex(ind, 0.0));
    if (direct) {
      gap = std::max(gap,
                     std::abs(pairCyclicCocycle(*direct, t, modules[i]) - paired));
    }
    worst = std::max(worst, gap);
    r.values.emplace_back(tag("index.e", i), ind);
    r.values.emplace_back(tag("pairing.e", i), paired.real());
  }
  r.residual = worst;
  r.passed = worst <= ctx.tolerance;
  if (!invertible) r.note = "operator is singular; compared against kernel index only";
  return r;
}

// ----- homotopy invariance and transgression -----

CheckResult checkHomotopy(const CheckContext& ctx) {
  if (!ctx.scenario.homotopy) {
    fail(ErrorCode::InvalidArgument, "scenario has no homotopy block");
  }
  const auto& h = *ctx.scenario.homotopy;
  const TwistedTriple& t = ctx.mat.triple;
  const double transTol = 100.0 * ctx.tolerance;

  CheckResult r;
  double worst = 0.0;
  bool allPassed = true;
  for (std::size_t fi = 0; fi < h.families.size(); ++fi) {
    const ScenarioFamily& famSpec = h.families[fi];
    std::optional<HomotopyFamily> family;
    std::optional<TwistedTriple> target;
    std::optional<Idempotent> idem;
    if (famSpec.kind == "doubling") {
      const DoubledTriple dt = invertibleDouble(t);
      family = doublingFamily(dt);
      const Idempotent& base = requireModules(ctx).front();
      std::vector<ComplexMatrix> entries;
      entries.reserve(base.entries.size());
      for (const auto& entry : base.entries) entries.push_back(dt.embed(entry));
      idem = makeIdempotent(dt.doubled, base.q, entries);
      target = dt.doubled;
    } else {
      if (famSpec.kind == "polynomial") {
        family = polynomialFamily(t, famSpec.seed, famSpec.amplitude);
      } else {
        family = HomotopyFamily(t.space, famSpec.pieces);
      }
      idem = requireModules(ctx).front();
      target = t;
    }

    HomotopyOptions opts;
    opts.cocycleDegree = h.cocycleDegree;
    opts.gridPoints = h.gridPoints;
    opts.panels = h.panels;
    opts.refinedPanels = h.refinedPanels;
    opts.sampleTuples = h.sampleTuples;
    opts.seed = ctx.seed ^ 0x40e7a0ull;
    opts.threads = ctx.threads;
    const HomotopyReport rep =
        homotopyInvarianceCheck(*target, *family, *idem, opts);

    const bool decayOk = rep.decayFactor >= 8.0 ||
                         rep.refinedTransgressionResidual <= 1e-12;
    const bool ok = rep.gridResidual <= ctx.tolerance &&
                    rep.transgressionResidual <= transTol &&
                    rep.coboundaryResidual <= transTol && decayOk;
    allPassed = allPassed && ok;
    worst = std::max(worst, rep.gridResidual);
    r.values.emplace_back(tag("grid.f", fi), rep.gridResidual);
    r.values.emplace_back(tag("transgression.f", fi), rep.transgressionResidual);
    r.values.emplace_back(tag("refined.f", fi), rep.refinedTransgressionResidual);
    r.values.emplace_back(tag("decay.f", fi), rep.decayFactor);
    r.values.emplace_back(tag("coboundary.f", fi), rep.coboundaryResidual);
    r.values.emplace_back(tag("minSingular.f", fi), rep.minSingularValue);
    if (!ok && r.note.empty()) r.note = "family " + std::to_string(fi) + " failed";
  }
  r.residual = worst;
  r.passed = allPassed;
  return r;
}

// ----- module connections -----

CheckResult checkConnections(const CheckContext& ctx) {
  const auto& modules = requireModules(ctx);
  const TwistedTriple& t = ctx.mat.triple;
  CheckResult r;
  double worstForm = 0.0;
  for (std::size_t i = 0; i < modules.size(); ++i) {
    const double g = grassmannianResidual(t, modules[i]);
    worstForm = std::max(worstForm, g);
    r.values.emplace_back(tag("grassmannian.e", i), g);
  }

  double worstGap = 0.0;
  for (std::size_t j = 0; j < ctx.scenario.connections.size(); ++j) {
    const ScenarioConnection& plan = ctx.scenario.connections[j];
    const Idempotent* idem = nullptr;
    for (const auto& e : modules) {
      if (e.q == plan.q) {
        idem = &e;
        break;
      }
    }
    if (idem == nullptr) {
      fail(ErrorCode::InvalidConnection,
           "no module matches the connection size");
    }
    const SigmaConnection conn =
        plan.seeded ? seededConnection(t, plan.q, plan.seed, plan.termCount)
                    : SigmaConnection{plan.q, plan.terms};
    const ConnectionIndexReport rep = connectionIndexTheorem(t, *idem, conn, 1);
    worstGap = std::max(worstGap, rep.agreementGap);
    r.values.emplace_back(tag("gap.c", j), rep.agreementGap);
    r.values.emplace_back(tag("index.c", j), rep.coupled.index);
  }

  r.residual = std::max(worstGap, 100.0 * worstForm);
  r.passed = r.residual <= ctx.tolerance;
  return r;
}

}  // namespace

const std::vector<RegisteredCheck>& checkRegistry() {
  static const std::vector<RegisteredCheck> registry = {
      {"validate-triple", "triple.axioms", 1e-10, &checkValidateTriple, &always,
       false},
      {"conformal-commutator", "conformal.commutator-transport", 1e-10,
       &checkConformalCommutator, &hasConformal, false},
      {"index-kernels", "index.kernel-dims", 1e-10, &checkIndexKernels,
       &hasModules, false},
      {"adjoint-identity", "index.adjoint-transpose", 1e-9,
       &checkAdjointIdentity, &hasModules, false},
      {"parametrix", "index.parametrix", 1e-10, &checkParametrix, &hasModules,
       true},
      {"hormander", "index.trace-formula", 1e-8, &checkTraceFormula,
       &hasModules, true},
      {"similarity", "ktheory.similarity", 1e-8, &checkSimilarity, &hasModules,
       false},
      {"direct-sum", "ktheory.direct-sum", 1e-8, &checkDirectSum, &hasModules,
       false},
      {"ribbon", "ktheory.sigma-selfadjoint-form", 1e-9, &checkRibbon,
       &hasModules, false},
      {"cocycle-algebra", "cyclic.complex-identities", 1e-8,
       &checkCocycleAlgebra, &always, false},
      {"chern-pairing", "chern.pairing-index", 1e-8, &checkChernPairing,
       &hasModules, true},
      {"lemma-relations", "chern.lemma-relations", 1e-8, &checkLemmaRelations,
       &always, true},
      {"tau-bar", "chern.double-restriction", 1e-8, &checkTauBar, &hasModules,
       false},
      {"homotopy", "chern.homotopy", 1e-8, &checkHomotopy, &hasHomotopy, false},
      {"connections", "connections.index-transport", 1e-8, &checkConnections,
       &hasConnections, false},
  };
  return registry;
}

}  // namespace detail
}  // namespace twistdex
