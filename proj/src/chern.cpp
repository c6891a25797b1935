#include "twistdex/chern.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "twistdex/errors.hpp"
#include "twistdex/parallel.hpp"

namespace twistdex {
namespace {

constexpr double kScaleFloor = 1e-30;

// Shared data for the character cochains of one triple.
struct CharacterContext {
  GradedSpace space;
  Automorphism sigma;
  ComplexMatrix d;
  ComplexMatrix dinv;
};

std::shared_ptr<const CharacterContext> makeContext(const TwistedTriple& t) {
  auto ctx = std::make_shared<CharacterContext>();
  ctx->space = t.space;
  ctx->sigma = t.sigma;
  ctx->d = t.dirac.matrix();
  ctx->dinv = t.dirac.inverse().matrix();
  return ctx;
}

ComplexMatrix twistedComm(const CharacterContext& ctx, const ComplexMatrix& a) {
  return ctx.d * a - ctx.sigma.apply(a) * ctx.d;
}

// Amplified companions of a context, built per call of a lifted evaluator.
struct AmplifiedContext {
  Amplification amp;
  ComplexMatrix dq;
  ComplexMatrix dqinv;

  AmplifiedContext(const CharacterContext& ctx, int q)
      : amp(ctx.space, q), dq(amp.diagonal(ctx.d)), dqinv(amp.diagonal(ctx.dinv)) {}

  ComplexMatrix comm(const CharacterContext& ctx, const ComplexMatrix& x) const {
    return dq * x - amp.applySigma(ctx.sigma, x) * dq;
  }
};

void requireDegree(int m, const char* what) {
  if (m < 0) {
    fail(ErrorCode::DomainError,
         std::string(what) + " needs a nonnegative degree");
  }
}

double diagonalBlockNorm(const GradedSpace& s, const ComplexMatrix& m) {
  const int p = s.dimPlus;
  const int q = s.dimMinus;
  const double a = m.topLeftCorner(p, p).norm();
  const double b = m.bottomRightCorner(q, q).norm();
  return std::hypot(a, b);
}

}  // namespace

double chernConstant(int k) {
  requireDegree(k, "character constant");
  // (1/2) (-1)^k k! / (2k)!
  double value = 0.5;
  for (int i = k + 1; i <= 2 * k; ++i) value /= static_cast<double>(i);
  return (k % 2 == 0) ? value : -value;
}

Cochain tau2k(const TwistedTriple& t, int k) {
  requireDegree(k, "character cocycle");
  const auto ctx = makeContext(t);
  const int m = 2 * k;
  const double ck = chernConstant(k);

  Cochain out;
  out.degree = m;
  out.argDim = t.space.total();
  out.claimedCyclic = true;
  out.claimedNormalized = true;
  out.eval = [ctx, ck](const std::vector<ComplexMatrix>& args) {
    ComplexMatrix p = ComplexMatrix::Identity(ctx->space.total(), ctx->space.total());
    for (const auto& a : args) p = p * (ctx->dinv * twistedComm(*ctx, a));
    return ck * supertrace(ctx->space, p);
  };
  out.lifted = [ctx, ck](int q, const std::vector<ComplexMatrix>& args) {
    const AmplifiedContext big(*ctx, q);
    const int n = big.amp.amplifiedSpace().total();
    ComplexMatrix p = ComplexMatrix::Identity(n, n);
    for (const auto& x : args) p = p * (big.dqinv * big.comm(*ctx, x));
    return ck * supertrace(big.amp.amplifiedSpace(), p);
  };
  return out;
}

Cochain phiM(const TwistedTriple& t, int m) {
  requireDegree(m, "auxiliary cochain");
  const auto ctx = makeContext(t);

  Cochain out;
  out.degree = m;
  out.argDim = t.space.total();
  out.claimedNormalized = true;
  out.eval = [ctx](const std::vector<ComplexMatrix>& args) {
    ComplexMatrix p = args.front();
    for (std::size_t j = 1; j < args.size(); ++j) {
      p = p * (ctx->dinv * twistedComm(*ctx, args[j]));
    }
    return supertrace(ctx->space, p);
  };
  out.lifted = [ctx](int q, const std::vector<ComplexMatrix>& args) {
    const AmplifiedContext big(*ctx, q);
    ComplexMatrix p = args.front();
    for (std::size_t j = 1; j < args.size(); ++j) {
      p = p * (big.dqinv * big.comm(*ctx, args[j]));
    }
    return supertrace(big.amp.amplifiedSpace(), p);
  };
  return out;
}

Cochain psiM(const TwistedTriple& t, int m) {
  requireDegree(m, "auxiliary cochain");
  const auto ctx = makeContext(t);

  Cochain out;
  out.degree = m;
  out.argDim = t.space.total();
  out.claimedNormalized = true;
  out.eval = [ctx](const std::vector<ComplexMatrix>& args) {
    ComplexMatrix p = ctx->sigma.apply(args.front());
    for (std::size_t j = 1; j < args.size(); ++j) {
      p = p * (twistedComm(*ctx, args[j]) * ctx->dinv);
    }
    return supertrace(ctx->space, p);
  };
  out.lifted = [ctx](int q, const std::vector<ComplexMatrix>& args) {
    const AmplifiedContext big(*ctx, q);
    ComplexMatrix p = big.amp.applySigma(ctx->sigma, args.front());
    for (std::size_t j = 1; j < args.size(); ++j) {
      p = p * (big.comm(*ctx, args[j]) * big.dqinv);
    }
    return supertrace(big.amp.amplifiedSpace(), p);
  };
  return out;
}

LemmaReport lemmaRelations(const TwistedTriple& t, int k,
                           const std::vector<ComplexMatrix>& samples) {
  if (k < 1) {
    fail(ErrorCode::DomainError, "lemma relations need cocycle degree >= 2");
  }
  if (samples.size() < static_cast<std::size_t>(2 * k + 3)) {
    fail(ErrorCode::InvalidArgument, "not enough sample elements");
  }

  const Cochain tau = tau2k(t, k);
  const Cochain phiMid = phiM(t, 2 * k);
  const Cochain psiMid = psiM(t, 2 * k);
  const Cochain bPhiLow = hochschildB(phiM(t, 2 * k - 1));
  const Cochain bPsiLow = hochschildB(psiM(t, 2 * k - 1));
  const Cochain lowPhiHigh = connesB(phiM(t, 2 * k + 1));
  const Cochain lowPsiHigh = connesB(psiM(t, 2 * k + 1));
  const Cochain bTau = hochschildB(tau);
  const Cochain tTau = cyclicT(tau);

  const double ckInv = 1.0 / chernConstant(k);
  const double lowFactor = static_cast<double>(2 * k + 1) * ckInv;
  const std::size_t n = samples.size();

  LemmaReport rep;
  double scale = 0.0;
  double unitInsertion = 0.0;
  const ComplexMatrix unit =
      ComplexMatrix::Identity(t.space.total(), t.space.total());
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<ComplexMatrix> x;
    x.reserve(static_cast<std::size_t>(2 * k + 1));
    for (int i = 0; i <= 2 * k; ++i) {
      x.push_back(samples[(s + static_cast<std::size_t>(i)) % n]);
    }
    std::vector<ComplexMatrix> y = x;
    y.push_back(samples[(s + static_cast<std::size_t>(2 * k + 1)) % n]);

    const Complex vTau = tau(x);
    const Complex vPhi = phiMid(x);
    const Complex vPsi = psiMid(x);
    const Complex vbPhi = bPhiLow(x);
    const Complex vbPsi = bPsiLow(x);
    const Complex vBPhi = lowPhiHigh(x);
    const Complex vBPsi = lowPsiHigh(x);
    const Complex vbTau = bTau(y);
    const Complex vtTau = tTau(x);

    scale = std::max({scale, std::abs(ckInv * vTau), std::abs(vPhi),
                      std::abs(vPsi), std::abs(vBPhi), std::abs(vBPsi)});
    rep.splitResidual = std::max(rep.splitResidual,
                                 std::abs(ckInv * vTau - vPhi - vPsi));
    rep.coboundaryPhi = std::max(rep.coboundaryPhi, std::abs(vbPhi - vPhi));
    rep.coboundaryPsi = std::max(rep.coboundaryPsi, std::abs(vbPsi + vPsi));
    rep.loweringPhi = std::max(rep.loweringPhi,
                               std::abs(vBPhi - lowFactor * vTau));
    rep.loweringPsi = std::max(rep.loweringPsi,
                               std::abs(vBPsi + lowFactor * vTau));
    rep.closedTau = std::max(rep.closedTau, std::abs(vbTau));
    rep.cyclicTau = std::max(rep.cyclicTau, std::abs(vtTau - vTau));
    for (int j = 1; j <= 2 * k; ++j) {
      std::vector<ComplexMatrix> probe = x;
      probe[static_cast<std::size_t>(j)] = unit;
      unitInsertion = std::max(unitInsertion, std::abs(tau(probe)));
    }
  }

  rep.scale = std::max(scale, kScaleFloor);
  rep.splitResidual /= rep.scale;
  rep.coboundaryPhi /= rep.scale;
  rep.coboundaryPsi /= rep.scale;
  rep.loweringPhi /= rep.scale;
  rep.loweringPsi /= rep.scale;
  rep.closedTau /= rep.scale;
  rep.cyclicTau /= rep.scale;
  // Unit insertions are measured against the same scale as the other
  // relations; the standalone helper would divide by the character's own
  // magnitude, which can vanish identically on small commutative algebras.
  rep.normalizedTau = unitInsertion / rep.scale;
  rep.maxResidual = std::max({rep.splitResidual, rep.coboundaryPhi,
                              rep.coboundaryPsi, rep.loweringPhi,
                              rep.loweringPsi, rep.closedTau, rep.cyclicTau,
                              rep.normalizedTau});
  return rep;
}

Cochain tauBar2k(const DoubledTriple& dt, int k) {
  requireDegree(k, "restricted character");
  const auto ctx = makeContext(dt.doubled);
  const double ck = chernConstant(k);
  const int baseDim = dt.original->space.total();
  const GradedSpace baseSpace = dt.original->space;
  // Copy the embedding data we need so the cochain owns its state.
  const MatrixAlgebra doubledAlgebra = dt.doubled.algebra;

  Cochain out;
  out.degree = 2 * k;
  out.argDim = baseDim;
  out.claimedCyclic = true;
  out.eval = [ctx, ck, doubledAlgebra](const std::vector<ComplexMatrix>& args) {
    const int n = ctx->space.total();
    ComplexMatrix p = ComplexMatrix::Identity(n, n);
    for (const auto& a : args) {
      p = p * (ctx->dinv * twistedComm(*ctx, doubledAlgebra.embed(a)));
    }
    return ck * supertrace(ctx->space, p);
  };
  out.lifted = [ctx, ck, doubledAlgebra, baseSpace](
                   int q, const std::vector<ComplexMatrix>& args) {
    const Amplification ampBase(baseSpace, q);
    const AmplifiedContext big(*ctx, q);
    const int n = big.amp.amplifiedSpace().total();
    ComplexMatrix p = ComplexMatrix::Identity(n, n);
    std::vector<ComplexMatrix> entries(static_cast<std::size_t>(q) *
                                       static_cast<std::size_t>(q));
    for (const auto& x : args) {
      for (int i = 0; i < q; ++i) {
        for (int j = 0; j < q; ++j) {
          entries[static_cast<std::size_t>(i * q + j)] =
              doubledAlgebra.embed(ampBase.extractEntry(x, i, j));
        }
      }
      const ComplexMatrix lifted = big.amp.realize(entries);
      p = p * (big.dqinv * big.comm(*ctx, lifted));
    }
    return ck * supertrace(big.amp.amplifiedSpace(), p);
  };
  return out;
}

HomotopyFamily::HomotopyFamily(const GradedSpace& space,
                               std::vector<PolyPiece> pieces)
    : space_(space), pieces_(std::move(pieces)) {
  if (pieces_.empty()) {
    fail(ErrorCode::InvalidFamily, "perturbation family has no pieces");
  }
  const int n = space_.total();
  double coeffScale = 0.0;
  for (const auto& piece : pieces_) {
    if (!(piece.t1 > piece.t0)) {
      fail(ErrorCode::InvalidFamily, "family piece has an empty time range");
    }
    for (const auto& c : piece.coefficients) {
      if (c.rows() != n || c.cols() != n) {
        fail(ErrorCode::InvalidFamily, "family coefficient has wrong dimension");
      }
      const double norm = c.norm();
      coeffScale = std::max(coeffScale, norm);
      if (diagonalBlockNorm(space_, c) > 1e-12 * std::max(norm, 1.0)) {
        fail(ErrorCode::InvalidFamily, "family coefficient is not odd");
      }
      if ((c - c.adjoint()).norm() > 1e-12 * std::max(norm, 1.0)) {
        fail(ErrorCode::InvalidFamily, "family coefficient is not selfadjoint");
      }
    }
  }
  if (std::abs(pieces_.front().t0) > 1e-12 ||
      std::abs(pieces_.back().t1 - 1.0) > 1e-12) {
    fail(ErrorCode::InvalidFamily, "family must cover the unit interval");
  }
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
    if (std::abs(pieces_[i].t1 - pieces_[i + 1].t0) > 1e-12) {
      fail(ErrorCode::InvalidFamily, "family pieces leave a gap");
    }
  }
  // Continuous differentiability across interior breakpoints.
  const double tol = 1e-10 * (1.0 + coeffScale);
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
    const double tb = pieces_[i].t1;
    const auto at = [n, tb](const PolyPiece& piece, bool derivative) {
      ComplexMatrix acc = ComplexMatrix::Zero(n, n);
      for (std::size_t d = derivative ? 1 : 0; d < piece.coefficients.size(); ++d) {
        const double factor = derivative ? static_cast<double>(d) : 1.0;
        const double exponent = static_cast<double>(d) - (derivative ? 1.0 : 0.0);
        acc += factor * std::pow(tb, exponent) * piece.coefficients[d];
      }
      return acc;
    };
    if ((at(pieces_[i], false) - at(pieces_[i + 1], false)).norm() > tol) {
      fail(ErrorCode::InvalidFamily, "family is discontinuous at a breakpoint");
    }
    if ((at(pieces_[i], true) - at(pieces_[i + 1], true)).norm() > tol) {
      fail(ErrorCode::InvalidFamily,
           "family derivative jumps at a breakpoint");
    }
  }
}

const PolyPiece& HomotopyFamily::pieceAt(double t) const {
  if (t < -1e-12 || t > 1.0 + 1e-12) {
    fail(ErrorCode::InvalidArgument, "family time outside the unit interval");
  }
  for (const auto& piece : pieces_) {
    if (t <= piece.t1 + 1e-12) return piece;
  }
  return pieces_.back();
}

ComplexMatrix HomotopyFamily::v(double t) const {
  const PolyPiece& piece = pieceAt(t);
  const int n = space_.total();
  ComplexMatrix acc = ComplexMatrix::Zero(n, n);
  double power = 1.0;
  for (std::size_t d = 0; d < piece.coefficients.size(); ++d) {
    acc += power * piece.coefficients[d];
    power *= t;
  }
  return acc;
}

ComplexMatrix HomotopyFamily::vdot(double t) const {
  const PolyPiece& piece = pieceAt(t);
  const int n = space_.total();
  ComplexMatrix acc = ComplexMatrix::Zero(n, n);
  double power = 1.0;
  for (std::size_t d = 1; d < piece.coefficients.size(); ++d) {
    acc += static_cast<double>(d) * power * piece.coefficients[d];
    power *= t;
  }
  return acc;
}

HomotopyFamily polynomialFamily(const TwistedTriple& t, std::uint64_t seed,
                                double amplitudeFactor) {
  const GradedSpace& s = t.space;
  const double sigmaMin = t.dirac.minSingularValue();
  const double sigmaMax = t.dirac.operatorNorm();
  if (sigmaMin <= 1e-12 * std::max(sigmaMax, 1.0)) {
    fail(ErrorCode::RequiresInvertible,
         "polynomial families start from an invertible operator");
  }
  Prng rng(seed);
  const auto randomOdd = [&rng, &s]() {
    ComplexMatrix b(s.dimPlus, s.dimMinus);
    for (int i = 0; i < s.dimPlus; ++i) {
      for (int j = 0; j < s.dimMinus; ++j) b(i, j) = rng.complexSym();
    }
    ComplexMatrix m = ComplexMatrix::Zero(s.total(), s.total());
    m.topRightCorner(s.dimPlus, s.dimMinus) = b;
    m.bottomLeftCorner(s.dimMinus, s.dimPlus) = b.adjoint();
    return m;
  };
  ComplexMatrix c1 = randomOdd();
  ComplexMatrix c2 = randomOdd();
  const double budget = amplitudeFactor * sigmaMin;
  const double n1 = singularValues(c1).maxCoeff();
  const double n2 = singularValues(c2).maxCoeff();
  const double total = n1 + n2;
  if (total > 0.0) {
    c1 *= budget / total;
    c2 *= budget / total;
  }
  PolyPiece piece;
  piece.t0 = 0.0;
  piece.t1 = 1.0;
  piece.coefficients = {ComplexMatrix::Zero(s.total(), s.total()), c1, c2};
  return HomotopyFamily(s, {piece});
}

HomotopyFamily doublingFamily(const DoubledTriple& dt) {
  const GradedSpace& s = dt.doubled.space;
  PolyPiece piece;
  piece.t0 = 0.0;
  piece.t1 = 1.0;
  piece.coefficients = {ComplexMatrix::Zero(s.total(), s.total()),
                        dt.joiner.matrix()};
  return HomotopyFamily(s, {piece});
}

namespace {

struct NodeData {
  ComplexMatrix dt;
  ComplexMatrix dtinv;
  ComplexMatrix vdot;
  double sigmaMin = 0.0;
};

struct PathWorkspace {
  GradedSpace space;
  Automorphism sigma;
  ComplexMatrix d0;
  HomotopyFamily family;
  std::map<double, NodeData> cache;
  double minSing = std::numeric_limits<double>::infinity();

  PathWorkspace(const TwistedTriple& t, HomotopyFamily f)
      : space(t.space), sigma(t.sigma), d0(t.dirac.matrix()),
        family(std::move(f)) {}

  const NodeData& node(double t) {
    auto it = cache.find(t);
    if (it != cache.end()) return it->second;
    NodeData nd;
    nd.dt = d0 + family.v(t);
    nd.vdot = family.vdot(t);
    const RealVector sv = singularValues(nd.dt);
    nd.sigmaMin = sv.size() > 0 ? sv.minCoeff() : 0.0;
    const double top = sv.size() > 0 ? sv.maxCoeff() : 0.0;
    if (nd.sigmaMin <= 1e-8 * std::max(top, 1.0)) {
      fail(ErrorCode::InvalidFamily,
           "family leaves the invertible region at time " + std::to_string(t));
    }
    nd.dtinv = nd.dt.partialPivLu().inverse();
    minSing = std::min(minSing, nd.sigmaMin);
    return cache.emplace(t, std::move(nd)).first->second;
  }

  const NodeData& nodeConst(double t) const {
    const auto it = cache.find(t);
    if (it == cache.end()) {
      fail(ErrorCode::Internal, "family node cache missed a quadrature time");
    }
    return it->second;
  }
};

// Sum over insertion slots of the transgression integrand at one time.
Complex etaIntegrandAt(const PathWorkspace& w, const NodeData& nd, int k,
                       const std::vector<ComplexMatrix>& a) {
  const int m = 2 * k + 1;
  std::vector<ComplexMatrix> f(static_cast<std::size_t>(m + 1));
  std::vector<ComplexMatrix> delta(static_cast<std::size_t>(m + 1));
  for (int i = 1; i <= m; ++i) {
    const ComplexMatrix sa = w.sigma.apply(a[static_cast<std::size_t>(i)]);
    f[static_cast<std::size_t>(i)] =
        nd.dtinv * (nd.dt * a[static_cast<std::size_t>(i)] - sa * nd.dt);
    const ComplexMatrix vd = nd.vdot * nd.dtinv;
    delta[static_cast<std::size_t>(i)] = nd.dtinv * (vd * sa - sa * vd) * nd.dt;
  }
  const ComplexMatrix frontOdd = nd.dtinv * w.sigma.apply(a[0]) * nd.dt;
  Complex acc = 0.0;
  for (int j = 1; j <= m; ++j) {
    ComplexMatrix p = (j % 2 == 0) ? a[0] : frontOdd;
    for (int i = 1; i <= m; ++i) {
      p = p * ((i == j) ? delta[static_cast<std::size_t>(i)]
                        : f[static_cast<std::size_t>(i)]);
    }
    acc += supertrace(w.space, p);
  }
  return acc;
}

Cochain etaCochain(std::shared_ptr<const PathWorkspace> w, int k, int panels) {
  Cochain out;
  out.degree = 2 * k + 1;
  out.argDim = w->space.total();
  out.eval = [w, k, panels](const std::vector<ComplexMatrix>& args) {
    const double h = 1.0 / (2.0 * static_cast<double>(panels));
    Complex acc = 0.0;
    for (int i = 0; i <= 2 * panels; ++i) {
      const double t = static_cast<double>(i) / (2.0 * static_cast<double>(panels));
      double weight = 2.0;
      if (i == 0 || i == 2 * panels) {
        weight = 1.0;
      } else if (i % 2 == 1) {
        weight = 4.0;
      }
      acc += (weight * h / 3.0) * etaIntegrandAt(*w, w->nodeConst(t), k, args);
    }
    return acc;
  };
  return out;
}

}  // namespace

HomotopyReport homotopyInvarianceCheck(const TwistedTriple& t,
                                       const HomotopyFamily& family,
                                       const Idempotent& e,
                                       const HomotopyOptions& opts) {
  if (opts.cocycleDegree < 0) {
    fail(ErrorCode::DomainError, "cocycle degree must be nonnegative");
  }
  if (opts.gridPoints < 2 || opts.panels < 1 ||
      opts.refinedPanels <= opts.panels || opts.sampleTuples < 1) {
    fail(ErrorCode::InvalidArgument, "bad homotopy check options");
  }
  if (!(family.space() == t.space)) {
    fail(ErrorCode::InvalidArgument, "family space does not match the triple");
  }

  const int k = opts.cocycleDegree;
  auto w = std::make_shared<PathWorkspace>(t, family);

  // Warm the node cache serially; everything after reads it const.
  for (int i = 0; i < opts.gridPoints; ++i) {
    w->node(static_cast<double>(i) / static_cast<double>(opts.gridPoints - 1));
  }
  for (int i = 0; i <= 2 * opts.panels; ++i) {
    w->node(static_cast<double>(i) / (2.0 * static_cast<double>(opts.panels)));
  }
  for (int i = 0; i <= 2 * opts.refinedPanels; ++i) {
    w->node(static_cast<double>(i) /
            (2.0 * static_cast<double>(opts.refinedPanels)));
  }

  HomotopyReport rep;
  rep.minSingularValue = w->minSing;

  // Pairing along the grid.
  for (int i = 0; i < opts.gridPoints; ++i) {
    const double time =
        static_cast<double>(i) / static_cast<double>(opts.gridPoints - 1);
    const NodeData& nd = w->nodeConst(time);
    const TwistedTriple slice = makeTwistedTriple(
        t.algebra, nd.dt, t.sigma, t.nominalSummability);
    const Cochain tau = tau2k(slice, k);
    rep.gridTimes.push_back(time);
    rep.gridPairings.push_back(pairCyclicCocycle(tau, slice, e));
  }
  for (const Complex& p : rep.gridPairings) {
    rep.gridResidual = std::max(rep.gridResidual,
                                std::abs(p - rep.gridPairings.front()));
  }

  // Endpoint characters and the transgression cochains.
  const TwistedTriple start = makeTwistedTriple(
      t.algebra, w->nodeConst(0.0).dt, t.sigma, t.nominalSummability);
  const TwistedTriple end = makeTwistedTriple(
      t.algebra, w->nodeConst(1.0).dt, t.sigma, t.nominalSummability);
  const Cochain tauStart = tau2k(start, k);
  const Cochain tauEnd = tau2k(end, k);
  const double rhsFactor = static_cast<double>(2 * k + 1) / chernConstant(k);

  std::shared_ptr<const PathWorkspace> wc = w;
  const Cochain etaCoarse = etaCochain(wc, k, opts.panels);
  const Cochain etaFine = etaCochain(wc, k, opts.refinedPanels);
  const Cochain lowCoarse = connesB(etaCoarse);
  const Cochain lowFine = connesB(etaFine);
  const Cochain bEta = hochschildB(etaCoarse);

  const ElementSampler sampler{opts.seed, 3, 1.0};
  const int poolSize = opts.sampleTuples + 2 * k + 2;
  const std::vector<ComplexMatrix> pool = sampler.sample(t.algebra, poolSize);

  struct TupleResult {
    double scale = 0.0;
    double coarseGap = 0.0;
    double fineGap = 0.0;
    double etaScale = 0.0;
    double bGap = 0.0;
  };
  std::vector<TupleResult> results(static_cast<std::size_t>(opts.sampleTuples));

  const auto evalTuple = [&](int s) {
    std::vector<ComplexMatrix> x;
    x.reserve(static_cast<std::size_t>(2 * k + 1));
    for (int i = 0; i <= 2 * k; ++i) {
      x.push_back(pool[static_cast<std::size_t>((s + i) % poolSize)]);
    }
    std::vector<ComplexMatrix> y;
    y.reserve(static_cast<std::size_t>(2 * k + 3));
    for (int i = 0; i <= 2 * k + 2; ++i) {
      y.push_back(pool[static_cast<std::size_t>((s + i) % poolSize)]);
    }
    std::vector<ComplexMatrix> z(y.begin(), y.end() - 1);

    TupleResult r;
    const Complex rhs = rhsFactor * (tauEnd(x) - tauStart(x));
    const Complex lc = lowCoarse(x);
    const Complex lf = lowFine(x);
    r.scale = std::max({std::abs(rhs), std::abs(lc), std::abs(lf)});
    r.coarseGap = std::abs(lc - rhs);
    r.fineGap = std::abs(lf - rhs);
    const Complex be = bEta(y);
    const Complex etaRef = etaCoarse(z);
    r.etaScale = std::abs(etaRef);
    r.bGap = std::abs(be);
    results[static_cast<std::size_t>(s)] = r;
  };
  parallelFor(opts.sampleTuples, evalTuple, opts.threads);

  double scale = 0.0;
  double coarse = 0.0;
  double fine = 0.0;
  double etaScale = 0.0;
  double bGap = 0.0;
  for (const auto& r : results) {
    scale = std::max(scale, r.scale);
    coarse = std::max(coarse, r.coarseGap);
    fine = std::max(fine, r.fineGap);
    etaScale = std::max(etaScale, r.etaScale);
    bGap = std::max(bGap, r.bGap);
  }
  rep.scale = std::max(scale, kScaleFloor);
  rep.transgressionResidual = coarse / rep.scale;
  rep.refinedTransgressionResidual = fine / rep.scale;
  rep.decayFactor = coarse / std::max(fine, 1e-300);
  rep.coboundaryResidual = bGap / std::max(etaScale, kScaleFloor);
  return rep;
}

}  // namespace twistdex
