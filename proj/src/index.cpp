#include "twistdex/index.hpp"

#include <algorithm>
#include <cmath>

namespace twistdex {

namespace {

struct SectorBases {
  ComplexMatrix plus, minus;
  bool marginal = false;
  int rankPlus() const { return static_cast<int>(plus.cols()); }
  int rankMinus() const { return static_cast<int>(minus.cols()); }
  // Block-diagonal embedding of both bases into full-space coordinates.
  ComplexMatrix full(const GradedSpace& s) const {
    ComplexMatrix f = ComplexMatrix::Zero(s.total(), plus.cols() + minus.cols());
    f.topLeftCorner(s.dimPlus, plus.cols()) = plus;
    f.bottomRightCorner(s.dimMinus, minus.cols()) = minus;
    return f;
  }
};

SectorBases sectorRangeBases(const GradedSpace& s, const ComplexMatrix& even,
                             double tol) {
  SectorBases b;
  const ComplexMatrix pp = even.topLeftCorner(s.dimPlus, s.dimPlus);
  const ComplexMatrix mm = even.bottomRightCorner(s.dimMinus, s.dimMinus);
  b.plus = rangeBasis(pp, tol);
  b.minus = rangeBasis(mm, tol);
  b.marginal = numericalRankInfo(pp, tol).marginal || numericalRankInfo(mm, tol).marginal;
  return b;
}

struct CompressionContext {
  Amplification amp;
  GradedSpace space;       // amplified space
  ComplexMatrix E, S;      // realized idempotent and its sigma image
  ComplexMatrix Dq;        // amplified operator
  SectorBases domain;      // ranges of E
  SectorBases codomain;    // ranges of S

  CompressionContext(const TwistedTriple& t, const Idempotent& e, double tol)
      : amp(t.space, e.q) {
    space = amp.amplifiedSpace();
    E = e.realized.matrix();
    S = amp.applySigma(t.sigma, E);
    Dq = amp.diagonal(t.dirac.matrix());
    domain = sectorRangeBases(space, E, tol);
    codomain = sectorRangeBases(space, S, tol);
  }
};

ComplexMatrix blockMP(const GradedSpace& s, const ComplexMatrix& m) {
  return m.bottomLeftCorner(s.dimMinus, s.dimPlus);
}
ComplexMatrix blockPM(const GradedSpace& s, const ComplexMatrix& m) {
  return m.topRightCorner(s.dimPlus, s.dimMinus);
}

}  // namespace

namespace {

CompressedOperator compressWith(const CompressionContext& c,
                                const ComplexMatrix& middle) {
  const ComplexMatrix op = c.S * middle * c.E;

  CompressedOperator out;
  out.domainBasisPlus = c.domain.plus;
  out.domainBasisMinus = c.domain.minus;
  out.codomainBasisPlus = c.codomain.plus;
  out.codomainBasisMinus = c.codomain.minus;
  out.blockPlus = c.codomain.minus.adjoint() * blockMP(c.space, op) * c.domain.plus;
  out.blockMinus = c.codomain.plus.adjoint() * blockPM(c.space, op) * c.domain.minus;

  // Reconstruction: op restricted to the domain must factor exactly through
  // the chosen bases.
  const GradedSpace& s = c.space;
  const ComplexMatrix epp = c.E.topLeftCorner(s.dimPlus, s.dimPlus);
  const ComplexMatrix emm = c.E.bottomRightCorner(s.dimMinus, s.dimMinus);
  const ComplexMatrix reconMP =
      c.codomain.minus * out.blockPlus * (c.domain.plus.adjoint() * epp);
  const ComplexMatrix reconPM =
      c.codomain.plus * out.blockMinus * (c.domain.minus.adjoint() * emm);
  const double scale = std::max(op.norm(), 1e-300);
  out.reconstructionResidual =
      std::hypot((blockMP(s, op) - reconMP).norm(), (blockPM(s, op) - reconPM).norm()) /
      scale;
  out.illConditioned = c.domain.marginal || c.codomain.marginal;
  return out;
}

}  // namespace

CompressedOperator compress(const TwistedTriple& t, const Idempotent& e,
                            double rankTol) {
  const CompressionContext c(t, e, rankTol);
  return compressWith(c, c.Dq);
}

CompressedOperator compressCoupled(const TwistedTriple& t, const Idempotent& e,
                                   const ComplexMatrix& amplified,
                                   double rankTol) {
  const CompressionContext c(t, e, rankTol);
  if (amplified.rows() != c.space.total() || amplified.cols() != c.space.total()) {
    fail(ErrorCode::InvalidArgument,
         "coupled operator does not live on the amplified space");
  }
  return compressWith(c, amplified);
}

IndexReport indexFromCompressed(const CompressedOperator& c, double rankTol) {
  IndexReport r;
  r.dimDomainPlus = static_cast<int>(c.domainBasisPlus.cols());
  r.dimDomainMinus = static_cast<int>(c.domainBasisMinus.cols());
  r.dimCodomainPlus = static_cast<int>(c.codomainBasisPlus.cols());
  r.dimCodomainMinus = static_cast<int>(c.codomainBasisMinus.cols());

  const RankDecision plus = numericalRankInfo(c.blockPlus, rankTol);
  const RankDecision minus = numericalRankInfo(c.blockMinus, rankTol);
  r.kerPlus = r.dimDomainPlus - plus.rank;
  r.kerMinus = r.dimDomainMinus - minus.rank;
  r.kerStarMinus = r.dimCodomainMinus - plus.rank;
  r.kerStarPlus = r.dimCodomainPlus - minus.rank;
  r.indPlus = r.kerPlus - r.kerStarMinus;
  r.indMinus = r.kerMinus - r.kerStarPlus;
  r.index = 0.5 * (r.indPlus - r.indMinus);
  r.illConditioned = c.illConditioned || plus.marginal || minus.marginal;

  // Rank bookkeeping cross-check; a violation means the tolerance sliced a
  // singular-value cluster.
  if (r.indPlus != r.dimDomainPlus - r.dimCodomainMinus ||
      r.indMinus != r.dimDomainMinus - r.dimCodomainPlus)
    fail(ErrorCode::NumericFailure,
         "kernel bookkeeping disagrees with dimension counts; "
         "rank tolerance is unreliable for this input");
  return r;
}

IndexReport fredholmIndex(const TwistedTriple& t, const Idempotent& e, double rankTol) {
  return indexFromCompressed(compress(t, e, rankTol), rankTol);
}

AdjointIdentityReport adjointIdentityCheck(const TwistedTriple& t, const Idempotent& e,
                                           double rankTol) {
  Amplification amp(t.space, e.q);
  const GradedSpace s = amp.amplifiedSpace();
  const ComplexMatrix E = e.realized.matrix();
  const ComplexMatrix S = amp.applySigma(t.sigma, E);
  const ComplexMatrix Estar = E.adjoint();
  const ComplexMatrix F = S.adjoint();  // the idempotent sigma(e)*
  const ComplexMatrix sigmaF = amp.applySigma(t.sigma, F);  // equals e* when regular
  const ComplexMatrix Dq = amp.diagonal(t.dirac.matrix());

  const SectorBases U = sectorRangeBases(s, E, rankTol);      // e ranges
  const SectorBases W = sectorRangeBases(s, S, rankTol);      // sigma(e) ranges
  const SectorBases X = sectorRangeBases(s, Estar, rankTol);  // e* ranges
  const SectorBases Y = sectorRangeBases(s, F, rankTol);      // sigma(e)* ranges

  // Restriction maps: S_e = e*|_{e H^q} and S_sigma(e) = sigma(e)*|_{sigma(e) H^q}.
  auto restriction = [&](const ComplexMatrix& target, const ComplexMatrix& fromBasis,
                         const ComplexMatrix& toBasis, const char* name) {
    const ComplexMatrix m = toBasis.adjoint() * target * fromBasis;
    if (m.rows() != m.cols())
      fail(ErrorCode::NotIdempotent,
           std::string("restriction map ") + name + " is not square");
    const RealVector sv = singularValues(m);
    if (sv.size() == 0 || sv.minCoeff() <= 1e-10 * std::max(sv.maxCoeff(), 1e-300))
      fail(ErrorCode::NotIdempotent,
           std::string("restriction map ") + name + " is numerically singular");
    return m;
  };

  const ComplexMatrix sePlus =
      restriction(Estar.topLeftCorner(s.dimPlus, s.dimPlus), U.plus, X.plus, "S_e+");
  const ComplexMatrix seMinus = restriction(
      Estar.bottomRightCorner(s.dimMinus, s.dimMinus), U.minus, X.minus, "S_e-");
  const ComplexMatrix ssPlus =
      restriction(F.topLeftCorner(s.dimPlus, s.dimPlus), W.plus, Y.plus, "S_sigma+");
  const ComplexMatrix ssMinus = restriction(
      F.bottomRightCorner(s.dimMinus, s.dimMinus), W.minus, Y.minus, "S_sigma-");

  // Compression of e: blocks in U/W bases.
  const ComplexMatrix op = S * Dq * E;
  const ComplexMatrix blockPlus = W.minus.adjoint() * blockMP(s, op) * U.plus;
  const ComplexMatrix blockMinus = W.plus.adjoint() * blockPM(s, op) * U.minus;

  // Compression of sigma(e)*: domain bases Y, codomain bases X.
  const ComplexMatrix opF = sigmaF * Dq * F;
  const ComplexMatrix blockPlusF = X.minus.adjoint() * blockMP(s, opF) * Y.plus;
  const ComplexMatrix blockMinusF = X.plus.adjoint() * blockPM(s, opF) * Y.minus;

  AdjointIdentityReport rep;
  const ComplexMatrix lhsPlus = blockPlus.adjoint();
  const ComplexMatrix rhsPlus =
      sePlus.partialPivLu().solve(blockMinusF * ssMinus);
  const ComplexMatrix lhsMinus = blockMinus.adjoint();
  const ComplexMatrix rhsMinus =
      seMinus.partialPivLu().solve(blockPlusF * ssPlus);
  rep.scale = std::max({lhsPlus.norm(), rhsPlus.norm(), lhsMinus.norm(),
                        rhsMinus.norm(), 1e-300});
  rep.residualPlus = (lhsPlus - rhsPlus).norm() / rep.scale;
  rep.residualMinus = (lhsMinus - rhsMinus).norm() / rep.scale;
  return rep;
}

ParametrixReport parametrixCheck(const TwistedTriple& t, const Idempotent& e,
                                 double rankTol) {
  Amplification amp(t.space, e.q);
  const GradedSpace s = amp.amplifiedSpace();
  // Throws requires-invertible when D is singular.
  const GradedOperator dinv = t.dirac.inverse();

  const ComplexMatrix E = e.realized.matrix();
  const ComplexMatrix S = amp.applySigma(t.sigma, E);
  const ComplexMatrix Dq = amp.diagonal(t.dirac.matrix());
  const ComplexMatrix Dqinv = amp.diagonal(dinv.matrix());
  const ComplexMatrix TC = Dq * E - S * Dq;

  const SectorBases U = sectorRangeBases(s, E, rankTol);
  const SectorBases W = sectorRangeBases(s, S, rankTol);
  const ComplexMatrix Ufull = U.full(s);
  const ComplexMatrix Wfull = W.full(s);

  const auto eye = [](Eigen::Index n) {
    return ComplexMatrix::Identity(n, n);
  };

  // Q D identity on e H^q.
  const ComplexMatrix qd = Ufull.adjoint() * (E * Dqinv * S * Dq) * Ufull;
  const ComplexMatrix qdTarget =
      eye(Ufull.cols()) - Ufull.adjoint() * (E * Dqinv * TC) * Ufull;
  // D Q identity on sigma(e) H^q.
  const ComplexMatrix dq = Wfull.adjoint() * (S * Dq * E * Dqinv) * Wfull;
  const ComplexMatrix dqTarget =
      eye(Wfull.cols()) + Wfull.adjoint() * (S * TC * Dqinv) * Wfull;

  ParametrixReport rep;
  rep.scale = std::max({qd.norm(), qdTarget.norm(), dq.norm(), dqTarget.norm(), 1.0});
  rep.leftResidual = (qd - qdTarget).norm() / rep.scale;
  rep.rightResidual = (dq - dqTarget).norm() / rep.scale;
  return rep;
}

TraceFormulaReport traceFormulaCheck(const TwistedTriple& t, const Idempotent& e,
                                     const std::vector<int>& powers, double rankTol) {
  Amplification amp(t.space, e.q);
  const GradedSpace s = amp.amplifiedSpace();
  const GradedOperator dinv = t.dirac.inverse();

  const CompressedOperator c = compress(t, e, rankTol);
  const ComplexMatrix E = e.realized.matrix();
  const ComplexMatrix Dqinv = amp.diagonal(dinv.matrix());
  const ComplexMatrix q = E * Dqinv;  // restricted to sigma(e) H^q below

  // Even-to-odd block T and its parametrix block S-.
  const ComplexMatrix T = c.blockPlus;
  const ComplexMatrix P =
      c.domainBasisPlus.adjoint() * blockPM(s, q) * c.codomainBasisMinus;

  TraceFormulaReport rep;
  const RankDecision rd = numericalRankInfo(T, rankTol);
  const int kerT = static_cast<int>(T.cols()) - rd.rank;
  const int kerTstar = static_cast<int>(T.rows()) - rd.rank;
  rep.index = kerT - kerTstar;

  const ComplexMatrix onLeft = ComplexMatrix::Identity(T.cols(), T.cols()) - P * T;
  const ComplexMatrix onRight = ComplexMatrix::Identity(T.rows(), T.rows()) - T * P;
  for (int m : powers) {
    if (m < 1) fail(ErrorCode::DomainError, "trace-formula power must be >= 1");
    ComplexMatrix lp = ComplexMatrix::Identity(T.cols(), T.cols());
    ComplexMatrix rp = ComplexMatrix::Identity(T.rows(), T.rows());
    for (int i = 0; i < m; ++i) {
      lp = lp * onLeft;
      rp = rp * onRight;
    }
    const Complex diff = lp.trace() - rp.trace();
    rep.residuals.push_back(std::abs(diff - Complex(rep.index, 0.0)));
  }
  return rep;
}

}  // namespace twistdex
