#pragma once

#include "twistdex/ktheory.hpp"

namespace twistdex {

// The compressed operator sigma(e) (D (x) 1_q) restricted to e H^q, expressed
// in orthonormal bases of the four relevant subspaces. blockPlus maps
// e(H+)^q coordinates to sigma(e)(H-)^q coordinates, blockMinus the odd
// counterpart. Matrix adjoints of the blocks are honest operator adjoints
// because the bases are orthonormal.
struct CompressedOperator {
  ComplexMatrix domainBasisPlus;    // columns span e (H+)^q
  ComplexMatrix domainBasisMinus;   // columns span e (H-)^q
  ComplexMatrix codomainBasisPlus;  // columns span sigma(e) (H+)^q
  ComplexMatrix codomainBasisMinus; // columns span sigma(e) (H-)^q
  ComplexMatrix blockPlus;          // e(H+)^q -> sigma(e)(H-)^q
  ComplexMatrix blockMinus;         // e(H-)^q -> sigma(e)(H+)^q
  double reconstructionResidual = 0.0;  // relative, against |sigma(e) Dq e|
  bool illConditioned = false;          // some rank decision was marginal
};

struct IndexReport {
  int kerPlus = 0;       // dim ker of the even-to-odd block
  int kerMinus = 0;      // dim ker of the odd-to-even block
  int kerStarPlus = 0;   // dim ker of the adjoint block landing in e(H-)^q
  int kerStarMinus = 0;  // dim ker of the adjoint block landing in e(H+)^q
  int indPlus = 0;       // kerPlus - kerStarMinus
  int indMinus = 0;      // kerMinus - kerStarPlus
  double index = 0.0;    // (indPlus - indMinus) / 2, may be a half integer
  // Dimension bookkeeping oracle: indPlus must equal
  // dim e(H+)^q - dim sigma(e)(H-)^q, and likewise for indMinus.
  int dimDomainPlus = 0, dimDomainMinus = 0;
  int dimCodomainPlus = 0, dimCodomainMinus = 0;
  bool illConditioned = false;
};

CompressedOperator compress(const TwistedTriple& t, const Idempotent& e,
                            double rankTol = kDefaultRankTol);

// Same compression applied to an arbitrary odd operator on the amplified
// space in place of D (x) 1_q, for coupled connection operators.
CompressedOperator compressCoupled(const TwistedTriple& t, const Idempotent& e,
                                   const ComplexMatrix& amplified,
                                   double rankTol = kDefaultRankTol);

// Kernel dimensions and index of an already-compressed operator.
IndexReport indexFromCompressed(const CompressedOperator& c,
                                double rankTol = kDefaultRankTol);

IndexReport fredholmIndex(const TwistedTriple& t, const Idempotent& e,
                          double rankTol = kDefaultRankTol);

struct AdjointIdentityReport {
  double residualPlus = 0.0;   // even-sector identity, relative
  double residualMinus = 0.0;  // odd-sector identity, relative
  double scale = 1.0;
};

// Checks D* = S_e^-1 D' S_sigma(e) blockwise, where D' is the compression
// built from the idempotent sigma(e)* and S_f is the restriction of f* to
// f H^q. Signals not-idempotent when a restriction map fails to invert.
AdjointIdentityReport adjointIdentityCheck(const TwistedTriple& t, const Idempotent& e,
                                           double rankTol = kDefaultRankTol);

struct ParametrixReport {
  double leftResidual = 0.0;   // Q D identity on e H^q, relative
  double rightResidual = 0.0;  // D Q identity on sigma(e) H^q, relative
  double scale = 1.0;
};

// For invertible D and Q = e (D^-1 (x) 1_q) sigma(e):
//   D_e Q = 1 + sigma(e) [Dq, e]_sigma Dq^-1 sigma(e)   on sigma(e) H^q
//   Q D_e = 1 - e Dq^-1 [Dq, e]_sigma e                 on e H^q
// Signals requires-invertible when D is singular.
ParametrixReport parametrixCheck(const TwistedTriple& t, const Idempotent& e,
                                 double rankTol = kDefaultRankTol);

struct TraceFormulaReport {
  int index = 0;             // honest kernel index of the even-to-odd block
  std::vector<double> residuals;  // |trace difference - index| per power
};

// Finite-dimensional trace identity: for T the even-to-odd compressed block,
// S the compressed even part of e Dq^-1 sigma(e), and every power m >= 1,
//   ind T = Tr((1 - S T)^m) - Tr((1 - T S)^m).
TraceFormulaReport traceFormulaCheck(const TwistedTriple& t, const Idempotent& e,
                                     const std::vector<int>& powers,
                                     double rankTol = kDefaultRankTol);

}  // namespace twistdex
