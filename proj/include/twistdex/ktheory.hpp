#pragma once

#include <vector>

#include "twistdex/triple.hpp"

namespace twistdex {

// Bridge between q x q matrices of operators on H and single operators on
// H^q. Basis order on H^q groups by sector: all q copies of the even
// coordinates first, then all q copies of the odd ones, so amplified
// operators are ordinary graded operators.
class Amplification {
 public:
  Amplification(const GradedSpace& base, int q);

  const GradedSpace& baseSpace() const { return base_; }
  const GradedSpace& amplifiedSpace() const { return amplified_; }
  int q() const { return q_; }

  // entries is row-major of length q*q, each an ambient-dim square matrix.
  ComplexMatrix realize(const std::vector<ComplexMatrix>& entries) const;
  ComplexMatrix extractEntry(const ComplexMatrix& realized, int i, int j) const;
  // 1_q (x) a: the same operator on every copy.
  ComplexMatrix diagonal(const ComplexMatrix& a) const;
  GradedOperator diagonal(const GradedOperator& a) const;

  // Entrywise automorphism action on a realized matrix.
  ComplexMatrix applySigma(const Automorphism& sigma, const ComplexMatrix& realized) const;

 private:
  GradedSpace base_;
  GradedSpace amplified_;
  int q_ = 1;
};

// Idempotent over the algebra, kept both as entries and realized on H^q.
struct Idempotent {
  int q = 1;
  std::vector<ComplexMatrix> entries;  // row-major, q*q, each even over the base space
  GradedOperator realized;             // even idempotent on the amplified space
};

// Validates shape, evenness of entries, the idempotent equation
// (relative defect <= 1e-10) and, when decidable, entry membership.
Idempotent makeIdempotent(const TwistedTriple& t, int q,
                          std::vector<ComplexMatrix> entries, double tol = 1e-10);

// g^-1 (P (+) ... ) g for the coordinate projection selecting `select` copies
// and an invertible g = 1 + (small seeded algebra-valued matrix).
Idempotent seededIdempotent(const TwistedTriple& t, int q, std::uint64_t seed,
                            const std::vector<int>& select = {});

Idempotent sigmaOfIdempotent(const TwistedTriple& t, const Idempotent& e);
Idempotent starOfIdempotent(const TwistedTriple& t, const Idempotent& e);

Idempotent directSum(const TwistedTriple& t, const Idempotent& a, const Idempotent& b);

// g^-1 e g for an invertible matrix over the algebra given by entries.
Idempotent conjugateIdempotent(const TwistedTriple& t, const Idempotent& e,
                               const std::vector<ComplexMatrix>& gEntries);

// Invertible g over the algebra of the form 1 + scaled seeded sample.
std::vector<ComplexMatrix> seededInvertibleEntries(const TwistedTriple& t, int q,
                                                   std::uint64_t seed,
                                                   double spread = 0.35);

struct SigmaConjugationResult {
  Idempotent p;                       // sigma(p)* = p, conjugate to e
  std::vector<ComplexMatrix> gEntries;
  std::vector<ComplexMatrix> gInverseEntries;
  double idempotentResidual = 0.0;    // |p^2 - p| / |p|
  double sigmaSelfadjointResidual = 0.0;  // |sigma(p)* - p| / |p|
  double conjugacyResidual = 0.0;     // |g^-1 p g - e| / |e|
  double absorbedLeftResidual = 0.0;  // |e p - p| / |p|
  double absorbedRightResidual = 0.0; // |p e - e| / |e|
  double conditionNumber = 1.0;       // of the inverted auxiliary element
};

// Constructive replacement of e by a conjugate idempotent p with
// sigma(p)* = p: a = e - sigma(e)*, b = 1 + sigma(a)* a, p = e sigma(e)* b^-1,
// g = 1 - p + e with inverse 1 + p - e. Signals
// ribbon-construction-failure when b is numerically singular.
SigmaConjugationResult sigmaSelfadjointConjugate(const TwistedTriple& t,
                                                 const Idempotent& e);

}  // namespace twistdex
