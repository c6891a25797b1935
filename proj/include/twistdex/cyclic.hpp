#pragma once

#include <functional>
#include <vector>

#include "twistdex/ktheory.hpp"

namespace twistdex {

// Multilinear functional of degree m on the algebra: evaluated on (m+1)-tuples
// of square matrices. The flags are advisory claims made by the constructor;
// checks validate them on samples. `lifted`, when present, evaluates the same
// functional extended to q x q matrices over the algebra; it receives
// amplified realized matrices in graded layout. All cochain operators
// transform both evaluators with the same combinatorics, so the lift remains
// available through the whole complex.
struct Cochain {
  int degree = 0;
  int argDim = 0;
  bool claimedCyclic = false;
  bool claimedNormalized = false;
  std::function<Complex(const std::vector<ComplexMatrix>&)> eval;
  std::function<Complex(int q, const std::vector<ComplexMatrix>&)> lifted;

  Complex operator()(const std::vector<ComplexMatrix>& args) const;
};

// Coboundary of degree m -> m+1:
//   sum_j (-1)^j phi(..., a^j a^{j+1}, ...) + (-1)^{m+1} phi(a^{m+1} a^0, ...).
Cochain hochschildB(const Cochain& phi);

// Cyclic permutation with sign: (T phi)(a^0..a^m) = (-1)^m phi(a^m, a^0..a^{m-1}).
Cochain cyclicT(const Cochain& phi);

// Symmetrizer A = 1 + T + ... + T^m.
Cochain normalizerA(const Cochain& phi);

// Degree-lowering boundary B = A B0 (1 - T) with B0 phi = phi(1, .).
// Degree 0 input signals domain-error.
Cochain connesB(const Cochain& phi);

// Degree-raising periodicity map of bidegree +2.
Cochain periodicityS(const Cochain& phi);

// tr# of phi on q x q matrices over the algebra: the entrywise chain
// contraction sum_{i_0..i_m} phi(m^0_{i_0 i_1}, ..., m^m_{i_m i_0}).
// Arguments are realized amplified matrices.
Complex trSharpEntrywise(const Cochain& phi, const Amplification& amp,
                         const std::vector<ComplexMatrix>& realizedArgs);

// Uses the lifted evaluator when available, entrywise contraction otherwise.
Complex trSharp(const Cochain& phi, const Amplification& amp,
                const std::vector<ComplexMatrix>& realizedArgs);

// Pairing of a cyclic cocycle of even degree 2k with an idempotent:
//   (-1)^k (2k)!/k! tr# phi(e, ..., e).
// Odd degree signals domain-error.
Complex pairCyclicCocycle(const Cochain& phi, const TwistedTriple& t,
                          const Idempotent& e);

// Pairing of a finite sequence of normalized even cochains with an idempotent:
//   tr# phi_0(e) + sum_k (-1)^k (2k)!/k! tr# phi_2k(e - 1/2, e, ..., e).
// A component without the normalized claim signals contract-violation.
Complex pairNormalizedEven(const std::vector<Cochain>& components,
                           const TwistedTriple& t, const Idempotent& e);

// Largest relative violation of the normalization property on sampled tuples
// (insert the unit at each position >= 1).
double normalizationResidual(const Cochain& phi,
                             const std::vector<ComplexMatrix>& samples);

// Largest relative violation of cyclicity T phi = phi on sampled tuples.
double cyclicityResidual(const Cochain& phi,
                         const std::vector<ComplexMatrix>& samples);

}  // namespace twistdex
