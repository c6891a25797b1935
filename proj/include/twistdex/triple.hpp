#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "twistdex/algebra.hpp"
#include "twistdex/linalg.hpp"

namespace twistdex {

// Finite-dimensional twisted triple: an algebra of even operators, an odd
// selfadjoint operator D on the same graded space, and a regular
// automorphism twisting all commutators.
struct TwistedTriple {
  MatrixAlgebra algebra;
  GradedSpace space;
  GradedOperator dirac;  // odd, selfadjoint
  Automorphism sigma;
  double nominalSummability = 1.0;

  // Default cocycle degree parameter derived from the nominal summability;
  // callers are free to evaluate at other degrees.
  int defaultCocycleDegree() const {
    const int k = static_cast<int>(std::ceil((nominalSummability - 1.0) / 2.0));
    return std::max(1, k);
  }
};

TwistedTriple makeTwistedTriple(MatrixAlgebra algebra, const ComplexMatrix& dirac,
                                Automorphism sigma, double nominalSummability);

// D a - sigma(a) D. Odd whenever a is even.
GradedOperator twistedCommutator(const TwistedTriple& t, const ComplexMatrix& a);
GradedOperator twistedCommutator(const GradedOperator& dirac, const Automorphism& sigma,
                                 const ComplexMatrix& a);

// Replaces D by kDk and the (required trivial) twist by inner(k).
TwistedTriple conformalDeformation(const TwistedTriple& t, const ComplexMatrix& k);

// The double: H~ = H (+) H with flipped grading on the second copy,
// D~ = [[D, 1], [1, -D]], algebra A + C acting by pi(a) = diag(a, 0).
// D~ is always invertible (D~^2 = D_0~^2 + 1).
struct DoubledTriple {
  TwistedTriple doubled;
  std::shared_ptr<const TwistedTriple> original;
  GradedOperator d0;        // diag(D, -D) in the doubled grading order
  GradedOperator joiner;    // the off-diagonal identity pair J
  ComplexMatrix permutation;  // copy layout -> graded layout

  ComplexMatrix embed(const ComplexMatrix& a, Complex lambda = Complex(0, 0)) const {
    return doubled.algebra.embed(a, lambda);
  }
};

DoubledTriple invertibleDouble(const TwistedTriple& t);

struct ValidationIssue {
  std::string check;
  double residual = 0.0;
  double scale = 1.0;
  bool passed = true;
  bool skipped = false;
  std::string note;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool allPassed() const {
    for (const auto& i : issues)
      if (!i.skipped && !i.passed) return false;
    return true;
  }
};

// Sampled verification of the structural axioms: D odd and selfadjoint,
// algebra elements even, sigma regular (sigma(a)* = sigma^-1(a*)),
// multiplicative and unital on samples, twisted commutators odd.
ValidationReport validateTriple(const TwistedTriple& t, const ElementSampler& sampler,
                                int sampleCount = 8, double tol = 1e-10);

}  // namespace twistdex
