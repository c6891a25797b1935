#include "twistdex/triple.hpp"

#include <algorithm>
#include <cmath>

namespace twistdex {

TwistedTriple makeTwistedTriple(MatrixAlgebra algebra, const ComplexMatrix& dirac,
                                Automorphism sigma, double nominalSummability) {
  const GradedSpace space = algebra.space();
  if (sigma.space() != space)
    fail(ErrorCode::InvalidArgument, "automorphism acts on a different space");
  GradedOperator d = GradedOperator::odd(space, dirac, 1e-12);
  const double scale = std::max(d.frobeniusNorm(), 1e-300);
  if ((d.matrix() - d.matrix().adjoint()).norm() > 1e-12 * scale)
    fail(ErrorCode::InvalidArgument, "operator D must be selfadjoint");
  if (nominalSummability < 1.0)
    fail(ErrorCode::InvalidArgument, "nominal summability must be at least 1");
  TwistedTriple t;
  t.algebra = std::move(algebra);
  t.space = space;
  t.dirac = std::move(d);
  t.sigma = std::move(sigma);
  t.nominalSummability = nominalSummability;
  return t;
}

GradedOperator twistedCommutator(const GradedOperator& dirac, const Automorphism& sigma,
                                 const ComplexMatrix& a) {
  const GradedSpace& s = dirac.space();
  const ComplexMatrix sa = sigma.apply(a);
  const ComplexMatrix c = dirac.matrix() * a - sa * dirac.matrix();
  return GradedOperator::classify(s, c);
}

GradedOperator twistedCommutator(const TwistedTriple& t, const ComplexMatrix& a) {
  return twistedCommutator(t.dirac, t.sigma, a);
}

TwistedTriple conformalDeformation(const TwistedTriple& t, const ComplexMatrix& k) {
  if (t.sigma.kind() != Automorphism::Kind::Identity)
    fail(ErrorCode::InvalidArgument,
         "conformal deformation starts from a triple with trivial twist");
  // Validates evenness, selfadjointness and positivity of k.
  (void)positiveSqrt(t.space, k);
  const ComplexMatrix newD = k * t.dirac.matrix() * k;
  TwistedTriple out = t;
  out.dirac = GradedOperator::odd(t.space, newD, 1e-12);
  out.sigma = Automorphism::inner(t.space, k);
  return out;
}

namespace {

// Permutation sending copy-layout coordinates (copy 1 then copy 2, each in
// base grading order) to graded-layout coordinates for the doubled space,
// whose even sector is (copy-1 even, copy-2 odd).
ComplexMatrix doublingPermutation(const GradedSpace& base) {
  const int p = base.dimPlus, m = base.dimMinus, n = base.total();
  ComplexMatrix perm = ComplexMatrix::Zero(2 * n, 2 * n);
  // Graded row index -> copy-layout column index.
  int row = 0;
  for (int i = 0; i < p; ++i) perm(row++, i) = 1.0;            // copy-1 even
  for (int i = 0; i < m; ++i) perm(row++, n + p + i) = 1.0;    // copy-2 odd
  for (int i = 0; i < m; ++i) perm(row++, p + i) = 1.0;        // copy-1 odd
  for (int i = 0; i < p; ++i) perm(row++, n + i) = 1.0;        // copy-2 even
  return perm;
}

Automorphism doubleAutomorphism(const Automorphism& sigma, const MatrixAlgebra& doubledAlg,
                                const GradedSpace& doubledSpace,
                                const ComplexMatrix& perm) {
  const int n = sigma.space().total();
  switch (sigma.kind()) {
    case Automorphism::Kind::Identity:
      return Automorphism::identity(doubledSpace);
    case Automorphism::Kind::Inner: {
      ComplexMatrix kCopy = ComplexMatrix::Identity(2 * n, 2 * n);
      kCopy.topLeftCorner(n, n) = sigma.innerFactor();
      return Automorphism::inner(doubledSpace, perm * kCopy * perm.transpose());
    }
    case Automorphism::Kind::Linear: {
      std::vector<ComplexMatrix> span, images;
      span.reserve(sigma.spanningSet().size() + 1);
      images.reserve(span.capacity());
      for (std::size_t i = 0; i < sigma.spanningSet().size(); ++i) {
        span.push_back(doubledAlg.embed(sigma.spanningSet()[i]));
        images.push_back(doubledAlg.embed(sigma.spanningImages()[i]));
      }
      const ComplexMatrix one = ComplexMatrix::Identity(2 * n, 2 * n);
      span.push_back(one);
      images.push_back(one);
      Automorphism out = Automorphism::linear(doubledSpace, span, images);
      if (sigma.hasDeclaredRoot()) {
        const Automorphism& root = sigma.declaredRoot();
        if (root.kind() == Automorphism::Kind::Linear) {
          std::vector<ComplexMatrix> rs, ri;
          for (std::size_t i = 0; i < root.spanningSet().size(); ++i) {
            rs.push_back(doubledAlg.embed(root.spanningSet()[i]));
            ri.push_back(doubledAlg.embed(root.spanningImages()[i]));
          }
          rs.push_back(one);
          ri.push_back(one);
          out.declareRoot(Automorphism::linear(doubledSpace, rs, ri));
        }
      }
      return out;
    }
  }
  fail(ErrorCode::Internal, "unreachable automorphism kind");
}

}  // namespace

DoubledTriple invertibleDouble(const TwistedTriple& t) {
  const GradedSpace base = t.space;
  const int n = base.total();
  const GradedSpace doubledSpace{base.dimPlus + base.dimMinus,
                                 base.dimMinus + base.dimPlus};
  const ComplexMatrix perm = doublingPermutation(base);

  ComplexMatrix d0Copy = ComplexMatrix::Zero(2 * n, 2 * n);
  d0Copy.topLeftCorner(n, n) = t.dirac.matrix();
  d0Copy.bottomRightCorner(n, n) = -t.dirac.matrix();
  ComplexMatrix jCopy = ComplexMatrix::Zero(2 * n, 2 * n);
  jCopy.topRightCorner(n, n) = ComplexMatrix::Identity(n, n);
  jCopy.bottomLeftCorner(n, n) = ComplexMatrix::Identity(n, n);

  const ComplexMatrix d0Graded = perm * d0Copy * perm.transpose();
  const ComplexMatrix jGraded = perm * jCopy * perm.transpose();

  auto baseCopy = std::make_shared<const MatrixAlgebra>(t.algebra);
  MatrixAlgebra doubledAlg = MatrixAlgebra::doubled(baseCopy, doubledSpace, perm);
  Automorphism doubledSigma = doubleAutomorphism(t.sigma, doubledAlg, doubledSpace, perm);

  DoubledTriple out;
  out.doubled = makeTwistedTriple(std::move(doubledAlg), d0Graded + jGraded,
                                  std::move(doubledSigma), t.nominalSummability);
  out.original = std::make_shared<const TwistedTriple>(t);
  out.d0 = GradedOperator::odd(doubledSpace, d0Graded, 1e-12);
  out.joiner = GradedOperator::odd(doubledSpace, jGraded, 1e-12);
  out.permutation = perm;
  return out;
}

ValidationReport validateTriple(const TwistedTriple& t, const ElementSampler& sampler,
                                int sampleCount, double tol) {
  ValidationReport report;
  auto push = [&](const std::string& check, double residual, double scale,
                  bool skipped = false, const std::string& note = "") {
    ValidationIssue issue;
    issue.check = check;
    issue.residual = residual;
    issue.scale = std::max(scale, 1e-300);
    issue.skipped = skipped;
    issue.passed = skipped || residual <= tol * issue.scale;
    issue.note = note;
    report.issues.push_back(issue);
  };

  const ComplexMatrix& d = t.dirac.matrix();
  const double dScale = std::max(d.norm(), 1e-300);
  push("dirac.selfadjoint", (d - d.adjoint()).norm(), dScale);
  {
    const GradedSpace& s = t.space;
    const double offOdd = std::hypot(d.topLeftCorner(s.dimPlus, s.dimPlus).norm(),
                                     d.bottomRightCorner(s.dimMinus, s.dimMinus).norm());
    push("dirac.odd", offOdd, dScale);
  }

  const auto samples = sampler.sample(t.algebra, sampleCount);
  double regularityWorst = 0.0, multWorst = 0.0, evenWorst = 0.0, commWorst = 0.0;
  double membershipWorst = 0.0;
  bool membershipChecked = true;
  for (const auto& a : samples) {
    const double aScale = std::max(a.norm(), 1e-300);
    // Evenness of algebra samples.
    const GradedSpace& s = t.space;
    evenWorst = std::max(evenWorst,
                         std::hypot(a.topRightCorner(s.dimPlus, s.dimMinus).norm(),
                                    a.bottomLeftCorner(s.dimMinus, s.dimPlus).norm()) /
                             aScale);
    // Regularity sigma(a)* = sigma^-1(a*).
    const ComplexMatrix lhs = t.sigma.apply(a).adjoint();
    const ComplexMatrix rhs = t.sigma.applyInverse(a.adjoint());
    regularityWorst = std::max(regularityWorst, (lhs - rhs).norm() / aScale);
    // Twisted commutator of an even element is odd; measure the raw matrix
    // so no structural projection can mask a defect.
    const ComplexMatrix craw = d * a - t.sigma.apply(a) * d;
    const double cScale = std::max(craw.norm(), dScale * aScale);
    const double diagDefect =
        std::hypot(craw.topLeftCorner(s.dimPlus, s.dimPlus).norm(),
                   craw.bottomRightCorner(s.dimMinus, s.dimMinus).norm());
    commWorst = std::max(commWorst, diagDefect / std::max(cScale, 1e-300));
    // Membership when decidable.
    const auto membership = t.algebra.contains(a);
    if (!membership.checked)
      membershipChecked = false;
    else
      membershipWorst = std::max(membershipWorst, membership.residual);
  }
  for (std::size_t i = 0; i + 1 < samples.size(); i += 2) {
    const ComplexMatrix& a = samples[i];
    const ComplexMatrix& b = samples[i + 1];
    const ComplexMatrix lhs = t.sigma.apply(a * b);
    const ComplexMatrix rhs = t.sigma.apply(a) * t.sigma.apply(b);
    const double scale = std::max(a.norm() * b.norm(), 1e-300);
    multWorst = std::max(multWorst, (lhs - rhs).norm() / scale);
  }
  const ComplexMatrix one = t.algebra.unit();
  push("sigma.unital", (t.sigma.apply(one) - one).norm(), 1.0);
  push("sigma.regularity", regularityWorst, 1.0);
  push("sigma.multiplicative", multWorst, 1.0);
  push("algebra.even-samples", evenWorst, 1.0);
  push("commutator.odd", commWorst, 1.0);
  if (membershipChecked)
    push("algebra.membership", membershipWorst, 1.0);
  else
    push("algebra.membership", 0.0, 1.0, true, "span too large, partial validation");
  return report;
}

}  // namespace twistdex
