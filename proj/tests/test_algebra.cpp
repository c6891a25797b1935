#include "doctest.h"
#include "helpers.hpp"
#include "twistdex/algebra.hpp"
#include "twistdex/errors.hpp"

using namespace twistdex;

namespace {

ComplexMatrix diag3(Complex a, Complex b, Complex c) {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  return m;
}

}  // namespace

TEST_SUITE("algebra") {

TEST_CASE("full even algebra membership") {
  const GradedSpace s{2, 2};
  const MatrixAlgebra a = MatrixAlgebra::fullEven(s);
  Prng rng(3);
  ComplexMatrix even = ComplexMatrix::Zero(4, 4);
  even.topLeftCorner(2, 2) = testutil::randomMatrix(2, 2, rng);
  even.bottomRightCorner(2, 2) = testutil::randomMatrix(2, 2, rng);
  CHECK(a.contains(even).member);
  CHECK(a.contains(a.unit()).member);

  const ComplexMatrix odd = testutil::randomOddSelfadjoint(s, 5);
  const MatrixAlgebra::Membership verdict = a.contains(odd);
  CHECK(verdict.checked);
  CHECK_FALSE(verdict.member);
  CHECK(verdict.residual > 0.1);
}

TEST_CASE("generated algebra closes under products and adjoints") {
  const GradedSpace s{2, 1};
  const ComplexMatrix g1 = diag3(1, 0, 0);
  const ComplexMatrix g2 = diag3(0, 1, 1);
  const MatrixAlgebra a = MatrixAlgebra::generated(s, {g1, g2});
  CHECK(a.contains(g1 * g2).member);
  CHECK(a.contains(g1.adjoint().eval()).member);
  CHECK(a.contains(a.unit()).member);
  CHECK_FALSE(a.contains(diag3(0, 1, 0)).member);
}

TEST_CASE("inner automorphism transports by conjugation with k squared") {
  const GradedSpace s{2, 2};
  const ComplexMatrix k = testutil::positiveEvenFactor(s, 11, 0.4);
  const Automorphism sigma = Automorphism::inner(s, k);
  Prng rng(13);
  ComplexMatrix a = ComplexMatrix::Zero(4, 4);
  a.topLeftCorner(2, 2) = testutil::randomMatrix(2, 2, rng);
  a.bottomRightCorner(2, 2) = testutil::randomMatrix(2, 2, rng);

  const ComplexMatrix k2 = k * k;
  const ComplexMatrix expected = k2 * a * k2.inverse();
  CHECK((sigma.apply(a) - expected).norm() < 1e-10 * expected.norm());
  CHECK((sigma.applyInverse(sigma.apply(a)) - a).norm() < 1e-10 * a.norm());

  // Regularity: sigma(a)* = sigma^-1(a*).
  const ComplexMatrix lhs = sigma.apply(a).adjoint();
  const ComplexMatrix rhs = sigma.applyInverse(a.adjoint());
  CHECK((lhs - rhs).norm() < 1e-10 * lhs.norm());
}

TEST_CASE("linear automorphism on a spanning set") {
  const GradedSpace s{2, 1};
  const ComplexMatrix g1 = diag3(1, 0, 0);
  const ComplexMatrix g2 = diag3(0, 1, 1);
  const Automorphism swap = Automorphism::linear(s, {g1, g2}, {g2, g1});
  CHECK((swap.apply(g1) - g2).norm() < 1e-14);
  CHECK((swap.apply(diag3(2, 5, 5)) - diag3(5, 2, 2)).norm() < 1e-14);

  // Elements outside the span are rejected.
  CHECK_THROWS_AS((void)swap.apply(diag3(0, 1, 0)), Error);
  try {
    (void)swap.apply(diag3(0, 1, 0));
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::OutsideSpan);
  }
}

TEST_CASE("ribbon square roots") {
  const GradedSpace s{2, 2};
  const Automorphism id = Automorphism::identity(s);
  const Automorphism idRoot = ribbonSquareRoot(id);
  Prng rng(7);
  ComplexMatrix a = ComplexMatrix::Zero(4, 4);
  a.topLeftCorner(2, 2) = testutil::randomMatrix(2, 2, rng);
  CHECK((idRoot.apply(a) - a).norm() < 1e-14);

  const ComplexMatrix k = testutil::positiveEvenFactor(s, 19, 0.3);
  const Automorphism inner = Automorphism::inner(s, k);
  const Automorphism root = ribbonSquareRoot(inner);
  const ComplexMatrix viaRoot = root.apply(root.apply(a));
  CHECK((viaRoot - inner.apply(a)).norm() < 1e-9 * std::max(1.0, a.norm()));

  const GradedSpace s3{2, 1};
  const ComplexMatrix g1 = diag3(1, 0, 0);
  const ComplexMatrix g2 = diag3(0, 1, 1);
  const Automorphism swap = Automorphism::linear(s3, {g1, g2}, {g2, g1});
  CHECK_THROWS_AS((void)ribbonSquareRoot(swap), Error);
  try {
    (void)ribbonSquareRoot(swap);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::NoRibbonStructure);
  }

  // A declared root is honored.
  Automorphism declared = Automorphism::linear(s3, {g1, g2}, {g1, g2});
  declared.declareRoot(swap);  // swap o swap = identity on the span
  const Automorphism recovered = ribbonSquareRoot(declared);
  CHECK((recovered.apply(g1) - g2).norm() < 1e-14);
}

TEST_CASE("positive square root of a conformal factor") {
  const GradedSpace s{3, 2};
  const ComplexMatrix k = testutil::positiveEvenFactor(s, 29, 0.5);
  const ComplexMatrix r = positiveSqrt(s, k);
  CHECK((r * r - k).norm() < 1e-10 * k.norm());
  CHECK((r - r.adjoint()).norm() < 1e-10 * r.norm());
}

TEST_CASE("element sampler is deterministic and lands in the algebra") {
  const GradedSpace s{2, 2};
  const MatrixAlgebra a = MatrixAlgebra::fullEven(s);
  const ElementSampler sampler{99, 3, 1.0};
  const auto first = sampler.sample(a, 5);
  const auto second = sampler.sample(a, 5);
  REQUIRE(first.size() == 5);
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK((first[i] - second[i]).norm() == 0.0);
    CHECK(a.contains(first[i]).member);
  }
}

}  // TEST_SUITE
