#include "doctest.h"
#include "helpers.hpp"
#include "twistdex/errors.hpp"
#include "twistdex/triple.hpp"

using namespace twistdex;

TEST_SUITE("triple") {

TEST_CASE("construction validates the operator") {
  const GradedSpace s{2, 2};
  const MatrixAlgebra a = MatrixAlgebra::fullEven(s);
  const Automorphism id = Automorphism::identity(s);

  // Even operators are rejected, as are non-selfadjoint odd ones.
  CHECK_THROWS_AS(
      (void)makeTwistedTriple(a, ComplexMatrix::Identity(4, 4), id, 1.0),
      Error);
  ComplexMatrix skew = testutil::randomOddSelfadjoint(s, 3);
  skew.topRightCorner(2, 2) *= 2.0;  // breaks selfadjointness, stays odd
  CHECK_THROWS_AS((void)makeTwistedTriple(a, skew, id, 1.0), Error);

  const TwistedTriple t = testutil::fullTriple(2, 2, 5);
  CHECK(t.space.total() == 4);
  CHECK(t.dirac.isSelfadjoint(1e-12));
  CHECK(t.defaultCocycleDegree() >= 1);
}

TEST_CASE("twisted commutator obeys the deformed product rule") {
  const TwistedTriple t = testutil::innerTriple(3, 3, 17);
  const ElementSampler sampler{23, 3, 1.0};
  const auto samples = sampler.sample(t.algebra, 6);
  const ComplexMatrix d = t.dirac.matrix();
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const ComplexMatrix& a = samples[i];
    const ComplexMatrix& b = samples[i + 1];
    const ComplexMatrix lhs = twistedCommutator(t, a * b).matrix();
    const ComplexMatrix rhs = twistedCommutator(t, a).matrix() * b +
                              t.sigma.apply(a) * twistedCommutator(t, b).matrix();
    CHECK((lhs - rhs).norm() < 1e-10 * std::max(1.0, rhs.norm()));
    // The commutator of an even element is odd.
    CHECK(twistedCommutator(t, a).parity() == Parity::Odd);
    // Definition agrees with the raw formula.
    const ComplexMatrix raw = d * a - t.sigma.apply(a) * d;
    CHECK((twistedCommutator(t, a).matrix() - raw).norm() < 1e-13 * raw.norm());
  }
}

TEST_CASE("sampled axioms hold for random triples") {
  const TwistedTriple t = testutil::innerTriple(3, 2, 29, 0.25);
  const ElementSampler sampler{31, 3, 1.0};
  const ValidationReport rep = validateTriple(t, sampler, 8, 1e-10);
  CHECK(rep.allPassed());
  bool sawRegularity = false;
  for (const auto& issue : rep.issues) {
    if (issue.check == "sigma.regularity") sawRegularity = true;
  }
  CHECK(sawRegularity);
}

TEST_CASE("conformal deformation transports commutators") {
  const TwistedTriple base = testutil::fullTriple(3, 3, 37);
  const ComplexMatrix k = testutil::positiveEvenFactor(base.space, 41, 0.35);
  const TwistedTriple deformed = conformalDeformation(base, k);

  CHECK(deformed.sigma.kind() == Automorphism::Kind::Inner);
  const ComplexMatrix expected = k * base.dirac.matrix() * k;
  CHECK((deformed.dirac.matrix() - expected).norm() < 1e-12 * expected.norm());

  const ElementSampler sampler{43, 3, 1.0};
  const ComplexMatrix kinv = k.inverse();
  const ComplexMatrix d = base.dirac.matrix();
  for (const auto& a : sampler.sample(base.algebra, 6)) {
    const ComplexMatrix lhs = twistedCommutator(deformed, a).matrix();
    const ComplexMatrix moved = k * a * kinv;
    const ComplexMatrix rhs = k * (d * moved - moved * d) * k;
    CHECK((lhs - rhs).norm() < 1e-10 * std::max(lhs.norm(), rhs.norm()));
  }

  // Deforming a twisted base or using a bad factor is rejected.
  CHECK_THROWS_AS((void)conformalDeformation(deformed, k), Error);
  try {
    (void)conformalDeformation(base, ComplexMatrix::Zero(6, 6));
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::InvalidConformalFactor);
  }
}

TEST_CASE("invertible double squares to the shifted square") {
  const GradedSpace s{3, 3};
  const MatrixAlgebra a = MatrixAlgebra::fullEven(s);
  // A singular operator: the double must still be invertible.
  ComplexMatrix d = testutil::randomOddSelfadjoint(s, 47);
  d.topRightCorner(3, 3).col(0).setZero();
  d.bottomLeftCorner(3, 3).row(0).setZero();
  const TwistedTriple t =
      makeTwistedTriple(a, d, Automorphism::identity(s), 1.0);

  const DoubledTriple dt = invertibleDouble(t);
  const ComplexMatrix big = dt.doubled.dirac.matrix();
  const int n = t.space.total();
  CHECK(big.rows() == 2 * n);
  CHECK(dt.doubled.dirac.minSingularValue() > 0.9);

  const ComplexMatrix d0 = dt.d0.matrix();
  const ComplexMatrix j = dt.joiner.matrix();
  CHECK((d0 * j + j * d0).norm() < 1e-12);
  const ComplexMatrix square = big * big;
  const ComplexMatrix expected =
      d0 * d0 + ComplexMatrix::Identity(2 * n, 2 * n);
  CHECK((square - expected).norm() < 1e-12 * expected.norm());

  // The embedding is a unital-free homomorphism: multiplicative, zero scalar.
  Prng rng(53);
  ComplexMatrix x = ComplexMatrix::Zero(n, n);
  x.topLeftCorner(3, 3) = testutil::randomMatrix(3, 3, rng);
  const ComplexMatrix ex = dt.embed(x);
  CHECK((dt.embed(x * x) - ex * ex).norm() < 1e-12 * std::max(1.0, ex.norm()));
  CHECK(dt.doubled.algebra.contains(ex).member);
}

}  // TEST_SUITE
