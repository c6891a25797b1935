#include "doctest.h"
#include "helpers.hpp"
#include "twistdex/errors.hpp"
#include "twistdex/linalg.hpp"

using namespace twistdex;

TEST_SUITE("linalg") {

TEST_CASE("parity classification and block access") {
  const GradedSpace s{2, 3};
  Prng rng(41);
  ComplexMatrix even = ComplexMatrix::Zero(5, 5);
  even.topLeftCorner(2, 2) = testutil::randomMatrix(2, 2, rng);
  even.bottomRightCorner(3, 3) = testutil::randomMatrix(3, 3, rng);
  ComplexMatrix odd = ComplexMatrix::Zero(5, 5);
  odd.topRightCorner(2, 3) = testutil::randomMatrix(2, 3, rng);
  odd.bottomLeftCorner(3, 2) = testutil::randomMatrix(3, 2, rng);

  const GradedOperator e = GradedOperator::classify(s, even);
  const GradedOperator o = GradedOperator::classify(s, odd);
  CHECK(e.parity() == Parity::Even);
  CHECK(o.parity() == Parity::Odd);
  CHECK(e.blockPP().rows() == 2);
  CHECK(o.blockPM().cols() == 3);

  const ComplexMatrix mixed = even + odd;
  CHECK_THROWS_AS((void)GradedOperator::even(s, mixed), Error);
}

TEST_CASE("grading squares to the identity and flags parity") {
  const GradedSpace s{3, 2};
  const GradedOperator gamma = GradedOperator::grading(s);
  CHECK((gamma.matrix() * gamma.matrix() -
         ComplexMatrix::Identity(5, 5)).norm() == doctest::Approx(0.0));
  const ComplexMatrix d = testutil::randomOddSelfadjoint(s, 7);
  CHECK((gamma.matrix() * d + d * gamma.matrix()).norm() ==
        doctest::Approx(0.0));
}

TEST_CASE("supertrace matches the signed block trace") {
  const GradedSpace s{2, 2};
  Prng rng(5);
  ComplexMatrix m = testutil::randomMatrix(4, 4, rng);
  const Complex expected = m.topLeftCorner(2, 2).trace() -
                           m.bottomRightCorner(2, 2).trace();
  CHECK(std::abs(supertrace(s, m) - expected) < 1e-14);

  const ComplexMatrix odd = testutil::randomOddSelfadjoint(s, 9);
  CHECK(std::abs(supertrace(s, odd)) < 1e-14);
}

TEST_CASE("adjoint and inverse of graded operators") {
  const GradedSpace s{3, 3};
  const ComplexMatrix d = testutil::randomOddSelfadjoint(s, 11, 0.5);
  const GradedOperator op = GradedOperator::odd(s, d);
  CHECK(op.isSelfadjoint(1e-12));
  const GradedOperator inv = op.inverse();
  CHECK((op.matrix() * inv.matrix() - ComplexMatrix::Identity(6, 6)).norm() <
        1e-10);
  CHECK(inv.parity() == Parity::Odd);

  const GradedOperator singular =
      GradedOperator::odd(s, ComplexMatrix::Zero(6, 6));
  CHECK_THROWS_AS((void)singular.inverse(), Error);
  try {
    (void)singular.inverse();
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::RequiresInvertible);
  }
}

TEST_CASE("numerical rank with a clear spectral gap") {
  Prng rng(3);
  const ComplexMatrix u = testutil::randomMatrix(6, 3, rng);
  const ComplexMatrix v = testutil::randomMatrix(6, 3, rng);
  const ComplexMatrix m = u * v.adjoint();  // rank 3 generically
  const RankDecision d = numericalRankInfo(m);
  CHECK(d.rank == 3);
  CHECK_FALSE(d.marginal);
  CHECK(d.smallestAccepted > d.threshold);
}

TEST_CASE("kernel and range bases are orthonormal and consistent") {
  Prng rng(13);
  const ComplexMatrix u = testutil::randomMatrix(5, 2, rng);
  const ComplexMatrix v = testutil::randomMatrix(4, 2, rng);
  const ComplexMatrix m = u * v.adjoint();  // 5x4 of rank 2
  const ComplexMatrix ker = kernelBasis(m);
  const ComplexMatrix ran = rangeBasis(m);
  CHECK(ker.cols() == 2);
  CHECK(ran.cols() == 2);
  CHECK((m * ker).norm() < 1e-10);
  CHECK((ker.adjoint() * ker - ComplexMatrix::Identity(2, 2)).norm() < 1e-12);
  CHECK((ran.adjoint() * ran - ComplexMatrix::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("pseudoinverse reproduces the projector onto the range") {
  Prng rng(17);
  const ComplexMatrix u = testutil::randomMatrix(4, 2, rng);
  const ComplexMatrix v = testutil::randomMatrix(4, 2, rng);
  const ComplexMatrix m = u * v.adjoint();
  const ComplexMatrix pinv = pseudoInverse(m);
  CHECK((m * pinv * m - m).norm() < 1e-10 * m.norm());
  CHECK((pinv * m * pinv - pinv).norm() < 1e-10 * pinv.norm());
}

TEST_CASE("schatten norms interpolate between trace and operator norm") {
  const GradedSpace s{2, 2};
  const ComplexMatrix d = testutil::randomOddSelfadjoint(s, 23, 0.3);
  const double p1 = schattenNorm(d, 1.0);
  const double p2 = schattenNorm(d, 2.0);
  CHECK(p2 == doctest::Approx(d.norm()));
  CHECK(p1 >= p2);
  const GradedOperator op = GradedOperator::odd(s, d);
  CHECK(op.operatorNorm() <= p2 + 1e-12);
  CHECK(op.minSingularValue() > 0.0);
}

}  // TEST_SUITE
