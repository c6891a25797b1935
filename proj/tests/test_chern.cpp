#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "twistdex/chern.hpp"
#include "twistdex/errors.hpp"
#include "twistdex/index.hpp"

using namespace twistdex;

TEST_SUITE("chern") {

TEST_CASE("character constants") {
  CHECK(chernConstant(1) == doctest::Approx(-0.25));
  CHECK(chernConstant(2) == doctest::Approx(1.0 / 24.0));
  CHECK(chernConstant(3) == doctest::Approx(-1.0 / 240.0));
}

TEST_CASE("lemma relations tie the auxiliary cochains to the character") {
  const TwistedTriple t = testutil::innerTriple(3, 3, 3, 0.3);
  const ElementSampler sampler{5, 3, 1.0};
  const auto samples = sampler.sample(t.algebra, 12);
  for (int k = 1; k <= 2; ++k) {
    const LemmaReport rep = lemmaRelations(t, k, samples);
    CHECK(rep.maxResidual < 1e-8);
    CHECK(rep.splitResidual < 1e-10);
    CHECK(rep.closedTau < 1e-10);
    CHECK(rep.cyclicTau < 1e-10);
    CHECK(rep.normalizedTau < 1e-10);
  }
  CHECK_THROWS_AS((void)lemmaRelations(t, 0, samples), Error);
}

TEST_CASE("restricted double character pairs to the kernel index") {
  // Singular operator: the double is the only route to the index.
  const GradedSpace s{3, 3};
  ComplexMatrix d = testutil::randomOddSelfadjoint(s, 7);
  d.topRightCorner(3, 3).col(1).setZero();
  d.bottomLeftCorner(3, 3).row(1).setZero();
  const TwistedTriple t = makeTwistedTriple(
      MatrixAlgebra::fullEven(s), d, Automorphism::identity(s), 2.0);
  const DoubledTriple dt = invertibleDouble(t);
  const Cochain tb = tauBar2k(dt, 1);
  CHECK(tb.claimedCyclic);

  const Idempotent e =
      makeIdempotent(t, 1, {testutil::sectorProjector(s, 2, 1)});
  const Complex paired = pairCyclicCocycle(tb, t, e);
  const double ind = fredholmIndex(t, e).index;
  CHECK(std::abs(paired - Complex(ind, 0)) < 1e-8);

  // Invertible case: restricted and direct characters pair identically.
  const TwistedTriple good = testutil::innerTriple(3, 3, 11);
  const DoubledTriple gd = invertibleDouble(good);
  const Idempotent ge = seededIdempotent(good, 2, 13);
  const Complex viaBar = pairCyclicCocycle(tauBar2k(gd, 1), good, ge);
  const Complex viaTau = pairCyclicCocycle(tau2k(good, 1), good, ge);
  CHECK(std::abs(viaBar - viaTau) < 1e-8);
}

TEST_CASE("family constructor rejects malformed paths") {
  const GradedSpace s{2, 2};
  const ComplexMatrix zero = ComplexMatrix::Zero(4, 4);
  const ComplexMatrix odd = testutil::randomOddSelfadjoint(s, 17);
  Prng rng(19);
  ComplexMatrix even = zero;
  even.topLeftCorner(2, 2) = testutil::randomMatrix(2, 2, rng);
  even += even.adjoint().eval();

  // Not odd.
  CHECK_THROWS_AS(HomotopyFamily(s, {{0.0, 1.0, {zero, even}}}), Error);
  // Coverage gap.
  CHECK_THROWS_AS(HomotopyFamily(s, {{0.0, 0.4, {zero, odd}},
                                     {0.6, 1.0, {zero, odd}}}),
                  Error);
  // Kink at the breakpoint: value continuous, derivative jumps.
  CHECK_THROWS_AS(HomotopyFamily(s, {{0.0, 0.5, {zero, odd}},
                                     {0.5, 1.0, {0.5 * odd, 3.0 * odd}}}),
                  Error);
  try {
    HomotopyFamily(s, {{0.0, 1.0, {zero, even}}});
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::InvalidFamily);
  }

  // A valid single piece evaluates by Horner.
  const HomotopyFamily fam(s, {{0.0, 1.0, {zero, odd, 0.5 * odd}}});
  const ComplexMatrix expected = 0.5 * odd + 0.25 * 0.5 * odd;
  CHECK((fam.v(0.5) - expected).norm() < 1e-13);
  CHECK((fam.vdot(0.5) - (odd + 0.5 * odd)).norm() < 1e-13);
}

TEST_CASE("paths that leave the invertible region are rejected at runtime") {
  const TwistedTriple t = testutil::fullTriple(2, 2, 23);
  const ComplexMatrix zero = ComplexMatrix::Zero(4, 4);
  // V(t) = -t D crosses zero at t = 1.
  const HomotopyFamily bad(t.space, {{0.0, 1.0, {zero, -t.dirac.matrix()}}});
  const Idempotent e = seededIdempotent(t, 1, 29);
  HomotopyOptions opts;
  opts.gridPoints = 5;
  opts.panels = 4;
  opts.refinedPanels = 8;
  opts.sampleTuples = 1;
  CHECK_THROWS_AS((void)homotopyInvarianceCheck(t, bad, e, opts), Error);
  try {
    (void)homotopyInvarianceCheck(t, bad, e, opts);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::InvalidFamily);
  }

  // Singular base operator cannot seed a polynomial family.
  const GradedSpace s{2, 2};
  const TwistedTriple singular =
      makeTwistedTriple(MatrixAlgebra::fullEven(s), zero,
                        Automorphism::identity(s), 1.0);
  CHECK_THROWS_AS((void)polynomialFamily(singular, 1), Error);
}

TEST_CASE("pairing is constant along polynomial perturbations") {
  const TwistedTriple t = testutil::innerTriple(2, 2, 31, 0.25);
  const Idempotent e = seededIdempotent(t, 2, 37);
  const HomotopyFamily fam = polynomialFamily(t, 41, 0.4);
  HomotopyOptions opts;
  opts.gridPoints = 9;
  opts.panels = 32;
  opts.refinedPanels = 64;
  opts.sampleTuples = 2;
  opts.seed = 43;
  const HomotopyReport rep = homotopyInvarianceCheck(t, fam, e, opts);
  CHECK(rep.gridResidual < 1e-8);
  CHECK(rep.transgressionResidual < 1e-6);
  CHECK(rep.coboundaryResidual < 1e-6);
  const bool decayed = rep.decayFactor >= 8.0 ||
                       rep.refinedTransgressionResidual < 1e-12;
  CHECK(decayed);
  CHECK(rep.minSingularValue > 0.0);
  REQUIRE(rep.gridTimes.size() == 9);
  CHECK(rep.gridTimes.front() == doctest::Approx(0.0));
  CHECK(rep.gridTimes.back() == doctest::Approx(1.0));
}

}  // TEST_SUITE
