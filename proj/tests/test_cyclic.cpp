#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "twistdex/chern.hpp"
#include "twistdex/cyclic.hpp"
#include "twistdex/errors.hpp"
#include "twistdex/index.hpp"

using namespace twistdex;

namespace {

// Generic (neither cyclic nor normalized) multilinear functional.
Cochain traceCochain(int degree, int dim, std::uint64_t seed) {
  Prng rng(seed);
  std::vector<ComplexMatrix> weights;
  for (int i = 0; i <= degree; ++i) {
    weights.push_back(testutil::randomMatrix(dim, dim, rng));
  }
  Cochain phi;
  phi.degree = degree;
  phi.argDim = dim;
  phi.eval = [weights](const std::vector<ComplexMatrix>& args) {
    ComplexMatrix acc = weights[0] * args[0];
    for (std::size_t j = 1; j < weights.size(); ++j) {
      acc = acc * weights[j] * args[j];
    }
    return acc.trace();
  };
  return phi;
}

std::vector<ComplexMatrix> tupleOf(int count, int dim, Prng& rng) {
  std::vector<ComplexMatrix> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(testutil::randomMatrix(dim, dim, rng));
  }
  return out;
}

}  // namespace

TEST_SUITE("cyclic") {

TEST_CASE("coboundary squares to zero") {
  Prng rng(3);
  for (int m = 1; m <= 3; ++m) {
    const Cochain phi = traceCochain(m, 3, 11 + m);
    const Cochain bb = hochschildB(hochschildB(phi));
    for (int rep = 0; rep < 6; ++rep) {
      const auto args = tupleOf(m + 3, 3, rng);
      CHECK(std::abs(bb(args)) < 1e-10 * std::max(1.0, std::abs(phi(tupleOf(m + 1, 3, rng)))));
    }
  }
}

TEST_CASE("lowering boundary squares to zero and anticommutes") {
  Prng rng(5);
  for (int m = 2; m <= 3; ++m) {
    const Cochain phi = traceCochain(m, 3, 17 + m);
    const Cochain bb = connesB(connesB(phi));
    const Cochain anti1 = hochschildB(connesB(phi));
    const Cochain anti2 = connesB(hochschildB(phi));
    for (int rep = 0; rep < 6; ++rep) {
      CHECK(std::abs(bb(tupleOf(m - 1, 3, rng))) < 1e-9);
      const auto args = tupleOf(m + 1, 3, rng);
      CHECK(std::abs(anti1(args) + anti2(args)) < 1e-9);
    }
  }
  CHECK_THROWS_AS((void)connesB(traceCochain(0, 3, 1)), Error);
}

TEST_CASE("cyclic permutation has finite order") {
  Prng rng(7);
  for (int m = 1; m <= 3; ++m) {
    const Cochain phi = traceCochain(m, 3, 23 + m);
    Cochain rotated = phi;
    for (int i = 0; i <= m; ++i) rotated = cyclicT(rotated);
    for (int rep = 0; rep < 4; ++rep) {
      const auto args = tupleOf(m + 1, 3, rng);
      CHECK(std::abs(rotated(args) - phi(args)) <
            1e-11 * std::max(1.0, std::abs(phi(args))));
    }
  }
}

TEST_CASE("character cochains are cyclic and normalized") {
  const TwistedTriple t = testutil::innerTriple(3, 3, 31);
  const Cochain tau = tau2k(t, 1);
  CHECK(tau.claimedCyclic);
  CHECK(tau.claimedNormalized);
  const ElementSampler sampler{37, 3, 1.0};
  const auto samples = sampler.sample(t.algebra, 8);
  CHECK(cyclicityResidual(tau, samples) < 1e-10);
  CHECK(normalizationResidual(tau, samples) < 1e-10);

  // b tau vanishes.
  const Cochain btau = hochschildB(tau);
  std::vector<ComplexMatrix> args(samples.begin(), samples.begin() + 4);
  CHECK(std::abs(btau(args)) < 1e-10);
}

TEST_CASE("lifted and entrywise contraction agree") {
  const TwistedTriple t = testutil::innerTriple(2, 2, 43);
  const Cochain tau = tau2k(t, 1);
  const Idempotent e = seededIdempotent(t, 2, 47);
  const Complex viaLift = pairCyclicCocycle(tau, t, e);
  Cochain stripped = tau;
  stripped.lifted = nullptr;
  const Complex viaEntries = pairCyclicCocycle(stripped, t, e);
  CHECK(std::abs(viaLift - viaEntries) < 1e-9);
}

TEST_CASE("pairing matches the index and survives the periodicity shift") {
  const TwistedTriple t = testutil::innerTriple(3, 3, 53, 0.25);
  const Idempotent e = seededIdempotent(t, 2, 59);
  const double ind = fredholmIndex(t, e).index;
  const Cochain tau = tau2k(t, 1);
  const Complex p2 = pairCyclicCocycle(tau, t, e);
  CHECK(std::abs(p2 - Complex(ind, 0)) < 1e-9);

  const Cochain shifted = periodicityS(tau);
  CHECK(shifted.degree == 4);
  CHECK(shifted.claimedCyclic);
  const Complex p4 = pairCyclicCocycle(shifted, t, e);
  CHECK(std::abs(p4 - p2) < 1e-8);

  // The shift of a cyclic cocycle stays closed and cyclic.
  const ElementSampler sampler{61, 3, 1.0};
  const auto samples = sampler.sample(t.algebra, 7);
  CHECK(cyclicityResidual(shifted, samples) < 1e-8);
  const Cochain bShift = hochschildB(shifted);
  std::vector<ComplexMatrix> args(samples.begin(), samples.begin() + 6);
  double scale = std::max(1.0, std::abs(shifted(
      std::vector<ComplexMatrix>(samples.begin(), samples.begin() + 5))));
  CHECK(std::abs(bShift(args)) < 1e-8 * scale);
}

TEST_CASE("degree and claim guards") {
  const TwistedTriple t = testutil::innerTriple(2, 2, 67);
  const Idempotent e = seededIdempotent(t, 1, 71);
  const Cochain phi1 = phiM(t, 1);
  CHECK_THROWS_AS((void)pairCyclicCocycle(phi1, t, e), Error);

  Cochain unclaimed = traceCochain(2, 4, 73);
  CHECK_THROWS_AS((void)pairNormalizedEven({unclaimed}, t, e), Error);
  try {
    (void)pairNormalizedEven({unclaimed}, t, e);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::ContractViolation);
  }
}

}  // TEST_SUITE
