#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "twistdex/connections.hpp"
#include "twistdex/errors.hpp"

using namespace twistdex;

TEST_SUITE("connections") {

TEST_CASE("the canonical connection reproduces the compressed operator") {
  const TwistedTriple t = testutil::innerTriple(3, 3, 3, 0.25);
  for (std::uint64_t seed : {5ull, 7ull, 11ull}) {
    const Idempotent e = seededIdempotent(t, 2, seed);
    CHECK(grassmannianResidual(t, e) < 1e-10);
  }
  const TwistedTriple plain = testutil::fullTriple(2, 2, 13);
  const Idempotent e = seededIdempotent(plain, 3, 17);
  CHECK(grassmannianResidual(plain, e) < 1e-10);
}

TEST_CASE("malformed connection forms are rejected") {
  const TwistedTriple t = testutil::fullTriple(2, 2, 19);
  const Idempotent e = seededIdempotent(t, 2, 23);
  const ComplexMatrix unit = ComplexMatrix::Identity(4, 4);

  SigmaConnection wrongSize;
  wrongSize.q = 3;
  CHECK_THROWS_AS((void)realizeConnectionForm(t, e, wrongSize), Error);

  SigmaConnection outOfRange;
  outOfRange.q = 2;
  outOfRange.terms.push_back({2, 0, unit, unit});
  CHECK_THROWS_AS((void)realizeConnectionForm(t, e, outOfRange), Error);

  SigmaConnection oddLeft;
  oddLeft.q = 2;
  oddLeft.terms.push_back({0, 0, testutil::randomOddSelfadjoint(t.space, 29), unit});
  CHECK_THROWS_AS((void)realizeConnectionForm(t, e, oddLeft), Error);
  try {
    (void)realizeConnectionForm(t, e, oddLeft);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::InvalidConnection);
  }
}

TEST_CASE("empty connection couples to the unperturbed operator") {
  const TwistedTriple t = testutil::innerTriple(2, 2, 31);
  const Idempotent e = seededIdempotent(t, 2, 37);
  SigmaConnection canonical;
  canonical.q = 2;
  const ConnectionIndexReport rep = connectionIndexTheorem(t, e, canonical, 1);
  CHECK(rep.coupled.index == doctest::Approx(rep.grassmannian.index));
  CHECK(rep.agreementGap < 1e-8);
}

TEST_CASE("perturbed connections transport the index") {
  const TwistedTriple t = testutil::innerTriple(3, 3, 41, 0.2);
  const Idempotent e = seededIdempotent(t, 2, 43);
  const double ind = fredholmIndex(t, e).index;
  for (std::uint64_t seed : {47ull, 53ull, 59ull}) {
    const SigmaConnection conn = seededConnection(t, 2, seed, 4);
    CHECK_FALSE(conn.terms.empty());
    const ConnectionIndexReport rep = connectionIndexTheorem(t, e, conn, 1);
    CHECK(rep.coupled.index == doctest::Approx(ind));
    CHECK(std::abs(rep.pairing - Complex(ind, 0)) < 1e-8);
    CHECK(rep.agreementGap < 1e-8);
  }
}

}  // TEST_SUITE
