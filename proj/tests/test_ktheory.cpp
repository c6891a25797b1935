#include "doctest.h"
#include "helpers.hpp"
#include "twistdex/errors.hpp"
#include "twistdex/ktheory.hpp"

using namespace twistdex;

TEST_SUITE("ktheory") {

TEST_CASE("amplification realize and extract are inverse") {
  const GradedSpace s{2, 2};
  Prng rng(3);
  std::vector<ComplexMatrix> entries;
  for (int i = 0; i < 4; ++i) {
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    m.topLeftCorner(2, 2) = testutil::randomMatrix(2, 2, rng);
    m.bottomRightCorner(2, 2) = testutil::randomMatrix(2, 2, rng);
    entries.push_back(m);
  }
  const Amplification amp(s, 2);
  const ComplexMatrix big = amp.realize(entries);
  CHECK(big.rows() == 8);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CHECK((amp.extractEntry(big, i, j) - entries[2 * i + j]).norm() < 1e-14);
    }
  }

  // diagonal(a) commutes with realize through entrywise products.
  const ComplexMatrix a = entries[0];
  const ComplexMatrix lhs = amp.diagonal(a) * big;
  std::vector<ComplexMatrix> scaled;
  for (int i = 0; i < 4; ++i) scaled.push_back(a * entries[i]);
  CHECK((lhs - amp.realize(scaled)).norm() < 1e-12 * lhs.norm());
}

TEST_CASE("seeded idempotents are honest idempotents over the algebra") {
  const TwistedTriple t = testutil::innerTriple(3, 3, 7);
  for (int q = 1; q <= 3; ++q) {
    const Idempotent e = seededIdempotent(t, q, 100 + q);
    const ComplexMatrix em = e.realized.matrix();
    CHECK((em * em - em).norm() < 1e-10 * std::max(1.0, em.norm()));
    CHECK(e.realized.parity() == Parity::Even);
    for (const auto& entry : e.entries) {
      CHECK(t.algebra.contains(entry).member);
    }
    const Idempotent se = sigmaOfIdempotent(t, e);
    const ComplexMatrix sm = se.realized.matrix();
    CHECK((sm * sm - sm).norm() < 1e-10 * std::max(1.0, sm.norm()));
  }
}

TEST_CASE("non-idempotent entries are rejected with a residual") {
  const TwistedTriple t = testutil::fullTriple(2, 2, 9);
  std::vector<ComplexMatrix> entries{
      2.0 * ComplexMatrix::Identity(4, 4)};  // squares to 4, not 2
  CHECK_THROWS_AS((void)makeIdempotent(t, 1, entries), Error);
  try {
    (void)makeIdempotent(t, 1, entries);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::NotIdempotent);
  }
}

TEST_CASE("direct sums concatenate modules") {
  const TwistedTriple t = testutil::fullTriple(2, 2, 11);
  const Idempotent a = seededIdempotent(t, 2, 21);
  const Idempotent b = seededIdempotent(t, 1, 22);
  const Idempotent sum = directSum(t, a, b);
  CHECK(sum.q == 3);
  const ComplexMatrix m = sum.realized.matrix();
  CHECK((m * m - m).norm() < 1e-10 * std::max(1.0, m.norm()));
}

TEST_CASE("conjugation preserves idempotency") {
  const TwistedTriple t = testutil::innerTriple(2, 2, 13);
  const Idempotent e = seededIdempotent(t, 2, 31);
  const auto g = seededInvertibleEntries(t, 2, 33);
  const Idempotent f = conjugateIdempotent(t, e, g);
  const ComplexMatrix m = f.realized.matrix();
  CHECK((m * m - m).norm() < 1e-9 * std::max(1.0, m.norm()));
  for (const auto& entry : f.entries) {
    CHECK(t.algebra.contains(entry, 1e-8).member);
  }
}

TEST_CASE("sigma-selfadjoint conjugate has the advertised properties") {
  const TwistedTriple t = testutil::innerTriple(3, 3, 17, 0.3);
  const Idempotent e = seededIdempotent(t, 2, 41);
  const SigmaConjugationResult res = sigmaSelfadjointConjugate(t, e);
  CHECK(res.idempotentResidual < 1e-9);
  CHECK(res.sigmaSelfadjointResidual < 1e-9);
  CHECK(res.conjugacyResidual < 1e-9);
  CHECK(res.absorbedLeftResidual < 1e-9);
  CHECK(res.absorbedRightResidual < 1e-9);
  CHECK(res.conditionNumber >= 1.0);

  // Direct checks on the realized operators.
  const ComplexMatrix p = res.p.realized.matrix();
  const Amplification amp(t.space, 2);
  const ComplexMatrix sp = amp.applySigma(t.sigma, p);
  CHECK((sp.adjoint() - p).norm() < 1e-9 * std::max(1.0, p.norm()));
}

}  // TEST_SUITE
