#include "twistdex/connections.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "twistdex/errors.hpp"
#include "twistdex/prng.hpp"

namespace twistdex {
namespace {

void requireEvenMember(const TwistedTriple& t, const ComplexMatrix& a,
                       const char* role) {
  const int n = t.space.total();
  if (a.rows() != n || a.cols() != n) {
    fail(ErrorCode::InvalidConnection,
         std::string("connection ") + role + " has the wrong dimension");
  }
  const double norm = std::max(a.norm(), 1e-300);
  const double offDiag =
      std::hypot(a.topRightCorner(t.space.dimPlus, t.space.dimMinus).norm(),
                 a.bottomLeftCorner(t.space.dimMinus, t.space.dimPlus).norm());
  if (offDiag > 1e-10 * norm) {
    fail(ErrorCode::InvalidConnection,
         std::string("connection ") + role + " is not even");
  }
  const MatrixAlgebra::Membership m = t.algebra.contains(a);
  if (m.checked && !m.member) {
    fail(ErrorCode::InvalidConnection,
         std::string("connection ") + role + " is not an algebra member");
  }
}

}  // namespace

double grassmannianResidual(const TwistedTriple& t, const Idempotent& e) {
  const Amplification amp(t.space, e.q);
  const int q = e.q;
  const ComplexMatrix d = t.dirac.matrix();

  const Idempotent se = sigmaOfIdempotent(t, e);
  std::vector<ComplexMatrix> blocks(static_cast<std::size_t>(q) *
                                    static_cast<std::size_t>(q));
  for (int i = 0; i < q; ++i) {
    for (int j = 0; j < q; ++j) {
      ComplexMatrix block = se.entries[static_cast<std::size_t>(i * q + j)] * d;
      for (int l = 0; l < q; ++l) {
        const ComplexMatrix& a = e.entries[static_cast<std::size_t>(l * q + j)];
        block += se.entries[static_cast<std::size_t>(i * q + l)] *
                 (d * a - t.sigma.apply(a) * d);
      }
      blocks[static_cast<std::size_t>(i * q + j)] = block;
    }
  }
  const ComplexMatrix builtTermwise = amp.realize(blocks);

  const ComplexMatrix E = e.realized.matrix();
  const ComplexMatrix S = amp.applySigma(t.sigma, E);
  const ComplexMatrix Dq = amp.diagonal(d);
  const ComplexMatrix target = S * Dq * E;
  return (builtTermwise - target).norm() / std::max(target.norm(), 1e-300);
}

ComplexMatrix realizeConnectionForm(const TwistedTriple& t, const Idempotent& e,
                                    const SigmaConnection& conn) {
  if (conn.q != e.q) {
    fail(ErrorCode::InvalidConnection,
         "connection size does not match the module");
  }
  const Amplification amp(t.space, e.q);
  const int n = t.space.total();
  const ComplexMatrix d = t.dirac.matrix();

  std::vector<ComplexMatrix> entries(
      static_cast<std::size_t>(e.q) * static_cast<std::size_t>(e.q),
      ComplexMatrix::Zero(n, n));
  for (const auto& term : conn.terms) {
    if (term.i < 0 || term.i >= conn.q || term.j < 0 || term.j >= conn.q) {
      fail(ErrorCode::InvalidConnection,
           "connection term addresses an entry outside the module size");
    }
    requireEvenMember(t, term.left, "coefficient");
    requireEvenMember(t, term.right, "differential argument");
    entries[static_cast<std::size_t>(term.i * conn.q + term.j)] +=
        term.left * (d * term.right - t.sigma.apply(term.right) * d);
  }
  return amp.realize(entries);
}

CompressedOperator coupleConnection(const TwistedTriple& t, const Idempotent& e,
                                    const SigmaConnection& conn,
                                    double rankTol) {
  const Amplification amp(t.space, e.q);
  const ComplexMatrix omega = realizeConnectionForm(t, e, conn);
  const ComplexMatrix coupled = amp.diagonal(t.dirac.matrix()) + omega;
  return compressCoupled(t, e, coupled, rankTol);
}

SigmaConnection seededConnection(const TwistedTriple& t, int q,
                                 std::uint64_t seed, int termCount) {
  if (q < 1 || termCount < 0) {
    fail(ErrorCode::InvalidArgument, "bad connection parameters");
  }
  SigmaConnection conn;
  conn.q = q;
  Prng rng(seed);
  const ElementSampler sampler{seed ^ 0x9e3779b97f4a7c15ull, 2, 0.5};
  for (int c = 0; c < termCount; ++c) {
    ConnectionTerm term;
    term.i = static_cast<int>(rng.below(static_cast<std::uint64_t>(q)));
    term.j = static_cast<int>(rng.below(static_cast<std::uint64_t>(q)));
    term.left = sampler.sampleOne(t.algebra, rng);
    term.right = sampler.sampleOne(t.algebra, rng);
    conn.terms.push_back(std::move(term));
  }
  return conn;
}

ConnectionIndexReport connectionIndexTheorem(const TwistedTriple& t,
                                             const Idempotent& e,
                                             const SigmaConnection& conn,
                                             int cocycleDegree,
                                             double rankTol) {
  ConnectionIndexReport rep;
  rep.coupled = indexFromCompressed(coupleConnection(t, e, conn, rankTol), rankTol);
  rep.grassmannian = fredholmIndex(t, e, rankTol);

  const DoubledTriple dt = invertibleDouble(t);
  const Cochain restricted = tauBar2k(dt, cocycleDegree);
  rep.pairing = pairCyclicCocycle(restricted, t, e);

  const double v1 = rep.coupled.index;
  const double v2 = rep.grassmannian.index;
  const double v3 = rep.pairing.real();
  rep.agreementGap = std::max({std::abs(v1 - v2), std::abs(v1 - v3),
                               std::abs(v2 - v3), std::abs(rep.pairing.imag())});
  return rep;
}

}  // namespace twistdex
