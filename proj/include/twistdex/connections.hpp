#pragma once

#include <cstdint>
#include <vector>

#include "twistdex/chern.hpp"
#include "twistdex/index.hpp"

namespace twistdex {

// One term of a module connection form: contributes left [D, right] (twisted
// commutator) to the (i, j) entry of the q x q operator matrix.
struct ConnectionTerm {
  int i = 0;
  int j = 0;
  ComplexMatrix left;
  ComplexMatrix right;
};

// Perturbation of the Grassmannian connection on the module cut out by an
// idempotent of size q. An empty term list is the Grassmannian connection
// itself.
struct SigmaConnection {
  int q = 1;
  std::vector<ConnectionTerm> terms;
};

// Builds the Grassmannian coupled operator entry by entry,
//   block(i, j) = sigma(e)_ij D + sum_l sigma(e)_il [D, e_lj],
// and returns its relative distance from the compression target
// sigma(e) (D (x) 1_q) e. The two agree identically; the residual exercises
// the entry extraction and twisting paths.
double grassmannianResidual(const TwistedTriple& t, const Idempotent& e);

// Realizes the connection form Omega on the amplified space. Terms must
// reference entries inside [0, q)^2 and use even algebra members; violations
// signal invalid-connection.
ComplexMatrix realizeConnectionForm(const TwistedTriple& t, const Idempotent& e,
                                    const SigmaConnection& conn);

// Compression of the coupled operator sigma(e) (Dq + Omega) e.
CompressedOperator coupleConnection(const TwistedTriple& t, const Idempotent& e,
                                    const SigmaConnection& conn,
                                    double rankTol = kDefaultRankTol);

// Random small connection form for stress runs.
SigmaConnection seededConnection(const TwistedTriple& t, int q,
                                 std::uint64_t seed, int termCount = 4);

struct ConnectionIndexReport {
  IndexReport coupled;       // index of the perturbed coupled operator
  IndexReport grassmannian;  // index of the unperturbed operator
  Complex pairing;           // restricted-character pairing of the double
  double agreementGap = 0.0; // largest pairwise difference of the three
};

// Index transport: the coupled index, the Grassmannian index, and the
// pairing with the restricted character of the invertible double agree.
ConnectionIndexReport connectionIndexTheorem(const TwistedTriple& t,
                                             const Idempotent& e,
                                             const SigmaConnection& conn,
                                             int cocycleDegree,
                                             double rankTol = kDefaultRankTol);

}  // namespace twistdex
