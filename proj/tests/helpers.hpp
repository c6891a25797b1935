#pragma once

#include <cstdint>

#include "twistdex/algebra.hpp"
#include "twistdex/linalg.hpp"
#include "twistdex/prng.hpp"
#include "twistdex/triple.hpp"

// Deterministic builders shared by the test suites.
namespace testutil {

using twistdex::Automorphism;
using twistdex::Complex;
using twistdex::ComplexMatrix;
using twistdex::GradedSpace;
using twistdex::MatrixAlgebra;
using twistdex::Prng;
using twistdex::TwistedTriple;

inline ComplexMatrix randomMatrix(int rows, int cols, Prng& rng) {
  ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = rng.complexSym();
  }
  return m;
}

// Odd selfadjoint operator; when minSingular > 0 the off-diagonal block has
// its singular values clamped from below, so the whole operator is
// invertible with a known margin.
inline ComplexMatrix randomOddSelfadjoint(const GradedSpace& s,
                                          std::uint64_t seed,
                                          double minSingular = 0.0) {
  Prng rng(seed);
  ComplexMatrix b = randomMatrix(s.dimPlus, s.dimMinus, rng);
  if (minSingular > 0.0) {
    Eigen::JacobiSVD<ComplexMatrix> svd(
        b, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXd sv = svd.singularValues();
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      sv(i) = std::max(sv(i), minSingular);
    }
    b = svd.matrixU() * sv.asDiagonal() * svd.matrixV().adjoint();
  }
  ComplexMatrix d = ComplexMatrix::Zero(s.total(), s.total());
  d.topRightCorner(s.dimPlus, s.dimMinus) = b;
  d.bottomLeftCorner(s.dimMinus, s.dimPlus) = b.adjoint();
  return d;
}

// Positive even conformal factor 1 + spread * H with |H| <= 1.
inline ComplexMatrix positiveEvenFactor(const GradedSpace& s,
                                        std::uint64_t seed,
                                        double spread = 0.3) {
  Prng rng(seed);
  ComplexMatrix h = ComplexMatrix::Zero(s.total(), s.total());
  if (s.dimPlus > 0) {
    const ComplexMatrix x = randomMatrix(s.dimPlus, s.dimPlus, rng);
    h.topLeftCorner(s.dimPlus, s.dimPlus) = 0.5 * (x + x.adjoint());
  }
  if (s.dimMinus > 0) {
    const ComplexMatrix x = randomMatrix(s.dimMinus, s.dimMinus, rng);
    h.bottomRightCorner(s.dimMinus, s.dimMinus) = 0.5 * (x + x.adjoint());
  }
  const double top = twistdex::singularValues(h).maxCoeff();
  if (top > 0.0) h /= top;
  return ComplexMatrix::Identity(s.total(), s.total()) + spread * h;
}

// Full even algebra over an invertible random operator.
inline TwistedTriple fullTriple(int dimPlus, int dimMinus, std::uint64_t seed,
                                double summability = 2.0) {
  const GradedSpace space{dimPlus, dimMinus};
  return makeTwistedTriple(MatrixAlgebra::fullEven(space),
                           randomOddSelfadjoint(space, seed, 0.4),
                           Automorphism::identity(space), summability);
}

inline TwistedTriple innerTriple(int dimPlus, int dimMinus, std::uint64_t seed,
                                 double spread = 0.3,
                                 double summability = 2.0) {
  const GradedSpace space{dimPlus, dimMinus};
  return makeTwistedTriple(
      MatrixAlgebra::fullEven(space),
      randomOddSelfadjoint(space, seed, 0.4),
      Automorphism::inner(space, positiveEvenFactor(space, seed ^ 0x77ull, spread)),
      summability);
}

// Even projector with prescribed sector ranks, as an ambient matrix.
inline ComplexMatrix sectorProjector(const GradedSpace& s, int rankPlus,
                                     int rankMinus) {
  ComplexMatrix p = ComplexMatrix::Zero(s.total(), s.total());
  for (int i = 0; i < rankPlus; ++i) p(i, i) = 1.0;
  for (int i = 0; i < rankMinus; ++i) {
    p(s.dimPlus + i, s.dimPlus + i) = 1.0;
  }
  return p;
}

}  // namespace testutil
