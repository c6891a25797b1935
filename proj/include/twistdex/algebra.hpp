#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "twistdex/linalg.hpp"
#include "twistdex/prng.hpp"

namespace twistdex {

// Unital *-algebra of even operators on a graded space. Three flavours:
//   FullEven: every even operator (two full matrix blocks).
//   Generated: the unital *-algebra generated by explicit even matrices.
//   Doubled: the unitalization A + C of a base algebra, acting on the
//            doubled space; elements are embed(a) + lambda * 1.
class MatrixAlgebra {
 public:
  enum class Kind { FullEven, Generated, Doubled };

  MatrixAlgebra() = default;

  static MatrixAlgebra fullEven(const GradedSpace& space);
  static MatrixAlgebra generated(const GradedSpace& space,
                                 std::vector<ComplexMatrix> generators);
  static MatrixAlgebra doubled(std::shared_ptr<const MatrixAlgebra> base,
                               const GradedSpace& doubledSpace,
                               const ComplexMatrix& copyToGradedPermutation);

  Kind kind() const { return kind_; }
  const GradedSpace& space() const { return space_; }
  int ambientDim() const { return space_.total(); }
  ComplexMatrix unit() const {
    return ComplexMatrix::Identity(ambientDim(), ambientDim());
  }
  const std::vector<ComplexMatrix>& generators() const { return generators_; }

  // Doubled only.
  const MatrixAlgebra& base() const;
  // pi(a) + lambda * 1 on the doubled space (graded basis order).
  ComplexMatrix embed(const ComplexMatrix& baseElement,
                      Complex lambda = Complex(0, 0)) const;

  struct Membership {
    bool checked = false;   // false when the span is too large to decide
    bool member = false;
    double residual = 0.0;  // relative distance to the span when checked
  };
  Membership contains(const ComplexMatrix& a, double tol = 1e-9) const;

  // Orthonormal (Frobenius) basis of the algebra as a linear space, when the
  // dimension is at most the internal cap. Used for membership and reported
  // dimensions. Empty optional when not computable under the cap.
  const std::optional<std::vector<ComplexMatrix>>& spanBasis() const;

 private:
  Kind kind_ = Kind::FullEven;
  GradedSpace space_;
  std::vector<ComplexMatrix> generators_;
  std::shared_ptr<const MatrixAlgebra> base_;
  ComplexMatrix perm_;  // copy-layout to graded-layout, Doubled only
  mutable std::shared_ptr<std::optional<std::vector<ComplexMatrix>>> spanCache_ =
      std::make_shared<std::optional<std::vector<ComplexMatrix>>>();
};

// Regular algebra automorphism. Kinds:
//   Identity.
//   Inner: a |-> k^2 a k^-2 for an even positive invertible k.
//   Linear: linear extension of an explicit map on a spanning set; validated
//           partially (multiplicativity and regularity are sampled, not proved).
class Automorphism {
 public:
  enum class Kind { Identity, Inner, Linear };

  Automorphism() = default;

  static Automorphism identity(const GradedSpace& space);
  static Automorphism inner(const GradedSpace& space, const ComplexMatrix& k);
  static Automorphism linear(const GradedSpace& space,
                             std::vector<ComplexMatrix> spanningSet,
                             std::vector<ComplexMatrix> images);

  Kind kind() const { return kind_; }
  const GradedSpace& space() const { return space_; }
  // Inner only: the conformal factor k (not k^2).
  const ComplexMatrix& innerFactor() const;

  ComplexMatrix apply(const ComplexMatrix& a) const;
  ComplexMatrix applyInverse(const ComplexMatrix& a) const;

  const std::vector<ComplexMatrix>& spanningSet() const { return spanningSet_; }
  const std::vector<ComplexMatrix>& spanningImages() const { return images_; }

  // Attach a declared square root to a Linear automorphism (the root of an
  // Identity or Inner automorphism is canonical and needs no declaration).
  void declareRoot(const Automorphism& root);
  bool hasDeclaredRoot() const { return root_ != nullptr; }
  const Automorphism& declaredRoot() const;

 private:
  Kind kind_ = Kind::Identity;
  GradedSpace space_;
  ComplexMatrix k_, k2_, k2inv_;
  std::vector<ComplexMatrix> spanningSet_, images_;
  ComplexMatrix spanPinv_, imagePinv_;  // least-squares solvers for both directions
  std::shared_ptr<const Automorphism> root_;
};

// Free-function form of Automorphism::apply.
ComplexMatrix applyAutomorphism(const Automorphism& sigma, const ComplexMatrix& a);

// A root tau with tau(tau(a)) = sigma(a) and tau(a)* = tau^-1(a*).
// Identity -> identity, inner(k) -> inner(sqrt k), Linear -> the declared
// root if present, otherwise signals no-ribbon-structure.
Automorphism ribbonSquareRoot(const Automorphism& sigma);

// Positive square root of an even positive selfadjoint matrix; rejects
// factors whose smallest eigenvalue is below 1e-8 times the largest.
ComplexMatrix positiveSqrt(const GradedSpace& space, const ComplexMatrix& k);

struct ElementSampler {
  std::uint64_t seed = 1;
  int maxWordLength = 3;
  double coefficientScale = 1.0;

  // Deterministic: same seed and algebra give byte-identical matrices.
  std::vector<ComplexMatrix> sample(const MatrixAlgebra& algebra, int count) const;
  ComplexMatrix sampleOne(const MatrixAlgebra& algebra, Prng& rng) const;
};

}  // namespace twistdex
