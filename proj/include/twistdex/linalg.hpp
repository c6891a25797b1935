#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "twistdex/errors.hpp"

namespace twistdex {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

bool allFinite(const ComplexMatrix& m);
void requireFinite(const ComplexMatrix& m, const std::string& label);

// Z2-graded finite-dimensional space. Basis convention everywhere: the first
// dimPlus coordinates span the even sector, the remaining dimMinus the odd
// sector.
struct GradedSpace {
  int dimPlus = 0;
  int dimMinus = 0;
  int total() const { return dimPlus + dimMinus; }
  bool operator==(const GradedSpace& o) const {
    return dimPlus == o.dimPlus && dimMinus == o.dimMinus;
  }
  bool operator!=(const GradedSpace& o) const { return !(*this == o); }
};

enum class Parity { Even, Odd, None };

const char* parityName(Parity p);
Parity composeParity(Parity a, Parity b);  // parity of a product
Parity addParity(Parity a, Parity b);      // parity of a sum

// Relative tolerance used when declaring block structure at construction.
inline constexpr double kStructureTol = 1e-10;

// Square operator on a graded space together with its declared parity.
// Declared-even operators have exactly zero off-diagonal blocks and
// declared-odd operators exactly zero diagonal blocks; the factory methods
// verify the defect is below tolerance and then project it away, so parity
// claims are structural, not approximate.
class GradedOperator {
 public:
  GradedOperator() = default;

  static GradedOperator even(const GradedSpace& s, const ComplexMatrix& m,
                             double tol = kStructureTol);
  static GradedOperator odd(const GradedSpace& s, const ComplexMatrix& m,
                            double tol = kStructureTol);
  // Detects parity; exact-zero defect within tol picks Even/Odd, otherwise None.
  static GradedOperator classify(const GradedSpace& s, const ComplexMatrix& m,
                                 double tol = kStructureTol);
  static GradedOperator identity(const GradedSpace& s);
  static GradedOperator zero(const GradedSpace& s);
  // diag(+1, -1): the grading involution.
  static GradedOperator grading(const GradedSpace& s);

  const GradedSpace& space() const { return space_; }
  const ComplexMatrix& matrix() const { return matrix_; }
  Parity parity() const { return parity_; }

  // Block accessors; names give (codomain sector, domain sector).
  ComplexMatrix blockPP() const;  // even -> even
  ComplexMatrix blockPM() const;  // odd  -> even
  ComplexMatrix blockMP() const;  // even -> odd
  ComplexMatrix blockMM() const;  // odd  -> odd

  GradedOperator adjoint() const;
  GradedOperator inverse() const;  // RequiresInvertible on singularity
  double frobeniusNorm() const { return matrix_.norm(); }
  double operatorNorm() const;
  double minSingularValue() const;
  bool isSelfadjoint(double tol = 1e-12) const;

  friend GradedOperator operator*(const GradedOperator& a, const GradedOperator& b);
  friend GradedOperator operator+(const GradedOperator& a, const GradedOperator& b);
  friend GradedOperator operator-(const GradedOperator& a, const GradedOperator& b);
  friend GradedOperator operator*(const Complex& c, const GradedOperator& a);

 private:
  GradedSpace space_;
  ComplexMatrix matrix_;
  Parity parity_ = Parity::None;
};

// Tr(pp) - Tr(mm). Exactly zero for declared-odd operators.
Complex supertrace(const GradedOperator& op);
// Same value computed as Tr(grading * m) for a raw matrix.
Complex supertrace(const GradedSpace& s, const ComplexMatrix& m);

struct RankDecision {
  int rank = 0;
  double threshold = 0.0;        // absolute singular-value cutoff used
  double smallestAccepted = 0.0; // 0 when rank == 0
  double largestRejected = 0.0;  // 0 when full rank
  // True when some singular value falls within a factor 10 of the cutoff,
  // i.e. the rank decision is fragile for this tolerance.
  bool marginal = false;
};

inline constexpr double kDefaultRankTol = 1e-9;

// Rank with cutoff tol * sigma_max * max(rows, cols).
int numericalRank(const ComplexMatrix& m, double tol = kDefaultRankTol);
RankDecision numericalRankInfo(const ComplexMatrix& m, double tol = kDefaultRankTol);

// (sum_i s_i^p)^(1/p) over singular values; p < 1 raises DomainError.
double schattenNorm(const ComplexMatrix& m, double p);

// Moore-Penrose inverse. Numerically selfadjoint inputs go through an
// eigendecomposition so the result is selfadjoint to machine precision;
// everything else uses the SVD.
ComplexMatrix pseudoInverse(const ComplexMatrix& m, double tol = kDefaultRankTol);

// Orthonormal basis (as columns) of the column space / null space.
ComplexMatrix rangeBasis(const ComplexMatrix& m, double tol = kDefaultRankTol);
ComplexMatrix kernelBasis(const ComplexMatrix& m, double tol = kDefaultRankTol);

RealVector singularValues(const ComplexMatrix& m);

}  // namespace twistdex
