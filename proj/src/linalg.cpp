#include "twistdex/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace twistdex {

bool allFinite(const ComplexMatrix& m) { return m.allFinite(); }

void requireFinite(const ComplexMatrix& m, const std::string& label) {
  if (!m.allFinite())
    fail(ErrorCode::InvalidArgument, label + " contains a non-finite entry");
}

const char* parityName(Parity p) {
  switch (p) {
    case Parity::Even: return "even";
    case Parity::Odd: return "odd";
    case Parity::None: return "none";
  }
  return "none";
}

Parity composeParity(Parity a, Parity b) {
  if (a == Parity::None || b == Parity::None) return Parity::None;
  return (a == b) ? Parity::Even : Parity::Odd;
}

Parity addParity(Parity a, Parity b) {
  return (a == b) ? a : Parity::None;
}

namespace {

void checkSquare(const GradedSpace& s, const ComplexMatrix& m) {
  if (m.rows() != s.total() || m.cols() != s.total())
    fail(ErrorCode::InvalidArgument,
         "operator matrix is " + std::to_string(m.rows()) + "x" +
             std::to_string(m.cols()) + " but the space has total dimension " +
             std::to_string(s.total()));
  requireFinite(m, "operator matrix");
}

double offEvenDefect(const GradedSpace& s, const ComplexMatrix& m) {
  const int p = s.dimPlus, q = s.dimMinus;
  return std::hypot(m.topRightCorner(p, q).norm(), m.bottomLeftCorner(q, p).norm());
}

double offOddDefect(const GradedSpace& s, const ComplexMatrix& m) {
  const int p = s.dimPlus, q = s.dimMinus;
  return std::hypot(m.topLeftCorner(p, p).norm(), m.bottomRightCorner(q, q).norm());
}

ComplexMatrix projectEven(const GradedSpace& s, ComplexMatrix m) {
  const int p = s.dimPlus, q = s.dimMinus;
  m.topRightCorner(p, q).setZero();
  m.bottomLeftCorner(q, p).setZero();
  return m;
}

ComplexMatrix projectOdd(const GradedSpace& s, ComplexMatrix m) {
  const int p = s.dimPlus, q = s.dimMinus;
  m.topLeftCorner(p, p).setZero();
  m.bottomRightCorner(q, q).setZero();
  return m;
}

}  // namespace

GradedOperator GradedOperator::even(const GradedSpace& s, const ComplexMatrix& m,
                                    double tol) {
  checkSquare(s, m);
  const double scale = std::max(m.norm(), 1e-300);
  if (offEvenDefect(s, m) > tol * scale)
    fail(ErrorCode::InvalidArgument,
         "matrix declared even has off-diagonal blocks of relative size " +
             std::to_string(offEvenDefect(s, m) / scale));
  GradedOperator op;
  op.space_ = s;
  op.matrix_ = projectEven(s, m);
  op.parity_ = Parity::Even;
  return op;
}

GradedOperator GradedOperator::odd(const GradedSpace& s, const ComplexMatrix& m,
                                   double tol) {
  checkSquare(s, m);
  const double scale = std::max(m.norm(), 1e-300);
  if (offOddDefect(s, m) > tol * scale)
    fail(ErrorCode::InvalidArgument,
         "matrix declared odd has diagonal blocks of relative size " +
             std::to_string(offOddDefect(s, m) / scale));
  GradedOperator op;
  op.space_ = s;
  op.matrix_ = projectOdd(s, m);
  op.parity_ = Parity::Odd;
  return op;
}

GradedOperator GradedOperator::classify(const GradedSpace& s, const ComplexMatrix& m,
                                        double tol) {
  checkSquare(s, m);
  const double scale = std::max(m.norm(), 1e-300);
  GradedOperator op;
  op.space_ = s;
  if (offEvenDefect(s, m) <= tol * scale) {
    op.matrix_ = projectEven(s, m);
    op.parity_ = Parity::Even;
  } else if (offOddDefect(s, m) <= tol * scale) {
    op.matrix_ = projectOdd(s, m);
    op.parity_ = Parity::Odd;
  } else {
    op.matrix_ = m;
    op.parity_ = Parity::None;
  }
  return op;
}

GradedOperator GradedOperator::identity(const GradedSpace& s) {
  return even(s, ComplexMatrix::Identity(s.total(), s.total()));
}

GradedOperator GradedOperator::zero(const GradedSpace& s) {
  return even(s, ComplexMatrix::Zero(s.total(), s.total()));
}

GradedOperator GradedOperator::grading(const GradedSpace& s) {
  ComplexMatrix g = ComplexMatrix::Identity(s.total(), s.total());
  g.bottomRightCorner(s.dimMinus, s.dimMinus) *= -1.0;
  return even(s, g);
}

ComplexMatrix GradedOperator::blockPP() const {
  return matrix_.topLeftCorner(space_.dimPlus, space_.dimPlus);
}
ComplexMatrix GradedOperator::blockPM() const {
  return matrix_.topRightCorner(space_.dimPlus, space_.dimMinus);
}
ComplexMatrix GradedOperator::blockMP() const {
  return matrix_.bottomLeftCorner(space_.dimMinus, space_.dimPlus);
}
ComplexMatrix GradedOperator::blockMM() const {
  return matrix_.bottomRightCorner(space_.dimMinus, space_.dimMinus);
}

GradedOperator GradedOperator::adjoint() const {
  GradedOperator op;
  op.space_ = space_;
  op.matrix_ = matrix_.adjoint();
  op.parity_ = parity_;
  return op;
}

GradedOperator GradedOperator::inverse() const {
  const double smin = minSingularValue();
  const double smax = operatorNorm();
  if (smin <= 1e-13 * std::max(smax, 1e-300))
    fail(ErrorCode::RequiresInvertible,
         "operator is numerically singular (smallest singular value " +
             std::to_string(smin) + ")");
  GradedOperator op;
  op.space_ = space_;
  op.matrix_ = matrix_.partialPivLu().inverse();
  op.parity_ = parity_;  // inverse of even is even, of odd is odd
  return op;
}

double GradedOperator::operatorNorm() const {
  if (matrix_.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(matrix_);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

double GradedOperator::minSingularValue() const {
  if (matrix_.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(matrix_);
  const auto& sv = svd.singularValues();
  return sv.size() ? sv(sv.size() - 1) : 0.0;
}

bool GradedOperator::isSelfadjoint(double tol) const {
  const double scale = std::max(matrix_.norm(), 1e-300);
  return (matrix_ - matrix_.adjoint()).norm() <= tol * scale;
}

GradedOperator operator*(const GradedOperator& a, const GradedOperator& b) {
  if (a.space_ != b.space_)
    fail(ErrorCode::InvalidArgument, "operator product across different spaces");
  GradedOperator op;
  op.space_ = a.space_;
  op.matrix_ = a.matrix_ * b.matrix_;
  op.parity_ = composeParity(a.parity_, b.parity_);
  return op;
}

GradedOperator operator+(const GradedOperator& a, const GradedOperator& b) {
  if (a.space_ != b.space_)
    fail(ErrorCode::InvalidArgument, "operator sum across different spaces");
  GradedOperator op;
  op.space_ = a.space_;
  op.matrix_ = a.matrix_ + b.matrix_;
  op.parity_ = addParity(a.parity_, b.parity_);
  return op;
}

GradedOperator operator-(const GradedOperator& a, const GradedOperator& b) {
  return a + (Complex(-1.0, 0.0) * b);
}

GradedOperator operator*(const Complex& c, const GradedOperator& a) {
  GradedOperator op = a;
  op.matrix_ *= c;
  return op;
}

Complex supertrace(const GradedOperator& op) {
  if (op.parity() == Parity::Odd) return Complex(0.0, 0.0);
  return op.blockPP().trace() - op.blockMM().trace();
}

Complex supertrace(const GradedSpace& s, const ComplexMatrix& m) {
  checkSquare(s, m);
  return m.topLeftCorner(s.dimPlus, s.dimPlus).trace() -
         m.bottomRightCorner(s.dimMinus, s.dimMinus).trace();
}

RealVector singularValues(const ComplexMatrix& m) {
  if (m.size() == 0) return RealVector();
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  return svd.singularValues();
}

RankDecision numericalRankInfo(const ComplexMatrix& m, double tol) {
  RankDecision d;
  if (m.size() == 0) return d;
  const RealVector sv = singularValues(m);
  const double smax = sv.size() ? sv(0) : 0.0;
  d.threshold = tol * smax * static_cast<double>(std::max(m.rows(), m.cols()));
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > d.threshold) ++r;
  d.rank = r;
  d.smallestAccepted = r > 0 ? sv(r - 1) : 0.0;
  d.largestRejected = r < sv.size() ? sv(r) : 0.0;
  d.marginal = false;
  if (d.threshold > 0.0) {
    if (r > 0 && d.smallestAccepted < 10.0 * d.threshold) d.marginal = true;
    if (r < sv.size() && d.largestRejected > 0.1 * d.threshold) d.marginal = true;
  }
  return d;
}

int numericalRank(const ComplexMatrix& m, double tol) {
  return numericalRankInfo(m, tol).rank;
}

double schattenNorm(const ComplexMatrix& m, double p) {
  if (p < 1.0)
    throw std::domain_error("schatten norm requires p >= 1, got " + std::to_string(p));
  if (m.size() == 0) return 0.0;
  const RealVector sv = singularValues(m);
  double acc = 0.0;
  for (int i = 0; i < sv.size(); ++i) acc += std::pow(sv(i), p);
  return std::pow(acc, 1.0 / p);
}

ComplexMatrix pseudoInverse(const ComplexMatrix& m, double tol) {
  if (m.size() == 0) return m.adjoint();
  const double scale = m.norm();
  const bool selfadjoint =
      m.rows() == m.cols() && (m - m.adjoint()).norm() <= 1e-12 * std::max(scale, 1e-300);
  if (selfadjoint) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
    const RealVector ev = es.eigenvalues();
    const double emax = ev.cwiseAbs().maxCoeff();
    const double cutoff = tol * emax * static_cast<double>(m.rows());
    RealVector inv(ev.size());
    for (int i = 0; i < ev.size(); ++i)
      inv(i) = std::abs(ev(i)) > cutoff ? 1.0 / ev(i) : 0.0;
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
  }
  Eigen::BDCSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  const double cutoff = tol * smax * static_cast<double>(std::max(m.rows(), m.cols()));
  RealVector inv(sv.size());
  for (int i = 0; i < sv.size(); ++i) inv(i) = sv(i) > cutoff ? 1.0 / sv(i) : 0.0;
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

ComplexMatrix rangeBasis(const ComplexMatrix& m, double tol) {
  if (m.size() == 0) return ComplexMatrix(m.rows(), 0);
  Eigen::BDCSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU);
  const RealVector sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  const double cutoff = tol * smax * static_cast<double>(std::max(m.rows(), m.cols()));
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++r;
  return svd.matrixU().leftCols(r);
}

ComplexMatrix kernelBasis(const ComplexMatrix& m, double tol) {
  if (m.size() == 0) return ComplexMatrix(m.cols(), 0);
  Eigen::BDCSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  const RealVector sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  const double cutoff = tol * smax * static_cast<double>(std::max(m.rows(), m.cols()));
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++r;
  return svd.matrixV().rightCols(m.cols() - r);
}

const char* errorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::DomainError: return "domain-error";
    case ErrorCode::ParseError: return "parse-error";
    case ErrorCode::Io: return "io-error";
    case ErrorCode::RequiresInvertible: return "requires-invertible";
    case ErrorCode::NotIdempotent: return "not-idempotent";
    case ErrorCode::InvalidConformalFactor: return "invalid-conformal-factor";
    case ErrorCode::NoRibbonStructure: return "no-ribbon-structure";
    case ErrorCode::RibbonConstructionFailure: return "ribbon-construction-failure";
    case ErrorCode::OutsideSpan: return "outside-span";
    case ErrorCode::InvalidConnection: return "invalid-connection";
    case ErrorCode::InvalidFamily: return "invalid-family";
    case ErrorCode::ContractViolation: return "contract-violation";
    case ErrorCode::NumericFailure: return "numeric-failure";
    case ErrorCode::Internal: return "internal-error";
  }
  return "internal-error";
}

}  // namespace twistdex
