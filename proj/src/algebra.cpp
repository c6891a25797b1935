#include "twistdex/algebra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace twistdex {

namespace {

constexpr int kSpanCap = 256;
constexpr double kSpanTol = 1e-10;

ComplexVector vectorize(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix unvectorize(const ComplexVector& v, int rows, int cols) {
  return Eigen::Map<const ComplexMatrix>(v.data(), rows, cols);
}

void requireEven(const GradedSpace& s, const ComplexMatrix& m, const char* what) {
  // Throws when m has off-diagonal blocks beyond structural tolerance.
  (void)GradedOperator::even(s, m);
  (void)what;
}

// Orthonormalize the closure of `seed` under products and adjoints, up to
// kSpanCap dimensions. Returns nullopt when the cap is exceeded.
std::optional<std::vector<ComplexMatrix>> closeSpan(const GradedSpace& space,
                                                    std::vector<ComplexMatrix> seed) {
  const int n = space.total();
  std::vector<ComplexMatrix> basis;
  std::vector<ComplexVector> vecs;
  auto tryAdd = [&](const ComplexMatrix& m) -> bool {
    ComplexVector v = vectorize(m);
    const double original = v.norm();
    if (original <= 1e-300) return false;
    for (const auto& b : vecs) v -= b.dot(v) * b;
    // One re-orthogonalization pass keeps the basis orthonormal to roundoff.
    for (const auto& b : vecs) v -= b.dot(v) * b;
    if (v.norm() <= kSpanTol * original) return false;
    v.normalize();
    vecs.push_back(v);
    basis.push_back(unvectorize(v, n, n));
    return true;
  };

  for (const auto& m : seed) {
    tryAdd(m);
    tryAdd(m.adjoint());
  }
  tryAdd(ComplexMatrix::Identity(n, n));

  bool grew = true;
  while (grew) {
    grew = false;
    const std::size_t frozen = basis.size();
    for (std::size_t i = 0; i < frozen; ++i) {
      for (std::size_t j = 0; j < frozen; ++j) {
        if (basis.size() > static_cast<std::size_t>(kSpanCap)) return std::nullopt;
        if (tryAdd(basis[i] * basis[j])) grew = true;
      }
    }
  }
  if (basis.size() > static_cast<std::size_t>(kSpanCap)) return std::nullopt;
  return basis;
}

double spanResidual(const std::vector<ComplexMatrix>& basis, const ComplexMatrix& a) {
  ComplexVector v = vectorize(a);
  const double scale = std::max(v.norm(), 1e-300);
  for (const auto& b : basis) {
    const ComplexVector bv = vectorize(b);
    v -= bv.dot(v) * bv;
  }
  return v.norm() / scale;
}

}  // namespace

MatrixAlgebra MatrixAlgebra::fullEven(const GradedSpace& space) {
  MatrixAlgebra a;
  a.kind_ = Kind::FullEven;
  a.space_ = space;
  return a;
}

MatrixAlgebra MatrixAlgebra::generated(const GradedSpace& space,
                                       std::vector<ComplexMatrix> generators) {
  if (generators.empty())
    fail(ErrorCode::InvalidArgument, "generated algebra needs at least one generator");
  for (const auto& g : generators) {
    if (g.rows() != space.total() || g.cols() != space.total())
      fail(ErrorCode::InvalidArgument, "generator dimension mismatch");
    requireFinite(g, "generator");
    requireEven(space, g, "generator");
  }
  MatrixAlgebra a;
  a.kind_ = Kind::Generated;
  a.space_ = space;
  a.generators_ = std::move(generators);
  return a;
}

MatrixAlgebra MatrixAlgebra::doubled(std::shared_ptr<const MatrixAlgebra> base,
                                     const GradedSpace& doubledSpace,
                                     const ComplexMatrix& copyToGradedPermutation) {
  if (!base) fail(ErrorCode::InvalidArgument, "doubled algebra needs a base");
  if (doubledSpace.total() != 2 * base->ambientDim())
    fail(ErrorCode::InvalidArgument, "doubled space has wrong dimension");
  MatrixAlgebra a;
  a.kind_ = Kind::Doubled;
  a.space_ = doubledSpace;
  a.base_ = std::move(base);
  a.perm_ = copyToGradedPermutation;
  return a;
}

const MatrixAlgebra& MatrixAlgebra::base() const {
  if (kind_ != Kind::Doubled)
    fail(ErrorCode::InvalidArgument, "base() is only defined for doubled algebras");
  return *base_;
}

ComplexMatrix MatrixAlgebra::embed(const ComplexMatrix& baseElement,
                                   Complex lambda) const {
  if (kind_ != Kind::Doubled)
    fail(ErrorCode::InvalidArgument, "embed() is only defined for doubled algebras");
  const int n = base_->ambientDim();
  if (baseElement.rows() != n || baseElement.cols() != n)
    fail(ErrorCode::InvalidArgument, "embed(): base element dimension mismatch");
  ComplexMatrix copyLayout = ComplexMatrix::Zero(2 * n, 2 * n);
  copyLayout.topLeftCorner(n, n) = baseElement;
  ComplexMatrix out = perm_ * copyLayout * perm_.transpose();
  out += lambda * ComplexMatrix::Identity(2 * n, 2 * n);
  return out;
}

const std::optional<std::vector<ComplexMatrix>>& MatrixAlgebra::spanBasis() const {
  if (!spanCache_->has_value()) {
    switch (kind_) {
      case Kind::Generated:
        *spanCache_ = closeSpan(space_, generators_);
        break;
      case Kind::FullEven:
      case Kind::Doubled:
        // Membership has a structural test; no span basis needed.
        *spanCache_ = std::nullopt;
        break;
    }
    // Distinguish "computed and failed" from "not yet computed" by marking
    // the cache: an engaged optional holding an empty vector means failed.
    if (!spanCache_->has_value()) *spanCache_ = std::vector<ComplexMatrix>{};
  }
  return *spanCache_;
}

MatrixAlgebra::Membership MatrixAlgebra::contains(const ComplexMatrix& a,
                                                  double tol) const {
  Membership r;
  if (a.rows() != ambientDim() || a.cols() != ambientDim()) {
    r.checked = true;
    r.member = false;
    r.residual = 1.0;
    return r;
  }
  switch (kind_) {
    case Kind::FullEven: {
      const double scale = std::max(a.norm(), 1e-300);
      const int p = space_.dimPlus, q = space_.dimMinus;
      const double off = std::hypot(a.topRightCorner(p, q).norm(),
                                    a.bottomLeftCorner(q, p).norm());
      r.checked = true;
      r.residual = off / scale;
      r.member = r.residual <= tol;
      return r;
    }
    case Kind::Doubled: {
      // Element must be P (a, 0) P^T + lambda. Estimate lambda from the
      // second copy's diagonal, strip it, and test the remainder's shape
      // plus base membership.
      const int n = base_->ambientDim();
      const ComplexMatrix copyLayout = perm_.transpose() * a * perm_;
      const Complex lambda = copyLayout.bottomRightCorner(n, n).trace() / double(n);
      ComplexMatrix rest = copyLayout;
      rest -= lambda * ComplexMatrix::Identity(2 * n, 2 * n);
      const double scale = std::max(a.norm(), 1e-300);
      const double offDefect =
          std::hypot(std::hypot(rest.topRightCorner(n, n).norm(),
                                rest.bottomLeftCorner(n, n).norm()),
                     rest.bottomRightCorner(n, n).norm());
      const Membership baseMembership =
          base_->contains(rest.topLeftCorner(n, n), tol);
      r.checked = baseMembership.checked;
      r.residual = std::max(offDefect / scale, baseMembership.residual);
      r.member = baseMembership.member && offDefect <= tol * scale;
      return r;
    }
    case Kind::Generated: {
      const auto& basis = spanBasis();
      if (!basis.has_value() || basis->empty()) {
        r.checked = false;
        return r;
      }
      r.checked = true;
      r.residual = spanResidual(*basis, a);
      r.member = r.residual <= tol;
      return r;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

ComplexMatrix positiveSqrt(const GradedSpace& space, const ComplexMatrix& k) {
  requireFinite(k, "positive factor");
  (void)GradedOperator::even(space, k);
  const double scale = std::max(k.norm(), 1e-300);
  if ((k - k.adjoint()).norm() > 1e-10 * scale)
    fail(ErrorCode::InvalidConformalFactor, "factor is not selfadjoint");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(k);
  const RealVector ev = es.eigenvalues();
  const double emax = ev.maxCoeff();
  if (emax <= 0.0 || ev.minCoeff() <= 1e-8 * emax)
    fail(ErrorCode::InvalidConformalFactor,
         "factor is not positive definite (eigenvalue range " +
             std::to_string(ev.minCoeff()) + " .. " + std::to_string(emax) + ")");
  RealVector root = ev.cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

Automorphism Automorphism::identity(const GradedSpace& space) {
  Automorphism s;
  s.kind_ = Kind::Identity;
  s.space_ = space;
  return s;
}

Automorphism Automorphism::inner(const GradedSpace& space, const ComplexMatrix& k) {
  // positiveSqrt performs the full even/selfadjoint/positive validation.
  (void)positiveSqrt(space, k);
  Automorphism s;
  s.kind_ = Kind::Inner;
  s.space_ = space;
  s.k_ = k;
  s.k2_ = k * k;
  s.k2inv_ = k.partialPivLu().inverse();
  s.k2inv_ = s.k2inv_ * s.k2inv_;
  return s;
}

namespace {
ComplexMatrix stackColumns(const std::vector<ComplexMatrix>& mats) {
  if (mats.empty()) return ComplexMatrix(0, 0);
  const int n2 = static_cast<int>(mats[0].size());
  ComplexMatrix stacked(n2, static_cast<int>(mats.size()));
  for (std::size_t i = 0; i < mats.size(); ++i)
    stacked.col(static_cast<int>(i)) = vectorize(mats[i]);
  return stacked;
}
}  // namespace

Automorphism Automorphism::linear(const GradedSpace& space,
                                  std::vector<ComplexMatrix> spanningSet,
                                  std::vector<ComplexMatrix> images) {
  if (spanningSet.empty() || spanningSet.size() != images.size())
    fail(ErrorCode::InvalidArgument,
         "linear automorphism needs matching spanning set and image lists");
  const int n = space.total();
  for (const auto& m : spanningSet) {
    if (m.rows() != n || m.cols() != n)
      fail(ErrorCode::InvalidArgument, "spanning element dimension mismatch");
    requireEven(space, m, "spanning element");
  }
  for (const auto& m : images) {
    if (m.rows() != n || m.cols() != n)
      fail(ErrorCode::InvalidArgument, "image dimension mismatch");
    requireEven(space, m, "image");
  }
  const ComplexMatrix sp = stackColumns(spanningSet);
  const ComplexMatrix im = stackColumns(images);
  const int s = static_cast<int>(spanningSet.size());
  if (numericalRank(sp) < s)
    fail(ErrorCode::InvalidArgument, "spanning set is linearly dependent");
  if (numericalRank(im) < s)
    fail(ErrorCode::InvalidArgument,
         "images are linearly dependent, the map is not invertible");
  Automorphism out;
  out.kind_ = Kind::Linear;
  out.space_ = space;
  out.spanningSet_ = std::move(spanningSet);
  out.images_ = std::move(images);
  out.spanPinv_ = pseudoInverse(sp);
  out.imagePinv_ = pseudoInverse(im);
  return out;
}

const ComplexMatrix& Automorphism::innerFactor() const {
  if (kind_ != Kind::Inner)
    fail(ErrorCode::InvalidArgument, "innerFactor() requires an inner automorphism");
  return k_;
}

ComplexMatrix Automorphism::apply(const ComplexMatrix& a) const {
  requireFinite(a, "automorphism argument");
  switch (kind_) {
    case Kind::Identity:
      return a;
    case Kind::Inner:
      return k2_ * a * k2inv_;
    case Kind::Linear: {
      const ComplexVector v = vectorize(a);
      const ComplexVector c = spanPinv_ * v;
      ComplexVector recon = ComplexVector::Zero(v.size());
      for (std::size_t i = 0; i < spanningSet_.size(); ++i)
        recon += c(static_cast<int>(i)) * vectorize(spanningSet_[i]);
      const double scale = std::max(v.norm(), 1e-300);
      if ((recon - v).norm() > 1e-9 * scale)
        fail(ErrorCode::OutsideSpan,
             "element lies outside the declared spanning set (relative distance " +
                 std::to_string((recon - v).norm() / scale) + ")");
      ComplexMatrix out = ComplexMatrix::Zero(a.rows(), a.cols());
      for (std::size_t i = 0; i < images_.size(); ++i)
        out += c(static_cast<int>(i)) * images_[i];
      return out;
    }
  }
  fail(ErrorCode::Internal, "unreachable automorphism kind");
}

ComplexMatrix Automorphism::applyInverse(const ComplexMatrix& a) const {
  requireFinite(a, "automorphism argument");
  switch (kind_) {
    case Kind::Identity:
      return a;
    case Kind::Inner:
      return k2inv_ * a * k2_;
    case Kind::Linear: {
      const ComplexVector v = vectorize(a);
      const ComplexVector c = imagePinv_ * v;
      ComplexVector recon = ComplexVector::Zero(v.size());
      for (std::size_t i = 0; i < images_.size(); ++i)
        recon += c(static_cast<int>(i)) * vectorize(images_[i]);
      const double scale = std::max(v.norm(), 1e-300);
      if ((recon - v).norm() > 1e-9 * scale)
        fail(ErrorCode::OutsideSpan,
             "element lies outside the image span (relative distance " +
                 std::to_string((recon - v).norm() / scale) + ")");
      ComplexMatrix out = ComplexMatrix::Zero(a.rows(), a.cols());
      for (std::size_t i = 0; i < spanningSet_.size(); ++i)
        out += c(static_cast<int>(i)) * spanningSet_[i];
      return out;
    }
  }
  fail(ErrorCode::Internal, "unreachable automorphism kind");
}

void Automorphism::declareRoot(const Automorphism& root) {
  if (kind_ != Kind::Linear)
    fail(ErrorCode::InvalidArgument,
         "declared roots are only accepted on linear automorphisms");
  if (root.space() != space_)
    fail(ErrorCode::InvalidArgument, "declared root acts on a different space");
  root_ = std::make_shared<const Automorphism>(root);
}

const Automorphism& Automorphism::declaredRoot() const {
  if (!root_) fail(ErrorCode::NoRibbonStructure, "no declared root present");
  return *root_;
}

ComplexMatrix applyAutomorphism(const Automorphism& sigma, const ComplexMatrix& a) {
  return sigma.apply(a);
}

Automorphism ribbonSquareRoot(const Automorphism& sigma) {
  switch (sigma.kind()) {
    case Automorphism::Kind::Identity:
      return Automorphism::identity(sigma.space());
    case Automorphism::Kind::Inner:
      return Automorphism::inner(sigma.space(),
                                 positiveSqrt(sigma.space(), sigma.innerFactor()));
    case Automorphism::Kind::Linear:
      if (sigma.hasDeclaredRoot()) return sigma.declaredRoot();
      fail(ErrorCode::NoRibbonStructure,
           "linear automorphism has no declared square root");
  }
  fail(ErrorCode::Internal, "unreachable automorphism kind");
}

// ---------------------------------------------------------------------------

ComplexMatrix ElementSampler::sampleOne(const MatrixAlgebra& algebra, Prng& rng) const {
  const int n = algebra.ambientDim();
  switch (algebra.kind()) {
    case MatrixAlgebra::Kind::FullEven: {
      const GradedSpace& s = algebra.space();
      ComplexMatrix m = ComplexMatrix::Zero(n, n);
      for (int i = 0; i < s.dimPlus; ++i)
        for (int j = 0; j < s.dimPlus; ++j) m(i, j) = coefficientScale * rng.complexSym();
      for (int i = 0; i < s.dimMinus; ++i)
        for (int j = 0; j < s.dimMinus; ++j)
          m(s.dimPlus + i, s.dimPlus + j) = coefficientScale * rng.complexSym();
      return m;
    }
    case MatrixAlgebra::Kind::Generated: {
      const auto& gens = algebra.generators();
      ComplexMatrix m = (coefficientScale * rng.complexSym()) * algebra.unit();
      const int terms = 1 + static_cast<int>(rng.below(3));
      for (int t = 0; t < terms; ++t) {
        const int len = 1 + static_cast<int>(rng.below(std::max(maxWordLength, 1)));
        ComplexMatrix word = algebra.unit();
        for (int f = 0; f < len; ++f) {
          const std::uint64_t pick = rng.below(2 * gens.size());
          const auto& g = gens[pick % gens.size()];
          word = word * (pick < gens.size() ? g : ComplexMatrix(g.adjoint()));
        }
        m += (coefficientScale * rng.complexSym()) * word;
      }
      return m;
    }
    case MatrixAlgebra::Kind::Doubled: {
      ElementSampler baseSampler{rng.fork(), maxWordLength, coefficientScale};
      Prng baseRng(baseSampler.seed);
      const ComplexMatrix a = baseSampler.sampleOne(algebra.base(), baseRng);
      const Complex lambda = coefficientScale * rng.complexSym();
      return algebra.embed(a, lambda);
    }
  }
  fail(ErrorCode::Internal, "unreachable algebra kind");
}

std::vector<ComplexMatrix> ElementSampler::sample(const MatrixAlgebra& algebra,
                                                  int count) const {
  Prng rng(seed);
  std::vector<ComplexMatrix> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(sampleOne(algebra, rng));
  return out;
}

}  // namespace twistdex
