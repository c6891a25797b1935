#include "twistdex/ktheory.hpp"

#include <algorithm>
#include <cmath>

namespace twistdex {

Amplification::Amplification(const GradedSpace& base, int q) : base_(base), q_(q) {
  if (q < 1) fail(ErrorCode::InvalidArgument, "amplification size must be positive");
  amplified_ = GradedSpace{q * base.dimPlus, q * base.dimMinus};
}

ComplexMatrix Amplification::realize(const std::vector<ComplexMatrix>& entries) const {
  if (entries.size() != static_cast<std::size_t>(q_ * q_))
    fail(ErrorCode::InvalidArgument, "expected q*q entries");
  const int p = base_.dimPlus, m = base_.dimMinus, n = base_.total();
  const int P = amplified_.dimPlus;
  ComplexMatrix out = ComplexMatrix::Zero(amplified_.total(), amplified_.total());
  for (int i = 0; i < q_; ++i) {
    for (int j = 0; j < q_; ++j) {
      const ComplexMatrix& a = entries[i * q_ + j];
      if (a.rows() != n || a.cols() != n)
        fail(ErrorCode::InvalidArgument, "entry dimension mismatch");
      out.block(i * p, j * p, p, p) = a.topLeftCorner(p, p);
      out.block(i * p, P + j * m, p, m) = a.topRightCorner(p, m);
      out.block(P + i * m, j * p, m, p) = a.bottomLeftCorner(m, p);
      out.block(P + i * m, P + j * m, m, m) = a.bottomRightCorner(m, m);
    }
  }
  return out;
}

ComplexMatrix Amplification::extractEntry(const ComplexMatrix& realized, int i,
                                          int j) const {
  const int p = base_.dimPlus, m = base_.dimMinus, n = base_.total();
  const int P = amplified_.dimPlus;
  if (realized.rows() != amplified_.total() || realized.cols() != amplified_.total())
    fail(ErrorCode::InvalidArgument, "realized matrix dimension mismatch");
  if (i < 0 || i >= q_ || j < 0 || j >= q_)
    fail(ErrorCode::InvalidArgument, "entry index out of range");
  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  a.topLeftCorner(p, p) = realized.block(i * p, j * p, p, p);
  a.topRightCorner(p, m) = realized.block(i * p, P + j * m, p, m);
  a.bottomLeftCorner(m, p) = realized.block(P + i * m, j * p, m, p);
  a.bottomRightCorner(m, m) = realized.block(P + i * m, P + j * m, m, m);
  return a;
}

ComplexMatrix Amplification::diagonal(const ComplexMatrix& a) const {
  std::vector<ComplexMatrix> entries(q_ * q_,
                                     ComplexMatrix::Zero(base_.total(), base_.total()));
  for (int i = 0; i < q_; ++i) entries[i * q_ + i] = a;
  return realize(entries);
}

GradedOperator Amplification::diagonal(const GradedOperator& a) const {
  return GradedOperator::classify(amplified_, diagonal(a.matrix()));
}

ComplexMatrix Amplification::applySigma(const Automorphism& sigma,
                                        const ComplexMatrix& realized) const {
  switch (sigma.kind()) {
    case Automorphism::Kind::Identity:
      return realized;
    case Automorphism::Kind::Inner: {
      // Entrywise k^2 (.) k^-2 equals conjugation by 1_q (x) k^2.
      const ComplexMatrix k2 = diagonal(sigma.innerFactor() * sigma.innerFactor());
      const ComplexMatrix k2inv = k2.partialPivLu().inverse();
      return k2 * realized * k2inv;
    }
    case Automorphism::Kind::Linear: {
      std::vector<ComplexMatrix> entries(q_ * q_);
      for (int i = 0; i < q_; ++i)
        for (int j = 0; j < q_; ++j)
          entries[i * q_ + j] = sigma.apply(extractEntry(realized, i, j));
      return realize(entries);
    }
  }
  fail(ErrorCode::Internal, "unreachable automorphism kind");
}

// ---------------------------------------------------------------------------

namespace {

std::vector<ComplexMatrix> entriesOf(const Amplification& amp, const ComplexMatrix& m) {
  std::vector<ComplexMatrix> entries(amp.q() * amp.q());
  for (int i = 0; i < amp.q(); ++i)
    for (int j = 0; j < amp.q(); ++j) entries[i * amp.q() + j] = amp.extractEntry(m, i, j);
  return entries;
}

}  // namespace

Idempotent makeIdempotent(const TwistedTriple& t, int q,
                          std::vector<ComplexMatrix> entries, double tol) {
  Amplification amp(t.space, q);
  for (const auto& a : entries) {
    requireFinite(a, "idempotent entry");
    (void)GradedOperator::even(t.space, a);  // entries must be even
  }
  const ComplexMatrix realized = amp.realize(entries);
  const double scale = std::max(realized.norm(), 1e-300);
  const double defect = (realized * realized - realized).norm();
  if (defect > tol * scale)
    fail(ErrorCode::NotIdempotent,
         "matrix is not idempotent (relative defect " + std::to_string(defect / scale) +
             ")");
  Idempotent e;
  e.q = q;
  e.entries = std::move(entries);
  e.realized = GradedOperator::even(amp.amplifiedSpace(), realized);
  return e;
}

std::vector<ComplexMatrix> seededInvertibleEntries(const TwistedTriple& t, int q,
                                                   std::uint64_t seed, double spread) {
  Amplification amp(t.space, q);
  ElementSampler sampler{seed, 2, 1.0};
  Prng rng(seed);
  std::vector<ComplexMatrix> entries(q * q);
  for (int i = 0; i < q * q; ++i) entries[i] = sampler.sampleOne(t.algebra, rng);
  ComplexMatrix x = amp.realize(entries);
  const double norm = x.norm();
  const double factor = norm > 1e-300 ? spread / norm : 0.0;
  const int n = t.space.total();
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      entries[i * q + j] *= factor;
      if (i == j) entries[i * q + j] += ComplexMatrix::Identity(n, n);
    }
  return entries;
}

Idempotent seededIdempotent(const TwistedTriple& t, int q, std::uint64_t seed,
                            const std::vector<int>& select) {
  if (q < 1) fail(ErrorCode::InvalidArgument, "idempotent size must be positive");
  Amplification amp(t.space, q);
  std::vector<int> chosen = select;
  if (chosen.empty()) {
    Prng rng(seed ^ 0x1d2c3b4a59687706ULL);
    chosen.resize(q, 0);
    int ones = 0;
    for (int i = 0; i < q; ++i) {
      chosen[i] = rng.below(2) ? 1 : 0;
      ones += chosen[i];
    }
    if (ones == 0) chosen[0] = 1;
  }
  if (chosen.size() != static_cast<std::size_t>(q))
    fail(ErrorCode::InvalidArgument, "selection length must equal q");
  const int n = t.space.total();
  std::vector<ComplexMatrix> projEntries(q * q, ComplexMatrix::Zero(n, n));
  for (int i = 0; i < q; ++i)
    if (chosen[i]) projEntries[i * q + i] = ComplexMatrix::Identity(n, n);

  const auto gEntries = seededInvertibleEntries(t, q, seed);
  const ComplexMatrix g = amp.realize(gEntries);
  const ComplexMatrix gInv = g.partialPivLu().inverse();
  const ComplexMatrix e = gInv * amp.realize(projEntries) * g;
  return makeIdempotent(t, q, entriesOf(amp, e));
}

Idempotent sigmaOfIdempotent(const TwistedTriple& t, const Idempotent& e) {
  std::vector<ComplexMatrix> entries(e.entries.size());
  for (std::size_t i = 0; i < e.entries.size(); ++i)
    entries[i] = t.sigma.apply(e.entries[i]);
  return makeIdempotent(t, e.q, std::move(entries));
}

Idempotent starOfIdempotent(const TwistedTriple& t, const Idempotent& e) {
  std::vector<ComplexMatrix> entries(e.entries.size());
  for (int i = 0; i < e.q; ++i)
    for (int j = 0; j < e.q; ++j)
      entries[i * e.q + j] = e.entries[j * e.q + i].adjoint();
  return makeIdempotent(t, e.q, std::move(entries));
}

Idempotent directSum(const TwistedTriple& t, const Idempotent& a, const Idempotent& b) {
  const int q = a.q + b.q;
  const int n = t.space.total();
  std::vector<ComplexMatrix> entries(q * q, ComplexMatrix::Zero(n, n));
  for (int i = 0; i < a.q; ++i)
    for (int j = 0; j < a.q; ++j) entries[i * q + j] = a.entries[i * a.q + j];
  for (int i = 0; i < b.q; ++i)
    for (int j = 0; j < b.q; ++j)
      entries[(a.q + i) * q + (a.q + j)] = b.entries[i * b.q + j];
  return makeIdempotent(t, q, std::move(entries));
}

Idempotent conjugateIdempotent(const TwistedTriple& t, const Idempotent& e,
                               const std::vector<ComplexMatrix>& gEntries) {
  Amplification amp(t.space, e.q);
  const ComplexMatrix g = amp.realize(gEntries);
  const double smin = singularValues(g).minCoeff();
  const double smax = g.norm();
  if (smin <= 1e-10 * std::max(smax, 1e-300))
    fail(ErrorCode::InvalidArgument, "conjugating element is numerically singular");
  const ComplexMatrix gInv = g.partialPivLu().inverse();
  const ComplexMatrix p = gInv * e.realized.matrix() * g;
  return makeIdempotent(t, e.q, entriesOf(amp, p));
}

SigmaConjugationResult sigmaSelfadjointConjugate(const TwistedTriple& t,
                                                 const Idempotent& e) {
  Amplification amp(t.space, e.q);
  const ComplexMatrix E = e.realized.matrix();
  const int N = amp.amplifiedSpace().total();
  const ComplexMatrix one = ComplexMatrix::Identity(N, N);

  const ComplexMatrix sigmaEStar = amp.applySigma(t.sigma, E).adjoint();
  const ComplexMatrix a = E - sigmaEStar;
  const ComplexMatrix sigmaAStar = amp.applySigma(t.sigma, a).adjoint();
  const ComplexMatrix b = one + sigmaAStar * a;

  const RealVector bsv = singularValues(b);
  const double bmin = bsv.minCoeff();
  const double bmax = bsv.maxCoeff();
  if (bmin <= 1e-10 * std::max(bmax, 1e-300))
    fail(ErrorCode::RibbonConstructionFailure,
         "auxiliary element 1 + sigma(a)* a is numerically singular");

  const ComplexMatrix bInv = b.partialPivLu().inverse();
  const ComplexMatrix p = E * sigmaEStar * bInv;
  const ComplexMatrix g = one - p + E;
  const ComplexMatrix gInv = one + p - E;

  SigmaConjugationResult res;
  res.conditionNumber = bmax / bmin;
  const double pScale = std::max(p.norm(), 1e-300);
  const double eScale = std::max(E.norm(), 1e-300);
  res.idempotentResidual = (p * p - p).norm() / pScale;
  res.sigmaSelfadjointResidual =
      (amp.applySigma(t.sigma, p).adjoint() - p).norm() / pScale;
  res.conjugacyResidual = (gInv * p * g - E).norm() / eScale;
  res.absorbedLeftResidual = (E * p - p).norm() / pScale;   // e p = p
  res.absorbedRightResidual = (p * E - E).norm() / eScale;  // p e = e
  res.gEntries = entriesOf(amp, g);
  res.gInverseEntries = entriesOf(amp, gInv);
  res.p = makeIdempotent(t, e.q, entriesOf(amp, p));
  return res;
}

}  // namespace twistdex
