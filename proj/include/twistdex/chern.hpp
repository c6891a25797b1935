#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "twistdex/cyclic.hpp"
#include "twistdex/triple.hpp"

namespace twistdex {

// c_k = (1/2) (-1)^k k! / (2k)!; the inverse of the pairing factor attached
// to degree 2k, so that the cocycle pairs to half the supertrace power.
double chernConstant(int k);

// Character cocycle of even degree 2k:
//   tau_2k(a^0..a^2k) = c_k Str(D^-1 [D,a^0] D^-1 [D,a^1] ... D^-1 [D,a^2k])
// with twisted commutators throughout. Needs invertible D. The result is
// cyclic and normalized; both evaluators are attached.
Cochain tau2k(const TwistedTriple& t, int k);

// phi_m(a^0..a^m) = Str(a^0 D^-1[D,a^1] ... D^-1[D,a^m])
Cochain phiM(const TwistedTriple& t, int m);

// psi_m(a^0..a^m) = Str(sigma(a^0) [D,a^1] D^-1 ... [D,a^m] D^-1)
Cochain psiM(const TwistedTriple& t, int m);

// Pointwise identities tying the auxiliary cochains to the character:
// splitting, coboundaries in both directions, closedness, cyclicity,
// normalization. Residuals are relative to the largest magnitude seen.
struct LemmaReport {
  double splitResidual = 0.0;        // c_k^-1 tau - phi - psi
  double coboundaryPhi = 0.0;        // b phi_{2k-1} - phi_2k
  double coboundaryPsi = 0.0;        // b psi_{2k-1} + psi_2k
  double loweringPhi = 0.0;          // B phi_{2k+1} - (2k+1) c_k^-1 tau_2k
  double loweringPsi = 0.0;          // B psi_{2k+1} + (2k+1) c_k^-1 tau_2k
  double closedTau = 0.0;            // b tau_2k
  double cyclicTau = 0.0;            // T tau_2k - tau_2k
  double normalizedTau = 0.0;        // unit insertion
  double scale = 0.0;
  double maxResidual = 0.0;
};

LemmaReport lemmaRelations(const TwistedTriple& t, int k,
                           const std::vector<ComplexMatrix>& samples);

// Character of the doubled triple restricted to the base algebra through the
// embedding a -> diag(a, 0). Arguments are base-algebra matrices; the lift
// embeds entrywise. Defined whenever the doubled operator is invertible, in
// particular for the canonical invertible double of any triple.
Cochain tauBar2k(const DoubledTriple& dt, int k);

// Piecewise-polynomial perturbation path: V(t) = sum_i coefficients[i] t^i on
// [t0, t1]. Every coefficient must be odd and selfadjoint.
struct PolyPiece {
  double t0 = 0.0;
  double t1 = 1.0;
  std::vector<ComplexMatrix> coefficients;
};

// Perturbation family t -> V(t) on [0, 1], continuously differentiable,
// odd and selfadjoint at every time. Violations signal invalid-family.
class HomotopyFamily {
 public:
  HomotopyFamily(const GradedSpace& space, std::vector<PolyPiece> pieces);

  const GradedSpace& space() const { return space_; }
  ComplexMatrix v(double t) const;
  ComplexMatrix vdot(double t) const;

 private:
  const PolyPiece& pieceAt(double t) const;

  GradedSpace space_;
  std::vector<PolyPiece> pieces_;
};

// Random two-coefficient polynomial path with V(0) = 0, scaled so the whole
// path stays well inside the invertible region of D.
HomotopyFamily polynomialFamily(const TwistedTriple& t, std::uint64_t seed,
                                double amplitudeFactor = 0.4);

// The straight line t -> t J joining diag(D, -D) to the invertible double.
HomotopyFamily doublingFamily(const DoubledTriple& dt);

struct HomotopyOptions {
  int cocycleDegree = 1;  // k; the cocycle has degree 2k
  int gridPoints = 17;
  int panels = 64;
  int refinedPanels = 128;
  int sampleTuples = 4;
  std::uint64_t seed = 1;
  int threads = 0;
};

struct HomotopyReport {
  std::vector<double> gridTimes;
  std::vector<Complex> gridPairings;
  double gridResidual = 0.0;       // max |p_i - p_0| over the grid
  double minSingularValue = 0.0;   // min over visited times of sigma_min(D_t)
  double transgressionResidual = 0.0;
  double refinedTransgressionResidual = 0.0;
  double decayFactor = 0.0;        // coarse / refined
  double coboundaryResidual = 0.0; // b eta on samples
  double scale = 0.0;
};

// Verifies that the idempotent pairing is constant along D_t = D + V(t), that
// the difference of endpoint characters is the boundary B eta of the
// transgression cochain (with Simpson quadrature error decaying at
// fourth order), and that b eta vanishes. Near-singular D_t along the path
// signals invalid-family.
HomotopyReport homotopyInvarianceCheck(const TwistedTriple& t,
                                       const HomotopyFamily& family,
                                       const Idempotent& e,
                                       const HomotopyOptions& opts);

}  // namespace twistdex
