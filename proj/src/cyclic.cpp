#include "twistdex/cyclic.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>

#include "twistdex/errors.hpp"

namespace twistdex {
namespace {

using Eval = std::function<Complex(const std::vector<ComplexMatrix>&)>;
using Formula = std::function<Complex(const Eval&, const ComplexMatrix&,
                                      const std::vector<ComplexMatrix>&)>;

std::vector<ComplexMatrix> mergeAt(const std::vector<ComplexMatrix>& a,
                                   std::size_t j) {
  std::vector<ComplexMatrix> out(a.begin(), a.end());
  out[j] = a[j] * a[j + 1];
  out.erase(out.begin() + static_cast<std::ptrdiff_t>(j) + 1);
  return out;
}

std::vector<ComplexMatrix> mergeTripleAt(const std::vector<ComplexMatrix>& a,
                                         std::size_t j) {
  std::vector<ComplexMatrix> out(a.begin(), a.end());
  out[j] = a[j] * a[j + 1] * a[j + 2];
  out.erase(out.begin() + static_cast<std::ptrdiff_t>(j) + 1,
            out.begin() + static_cast<std::ptrdiff_t>(j) + 3);
  return out;
}

std::vector<ComplexMatrix> rotateRight(const std::vector<ComplexMatrix>& a) {
  std::vector<ComplexMatrix> out;
  out.reserve(a.size());
  out.push_back(a.back());
  out.insert(out.end(), a.begin(), a.end() - 1);
  return out;
}

Complex coboundaryFormula(const Eval& f, int m,
                          const std::vector<ComplexMatrix>& a) {
  Complex acc = 0.0;
  double sign = 1.0;
  for (int j = 0; j <= m; ++j) {
    acc += sign * f(mergeAt(a, static_cast<std::size_t>(j)));
    sign = -sign;
  }
  std::vector<ComplexMatrix> wrap(a.begin(), a.end() - 1);
  wrap[0] = a.back() * a.front();
  acc += sign * f(wrap);
  return acc;
}

Complex cyclicFormula(const Eval& f, int m,
                      const std::vector<ComplexMatrix>& a) {
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  return sign * f(rotateRight(a));
}

Complex symmetrizerFormula(const Eval& f, int m,
                           const std::vector<ComplexMatrix>& a) {
  const double step = (m % 2 == 0) ? 1.0 : -1.0;
  Complex acc = 0.0;
  double sign = 1.0;
  std::vector<ComplexMatrix> current(a.begin(), a.end());
  for (int i = 0; i <= m; ++i) {
    acc += sign * f(current);
    if (i < m) {
      current = rotateRight(current);
      sign *= step;
    }
  }
  return acc;
}

// B on a degree-m cochain, evaluated on m arguments. The inner functional is
// B0 (1 - T) applied to f; the outer sum is the symmetrizer in degree m - 1.
Complex loweringFormula(const Eval& f, int m, const ComplexMatrix& unit,
                        const std::vector<ComplexMatrix>& a) {
  const auto inner = [&f, m, &unit](const std::vector<ComplexMatrix>& u) {
    std::vector<ComplexMatrix> first;
    first.reserve(u.size() + 1);
    first.push_back(unit);
    first.insert(first.end(), u.begin(), u.end());
    Complex value = f(first);

    std::vector<ComplexMatrix> second;
    second.reserve(u.size() + 1);
    second.push_back(u.back());
    second.push_back(unit);
    second.insert(second.end(), u.begin(), u.end() - 1);
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    value -= sign * f(second);
    return value;
  };

  const double step = ((m - 1) % 2 == 0) ? 1.0 : -1.0;
  Complex acc = 0.0;
  double sign = 1.0;
  std::vector<ComplexMatrix> current(a.begin(), a.end());
  for (int i = 0; i <= m - 1; ++i) {
    acc += sign * inner(current);
    if (i < m - 1) {
      current = rotateRight(current);
      sign *= step;
    }
  }
  return acc;
}

Complex periodicityFormula(const Eval& f, int m,
                           const std::vector<ComplexMatrix>& a) {
  Complex acc = 0.0;
  double signJ = -1.0;
  for (int j = 1; j <= m + 1; ++j) {
    double signL = 1.0;
    for (int l = 0; l + 2 <= j; ++l) {
      acc += signJ * signL *
             f(mergeAt(mergeAt(a, static_cast<std::size_t>(j)),
                       static_cast<std::size_t>(l)));
      signL = -signL;
    }
    const double signTriple = (j % 2 == 0) ? -1.0 : 1.0;
    acc += signJ * signTriple * f(mergeTripleAt(a, static_cast<std::size_t>(j - 1)));
    signJ = -signJ;
  }
  const double norm = 1.0 / (static_cast<double>(m + 1) * static_cast<double>(m + 2));
  return norm * acc;
}

Cochain transformed(const Cochain& src, int outDegree, const Formula& formula) {
  Cochain out;
  out.degree = outDegree;
  out.argDim = src.argDim;
  const Eval evalSrc = src.eval;
  const int n = src.argDim;
  out.eval = [evalSrc, formula, n](const std::vector<ComplexMatrix>& args) {
    return formula(evalSrc, ComplexMatrix::Identity(n, n), args);
  };
  if (src.lifted) {
    const auto liftedSrc = src.lifted;
    out.lifted = [liftedSrc, formula](int q, const std::vector<ComplexMatrix>& args) {
      const Eval f = [&liftedSrc, q](const std::vector<ComplexMatrix>& v) {
        return liftedSrc(q, v);
      };
      const Eigen::Index big = args.empty() ? 0 : args.front().rows();
      return formula(f, ComplexMatrix::Identity(big, big), args);
    };
  }
  return out;
}

void requireArgs(const Cochain& phi, const std::vector<ComplexMatrix>& args) {
  if (static_cast<int>(args.size()) != phi.degree + 1) {
    fail(ErrorCode::InvalidArgument, "cochain of degree " +
                                         std::to_string(phi.degree) + " takes " +
                                         std::to_string(phi.degree + 1) +
                                         " arguments, got " +
                                         std::to_string(args.size()));
  }
  for (const auto& a : args) {
    if (a.rows() != phi.argDim || a.cols() != phi.argDim) {
      fail(ErrorCode::InvalidArgument,
           "cochain argument dimension mismatch: expected " +
               std::to_string(phi.argDim));
    }
  }
}

double factorialRatio(int k) {
  // (2k)! / k!
  double value = 1.0;
  for (int i = k + 1; i <= 2 * k; ++i) value *= static_cast<double>(i);
  return value;
}

}  // namespace

Complex Cochain::operator()(const std::vector<ComplexMatrix>& args) const {
  if (!eval) fail(ErrorCode::InvalidArgument, "cochain has no evaluator");
  requireArgs(*this, args);
  return eval(args);
}

Cochain hochschildB(const Cochain& phi) {
  const int m = phi.degree;
  return transformed(phi, m + 1,
                     [m](const Eval& f, const ComplexMatrix&,
                         const std::vector<ComplexMatrix>& a) {
                       return coboundaryFormula(f, m, a);
                     });
}

Cochain cyclicT(const Cochain& phi) {
  const int m = phi.degree;
  return transformed(phi, m,
                     [m](const Eval& f, const ComplexMatrix&,
                         const std::vector<ComplexMatrix>& a) {
                       return cyclicFormula(f, m, a);
                     });
}

Cochain normalizerA(const Cochain& phi) {
  const int m = phi.degree;
  return transformed(phi, m,
                     [m](const Eval& f, const ComplexMatrix&,
                         const std::vector<ComplexMatrix>& a) {
                       return symmetrizerFormula(f, m, a);
                     });
}

Cochain connesB(const Cochain& phi) {
  const int m = phi.degree;
  if (m == 0) {
    fail(ErrorCode::DomainError,
         "degree-lowering boundary needs positive degree");
  }
  return transformed(phi, m - 1,
                     [m](const Eval& f, const ComplexMatrix& unit,
                         const std::vector<ComplexMatrix>& a) {
                       return loweringFormula(f, m, unit, a);
                     });
}

Cochain periodicityS(const Cochain& phi) {
  const int m = phi.degree;
  Cochain out = transformed(phi, m + 2,
                            [m](const Eval& f, const ComplexMatrix&,
                                const std::vector<ComplexMatrix>& a) {
                              return periodicityFormula(f, m, a);
                            });
  out.claimedCyclic = phi.claimedCyclic;
  return out;
}

Complex trSharpEntrywise(const Cochain& phi, const Amplification& amp,
                         const std::vector<ComplexMatrix>& realizedArgs) {
  const int m = phi.degree;
  if (static_cast<int>(realizedArgs.size()) != m + 1) {
    fail(ErrorCode::InvalidArgument, "entry contraction needs m + 1 arguments");
  }
  const int q = amp.q();

  // Pre-extract all entries of every argument.
  std::vector<std::vector<ComplexMatrix>> entries(realizedArgs.size());
  for (std::size_t t = 0; t < realizedArgs.size(); ++t) {
    entries[t].reserve(static_cast<std::size_t>(q) * static_cast<std::size_t>(q));
    for (int i = 0; i < q; ++i) {
      for (int j = 0; j < q; ++j) {
        entries[t].push_back(amp.extractEntry(realizedArgs[t], i, j));
      }
    }
  }

  std::vector<int> idx(static_cast<std::size_t>(m + 1), 0);
  std::vector<ComplexMatrix> args(static_cast<std::size_t>(m + 1));
  Complex acc = 0.0;
  while (true) {
    for (int t = 0; t <= m; ++t) {
      const int row = idx[static_cast<std::size_t>(t)];
      const int col = idx[static_cast<std::size_t>((t + 1) % (m + 1))];
      args[static_cast<std::size_t>(t)] =
          entries[static_cast<std::size_t>(t)][static_cast<std::size_t>(row * q + col)];
    }
    acc += phi.eval(args);

    int pos = m;
    while (pos >= 0) {
      idx[static_cast<std::size_t>(pos)] += 1;
      if (idx[static_cast<std::size_t>(pos)] < q) break;
      idx[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return acc;
}

Complex trSharp(const Cochain& phi, const Amplification& amp,
                const std::vector<ComplexMatrix>& realizedArgs) {
  if (phi.lifted) return phi.lifted(amp.q(), realizedArgs);
  return trSharpEntrywise(phi, amp, realizedArgs);
}

Complex pairCyclicCocycle(const Cochain& phi, const TwistedTriple& t,
                          const Idempotent& e) {
  if (phi.degree % 2 != 0) {
    fail(ErrorCode::DomainError,
         "idempotent pairing needs an even cocycle degree");
  }
  if (phi.argDim != t.space.total()) {
    fail(ErrorCode::InvalidArgument, "cocycle dimension does not match triple");
  }
  const Amplification amp(t.space, e.q);
  const ComplexMatrix& big = e.realized.matrix();
  const int k = phi.degree / 2;
  const std::vector<ComplexMatrix> args(static_cast<std::size_t>(phi.degree + 1),
                                        big);
  const double factor = ((k % 2 == 0) ? 1.0 : -1.0) * factorialRatio(k);
  return factor * trSharp(phi, amp, args);
}

Complex pairNormalizedEven(const std::vector<Cochain>& components,
                           const TwistedTriple& t, const Idempotent& e) {
  const Amplification amp(t.space, e.q);
  const ComplexMatrix& big = e.realized.matrix();
  const ComplexMatrix shifted =
      big - 0.5 * ComplexMatrix::Identity(big.rows(), big.cols());
  Complex acc = 0.0;
  for (const auto& phi : components) {
    if (phi.degree % 2 != 0) {
      fail(ErrorCode::DomainError,
           "idempotent pairing needs even cocycle degrees");
    }
    if (phi.argDim != t.space.total()) {
      fail(ErrorCode::InvalidArgument,
           "cochain dimension does not match triple");
    }
    if (phi.degree == 0) {
      acc += trSharp(phi, amp, {big});
      continue;
    }
    if (!phi.claimedNormalized) {
      fail(ErrorCode::ContractViolation,
           "pairing formula needs normalized components in positive degree");
    }
    const int k = phi.degree / 2;
    std::vector<ComplexMatrix> args;
    args.reserve(static_cast<std::size_t>(phi.degree + 1));
    args.push_back(shifted);
    for (int i = 0; i < phi.degree; ++i) args.push_back(big);
    const double factor = ((k % 2 == 0) ? 1.0 : -1.0) * factorialRatio(k);
    acc += factor * trSharp(phi, amp, args);
  }
  return acc;
}

double normalizationResidual(const Cochain& phi,
                             const std::vector<ComplexMatrix>& samples) {
  if (phi.degree == 0) return 0.0;
  if (samples.empty()) fail(ErrorCode::InvalidArgument, "no sample matrices");
  const std::size_t n = samples.size();
  const ComplexMatrix unit = ComplexMatrix::Identity(phi.argDim, phi.argDim);
  double scale = 0.0;
  double worst = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<ComplexMatrix> args;
    args.reserve(static_cast<std::size_t>(phi.degree + 1));
    for (int i = 0; i <= phi.degree; ++i) {
      args.push_back(samples[(s + static_cast<std::size_t>(i)) % n]);
    }
    scale = std::max(scale, std::abs(phi(args)));
    for (int j = 1; j <= phi.degree; ++j) {
      std::vector<ComplexMatrix> probe = args;
      probe[static_cast<std::size_t>(j)] = unit;
      const double value = std::abs(phi(probe));
      scale = std::max(scale, value);
      worst = std::max(worst, value);
    }
  }
  return worst / std::max(scale, 1e-30);
}

double cyclicityResidual(const Cochain& phi,
                         const std::vector<ComplexMatrix>& samples) {
  if (samples.empty()) fail(ErrorCode::InvalidArgument, "no sample matrices");
  const std::size_t n = samples.size();
  const Cochain rotated = cyclicT(phi);
  double scale = 0.0;
  double worst = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<ComplexMatrix> args;
    args.reserve(static_cast<std::size_t>(phi.degree + 1));
    for (int i = 0; i <= phi.degree; ++i) {
      args.push_back(samples[(s + static_cast<std::size_t>(i)) % n]);
    }
    const Complex lhs = rotated(args);
    const Complex rhs = phi(args);
    scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst / std::max(scale, 1e-30);
}

}  // namespace twistdex
