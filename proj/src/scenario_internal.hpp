#pragma once

#include <optional>
#include <string>
#include <vector>

#include "twistdex/scenario.hpp"

namespace twistdex {
namespace detail {

// Fully constructed objects a check operates on.
struct Materialized {
  TwistedTriple triple;
  std::optional<TwistedTriple> conformalBase;  // set when conformal is enabled
  ComplexMatrix conformalK;
  std::vector<Idempotent> idempotents;
};

struct CheckContext {
  const Scenario& scenario;
  const Materialized& mat;
  std::uint64_t seed = 1;
  int threads = 1;
  double tolerance = 0.0;
};

using CheckFn = CheckResult (*)(const CheckContext&);

struct RegisteredCheck {
  const char* name;
  const char* anchor;
  double defaultTolerance;
  CheckFn fn;
  bool (*applicable)(const Scenario&);
  // Checks that need an invertible operator are skipped by default-selection
  // on singular inputs; explicit listing still runs them.
  bool needsInvertible;
};

const std::vector<RegisteredCheck>& checkRegistry();

Materialized materializeScenario(const Scenario& s, std::uint64_t seed);

}  // namespace detail
}  // namespace twistdex
