#pragma once

// Randomised checks of the realness characterisation and of the measure
// monotonicity properties. Every trial draws its objects from a seed
// derived from (seed, check, trial), so a report is reproducible and any
// counterexample can be replayed from its serialised objects.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gimag/document.hpp"

namespace gimag {

struct AuditConfig {
  int modes = 1;
  int trials = 200;
  std::uint64_t seed = 0;
  // Probes per superchannel when looking for a converse witness.
  int converse_probes = 200;
  // Minimum fraction of converse trials that must find a witness.
  double converse_rate = 0.95;
};

struct AuditCheck {
  std::string name;
  int trials = 0;
  int failures = 0;
  // For converse checks: trials where a witness was found.
  std::optional<int> witnesses;
  bool passed = true;
  // Serialized objects of the first failing trial.
  std::optional<Json> counterexample;
};

struct AuditReport {
  AuditConfig config;
  std::vector<AuditCheck> checks;
  bool passed() const;
};

// Throws InvalidInput for trials < 1, InvalidDimension for a bad mode count.
AuditReport run_audit(const AuditConfig& cfg);

// Names of the checks run_audit performs, in order.
std::vector<std::string> audit_check_names();

// Runs a single named check.
AuditCheck run_audit_check(const std::string& name, const AuditConfig& cfg);

Json to_json(const AuditReport& r);

// Deterministic 64-bit mix used to derive per-trial seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

}  // namespace gimag
