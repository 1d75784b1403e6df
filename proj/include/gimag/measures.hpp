#pragma once

// Imaginarity measures for Gaussian states and channels, and the
// free-operation membership tests.
//
// Block names refer to P_n M P_n^T = [[M11, M12], [M21, M22]], i.e. M21 is
// the momentum-row / position-column block. "d_even" is the momentum part
// of a displacement (entries 2, 4, ..., 2n in 1-based numbering).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gimag/gaussian.hpp"

namespace gimag {

// h(t) = 0 if t <= epsilon * max(1, scale), 1 otherwise.
struct StepThreshold {
  double epsilon = 1e-12;

  double operator()(double value, double scale) const;
};

struct SupSearchConfig {
  int restarts = 32;
  int iterations_per_restart = 200;
  double cm_eigenvalue_bound = 50.0;
  double displacement_bound = 10.0;
  std::uint64_t seed = 0;
};

enum class MeasureKind { is_lower_bound, id, ic, ign };

std::string to_string(MeasureKind k);

struct MeasureTerm {
  std::string name;
  double value = 0.0;
};

struct MeasureReport {
  double value = 0.0;
  MeasureKind kind = MeasureKind::ic;
  std::vector<MeasureTerm> breakdown;
  // Only for the I_s lower bound: the real input state that attains it.
  std::optional<GaussianState> witness;
};

MeasureReport state_measure_IGn(const GaussianState& s, StepThreshold h = {});
MeasureReport channel_measure_Id(const GaussianChannel& c, StepThreshold h = {});
MeasureReport channel_measure_Ic(const GaussianChannel& c);

// Lower bound on the sup over real input states of I^Gn of the output,
// from a seeded multi-start coordinate search. Restart 0 starts from the
// vacuum; restart k uses its own substream, so more restarts never lower
// the value.
MeasureReport channel_measure_Is(const GaussianChannel& c, const SupSearchConfig& cfg = {},
                                 StepThreshold h = {});

// Real input state for the I_s search, built from a flat parameter vector:
// n positions, n log-squeezings, n log-thermal excesses, then n(n-1)/2
// Givens angles for each of two rotations. Parameters are clamped to the
// box implied by cfg.
GaussianState real_state_from_parameters(int n, const RealVector& params,
                                         const SupSearchConfig& cfg);
int real_state_parameter_count(int n);

bool in_FO(const GaussianSuperchannel& s, double tol = 1e-9);
bool in_FO1(const GaussianSuperchannel& s, double tol = 1e-9);

}  // namespace gimag
