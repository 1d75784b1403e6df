#pragma once

// Seeded generators of valid states, channels and superchannels for tests
// and audits. Same seed, same output (on a given standard library).

#include <cstdint>
#include <random>

#include "gimag/gaussian.hpp"

namespace gimag {

enum class ChannelClass { any, completely_real, covariant_real };
enum class SuperchannelClass { any, real_rows, real_blocks, breaking };

struct SuperchannelOptions {
  // Rescale A to unit spectral norm (free-operation sampling).
  bool unit_norm_a = false;
};

GaussianState sample_random_state(int n, std::uint64_t seed, bool real);
GaussianChannel sample_random_channel(int n, std::uint64_t seed, ChannelClass cls);
GaussianSuperchannel sample_random_superchannel(int n, std::uint64_t seed, SuperchannelClass cls,
                                                SuperchannelOptions opts = {});

// Haar-like orthogonal matrix that also preserves Delta_n. With
// covariant=true it is block-diagonal in the (q..., p...) grouping.
RealMatrix sample_passive_orthogonal(int n, std::mt19937_64& rng, bool covariant);

// Noise margin added on top of the PSD compensation.
inline constexpr double kSamplerMargin = 1e-6;

}  // namespace gimag
