#pragma once

#include <cstdint>

#include "ising/types.hpp"

namespace ising {

enum class SamplerMethod { Exact, Gibbs };

struct SamplerConfig {
    SamplerMethod method = SamplerMethod::Exact;
    int gibbs_sweeps = 1000;  // full sequential-scan passes per emitted sample
    std::uint64_t rng_seed = 0;
};

/// Largest p for which full state enumeration is allowed (2^20 states).
inline constexpr int kMaxExactNodes = 20;

/// log of the partition function, computed by max-shifted summation over all
/// 2^p states. Requires p <= kMaxExactNodes.
double log_partition(const ConnectivityMatrix& w);

/// i.i.d. draws from the exact model distribution via inverse-CDF over the
/// enumerated states. Requires p <= kMaxExactNodes.
SampleSet exact_sample(const ConnectivityMatrix& w, int n, std::uint64_t seed);

/// P(z_j = +1 | z_rest) = 1 / (1 + exp(-2 w . z_rest)).
double conditional_prob(const Eigen::VectorXd& w_row, const Eigen::VectorXd& z_rest);

/// One independent chain per emitted sample: uniform random start, `sweeps`
/// sequential full-vector passes, then the state is emitted. Each chain draws
/// from its own stream derived from (seed, sample index).
SampleSet gibbs_sample(const ConnectivityMatrix& w, int n, int sweeps, std::uint64_t seed);

SampleSet draw_samples(const ConnectivityMatrix& w, int n, const SamplerConfig& config);

}  // namespace ising
