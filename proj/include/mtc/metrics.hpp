#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mtc {

// Fraction of instances with a correct round-0 response.
double acc_init(std::span<const int> initial_states);

// Mean correctness over follow-up rounds 1..T across all sequences; round 0
// is excluded. Every sequence must carry at least T+1 bits.
double acc_avg(std::span<const std::vector<int>> sequences, int T);

// Earliest round i >= 1 with s_i != s_{i-1}; T+1 when the sequence never
// flips. The sentinel participates in averages; exported logs may display
// it as -1.
int first_sway(std::span<const int> s, int T);

// Position-weighted consistency: sum of s_i * gamma^i. gamma must lie in
// (0, 1/2), which makes pairwise comparison a strict partial order.
double pwc(std::span<const int> s, double gamma);

enum class PwcOrder { AGreater, BGreater, Equal };

PwcOrder pwc_compare(std::span<const int> a, std::span<const int> b,
                     double gamma);

// Two-sided sign-flipping test on the paired differences a_i - b_i.
// Enumerates all 2^n flips exactly when that fits in `iterations`; otherwise
// Monte-Carlo with the add-one correction. Degenerate all-equal samples
// give p = 1.
double paired_permutation_test(std::span<const double> a,
                               std::span<const double> b, int iterations,
                               std::uint64_t seed);

// Element i-1 = mean of s_i over sequences, for i = 1..T.
std::vector<double> per_round_accuracy(std::span<const std::vector<int>> sequences,
                                       int T);

struct MetricsSummary {
  double acc_init = 0.0;
  double acc_avg = 0.0;
  double r_sway_mean = 0.0;
  double pwc_mean = 0.0;
  std::vector<double> per_round_acc;
  int sequence_count = 0;
};

}  // namespace mtc
