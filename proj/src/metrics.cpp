#include "mtc/metrics.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace mtc {

namespace {

constexpr double kTieEps = 1e-12;

void check_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 0.5)) {
    throw std::invalid_argument("gamma must lie in (0, 1/2)");
  }
}

}  // namespace

double acc_init(std::span<const int> initial_states) {
  if (initial_states.empty()) {
    throw std::invalid_argument("acc_init over empty input");
  }
  double sum = 0.0;
  for (int s : initial_states) sum += (s == 1) ? 1.0 : 0.0;
  return sum / static_cast<double>(initial_states.size());
}

double acc_avg(std::span<const std::vector<int>> sequences, int T) {
  if (sequences.empty()) {
    throw std::invalid_argument("acc_avg over empty input");
  }
  if (T < 1) throw std::invalid_argument("T must be >= 1");
  double sum = 0.0;
  for (const auto& s : sequences) {
    if (s.size() < static_cast<std::size_t>(T) + 1) {
      throw std::invalid_argument("sequence shorter than T+1");
    }
    for (int i = 1; i <= T; ++i) sum += s[i];
  }
  return sum / (static_cast<double>(sequences.size()) * T);
}

int first_sway(std::span<const int> s, int T) {
  for (int i = 1; i < static_cast<int>(s.size()); ++i) {
    if (s[i] != s[i - 1]) return i;
  }
  return T + 1;
}

double pwc(std::span<const int> s, double gamma) {
  check_gamma(gamma);
  double total = 0.0;
  double weight = 1.0;
  for (int bit : s) {
    total += bit * weight;
    weight *= gamma;
  }
  return total;
}

PwcOrder pwc_compare(std::span<const int> a, std::span<const int> b,
                     double gamma) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("pwc_compare requires equal lengths");
  }
  check_gamma(gamma);
  // For gamma < 1/2 the head weight gamma^i strictly exceeds the whole
  // remaining tail, so the first divergence decides the order. Comparing
  // this way stays exact where summed doubles would tie (the head/tail gap
  // shrinks below 1 ulp of the total once the divergence index passes ~48).
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) continue;
    return a[i] > b[i] ? PwcOrder::AGreater : PwcOrder::BGreater;
  }
  return PwcOrder::Equal;
}

double paired_permutation_test(std::span<const double> a,
                               std::span<const double> b, int iterations,
                               std::uint64_t seed) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("paired samples must have equal lengths");
  }
  const std::size_t n = a.size();
  if (n < 2) throw std::invalid_argument("need at least 2 pairs");
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");

  std::vector<double> diffs(n);
  double obs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    diffs[i] = a[i] - b[i];
    obs += diffs[i];
  }
  obs = std::fabs(obs / static_cast<double>(n));

  // Exact path: enumerate every sign assignment when feasible.
  if (n < 63 &&
      (std::uint64_t{1} << n) <= static_cast<std::uint64_t>(iterations)) {
    const std::uint64_t total = std::uint64_t{1} << n;
    std::uint64_t hits = 0;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      double stat = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        stat += (mask >> i) & 1 ? -diffs[i] : diffs[i];
      }
      stat = std::fabs(stat / static_cast<double>(n));
      if (stat >= obs - kTieEps) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(total);
  }

  std::mt19937_64 rng(seed);
  std::uint64_t hits = 0;
  for (int it = 0; it < iterations; ++it) {
    double stat = 0.0;
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i % 64 == 0) bits = rng();
      stat += (bits >> (i % 64)) & 1 ? -diffs[i] : diffs[i];
    }
    stat = std::fabs(stat / static_cast<double>(n));
    if (stat >= obs - kTieEps) ++hits;
  }
  return (static_cast<double>(hits) + 1.0) /
         (static_cast<double>(iterations) + 1.0);
}

std::vector<double> per_round_accuracy(
    std::span<const std::vector<int>> sequences, int T) {
  if (sequences.empty()) {
    throw std::invalid_argument("per_round_accuracy over empty input");
  }
  std::vector<double> acc(static_cast<std::size_t>(T), 0.0);
  for (const auto& s : sequences) {
    if (s.size() < static_cast<std::size_t>(T) + 1) {
      throw std::invalid_argument("sequence shorter than T+1");
    }
    for (int i = 1; i <= T; ++i) acc[i - 1] += s[i];
  }
  for (auto& v : acc) v /= static_cast<double>(sequences.size());
  return acc;
}

}  // namespace mtc
