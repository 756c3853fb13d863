#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mtc/metrics.hpp"

using namespace mtc;

namespace {

std::vector<int> bits_of(unsigned value, int n) {
  std::vector<int> s(n);
  for (int i = 0; i < n; ++i) s[i] = (value >> i) & 1;
  return s;
}

}  // namespace

TEST_CASE("acc_init") {
  CHECK(acc_init(std::vector<int>{1, 1, 1}) == 1.0);
  CHECK(acc_init(std::vector<int>{1, 0, 1, 0}) == 0.5);
  std::vector<int> states(700, 0);
  for (int i = 0; i < 595; ++i) states[i] = 1;
  CHECK(acc_init(states) == doctest::Approx(0.85).epsilon(1e-12));
  CHECK_THROWS_AS(acc_init(std::vector<int>{}), std::invalid_argument);
}

TEST_CASE("acc_avg excludes round 0") {
  std::vector<std::vector<int>> all_ones(5, std::vector<int>(9, 1));
  CHECK(acc_avg(all_ones, 8) == 1.0);

  std::vector<std::vector<int>> one = {{1, 1, 0, 0, 0, 0, 0, 0, 0}};
  CHECK(acc_avg(one, 8) == doctest::Approx(1.0 / 8).epsilon(1e-15));

  // Early-fail and late-fail with equal bit counts tie on acc_avg.
  std::vector<std::vector<int>> early = {{1, 0, 1, 1, 1, 1, 1, 1, 1}};
  std::vector<std::vector<int>> late = {{1, 1, 0, 1, 1, 1, 1, 1, 1}};
  CHECK(acc_avg(early, 8) == acc_avg(late, 8));

  CHECK_THROWS_AS(acc_avg(std::span<const std::vector<int>>{}, 8),
                  std::invalid_argument);
  std::vector<std::vector<int>> tooshort = {{1, 1}};
  CHECK_THROWS_AS(acc_avg(tooshort, 8), std::invalid_argument);
}

TEST_CASE("first_sway") {
  CHECK(first_sway(std::vector<int>{1, 1, 1, 1, 1, 1, 1, 1, 1}, 8) == 9);
  CHECK(first_sway(std::vector<int>{1, 0, 1, 1, 1, 1, 1, 1, 1}, 8) == 1);
  CHECK(first_sway(std::vector<int>{0, 0, 0, 0, 0, 0, 0, 0, 0}, 8) == 9);

  // Exhaustive check against a brute-force scan over all length-9 vectors.
  for (unsigned v = 0; v < (1u << 9); ++v) {
    auto s = bits_of(v, 9);
    int expected = 9;
    for (int i = 1; i < 9; ++i) {
      if (s[i] != s[i - 1]) {
        expected = i;
        break;
      }
    }
    CHECK(first_sway(s, 8) == expected);
  }
}

TEST_CASE("pwc basics") {
  CHECK(pwc(std::vector<int>{0, 0, 0, 0}, 0.45) == 0.0);
  CHECK(pwc(std::vector<int>{1, 0, 0, 0, 0, 0, 0, 0}, 0.45) == 1.0);

  // all-ones length 8 equals the geometric sum
  double direct = 0.0;
  for (int i = 0; i < 8; ++i) direct += std::pow(0.45, i);
  CHECK(std::fabs(pwc(std::vector<int>(8, 1), 0.45) - direct) < 1e-12);
  CHECK(std::fabs(direct - 1.8151245226) < 1e-9);

  CHECK_THROWS_AS(pwc(std::vector<int>{1}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(pwc(std::vector<int>{1}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(pwc(std::vector<int>{1}, -0.1), std::invalid_argument);
}

TEST_CASE("pwc bound and monotonicity properties") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    int n = 1 + static_cast<int>(rng() % 16);
    std::vector<int> s(n);
    for (auto& b : s) b = static_cast<int>(rng() % 2);
    double gamma = 0.45;
    double value = pwc(s, gamma);
    double bound = (1.0 - std::pow(gamma, n)) / (1.0 - gamma);
    CHECK(value >= 0.0);
    CHECK(value <= bound + 1e-12);

    // flipping any 0 to 1 strictly increases the score
    for (int i = 0; i < n; ++i) {
      if (s[i] == 0) {
        auto flipped = s;
        flipped[i] = 1;
        CHECK(pwc(flipped, gamma) > value);
      }
    }
  }
  // equality with the bound holds exactly for all-ones
  std::vector<int> ones(10, 1);
  CHECK(pwc(ones, 0.45) ==
        doctest::Approx((1.0 - std::pow(0.45, 10)) / 0.55).epsilon(1e-14));
}

TEST_CASE("pwc early positions weigh more") {
  // flipping bit i contributes gamma^i, strictly decreasing in i
  for (int i = 0; i + 1 < 8; ++i) {
    std::vector<int> a(8, 0), b(8, 0);
    a[i] = 1;
    b[i + 1] = 1;
    CHECK(pwc(a, 0.45) > pwc(b, 0.45));
  }
}

TEST_CASE("pwc_compare") {
  std::vector<int> s = {1, 0, 1};
  CHECK(pwc_compare(s, s, 0.45) == PwcOrder::Equal);
  CHECK(pwc_compare(std::vector<int>{0, 1}, std::vector<int>{1, 0}, 0.45) ==
        PwcOrder::BGreater);
  CHECK_THROWS_AS(
      pwc_compare(std::vector<int>{1}, std::vector<int>{1, 0}, 0.45),
      std::invalid_argument);

  // first-divergence dominance decides regardless of suffixes
  std::vector<int> high = {1, 1, 1, 0, 0, 0};
  std::vector<int> low = {1, 1, 0, 1, 1, 1};
  CHECK(pwc_compare(high, low, 0.45) == PwcOrder::AGreater);
}

TEST_CASE("pwc partial order at first divergence, randomized lengths <= 64") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10000; ++trial) {
    int n = 2 + static_cast<int>(rng() % 63);
    std::vector<int> high(n), low(n);
    int div = static_cast<int>(rng() % n);
    for (int i = 0; i < div; ++i) {
      high[i] = low[i] = static_cast<int>(rng() % 2);
    }
    high[div] = 1;
    low[div] = 0;
    for (int i = div + 1; i < n; ++i) {
      high[i] = static_cast<int>(rng() % 2);
      low[i] = static_cast<int>(rng() % 2);
    }
    CHECK(pwc_compare(high, low, 0.45) == PwcOrder::AGreater);
    // summed doubles agree wherever they can still resolve the gap
    if (div <= 40) CHECK(pwc(high, 0.45) > pwc(low, 0.45));
  }
}

TEST_CASE("acc_avg conflation that pwc resolves") {
  std::vector<int> early = {1, 1, 0, 1, 1, 1, 1, 1, 1};
  std::vector<int> late = {1, 1, 1, 0, 1, 1, 1, 1, 1};
  std::vector<std::vector<int>> ea = {early}, la = {late};
  CHECK(acc_avg(ea, 8) == acc_avg(la, 8));
  CHECK(acc_avg(ea, 8) == 7.0 / 8.0);
  CHECK(pwc_compare(late, early, 0.45) == PwcOrder::AGreater);
}

TEST_CASE("paired_permutation_test") {
  SUBCASE("identical samples give p = 1") {
    std::vector<double> a = {1.0, 2.0, 3.0, 4.0};
    CHECK(paired_permutation_test(a, a, 1000, 1) == 1.0);
  }
  SUBCASE("constant large shift is significant") {
    std::mt19937_64 rng(3);
    std::vector<double> b(30), a(30);
    for (std::size_t i = 0; i < b.size(); ++i) {
      b[i] = static_cast<double>(rng() % 10);
      a[i] = b[i] + 10.0;
    }
    CHECK(paired_permutation_test(a, b, 10000, 5) <= 0.001);
  }
  SUBCASE("n = 3 exhaustive enumeration") {
    std::vector<double> a = {1.0, 2.0, 5.0};
    std::vector<double> b = {0.5, 2.5, 3.0};
    // diffs: 0.5, -0.5, 2.0; |mean| = 2/3. Flip masks with |sum| >= 2:
    // (+,+,+) sum 2; (+,-,+) sum 3; (-,+,+) 1; (-,-,+) 2; and the three
    // sign-mirrored counterparts of the qualifying masks: 6 of 8 total.
    double p = paired_permutation_test(a, b, 8, 0);
    CHECK(p == doctest::Approx(6.0 / 8.0).epsilon(1e-15));
    // Monte-Carlo path converges to the same value
    double mc = paired_permutation_test(a, b, 7, 123);
    CHECK(std::fabs(mc - p) < 0.45);  // loose: only 7 draws
  }
  SUBCASE("input validation") {
    std::vector<double> a = {1.0};
    CHECK_THROWS_AS(paired_permutation_test(a, a, 100, 0),
                    std::invalid_argument);
    std::vector<double> b = {1.0, 2.0};
    std::vector<double> c = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(paired_permutation_test(b, c, 100, 0),
                    std::invalid_argument);
  }
}

TEST_CASE("per_round_accuracy") {
  std::vector<std::vector<int>> ones(3, std::vector<int>(9, 1));
  auto acc = per_round_accuracy(ones, 8);
  REQUIRE(acc.size() == 8);
  for (double v : acc) CHECK(v == 1.0);

  std::vector<std::vector<int>> single = {{1, 1, 0, 1, 0, 0, 1, 1, 0}};
  auto bits = per_round_accuracy(single, 8);
  std::vector<double> expected = {1, 0, 1, 0, 0, 1, 1, 0};
  for (int i = 0; i < 8; ++i) CHECK(bits[i] == expected[i]);

  std::vector<std::vector<int>> mixed = {{1, 1, 1, 1, 1, 1, 1, 1, 1},
                                         {1, 0, 0, 0, 0, 0, 0, 0, 0}};
  auto halves = per_round_accuracy(mixed, 8);
  for (double v : halves) CHECK(v == 0.5);
}
