#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rtlmut/reward/reward.hpp"
#include "rtlmut/util/rng.hpp"

using namespace rtlmut;
using namespace rtlmut::reward;

namespace {

sim::Verdict verdict(bool passed) {
  sim::Verdict v;
  v.passed = passed;
  return v;
}

std::vector<sim::Verdict> verdicts(std::initializer_list<bool> passes) {
  std::vector<sim::Verdict> out;
  for (bool p : passes) out.push_back(verdict(p));
  return out;
}

double sample_std(const std::vector<double>& xs) {
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double acc = 0;
  for (double x : xs) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

}  // namespace

TEST_CASE("published advantage anchors") {
  SUBCASE("leave-one-out, case 1") {
    auto a = compute_advantages({{1, 1, 1, 1, 1, 2, 1, 1}, AdvantageMethod::LeaveOneOut, 1e-8});
    for (size_t i = 0; i < 8; ++i) {
      if (i == 5) CHECK(a[i] == doctest::Approx(1.0).epsilon(0.01));
      else CHECK(a[i] == doctest::Approx(-0.38).epsilon(0.03));
    }
  }
  SUBCASE("leave-one-out, case 2") {
    auto a = compute_advantages({{1, 1, 1, 1, 1, 2, 0.8, 1}, AdvantageMethod::LeaveOneOut, 1e-8});
    CHECK(a[5] == doctest::Approx(13.61).epsilon(0.002));
    CHECK(a[6] == doctest::Approx(-0.91).epsilon(0.02));
    CHECK(a[0] == doctest::Approx(-0.29).epsilon(0.02));
    CHECK(a[7] == doctest::Approx(-0.29).epsilon(0.02));
  }
  SUBCASE("fixed-std variant amplifies the sparse high reward") {
    auto a = compute_advantages({{1, 1, 1, 1, 1, 2, 1, 1}, AdvantageMethod::SmuFixed, 1e-8});
    CHECK(a[5] == doctest::Approx(2.83).epsilon(0.004));
  }
}

TEST_CASE("reward model worked examples hold exactly") {
  // golden fail, 4/4 mutations fail, judge ok, clean text: w_m masks r_m
  auto r1 = compute_reward(verdict(false), verdicts({false, false, false, false}), true, "plan");
  CHECK(r1.total == 1.0);
  CHECK(r1.w_m == 0.0);
  CHECK(r1.r_m == 1.0);  // computed but not granted
  // golden pass, 2/4 fail
  auto r2 = compute_reward(verdict(true), verdicts({false, false, true, true}), true, "plan");
  CHECK(r2.total == 2.5);
  // scale maximum
  auto r3 = compute_reward(verdict(true), verdicts({false, false, false, false}), true, "plan");
  CHECK(r3.total == 3.0);
}

TEST_CASE("reward fuzz: bounds, gating and the formula identity") {
  Rng rng(42);
  for (int i = 0; i < 10000; ++i) {
    bool golden = rng.next_below(2);
    size_t n = 1 + rng.next_below(6);
    std::vector<sim::Verdict> muts;
    for (size_t k = 0; k < n; ++k) muts.push_back(verdict(rng.next_below(2)));
    bool judge = rng.next_below(2);
    std::string text = rng.next_below(4) == 0 ? std::string("caf\xc3\xa9") : std::string("ok");
    auto r = compute_reward(verdict(golden), muts, judge, text);
    CHECK(r.total >= 0.0);
    CHECK(r.total <= 3.0);
    CHECK(r.w_m == (r.r_o == 1.0 ? 1.0 : 0.0));
    CHECK(r.total == r.r_o + r.w_m * r.r_m + r.r_j + r.r_c);
    if (!golden) {
      // total is independent of mutation verdicts when the golden fails
      auto alt = compute_reward(verdict(false), verdicts({true}), judge, text);
      CHECK(alt.total == r.total);
    }
  }
  CHECK_THROWS_AS(compute_reward(verdict(true), {}, true, ""), std::invalid_argument);
}

TEST_CASE("character screen accepts printable ASCII and whitespace only") {
  CHECK(text_is_clean("Plan: drive a=1, expect y=0.\n\ttabs ok\r\n"));
  CHECK(!text_is_clean("\xe6\xb5\x8b\xe8\xaf\x95"));
  CHECK(!text_is_clean(std::string("null\x00byte", 9)));
  CHECK(!text_is_clean("bell\x07"));
  CHECK(text_is_clean(""));
}

TEST_CASE("whole-group advantages are zero-sum and flat groups give zeros") {
  auto a = compute_advantages({{0.5, 1.5, 2.0, 3.0}, AdvantageMethod::WholeGroup, 1e-8});
  double sum = 0;
  for (double x : a) sum += x;
  CHECK(sum == doctest::Approx(0.0).epsilon(1e-12));

  auto flat = compute_advantages({{1, 1, 1, 1}, AdvantageMethod::WholeGroup, 1e-8});
  for (double x : flat) CHECK(x == 0.0);

  CHECK_THROWS_AS(compute_advantages({{1.0}, AdvantageMethod::WholeGroup, 1e-8}), std::invalid_argument);
}

TEST_CASE("advantages are invariant under reward shifts") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> r;
    for (int i = 0; i < 8; ++i) r.push_back(static_cast<double>(rng.next_below(4)));
    double c = rng.next_double() * 10 - 5;
    std::vector<double> shifted;
    for (double x : r) shifted.push_back(x + c);
    for (auto method : {AdvantageMethod::LeaveOneOut, AdvantageMethod::SmuFixed,
                        AdvantageMethod::WholeGroup}) {
      auto a = compute_advantages({r, method, 1e-8});
      auto b = compute_advantages({shifted, method, 1e-8});
      for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("SMu grouping partitions by base state") {
  std::vector<SmuSample> samples;
  for (int i = 0; i < 8; ++i) samples.push_back({"base0", "m" + std::to_string(i), 1.0});
  auto groups = group_smu(samples);
  REQUIRE(groups.size() == 1);
  CHECK(groups[0].members.size() == 8);
  CHECK(!groups[0].below_min_size);

  for (int i = 0; i < 8; ++i) samples.push_back({"base1", "m" + std::to_string(i), 2.0});
  groups = group_smu(samples);
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].base_state_id == "base0");
  CHECK(groups[1].base_state_id == "base1");
  CHECK(groups[1].members.size() == 8);

  samples.push_back({"base0", "m3", 0.5});  // one action per state
  CHECK_THROWS_AS(group_smu(samples), std::invalid_argument);

  auto lonely = group_smu({{"b", "m", 1.0}});
  CHECK(lonely[0].below_min_size);
}

TEST_CASE("clipped surrogate term") {
  CHECK(clipped_term(1.5, 1.0, 0.2) == doctest::Approx(1.2));
  CHECK(clipped_term(0.5, -1.0, 0.2) == doctest::Approx(-0.8));
  CHECK(clipped_term(1.0, 0.7, 0.2) == doctest::Approx(0.7));   // on-policy identity
  CHECK(clipped_term(1.0, -0.7, 0.2) == doctest::Approx(-0.7));
  CHECK(clipped_term(0.9, 2.0, 0.2) == doctest::Approx(1.8));   // no clip below 1+eps
}

TEST_CASE("group objective aggregation") {
  ObjectiveConfig cfg;
  SUBCASE("single token identity") {
    ObjectiveSample s{{1.0}, {0.0}, 1.0};
    CHECK(smu_objective({s}, cfg) == doctest::Approx(1.0));
  }
  SUBCASE("beta 0 reduces to the mean clipped term") {
    cfg.beta = 0.0;
    ObjectiveSample a{{1.5}, {9.0}, 1.0};  // kl ignored
    ObjectiveSample b{{0.5}, {9.0}, -1.0};
    CHECK(smu_objective({a, b}, cfg) == doctest::Approx((1.2 + -0.8) / 2));
  }
  SUBCASE("sequence mean weighs samples equally; token mean pools 1:9") {
    cfg.beta = 0.0;
    // per-token terms equal each sample's advantage (ratio 1)
    ObjectiveSample one{{1.0}, {}, 1.0};
    ObjectiveSample nine{std::vector<double>(9, 1.0), {}, -1.0};
    cfg.aggregation = Aggregation::SequenceMean;
    CHECK(smu_objective({one, nine}, cfg) == doctest::Approx((1.0 + -1.0) / 2));
    cfg.aggregation = Aggregation::TokenMean;
    CHECK(smu_objective({one, nine}, cfg) == doctest::Approx((1.0 * 1 + -1.0 * 9) / 10.0));
  }
}

TEST_CASE("diversified grouping raises reward spread over fixed-state grouping") {
  // Synthetic oracle: each mutation id carries a distinct deterministic
  // reward. SMu draws one action per distinct mutation; the fixed-state group
  // redraws one mutation G times.
  const int kGroups = 100, kG = 8;
  auto oracle = [](int mutation) { return 0.25 * mutation; };
  double smu_std_sum = 0, fixed_std_sum = 0;
  for (int g = 0; g < kGroups; ++g) {
    std::vector<double> smu_rewards, fixed_rewards;
    for (int m = 0; m < kG; ++m) smu_rewards.push_back(oracle(m));
    for (int m = 0; m < kG; ++m) fixed_rewards.push_back(oracle(g % kG));
    smu_std_sum += sample_std(smu_rewards);
    fixed_std_sum += sample_std(fixed_rewards);
  }
  CHECK(smu_std_sum / kGroups >= fixed_std_sum / kGroups);
  CHECK(smu_std_sum / kGroups > fixed_std_sum / kGroups);  // strict: oracle non-constant
}

TEST_CASE("method names round-trip") {
  for (auto m : {AdvantageMethod::WholeGroup, AdvantageMethod::LeaveOneOut, AdvantageMethod::SmuFixed})
    CHECK(advantage_method_from(advantage_method_name(m)) == m);
  CHECK(advantage_method_from("loo") == AdvantageMethod::LeaveOneOut);
  CHECK(advantage_method_from("whole") == AdvantageMethod::WholeGroup);
  CHECK(advantage_method_from("smu") == AdvantageMethod::SmuFixed);
  CHECK_THROWS(advantage_method_from("nope"));
}
