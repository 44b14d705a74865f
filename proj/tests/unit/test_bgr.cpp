#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "golden.hpp"
#include "polarmwd/bgr.hpp"
#include "polarmwd/errors.hpp"

using namespace polarmwd;

namespace {

BgrConfig example_config(ReorderRule rule) {
  BgrConfig cfg;
  cfg.params = CodeParams(5);
  cfg.k = 16;
  cfg.list_size = 2;
  cfg.design_snr_db = 1.25;
  cfg.reorder_rule = rule;
  return cfg;
}

std::vector<int> as_ints(std::span<const ChannelIndex> s) { return {s.begin(), s.end()}; }

std::vector<int> sorted_copy(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("entropy_of_set examples") {
  const auto cfg = example_config(ReorderRule::kEntropy);
  const auto h = bgr_entropies(cfg);
  CHECK(entropy_of_set(h, InformationSet(cfg.params, {})) == 0.0);

  const InformationSet mwd_set(cfg.params, {golden::kExampleMwdSet.begin(), golden::kExampleMwdSet.end()});
  const InformationSet bgr_set(cfg.params, {golden::kExampleBgrSet.begin(), golden::kExampleBgrSet.end()});
  CHECK(std::abs(entropy_of_set(h, mwd_set) - golden::kExampleMwdEntropy) <= 0.05);
  CHECK(std::abs(entropy_of_set(h, bgr_set) - golden::kExampleBgrEntropy) <= 0.05);
  CHECK(entropy_of_set(h, bgr_set) < entropy_of_set(h, mwd_set));
}

TEST_CASE("satisfies_entropy_constraint examples") {
  CHECK(satisfies_entropy_constraint(2, 0.993));
  CHECK_FALSE(satisfies_entropy_constraint(2, 1.064));
  CHECK(satisfies_entropy_constraint(1, 0.0));

  BgrConfig cfg;
  cfg.params = CodeParams(3);
  cfg.k = 1;
  cfg.list_size = 1;
  const ChannelEntropies h{std::vector<double>(8, 0.25)};
  CHECK(satisfies_entropy_constraint(cfg, h, InformationSet(cfg.params, {})));
  CHECK_FALSE(satisfies_entropy_constraint(cfg, h, InformationSet(cfg.params, {7})));
}

TEST_CASE("bgr_mwd reproduces the N = 32 example") {
  const auto result = bgr_mwd(example_config(ReorderRule::kEntropy));
  CHECK(as_ints(result.set.indices()) == sorted_copy(golden::kExampleBgrSet));
  CHECK(result.set.size() == 16);
  CHECK(result.trace.initial_entropy_bits == doctest::Approx(golden::kExampleMwdEntropy).epsilon(0.05));
  REQUIRE_FALSE(result.trace.iterations.empty());
  CHECK(result.trace.iterations.back().a == 0);
  CHECK(result.trace.iterations.back().b == 5);
}

TEST_CASE("bgr_mwd_pw reproduces the N = 32 example") {
  const auto result = bgr_mwd_pw(example_config(ReorderRule::kPwSequence));
  CHECK(as_ints(result.set.indices()) == sorted_copy(golden::kExampleBgrSet));
  CHECK(result.trace.termination == BgrTermination::kFullRange);
}

TEST_CASE("both reorder rules agree on the N = 32 example") {
  const auto cfg = example_config(ReorderRule::kEntropy);
  CHECK(bgr_mwd(cfg).set == bgr_mwd_pw(cfg).set);
}

TEST_CASE("a huge list leaves the MWD-sequence set unchanged") {
  for (auto rule : {ReorderRule::kEntropy, ReorderRule::kPwSequence}) {
    auto cfg = example_config(rule);
    cfg.list_size = std::size_t{1} << 20;
    const auto result = bgr_construct(cfg);
    CHECK(result.trace.iterations.empty());
    CHECK(result.trace.satisfied);
    CHECK(result.trace.termination == BgrTermination::kInitiallySatisfied);
    const auto prefix = information_set_from_sequence(mwd_sequence(cfg.params), cfg.k);
    CHECK(result.set == prefix);
    CHECK(as_ints(result.set.selection_order()) == as_ints(prefix.selection_order()));
  }
}

TEST_CASE("K = N returns the full set") {
  for (auto rule : {ReorderRule::kEntropy, ReorderRule::kPwSequence}) {
    BgrConfig cfg;
    cfg.params = CodeParams(5);
    cfg.k = 32;
    cfg.list_size = 1;
    cfg.design_snr_db = 0.0;
    cfg.reorder_rule = rule;
    const auto result = bgr_construct(cfg);
    CHECK(result.set.size() == 32);
    CHECK_FALSE(result.trace.satisfied);
  }
}

TEST_CASE("K = 1 clamps the first group to degree 0") {
  BgrConfig cfg;
  cfg.params = CodeParams(4);
  cfg.k = 1;
  cfg.list_size = 1;
  cfg.design_snr_db = -10.0;
  const auto result = bgr_construct(cfg);
  REQUIRE_FALSE(result.trace.iterations.empty());
  CHECK(result.trace.iterations.front().a == 0);
  CHECK(result.trace.iterations.front().b == 0);
  CHECK(as_ints(result.set.indices()) == std::vector<int>{15});
}

TEST_CASE("bgr_construct rejects bad configurations") {
  auto cfg = example_config(ReorderRule::kEntropy);
  cfg.k = 0;
  CHECK_THROWS_AS((void)bgr_construct(cfg), InvalidArgument);
  cfg.k = 33;
  CHECK_THROWS_AS((void)bgr_construct(cfg), InvalidArgument);
  cfg.k = 16;
  cfg.list_size = 0;
  CHECK_THROWS_AS((void)bgr_construct(cfg), InvalidArgument);
  cfg.list_size = 2;
  CHECK_THROWS_AS((void)bgr_construct(cfg, ChannelEntropies{std::vector<double>(16, 0.5)}), InvalidArgument);
}

TEST_CASE("to_string names") {
  CHECK(std::string(to_string(ReorderRule::kEntropy)) == "entropy");
  CHECK(std::string(to_string(BgrTermination::kFixedPointAtFullRange)) == "fixed-point-at-full-range");
}

TEST_CASE("bgr output size, range, termination and entropy trend") {
  std::mt19937_64 rng(7);
  for (int n = 1; n <= 12; ++n) {
    const CodeParams p(n);
    const int trials = n <= 8 ? 12 : 3;
    for (int t = 0; t < trials; ++t) {
      BgrConfig cfg;
      cfg.params = p;
      cfg.k = std::uniform_int_distribution<std::size_t>(1, p.length())(rng);
      cfg.list_size = std::size_t{1} << std::uniform_int_distribution<int>(0, 6)(rng);
      cfg.design_snr_db = std::uniform_real_distribution<double>(-2.0, 6.0)(rng);
      const auto h = bgr_entropies(cfg);
      for (auto rule : {ReorderRule::kEntropy, ReorderRule::kPwSequence}) {
        cfg.reorder_rule = rule;
        const auto result = bgr_construct(cfg, h);
        CAPTURE(n);
        CAPTURE(cfg.k);
        REQUIRE(result.set.size() == cfg.k);
        for (ChannelIndex j : result.set.indices()) REQUIRE(j < p.length());
        REQUIRE(result.trace.iterations.size() <= static_cast<std::size_t>(n + 2));
        CHECK(result.trace.satisfied == satisfies_entropy_constraint(cfg, h, result.set));
        if (rule == ReorderRule::kEntropy) {
          double previous = result.trace.initial_entropy_bits;
          for (const auto& step : result.trace.iterations) {
            REQUIRE(step.entropy_bits <= previous + 1e-12);
            previous = step.entropy_bits;
          }
        }
        if (result.trace.iterations.empty()) {
          CHECK(result.set == information_set_from_sequence(mwd_sequence(p), cfg.k));
        }
      }
    }
  }
}

TEST_CASE("the GA set is the entropy lower envelope") {
  for (int n = 2; n <= 8; ++n) {
    const CodeParams p(n);
    for (double snr : {-1.0, 1.25, 3.0}) {
      for (std::size_t k = 1; k <= p.length(); k += std::max<std::size_t>(1, p.length() / 16)) {
        BgrConfig cfg;
        cfg.params = p;
        cfg.k = k;
        cfg.design_snr_db = snr;
        const auto h = bgr_entropies(cfg);
        const double rate = static_cast<double>(k) / static_cast<double>(p.length());
        const auto ga_set = information_set_from_sequence(ga_sequence(ga_llr_means(p, snr, rate)), k);
        const double floor = entropy_of_set(h, ga_set);
        CHECK(floor <= entropy_of_set(h, information_set_from_sequence(mwd_sequence(p), k)) + 1e-12);
        for (std::size_t list : {1, 2, 8, 32}) {
          cfg.list_size = list;
          for (auto rule : {ReorderRule::kEntropy, ReorderRule::kPwSequence}) {
            cfg.reorder_rule = rule;
            REQUIRE(floor <= entropy_of_set(h, bgr_construct(cfg, h).set) + 1e-12);
          }
        }
      }
    }
  }
}
