// Copyright 2026 The mmsalloc Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <numeric>
#include <random>

#include "gtest/gtest.h"
#include "mmsalloc/allocator.h"
#include "mmsalloc/errors.h"
#include "mmsalloc/harness.h"
#include "mmsalloc/shares.h"
#include "oracles.h"

namespace mmsalloc {
namespace {

using ::mmsalloc::testing::Q;
using ::mmsalloc::testing::R;
using ::mmsalloc::testing::RandomInstance;

Instance Identical(int n, const std::vector<Rational>& row) {
  return Instance(std::vector<std::vector<Rational>>(n, row));
}

TEST(PhantomItemTest, ZeroBeyondUnallocated) {
  const Instance inst({Q({"3", "2", "1"})});
  const AllocatorState state(inst, ThresholdVector(Q({"1"})));
  EXPECT_EQ(state.PhantomItem(0, 2), 2);
  EXPECT_EQ(state.PhantomItem(0, 5), 0);
  const Instance empty(1, 0, {{}});
  const AllocatorState none(empty, ThresholdVector(Q({"1"})));
  EXPECT_EQ(none.PhantomItem(0, 1), 0);
}

TEST(ReductionWindowTest, UsesCurrentAgentCount) {
  EXPECT_EQ(ReductionWindow(ReductionRule::kR0, 3), (std::vector<int>{1}));
  EXPECT_EQ(ReductionWindow(ReductionRule::kR1, 3), (std::vector<int>{3, 4}));
  EXPECT_EQ(ReductionWindow(ReductionRule::kR2, 3),
            (std::vector<int>{5, 6, 7}));
  EXPECT_EQ(ReductionWindow(ReductionRule::kR3, 3),
            (std::vector<int>{7, 8, 9, 10}));
  EXPECT_EQ(ReductionWindow(ReductionRule::kR1, 1), (std::vector<int>{1, 2}));
}

TEST(TryReductionTest, R0FiresOnLargeItem) {
  const Instance inst = Identical(2, Q({"4/5", "1/10", "1/10"}));
  AllocatorState state(inst, ThresholdVector(Q({"1", "1"})));
  const auto grant = TryReduction(state, ReductionRule::kR0);
  ASSERT_TRUE(grant);
  EXPECT_EQ(grant->agent, 0);
  EXPECT_EQ(grant->items, (std::vector<int>{0}));
  EXPECT_EQ(state.active(), (std::vector<int>{1}));
  EXPECT_EQ(state.unallocated(), (std::vector<int>{1, 2}));
  ASSERT_EQ(state.trace().size(), 1u);
  EXPECT_EQ(state.trace()[0].rule, ReductionRule::kR0);
}

TEST(TryReductionTest, R1FiresOnSecondAndThirdItems) {
  const Instance inst = Identical(2, Q({"1/2", "2/5", "2/5", "1/10"}));
  AllocatorState state(inst, ThresholdVector(Q({"1", "1"})));
  EXPECT_FALSE(TryReduction(state, ReductionRule::kR0));
  const auto grant = TryReduction(state, ReductionRule::kR1);
  ASSERT_TRUE(grant);
  EXPECT_EQ(grant->items, (std::vector<int>{1, 2}));
}

TEST(TryReductionTest, LowestIndexedAgentWins) {
  const Instance inst({Q({"1/2", "0"}), Q({"1", "0"}), Q({"1", "0"})});
  AllocatorState state(inst, ThresholdVector(Q({"1", "1", "1"})));
  EXPECT_EQ(TryReduction(state, ReductionRule::kR0)->agent, 1);
}

TEST(TryReductionTest, SmallItemsFireNothingAndBoundsHold) {
  // Every value is below 7/36 = (7/9)/4.
  const Instance inst = Identical(3, std::vector<Rational>(12, R(19, 100)));
  AllocatorState state(inst, ThresholdVector(Q({"1", "1", "1"})));
  AllocatorOptions options;
  options.check_invariants = true;
  for (auto rule : {ReductionRule::kR0, ReductionRule::kR1, ReductionRule::kR2,
                    ReductionRule::kR3}) {
    EXPECT_FALSE(TryReduction(state, rule, options));
  }
  EXPECT_GT(state.bound_checks(), 0);
  for (int j = 1; j <= 12; ++j) EXPECT_LT(state.PhantomItem(0, j), R(7, 36));
}

TEST(RunAlgTest, IdenticalUnitItems) {
  const Instance inst = Identical(2, Q({"1", "1"}));
  const SolveOutcome out =
      RunAlg(OrderInstance(inst), ThresholdVector(Q({"1", "1"})));
  ASSERT_TRUE(out.succeeded());
  ASSERT_EQ(out.trace.size(), 2u);
  for (const auto& e : out.trace) {
    EXPECT_EQ(e.kind, EventKind::kReduction);
    EXPECT_EQ(e.rule, ReductionRule::kR0);
  }
  EXPECT_EQ(out.allocation.bundles.at(0), (std::vector<int>{0}));
  EXPECT_EQ(out.allocation.bundles.at(1), (std::vector<int>{1}));
}

TEST(RunAlgTest, TpsThresholdsOnIdenticalFourThreeThree) {
  // alpha = TPS = 5 for both, target 35/9. R0 serves agent 0 with {4}; with
  // one agent left R1 covers {u_1, u_2} = {3, 3}.
  const Instance inst = Identical(2, Q({"4", "3", "3"}));
  const SolveOutcome out =
      RunAlg(OrderInstance(inst), ThresholdVector(Q({"5", "5"})));
  ASSERT_TRUE(out.succeeded());
  ASSERT_EQ(out.trace.size(), 2u);
  EXPECT_EQ(out.trace[0].rule, ReductionRule::kR0);
  EXPECT_EQ(out.trace[0].agent, 0);
  EXPECT_EQ(out.trace[1].rule, ReductionRule::kR1);
  EXPECT_EQ(out.trace[1].agent, 1);
  EXPECT_EQ(out.allocation.bundles.at(1), (std::vector<int>{1, 2}));
}

TEST(RunAlgTest, TightnessInstanceEndsAtSevenNinths) {
  const Instance inst = TightnessInstance(4);
  const SolveOutcome out = Solve(inst, ThresholdVector(Q({"1", "1", "1"})));
  ASSERT_TRUE(out.succeeded());
  // R0 twice on the 7/9 items, then the last agent takes the three thirds.
  ASSERT_EQ(out.trace.size(), 3u);
  EXPECT_EQ(out.trace[0].rule, ReductionRule::kR0);
  EXPECT_EQ(out.trace[1].rule, ReductionRule::kR0);
  EXPECT_EQ(out.trace[2].items, (std::vector<int>{2, 3, 4}));
  Rational worst = 1;
  for (int i = 0; i < 3; ++i) {
    const Rational v = inst.BundleValue(i, out.allocation.bundles.at(i));
    worst = v < worst ? v : worst;
  }
  EXPECT_EQ(worst, R(7, 9));
}

TEST(RunAlgTest, BagFillingFailsWhenValueIsShort) {
  const Instance inst = Identical(2, std::vector<Rational>(4, R(1, 6)));
  const SolveOutcome out =
      RunAlg(OrderInstance(inst), ThresholdVector(Q({"1", "1"})));
  EXPECT_FALSE(out.succeeded());
  EXPECT_EQ(out.failed_agents, (std::vector<int>{0, 1}));
  ASSERT_EQ(out.trace.size(), 1u);
  EXPECT_EQ(out.trace[0].kind, EventKind::kFail);
  EXPECT_EQ(out.allocation.unallocated.size(), 4u);
}

TEST(RunAlgTest, SingleAgentSatisfiedIffTotalSuffices) {
  const Instance inst({Q({"1", "1", "1"})});
  EXPECT_TRUE(RunAlg(OrderInstance(inst), ThresholdVector(Q({"27/7"})))
                  .succeeded());  // 7/9 * 27/7 = 3
  EXPECT_FALSE(RunAlg(OrderInstance(inst), ThresholdVector(Q({"28/7"})))
                   .succeeded());
}

TEST(RunAlgTest, StageTwoTriple) {
  // Three agents share values where pairs fall short but u_1 + u_4 + u_7
  // reaches 7/9: stage 2 must give out a triple.
  const Instance inst =
      Identical(3, Q({"2/5", "2/5", "2/5", "1/5", "1/5", "1/5", "1/5", "1/5",
                      "1/5", "1/5"}));
  const SolveOutcome out =
      RunAlg(OrderInstance(inst), ThresholdVector(Q({"1", "1", "1"})));
  ASSERT_TRUE(out.succeeded());
  ASSERT_FALSE(out.trace.empty());
  EXPECT_EQ(out.trace[0].kind, EventKind::kStage2);
  EXPECT_EQ(out.trace[0].items.size(), 3u);
}

TEST(RunAlgTest, FewerItemsThanTwiceAgents) {
  const Instance inst({Q({"1", "1"}), Q({"1", "1"}), Q({"1", "1"})});
  const SolveOutcome out =
      RunAlg(OrderInstance(inst), ThresholdVector(Q({"0", "0", "0"})));
  EXPECT_TRUE(out.succeeded());
  ASSERT_NO_THROW(ValidateAllocation(out.allocation, 3, 2));
}

TEST(RunAlgTest, MalformedThresholds) {
  const Instance inst({Q({"1"}), Q({"1"})});
  EXPECT_THROW(RunAlg(OrderInstance(inst), ThresholdVector(Q({"1"}))),
               DomainError);
}

// Replays a trace and checks that no stage-1 pair with a larger h would have
// satisfied anyone.
void ExpectLargestH(const Instance& ordered, const ThresholdVector& alpha,
                    const std::vector<TraceEvent>& trace) {
  std::vector<int> u(ordered.num_items());
  std::iota(u.begin(), u.end(), 0);
  std::vector<int> active(ordered.num_agents());
  std::iota(active.begin(), active.end(), 0);
  for (const auto& e : trace) {
    if (e.kind == EventKind::kFail) return;
    if (e.kind == EventKind::kStage1) {
      for (int h = *e.h + 1; h <= static_cast<int>(u.size()); ++h) {
        for (int i : active) {
          EXPECT_LT(ordered.value(i, u[0]) + ordered.value(i, u[h - 1]),
                    R(7, 9) * alpha[i]);
        }
      }
    }
    for (int item : e.items) u.erase(std::find(u.begin(), u.end(), item));
    active.erase(std::find(active.begin(), active.end(), e.agent));
  }
}

class RunAlgPropertyTest : public ::testing::TestWithParam<Family> {};

TEST_P(RunAlgPropertyTest, OracleThresholdsAreAlwaysMet) {
  for (uint64_t seed = 0; seed < 150; ++seed) {
    GeneratorSpec spec;
    spec.family = GetParam();
    spec.seed = seed;
    spec.n = 1 + static_cast<int>(seed % 4);
    spec.m = 1 + static_cast<int>((seed * 7) % 12);
    const Instance inst = GenerateInstance(spec);
    const ThresholdVector mms = OracleThresholds(inst);
    const OrderedInstance ordered = OrderInstance(inst);
    AllocatorOptions options;
    options.check_invariants = true;
    const SolveOutcome out = RunAlg(ordered, mms, options);
    ASSERT_TRUE(out.succeeded()) << "seed " << seed;
    ASSERT_NO_THROW(
        ValidateAllocation(out.allocation, inst.num_agents(), inst.num_items()));
    // One agent per non-fail event.
    EXPECT_EQ(out.trace.size(), static_cast<size_t>(inst.num_agents()));
    for (const auto& [agent, ranks] : out.allocation.bundles) {
      EXPECT_GE(ordered.base.BundleValue(agent, ranks), R(7, 9) * mms[agent]);
      if (sgn(mms[agent]) > 0) EXPECT_FALSE(ranks.empty());
    }
    ExpectLargestH(ordered.base, mms, out.trace);

    // Lifting keeps every agent at least as well off.
    const Allocation lifted = LiftAllocation(out.allocation, ordered);
    for (const auto& [agent, ranks] : out.allocation.bundles) {
      EXPECT_GE(inst.BundleValue(agent, lifted.bundles.at(agent)),
                ordered.base.BundleValue(agent, ranks));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Families, RunAlgPropertyTest,
                         ::testing::Values(Family::kUniform, Family::kBimodal));

TEST(RunAlgPropertyTest, ScalingAnAgentTogetherWithHerThresholdChangesNothing) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const Instance inst = RandomInstance(rng, n, static_cast<int>(rng() % 11));
    std::vector<Rational> alpha;
    for (int i = 0; i < n; ++i) {
      alpha.push_back(TruncatedProportionalShare(inst.row(i), n) *
                      R(1 + static_cast<long>(rng() % 4), 4));
    }
    const int agent = static_cast<int>(rng() % n);
    const Rational c = R(1 + static_cast<long>(rng() % 7), 3);
    auto scaled_alpha = alpha;
    scaled_alpha[agent] *= c;
    const SolveOutcome a = Solve(inst, ThresholdVector(alpha));
    const SolveOutcome b =
        Solve(ScaleAgent(inst, agent, c), ThresholdVector(scaled_alpha));
    EXPECT_EQ(a.allocation, b.allocation);
    EXPECT_EQ(a.failed_agents, b.failed_agents);
  }
}

TEST(TraceTest, JsonLineShape) {
  TraceEvent e;
  e.round = 3;
  e.kind = EventKind::kStage2;
  e.agent = 1;
  e.items = {0, 4, 6};
  e.h = 5;
  e.t = 7;
  const Json json = TraceEventToJson(e);
  EXPECT_EQ(json.dump(),
            R"({"agent":1,"event":"stage2","h":5,"items":[0,4,6],"round":3,"t":7})");
  TraceEvent r;
  r.round = 2;
  r.kind = EventKind::kReduction;
  r.rule = ReductionRule::kR1;
  r.agent = 0;
  EXPECT_EQ(TraceEventToJson(r)["rule"], "R1");
  EXPECT_FALSE(TraceEventToJson(r).contains("h"));
}

}  // namespace
}  // namespace mmsalloc
