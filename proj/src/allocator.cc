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

#include "mmsalloc/allocator.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "mmsalloc/errors.h"

namespace mmsalloc {
namespace {

const Rational kSevenNinths(7, 9);

constexpr ReductionRule kAllRules[] = {ReductionRule::kR0, ReductionRule::kR1,
                                       ReductionRule::kR2, ReductionRule::kR3};

bool TryRules(AllocatorState& state, std::span<const ReductionRule> rules,
              const AllocatorOptions& options) {
  for (ReductionRule rule : rules) {
    if (TryReduction(state, rule, options)) return true;
  }
  return false;
}

}  // namespace

const char* RuleName(ReductionRule rule) {
  switch (rule) {
    case ReductionRule::kR0:
      return "R0";
    case ReductionRule::kR1:
      return "R1";
    case ReductionRule::kR2:
      return "R2";
    case ReductionRule::kR3:
      return "R3";
  }
  return "?";
}

const char* EventName(EventKind kind) {
  switch (kind) {
    case EventKind::kReduction:
      return "reduction";
    case EventKind::kStage1:
      return "stage1";
    case EventKind::kStage2:
      return "stage2";
    case EventKind::kStage3:
      return "stage3";
    case EventKind::kFail:
      return "fail";
  }
  return "?";
}

Json TraceEventToJson(const TraceEvent& event) {
  Json out = {{"round", event.round}, {"event", EventName(event.kind)}};
  if (event.rule) out["rule"] = RuleName(*event.rule);
  if (event.agent >= 0) out["agent"] = event.agent;
  out["items"] = event.items;
  if (event.h) out["h"] = *event.h;
  if (event.t) out["t"] = *event.t;
  return out;
}

AllocatorState::AllocatorState(const Instance& ordered, ThresholdVector alpha)
    : values_(&ordered), alpha_(std::move(alpha)) {
  alpha_.CheckSize(ordered.num_agents());
  targets_.reserve(alpha_.size());
  for (const auto& a : alpha_.values()) targets_.push_back(kSevenNinths * a);
  active_.resize(ordered.num_agents());
  std::iota(active_.begin(), active_.end(), 0);
  unallocated_.resize(ordered.num_items());
  std::iota(unallocated_.begin(), unallocated_.end(), 0);
}

Rational AllocatorState::PhantomItem(int agent, int j) const {
  if (j < 1 || j > static_cast<int>(unallocated_.size())) return 0;
  return values_->value(agent, unallocated_[j - 1]);
}

Rational AllocatorState::WindowValue(int agent,
                                     std::span<const int> positions) const {
  Rational total = 0;
  const int size = static_cast<int>(unallocated_.size());
  for (int j : positions) {
    if (j >= 1 && j <= size) total += values_->value(agent, unallocated_[j - 1]);
  }
  return total;
}

std::optional<int> AllocatorState::FirstSatisfied(
    std::span<const int> positions) const {
  for (int agent : active_) {
    if (WindowValue(agent, positions) >= targets_[agent]) return agent;
  }
  return std::nullopt;
}

std::vector<int> AllocatorState::Grant(int agent,
                                       std::span<const int> positions,
                                       TraceEvent event) {
  const int size = static_cast<int>(unallocated_.size());
  std::vector<int> real;
  for (int j : positions) {
    if (j >= 1 && j <= size) real.push_back(j);
  }
  std::sort(real.begin(), real.end());
  real.erase(std::unique(real.begin(), real.end()), real.end());
  std::vector<int> items;
  items.reserve(real.size());
  for (int j : real) items.push_back(unallocated_[j - 1]);
  for (auto it = real.rbegin(); it != real.rend(); ++it) {
    unallocated_.erase(unallocated_.begin() + (*it - 1));
  }
  auto pos = std::find(active_.begin(), active_.end(), agent);
  if (pos == active_.end()) {
    throw InternalError("granting a bundle to inactive agent " +
                        std::to_string(agent));
  }
  active_.erase(pos);
  bundles_[agent] = items;
  event.agent = agent;
  event.items = items;
  trace_.push_back(std::move(event));
  return items;
}

std::vector<int> ReductionWindow(ReductionRule rule, int k) {
  const int r = static_cast<int>(rule);
  if (r == 0) return {1};
  // R_r covers positions r*k - (r-1) .. r*k + 1.
  std::vector<int> window;
  for (int j = r * k - (r - 1); j <= r * k + 1; ++j) window.push_back(j);
  return window;
}

std::optional<Grant> TryReduction(AllocatorState& state, ReductionRule rule,
                                  const AllocatorOptions& options) {
  const int k = state.active_count();
  if (k == 0) return std::nullopt;
  const std::vector<int> window = ReductionWindow(rule, k);
  if (auto agent = state.FirstSatisfied(window)) {
    TraceEvent event;
    event.round = k;
    event.kind = EventKind::kReduction;
    event.rule = rule;
    return Grant{*agent, state.Grant(*agent, window, std::move(event))};
  }
  if (options.check_invariants) CheckReductionBound(state, rule);
  return std::nullopt;
}

void CheckReductionBound(AllocatorState& state, ReductionRule rule) {
  const int r = static_cast<int>(rule);
  const int k = state.active_count();
  const auto& u = state.unallocated();
  const int first = r * k + 1;
  for (int agent : state.active()) {
    const Rational bound = state.target(agent) / (r + 1);
    // Values are non-increasing along U, so the first covered item decides.
    if (first <= static_cast<int>(u.size())) {
      state.CountBoundCheck();
      if (state.values().value(agent, u[first - 1]) >= bound) {
        throw InternalError(std::string(RuleName(rule)) +
                            " inapplicable but agent " +
                            std::to_string(agent) + " values u_" +
                            std::to_string(first) + " at or above " +
                            FormatRational(bound));
      }
    }
  }
}

// Round with k active agents:
//  stage 1 if some agent is satisfied by {u_1, u_k+1}: try every reduction,
//    else give {u_1, u_h} for the largest workable h;
//  stage 2 if some agent is satisfied by {u_1, u_k+1, u_2k+1}: try R2, else
//    give {u_1, u_h, u_max(h+1, 2k+1)} for the largest workable h;
//  stage 3 otherwise: try R3, else bag-fill {u_1, u_k+1, u_2k+1} with
//    u_3k+1, u_3k+2, ... until some agent is satisfied.
// A reduction that fires ends the round; the gates are re-evaluated with the
// new k next round.
RoundResult RunRound(AllocatorState& state, const AllocatorOptions& options) {
  const int k = state.active_count();
  if (k == 0) throw InternalError("round started with no active agents");
  const int size = static_cast<int>(state.unallocated().size());

  TraceEvent event;
  event.round = k;

  const int pair_gate[] = {1, k + 1};
  const int triple_gate[] = {1, k + 1, 2 * k + 1};
  if (state.FirstSatisfied(pair_gate)) {
    if (TryRules(state, kAllRules, options)) return RoundResult::kReduction;
    for (int h = size; h >= 2; --h) {
      const int bundle[] = {1, h};
      if (auto agent = state.FirstSatisfied(bundle)) {
        event.kind = EventKind::kStage1;
        event.h = h;
        state.Grant(*agent, bundle, std::move(event));
        return RoundResult::kAllocated;
      }
    }
    throw InternalError("stage 1 gate held but no pair qualifies");
  }

  if (state.FirstSatisfied(triple_gate)) {
    const ReductionRule r2[] = {ReductionRule::kR2};
    if (TryRules(state, r2, options)) return RoundResult::kReduction;
    for (int h = size; h >= 2; --h) {
      const int t = std::max(h + 1, 2 * k + 1);
      const int bundle[] = {1, h, t};
      if (auto agent = state.FirstSatisfied(bundle)) {
        event.kind = EventKind::kStage2;
        event.h = h;
        event.t = t;
        state.Grant(*agent, bundle, std::move(event));
        return RoundResult::kAllocated;
      }
    }
    throw InternalError("stage 2 gate held but no triple qualifies");
  }

  const ReductionRule r3[] = {ReductionRule::kR3};
  if (TryRules(state, r3, options)) return RoundResult::kReduction;
  std::vector<int> bundle = {1, k + 1, 2 * k + 1};
  std::optional<int> agent = state.FirstSatisfied(bundle);
  for (int j = 3 * k + 1; j <= size && !agent; ++j) {
    bundle.push_back(j);
    agent = state.FirstSatisfied(bundle);
  }
  if (!agent) {
    event.kind = EventKind::kFail;
    state.Log(std::move(event));
    return RoundResult::kFailed;
  }
  event.kind = EventKind::kStage3;
  state.Grant(*agent, bundle, std::move(event));
  return RoundResult::kAllocated;
}

SolveOutcome RunAlg(const OrderedInstance& ordered,
                    const ThresholdVector& alpha,
                    const AllocatorOptions& options) {
  alpha.CheckSize(ordered.base.num_agents());
  // Fewer than 2n items needs no explicit padding: positions past |U| already
  // read as zero and are never allocated.
  AllocatorState state(ordered.base, alpha);
  bool failed = false;
  while (state.active_count() > 0 && !failed) {
    failed = RunRound(state, options) == RoundResult::kFailed;
  }

  SolveOutcome outcome;
  outcome.allocation.bundles = state.bundles();
  outcome.allocation.unallocated = state.unallocated();
  for (const auto& [agent, items] : state.bundles()) {
    outcome.satisfied.push_back(agent);
  }
  outcome.allocation.satisfied = outcome.satisfied;
  outcome.failed_agents = state.active();
  outcome.trace = state.trace();
  outcome.reductions = static_cast<int>(
      std::count_if(outcome.trace.begin(), outcome.trace.end(),
                    [](const TraceEvent& e) {
                      return e.kind == EventKind::kReduction;
                    }));
  outcome.bound_checks = state.bound_checks();
  outcome.ordered_allocation = outcome.allocation;
  return outcome;
}

SolveOutcome Solve(const Instance& instance, const ThresholdVector& alpha,
                   const AllocatorOptions& options) {
  alpha.CheckSize(instance.num_agents());
  const OrderedInstance ordered = OrderInstance(instance);
  SolveOutcome outcome = RunAlg(ordered, alpha, options);
  outcome.allocation = LiftAllocation(outcome.ordered_allocation, ordered);
  return outcome;
}

}  // namespace mmsalloc
