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

#ifndef MMSALLOC_ALLOCATOR_H_
#define MMSALLOC_ALLOCATOR_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "mmsalloc/instance.h"
#include "mmsalloc/io.h"
#include "mmsalloc/rational.h"

namespace mmsalloc {

// Reduction rules, with windows taken relative to the current number k of
// active agents:
//   R0: {u_1}
//   R1: {u_k, u_k+1}
//   R2: {u_2k-1, u_2k, u_2k+1}
//   R3: {u_3k-2, ..., u_3k+1}
enum class ReductionRule { kR0 = 0, kR1 = 1, kR2 = 2, kR3 = 3 };

const char* RuleName(ReductionRule rule);

enum class EventKind { kReduction, kStage1, kStage2, kStage3, kFail };

const char* EventName(EventKind kind);

struct TraceEvent {
  int round = 0;  // number of active agents when the round started
  EventKind kind = EventKind::kFail;
  std::optional<ReductionRule> rule;
  int agent = -1;
  std::vector<int> items;  // ranks of the ordered instance
  std::optional<int> h;    // 1-based positions in U
  std::optional<int> t;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

// {"round", "event", "rule", "agent", "items", "h", "t"}; absent optionals are
// omitted.
Json TraceEventToJson(const TraceEvent& event);

struct AllocatorOptions {
  // After every inapplicable reduction, assert the value bounds it implies on
  // the remaining items. Violations throw InternalError.
  bool check_invariants = false;
};

// The mutable state of one run: the unallocated ranks U (ascending rank, so
// descending value for every agent), the active agents A, and the bundles
// granted so far.
class AllocatorState {
 public:
  // `ordered` must be an ordered instance and must outlive the state.
  AllocatorState(const Instance& ordered, ThresholdVector alpha);

  const Instance& values() const { return *values_; }
  const ThresholdVector& alpha() const { return alpha_; }
  // 7/9 * alpha_i.
  const Rational& target(int agent) const { return targets_[agent]; }

  int active_count() const { return static_cast<int>(active_.size()); }
  const std::vector<int>& active() const { return active_; }
  const std::vector<int>& unallocated() const { return unallocated_; }
  const std::map<int, std::vector<int>>& bundles() const { return bundles_; }
  const std::vector<TraceEvent>& trace() const { return trace_; }
  int64_t bound_checks() const { return bound_checks_; }

  // Agent's value for u_j (1-based); zero beyond |U|.
  Rational PhantomItem(int agent, int j) const;
  Rational WindowValue(int agent, std::span<const int> positions) const;

  // Lowest-indexed active agent whose target is met by the window.
  std::optional<int> FirstSatisfied(std::span<const int> positions) const;

  // Gives the real items among `positions` to `agent`, deactivates her and
  // appends `event` (with agent and items filled in) to the trace.
  std::vector<int> Grant(int agent, std::span<const int> positions,
                         TraceEvent event);

  void Log(TraceEvent event) { trace_.push_back(std::move(event)); }
  void CountBoundCheck() { ++bound_checks_; }

 private:
  const Instance* values_;
  ThresholdVector alpha_;
  std::vector<Rational> targets_;
  std::vector<int> active_;
  std::vector<int> unallocated_;
  std::map<int, std::vector<int>> bundles_;
  std::vector<TraceEvent> trace_;
  int64_t bound_checks_ = 0;
};

// 1-based positions of the rule's window for k active agents.
std::vector<int> ReductionWindow(ReductionRule rule, int k);

struct Grant {
  int agent = -1;
  std::vector<int> items;
};

// Fires the rule if some active agent meets her target on its window.
std::optional<Grant> TryReduction(AllocatorState& state, ReductionRule rule,
                                  const AllocatorOptions& options = {});

// Throws InternalError unless every active agent values every item at
// position >= r*k+1 below target/(r+1). Valid right after `rule` was found
// inapplicable.
void CheckReductionBound(AllocatorState& state, ReductionRule rule);

enum class RoundResult { kReduction, kAllocated, kFailed };

// One round of the allocator; see the three stages in allocator.cc.
RoundResult RunRound(AllocatorState& state,
                     const AllocatorOptions& options = {});

struct SolveOutcome {
  Allocation allocation;          // over original items after Solve; ranks
                                  // after RunAlg
  Allocation ordered_allocation;  // always over ranks
  std::vector<int> satisfied;
  std::vector<int> failed_agents;
  std::vector<TraceEvent> trace;
  int reductions = 0;
  int64_t bound_checks = 0;

  bool succeeded() const { return failed_agents.empty(); }
};

// Runs rounds until every agent holds a bundle or a round fails. Agents with
// alpha_i <= MMS_i are guaranteed a bundle worth at least 7/9 alpha_i.
// Throws DomainError on a threshold vector of the wrong length.
SolveOutcome RunAlg(const OrderedInstance& ordered,
                    const ThresholdVector& alpha,
                    const AllocatorOptions& options = {});

// Orders the instance, runs the allocator and lifts the result back to the
// original items.
SolveOutcome Solve(const Instance& instance, const ThresholdVector& alpha,
                   const AllocatorOptions& options = {});

}  // namespace mmsalloc

#endif  // MMSALLOC_ALLOCATOR_H_
