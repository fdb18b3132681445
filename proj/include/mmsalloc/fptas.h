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

#ifndef MMSALLOC_FPTAS_H_
#define MMSALLOC_FPTAS_H_

#include <optional>
#include <vector>

#include "mmsalloc/allocator.h"
#include "mmsalloc/instance.h"
#include "mmsalloc/rational.h"

namespace mmsalloc {

struct FptasConfig {
  Rational epsilon{1, 10};
  // Defaults to IterationBound(n, epsilon).
  std::optional<int> max_iterations;
};

struct FptasOutcome {
  Allocation allocation;  // over original items
  ThresholdVector final_alpha;
  int iterations = 0;
  // Agents left without a bundle in each failed run, in order.
  std::vector<std::vector<int>> per_iteration_failures;
  // Threshold vector used by each run, in order.
  std::vector<ThresholdVector> alpha_history;
  SolveOutcome last_run;
};

// n * (ceil(ln 2 / epsilon) + 1). Starting from TPS_i <= 2 MMS_i, agent i's
// threshold drops below MMS_i after ceil(ln 2 / epsilon) cuts by (1 - epsilon),
// and every failed run cuts at least one agent.
int IterationBound(int num_agents, const Rational& epsilon);

// Throws DomainError unless 0 < epsilon <= 1/2 and the cap is >= 1.
void ValidateFptasConfig(const FptasConfig& config);

// Threshold descent: start at alpha_i = TPS_i, rerun the allocator from
// scratch, and multiply the threshold of every agent it could not serve by
// (1 - epsilon) until a run serves everyone. The result is a
// (7/9)(1 - epsilon)-MMS allocation. Exceeding the iteration cap throws
// InternalError.
FptasOutcome RunFptas(const Instance& instance, const FptasConfig& config,
                      const AllocatorOptions& options = {});

}  // namespace mmsalloc

#endif  // MMSALLOC_FPTAS_H_
