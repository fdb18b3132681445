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

#include "mmsalloc/fptas.h"

#include <cmath>
#include <string>

#include "mmsalloc/errors.h"
#include "mmsalloc/shares.h"

namespace mmsalloc {

int IterationBound(int num_agents, const Rational& epsilon) {
  // ln 2 / epsilon is irrational for rational epsilon, so the double ceiling
  // cannot land on the wrong side of an integer.
  const double steps = std::ceil(std::log(2.0) / ToDouble(epsilon));
  return num_agents * (static_cast<int>(steps) + 1);
}

void ValidateFptasConfig(const FptasConfig& config) {
  if (sgn(config.epsilon) <= 0 || config.epsilon > Rational(1, 2)) {
    throw DomainError("epsilon must lie in (0, 1/2], got " +
                      FormatRational(config.epsilon));
  }
  if (config.max_iterations && *config.max_iterations < 1) {
    throw DomainError("iteration cap must be at least 1");
  }
}

FptasOutcome RunFptas(const Instance& instance, const FptasConfig& config,
                      const AllocatorOptions& options) {
  ValidateFptasConfig(config);
  const int cap = config.max_iterations.value_or(
      IterationBound(instance.num_agents(), config.epsilon));
  const Rational shrink = 1 - config.epsilon;

  const OrderedInstance ordered = OrderInstance(instance);
  ThresholdVector alpha = TpsThresholds(ordered.base);

  FptasOutcome outcome;
  while (true) {
    if (outcome.iterations == cap) {
      throw InternalError("threshold descent exceeded " + std::to_string(cap) +
                          " iterations");
    }
    ++outcome.iterations;
    outcome.alpha_history.push_back(alpha);
    SolveOutcome run = RunAlg(ordered, alpha, options);
    if (run.succeeded()) {
      outcome.allocation = LiftAllocation(run.ordered_allocation, ordered);
      run.allocation = outcome.allocation;
      outcome.last_run = std::move(run);
      outcome.final_alpha = alpha;
      return outcome;
    }
    for (int agent : run.failed_agents) alpha.Scale(agent, shrink);
    outcome.per_iteration_failures.push_back(run.failed_agents);
  }
}

}  // namespace mmsalloc
