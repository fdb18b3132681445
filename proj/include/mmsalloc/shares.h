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

#ifndef MMSALLOC_SHARES_H_
#define MMSALLOC_SHARES_H_

#include <optional>
#include <span>
#include <vector>

#include "mmsalloc/instance.h"
#include "mmsalloc/rational.h"

namespace mmsalloc {

// Truncated proportional share: the beta with
//   n * beta = sum_e min(v(e), beta).
// Found exactly by trying every truncation count t in [0, min(m, n-1)]: the
// t largest items are capped at beta and beta = (rest of the total) / (n - t).
// Throws DomainError when num_agents < 1.
Rational TruncatedProportionalShare(std::span<const Rational> values,
                                    int num_agents);

// Size limits for the brute-force maximin share oracle. Instances above them
// are rejected with CapacityError, never approximated.
struct OracleLimits {
  int max_items = 16;
  int max_agents = 5;
};

struct MmsResult {
  Rational value;
  // num_agents bundles of indices into the input sequence; every bundle is
  // worth at least `value`.
  std::vector<std::vector<int>> partition;
};

// Exact maximin share of one agent's values split into num_agents bundles.
MmsResult ExactMaximinShare(std::span<const Rational> values, int num_agents,
                            const OracleLimits& limits = {});

// TPS >= MMS >= n/(2n-1) * TPS, compared exactly.
bool SandwichHolds(std::span<const Rational> values, int num_agents,
                   const OracleLimits& limits = {});

struct ShareResult {
  int agent = 0;
  Rational tps;
  std::optional<Rational> mms;
  std::optional<std::vector<std::vector<int>>> feasible_partition;
};

ShareResult ComputeShares(const Instance& instance, int agent,
                          bool with_oracle, const OracleLimits& limits = {});

// Exact MMS for every agent. Propagates CapacityError.
ThresholdVector OracleThresholds(const Instance& instance,
                                 const OracleLimits& limits = {});
ThresholdVector TpsThresholds(const Instance& instance);

// Is there an injective f from T into X with rank(f(u)) <= rank(u)? Both
// sequences must be strictly increasing (DomainError otherwise). Matching the
// i-th smallest of each side is optimal because every u accepts a prefix of X.
bool IsDominanceBundle(std::span<const int> t_ranks,
                       std::span<const int> x_ranks);

enum class ItemClass { kPebble, kIce, kWater };

const char* ItemClassName(ItemClass c);

// pebble: value >= 2/9 alpha; ice: 4/27 alpha <= value < 2/9 alpha; water
// below that. Throws DomainError unless alpha > 0.
ItemClass ClassifyItem(const Rational& value, const Rational& alpha);

}  // namespace mmsalloc

#endif  // MMSALLOC_SHARES_H_
