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

#ifndef MMSALLOC_HARNESS_H_
#define MMSALLOC_HARNESS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mmsalloc/allocator.h"
#include "mmsalloc/instance.h"
#include "mmsalloc/io.h"
#include "mmsalloc/rational.h"
#include "mmsalloc/shares.h"

namespace mmsalloc {

enum class Family { kUniform, kBimodal, kTightness, kIdentical };

const char* FamilyName(Family family);
// Throws DomainError on an unknown name.
Family ParseFamily(const std::string& name);

struct GeneratorSpec {
  Family family = Family::kUniform;
  int n = 2;
  int m = 4;
  uint64_t seed = 0;
  // uniform / bimodal draw values a/d with 0 <= a <= max_numerator and
  // 1 <= d <= max_denominator.
  int max_numerator = 60;
  int max_denominator = 6;
  // tightness: number of equal water items sharing a total of 4/9. Must be
  // even so that both 7/9 items can be topped up to exactly 1.
  int water_count = 4;
  // identical: the common value of every item.
  Rational identical_value = 1;
};

// Throws DomainError on invalid sizes or family parameters. The tightness
// family requires n = 3 and ignores m.
void ValidateGeneratorSpec(const GeneratorSpec& spec);

// Deterministic in the spec, seed included.
Instance GenerateInstance(const GeneratorSpec& spec);

struct AgentReport {
  int agent = 0;
  Rational value;
  Rational alpha;
  std::optional<Rational> ratio_to_alpha;  // absent when alpha = 0
  std::optional<Rational> mms;
  std::optional<Rational> ratio_to_mms;  // absent when MMS = 0 or no oracle
  int pebbles = 0;
  int ice = 0;
  int water = 0;
};

struct VerifyReport {
  std::vector<AgentReport> agents;
  std::optional<Rational> min_ratio_to_alpha;
  std::optional<Rational> min_ratio_to_mms;

  // The MMS ratio when the oracle ran, else the threshold ratio.
  std::optional<Rational> min_ratio() const {
    return min_ratio_to_mms ? min_ratio_to_mms : min_ratio_to_alpha;
  }
};

// Exact per-agent values and ratios. Bundles are classified into
// pebble/ice/water against alpha_i (skipped when alpha_i = 0). Throws
// StructuralError on an invalid allocation; oracle CapacityError propagates.
VerifyReport VerifyAllocation(const Instance& instance,
                              const Allocation& allocation,
                              const ThresholdVector& alpha, bool with_oracle,
                              const OracleLimits& limits = {});

Json VerifyReportToJson(const VerifyReport& report);

// The tight example family: three agents with identical values
// 7/9, 7/9, 1/3, 1/3, 1/3 followed by water_count items of 4/(9 water_count).
Instance TightnessInstance(int water_count);

struct CampaignConfig {
  std::vector<Family> families;
  struct Size {
    int n;
    int m;
  };
  std::vector<Size> sizes;
  std::vector<uint64_t> seeds;
  // Empty: run the allocator with alpha_i = exact MMS_i. Otherwise one
  // threshold-descent run per epsilon.
  std::vector<Rational> epsilon_grid;
  bool check_invariants = false;
  int max_numerator = 60;
  int max_denominator = 6;
  // The tightness family ignores `sizes` and runs once per water count.
  std::vector<int> water_counts = {4};
  int threads = 1;
  OracleLimits limits;
};

// {"families": [...], "sizes": [[n, m], ...], "seeds": [...] or
//  {"from": a, "count": c}, "epsilon_grid": ["1/2", ...],
//  "water_counts": [...], "check_invariants": bool, "threads": int,
//  "max_numerator": int, "max_denominator": int}
CampaignConfig CampaignConfigFromJson(const Json& json);

struct CampaignRow {
  Family family = Family::kUniform;
  int n = 0;
  int m = 0;
  uint64_t seed = 0;
  std::optional<Rational> epsilon;
  // Minimum of value/MMS_i over agents with MMS_i > 0; 1 when there are none.
  Rational min_ratio;
  int iterations = 1;
  // Agents below their guarantee: 7/9 MMS_i for the plain allocator,
  // (7/9 - epsilon) MMS_i for threshold descent.
  int failures = 0;
  int reductions_fired = 0;
  std::map<std::string, int> rule_firings;
  int64_t bound_checks = 0;
  // The generator spec reproduces the instance.
  GeneratorSpec spec;
  ThresholdVector alpha;
  Allocation allocation;
};

struct CampaignSummary {
  std::vector<CampaignRow> rows;
  int total_failures = 0;
  std::optional<Rational> min_ratio;
  std::map<std::string, int> rule_firings;
  std::map<int, int> iteration_histogram;
  int64_t bound_checks = 0;
};

// Runs every (family, size, seed[, epsilon]) combination. Instances run on
// `threads` workers; rows come back in configuration order.
CampaignSummary RunCampaign(const CampaignConfig& config);

// Header: family,n,m,seed,epsilon,min_ratio_num,min_ratio_den,iterations,
// failures,reductions_fired
std::string CampaignCsv(const CampaignSummary& summary);

}  // namespace mmsalloc

#endif  // MMSALLOC_HARNESS_H_
