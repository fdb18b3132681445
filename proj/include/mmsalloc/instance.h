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

#ifndef MMSALLOC_INSTANCE_H_
#define MMSALLOC_INSTANCE_H_

#include <map>
#include <span>
#include <vector>

#include "mmsalloc/rational.h"

namespace mmsalloc {

// n agents, m goods, additive non-negative valuations stored row-major.
class Instance {
 public:
  // Throws StructuralError if the matrix is not n x m and DomainError on a
  // negative entry or num_agents < 1.
  Instance(int num_agents, int num_items,
           std::vector<std::vector<Rational>> valuations);

  // Shape is taken from the rows; requires at least one row.
  explicit Instance(std::vector<std::vector<Rational>> valuations);

  int num_agents() const { return num_agents_; }
  int num_items() const { return num_items_; }

  const Rational& value(int agent, int item) const {
    return values_[static_cast<size_t>(agent) * num_items_ + item];
  }
  std::span<const Rational> row(int agent) const {
    return {values_.data() + static_cast<size_t>(agent) * num_items_,
            static_cast<size_t>(num_items_)};
  }

  Rational BundleValue(int agent, std::span<const int> items) const;
  Rational TotalValue(int agent) const;

  std::vector<std::vector<Rational>> Rows() const;

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  // Captures the shape before the rows are moved into the main constructor.
  struct Shaped {
    int num_agents;
    int num_items;
    std::vector<std::vector<Rational>>* valuations;
  };
  explicit Instance(Shaped shaped);

  int num_agents_;
  int num_items_;
  std::vector<Rational> values_;
};

// An instance whose columns are sorted so that every agent values rank 0 at
// least as much as rank 1, and so on. `item_at[i][r]` is the original item
// that agent i sees at rank r; `rank_of[i]` is its inverse.
struct OrderedInstance {
  Instance base;
  std::vector<std::vector<int>> item_at;
  std::vector<std::vector<int>> rank_of;
};

// A (possibly partial) allocation. Agents without an entry in `bundles` hold
// nothing; an agent may hold an empty bundle.
struct Allocation {
  std::map<int, std::vector<int>> bundles;
  std::vector<int> unallocated;
  std::vector<int> satisfied;

  static Allocation Unallocated(int num_items);

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

// Throws StructuralError unless the bundles are disjoint, cover [m] together
// with `unallocated`, reference only known agents, and every satisfied agent
// holds a bundle.
void ValidateAllocation(const Allocation& allocation, int num_agents,
                        int num_items);

// Per-agent targets alpha_i >= 0.
class ThresholdVector {
 public:
  ThresholdVector() = default;
  explicit ThresholdVector(std::vector<Rational> alpha);

  size_t size() const { return alpha_.size(); }
  const Rational& operator[](int agent) const { return alpha_[agent]; }
  const std::vector<Rational>& values() const { return alpha_; }

  // Multiplies alpha_i by a non-negative factor.
  void Scale(int agent, const Rational& factor);

  // Throws DomainError when the length is not n.
  void CheckSize(int num_agents) const;

  friend bool operator==(const ThresholdVector&,
                         const ThresholdVector&) = default;

 private:
  std::vector<Rational> alpha_;
};

// Sorts each agent's row descending; ties keep the lower original index first.
OrderedInstance OrderInstance(const Instance& instance);

// Converts an allocation of ordered ranks into one of original items by the
// picking sweep: for rank r = 0, 1, ..., the owner of r takes her most valued
// remaining original item (lowest index on ties). Ranks owned by nobody are
// skipped; whatever is left after the sweep is unallocated. Each agent's
// lifted bundle is worth at least her ordered bundle. The satisfied set is
// carried over unchanged.
Allocation LiftAllocation(const Allocation& ordered_allocation,
                          const OrderedInstance& ordered);

// Multiplies agent i's row by factor > 0.
Instance ScaleAgent(const Instance& instance, int agent,
                    const Rational& factor);

}  // namespace mmsalloc

#endif  // MMSALLOC_INSTANCE_H_
