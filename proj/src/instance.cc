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

#include "mmsalloc/instance.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "mmsalloc/errors.h"

namespace mmsalloc {

Instance::Instance(int num_agents, int num_items,
                   std::vector<std::vector<Rational>> valuations)
    : num_agents_(num_agents), num_items_(num_items) {
  if (num_agents < 1) throw DomainError("instance needs at least one agent");
  if (num_items < 0) throw DomainError("negative item count");
  if (static_cast<int>(valuations.size()) != num_agents) {
    throw StructuralError("expected " + std::to_string(num_agents) +
                          " valuation rows, got " +
                          std::to_string(valuations.size()));
  }
  values_.reserve(static_cast<size_t>(num_agents) * num_items);
  for (int i = 0; i < num_agents; ++i) {
    auto& row = valuations[i];
    if (static_cast<int>(row.size()) != num_items) {
      throw StructuralError("row " + std::to_string(i) + " has " +
                            std::to_string(row.size()) + " entries, expected " +
                            std::to_string(num_items));
    }
    for (auto& v : row) {
      v.canonicalize();
      if (sgn(v) < 0) {
        throw DomainError("negative valuation in row " + std::to_string(i));
      }
      values_.push_back(std::move(v));
    }
  }
}

namespace {

int RowLength(const std::vector<std::vector<Rational>>& rows) {
  return rows.empty() ? 0 : static_cast<int>(rows.front().size());
}

}  // namespace

Instance::Instance(std::vector<std::vector<Rational>> valuations)
    : Instance(Shaped{static_cast<int>(valuations.size()),
                      RowLength(valuations), &valuations}) {}

Instance::Instance(Shaped shaped)
    : Instance(shaped.num_agents, shaped.num_items,
               std::move(*shaped.valuations)) {}

Rational Instance::BundleValue(int agent, std::span<const int> items) const {
  Rational total = 0;
  for (int item : items) total += value(agent, item);
  return total;
}

Rational Instance::TotalValue(int agent) const {
  Rational total = 0;
  for (const auto& v : row(agent)) total += v;
  return total;
}

std::vector<std::vector<Rational>> Instance::Rows() const {
  std::vector<std::vector<Rational>> rows;
  rows.reserve(num_agents_);
  for (int i = 0; i < num_agents_; ++i) {
    auto r = row(i);
    rows.emplace_back(r.begin(), r.end());
  }
  return rows;
}

Allocation Allocation::Unallocated(int num_items) {
  Allocation allocation;
  allocation.unallocated.resize(num_items);
  std::iota(allocation.unallocated.begin(), allocation.unallocated.end(), 0);
  return allocation;
}

void ValidateAllocation(const Allocation& allocation, int num_agents,
                        int num_items) {
  std::vector<int> owner(num_items, -2);
  auto claim = [&](int item, int who) {
    if (item < 0 || item >= num_items) {
      throw StructuralError("item index " + std::to_string(item) +
                            " out of range");
    }
    if (owner[item] != -2) {
      throw StructuralError("item " + std::to_string(item) +
                            " appears more than once");
    }
    owner[item] = who;
  };
  for (const auto& [agent, items] : allocation.bundles) {
    if (agent < 0 || agent >= num_agents) {
      throw StructuralError("unknown agent " + std::to_string(agent));
    }
    for (int item : items) claim(item, agent);
  }
  for (int item : allocation.unallocated) claim(item, -1);
  for (int item = 0; item < num_items; ++item) {
    if (owner[item] == -2) {
      throw StructuralError("item " + std::to_string(item) +
                            " is neither allocated nor unallocated");
    }
  }
  for (int agent : allocation.satisfied) {
    if (!allocation.bundles.contains(agent)) {
      throw StructuralError("satisfied agent " + std::to_string(agent) +
                            " holds no bundle");
    }
  }
}

ThresholdVector::ThresholdVector(std::vector<Rational> alpha)
    : alpha_(std::move(alpha)) {
  for (auto& a : alpha_) {
    a.canonicalize();
    if (sgn(a) < 0) throw DomainError("negative threshold");
  }
}

void ThresholdVector::Scale(int agent, const Rational& factor) {
  if (sgn(factor) < 0) throw DomainError("negative threshold factor");
  alpha_[agent] *= factor;
}

void ThresholdVector::CheckSize(int num_agents) const {
  if (static_cast<int>(alpha_.size()) != num_agents) {
    throw DomainError("threshold vector has " + std::to_string(alpha_.size()) +
                      " entries for " + std::to_string(num_agents) +
                      " agents");
  }
}

OrderedInstance OrderInstance(const Instance& instance) {
  const int n = instance.num_agents();
  const int m = instance.num_items();
  std::vector<std::vector<Rational>> rows(n);
  std::vector<std::vector<int>> item_at(n), rank_of(n);
  for (int i = 0; i < n; ++i) {
    auto& order = item_at[i];
    order.resize(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return instance.value(i, a) > instance.value(i, b);
    });
    rank_of[i].resize(m);
    rows[i].reserve(m);
    for (int r = 0; r < m; ++r) {
      rank_of[i][order[r]] = r;
      rows[i].push_back(instance.value(i, order[r]));
    }
  }
  return {Instance(n, m, std::move(rows)), std::move(item_at),
          std::move(rank_of)};
}

Allocation LiftAllocation(const Allocation& ordered_allocation,
                          const OrderedInstance& ordered) {
  const int n = ordered.base.num_agents();
  const int m = ordered.base.num_items();
  std::vector<int> rank_owner(m, -1);
  for (const auto& [agent, ranks] : ordered_allocation.bundles) {
    if (agent < 0 || agent >= n) {
      throw StructuralError("rank owned by unknown agent " +
                            std::to_string(agent));
    }
    for (int r : ranks) {
      if (r < 0 || r >= m) {
        throw StructuralError("rank " + std::to_string(r) + " out of range");
      }
      if (rank_owner[r] != -1) {
        throw StructuralError("rank " + std::to_string(r) +
                              " owned more than once");
      }
      rank_owner[r] = agent;
    }
  }

  Allocation lifted;
  for (const auto& [agent, ranks] : ordered_allocation.bundles) {
    lifted.bundles[agent];  // agents holding an empty bundle keep one
  }
  std::vector<bool> taken(m, false);
  // Each agent's preference list is her item_at row; a cursor skips taken
  // items, so the sweep is O(n*m) overall.
  std::vector<int> cursor(n, 0);
  for (int r = 0; r < m; ++r) {
    const int agent = rank_owner[r];
    if (agent < 0) continue;
    const auto& prefs = ordered.item_at[agent];
    int& c = cursor[agent];
    while (taken[prefs[c]]) ++c;
    taken[prefs[c]] = true;
    lifted.bundles[agent].push_back(prefs[c]);
  }
  for (auto& [agent, items] : lifted.bundles) {
    std::sort(items.begin(), items.end());
  }
  for (int item = 0; item < m; ++item) {
    if (!taken[item]) lifted.unallocated.push_back(item);
  }
  lifted.satisfied = ordered_allocation.satisfied;
  return lifted;
}

Instance ScaleAgent(const Instance& instance, int agent,
                    const Rational& factor) {
  if (sgn(factor) <= 0) throw DomainError("scale factor must be positive");
  if (agent < 0 || agent >= instance.num_agents()) {
    throw DomainError("agent index out of range");
  }
  auto rows = instance.Rows();
  for (auto& v : rows[agent]) v *= factor;
  return Instance(instance.num_agents(), instance.num_items(), std::move(rows));
}

}  // namespace mmsalloc
