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

#include "mmsalloc/shares.h"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>

#include "mmsalloc/errors.h"

namespace mmsalloc {
namespace {

// Decides whether integer-weighted items can be split into `parts` bundles
// each worth at least tau. Items of equal weight are interchangeable, so the
// state is a sub-multiset (one digit per distinct weight). For every state the
// table keeps the lexicographically best (closed bundles, open bundle weight)
// over all orders of inserting its items, where a bundle closes as soon as it
// reaches tau. Some order closes a bundle for each bundle of any valid split,
// and a state that is ahead on closed bundles stays ahead, so the best count
// at the full multiset is the largest number of disjoint bundles >= tau.
template <typename Int>
class CoverSolver {
 public:
  CoverSolver(std::span<const Int> weights, int parts) : parts_(parts) {
    std::vector<int> order(weights.size());
    for (size_t j = 0; j < order.size(); ++j) order[j] = static_cast<int>(j);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return weights[a] < weights[b]; });
    for (int j : order) {
      if (kinds_.empty() || kinds_.back().weight != weights[j]) {
        kinds_.push_back({weights[j], {}, 0});
      }
      kinds_.back().items.push_back(j);
    }
    size_t states = 1;
    for (auto& kind : kinds_) {
      kind.stride = states;
      states *= kind.items.size() + 1;
    }
    closed_.resize(states);
    open_.resize(states);
    last_.resize(states);
    total_ = Int(0);
    for (const Int& w : weights) total_ += w;
  }

  const Int& total() const { return total_; }

  // Distinct sub-multiset sums; the maximin share is one of them.
  std::vector<Int> BundleSums() const {
    std::vector<Int> sums = {Int(0)};
    for (const auto& kind : kinds_) {
      std::vector<Int> next;
      for (const Int& s : sums) {
        Int acc = s;
        for (size_t c = 0; c <= kind.items.size(); ++c) {
          next.push_back(acc);
          acc += kind.weight;
        }
      }
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      sums = std::move(next);
    }
    return sums;
  }

  bool Feasible(const Int& tau) {
    tau_ = tau;
    if (tau <= 0) return true;
    std::vector<size_t> digits(kinds_.size(), 0);
    closed_[0] = 0;
    open_[0] = Int(0);
    for (size_t s = 1; s < closed_.size(); ++s) {
      for (size_t d = 0;; ++d) {  // odometer increment
        if (++digits[d] <= kinds_[d].items.size()) break;
        digits[d] = 0;
      }
      bool first = true;
      for (size_t d = 0; d < kinds_.size(); ++d) {
        if (digits[d] == 0) continue;
        const size_t prev = s - kinds_[d].stride;
        int closed = closed_[prev];
        Int open = open_[prev] + kinds_[d].weight;
        if (open >= tau) {
          ++closed;
          open = Int(0);
        }
        if (first || closed > closed_[s] ||
            (closed == closed_[s] && open > open_[s])) {
          closed_[s] = closed;
          open_[s] = std::move(open);
          last_[s] = static_cast<int>(d);
          first = false;
        }
      }
    }
    return closed_.back() >= parts_;
  }

  // A split for the last tau passed to Feasible, which must have succeeded.
  std::vector<std::vector<int>> Witness() const {
    std::vector<std::vector<int>> bundles(parts_);
    std::vector<size_t> used(kinds_.size(), 0);
    if (tau_ <= 0) {
      size_t next = 0;
      for (const auto& kind : kinds_) {
        for (int item : kind.items) bundles[next++ % parts_].push_back(item);
      }
      return bundles;
    }
    // Replay the best insertion order forwards.
    std::vector<int> sequence;
    for (size_t s = closed_.size() - 1; s != 0; s -= kinds_[last_[s]].stride) {
      sequence.push_back(last_[s]);
    }
    std::reverse(sequence.begin(), sequence.end());
    int bundle = 0;
    Int open = Int(0);
    for (int d : sequence) {
      bundles[bundle].push_back(kinds_[d].items[used[d]++]);
      open += kinds_[d].weight;
      if (open >= tau_ && bundle + 1 < parts_) {
        ++bundle;
        open = Int(0);
      }
    }
    for (auto& b : bundles) std::sort(b.begin(), b.end());
    return bundles;
  }

 private:
  struct Kind {
    Int weight;
    std::vector<int> items;
    size_t stride;
  };

  int parts_;
  std::vector<Kind> kinds_;
  std::vector<int> closed_;
  std::vector<Int> open_;
  std::vector<int> last_;
  Int total_;
  Int tau_{};
};

template <typename Int>
MmsResult SolveScaled(const std::vector<Int>& weights, int parts,
                      const mpz_class& scale) {
  CoverSolver<Int> solver(weights, parts);
  std::vector<Int> candidates;
  for (const Int& s : solver.BundleSums()) {
    if (s * parts <= solver.total()) candidates.push_back(s);
  }
  size_t lo = 0;  // candidates[0] == 0 is always feasible
  size_t hi = candidates.size();
  while (hi - lo > 1) {
    const size_t mid = lo + (hi - lo) / 2;
    if (solver.Feasible(candidates[mid])) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (!solver.Feasible(candidates[lo])) {
    throw InternalError("maximin share oracle lost feasibility of its optimum");
  }
  MmsResult result;
  if constexpr (std::is_same_v<Int, mpz_class>) {
    result.value = Rational(candidates[lo], scale);
  } else {
    result.value =
        Rational(mpz_class(static_cast<long>(candidates[lo])), scale);
  }
  result.value.canonicalize();
  result.partition = solver.Witness();
  return result;
}

}  // namespace

Rational TruncatedProportionalShare(std::span<const Rational> values,
                                    int num_agents) {
  if (num_agents < 1) throw DomainError("TPS needs at least one agent");
  std::vector<Rational> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const int m = static_cast<int>(sorted.size());
  Rational rest = 0;
  for (const auto& v : sorted) rest += v;
  std::optional<Rational> beta;
  // `rest` is the total minus the t largest values.
  for (int t = 0; t <= std::min(m, num_agents - 1); ++t) {
    if (t > 0) rest -= sorted[t - 1];
    Rational candidate = rest / (num_agents - t);
    const bool upper_ok = t == 0 || sorted[t - 1] >= candidate;
    const bool lower_ok = t == m || candidate >= sorted[t];
    if (!upper_ok || !lower_ok) continue;
    if (beta && *beta != candidate) {
      throw InternalError("TPS fixed point is not unique");
    }
    beta = candidate;
  }
  if (!beta) throw InternalError("no consistent TPS truncation count");
  return *beta;
}

MmsResult ExactMaximinShare(std::span<const Rational> values, int num_agents,
                            const OracleLimits& limits) {
  if (num_agents < 1) throw DomainError("MMS needs at least one agent");
  const int m = static_cast<int>(values.size());
  if (m > limits.max_items || num_agents > limits.max_agents) {
    throw CapacityError("oracle limited to " +
                        std::to_string(limits.max_items) + " items and " +
                        std::to_string(limits.max_agents) + " agents, got " +
                        std::to_string(m) + " and " +
                        std::to_string(num_agents));
  }
  mpz_class scale = 1;
  for (const auto& v : values) {
    mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), v.get_den_mpz_t());
  }
  std::vector<mpz_class> scaled;
  mpz_class total = 0;
  for (const auto& v : values) {
    Rational s = v * scale;
    s.canonicalize();
    scaled.push_back(s.get_num());
    total += scaled.back();
  }
  // tau * parts must also fit.
  const mpz_class limit = mpz_class(std::numeric_limits<int64_t>::max() / 64);
  if (total * num_agents < limit) {
    std::vector<int64_t> small;
    small.reserve(m);
    for (const auto& z : scaled) small.push_back(z.get_si());
    return SolveScaled<int64_t>(small, num_agents, scale);
  }
  return SolveScaled<mpz_class>(scaled, num_agents, scale);
}

bool SandwichHolds(std::span<const Rational> values, int num_agents,
                   const OracleLimits& limits) {
  const Rational tps = TruncatedProportionalShare(values, num_agents);
  const Rational mms = ExactMaximinShare(values, num_agents, limits).value;
  const Rational lower = Rational(num_agents, 2 * num_agents - 1) * tps;
  return tps >= mms && mms >= lower;
}

ShareResult ComputeShares(const Instance& instance, int agent,
                          bool with_oracle, const OracleLimits& limits) {
  if (agent < 0 || agent >= instance.num_agents()) {
    throw DomainError("agent index out of range");
  }
  ShareResult result;
  result.agent = agent;
  result.tps =
      TruncatedProportionalShare(instance.row(agent), instance.num_agents());
  if (with_oracle) {
    MmsResult mms =
        ExactMaximinShare(instance.row(agent), instance.num_agents(), limits);
    result.mms = std::move(mms.value);
    result.feasible_partition = std::move(mms.partition);
  }
  return result;
}

ThresholdVector OracleThresholds(const Instance& instance,
                                 const OracleLimits& limits) {
  std::vector<Rational> alpha;
  for (int i = 0; i < instance.num_agents(); ++i) {
    alpha.push_back(
        ExactMaximinShare(instance.row(i), instance.num_agents(), limits)
            .value);
  }
  return ThresholdVector(std::move(alpha));
}

ThresholdVector TpsThresholds(const Instance& instance) {
  std::vector<Rational> alpha;
  for (int i = 0; i < instance.num_agents(); ++i) {
    alpha.push_back(
        TruncatedProportionalShare(instance.row(i), instance.num_agents()));
  }
  return ThresholdVector(std::move(alpha));
}

bool IsDominanceBundle(std::span<const int> t_ranks,
                       std::span<const int> x_ranks) {
  auto strictly_increasing = [](std::span<const int> s) {
    return std::adjacent_find(s.begin(), s.end(), std::greater_equal<>()) ==
           s.end();
  };
  if (!strictly_increasing(t_ranks) || !strictly_increasing(x_ranks)) {
    throw DomainError("dominance check needs strictly increasing ranks");
  }
  if (x_ranks.size() < t_ranks.size()) return false;
  for (size_t i = 0; i < t_ranks.size(); ++i) {
    if (x_ranks[i] > t_ranks[i]) return false;
  }
  return true;
}

const char* ItemClassName(ItemClass c) {
  switch (c) {
    case ItemClass::kPebble:
      return "pebble";
    case ItemClass::kIce:
      return "ice";
    case ItemClass::kWater:
      return "water";
  }
  return "?";
}

ItemClass ClassifyItem(const Rational& value, const Rational& alpha) {
  if (sgn(alpha) <= 0) throw DomainError("classification needs alpha > 0");
  if (value >= Rational(2, 9) * alpha) return ItemClass::kPebble;
  if (value >= Rational(4, 27) * alpha) return ItemClass::kIce;
  return ItemClass::kWater;
}

}  // namespace mmsalloc
