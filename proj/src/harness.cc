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

#include "mmsalloc/harness.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "mmsalloc/errors.h"
#include "mmsalloc/fptas.h"

namespace mmsalloc {
namespace {

// Uniform integer in [lo, hi] by rejection, so the stream is identical across
// standard library implementations.
int64_t Draw(std::mt19937_64& rng, int64_t lo, int64_t hi) {
  const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
  const uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % span;
  uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return lo + static_cast<int64_t>(x % span);
}

Rational RandomValue(std::mt19937_64& rng, int64_t lo, int64_t hi,
                     int max_denominator) {
  const int64_t den = Draw(rng, 1, max_denominator);
  const int64_t num = Draw(rng, lo, hi);
  Rational v(mpz_class(static_cast<long>(num)),
             mpz_class(static_cast<long>(den)));
  v.canonicalize();
  return v;
}

struct Task {
  GeneratorSpec spec;
  std::optional<Rational> epsilon;
};

CampaignRow RunTask(const Task& task, const CampaignConfig& config) {
  const Instance instance = GenerateInstance(task.spec);
  const ThresholdVector mms = OracleThresholds(instance, config.limits);
  AllocatorOptions options;
  options.check_invariants = config.check_invariants;

  CampaignRow row;
  row.family = task.spec.family;
  row.n = instance.num_agents();
  row.m = instance.num_items();
  row.seed = task.spec.seed;
  row.epsilon = task.epsilon;
  row.spec = task.spec;

  Rational guarantee(7, 9);
  const SolveOutcome* run = nullptr;
  SolveOutcome plain;
  FptasOutcome descent;
  if (task.epsilon) {
    FptasConfig fptas;
    fptas.epsilon = *task.epsilon;
    descent = RunFptas(instance, fptas, options);
    row.iterations = descent.iterations;
    row.alpha = descent.final_alpha;
    row.allocation = descent.allocation;
    run = &descent.last_run;
    guarantee -= *task.epsilon;
  } else {
    plain = Solve(instance, mms, options);
    row.alpha = mms;
    row.allocation = plain.allocation;
    run = &plain;
  }
  row.reductions_fired = run->reductions;
  row.bound_checks = run->bound_checks;
  for (const auto& e : run->trace) {
    if (e.rule) ++row.rule_firings[RuleName(*e.rule)];
  }

  std::optional<Rational> min_ratio;
  for (int i = 0; i < row.n; ++i) {
    const auto it = row.allocation.bundles.find(i);
    const Rational value =
        it == row.allocation.bundles.end()
            ? Rational(0)
            : instance.BundleValue(i, it->second);
    if (value < guarantee * mms[i]) ++row.failures;
    if (sgn(mms[i]) > 0) {
      Rational ratio = value / mms[i];
      if (!min_ratio || ratio < *min_ratio) min_ratio = ratio;
    }
  }
  row.min_ratio = min_ratio.value_or(Rational(1));
  return row;
}

}  // namespace

const char* FamilyName(Family family) {
  switch (family) {
    case Family::kUniform:
      return "uniform";
    case Family::kBimodal:
      return "bimodal";
    case Family::kTightness:
      return "tightness";
    case Family::kIdentical:
      return "identical";
  }
  return "?";
}

Family ParseFamily(const std::string& name) {
  for (Family f : {Family::kUniform, Family::kBimodal, Family::kTightness,
                   Family::kIdentical}) {
    if (name == FamilyName(f)) return f;
  }
  throw DomainError("unknown instance family '" + name + "'");
}

void ValidateGeneratorSpec(const GeneratorSpec& spec) {
  if (spec.family == Family::kTightness) {
    if (spec.n != 3) throw DomainError("tightness family needs n = 3");
    if (spec.water_count < 4 || spec.water_count % 2 != 0) {
      throw DomainError("tightness family needs an even water_count >= 4");
    }
    return;
  }
  if (spec.n < 1 || spec.m < 1) throw DomainError("sizes must be positive");
  if (spec.family == Family::kIdentical) {
    if (sgn(spec.identical_value) < 0) {
      throw DomainError("identical value must be non-negative");
    }
    return;
  }
  if (spec.max_numerator < 1 || spec.max_denominator < 1) {
    throw DomainError("value range bounds must be positive");
  }
}

Instance TightnessInstance(int water_count) {
  GeneratorSpec spec;
  spec.family = Family::kTightness;
  spec.n = 3;
  spec.water_count = water_count;
  return GenerateInstance(spec);
}

Instance GenerateInstance(const GeneratorSpec& spec) {
  ValidateGeneratorSpec(spec);
  std::vector<std::vector<Rational>> rows;
  switch (spec.family) {
    case Family::kTightness: {
      std::vector<Rational> row = {Rational(7, 9), Rational(7, 9),
                                   Rational(1, 3), Rational(1, 3),
                                   Rational(1, 3)};
      Rational drop(4, 9 * spec.water_count);
      drop.canonicalize();
      for (int w = 0; w < spec.water_count; ++w) row.push_back(drop);
      rows.assign(3, row);
      break;
    }
    case Family::kIdentical:
      rows.assign(spec.n, std::vector<Rational>(spec.m, spec.identical_value));
      break;
    case Family::kUniform: {
      std::mt19937_64 rng(spec.seed);
      rows.resize(spec.n);
      for (auto& row : rows) {
        for (int j = 0; j < spec.m; ++j) {
          row.push_back(
              RandomValue(rng, 0, spec.max_numerator, spec.max_denominator));
        }
      }
      break;
    }
    case Family::kBimodal: {
      // Each value is large or small with equal odds.
      std::mt19937_64 rng(spec.seed);
      const int64_t top = spec.max_numerator;
      rows.resize(spec.n);
      for (auto& row : rows) {
        for (int j = 0; j < spec.m; ++j) {
          if (Draw(rng, 0, 1) == 1) {
            row.push_back(
                RandomValue(rng, (top + 1) / 2, top, spec.max_denominator));
          } else {
            row.push_back(RandomValue(rng, 0, std::max<int64_t>(1, top / 8),
                                      spec.max_denominator));
          }
        }
      }
      break;
    }
  }
  const int m = static_cast<int>(rows.front().size());
  const int n = static_cast<int>(rows.size());
  return Instance(n, m, std::move(rows));
}

VerifyReport VerifyAllocation(const Instance& instance,
                              const Allocation& allocation,
                              const ThresholdVector& alpha, bool with_oracle,
                              const OracleLimits& limits) {
  const int n = instance.num_agents();
  ValidateAllocation(allocation, n, instance.num_items());
  alpha.CheckSize(n);
  VerifyReport report;
  for (int i = 0; i < n; ++i) {
    AgentReport agent;
    agent.agent = i;
    agent.alpha = alpha[i];
    const auto it = allocation.bundles.find(i);
    if (it != allocation.bundles.end()) {
      agent.value = instance.BundleValue(i, it->second);
      if (sgn(alpha[i]) > 0) {
        for (int item : it->second) {
          switch (ClassifyItem(instance.value(i, item), alpha[i])) {
            case ItemClass::kPebble:
              ++agent.pebbles;
              break;
            case ItemClass::kIce:
              ++agent.ice;
              break;
            case ItemClass::kWater:
              ++agent.water;
              break;
          }
        }
      }
    }
    if (sgn(alpha[i]) > 0) agent.ratio_to_alpha = agent.value / alpha[i];
    if (with_oracle) {
      agent.mms = ExactMaximinShare(instance.row(i), n, limits).value;
      if (sgn(*agent.mms) > 0) agent.ratio_to_mms = agent.value / *agent.mms;
    }
    auto fold = [](std::optional<Rational>& acc,
                   const std::optional<Rational>& r) {
      if (r && (!acc || *r < *acc)) acc = r;
    };
    fold(report.min_ratio_to_alpha, agent.ratio_to_alpha);
    fold(report.min_ratio_to_mms, agent.ratio_to_mms);
    report.agents.push_back(std::move(agent));
  }
  return report;
}

Json VerifyReportToJson(const VerifyReport& report) {
  auto opt = [](const std::optional<Rational>& r) -> Json {
    return r ? RationalToJson(*r) : Json(nullptr);
  };
  Json agents = Json::array();
  for (const auto& a : report.agents) {
    agents.push_back({{"agent", a.agent},
                      {"value", RationalToJson(a.value)},
                      {"alpha", RationalToJson(a.alpha)},
                      {"ratio_to_alpha", opt(a.ratio_to_alpha)},
                      {"mms", opt(a.mms)},
                      {"ratio_to_mms", opt(a.ratio_to_mms)},
                      {"pebbles", a.pebbles},
                      {"ice", a.ice},
                      {"water", a.water}});
  }
  return {{"agents", std::move(agents)},
          {"min_ratio_to_alpha", opt(report.min_ratio_to_alpha)},
          {"min_ratio_to_mms", opt(report.min_ratio_to_mms)}};
}

CampaignConfig CampaignConfigFromJson(const Json& json) {
  if (!json.is_object()) throw StructuralError("campaign config must be an object");
  CampaignConfig config;
  for (const auto& f : json.value("families", Json::array())) {
    config.families.push_back(ParseFamily(f.get<std::string>()));
  }
  for (const auto& s : json.value("sizes", Json::array())) {
    if (!s.is_array() || s.size() != 2) {
      throw StructuralError("each size must be [n, m]");
    }
    config.sizes.push_back({s[0].get<int>(), s[1].get<int>()});
  }
  if (json.contains("seeds")) {
    const Json& seeds = json.at("seeds");
    if (seeds.is_array()) {
      for (const auto& s : seeds) config.seeds.push_back(s.get<uint64_t>());
    } else if (seeds.is_object()) {
      const uint64_t from = seeds.value("from", uint64_t{0});
      const uint64_t count = seeds.at("count").get<uint64_t>();
      for (uint64_t s = 0; s < count; ++s) config.seeds.push_back(from + s);
    } else {
      throw StructuralError("'seeds' must be an array or {from, count}");
    }
  }
  for (const auto& e : json.value("epsilon_grid", Json::array())) {
    config.epsilon_grid.push_back(RationalFromJson(e));
  }
  if (json.contains("water_counts")) {
    config.water_counts = json.at("water_counts").get<std::vector<int>>();
  }
  config.check_invariants = json.value("check_invariants", false);
  config.threads = json.value("threads", 1);
  config.max_numerator = json.value("max_numerator", config.max_numerator);
  config.max_denominator =
      json.value("max_denominator", config.max_denominator);
  return config;
}

CampaignSummary RunCampaign(const CampaignConfig& config) {
  for (const auto& eps : config.epsilon_grid) {
    FptasConfig probe;
    probe.epsilon = eps;
    ValidateFptasConfig(probe);
  }
  std::vector<Task> tasks;
  auto add = [&](const GeneratorSpec& spec) {
    if (config.epsilon_grid.empty()) {
      tasks.push_back({spec, std::nullopt});
    } else {
      for (const auto& eps : config.epsilon_grid) tasks.push_back({spec, eps});
    }
  };
  for (Family family : config.families) {
    for (uint64_t seed : config.seeds) {
      GeneratorSpec spec;
      spec.family = family;
      spec.seed = seed;
      spec.max_numerator = config.max_numerator;
      spec.max_denominator = config.max_denominator;
      if (family == Family::kTightness) {
        spec.n = 3;
        for (int w : config.water_counts) {
          spec.water_count = w;
          spec.m = 5 + w;
          add(spec);
        }
        continue;
      }
      for (const auto& size : config.sizes) {
        spec.n = size.n;
        spec.m = size.m;
        add(spec);
      }
    }
  }

  CampaignSummary summary;
  summary.rows.resize(tasks.size());
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (size_t i = next++; i < tasks.size(); i = next++) {
      try {
        summary.rows[i] = RunTask(tasks[i], config);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = tasks.size();
      }
    }
  };
  const int threads = std::max(1, config.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  for (const auto& row : summary.rows) {
    summary.total_failures += row.failures;
    if (!summary.min_ratio || row.min_ratio < *summary.min_ratio) {
      summary.min_ratio = row.min_ratio;
    }
    for (const auto& [rule, count] : row.rule_firings) {
      summary.rule_firings[rule] += count;
    }
    if (row.epsilon) ++summary.iteration_histogram[row.iterations];
    summary.bound_checks += row.bound_checks;
  }
  return summary;
}

std::string CampaignCsv(const CampaignSummary& summary) {
  std::ostringstream out;
  out << "family,n,m,seed,epsilon,min_ratio_num,min_ratio_den,iterations,"
         "failures,reductions_fired\n";
  for (const auto& row : summary.rows) {
    out << FamilyName(row.family) << ',' << row.n << ',' << row.m << ','
        << row.seed << ','
        << (row.epsilon ? FormatRational(*row.epsilon) : std::string("0"))
        << ',' << row.min_ratio.get_num().get_str() << ','
        << row.min_ratio.get_den().get_str() << ',' << row.iterations << ','
        << row.failures << ',' << row.reductions_fired << '\n';
  }
  return out.str();
}

}  // namespace mmsalloc
