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

// Command-line front end: solve, fptas, oracle, tps, gen, verify, campaign.
//
// Exit status: 0 on success, 2 when the allocator leaves agents without a
// bundle, 1 on any error.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mmsalloc/allocator.h"
#include "mmsalloc/errors.h"
#include "mmsalloc/fptas.h"
#include "mmsalloc/harness.h"
#include "mmsalloc/io.h"
#include "mmsalloc/shares.h"

namespace mmsalloc {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUnserved = 2;

struct Flags {
  std::string instance;
  std::string alpha_file;
  std::string alpha_mode = "tps";
  std::string allocation;
  std::string epsilon = "1/10";
  std::string config;
  std::string out;
  bool json = false;
  bool decimals = false;
  bool oracle = false;
  int agent = 0;
  OracleLimits limits;
  // gen
  std::string family = "uniform";
  int n = 2;
  int m = 4;
  uint64_t seed = 0;
  int water_count = 4;
  int max_numerator = 60;
  int max_denominator = 6;
  std::string value = "1";
};

std::string Show(const Rational& r, bool decimals) {
  std::string s = FormatRational(r);
  if (decimals && r.get_den() != 1) {
    std::ostringstream d;
    d << s << " (~" << ToDouble(r) << ")";
    return d.str();
  }
  return s;
}

std::string ShowOpt(const std::optional<Rational>& r, bool decimals) {
  return r ? Show(*r, decimals) : std::string("n/a");
}

Json RationalsToJson(const std::vector<Rational>& values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(RationalToJson(v));
  return out;
}

ThresholdVector ResolveThresholds(const Instance& instance, const Flags& f) {
  if (!f.alpha_file.empty()) {
    ThresholdVector alpha = ThresholdsFromJson(ReadJsonFile(f.alpha_file));
    alpha.CheckSize(instance.num_agents());
    return alpha;
  }
  if (f.alpha_mode == "tps") return TpsThresholds(instance);
  if (f.alpha_mode == "oracle") return OracleThresholds(instance, f.limits);
  throw DomainError("unknown --alpha-mode '" + f.alpha_mode + "'");
}

std::vector<Rational> BundleValues(const Instance& instance,
                                   const Allocation& allocation) {
  std::vector<Rational> values(instance.num_agents(), Rational(0));
  for (const auto& [agent, items] : allocation.bundles) {
    values[agent] = instance.BundleValue(agent, items);
  }
  return values;
}

void PrintAllocation(std::ostream& out, const Instance& instance,
                     const Allocation& allocation, const ThresholdVector& alpha,
                     bool decimals) {
  for (int i = 0; i < instance.num_agents(); ++i) {
    out << "agent " << i << ": ";
    const auto it = allocation.bundles.find(i);
    if (it == allocation.bundles.end()) {
      out << "no bundle";
    } else {
      out << "items {";
      for (size_t j = 0; j < it->second.size(); ++j) {
        out << (j ? ", " : "") << it->second[j];
      }
      out << "} value " << Show(instance.BundleValue(i, it->second), decimals);
    }
    out << "  alpha " << Show(alpha[i], decimals) << '\n';
  }
  out << "unallocated: " << allocation.unallocated.size() << " item(s)\n";
}

int RunSolve(const Flags& f) {
  const Instance instance = InstanceFromJson(ReadJsonFile(f.instance));
  const ThresholdVector alpha = ResolveThresholds(instance, f);
  const SolveOutcome outcome = Solve(instance, alpha);
  const bool with_oracle = f.alpha_mode == "oracle" && f.alpha_file.empty();
  const VerifyReport report =
      VerifyAllocation(instance, outcome.allocation, alpha, with_oracle,
                       f.limits);
  if (f.json) {
    Json trace = Json::array();
    for (const auto& e : outcome.trace) trace.push_back(TraceEventToJson(e));
    Json out = {{"allocation", AllocationToJson(outcome.allocation)},
                {"satisfied", outcome.satisfied},
                {"failed_agents", outcome.failed_agents},
                {"alpha", RationalsToJson(alpha.values())},
                {"values", RationalsToJson(
                               BundleValues(instance, outcome.allocation))},
                {"trace", std::move(trace)}};
    const Json verify = VerifyReportToJson(report);
    out["min_ratio_to_alpha"] = verify["min_ratio_to_alpha"];
    if (with_oracle) out["min_ratio_to_mms"] = verify["min_ratio_to_mms"];
    std::cout << out.dump(2) << '\n';
  } else {
    PrintAllocation(std::cout, instance, outcome.allocation, alpha, f.decimals);
    std::cout << "reductions fired: " << outcome.reductions << '\n';
    std::cout << "min ratio to alpha: "
              << ShowOpt(report.min_ratio_to_alpha, f.decimals) << '\n';
    if (with_oracle) {
      std::cout << "min ratio to MMS: "
                << ShowOpt(report.min_ratio_to_mms, f.decimals) << '\n';
    }
    if (!outcome.succeeded()) {
      std::cout << "failed agents:";
      for (int a : outcome.failed_agents) std::cout << ' ' << a;
      std::cout << '\n';
    }
  }
  return outcome.succeeded() ? kExitOk : kExitUnserved;
}

int RunFptasCommand(const Flags& f) {
  const Instance instance = InstanceFromJson(ReadJsonFile(f.instance));
  FptasConfig config;
  config.epsilon = ParseRational(f.epsilon);
  const FptasOutcome outcome = RunFptas(instance, config);
  if (f.json) {
    Json trace = Json::array();
    for (const auto& e : outcome.last_run.trace) {
      trace.push_back(TraceEventToJson(e));
    }
    std::cout << Json{{"allocation", AllocationToJson(outcome.allocation)},
                      {"final_alpha",
                       RationalsToJson(outcome.final_alpha.values())},
                      {"iterations", outcome.iterations},
                      {"per_iteration_failures",
                       outcome.per_iteration_failures},
                      {"values", RationalsToJson(BundleValues(
                                     instance, outcome.allocation))},
                      {"trace", std::move(trace)}}
                     .dump(2)
              << '\n';
  } else {
    PrintAllocation(std::cout, instance, outcome.allocation,
                    outcome.final_alpha, f.decimals);
    std::cout << "iterations: " << outcome.iterations << '\n';
  }
  return kExitOk;
}

Instance LoadWithAgent(const Flags& f) {
  Instance instance = InstanceFromJson(ReadJsonFile(f.instance));
  if (f.agent < 0 || f.agent >= instance.num_agents()) {
    throw DomainError("agent " + std::to_string(f.agent) + " out of range");
  }
  return instance;
}

int RunOracle(const Flags& f) {
  const Instance instance = LoadWithAgent(f);
  const MmsResult mms =
      ExactMaximinShare(instance.row(f.agent), instance.num_agents(), f.limits);
  if (f.json) {
    std::cout << Json{{"agent", f.agent},
                      {"mms", RationalToJson(mms.value)},
                      {"partition", mms.partition}}
                     .dump(2)
              << '\n';
    return kExitOk;
  }
  std::cout << Show(mms.value, f.decimals) << '\n';
  for (const auto& bundle : mms.partition) {
    std::cout << "  {";
    for (size_t j = 0; j < bundle.size(); ++j) {
      std::cout << (j ? ", " : "") << bundle[j];
    }
    std::cout << "} value "
              << Show(instance.BundleValue(f.agent, bundle), f.decimals)
              << '\n';
  }
  return kExitOk;
}

int RunTps(const Flags& f) {
  const Instance instance = LoadWithAgent(f);
  const Rational tps =
      TruncatedProportionalShare(instance.row(f.agent), instance.num_agents());
  if (f.json) {
    std::cout << Json{{"agent", f.agent}, {"tps", RationalToJson(tps)}}.dump()
              << '\n';
  } else {
    std::cout << Show(tps, f.decimals) << '\n';
  }
  return kExitOk;
}

int RunGen(const Flags& f) {
  GeneratorSpec spec;
  spec.family = ParseFamily(f.family);
  spec.n = f.n;
  spec.m = f.m;
  spec.seed = f.seed;
  spec.water_count = f.water_count;
  spec.max_numerator = f.max_numerator;
  spec.max_denominator = f.max_denominator;
  spec.identical_value = ParseRational(f.value);
  const std::string text = InstanceToJson(GenerateInstance(spec)).dump(2) + "\n";
  if (f.out.empty()) {
    std::cout << text;
  } else {
    WriteTextFile(f.out, text);
  }
  return kExitOk;
}

int RunVerify(const Flags& f) {
  const Instance instance = InstanceFromJson(ReadJsonFile(f.instance));
  const Allocation allocation = AllocationFromJson(ReadJsonFile(f.allocation));
  const ThresholdVector alpha = ResolveThresholds(instance, f);
  const VerifyReport report =
      VerifyAllocation(instance, allocation, alpha, f.oracle, f.limits);
  if (f.json) {
    std::cout << VerifyReportToJson(report).dump(2) << '\n';
    return kExitOk;
  }
  for (const auto& a : report.agents) {
    std::cout << "agent " << a.agent << ": value " << Show(a.value, f.decimals)
              << "  ratio/alpha " << ShowOpt(a.ratio_to_alpha, f.decimals);
    if (f.oracle) {
      std::cout << "  mms " << ShowOpt(a.mms, f.decimals) << "  ratio/mms "
                << ShowOpt(a.ratio_to_mms, f.decimals);
    }
    std::cout << "  pebble/ice/water " << a.pebbles << '/' << a.ice << '/'
              << a.water << '\n';
  }
  std::cout << "min ratio: " << ShowOpt(report.min_ratio(), f.decimals)
            << '\n';
  return kExitOk;
}

int RunCampaignCommand(const Flags& f) {
  const CampaignConfig config = CampaignConfigFromJson(ReadJsonFile(f.config));
  const CampaignSummary summary = RunCampaign(config);
  const std::string csv = CampaignCsv(summary);
  if (f.out.empty()) {
    std::cout << csv;
  } else {
    WriteTextFile(f.out, csv);
  }
  std::ostream& log = f.out.empty() ? std::cerr : std::cout;
  log << "rows: " << summary.rows.size()
      << "  failures: " << summary.total_failures
      << "  min ratio: " << ShowOpt(summary.min_ratio, f.decimals) << '\n';
  for (const auto& [rule, count] : summary.rule_firings) {
    log << "  " << rule << " fired " << count << "x\n";
  }
  for (const auto& [iterations, count] : summary.iteration_histogram) {
    log << "  " << iterations << " iteration(s): " << count << " run(s)\n";
  }
  return summary.total_failures == 0 ? kExitOk : kExitUnserved;
}

}  // namespace
}  // namespace mmsalloc

int main(int argc, char** argv) {
  using namespace mmsalloc;
  CLI::App app{"Approximate maximin-share allocation of indivisible goods"};
  app.require_subcommand(1, 1);
  Flags f;

  auto common = [&](CLI::App* cmd) {
    cmd->add_flag("--json", f.json, "Machine-readable output");
    cmd->add_flag("--float", f.decimals, "Add decimal approximations");
  };
  auto oracle_limits = [&](CLI::App* cmd) {
    cmd->add_option("--oracle-max-items", f.limits.max_items,
                    "Largest item count the exact oracle accepts");
    cmd->add_option("--oracle-max-agents", f.limits.max_agents,
                    "Largest agent count the exact oracle accepts");
  };
  auto thresholds = [&](CLI::App* cmd) {
    oracle_limits(cmd);
    auto* file = cmd->add_option("--alpha", f.alpha_file,
                                 "JSON threshold vector");
    auto* mode = cmd->add_option("--alpha-mode", f.alpha_mode,
                                 "Thresholds from 'tps' or 'oracle' (exact MMS)")
                     ->check(CLI::IsMember({"tps", "oracle"}));
    file->excludes(mode);
  };

  auto* solve = app.add_subcommand("solve", "Run the 7/9 allocator");
  solve->add_option("--instance", f.instance)->required();
  thresholds(solve);
  common(solve);

  auto* fptas = app.add_subcommand("fptas", "Threshold descent from TPS");
  fptas->add_option("--instance", f.instance)->required();
  fptas->add_option("--epsilon", f.epsilon, "Accuracy in (0, 1/2], as p/q");
  common(fptas);

  auto* oracle = app.add_subcommand("oracle", "Exact MMS of one agent");
  oracle->add_option("--instance", f.instance)->required();
  oracle->add_option("--agent", f.agent)->required();
  oracle_limits(oracle);
  common(oracle);

  auto* tps = app.add_subcommand("tps", "Truncated proportional share");
  tps->add_option("--instance", f.instance)->required();
  tps->add_option("--agent", f.agent)->required();
  common(tps);

  auto* gen = app.add_subcommand("gen", "Generate an instance");
  gen->add_option("--family", f.family)
      ->check(CLI::IsMember({"uniform", "bimodal", "tightness", "identical"}));
  gen->add_option("--n", f.n);
  gen->add_option("--m", f.m);
  gen->add_option("--seed", f.seed);
  gen->add_option("--water-count", f.water_count);
  gen->add_option("--max-numerator", f.max_numerator);
  gen->add_option("--max-denominator", f.max_denominator);
  gen->add_option("--value", f.value, "Item value for the identical family");
  gen->add_option("--out", f.out, "Output file (default: stdout)");

  auto* verify = app.add_subcommand("verify", "Check an allocation");
  verify->add_option("--instance", f.instance)->required();
  verify->add_option("--allocation", f.allocation)->required();
  verify->add_flag("--oracle", f.oracle, "Compare against exact MMS");
  thresholds(verify);
  common(verify);

  auto* campaign = app.add_subcommand("campaign", "Run a seeded campaign");
  campaign->add_option("--config", f.config)->required();
  campaign->add_option("--out", f.out, "CSV output file (default: stdout)");
  common(campaign);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*solve) return RunSolve(f);
    if (*fptas) return RunFptasCommand(f);
    if (*oracle) return RunOracle(f);
    if (*tps) return RunTps(f);
    if (*gen) return RunGen(f);
    if (*verify) return RunVerify(f);
    if (*campaign) return RunCampaignCommand(f);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
