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

#include "mmsalloc/io.h"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mmsalloc/errors.h"

namespace mmsalloc {
namespace {

std::vector<int> IndexListFromJson(const Json& json, const char* field) {
  if (!json.is_array()) {
    throw StructuralError(std::string("'") + field + "' must be an array");
  }
  std::vector<int> out;
  out.reserve(json.size());
  for (const auto& v : json) {
    if (!v.is_number_integer()) {
      throw StructuralError(std::string("'") + field +
                            "' must hold integers");
    }
    out.push_back(v.get<int>());
  }
  return out;
}

}  // namespace

Json RationalToJson(const Rational& value) { return FormatRational(value); }

Rational RationalFromJson(const Json& value) {
  if (value.is_string()) return ParseRational(value.get<std::string>());
  if (value.is_number_integer()) {
    return ParseRational(value.dump());
  }
  if (value.is_number_float()) {
    throw DomainError("floating-point value " + value.dump() +
                      " is not exact; write it as a \"p/q\" string");
  }
  throw DomainError("expected a rational, got " + value.dump());
}

Json InstanceToJson(const Instance& instance) {
  Json rows = Json::array();
  for (int i = 0; i < instance.num_agents(); ++i) {
    Json row = Json::array();
    for (const auto& v : instance.row(i)) row.push_back(RationalToJson(v));
    rows.push_back(std::move(row));
  }
  return {{"n", instance.num_agents()},
          {"m", instance.num_items()},
          {"valuations", std::move(rows)}};
}

Instance InstanceFromJson(const Json& json) {
  if (!json.is_object() || !json.contains("valuations")) {
    throw StructuralError("instance JSON needs a 'valuations' field");
  }
  const Json& rows = json.at("valuations");
  if (!rows.is_array()) throw StructuralError("'valuations' must be an array");
  std::vector<std::vector<Rational>> valuations;
  for (const auto& row : rows) {
    if (!row.is_array()) throw StructuralError("valuation rows must be arrays");
    auto& out = valuations.emplace_back();
    for (const auto& v : row) out.push_back(RationalFromJson(v));
  }
  const int n = json.contains("n") ? json.at("n").get<int>()
                                   : static_cast<int>(valuations.size());
  const int m = json.contains("m")
                    ? json.at("m").get<int>()
                    : (valuations.empty()
                           ? 0
                           : static_cast<int>(valuations.front().size()));
  return Instance(n, m, std::move(valuations));
}

Json AllocationToJson(const Allocation& allocation) {
  Json bundles = Json::object();
  for (const auto& [agent, items] : allocation.bundles) {
    bundles[std::to_string(agent)] = items;
  }
  return {{"bundles", std::move(bundles)},
          {"satisfied", allocation.satisfied},
          {"unallocated", allocation.unallocated}};
}

Allocation AllocationFromJson(const Json& json) {
  if (!json.is_object() || !json.contains("bundles")) {
    throw StructuralError("allocation JSON needs a 'bundles' field");
  }
  Allocation allocation;
  const Json& bundles = json.at("bundles");
  if (!bundles.is_object()) throw StructuralError("'bundles' must be an object");
  for (const auto& [key, items] : bundles.items()) {
    int agent = 0;
    try {
      size_t used = 0;
      agent = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw StructuralError("bundle key '" + key + "' is not an agent index");
    }
    allocation.bundles[agent] = IndexListFromJson(items, "bundles");
  }
  if (json.contains("satisfied")) {
    allocation.satisfied = IndexListFromJson(json.at("satisfied"), "satisfied");
  }
  if (json.contains("unallocated")) {
    allocation.unallocated =
        IndexListFromJson(json.at("unallocated"), "unallocated");
  }
  return allocation;
}

Json ThresholdsToJson(const ThresholdVector& alpha) {
  Json values = Json::array();
  for (const auto& a : alpha.values()) values.push_back(RationalToJson(a));
  return {{"alpha", std::move(values)}};
}

ThresholdVector ThresholdsFromJson(const Json& json) {
  const Json* values = &json;
  if (json.is_object()) {
    if (!json.contains("alpha")) {
      throw StructuralError("threshold JSON needs an 'alpha' field");
    }
    values = &json.at("alpha");
  }
  if (!values->is_array()) throw StructuralError("'alpha' must be an array");
  std::vector<Rational> alpha;
  for (const auto& v : *values) alpha.push_back(RationalFromJson(v));
  return ThresholdVector(std::move(alpha));
}

Json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::runtime_error("malformed JSON in " + path.string() + ": " +
                             e.what());
  }
}

void WriteTextFile(const std::filesystem::path& path,
                   const std::string& contents) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace mmsalloc
