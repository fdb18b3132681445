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

#ifndef MMSALLOC_IO_H_
#define MMSALLOC_IO_H_

#include <filesystem>
#include <string>

#include "json.hpp"
#include "mmsalloc/instance.h"
#include "mmsalloc/rational.h"

namespace mmsalloc {

using Json = nlohmann::json;

// Rationals travel as "p/q" strings. Integers are also accepted on input.
Json RationalToJson(const Rational& value);
Rational RationalFromJson(const Json& value);

// {"n": int, "m": int, "valuations": [[rational, ...], ...]}
Json InstanceToJson(const Instance& instance);
Instance InstanceFromJson(const Json& json);

// {"bundles": {"<agent>": [item, ...]}, "satisfied": [...],
//  "unallocated": [...]}
Json AllocationToJson(const Allocation& allocation);
Allocation AllocationFromJson(const Json& json);

// Either a bare array of rationals or {"alpha": [...]}.
Json ThresholdsToJson(const ThresholdVector& alpha);
ThresholdVector ThresholdsFromJson(const Json& json);

// Throws std::runtime_error when the file cannot be read or parsed.
Json ReadJsonFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path,
                   const std::string& contents);

}  // namespace mmsalloc

#endif  // MMSALLOC_IO_H_
