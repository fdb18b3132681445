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

#ifndef MMSALLOC_RATIONAL_H_
#define MMSALLOC_RATIONAL_H_

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace mmsalloc {

// All values, thresholds and ratios are exact. Comparisons against 7/9 of a
// threshold must never be subject to rounding.
using Rational = mpq_class;

// Accepts "p", "p/q", "-p/q" and finite decimals such as "0.25". The result is
// canonicalized. Throws DomainError on malformed text or a zero denominator.
Rational ParseRational(std::string_view text);

// "p/q" in lowest terms, or "p" when the denominator is one.
std::string FormatRational(const Rational& value);

double ToDouble(const Rational& value);

}  // namespace mmsalloc

#endif  // MMSALLOC_RATIONAL_H_
