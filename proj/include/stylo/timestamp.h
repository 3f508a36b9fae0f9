// Copyright 2026 The Stylo Authors.
//
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

#ifndef STYLO_TIMESTAMP_H_
#define STYLO_TIMESTAMP_H_

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace stylo {

using Timestamp = std::chrono::sys_seconds;

// One month is the calendar-average 365.25 / 12 = 30.4375 days.
inline constexpr double kSecondsPerMonth = 30.4375 * 86400.0;

// Accepts "YYYY-MM-DD", "YYYY-MM-DDTHH:MM[:SS[.fff]]" with an optional "Z"
// or "+HH:MM" / "-HH:MM" offset; a space may replace the 'T'. Fractional
// seconds are truncated.
std::optional<Timestamp> parse_timestamp(std::string_view s);

// Canonical UTC form "YYYY-MM-DDTHH:MM:SSZ".
std::string format_timestamp(Timestamp t);

inline double months_between(Timestamp from, Timestamp to) {
  return static_cast<double>((to - from).count()) / kSecondsPerMonth;
}

inline Timestamp add_months(Timestamp t, double months) {
  return t + std::chrono::seconds(
                 static_cast<long long>(months * kSecondsPerMonth));
}

}  // namespace stylo

#endif  // STYLO_TIMESTAMP_H_
