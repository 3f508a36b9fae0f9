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

// Per-student writing-style development profiles and their interpolation
// onto a fixed time grid.

#ifndef STYLO_PROFILES_H_
#define STYLO_PROFILES_H_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "stylo/corpus.h"
#include "stylo/similarity.h"

namespace stylo {

inline constexpr double kDefaultGridStep = 0.05;  // months
inline constexpr double kAnalysisHorizon = 30.0;  // months

struct ProfilePoint {
  double tau = 0.0;  // Months since the m-th text.
  double p = 0.0;    // Similarity to the initial style.

  friend bool operator==(const ProfilePoint&, const ProfilePoint&) = default;
};

struct DevelopmentProfile {
  std::string student_id;
  size_t m = 2;
  // Strictly increasing tau starting at 0.
  std::vector<ProfilePoint> points;

  friend bool operator==(const DevelopmentProfile&,
                         const DevelopmentProfile&) = default;
};

struct ApproxProfile {
  std::string student_id;
  double step = kDefaultGridStep;
  // values[g] is the profile at g * step months.
  std::vector<double> values;

  size_t length() const { return values.size(); }

  friend bool operator==(const ApproxProfile&, const ApproxProfile&) = default;
};

// With texts t_0..t_{n-1} in time order (0-based), point j = 0..n-m compares
// text t_{j+m-1} against the first m texts:
//   p_j = (1/m) * sum_{i<m} s(t_{j+m-1}, t_i),
//   tau_j = months from t_{m-1} to t_{j+m-1}.
// Points sharing a timestamp collapse onto one knot holding the later
// text's p. Throws DataError when the student has fewer than m texts and
// UsageError when m is 0.
DevelopmentProfile build_profile(const StudentRecord& student,
                                 const SimilarityFunction& model, size_t m = 2);

std::vector<DevelopmentProfile> build_profiles(const Corpus& corpus,
                                               const SimilarityFunction& model,
                                               size_t m = 2);

// Linear interpolation at 0, step, 2 * step, ... up to the last knot,
// floor(last_tau / step) + 1 values, no extrapolation. Grid points that
// coincide with a knot reproduce its p exactly. Throws DataError for an
// empty profile.
ApproxProfile interpolate(const DevelopmentProfile& profile,
                          double step = kDefaultGridStep);

// Number of grid entries at or below the horizon: floor(horizon / step) + 1.
size_t grid_points_within(double horizon, double step);

// CSV "student_id,tau_months,p".
void write_profiles(const std::vector<DevelopmentProfile>& profiles,
                    std::ostream& out);
// m is not stored in the CSV; the caller supplies it.
std::vector<DevelopmentProfile> read_profiles(std::istream& in, size_t m);

// CSV "student_id,grid_index,value".
void write_approx_profiles(const std::vector<ApproxProfile>& profiles,
                           std::ostream& out);
std::vector<ApproxProfile> read_approx_profiles(std::istream& in,
                                                double step = kDefaultGridStep);

}  // namespace stylo

#endif  // STYLO_PROFILES_H_
