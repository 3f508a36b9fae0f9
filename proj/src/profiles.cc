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

#include "stylo/profiles.h"

#include <cmath>
#include <istream>
#include <ostream>

#include "stylo/csv.h"
#include "stylo/error.h"

namespace stylo {

DevelopmentProfile build_profile(const StudentRecord& student,
                                 const SimilarityFunction& model, size_t m) {
  if (m == 0) throw UsageError("m must be at least 1");
  const auto& texts = student.texts;
  if (texts.size() < m) {
    throw DataError("student '" + student.student_id + "' has " +
                    std::to_string(texts.size()) + " texts, fewer than m = " +
                    std::to_string(m));
  }
  DevelopmentProfile profile;
  profile.student_id = student.student_id;
  profile.m = m;
  const Timestamp origin = texts[m - 1].submitted_at;
  for (size_t j = 0; j + m <= texts.size(); ++j) {
    const Text& current = texts[j + m - 1];
    double sum = 0.0;
    for (size_t i = 0; i < m; ++i) sum += model(current.body, texts[i].body);
    const ProfilePoint point{months_between(origin, current.submitted_at),
                             sum / static_cast<double>(m)};
    if (!profile.points.empty() && profile.points.back().tau == point.tau) {
      profile.points.back() = point;
    } else {
      profile.points.push_back(point);
    }
  }
  return profile;
}

std::vector<DevelopmentProfile> build_profiles(const Corpus& corpus,
                                               const SimilarityFunction& model,
                                               size_t m) {
  std::vector<DevelopmentProfile> out;
  out.reserve(corpus.students.size());
  for (const auto& s : corpus.students) out.push_back(build_profile(s, model, m));
  return out;
}

size_t grid_points_within(double horizon, double step) {
  // The epsilon absorbs representation error in ratios such as 0.1 / 0.05.
  return static_cast<size_t>(std::floor(horizon / step + 1e-9)) + 1;
}

ApproxProfile interpolate(const DevelopmentProfile& profile, double step) {
  if (!(step > 0.0)) throw UsageError("grid step must be positive");
  const auto& pts = profile.points;
  if (pts.empty()) {
    throw DataError("profile of '" + profile.student_id + "' has no points");
  }
  ApproxProfile out;
  out.student_id = profile.student_id;
  out.step = step;
  const size_t n = grid_points_within(pts.back().tau, step);
  out.values.reserve(n);
  const double snap = 1e-9 * step;
  size_t seg = 0;
  for (size_t g = 0; g < n; ++g) {
    const double t = static_cast<double>(g) * step;
    while (seg + 1 < pts.size() && pts[seg + 1].tau <= t + snap) ++seg;
    if (std::abs(t - pts[seg].tau) <= snap || seg + 1 == pts.size()) {
      out.values.push_back(pts[seg].p);
      continue;
    }
    const ProfilePoint& a = pts[seg];
    const ProfilePoint& b = pts[seg + 1];
    const double f = (t - a.tau) / (b.tau - a.tau);
    out.values.push_back(a.p + f * (b.p - a.p));
  }
  return out;
}

void write_profiles(const std::vector<DevelopmentProfile>& profiles,
                    std::ostream& out) {
  csv::write_row(out, {"student_id", "tau_months", "p"});
  for (const auto& prof : profiles) {
    for (const auto& pt : prof.points) {
      csv::write_row(out, {prof.student_id, csv::format(pt.tau), csv::format(pt.p)});
    }
  }
}

std::vector<DevelopmentProfile> read_profiles(std::istream& in, size_t m) {
  csv::Reader reader(in, {"student_id", "tau_months", "p"});
  std::vector<DevelopmentProfile> out;
  std::vector<std::string> row;
  while (reader.next(row)) {
    if (out.empty() || out.back().student_id != row[0]) {
      out.push_back({row[0], m, {}});
    }
    out.back().points.push_back(
        {csv::parse_double(row[1]), csv::parse_double(row[2])});
  }
  return out;
}

void write_approx_profiles(const std::vector<ApproxProfile>& profiles,
                           std::ostream& out) {
  csv::write_row(out, {"student_id", "grid_index", "value"});
  for (const auto& prof : profiles) {
    for (size_t g = 0; g < prof.values.size(); ++g) {
      csv::write_row(out, {prof.student_id, std::to_string(g),
                           csv::format(prof.values[g])});
    }
  }
}

std::vector<ApproxProfile> read_approx_profiles(std::istream& in, double step) {
  csv::Reader reader(in, {"student_id", "grid_index", "value"});
  std::vector<ApproxProfile> out;
  std::vector<std::string> row;
  while (reader.next(row)) {
    if (out.empty() || out.back().student_id != row[0]) {
      out.push_back({row[0], step, {}});
    }
    const auto g = csv::parse_int(row[1]);
    if (g != static_cast<long long>(out.back().values.size())) {
      throw DataError("approximate profile line " +
                      std::to_string(reader.line_number()) +
                      ": grid indices must be consecutive from 0");
    }
    out.back().values.push_back(csv::parse_double(row[2]));
  }
  return out;
}

}  // namespace stylo
