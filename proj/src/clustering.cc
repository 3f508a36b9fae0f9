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

#include "stylo/clustering.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>

#include "stylo/csv.h"
#include "stylo/error.h"
#include "stylo/rng.h"

namespace stylo {

double prefix_dist(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DataError("prefix distance of an empty profile");
  const size_t n = std::min(a.size(), b.size());
  double sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

std::vector<size_t> assign(const std::vector<ApproxProfile>& profiles,
                           const std::vector<Centroid>& centroids) {
  if (centroids.empty()) throw UsageError("assignment needs at least one centroid");
  std::vector<size_t> out(profiles.size(), 0);
  for (size_t i = 0; i < profiles.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t r = 0; r < centroids.size(); ++r) {
      const double d = prefix_dist(profiles[i].values, centroids[r]);
      if (d < best) {
        best = d;
        out[i] = r;
      }
    }
  }
  return out;
}

std::vector<Centroid> update_centroids(const std::vector<ApproxProfile>& profiles,
                                       const std::vector<size_t>& assignments,
                                       size_t k,
                                       const std::vector<Centroid>& previous) {
  if (assignments.size() != profiles.size()) {
    throw UsageError("assignments must cover every profile");
  }
  std::vector<Centroid> sums(k);
  std::vector<std::vector<size_t>> counts(k);
  // Profiles are visited in index order, which fixes the summation order.
  for (size_t i = 0; i < profiles.size(); ++i) {
    const size_t r = assignments[i];
    if (r >= k) throw UsageError("assignment refers to a cluster >= k");
    const auto& v = profiles[i].values;
    if (sums[r].size() < v.size()) {
      sums[r].resize(v.size(), 0.0);
      counts[r].resize(v.size(), 0);
    }
    for (size_t j = 0; j < v.size(); ++j) {
      sums[r][j] += v[j];
      ++counts[r][j];
    }
  }
  std::vector<bool> reseeded(profiles.size(), false);
  for (size_t r = 0; r < k; ++r) {
    if (!sums[r].empty()) {
      for (size_t j = 0; j < sums[r].size(); ++j) {
        sums[r][j] /= static_cast<double>(counts[r][j]);
      }
      continue;
    }
    if (previous.size() != k) {
      throw UsageError("cluster " + std::to_string(r) +
                       " is empty and no previous centroids were given");
    }
    size_t far = profiles.size();
    double far_dist = -1.0;
    for (size_t i = 0; i < profiles.size(); ++i) {
      if (reseeded[i]) continue;
      const double d = prefix_dist(profiles[i].values, previous[assignments[i]]);
      if (d > far_dist) {
        far_dist = d;
        far = i;
      }
    }
    if (far == profiles.size()) throw UsageError("more clusters than profiles");
    reseeded[far] = true;
    sums[r] = profiles[far].values;
  }
  return sums;
}

double cluster_error(const std::vector<ApproxProfile>& profiles,
                     const std::vector<Centroid>& centroids,
                     const std::vector<size_t>& assignments) {
  if (profiles.empty()) return 0.0;
  double total = 0.0;
  for (size_t i = 0; i < profiles.size(); ++i) {
    total += prefix_dist(profiles[i].values, centroids[assignments[i]]);
  }
  return total / static_cast<double>(profiles.size());
}

std::vector<size_t> ClusterModel::cluster_sizes() const {
  std::vector<size_t> sizes(centroids.size(), 0);
  for (size_t a : assignments) ++sizes[a];
  return sizes;
}

ClusterModel kmeans(const std::vector<ApproxProfile>& profiles, size_t k,
                    uint64_t seed, const KMeansOptions& options) {
  const size_t n = profiles.size();
  if (k == 0 || k > n) {
    throw UsageError("k = " + std::to_string(k) + " must lie in [1, " +
                     std::to_string(n) + "]");
  }
  ClusterModel model;
  for (const auto& p : profiles) model.student_ids.push_back(p.student_id);

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  Rng rng(seed);
  // Partial Fisher-Yates: the first k entries are a uniform k-subset.
  for (size_t i = 0; i < k; ++i) std::swap(order[i], order[i + rng.index(n - i)]);
  for (size_t r = 0; r < k; ++r) model.centroids.push_back(profiles[order[r]].values);

  model.assignments = assign(profiles, model.centroids);
  model.error = cluster_error(profiles, model.centroids, model.assignments);
  model.error_history.push_back(model.error);
  for (size_t it = 1; it <= options.max_iter; ++it) {
    model.assignments = assign(profiles, model.centroids);
    model.centroids =
        update_centroids(profiles, model.assignments, k, model.centroids);
    const double error = cluster_error(profiles, model.centroids, model.assignments);
    model.error_history.push_back(error);
    model.iterations = it;
    const double change = std::abs(model.error - error);
    model.error = error;
    if (change <= options.tol) break;
  }
  return model;
}

ClusterModel kmeans_best(const std::vector<ApproxProfile>& profiles, size_t k,
                         size_t restarts, uint64_t seed,
                         const KMeansOptions& options) {
  if (restarts == 0) throw UsageError("restarts must be at least 1");
  ClusterModel best;
  for (size_t r = 0; r < restarts; ++r) {
    ClusterModel m = kmeans(profiles, k, derive_seed(seed, r), options);
    if (r == 0 || m.error < best.error) best = std::move(m);
  }
  return best;
}

size_t select_elbow(const std::vector<ElbowPoint>& points) {
  if (points.empty()) throw UsageError("elbow selection needs at least one k");
  if (points.size() < 3) return points.front().k;
  size_t best = 1;
  double best_curv = -std::numeric_limits<double>::infinity();
  for (size_t i = 1; i + 1 < points.size(); ++i) {
    const double curv =
        points[i - 1].error - 2.0 * points[i].error + points[i + 1].error;
    if (curv > best_curv) {
      best_curv = curv;
      best = i;
    }
  }
  return points[best].k;
}

ElbowScan elbow_scan(const std::vector<ApproxProfile>& profiles,
                     const std::vector<size_t>& ks, size_t restarts,
                     uint64_t seed, const KMeansOptions& options) {
  if (ks.empty()) throw UsageError("k range must not be empty");
  std::vector<size_t> sorted = ks;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  ElbowScan scan;
  for (size_t k : sorted) {
    const ClusterModel m =
        kmeans_best(profiles, k, restarts, derive_seed(seed, k), options);
    scan.points.push_back({k, m.error});
  }
  scan.selected_k = select_elbow(scan.points);
  return scan;
}

double adjusted_rand_index(std::span<const size_t> a, std::span<const size_t> b) {
  if (a.size() != b.size()) throw UsageError("labelings differ in length");
  const double n = static_cast<double>(a.size());
  if (a.size() < 2) return 1.0;
  std::map<std::pair<size_t, size_t>, double> joint;
  std::map<size_t, double> rows, cols;
  for (size_t i = 0; i < a.size(); ++i) {
    joint[{a[i], b[i]}] += 1.0;
    rows[a[i]] += 1.0;
    cols[b[i]] += 1.0;
  }
  const auto pairs = [](double x) { return x * (x - 1.0) / 2.0; };
  double index = 0.0, sum_rows = 0.0, sum_cols = 0.0;
  for (const auto& [key, c] : joint) index += pairs(c);
  for (const auto& [key, c] : rows) sum_rows += pairs(c);
  for (const auto& [key, c] : cols) sum_cols += pairs(c);
  const double expected = sum_rows * sum_cols / pairs(n);
  const double max_index = 0.5 * (sum_rows + sum_cols);
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

void write_assignments(const ClusterModel& model, std::ostream& out) {
  csv::write_row(out, {"student_id", "cluster"});
  for (size_t i = 0; i < model.assignments.size(); ++i) {
    csv::write_row(out, {model.student_ids[i], std::to_string(model.assignments[i])});
  }
}

void write_centroids(const ClusterModel& model, std::ostream& out) {
  csv::write_row(out, {"cluster", "grid_index", "value"});
  for (size_t r = 0; r < model.centroids.size(); ++r) {
    for (size_t g = 0; g < model.centroids[r].size(); ++g) {
      csv::write_row(out, {std::to_string(r), std::to_string(g),
                           csv::format(model.centroids[r][g])});
    }
  }
}

void write_elbow(const ElbowScan& scan, std::ostream& out) {
  csv::write_row(out, {"k", "error"});
  for (const auto& p : scan.points) {
    csv::write_row(out, {std::to_string(p.k), csv::format(p.error)});
  }
}

std::vector<AssignmentRow> read_assignments(std::istream& in) {
  csv::Reader reader(in, {"student_id", "cluster"});
  std::vector<AssignmentRow> rows;
  std::vector<std::string> row;
  while (reader.next(row)) {
    rows.push_back({row[0], static_cast<size_t>(csv::parse_int(row[1]))});
  }
  return rows;
}

std::vector<Centroid> read_centroids(std::istream& in) {
  csv::Reader reader(in, {"cluster", "grid_index", "value"});
  std::vector<Centroid> out;
  std::vector<std::string> row;
  while (reader.next(row)) {
    const auto r = static_cast<size_t>(csv::parse_int(row[0]));
    const auto g = static_cast<size_t>(csv::parse_int(row[1]));
    if (r >= out.size()) out.resize(r + 1);
    if (g != out[r].size()) {
      throw DataError("centroid line " + std::to_string(reader.line_number()) +
                      ": grid indices must be consecutive from 0");
    }
    out[r].push_back(csv::parse_double(row[2]));
  }
  return out;
}

std::vector<ElbowPoint> read_elbow(std::istream& in) {
  csv::Reader reader(in, {"k", "error"});
  std::vector<ElbowPoint> out;
  std::vector<std::string> row;
  while (reader.next(row)) {
    out.push_back({static_cast<size_t>(csv::parse_int(row[0])),
                   csv::parse_double(row[1])});
  }
  return out;
}

}  // namespace stylo
