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

// k-means over variable-length approximate profiles.
//
// Distances use only the common prefix of two vectors, and a profile of
// length l contributes to the first l entries of its centroid. A centroid is
// as long as its longest member.

#ifndef STYLO_CLUSTERING_H_
#define STYLO_CLUSTERING_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "stylo/profiles.h"

namespace stylo {

using Centroid = std::vector<double>;

// Euclidean distance over the first min(|a|, |b|) entries. Throws DataError
// if either vector is empty.
double prefix_dist(std::span<const double> a, std::span<const double> b);

// Nearest centroid per profile; ties go to the lowest cluster index.
std::vector<size_t> assign(const std::vector<ApproxProfile>& profiles,
                           const std::vector<Centroid>& centroids);

// Length-aware per-entry means. A cluster left without members is reseeded
// with the profile farthest from its centroid in `previous` (profiles already
// used to reseed are skipped). `previous` may be empty only if no cluster is
// empty.
std::vector<Centroid> update_centroids(const std::vector<ApproxProfile>& profiles,
                                       const std::vector<size_t>& assignments,
                                       size_t k,
                                       const std::vector<Centroid>& previous = {});

// Mean over profiles of the prefix distance to the assigned centroid.
double cluster_error(const std::vector<ApproxProfile>& profiles,
                     const std::vector<Centroid>& centroids,
                     const std::vector<size_t>& assignments);

struct ClusterModel {
  std::vector<Centroid> centroids;
  // Parallel to the clustered profiles.
  std::vector<std::string> student_ids;
  std::vector<size_t> assignments;
  double error = 0.0;
  size_t iterations = 0;
  // Error after initialization and after every (assign, update) iteration.
  std::vector<double> error_history;

  size_t k() const { return centroids.size(); }
  std::vector<size_t> cluster_sizes() const;
};

struct KMeansOptions {
  size_t max_iter = 100;
  double tol = 1e-6;
};

// Starts from k distinct profiles drawn uniformly at random, then alternates
// assignment and centroid updates until the error changes by at most tol or
// max_iter iterations have run. Throws UsageError unless 1 <= k <= n.
ClusterModel kmeans(const std::vector<ApproxProfile>& profiles, size_t k,
                    uint64_t seed, const KMeansOptions& options = {});

// Lowest-error model over `restarts` runs with derived seeds.
ClusterModel kmeans_best(const std::vector<ApproxProfile>& profiles, size_t k,
                         size_t restarts, uint64_t seed,
                         const KMeansOptions& options = {});

struct ElbowPoint {
  size_t k = 0;
  double error = 0.0;
};

struct ElbowScan {
  std::vector<ElbowPoint> points;  // Ascending, distinct k.
  size_t selected_k = 0;
};

// Index of the elbow: argmax over interior points of the discrete second
// difference E[i-1] - 2 E[i] + E[i+1]; ties resolve to the smaller k. With
// fewer than three points the first k is returned.
size_t select_elbow(const std::vector<ElbowPoint>& points);

// Best-of-restarts error for each k; throws UsageError for an empty range or
// a k larger than the number of profiles.
ElbowScan elbow_scan(const std::vector<ApproxProfile>& profiles,
                     const std::vector<size_t>& ks, size_t restarts,
                     uint64_t seed, const KMeansOptions& options = {});

// Adjusted Rand index between two labelings of the same items.
double adjusted_rand_index(std::span<const size_t> a, std::span<const size_t> b);

// CSV "student_id,cluster".
void write_assignments(const ClusterModel& model, std::ostream& out);
// CSV "cluster,grid_index,value".
void write_centroids(const ClusterModel& model, std::ostream& out);
// CSV "k,error".
void write_elbow(const ElbowScan& scan, std::ostream& out);

struct AssignmentRow {
  std::string student_id;
  size_t cluster = 0;
};
std::vector<AssignmentRow> read_assignments(std::istream& in);
std::vector<Centroid> read_centroids(std::istream& in);
std::vector<ElbowPoint> read_elbow(std::istream& in);

}  // namespace stylo

#endif  // STYLO_CLUSTERING_H_
