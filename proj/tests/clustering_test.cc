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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "stylo/clustering.h"
#include "stylo/error.h"
#include "stylo/rng.h"

namespace stylo {
namespace {

ApproxProfile prof(std::string id, std::vector<double> v) {
  return ApproxProfile{std::move(id), kDefaultGridStep, std::move(v)};
}

// Profiles of varying length around three level/slope families.
std::vector<ApproxProfile> families(size_t per_family, uint64_t seed) {
  Rng rng(seed);
  std::vector<ApproxProfile> out;
  const double levels[3] = {0.9, 0.6, 0.3};
  for (size_t f = 0; f < 3; ++f) {
    for (size_t i = 0; i < per_family; ++i) {
      const size_t len = 20 + rng.index(40);
      std::vector<double> v(len);
      for (size_t g = 0; g < len; ++g) {
        v[g] = levels[f] - 0.002 * f * g + rng.uniform(-0.03, 0.03);
      }
      out.push_back(prof("s" + std::to_string(out.size()), v));
    }
  }
  return out;
}

TEST(PrefixDist, Examples) {
  const std::vector<double> a = {0.5}, b = {0.5, 0.9}, c = {1, 0}, d = {0, 0};
  EXPECT_EQ(prefix_dist(a, b), 0.0);
  EXPECT_EQ(prefix_dist(c, d), 1.0);
  EXPECT_EQ(prefix_dist(b, b), 0.0);
  const std::vector<double> e = {0.1, 0.7, 0.3}, f = {0.4, 0.2};
  EXPECT_EQ(prefix_dist(e, f), prefix_dist(f, e));
  EXPECT_NEAR(prefix_dist(e, f), std::sqrt(0.09 + 0.25), 1e-15);
  EXPECT_THROW(prefix_dist(std::vector<double>{}, a), DataError);
}

TEST(Assign, SingleCentroidAndTieToLowestIndex) {
  const std::vector<ApproxProfile> ps = {prof("a", {0.5}), prof("b", {0.1, 0.2})};
  EXPECT_EQ(assign(ps, {{0.0}}), (std::vector<size_t>{0, 0}));
  const std::vector<Centroid> cs = {{0.4}, {0.0}, {0.6}};
  EXPECT_EQ(assign({prof("a", {0.5})}, cs)[0], 0u);
}

TEST(Assign, MatchesExhaustiveNearestCentroid) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<ApproxProfile> ps;
    for (int i = 0; i < 8; ++i) {
      std::vector<double> v(1 + rng.index(6));
      for (auto& x : v) x = rng.uniform();
      ps.push_back(prof("p", v));
    }
    std::vector<Centroid> cs(3);
    for (auto& c : cs) {
      c.resize(1 + rng.index(6));
      for (auto& x : c) x = rng.uniform();
    }
    const auto got = assign(ps, cs);
    for (size_t i = 0; i < ps.size(); ++i) {
      std::vector<double> dist;
      for (const auto& c : cs) {
        const size_t n = std::min(c.size(), ps[i].values.size());
        double s = 0.0;
        for (size_t j = 0; j < n; ++j) s += std::pow(c[j] - ps[i].values[j], 2);
        dist.push_back(std::sqrt(s));
      }
      for (size_t r = 0; r < cs.size(); ++r) {
        if (r < got[i]) {
          EXPECT_GT(dist[r], dist[got[i]]);
        } else {
          EXPECT_GE(dist[r], dist[got[i]]);
        }
      }
    }
  }
}

TEST(UpdateCentroids, LengthAwareMean) {
  const std::vector<ApproxProfile> ps = {prof("a", {1, 1, 1}), prof("b", {0, 0}),
                                         prof("c", {0.2, 0.4})};
  const auto cs = update_centroids(ps, {0, 0, 1}, 2);
  EXPECT_EQ(cs[0], (Centroid{0.5, 0.5, 1}));
  EXPECT_EQ(cs[1], (Centroid{0.2, 0.4}));
  const auto same = update_centroids({prof("a", {0.3, 0.3}), prof("b", {0.3, 0.3})}, {0, 0}, 1);
  EXPECT_EQ(same[0], (Centroid{0.3, 0.3}));
}

TEST(UpdateCentroids, EmptyClusterTakesFarthestProfile) {
  const std::vector<ApproxProfile> ps = {prof("a", {0.0}), prof("b", {0.1}), prof("c", {1.0})};
  const std::vector<Centroid> prev = {{0.0}, {5.0}};
  const auto cs = update_centroids(ps, {0, 0, 0}, 2, prev);
  EXPECT_EQ(cs[1], (Centroid{1.0}));
  EXPECT_THROW(update_centroids(ps, {0, 0, 0}, 2), UsageError);
  EXPECT_THROW(update_centroids(ps, {0, 0}, 2, prev), UsageError);
}

TEST(ClusterError, Examples) {
  const std::vector<ApproxProfile> ps = {prof("a", {0}), prof("b", {1})};
  EXPECT_DOUBLE_EQ(cluster_error(ps, {{0.5}}, {0, 0}), 0.5);
  EXPECT_EQ(cluster_error(ps, {{0.0}, {1.0}}, {0, 1}), 0.0);
}

TEST(KMeans, KEqualsNGivesZeroError) {
  const auto ps = families(3, 1);
  const auto m = kmeans(ps, ps.size(), 4);
  EXPECT_EQ(m.error, 0.0);
  EXPECT_EQ(m.k(), ps.size());
}

TEST(KMeans, KOneIsTheLengthAwareMean) {
  const auto ps = families(4, 2);
  const auto m = kmeans(ps, 1, 4);
  size_t longest = 0;
  for (const auto& p : ps) longest = std::max(longest, p.values.size());
  ASSERT_EQ(m.centroids[0].size(), longest);
  for (size_t g = 0; g < longest; ++g) {
    double s = 0.0;
    int n = 0;
    for (const auto& p : ps) {
      if (g < p.values.size()) {
        s += p.values[g];
        ++n;
      }
    }
    EXPECT_NEAR(m.centroids[0][g], s / n, 1e-12);
  }
}

TEST(KMeans, InvalidK) {
  const auto ps = families(1, 3);
  EXPECT_THROW(kmeans(ps, 4, 1), UsageError);
  EXPECT_THROW(kmeans(ps, 0, 1), UsageError);
  EXPECT_THROW(kmeans_best(ps, 2, 0, 1), UsageError);
}

TEST(KMeans, DeterministicPerSeed) {
  const auto ps = families(10, 5);
  const auto a = kmeans_best(ps, 3, 5, 9);
  const auto b = kmeans_best(ps, 3, 5, 9);
  EXPECT_EQ(a.assignments, b.assignments);
  EXPECT_EQ(a.centroids, b.centroids);
  EXPECT_EQ(a.error, b.error);
}

// The seed centroids carry a single profile's length, so the first update can
// lengthen the compared prefixes and raise the error. From then on every
// (assign, update) step is expected not to increase it.
TEST(KMeans, ErrorNeverIncreasesAfterTheFirstUpdate) {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    const auto ps = families(15, seed);
    for (size_t k = 2; k <= 5; ++k) {
      const auto m = kmeans(ps, k, seed * 31 + k);
      for (size_t i = 2; i < m.error_history.size(); ++i) {
        EXPECT_LE(m.error_history[i], m.error_history[i - 1] + 1e-12)
            << "seed " << seed << " k " << k << " iteration " << i;
      }
    }
  }
}

TEST(KMeans, RecoversSeparatedFamilies) {
  const auto ps = families(20, 8);
  const auto m = kmeans_best(ps, 3, 10, 1);
  std::vector<size_t> truth;
  for (size_t i = 0; i < ps.size(); ++i) truth.push_back(i / 20);
  EXPECT_EQ(adjusted_rand_index(m.assignments, truth), 1.0);
}

double ari_oracle(const std::vector<size_t>& a, const std::vector<size_t>& b) {
  double n11 = 0, n10 = 0, n01 = 0, n00 = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = i + 1; j < a.size(); ++j) {
      const bool sa = a[i] == a[j], sb = b[i] == b[j];
      if (sa && sb) ++n11;
      else if (sa) ++n10;
      else if (sb) ++n01;
      else ++n00;
    }
  }
  const double den = (n00 + n01) * (n01 + n11) + (n00 + n10) * (n10 + n11);
  return den == 0 ? 1.0 : 2.0 * (n00 * n11 - n01 * n10) / den;
}

TEST(AdjustedRand, MatchesPairCountingOracle) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const size_t n = 2 + rng.index(30);
    std::vector<size_t> a(n), b(n);
    for (auto& x : a) x = rng.index(4);
    for (auto& x : b) x = rng.index(3);
    EXPECT_NEAR(adjusted_rand_index(a, b), ari_oracle(a, b), 1e-12);
  }
  const std::vector<size_t> x = {0, 0, 1, 1, 2}, relabeled = {2, 2, 0, 0, 1};
  EXPECT_DOUBLE_EQ(adjusted_rand_index(x, relabeled), 1.0);
  EXPECT_THROW(adjusted_rand_index(x, std::vector<size_t>{0}), UsageError);
}

TEST(Elbow, ConvexCurvePicksMaxSecondDifference) {
  const std::vector<ElbowPoint> pts = {{2, 1.0}, {3, 0.4}, {4, 0.3}, {5, 0.25}, {6, 0.22}};
  size_t expect = 0;
  double best = -1;
  for (size_t i = 1; i + 1 < pts.size(); ++i) {
    const double c = pts[i - 1].error - 2 * pts[i].error + pts[i + 1].error;
    if (c > best) {
      best = c;
      expect = pts[i].k;
    }
  }
  EXPECT_EQ(select_elbow(pts), expect);
  EXPECT_EQ(select_elbow(pts), 3u);
  EXPECT_EQ(select_elbow({{4, 0.3}}), 4u);
  EXPECT_THROW(select_elbow({}), UsageError);
}

TEST(Elbow, BestOfRestartsErrorNonIncreasingInK) {
  const auto ps = families(15, 4);
  std::vector<size_t> ks;
  for (size_t k = 2; k <= 9; ++k) ks.push_back(k);
  const auto scan = elbow_scan(ps, ks, 10, 2);
  ASSERT_EQ(scan.points.size(), 8u);
  for (size_t i = 1; i < scan.points.size(); ++i) {
    EXPECT_LE(scan.points[i].error, scan.points[i - 1].error + 1e-12) << scan.points[i].k;
  }
  EXPECT_EQ(scan.selected_k, 3u);
  EXPECT_EQ(elbow_scan(ps, {4}, 2, 2).selected_k, 4u);
  EXPECT_THROW(elbow_scan(ps, {}, 2, 2), UsageError);
}

TEST(ClusterCsv, RoundTrips) {
  const auto ps = families(5, 6);
  const auto m = kmeans_best(ps, 3, 3, 1);
  std::stringstream a, c;
  write_assignments(m, a);
  write_centroids(m, c);
  const auto rows = read_assignments(a);
  ASSERT_EQ(rows.size(), ps.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].student_id, m.student_ids[i]);
    EXPECT_EQ(rows[i].cluster, m.assignments[i]);
  }
  EXPECT_EQ(read_centroids(c), m.centroids);
  ElbowScan scan;
  scan.points = {{2, 0.5}, {3, 0.1 + 0.2}};
  std::stringstream e;
  write_elbow(scan, e);
  const auto back = read_elbow(e);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].error, 0.1 + 0.2);
}

}  // namespace
}  // namespace stylo
