#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "warpkit/averaging.hpp"
#include "warpkit/distances.hpp"
#include "warpkit/series.hpp"

namespace warpkit {

struct KMeansOptions {
  std::size_t k = 2;
  /// euclidean pairs with mean, dtw with dba, shapedtw with shapedba.
  DistanceConfig distance{};
  AveragingMethod averaging = AveragingMethod::dba;
  std::size_t max_iters = 50;
  double eps = 1e-6;
  std::uint64_t seed = 0;
  BarycenterOptions barycenter{};
  std::size_t threads = 1;
};

struct ClusteringResult {
  std::vector<Prototype> centroids;
  std::vector<std::size_t> assignments;
  double inertia = 0.0;
  /// Inertia after every assignment sweep.
  std::vector<double> inertia_trace;
  std::vector<std::size_t> initial_indices;
  std::size_t iterations = 0;
  bool converged = false;
};

/// The dissimilarity k-means minimises: squared Euclidean for euclidean,
/// the DP cost for dtw and shapedtw. Always evaluated as d(centroid, sample).
double clustering_distance(const DistanceConfig& config, const TimeSeries& centroid, const TimeSeries& sample);

/// Sum over samples of the distance to their assigned centroid.
double inertia(const DistanceConfig& config, std::span<const TimeSeries> centroids,
               std::span<const TimeSeries> samples, std::span<const std::size_t> assignments);

/// k-means with elastic barycenter averaging. Initial centroids are k
/// distinct samples drawn with the seed; an emptied cluster takes the sample
/// farthest from its centroid among clusters with at least two members.
ClusteringResult kmeans_eba(std::span<const TimeSeries> samples, const KMeansOptions& options);

/// Chance-corrected Rand index from pair counts. Returns 1 when both
/// labelings induce the same trivial partition (1 - E[RI] = 0).
double adjusted_rand_index(std::span<const long long> y, std::span<const long long> yhat);

/// Plain Rand index.
double rand_index(std::span<const long long> y, std::span<const long long> yhat);

}  // namespace warpkit
