#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "warpkit/distances.hpp"
#include "warpkit/series.hpp"

namespace warpkit {

enum class AveragingMethod { mean, dba, shapedba };

AveragingMethod parse_averaging_method(const std::string& name);
std::string to_string(AveragingMethod method);

struct BarycenterOptions {
  std::size_t max_iters = 30;
  /// Stop once the objective drops by no more than this. Unset means
  /// 1e-6 times the objective of the initial prototype.
  std::optional<double> tol;
  std::size_t threads = 1;
  /// When set, an update that raises the objective ends the iteration and
  /// the previous prototype is kept. When clear, every update is accepted and
  /// the iteration stops once |dF| <= tol or max_iters is reached.
  bool guard_increase = true;
};

/// A barycenter with the samples (and weights) it was built from and the
/// history of the iteration that produced it.
struct Prototype {
  TimeSeries series;
  std::optional<double> label;
  std::vector<std::size_t> source_indices;
  std::vector<double> source_weights;

  std::size_t iterations = 0;
  bool converged = false;
  /// Objective sum_i w_i * d(prototype, x_i) for the initial prototype and for
  /// every update evaluated afterwards, in order.
  std::vector<double> objective_trace;
  /// Updates that raised the objective. With guard_increase such an update
  /// ends the iteration and the previous prototype is kept.
  std::size_t rejected_steps = 0;
};

/// Timestamp-wise mean of equal-shape series.
Prototype arithmetic_mean(std::span<const TimeSeries> set);

/// Index of the series with the smallest summed DTW cost to the others
/// (lowest index on ties).
std::size_t dtw_medoid(std::span<const TimeSeries> set, std::size_t threads = 1);

/// DTW Barycenter Averaging from an explicit initial prototype. The
/// prototype keeps the length of `init`; samples may have other lengths.
Prototype dba(std::span<const TimeSeries> set, const TimeSeries& init, const BarycenterOptions& options = {});

/// DBA initialised at the DTW medoid of the set.
Prototype dba(std::span<const TimeSeries> set, const BarycenterOptions& options = {});

/// DBA with ShapeDTW alignments. Equal lengths required.
Prototype shape_dba(std::span<const TimeSeries> set, std::size_t reach, const TimeSeries& init,
                    const BarycenterOptions& options = {});
Prototype shape_dba(std::span<const TimeSeries> set, std::size_t reach, const BarycenterOptions& options = {});

/// Initial prototype drawn uniformly from the set with a seeded generator.
TimeSeries random_init(std::span<const TimeSeries> set, std::uint64_t seed);

/// Distance-decayed neighbour weights around a reference series.
struct NeighborWeights {
  std::size_t ref_index = 0;
  std::vector<std::size_t> neighbor_indices;  // into the pool, nearest first
  std::vector<double> dtw_distances;
  std::vector<double> weights;  // exp(ln 0.5 * d_i / d_nn)
  double d_nn = 0.0;
};

/// Picks the `count` DTW-nearest members of `pool` (ties by lowest index) and
/// weights them by exp(ln(0.5) * d / d_nn), where d_nn is the nearest
/// distance. When d_nn is zero, zero-distance neighbours get weight 1 and the
/// smallest positive distance takes the place of d_nn.
NeighborWeights neighbor_weights(const TimeSeries& ref, std::span<const TimeSeries> pool, std::size_t count);

/// ShapeDBA where each associate contributes weight * value and a timestamp
/// becomes sum(w v) / sum(w). The reference has weight 1 and is the initial
/// prototype.
Prototype weighted_shape_dba(const TimeSeries& ref, std::span<const TimeSeries> neighbors,
                             std::span<const double> weights, std::size_t reach,
                             const BarycenterOptions& options = {});

/// Label weights for {reference, neighbours}: min-max scaled, then divided by
/// their sum. Equal weights fall back to uniform.
std::vector<double> normalized_label_weights(std::span<const double> weights);

struct ExtendOptions {
  std::size_t neighbors = 5;
  std::size_t reach = 15;
  BarycenterOptions barycenter;
};

/// Appends one weighted-ShapeDBA sample per reference, labelled with the
/// normalized-weight combination of the contributing scores. Output holds
/// the original samples followed by the synthetic ones.
Dataset extend_dataset(const Dataset& dataset, const ExtendOptions& options);

}  // namespace warpkit
