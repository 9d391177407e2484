#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "warpkit/series.hpp"

namespace warpkit {

/// Dense row-major matrix used for DP tables and pairwise cost grids.
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// One aligned pair of timestamps, 0-based.
struct PathStep {
  std::size_t i;
  std::size_t j;
  friend bool operator==(const PathStep&, const PathStep&) = default;
};

/// Admissible alignment between series of lengths L1 and L2: starts at
/// (0, 0), ends at (L1-1, L2-1), and every step advances i and/or j by one.
/// The constructor rejects anything else.
class WarpingPath {
 public:
  WarpingPath() = default;
  WarpingPath(std::vector<PathStep> steps, std::size_t length1, std::size_t length2);

  static WarpingPath diagonal(std::size_t length);

  std::span<const PathStep> steps() const noexcept { return steps_; }
  std::size_t size() const noexcept { return steps_.size(); }
  std::size_t length1() const noexcept { return length1_; }
  std::size_t length2() const noexcept { return length2_; }
  const PathStep& operator[](std::size_t k) const { return steps_[k]; }

  friend bool operator==(const WarpingPath&, const WarpingPath&) = default;

 private:
  std::vector<PathStep> steps_;
  std::size_t length1_ = 0;
  std::size_t length2_ = 0;
};

struct Alignment {
  double cost = 0.0;
  WarpingPath path;
};

enum class DistanceKind { euclidean, dtw, softdtw, msm, shapedtw };

struct DistanceConfig {
  DistanceKind kind = DistanceKind::dtw;
  double gamma = 1.0;      // SoftDTW smoothing, > 0
  double msm_cost = 0.5;   // MSM split/merge penalty, >= 0
  std::size_t reach = 15;  // ShapeDTW half window

  void validate() const;
};

DistanceKind parse_distance_kind(const std::string& name);
std::string to_string(DistanceKind kind);

/// sqrt of the summed squared differences; equal shapes required.
double euclidean(const TimeSeries& x, const TimeSeries& y);
double squared_euclidean(const TimeSeries& x, const TimeSeries& y);

/// Pairwise squared timestamp distances, summed over channels.
Grid pairwise_cost(const TimeSeries& x, const TimeSeries& y);

/// Runs the DTW recursion over an arbitrary cost grid and backtracks one
/// optimal path. Ties prefer the diagonal, then (i-1, j), then (i, j-1).
Alignment dtw_on_costs(const Grid& costs);

/// DTW with squared per-timestamp cost accumulated along the optimal path and
/// no final root. Lengths may differ; channel counts may not.
Alignment dtw(const TimeSeries& x, const TimeSeries& y);

/// Cost-only DTW with a rolling row (no path, O(L2) memory). Same value as
/// dtw(x, y).cost bit-for-bit.
double dtw_cost(const TimeSeries& x, const TimeSeries& y);

/// The rooted form sqrt(dtw cost).
double dtw_rooted(const TimeSeries& x, const TimeSeries& y);

/// -gamma * log(sum exp(-a_i / gamma)), shifted by the minimum for stability.
/// Infinite arguments contribute nothing.
double soft_min(std::span<const double> values, double gamma);

/// DTW recursion with min replaced by soft_min. Lengths may differ.
double soft_dtw(const TimeSeries& x, const TimeSeries& y, double gamma);

/// Move-Split-Merge, summed over channels. Equal lengths required.
double msm(const TimeSeries& x, const TimeSeries& y, double c);

/// MSM split/merge cost for inserting `value` between `previous` and `other`.
double msm_transition_cost(double value, double previous, double other, double c);

/// Cost of the identity-descriptor ShapeDTW alignment between every pair of
/// timestamps: the pairwise cost grid slid along the diagonal over offsets
/// -reach..reach, with indices clamped to the series (edge replication).
Grid shape_window_costs(const TimeSeries& x, const TimeSeries& y, std::size_t reach);

/// ShapeDTW with the identity descriptor: the path is optimal on the windowed
/// costs, the returned cost is the squared-difference sum of the original
/// series along that path. Equal lengths required.
Alignment shape_dtw(const TimeSeries& x, const TimeSeries& y, std::size_t reach);

/// Sum of squared timestamp differences along a given path.
double path_cost(const TimeSeries& x, const TimeSeries& y, const WarpingPath& path);

/// Scalar distance dispatch used by the CLI. Euclidean is rooted; the elastic
/// measures return their DP values.
double distance(const DistanceConfig& config, const TimeSeries& x, const TimeSeries& y);

}  // namespace warpkit
