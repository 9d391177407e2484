#pragma once

#include <cstddef>
#include <vector>

#include "warpkit/series.hpp"

namespace warpkit {

/// Per-channel z-normalization with the population standard deviation.
/// Constant channels become all zeros.
TimeSeries znormalize(const TimeSeries& series);

/// Dataset-global per-channel bounds learned on a training set.
class MinMaxScaler {
 public:
  MinMaxScaler() = default;
  MinMaxScaler(std::vector<double> min, std::vector<double> max);

  static MinMaxScaler fit(const Dataset& dataset);

  /// (x - min) / (max - min) per channel; constant channels map to 0.
  /// Held-out data may fall outside [0, 1].
  TimeSeries transform(const TimeSeries& series) const;
  Dataset transform(const Dataset& dataset) const;

  const std::vector<double>& min() const noexcept { return min_; }
  const std::vector<double>& max() const noexcept { return max_; }
  /// Channels whose training range was empty.
  std::vector<std::size_t> constant_channels() const;

 private:
  std::vector<double> min_;
  std::vector<double> max_;
};

struct ScaledDataset {
  Dataset dataset;
  MinMaxScaler scaler;
};

/// Fits the scaler on `dataset` and applies it. Constant channels are logged
/// as a warning on stderr.
ScaledDataset minmax_fit_transform(const Dataset& dataset);

/// Per-channel linear interpolation onto `target_length` equally spaced
/// points. Endpoints are reproduced exactly.
TimeSeries resample_linear(const TimeSeries& series, std::size_t target_length);

}  // namespace warpkit
