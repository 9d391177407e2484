#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "warpkit/series.hpp"

namespace warpkit {

enum class FilterKind { increasing, decreasing, peak, custom };

std::string to_string(FilterKind kind);

struct Kernel {
  std::vector<double> taps;
  std::size_t dilation = 1;
  FilterKind kind = FilterKind::custom;

  std::size_t size() const noexcept { return taps.size(); }
  /// (K - 1) * d + 1
  std::size_t span() const noexcept { return (taps.size() - 1) * dilation + 1; }
};

/// Valid 1-D convolution with stride 1: o_t = sum_k x[t + k*d] * w[k].
/// Output length is L - (K-1)*d.
std::vector<double> convolve1d(const std::vector<double>& x, const Kernel& kernel);
TimeSeries convolve1d(const TimeSeries& x, const Kernel& kernel);

/// Trend kernels alternate -1, 1, ... (increasing) or 1, -1, ... (decreasing)
/// and need an even length. The peak kernel needs a length divisible by 4;
/// each of its four quarters resamples the matching quarter of the 12-tap
/// template
///   -0.25 -1 -1 | -0.25 0.5 2 | 2 0.5 -0.25 | -1 -1 -0.25
/// by nearest index.
Kernel make_filter(FilterKind kind, std::size_t length, std::size_t dilation = 1);

struct FeatureChannel {
  FilterKind kind;
  std::size_t length;
  std::size_t valid_length;  // output samples before right padding
};

struct FeatureBank {
  TimeSeries features;  // L - Kmin + 1 timestamps, one channel per filter
  std::vector<FeatureChannel> channels;
};

/// For each length: increasing, decreasing and peak filters (peak length
/// rounded up to a multiple of 4), valid convolution, then max(0, .).
/// Shorter channels are zero-padded on the right to the longest output.
FeatureBank handcrafted_bank(const TimeSeries& x, const std::vector<std::size_t>& lengths);

}  // namespace warpkit
