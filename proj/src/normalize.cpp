#include "warpkit/normalize.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "warpkit/error.hpp"

namespace warpkit {

TimeSeries znormalize(const TimeSeries& series) {
  const std::size_t L = series.length();
  TimeSeries out(L, series.channels());
  for (std::size_t m = 0; m < series.channels(); ++m) {
    double mean = 0.0;
    for (std::size_t t = 0; t < L; ++t) mean += series(t, m);
    mean /= static_cast<double>(L);
    double var = 0.0;
    for (std::size_t t = 0; t < L; ++t) {
      const double d = series(t, m) - mean;
      var += d * d;
    }
    const double sd = std::sqrt(var / static_cast<double>(L));
    if (sd == 0.0) continue;  // constant channel stays zero
    for (std::size_t t = 0; t < L; ++t) out(t, m) = (series(t, m) - mean) / sd;
  }
  return out;
}

MinMaxScaler::MinMaxScaler(std::vector<double> min, std::vector<double> max)
    : min_(std::move(min)), max_(std::move(max)) {
  if (min_.size() != max_.size()) throw ArgumentError("scaler bounds have different channel counts");
  for (std::size_t m = 0; m < min_.size(); ++m) {
    if (max_[m] < min_[m]) throw ArgumentError("scaler max below min on channel " + std::to_string(m));
  }
}

MinMaxScaler MinMaxScaler::fit(const Dataset& dataset) {
  if (dataset.samples.empty()) throw ArgumentError("cannot fit a scaler on an empty dataset");
  dataset.validate();
  const std::size_t M = dataset.channels();
  std::vector<double> lo(M, std::numeric_limits<double>::infinity());
  std::vector<double> hi(M, -std::numeric_limits<double>::infinity());
  for (const auto& s : dataset.samples) {
    for (std::size_t t = 0; t < s.length(); ++t) {
      for (std::size_t m = 0; m < M; ++m) {
        lo[m] = std::min(lo[m], s(t, m));
        hi[m] = std::max(hi[m], s(t, m));
      }
    }
  }
  return MinMaxScaler(std::move(lo), std::move(hi));
}

TimeSeries MinMaxScaler::transform(const TimeSeries& series) const {
  if (series.channels() != min_.size()) throw ArgumentError("scaler channel count does not match series");
  TimeSeries out(series.length(), series.channels());
  for (std::size_t t = 0; t < series.length(); ++t) {
    for (std::size_t m = 0; m < series.channels(); ++m) {
      const double range = max_[m] - min_[m];
      out(t, m) = range > 0.0 ? (series(t, m) - min_[m]) / range : 0.0;
    }
  }
  return out;
}

Dataset MinMaxScaler::transform(const Dataset& dataset) const {
  Dataset out = dataset;
  for (auto& s : out.samples) s = transform(s);
  return out;
}

std::vector<std::size_t> MinMaxScaler::constant_channels() const {
  std::vector<std::size_t> out;
  for (std::size_t m = 0; m < min_.size(); ++m) {
    if (max_[m] == min_[m]) out.push_back(m);
  }
  return out;
}

ScaledDataset minmax_fit_transform(const Dataset& dataset) {
  auto scaler = MinMaxScaler::fit(dataset);
  for (auto m : scaler.constant_channels())
    std::cerr << "warning: channel " << m << " is constant; min-max scaling maps it to 0\n";
  auto scaled = scaler.transform(dataset);
  return {std::move(scaled), std::move(scaler)};
}

TimeSeries resample_linear(const TimeSeries& series, std::size_t target_length) {
  if (target_length < 2) throw ArgumentError("resample target length must be at least 2");
  const std::size_t L = series.length();
  if (L < 2) throw ArgumentError("resampling needs a series of length at least 2");
  const std::size_t M = series.channels();
  TimeSeries out(target_length, M);
  for (std::size_t i = 0; i < target_length; ++i) {
    if (i == target_length - 1) {
      for (std::size_t m = 0; m < M; ++m) out(i, m) = series(L - 1, m);
      continue;
    }
    // i * (L - 1) is an exact integer, so equal lengths reproduce the input.
    const double pos = static_cast<double>(i * (L - 1)) / static_cast<double>(target_length - 1);
    const auto j = std::min(static_cast<std::size_t>(pos), L - 2);
    const double frac = pos - static_cast<double>(j);
    for (std::size_t m = 0; m < M; ++m) {
      const double a = series(j, m);
      const double b = series(j + 1, m);
      out(i, m) = frac == 0.0 ? a : a + frac * (b - a);
    }
  }
  return out;
}

}  // namespace warpkit
