#include "warpkit/series.hpp"

#include <algorithm>
#include <cmath>

#include "warpkit/error.hpp"

namespace warpkit {

TimeSeries::TimeSeries(std::size_t length, std::size_t channels, std::vector<double> values)
    : length_(length), channels_(channels), values_(std::move(values)) {
  if (length_ == 0 || channels_ == 0) throw ArgumentError("time series needs at least one timestamp and one channel");
  if (values_.size() != length_ * channels_) throw ArgumentError("time series value count does not match its shape");
  for (double v : values_) {
    if (!std::isfinite(v)) throw ArgumentError("time series values must be finite");
  }
}

TimeSeries::TimeSeries(std::size_t length, std::size_t channels)
    : TimeSeries(length, channels, std::vector<double>(length * channels, 0.0)) {}

TimeSeries TimeSeries::univariate(std::vector<double> values) {
  const std::size_t n = values.size();
  return TimeSeries(n, 1, std::move(values));
}

TimeSeries TimeSeries::from_channels(const std::vector<std::vector<double>>& channels) {
  if (channels.empty()) throw ArgumentError("time series needs at least one channel");
  const std::size_t length = channels.front().size();
  std::vector<double> values(length * channels.size());
  for (std::size_t m = 0; m < channels.size(); ++m) {
    if (channels[m].size() != length) throw ArgumentError("channels have different lengths");
    for (std::size_t t = 0; t < length; ++t) values[t * channels.size() + m] = channels[m][t];
  }
  return TimeSeries(length, channels.size(), std::move(values));
}

std::vector<double> TimeSeries::channel(std::size_t m) const {
  std::vector<double> out(length_);
  for (std::size_t t = 0; t < length_; ++t) out[t] = (*this)(t, m);
  return out;
}

double TimeSeries::min_value() const { return *std::min_element(values_.begin(), values_.end()); }
double TimeSeries::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

bool Dataset::equal_length() const {
  return std::all_of(samples.begin(), samples.end(),
                     [&](const TimeSeries& s) { return s.length() == samples.front().length(); });
}

void Dataset::validate() const {
  if (has_labels() && labels.size() != samples.size())
    throw ArgumentError("dataset has " + std::to_string(labels.size()) + " labels for " +
                        std::to_string(samples.size()) + " samples");
  for (const auto& s : samples) {
    if (s.channels() != channels()) throw ArgumentError("dataset samples have different channel counts");
  }
}

}  // namespace warpkit
