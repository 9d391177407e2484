#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace warpkit {

/// A multivariate series of `length()` timestamps by `channels()` channels,
/// stored row-major (timestamp-major). Values are finite and the shape is at
/// least 1x1; both are checked on construction.
class TimeSeries {
 public:
  TimeSeries() = default;

  /// Builds an L x M series from row-major values.
  TimeSeries(std::size_t length, std::size_t channels, std::vector<double> values);

  /// Zero-filled L x M series.
  TimeSeries(std::size_t length, std::size_t channels);

  static TimeSeries univariate(std::vector<double> values);
  static TimeSeries univariate(std::initializer_list<double> values) {
    return univariate(std::vector<double>(values));
  }
  /// Builds a series from one vector per channel; all channels must share a length.
  static TimeSeries from_channels(const std::vector<std::vector<double>>& channels);

  std::size_t length() const noexcept { return length_; }
  std::size_t channels() const noexcept { return channels_; }
  bool empty() const noexcept { return values_.empty(); }

  double operator()(std::size_t t, std::size_t m) const { return values_[t * channels_ + m]; }
  double& operator()(std::size_t t, std::size_t m) { return values_[t * channels_ + m]; }

  /// All channel values at timestamp t.
  std::span<const double> row(std::size_t t) const {
    return {values_.data() + t * channels_, channels_};
  }
  std::span<double> row(std::size_t t) { return {values_.data() + t * channels_, channels_}; }

  std::vector<double> channel(std::size_t m) const;
  std::span<const double> values() const noexcept { return values_; }

  double min_value() const;
  double max_value() const;

  friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

 private:
  std::size_t length_ = 0;
  std::size_t channels_ = 0;
  std::vector<double> values_;
};

enum class LabelKind { none, integer, real };

/// A named collection of series with optional per-sample labels. Labels are
/// stored as doubles; `label_kind` says whether they are class ids or scores.
struct Dataset {
  std::string name;
  std::vector<TimeSeries> samples;
  std::vector<double> labels;
  LabelKind label_kind = LabelKind::none;

  std::size_t size() const noexcept { return samples.size(); }
  bool has_labels() const noexcept { return label_kind != LabelKind::none; }
  std::size_t channels() const { return samples.empty() ? 0 : samples.front().channels(); }
  bool equal_length() const;

  /// Throws ArgumentError when labels and samples disagree in count or
  /// samples disagree in channel count.
  void validate() const;
};

/// Squared difference between two timestamps summed over channels.
inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) {
    const double d = a[m] - b[m];
    s += d * d;
  }
  return s;
}

}  // namespace warpkit
