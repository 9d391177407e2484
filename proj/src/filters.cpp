#include "warpkit/filters.hpp"

#include <algorithm>

#include "warpkit/error.hpp"

namespace warpkit {
namespace {

constexpr double kPeakTemplate[12] = {-0.25, -1.0, -1.0, -0.25, 0.5, 2.0, 2.0, 0.5, -0.25, -1.0, -1.0, -0.25};

}  // namespace

std::string to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::increasing: return "increasing";
    case FilterKind::decreasing: return "decreasing";
    case FilterKind::peak: return "peak";
    case FilterKind::custom: return "custom";
  }
  return "unknown";
}

std::vector<double> convolve1d(const std::vector<double>& x, const Kernel& kernel) {
  if (kernel.taps.empty()) throw ArgumentError("empty kernel");
  if (kernel.dilation < 1) throw ArgumentError("dilation must be at least 1");
  const std::size_t span = kernel.span();
  if (x.size() < span)
    throw ArgumentError("series of length " + std::to_string(x.size()) + " is shorter than the kernel span " +
                        std::to_string(span));
  std::vector<double> out(x.size() - span + 1);
  for (std::size_t t = 0; t < out.size(); ++t) {
    double s = 0.0;
    for (std::size_t k = 0; k < kernel.taps.size(); ++k) s += x[t + k * kernel.dilation] * kernel.taps[k];
    out[t] = s;
  }
  return out;
}

TimeSeries convolve1d(const TimeSeries& x, const Kernel& kernel) {
  if (x.channels() != 1) throw ArgumentError("convolution expects a univariate series");
  return TimeSeries::univariate(convolve1d(x.channel(0), kernel));
}

Kernel make_filter(FilterKind kind, std::size_t length, std::size_t dilation) {
  if (dilation < 1) throw ArgumentError("dilation must be at least 1");
  Kernel k;
  k.kind = kind;
  k.dilation = dilation;
  switch (kind) {
    case FilterKind::increasing:
    case FilterKind::decreasing: {
      if (length < 2 || length % 2 != 0)
        throw ArgumentError("trend filter length must be even and positive, got " + std::to_string(length));
      const double first = kind == FilterKind::increasing ? -1.0 : 1.0;
      for (std::size_t i = 0; i < length; ++i) k.taps.push_back(i % 2 == 0 ? first : -first);
      return k;
    }
    case FilterKind::peak: {
      if (length < 4 || length % 4 != 0)
        throw ArgumentError("peak filter length must be a positive multiple of 4, got " + std::to_string(length));
      const std::size_t quarter = length / 4;
      for (std::size_t q = 0; q < 4; ++q) {
        for (std::size_t j = 0; j < quarter; ++j) {
          const auto src = static_cast<std::size_t>((static_cast<double>(j) + 0.5) * 3.0 / static_cast<double>(quarter));
          k.taps.push_back(kPeakTemplate[3 * q + std::min<std::size_t>(src, 2)]);
        }
      }
      return k;
    }
    case FilterKind::custom: break;
  }
  throw ArgumentError("make_filter builds increasing, decreasing or peak kernels only");
}

FeatureBank handcrafted_bank(const TimeSeries& x, const std::vector<std::size_t>& lengths) {
  if (lengths.empty()) throw ArgumentError("no filter lengths given");
  if (x.channels() != 1) throw ArgumentError("the filter bank expects a univariate series");

  std::vector<Kernel> kernels;
  for (auto len : lengths) {
    kernels.push_back(make_filter(FilterKind::increasing, len));
    kernels.push_back(make_filter(FilterKind::decreasing, len));
    kernels.push_back(make_filter(FilterKind::peak, (len + 3) / 4 * 4));
  }
  std::size_t longest = 0;
  std::size_t shortest = kernels.front().size();
  for (const auto& k : kernels) {
    longest = std::max(longest, k.size());
    shortest = std::min(shortest, k.size());
  }
  if (x.length() < longest)
    throw ArgumentError("series of length " + std::to_string(x.length()) + " is shorter than the largest kernel (" +
                        std::to_string(longest) + ")");

  const auto values = x.channel(0);
  const std::size_t out_len = x.length() - shortest + 1;
  FeatureBank bank;
  bank.features = TimeSeries(out_len, kernels.size());
  for (std::size_t c = 0; c < kernels.size(); ++c) {
    const auto raw = convolve1d(values, kernels[c]);
    for (std::size_t t = 0; t < raw.size(); ++t) bank.features(t, c) = std::max(0.0, raw[t]);
    bank.channels.push_back({kernels[c].kind, kernels[c].size(), raw.size()});
  }
  return bank;
}

}  // namespace warpkit
