#include "warpkit/distances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "warpkit/error.hpp"

namespace warpkit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_same_channels(const TimeSeries& x, const TimeSeries& y) {
  if (x.empty() || y.empty()) throw ArgumentError("distance on an empty series");
  if (x.channels() != y.channels())
    throw ArgumentError("channel mismatch: " + std::to_string(x.channels()) + " vs " + std::to_string(y.channels()));
}

void require_same_shape(const TimeSeries& x, const TimeSeries& y, const char* what) {
  require_same_channels(x, y);
  if (x.length() != y.length())
    throw ArgumentError(std::string(what) + " needs equal lengths: " + std::to_string(x.length()) + " vs " +
                        std::to_string(y.length()));
}

std::size_t clamp_index(std::ptrdiff_t t, std::size_t length) {
  if (t < 0) return 0;
  if (static_cast<std::size_t>(t) >= length) return length - 1;
  return static_cast<std::size_t>(t);
}

}  // namespace

WarpingPath::WarpingPath(std::vector<PathStep> steps, std::size_t length1, std::size_t length2)
    : steps_(std::move(steps)), length1_(length1), length2_(length2) {
  if (steps_.empty() || length1_ == 0 || length2_ == 0) throw ArgumentError("warping path is empty");
  if (steps_.front() != PathStep{0, 0}) throw ArgumentError("warping path must start at (1,1)");
  if (steps_.back() != PathStep{length1_ - 1, length2_ - 1}) throw ArgumentError("warping path must end at (L1,L2)");
  for (std::size_t k = 1; k < steps_.size(); ++k) {
    const auto& a = steps_[k - 1];
    const auto& b = steps_[k];
    const bool ok_i = b.i == a.i || b.i == a.i + 1;
    const bool ok_j = b.j == a.j || b.j == a.j + 1;
    if (!ok_i || !ok_j || (b.i == a.i && b.j == a.j))
      throw ArgumentError("warping path step " + std::to_string(k) + " is not monotone and continuous");
  }
  // Boundary and step rules imply max(L1, L2) <= size <= L1 + L2 - 1.
}

WarpingPath WarpingPath::diagonal(std::size_t length) {
  std::vector<PathStep> steps(length);
  for (std::size_t t = 0; t < length; ++t) steps[t] = {t, t};
  return WarpingPath(std::move(steps), length, length);
}

void DistanceConfig::validate() const {
  if (kind == DistanceKind::softdtw && !(gamma > 0.0)) throw ArgumentError("SoftDTW gamma must be positive");
  if (kind == DistanceKind::msm && !(msm_cost >= 0.0)) throw ArgumentError("MSM cost must be nonnegative");
}

DistanceKind parse_distance_kind(const std::string& name) {
  if (name == "ed" || name == "euclidean") return DistanceKind::euclidean;
  if (name == "dtw") return DistanceKind::dtw;
  if (name == "softdtw") return DistanceKind::softdtw;
  if (name == "msm") return DistanceKind::msm;
  if (name == "shapedtw") return DistanceKind::shapedtw;
  throw ArgumentError("unknown distance kind '" + name + "'");
}

std::string to_string(DistanceKind kind) {
  switch (kind) {
    case DistanceKind::euclidean: return "euclidean";
    case DistanceKind::dtw: return "dtw";
    case DistanceKind::softdtw: return "softdtw";
    case DistanceKind::msm: return "msm";
    case DistanceKind::shapedtw: return "shapedtw";
  }
  return "unknown";
}

double squared_euclidean(const TimeSeries& x, const TimeSeries& y) {
  require_same_shape(x, y, "euclidean distance");
  double s = 0.0;
  for (std::size_t t = 0; t < x.length(); ++t) s += squared_distance(x.row(t), y.row(t));
  return s;
}

double euclidean(const TimeSeries& x, const TimeSeries& y) { return std::sqrt(squared_euclidean(x, y)); }

Grid pairwise_cost(const TimeSeries& x, const TimeSeries& y) {
  require_same_channels(x, y);
  Grid c(x.length(), y.length());
  for (std::size_t i = 0; i < x.length(); ++i) {
    for (std::size_t j = 0; j < y.length(); ++j) c(i, j) = squared_distance(x.row(i), y.row(j));
  }
  return c;
}

Alignment dtw_on_costs(const Grid& costs) {
  const std::size_t n = costs.rows();
  const std::size_t m = costs.cols();
  if (n == 0 || m == 0) throw ArgumentError("DTW on an empty cost grid");
  Grid acc(n + 1, m + 1, kInf);
  acc(0, 0) = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const double best = std::min({acc(i - 1, j - 1), acc(i - 1, j), acc(i, j - 1)});
      acc(i, j) = costs(i - 1, j - 1) + best;
    }
  }

  std::vector<PathStep> steps;
  steps.reserve(n + m - 1);
  std::size_t i = n;
  std::size_t j = m;
  while (true) {
    steps.push_back({i - 1, j - 1});
    if (i == 1 && j == 1) break;
    const double diag = acc(i - 1, j - 1);
    const double up = acc(i - 1, j);
    const double left = acc(i, j - 1);
    if (diag <= up && diag <= left) {
      --i;
      --j;
    } else if (up <= left) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(steps.begin(), steps.end());
  return {acc(n, m), WarpingPath(std::move(steps), n, m)};
}

Alignment dtw(const TimeSeries& x, const TimeSeries& y) { return dtw_on_costs(pairwise_cost(x, y)); }

double dtw_cost(const TimeSeries& x, const TimeSeries& y) {
  require_same_channels(x, y);
  const std::size_t m = y.length();
  std::vector<double> prev(m + 1, kInf);
  std::vector<double> cur(m + 1, kInf);
  prev[0] = 0.0;
  for (std::size_t i = 1; i <= x.length(); ++i) {
    cur[0] = kInf;
    for (std::size_t j = 1; j <= m; ++j) {
      const double best = std::min({prev[j - 1], prev[j], cur[j - 1]});
      cur[j] = squared_distance(x.row(i - 1), y.row(j - 1)) + best;
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

double dtw_rooted(const TimeSeries& x, const TimeSeries& y) { return std::sqrt(dtw_cost(x, y)); }

double soft_min(std::span<const double> values, double gamma) {
  if (!(gamma > 0.0)) throw ArgumentError("soft-min gamma must be positive");
  double lo = kInf;
  for (double v : values) lo = std::min(lo, v);
  if (lo == kInf) return kInf;
  double sum = 0.0;
  for (double v : values) {
    if (v != kInf) sum += std::exp(-(v - lo) / gamma);
  }
  return lo - gamma * std::log(sum);
}

double soft_dtw(const TimeSeries& x, const TimeSeries& y, double gamma) {
  if (!(gamma > 0.0)) throw ArgumentError("SoftDTW gamma must be positive");
  const Grid c = pairwise_cost(x, y);
  const std::size_t n = c.rows();
  const std::size_t m = c.cols();
  Grid acc(n + 1, m + 1, kInf);
  acc(0, 0) = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const double prev[3] = {acc(i - 1, j - 1), acc(i - 1, j), acc(i, j - 1)};
      acc(i, j) = c(i - 1, j - 1) + soft_min(prev, gamma);
    }
  }
  return acc(n, m);
}

double msm_transition_cost(double value, double previous, double other, double c) {
  if ((previous <= value && value <= other) || (previous >= value && value >= other)) return c;
  return c + std::min(std::abs(value - previous), std::abs(value - other));
}

double msm(const TimeSeries& x, const TimeSeries& y, double c) {
  if (!(c >= 0.0)) throw ArgumentError("MSM cost must be nonnegative");
  require_same_shape(x, y, "MSM");
  const std::size_t L = x.length();
  double total = 0.0;
  Grid d(L, L);
  for (std::size_t ch = 0; ch < x.channels(); ++ch) {
    d(0, 0) = std::abs(x(0, ch) - y(0, ch));
    for (std::size_t t = 1; t < L; ++t) {
      d(t, 0) = d(t - 1, 0) + msm_transition_cost(x(t, ch), x(t - 1, ch), y(0, ch), c);
      d(0, t) = d(0, t - 1) + msm_transition_cost(y(t, ch), y(t - 1, ch), x(0, ch), c);
    }
    for (std::size_t i = 1; i < L; ++i) {
      for (std::size_t j = 1; j < L; ++j) {
        const double move = d(i - 1, j - 1) + std::abs(x(i, ch) - y(j, ch));
        const double split = d(i - 1, j) + msm_transition_cost(x(i, ch), x(i - 1, ch), y(j, ch), c);
        const double merge = d(i, j - 1) + msm_transition_cost(y(j, ch), y(j - 1, ch), x(i, ch), c);
        d(i, j) = std::min({move, split, merge});
      }
    }
    total += d(L - 1, L - 1);
  }
  return total;
}

Grid shape_window_costs(const TimeSeries& x, const TimeSeries& y, std::size_t reach) {
  require_same_shape(x, y, "ShapeDTW");
  const Grid base = pairwise_cost(x, y);
  const std::size_t L = x.length();
  Grid acc(L, L, 0.0);
  const auto r = static_cast<std::ptrdiff_t>(reach);
  for (std::ptrdiff_t k = -r; k <= r; ++k) {
    for (std::size_t i = 0; i < L; ++i) {
      const std::size_t si = clamp_index(static_cast<std::ptrdiff_t>(i) + k, L);
      for (std::size_t j = 0; j < L; ++j) {
        acc(i, j) += base(si, clamp_index(static_cast<std::ptrdiff_t>(j) + k, L));
      }
    }
  }
  return acc;
}

double path_cost(const TimeSeries& x, const TimeSeries& y, const WarpingPath& path) {
  require_same_channels(x, y);
  if (path.length1() != x.length() || path.length2() != y.length())
    throw ArgumentError("warping path does not match series lengths");
  double s = 0.0;
  for (const auto& step : path.steps()) s = squared_distance(x.row(step.i), y.row(step.j)) + s;
  return s;
}

Alignment shape_dtw(const TimeSeries& x, const TimeSeries& y, std::size_t reach) {
  auto aligned = dtw_on_costs(shape_window_costs(x, y, reach));
  aligned.cost = path_cost(x, y, aligned.path);
  return aligned;
}

double distance(const DistanceConfig& config, const TimeSeries& x, const TimeSeries& y) {
  config.validate();
  switch (config.kind) {
    case DistanceKind::euclidean: return euclidean(x, y);
    case DistanceKind::dtw: return dtw_cost(x, y);
    case DistanceKind::softdtw: return soft_dtw(x, y, config.gamma);
    case DistanceKind::msm: return msm(x, y, config.msm_cost);
    case DistanceKind::shapedtw: return shape_dtw(x, y, config.reach).cost;
  }
  throw ArgumentError("unknown distance kind");
}

}  // namespace warpkit
