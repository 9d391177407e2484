#include "warpkit/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "warpkit/error.hpp"
#include "warpkit/parallel.hpp"
#include "warpkit/rng.hpp"

namespace warpkit {
namespace {

// Neumaier compensated sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      carry += (sum - t) + v;
    else
      carry += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

using Aligner = std::function<Alignment(const TimeSeries& prototype, const TimeSeries& sample)>;

void require_nonempty(std::span<const TimeSeries> set) {
  if (set.empty()) throw ArgumentError("cannot average an empty set");
}

void require_channels(std::span<const TimeSeries> set, const TimeSeries& init) {
  for (const auto& s : set) {
    if (s.channels() != init.channels()) throw ArgumentError("set and initial prototype differ in channel count");
  }
}

void require_equal_lengths(std::span<const TimeSeries> set, std::size_t length, const char* what) {
  for (const auto& s : set) {
    if (s.length() != length) throw ArgumentError(std::string(what) + " needs equal-length series");
  }
}

struct Sweep {
  std::vector<Alignment> alignments;
  double objective = 0.0;
};

Sweep align_all(std::span<const TimeSeries> set, std::span<const double> weights, const TimeSeries& prototype,
                const Aligner& align, std::size_t threads) {
  Sweep sweep;
  sweep.alignments.resize(set.size());
  parallel_for(set.size(), threads, [&](std::size_t i) { sweep.alignments[i] = align(prototype, set[i]); });
  CompensatedSum total;
  for (std::size_t i = 0; i < set.size(); ++i) total.add(weights[i] * sweep.alignments[i].cost);
  sweep.objective = total.value();
  return sweep;
}

TimeSeries barycenter_update(std::span<const TimeSeries> set, std::span<const double> weights,
                             const TimeSeries& prototype, const std::vector<Alignment>& alignments) {
  const std::size_t L = prototype.length();
  const std::size_t M = prototype.channels();
  std::vector<CompensatedSum> num(L * M);
  std::vector<CompensatedSum> den(L);
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double w = weights[i];
    for (const auto& step : alignments[i].path.steps()) {
      for (std::size_t m = 0; m < M; ++m) num[step.i * M + m].add(w * set[i](step.j, m));
      den[step.i].add(w);
    }
  }
  TimeSeries next(L, M);
  for (std::size_t t = 0; t < L; ++t) {
    // Every prototype timestamp has associates: paths cover all rows.
    const double d = den[t].value();
    for (std::size_t m = 0; m < M; ++m) next(t, m) = num[t * M + m].value() / d;
  }
  return next;
}

Prototype iterate_barycenter(std::span<const TimeSeries> set, std::span<const double> weights,
                             const TimeSeries& init, const Aligner& align, const BarycenterOptions& options) {
  require_nonempty(set);
  require_channels(set, init);
  if (weights.size() != set.size()) throw ArgumentError("one weight per series required");
  for (double w : weights) {
    if (!(w > 0.0)) throw ArgumentError("barycenter weights must be positive");
  }

  Prototype result;
  result.series = init;
  result.source_indices.resize(set.size());
  std::iota(result.source_indices.begin(), result.source_indices.end(), std::size_t{0});
  result.source_weights.assign(weights.begin(), weights.end());

  Sweep current = align_all(set, weights, init, align, options.threads);
  result.objective_trace.push_back(current.objective);
  const double tol = options.tol.value_or(1e-6 * current.objective);

  for (std::size_t it = 1; it <= options.max_iters; ++it) {
    TimeSeries candidate = barycenter_update(set, weights, result.series, current.alignments);
    Sweep next = align_all(set, weights, candidate, align, options.threads);
    result.objective_trace.push_back(next.objective);
    result.iterations = it;
    if (next.objective > current.objective) {
      ++result.rejected_steps;
      if (options.guard_increase) {
        result.converged = true;
        break;
      }
    }
    const double gain = current.objective - next.objective;
    result.series = std::move(candidate);
    current = std::move(next);
    if (std::abs(gain) <= tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

Aligner dtw_aligner() {
  return [](const TimeSeries& p, const TimeSeries& x) { return dtw(p, x); };
}

Aligner shape_aligner(std::size_t reach) {
  return [reach](const TimeSeries& p, const TimeSeries& x) { return shape_dtw(p, x, reach); };
}

}  // namespace

AveragingMethod parse_averaging_method(const std::string& name) {
  if (name == "mean") return AveragingMethod::mean;
  if (name == "dba") return AveragingMethod::dba;
  if (name == "shapedba") return AveragingMethod::shapedba;
  throw ArgumentError("unknown averaging method '" + name + "'");
}

std::string to_string(AveragingMethod method) {
  switch (method) {
    case AveragingMethod::mean: return "mean";
    case AveragingMethod::dba: return "dba";
    case AveragingMethod::shapedba: return "shapedba";
  }
  return "unknown";
}

Prototype arithmetic_mean(std::span<const TimeSeries> set) {
  require_nonempty(set);
  const auto& first = set.front();
  for (const auto& s : set) {
    if (s.length() != first.length() || s.channels() != first.channels())
      throw ArgumentError("arithmetic mean needs series of equal shape");
  }
  TimeSeries mean(first.length(), first.channels());
  const double n = static_cast<double>(set.size());
  for (std::size_t t = 0; t < first.length(); ++t) {
    for (std::size_t m = 0; m < first.channels(); ++m) {
      CompensatedSum s;
      for (const auto& x : set) s.add(x(t, m));
      mean(t, m) = s.value() / n;
    }
  }
  Prototype p;
  p.series = std::move(mean);
  p.source_indices.resize(set.size());
  std::iota(p.source_indices.begin(), p.source_indices.end(), std::size_t{0});
  p.source_weights.assign(set.size(), 1.0);
  p.iterations = 1;
  p.converged = true;
  return p;
}

std::size_t dtw_medoid(std::span<const TimeSeries> set, std::size_t threads) {
  require_nonempty(set);
  const std::size_t n = set.size();
  std::vector<double> costs(n * n, 0.0);
  parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) costs[i * n + j] = dtw_cost(set[i], set[j]);
  });
  std::size_t best = 0;
  double best_sum = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += i < j ? costs[i * n + j] : costs[j * n + i];
    if (s < best_sum) {
      best_sum = s;
      best = i;
    }
  }
  return best;
}

TimeSeries random_init(std::span<const TimeSeries> set, std::uint64_t seed) {
  require_nonempty(set);
  Rng rng(seed);
  return set[rng.below(set.size())];
}

Prototype dba(std::span<const TimeSeries> set, const TimeSeries& init, const BarycenterOptions& options) {
  const std::vector<double> ones(set.size(), 1.0);
  return iterate_barycenter(set, ones, init, dtw_aligner(), options);
}

Prototype dba(std::span<const TimeSeries> set, const BarycenterOptions& options) {
  require_nonempty(set);
  return dba(set, set[dtw_medoid(set, options.threads)], options);
}

Prototype shape_dba(std::span<const TimeSeries> set, std::size_t reach, const TimeSeries& init,
                    const BarycenterOptions& options) {
  require_nonempty(set);
  require_equal_lengths(set, init.length(), "ShapeDBA");
  const std::vector<double> ones(set.size(), 1.0);
  return iterate_barycenter(set, ones, init, shape_aligner(reach), options);
}

Prototype shape_dba(std::span<const TimeSeries> set, std::size_t reach, const BarycenterOptions& options) {
  require_nonempty(set);
  return shape_dba(set, reach, set[dtw_medoid(set, options.threads)], options);
}

NeighborWeights neighbor_weights(const TimeSeries& ref, std::span<const TimeSeries> pool, std::size_t count) {
  if (count == 0) throw ArgumentError("neighbour count must be at least 1");
  if (count > pool.size())
    throw ArgumentError("asked for " + std::to_string(count) + " neighbours from a pool of " +
                        std::to_string(pool.size()));
  std::vector<double> dist(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) dist[i] = dtw_cost(ref, pool[i]);
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });

  NeighborWeights nw;
  nw.neighbor_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count));
  for (auto idx : nw.neighbor_indices) nw.dtw_distances.push_back(dist[idx]);
  nw.d_nn = nw.dtw_distances.front();

  double scale = nw.d_nn;
  if (scale == 0.0) {
    for (double d : nw.dtw_distances) {
      if (d > 0.0) {
        scale = d;
        break;
      }
    }
  }
  const double log_half = std::log(0.5);
  for (double d : nw.dtw_distances) nw.weights.push_back(d == 0.0 ? 1.0 : std::exp(log_half * d / scale));
  return nw;
}

Prototype weighted_shape_dba(const TimeSeries& ref, std::span<const TimeSeries> neighbors,
                             std::span<const double> weights, std::size_t reach, const BarycenterOptions& options) {
  if (weights.size() != neighbors.size()) throw ArgumentError("one weight per neighbour required");
  std::vector<TimeSeries> set;
  set.reserve(neighbors.size() + 1);
  set.push_back(ref);
  set.insert(set.end(), neighbors.begin(), neighbors.end());
  std::vector<double> all_weights;
  all_weights.reserve(set.size());
  all_weights.push_back(1.0);
  all_weights.insert(all_weights.end(), weights.begin(), weights.end());
  require_equal_lengths(set, ref.length(), "weighted ShapeDBA");
  return iterate_barycenter(set, all_weights, ref, shape_aligner(reach), options);
}

std::vector<double> normalized_label_weights(std::span<const double> weights) {
  if (weights.empty()) throw ArgumentError("no weights to normalize");
  const auto [lo, hi] = std::minmax_element(weights.begin(), weights.end());
  const double range = *hi - *lo;
  std::vector<double> out(weights.size(), 1.0 / static_cast<double>(weights.size()));
  if (range <= 0.0) return out;
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    out[i] = (weights[i] - *lo) / range;
    total += out[i];
  }
  for (auto& w : out) w /= total;
  return out;
}

Dataset extend_dataset(const Dataset& dataset, const ExtendOptions& options) {
  dataset.validate();
  if (!dataset.has_labels()) throw ArgumentError("data extension needs labelled samples");
  if (dataset.size() < 2) throw ArgumentError("data extension needs at least two samples");
  if (options.neighbors == 0) throw ArgumentError("neighbour count must be at least 1");

  Dataset out = dataset;
  out.label_kind = LabelKind::real;
  const std::size_t n = dataset.size();
  std::vector<Prototype> synthetic(n);
  parallel_for(n, options.barycenter.threads, [&](std::size_t r) {
    std::vector<TimeSeries> pool;
    std::vector<std::size_t> pool_index;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == r) continue;
      pool.push_back(dataset.samples[i]);
      pool_index.push_back(i);
    }
    auto nw = neighbor_weights(dataset.samples[r], pool, options.neighbors);
    std::vector<TimeSeries> neighbors;
    std::vector<double> labels{dataset.labels[r]};
    for (auto idx : nw.neighbor_indices) {
      neighbors.push_back(pool[idx]);
      labels.push_back(dataset.labels[pool_index[idx]]);
    }
    BarycenterOptions inner = options.barycenter;
    inner.threads = 1;
    auto proto = weighted_shape_dba(dataset.samples[r], neighbors, nw.weights, options.reach, inner);

    std::vector<double> all_weights{1.0};
    all_weights.insert(all_weights.end(), nw.weights.begin(), nw.weights.end());
    const auto label_weights = normalized_label_weights(all_weights);
    double label = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) label += label_weights[i] * labels[i];
    proto.label = label;
    proto.source_indices = {r};
    for (auto idx : nw.neighbor_indices) proto.source_indices.push_back(pool_index[idx]);
    synthetic[r] = std::move(proto);
  });

  for (auto& p : synthetic) {
    out.samples.push_back(std::move(p.series));
    out.labels.push_back(*p.label);
  }
  return out;
}

}  // namespace warpkit
