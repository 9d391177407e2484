#include "warpkit/clustering.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "warpkit/error.hpp"
#include "warpkit/parallel.hpp"
#include "warpkit/rng.hpp"

namespace warpkit {
namespace {

void check_pairing(const KMeansOptions& o) {
  const auto kind = o.distance.kind;
  const bool ok = (kind == DistanceKind::euclidean && o.averaging == AveragingMethod::mean) ||
                  (kind == DistanceKind::dtw && o.averaging == AveragingMethod::dba) ||
                  (kind == DistanceKind::shapedtw && o.averaging == AveragingMethod::shapedba);
  if (!ok)
    throw ArgumentError("distance '" + to_string(kind) + "' does not pair with averaging '" +
                        to_string(o.averaging) + "' (use euclidean/mean, dtw/dba or shapedtw/shapedba)");
}

struct Sweep {
  std::vector<std::size_t> assignments;
  std::vector<double> distances;
};

Sweep assign(const KMeansOptions& o, const std::vector<TimeSeries>& centroids, std::span<const TimeSeries> samples) {
  const std::size_t n = samples.size();
  Sweep s;
  s.assignments.assign(n, 0);
  s.distances.assign(n, 0.0);
  parallel_for(n, o.threads, [&](std::size_t i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      const double d = clustering_distance(o.distance, centroids[c], samples[i]);
      if (d < best) {
        best = d;
        arg = c;
      }
    }
    s.assignments[i] = arg;
    s.distances[i] = best;
  });
  return s;
}

void repair_empty(Sweep& s, std::vector<TimeSeries>& centroids, std::span<const TimeSeries> samples) {
  const std::size_t k = centroids.size();
  std::vector<std::size_t> sizes(k, 0);
  for (auto a : s.assignments) ++sizes[a];
  for (std::size_t c = 0; c < k; ++c) {
    if (sizes[c] != 0) continue;
    std::size_t far = samples.size();
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (sizes[s.assignments[i]] < 2) continue;
      if (far == samples.size() || s.distances[i] > s.distances[far]) far = i;
    }
    if (far == samples.size()) throw DataError("cannot re-seed an empty cluster");
    --sizes[s.assignments[far]];
    ++sizes[c];
    s.assignments[far] = c;
    s.distances[far] = 0.0;
    centroids[c] = samples[far];
  }
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

double clustering_distance(const DistanceConfig& config, const TimeSeries& centroid, const TimeSeries& sample) {
  switch (config.kind) {
    case DistanceKind::euclidean: return squared_euclidean(centroid, sample);
    case DistanceKind::dtw: return dtw_cost(centroid, sample);
    case DistanceKind::shapedtw: return shape_dtw(centroid, sample, config.reach).cost;
    default: break;
  }
  throw ArgumentError("k-means supports euclidean, dtw and shapedtw distances");
}

double inertia(const DistanceConfig& config, std::span<const TimeSeries> centroids,
               std::span<const TimeSeries> samples, std::span<const std::size_t> assignments) {
  if (samples.size() != assignments.size()) throw ArgumentError("one assignment per sample required");
  double s = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (assignments[i] >= centroids.size()) throw ArgumentError("assignment out of range");
    s += clustering_distance(config, centroids[assignments[i]], samples[i]);
  }
  return s;
}

ClusteringResult kmeans_eba(std::span<const TimeSeries> samples, const KMeansOptions& options) {
  check_pairing(options);
  options.distance.validate();
  const std::size_t n = samples.size();
  if (options.k < 1 || options.k > n)
    throw ArgumentError("k must lie in [1, " + std::to_string(n) + "], got " + std::to_string(options.k));
  for (const auto& s : samples) {
    if (s.channels() != samples.front().channels()) throw ArgumentError("samples differ in channel count");
  }

  ClusteringResult result;
  Rng rng(options.seed);
  result.initial_indices = rng.sample(n, options.k);
  std::vector<TimeSeries> centroids;
  for (auto idx : result.initial_indices) centroids.push_back(samples[idx]);
  std::vector<Prototype> prototypes(options.k);

  BarycenterOptions bary = options.barycenter;
  bary.threads = options.threads;

  Sweep sweep;
  double previous = std::numeric_limits<double>::infinity();
  bool need_final = true;
  for (std::size_t it = 1; it <= options.max_iters; ++it) {
    sweep = assign(options, centroids, samples);
    repair_empty(sweep, centroids, samples);
    const double current = sum(sweep.distances);
    result.inertia_trace.push_back(current);
    result.iterations = it;
    if (std::abs(previous - current) < options.eps) {
      result.converged = true;
      need_final = false;
      break;
    }
    previous = current;

    for (std::size_t c = 0; c < options.k; ++c) {
      std::vector<TimeSeries> members;
      std::vector<std::size_t> member_index;
      for (std::size_t i = 0; i < n; ++i) {
        if (sweep.assignments[i] == c) {
          members.push_back(samples[i]);
          member_index.push_back(i);
        }
      }
      Prototype p;
      switch (options.averaging) {
        case AveragingMethod::mean: p = arithmetic_mean(members); break;
        case AveragingMethod::dba: p = dba(members, centroids[c], bary); break;
        case AveragingMethod::shapedba: p = shape_dba(members, options.distance.reach, centroids[c], bary); break;
      }
      p.source_indices = std::move(member_index);
      centroids[c] = p.series;
      prototypes[c] = std::move(p);
    }
  }
  if (need_final) {
    sweep = assign(options, centroids, samples);
    repair_empty(sweep, centroids, samples);
    result.inertia_trace.push_back(sum(sweep.distances));
  }

  for (std::size_t c = 0; c < options.k; ++c) {
    prototypes[c].series = centroids[c];
    prototypes[c].source_indices.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (sweep.assignments[i] == c) prototypes[c].source_indices.push_back(i);
    }
    prototypes[c].source_weights.assign(prototypes[c].source_indices.size(), 1.0);
  }
  result.centroids = std::move(prototypes);
  result.assignments = std::move(sweep.assignments);
  result.inertia = result.inertia_trace.back();
  return result;
}

namespace {

struct PairCounts {
  double total = 0;   // C(n, 2)
  double same_y = 0;  // pairs together in y
  double same_yhat = 0;
  double same_both = 0;
};

double choose2(std::size_t v) { return 0.5 * static_cast<double>(v) * static_cast<double>(v - (v > 0 ? 1 : 0)); }

PairCounts pair_counts(std::span<const long long> y, std::span<const long long> yhat) {
  if (y.size() != yhat.size()) throw ArgumentError("labelings differ in length");
  if (y.size() < 2) throw ArgumentError("the Rand index needs at least two labels");
  std::map<long long, std::size_t> a;
  std::map<long long, std::size_t> b;
  std::map<std::pair<long long, long long>, std::size_t> joint;
  for (std::size_t i = 0; i < y.size(); ++i) {
    ++a[y[i]];
    ++b[yhat[i]];
    ++joint[{y[i], yhat[i]}];
  }
  PairCounts pc;
  pc.total = choose2(y.size());
  for (const auto& [_, v] : a) pc.same_y += choose2(v);
  for (const auto& [_, v] : b) pc.same_yhat += choose2(v);
  for (const auto& [_, v] : joint) pc.same_both += choose2(v);
  return pc;
}

}  // namespace

double rand_index(std::span<const long long> y, std::span<const long long> yhat) {
  const auto pc = pair_counts(y, yhat);
  const double tp = pc.same_both;
  const double tn = pc.total - pc.same_y - pc.same_yhat + pc.same_both;
  return (tp + tn) / pc.total;
}

double adjusted_rand_index(std::span<const long long> y, std::span<const long long> yhat) {
  const auto pc = pair_counts(y, yhat);
  const double expected_tp = pc.same_y * pc.same_yhat / pc.total;
  const double max_tp = 0.5 * (pc.same_y + pc.same_yhat);
  const double denom = max_tp - expected_tp;  // T * (1 - E[RI]) / 2
  if (denom == 0.0) return 1.0;
  return (pc.same_both - expected_tp) / denom;
}

}  // namespace warpkit
