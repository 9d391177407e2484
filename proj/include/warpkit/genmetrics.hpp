#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "warpkit/distances.hpp"
#include "warpkit/series.hpp"

namespace warpkit {

/// N x f matrix of feature vectors, row-major, with optional integer labels.
struct LatentSet {
  std::size_t rows = 0;
  std::size_t dims = 0;
  std::vector<double> values;
  std::vector<long long> labels;  // empty or one per row

  LatentSet() = default;
  LatentSet(std::size_t rows, std::size_t dims, std::vector<double> values, std::vector<long long> labels = {});
  static LatentSet from_rows(const std::vector<std::vector<double>>& rows, std::vector<long long> labels = {});

  std::span<const double> row(std::size_t i) const { return {values.data() + i * dims, dims}; }
  bool has_labels() const noexcept { return !labels.empty(); }
  LatentSet subset(std::span<const std::size_t> indices) const;
};

struct GaussianSummary {
  std::size_t dims = 0;
  std::vector<double> mean;
  std::vector<double> covariance;  // dims x dims, row-major
};

/// Sample mean and covariance (N-1 denominator). 1e-10 is added to the
/// diagonal when dims >= rows; `regularized` reports it.
GaussianSummary summarize(const LatentSet& v, bool* regularized = nullptr);

/// Squared Frechet distance between two Gaussians:
/// ||mu1 - mu2||^2 + tr(S1 + S2 - 2 (S1 S2)^(1/2)).
double frechet_distance_squared(const GaussianSummary& a, const GaussianSummary& b);

/// FID as the squared Frechet distance of the two sets' summaries.
double fid(const LatentSet& real, const LatentSet& generated);

/// Seeded partition into halves of sizes ceil(N/2) and floor(N/2).
std::pair<LatentSet, LatentSet> reference_split(const LatentSet& v, std::uint64_t seed);

/// Fraction of positions where the labels agree.
double aog(std::span<const long long> truth, std::span<const long long> predicted);

/// Distance from every row to its k-th nearest other row.
std::vector<double> kth_neighbor_distances(const LatentSet& v, std::size_t k, std::size_t threads = 1);

struct Fidelity {
  double precision = 0.0;
  double density = 0.0;
};

struct Diversity {
  double recall = 0.0;
  double coverage = 0.0;
};

/// Balls B(V_i, NND_k(V_i)) are closed.
Fidelity knn_fidelity(const LatentSet& real, const LatentSet& generated, std::size_t k, std::size_t threads = 1);
Diversity knn_diversity(const LatentSet& real, const LatentSet& generated, std::size_t k, std::size_t threads = 1);

/// Mean over R repetitions of the mean distance between rows S_i and S'_i,
/// where S and S' are the first and second S entries of a seeded
/// permutation of the rows. All repetitions share one generator.
double apd(const LatentSet& v, std::size_t subset, std::size_t repetitions, std::uint64_t seed);

/// Per-class APD averaged over classes (ascending label order). Each class
/// uses min(S, floor(size/2)) pairs; classes with fewer than 4 rows are
/// skipped and reported in `skipped`.
double acpd(const LatentSet& v, std::size_t subset, std::size_t repetitions, std::uint64_t seed,
            std::vector<long long>* skipped = nullptr);

struct Mms {
  double generated = 0.0;  // mean distance from each generated row to its nearest real row
  double real = 0.0;       // mean distance from each real row to its nearest other real row
};

Mms mms(const LatentSet& real, const LatentSet& generated);

/// sqrt(2)/2 * |t1 - t2|
double diagonal_distance(std::size_t t1, std::size_t t2);

/// Average diagonal distance over the points of a path.
double wpd_distance(const WarpingPath& path);

/// WPD_d averaged over S DTW-aligned pairs per repetition and over R
/// repetitions; pairing follows apd. Equal lengths required.
double wpd(std::span<const TimeSeries> series, std::size_t subset, std::size_t repetitions, std::uint64_t seed,
           std::size_t threads = 1);

struct MetricEntry {
  double value = 0.0;
  std::optional<double> real_reference;
  std::map<std::string, double> params;
};

using MetricReport = std::map<std::string, MetricEntry>;

struct EvaluationInput {
  LatentSet real;
  LatentSet generated;
  std::vector<long long> predicted;  // classifier output on generated rows, for AOG
  std::vector<TimeSeries> raw_real;
  std::vector<TimeSeries> raw_generated;
};

struct EvaluationOptions {
  std::size_t k = 5;
  std::size_t subset = 20;
  std::size_t repetitions = 10;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

/// Every metric the inputs allow, each with its real-data reference where
/// one exists. Subset sizes larger than half a set are reduced to fit and
/// the size used is recorded in the entry's params. Notes about skipped
/// metrics or classes are appended to `notes`.
MetricReport evaluate_generation(const EvaluationInput& input, const EvaluationOptions& options,
                                 std::vector<std::string>* notes = nullptr);

}  // namespace warpkit
