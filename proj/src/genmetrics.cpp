#include "warpkit/genmetrics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "warpkit/error.hpp"
#include "warpkit/parallel.hpp"
#include "warpkit/rng.hpp"

namespace warpkit {
namespace {

double row_distance(std::span<const double> a, std::span<const double> b) { return std::sqrt(squared_distance(a, b)); }

void require_same_dims(const LatentSet& a, const LatentSet& b) {
  if (a.dims != b.dims)
    throw ArgumentError("feature dimensions differ: " + std::to_string(a.dims) + " vs " + std::to_string(b.dims));
}

void require_subset(std::size_t rows, std::size_t subset, std::size_t repetitions) {
  if (subset < 1) throw ArgumentError("subset size must be at least 1");
  if (repetitions < 1) throw ArgumentError("repetition count must be at least 1");
  if (2 * subset > rows)
    throw ArgumentError("two disjoint subsets of " + std::to_string(subset) + " need at least " +
                        std::to_string(2 * subset) + " rows, have " + std::to_string(rows));
}

Eigen::MatrixXd as_matrix(const std::vector<double>& v, std::size_t n) {
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = v[i * n + j];
  return m;
}

Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (m + m.transpose()));
  if (eig.info() != Eigen::Success) throw DataError("eigendecomposition failed");
  Eigen::VectorXd lambda = eig.eigenvalues();
  const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) < -1e-10 * scale) throw DataError("covariance product is not positive semidefinite");
    lambda(i) = std::sqrt(std::max(0.0, lambda(i)));
  }
  return eig.eigenvectors() * lambda.asDiagonal() * eig.eigenvectors().transpose();
}

std::size_t fit_subset(std::size_t requested, std::size_t rows) { return std::min(requested, rows / 2); }

}  // namespace

LatentSet::LatentSet(std::size_t rows_, std::size_t dims_, std::vector<double> values_, std::vector<long long> labels_)
    : rows(rows_), dims(dims_), values(std::move(values_)), labels(std::move(labels_)) {
  if (dims < 1) throw ArgumentError("latent vectors need at least one dimension");
  if (rows < 1) throw ArgumentError("latent set is empty");
  if (values.size() != rows * dims) throw ArgumentError("latent values do not match rows x dims");
  if (!labels.empty() && labels.size() != rows)
    throw ArgumentError("latent labels: expected " + std::to_string(rows) + ", got " + std::to_string(labels.size()));
  for (double x : values) {
    if (!std::isfinite(x)) throw ArgumentError("latent values must be finite");
  }
}

LatentSet LatentSet::from_rows(const std::vector<std::vector<double>>& rows, std::vector<long long> labels) {
  if (rows.empty()) throw ArgumentError("latent set is empty");
  const std::size_t f = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * f);
  for (const auto& r : rows) {
    if (r.size() != f) throw ArgumentError("latent rows differ in length");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return LatentSet(rows.size(), f, std::move(flat), std::move(labels));
}

LatentSet LatentSet::subset(std::span<const std::size_t> indices) const {
  std::vector<double> v;
  std::vector<long long> l;
  v.reserve(indices.size() * dims);
  for (auto i : indices) {
    const auto r = row(i);
    v.insert(v.end(), r.begin(), r.end());
    if (has_labels()) l.push_back(labels[i]);
  }
  return LatentSet(indices.size(), dims, std::move(v), std::move(l));
}

GaussianSummary summarize(const LatentSet& v, bool* regularized) {
  if (v.rows < 2) throw ArgumentError("a Gaussian summary needs at least two rows");
  const std::size_t n = v.rows;
  const std::size_t f = v.dims;
  GaussianSummary g;
  g.dims = f;
  g.mean.assign(f, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t d = 0; d < f; ++d) g.mean[d] += v.row(i)[d];
  for (auto& m : g.mean) m /= static_cast<double>(n);
  g.covariance.assign(f * f, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = v.row(i);
    for (std::size_t a = 0; a < f; ++a)
      for (std::size_t b = a; b < f; ++b) g.covariance[a * f + b] += (r[a] - g.mean[a]) * (r[b] - g.mean[b]);
  }
  for (std::size_t a = 0; a < f; ++a) {
    for (std::size_t b = a; b < f; ++b) {
      g.covariance[a * f + b] /= static_cast<double>(n - 1);
      g.covariance[b * f + a] = g.covariance[a * f + b];
    }
  }
  const bool reg = f >= n;
  if (reg) {
    for (std::size_t a = 0; a < f; ++a) g.covariance[a * f + a] += 1e-10;
  }
  if (regularized) *regularized = reg;
  return g;
}

double frechet_distance_squared(const GaussianSummary& a, const GaussianSummary& b) {
  if (a.dims != b.dims) throw ArgumentError("Gaussian summaries differ in dimension");
  const std::size_t f = a.dims;
  double mean_term = 0.0;
  for (std::size_t d = 0; d < f; ++d) mean_term += (a.mean[d] - b.mean[d]) * (a.mean[d] - b.mean[d]);
  const Eigen::MatrixXd s1 = as_matrix(a.covariance, f);
  const Eigen::MatrixXd s2 = as_matrix(b.covariance, f);
  const Eigen::MatrixXd root1 = symmetric_sqrt(s1);
  const Eigen::MatrixXd cross = symmetric_sqrt(root1 * s2 * root1);
  const double trace_term = s1.trace() + s2.trace() - 2.0 * cross.trace();
  return std::max(0.0, mean_term + trace_term);
}

double fid(const LatentSet& real, const LatentSet& generated) {
  require_same_dims(real, generated);
  return frechet_distance_squared(summarize(real), summarize(generated));
}

std::pair<LatentSet, LatentSet> reference_split(const LatentSet& v, std::uint64_t seed) {
  if (v.rows < 4) throw ArgumentError("a reference split needs at least 4 rows, have " + std::to_string(v.rows));
  Rng rng(seed);
  const auto perm = rng.permutation(v.rows);
  const std::size_t first = (v.rows + 1) / 2;
  const std::span<const std::size_t> all(perm);
  return {v.subset(all.first(first)), v.subset(all.subspan(first))};
}

double aog(std::span<const long long> truth, std::span<const long long> predicted) {
  if (truth.empty()) throw ArgumentError("no labels to compare");
  if (truth.size() != predicted.size())
    throw ArgumentError("label counts differ: " + std::to_string(truth.size()) + " vs " +
                        std::to_string(predicted.size()));
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += truth[i] == predicted[i];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

std::vector<double> kth_neighbor_distances(const LatentSet& v, std::size_t k, std::size_t threads) {
  if (k < 1 || k >= v.rows)
    throw ArgumentError("k must lie in [1, " + std::to_string(v.rows - 1) + "], got " + std::to_string(k));
  std::vector<double> out(v.rows);
  parallel_for(v.rows, threads, [&](std::size_t i) {
    std::vector<double> d;
    d.reserve(v.rows - 1);
    for (std::size_t j = 0; j < v.rows; ++j) {
      if (j != i) d.push_back(row_distance(v.row(i), v.row(j)));
    }
    std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k - 1), d.end());
    out[i] = d[k - 1];
  });
  return out;
}

Fidelity knn_fidelity(const LatentSet& real, const LatentSet& generated, std::size_t k, std::size_t threads) {
  require_same_dims(real, generated);
  const auto radius = kth_neighbor_distances(real, k, threads);
  std::vector<std::size_t> inside(generated.rows, 0);
  parallel_for(generated.rows, threads, [&](std::size_t j) {
    for (std::size_t i = 0; i < real.rows; ++i) inside[j] += row_distance(generated.row(j), real.row(i)) <= radius[i];
  });
  std::size_t covered = 0;
  std::size_t total = 0;
  for (auto c : inside) {
    covered += c > 0;
    total += c;
  }
  const double g = static_cast<double>(generated.rows);
  return {static_cast<double>(covered) / g, static_cast<double>(total) / (static_cast<double>(k) * g)};
}

Diversity knn_diversity(const LatentSet& real, const LatentSet& generated, std::size_t k, std::size_t threads) {
  require_same_dims(real, generated);
  const auto real_radius = kth_neighbor_distances(real, k, threads);
  const auto gen_radius = kth_neighbor_distances(generated, k, threads);
  std::vector<char> recalled(real.rows, 0);
  std::vector<char> covered(real.rows, 0);
  parallel_for(real.rows, threads, [&](std::size_t i) {
    for (std::size_t j = 0; j < generated.rows; ++j) {
      const double d = row_distance(generated.row(j), real.row(i));
      if (d <= gen_radius[j]) recalled[i] = 1;
      if (d <= real_radius[i]) covered[i] = 1;
    }
  });
  const double n = static_cast<double>(real.rows);
  return {static_cast<double>(std::count(recalled.begin(), recalled.end(), 1)) / n,
          static_cast<double>(std::count(covered.begin(), covered.end(), 1)) / n};
}

double apd(const LatentSet& v, std::size_t subset, std::size_t repetitions, std::uint64_t seed) {
  require_subset(v.rows, subset, repetitions);
  Rng rng(seed);
  double total = 0.0;
  for (std::size_t r = 0; r < repetitions; ++r) {
    const auto perm = rng.permutation(v.rows);
    double s = 0.0;
    for (std::size_t i = 0; i < subset; ++i) s += row_distance(v.row(perm[i]), v.row(perm[subset + i]));
    total += s / static_cast<double>(subset);
  }
  return total / static_cast<double>(repetitions);
}

double acpd(const LatentSet& v, std::size_t subset, std::size_t repetitions, std::uint64_t seed,
            std::vector<long long>* skipped) {
  if (!v.has_labels()) throw ArgumentError("ACPD needs class labels");
  if (subset < 1) throw ArgumentError("subset size must be at least 1");
  if (repetitions < 1) throw ArgumentError("repetition count must be at least 1");
  std::map<long long, std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < v.rows; ++i) classes[v.labels[i]].push_back(i);
  std::vector<std::pair<std::vector<std::size_t>, std::size_t>> used;
  for (auto& [label, members] : classes) {
    if (members.size() < 4) {
      if (skipped) skipped->push_back(label);
      continue;
    }
    used.emplace_back(std::move(members), fit_subset(subset, members.size()));
  }
  if (used.empty()) throw ArgumentError("ACPD needs at least one class with 4 or more rows");

  Rng rng(seed);
  double total = 0.0;
  for (std::size_t r = 0; r < repetitions; ++r) {
    double per_rep = 0.0;
    for (const auto& [members, s] : used) {
      const auto perm = rng.permutation(members.size());
      double sum = 0.0;
      for (std::size_t i = 0; i < s; ++i) sum += row_distance(v.row(members[perm[i]]), v.row(members[perm[s + i]]));
      per_rep += sum / static_cast<double>(s);
    }
    total += per_rep / static_cast<double>(used.size());
  }
  return total / static_cast<double>(repetitions);
}

Mms mms(const LatentSet& real, const LatentSet& generated) {
  require_same_dims(real, generated);
  if (real.rows < 2) throw ArgumentError("MMS needs at least two real rows");
  Mms out;
  double s = 0.0;
  for (std::size_t j = 0; j < generated.rows; ++j) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < real.rows; ++i) best = std::min(best, row_distance(generated.row(j), real.row(i)));
    s += best;
  }
  out.generated = s / static_cast<double>(generated.rows);
  s = 0.0;
  for (std::size_t i = 0; i < real.rows; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < real.rows; ++j) {
      if (j != i) best = std::min(best, row_distance(real.row(i), real.row(j)));
    }
    s += best;
  }
  out.real = s / static_cast<double>(real.rows);
  return out;
}

double diagonal_distance(std::size_t t1, std::size_t t2) {
  const double gap = t1 > t2 ? static_cast<double>(t1 - t2) : static_cast<double>(t2 - t1);
  return std::sqrt(2.0) / 2.0 * gap;
}

double wpd_distance(const WarpingPath& path) {
  double s = 0.0;
  for (const auto& step : path.steps()) s += step.i > step.j ? step.i - step.j : step.j - step.i;
  return std::sqrt(2.0) / (2.0 * static_cast<double>(path.size())) * s;
}

double wpd(std::span<const TimeSeries> series, std::size_t subset, std::size_t repetitions, std::uint64_t seed,
           std::size_t threads) {
  require_subset(series.size(), subset, repetitions);
  for (const auto& s : series) {
    if (s.length() != series.front().length()) throw ArgumentError("WPD needs equal-length series (resample first)");
  }
  Rng rng(seed);
  double total = 0.0;
  std::vector<double> per_pair(subset);
  for (std::size_t r = 0; r < repetitions; ++r) {
    const auto perm = rng.permutation(series.size());
    parallel_for(subset, threads, [&](std::size_t i) {
      per_pair[i] = wpd_distance(dtw(series[perm[i]], series[perm[subset + i]]).path);
    });
    double s = 0.0;
    for (double x : per_pair) s += x;
    total += s / static_cast<double>(subset);
  }
  return total / static_cast<double>(repetitions);
}

MetricReport evaluate_generation(const EvaluationInput& in, const EvaluationOptions& o, std::vector<std::string>* notes) {
  auto note = [&](const std::string& s) {
    if (notes) notes->push_back(s);
  };
  require_same_dims(in.real, in.generated);
  MetricReport report;
  const auto seed = static_cast<double>(o.seed);
  const auto R = static_cast<double>(o.repetitions);

  auto [v1, v2] = reference_split(in.real, o.seed);

  bool regularized = false;
  const auto real_summary = summarize(in.real, &regularized);
  const auto gen_summary = summarize(in.generated, &regularized);
  if (regularized) note("fid: feature dimension >= sample count, covariance regularized by 1e-10 I");
  {
    MetricEntry e;
    e.value = frechet_distance_squared(real_summary, gen_summary);
    e.real_reference = fid(v1, v2);
    e.params = {{"seed", seed}};
    report["fid"] = e;
  }

  const auto k = static_cast<double>(o.k);
  {
    const auto g = knn_fidelity(in.real, in.generated, o.k, o.threads);
    std::optional<Fidelity> ref;
    if (o.k < v1.rows) ref = knn_fidelity(v1, v2, o.k, o.threads);
    else note("precision/density: real reference skipped, k too large for the split halves");
    report["precision"] = {g.precision, ref ? std::optional(ref->precision) : std::nullopt, {{"k", k}, {"seed", seed}}};
    report["density"] = {g.density, ref ? std::optional(ref->density) : std::nullopt, {{"k", k}, {"seed", seed}}};
  }
  if (o.k < in.generated.rows) {
    const auto g = knn_diversity(in.real, in.generated, o.k, o.threads);
    std::optional<Diversity> ref;
    if (o.k < v2.rows) ref = knn_diversity(v1, v2, o.k, o.threads);
    else note("recall/coverage: real reference skipped, k too large for the split halves");
    report["recall"] = {g.recall, ref ? std::optional(ref->recall) : std::nullopt, {{"k", k}, {"seed", seed}}};
    report["coverage"] = {g.coverage, ref ? std::optional(ref->coverage) : std::nullopt, {{"k", k}, {"seed", seed}}};
  } else {
    note("recall/coverage skipped: k must be below the generated set size");
  }

  {
    const std::size_t s_gen = fit_subset(o.subset, in.generated.rows);
    const std::size_t s_real = fit_subset(o.subset, in.real.rows);
    if (s_gen >= 1 && s_real >= 1) {
      MetricEntry e;
      e.value = apd(in.generated, s_gen, o.repetitions, o.seed);
      e.real_reference = apd(in.real, s_real, o.repetitions, o.seed);
      e.params = {{"S", static_cast<double>(s_gen)}, {"S_real", static_cast<double>(s_real)}, {"R", R}, {"seed", seed}};
      report["apd"] = e;
    } else {
      note("apd skipped: sets too small");
    }
  }

  if (in.real.has_labels() && in.generated.has_labels()) {
    std::vector<long long> skipped_gen;
    std::vector<long long> skipped_real;
    try {
      MetricEntry e;
      e.value = acpd(in.generated, o.subset, o.repetitions, o.seed, &skipped_gen);
      e.real_reference = acpd(in.real, o.subset, o.repetitions, o.seed, &skipped_real);
      e.params = {{"S", static_cast<double>(o.subset)}, {"R", R}, {"seed", seed}};
      report["acpd"] = e;
    } catch (const ArgumentError& err) {
      note(std::string("acpd skipped: ") + err.what());
    }
    for (auto c : skipped_gen) note("acpd: generated class " + std::to_string(c) + " has fewer than 4 rows, skipped");
    for (auto c : skipped_real) note("acpd: real class " + std::to_string(c) + " has fewer than 4 rows, skipped");
  }

  {
    const auto m = mms(in.real, in.generated);
    report["mms"] = {m.generated, m.real, {}};
  }

  if (!in.predicted.empty()) {
    if (!in.generated.has_labels()) throw ArgumentError("AOG needs the labels the generated rows were conditioned on");
    report["aog"] = {aog(in.generated.labels, in.predicted), std::nullopt, {}};
  }

  if (!in.raw_generated.empty()) {
    const std::size_t s_gen = fit_subset(o.subset, in.raw_generated.size());
    if (s_gen >= 1) {
      MetricEntry e;
      e.value = wpd(in.raw_generated, s_gen, o.repetitions, o.seed, o.threads);
      e.params = {{"S", static_cast<double>(s_gen)}, {"R", R}, {"seed", seed}};
      if (!in.raw_real.empty()) {
        const std::size_t s_real = fit_subset(o.subset, in.raw_real.size());
        if (s_real >= 1) {
          e.real_reference = wpd(in.raw_real, s_real, o.repetitions, o.seed, o.threads);
          e.params["S_real"] = static_cast<double>(s_real);
        }
      }
      report["wpd"] = e;
    } else {
      note("wpd skipped: need at least two generated series");
    }
  }
  return report;
}

}  // namespace warpkit
