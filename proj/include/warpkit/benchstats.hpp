#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace warpkit {

/// Scores of m comparates (columns) on n datasets (rows).
struct ResultsTable {
  std::vector<std::string> datasets;
  std::vector<std::string> comparates;
  std::vector<double> scores;  // n x m, row-major
  bool higher_is_better = true;

  std::size_t n() const noexcept { return datasets.size(); }
  std::size_t m() const noexcept { return comparates.size(); }
  double score(std::size_t d, std::size_t c) const { return scores[d * m() + c]; }
  std::vector<double> column(std::size_t c) const;
  std::size_t index_of(const std::string& comparate) const;
  void validate() const;
  /// The table restricted to the named comparates, in the given order.
  ResultsTable select(const std::vector<std::string>& names) const;
};

/// CSV with a header row; first column holds dataset names.
ResultsTable parse_results_csv(const std::string& text);
ResultsTable load_results_csv(const std::string& path);

struct RankTable {
  std::vector<double> ranks;  // n x m, 1 = best, ties share the midrank
  std::vector<double> average_ranks;
};

RankTable ranks(const ResultsTable& table);

struct FriedmanResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t dof = 0;
};

/// Friedman statistic from rank sums; p from the chi-squared survival
/// function with m - 1 degrees of freedom.
FriedmanResult friedman(const ResultsTable& table);

/// Upper-tail chi-squared probability.
double chi2_sf(double x, double dof);

/// Critical value q_alpha for m in [2, 20], alpha 0.05 or 0.10.
double nemenyi_q(std::size_t m, double alpha);
double nemenyi_cd(std::size_t m, std::size_t n, double alpha);

struct WilcoxonResult {
  double p_value = 1.0;
  double w_plus = 0.0;
  double w_minus = 0.0;
  double w = 0.0;  // min(w_plus, w_minus)
  std::size_t n_effective = 0;
  bool exact = false;
  bool all_zero = false;  // every difference was zero; p is 1
};

/// Largest effective sample size handled by the exact engine.
inline constexpr std::size_t kWilcoxonExactLimit = 25;

/// Two-sided signed-rank test on a - b. Zero differences are dropped, tied
/// magnitudes share midranks.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

/// Signed midranks of the nonzero differences (zero entries removed).
std::vector<double> signed_ranks(std::span<const double> differences);

/// Exact two-sided p for the signed ranks: min(1, 2 P(T <= W)) where T is the
/// positive-rank sum under random signs.
double wilcoxon_exact_p(std::span<const double> signed_rank_values);

/// Normal approximation with continuity and tie corrections.
double wilcoxon_normal_p(std::span<const double> signed_rank_values);

struct HolmResult {
  std::vector<std::size_t> order;     // indices sorted by ascending p
  std::vector<double> thresholds;     // alpha / (m - v + 1), per input index
  std::vector<bool> rejected;         // per input index
};

/// Step-down Holm procedure; testing stops at the first non-rejection.
HolmResult holm_correct(std::span<const double> p_values, double alpha);

struct BayesianOptions {
  double rope = 0.01;
  double z0 = 0.0;
  double prior_strength = 1.0;
  std::size_t samples = 50000;
  std::uint64_t seed = 0;
};

struct BayesianPosterior {
  double theta_left = 0.0;
  double theta_equal = 0.0;
  double theta_right = 0.0;
  double rope = 0.0;
  std::size_t samples = 0;
};

/// Monte Carlo Bayesian signed-rank test on differences z. Each sample draws
/// Dirichlet(s, 1, ..., 1) weights for (z0, z_1, ..., z_q) from gamma
/// variates (z0 first), then sums w_i w_j over pairs with z_i + z_j below
/// -2r, within [-2r, 2r], or above 2r. Returns the mean over samples.
BayesianPosterior bayesian_signed_rank(std::span<const double> z, const BayesianOptions& options = {});

struct McmCell {
  bool empty = false;  // the comparate against itself
  double mean_diff = 0.0;
  std::size_t wins = 0;
  std::size_t ties = 0;
  std::size_t losses = 0;
  double p_value = 1.0;
  bool bold = false;
};

/// Statistics of comparate `row` against comparate `col`; a pure function of
/// those two columns.
McmCell mcm_cell(const ResultsTable& table, std::size_t row, std::size_t col, double alpha);

struct Mcm {
  std::vector<std::string> rows;
  std::vector<std::string> cols;
  std::vector<double> row_means;
  std::vector<double> col_means;
  std::vector<McmCell> cells;  // rows x cols
  double alpha = 0.05;
  bool higher_is_better = true;

  const McmCell& cell(std::size_t r, std::size_t c) const { return cells[r * cols.size() + c]; }
};

/// Rows and columns default to every comparate and are ordered by mean
/// score, best first.
Mcm build_mcm(const ResultsTable& table, std::vector<std::string> rows = {}, std::vector<std::string> cols = {},
              double alpha = 0.05);

std::string mcm_to_csv(const Mcm& mcm);
std::string mcm_to_text(const Mcm& mcm);

struct PairwiseHolm {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // i < j comparate indices
  std::vector<double> p_values;
  HolmResult holm;
};

/// Wilcoxon p for every comparate pair, Holm-corrected as one family.
PairwiseHolm pairwise_holm(const ResultsTable& table, double alpha);

}  // namespace warpkit
