#include "warpkit/benchstats.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>

#include "warpkit/error.hpp"
#include "warpkit/io.hpp"

namespace warpkit {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool better(double a, double b, bool higher_is_better) { return higher_is_better ? a > b : a < b; }

// Nemenyi critical values: two-tailed studentized range / sqrt(2), m = 2..20.
constexpr double kQ05[] = {1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164, 3.219,
                           3.268, 3.313, 3.354, 3.391, 3.426, 3.458, 3.489, 3.517, 3.544};
constexpr double kQ10[] = {1.645, 2.052, 2.291, 2.459, 2.589, 2.693, 2.780, 2.855, 2.920, 2.978,
                           3.030, 3.077, 3.120, 3.159, 3.196, 3.230, 3.261, 3.291, 3.319};

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::vector<std::string> order_by_mean(const ResultsTable& t, std::vector<std::string> names) {
  std::vector<double> means;
  for (const auto& name : names) means.push_back(mean(t.column(t.index_of(name))));
  std::vector<std::size_t> idx(names.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return better(means[a], means[b], t.higher_is_better); });
  std::vector<std::string> out;
  for (auto i : idx) out.push_back(names[i]);
  return out;
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

}  // namespace

std::vector<double> ResultsTable::column(std::size_t c) const {
  std::vector<double> out(n());
  for (std::size_t d = 0; d < n(); ++d) out[d] = score(d, c);
  return out;
}

std::size_t ResultsTable::index_of(const std::string& comparate) const {
  const auto it = std::find(comparates.begin(), comparates.end(), comparate);
  if (it == comparates.end()) throw ArgumentError("unknown comparate '" + comparate + "'");
  return static_cast<std::size_t>(it - comparates.begin());
}

void ResultsTable::validate() const {
  if (n() < 1) throw DataError("results table has no datasets");
  if (m() < 2) throw DataError("results table needs at least two comparates");
  if (scores.size() != n() * m()) throw DataError("results table shape mismatch");
  for (double s : scores) {
    if (!std::isfinite(s)) throw DataError("results table holds a non-finite score");
  }
  for (std::size_t i = 0; i < m(); ++i)
    for (std::size_t j = i + 1; j < m(); ++j)
      if (comparates[i] == comparates[j]) throw DataError("duplicate comparate '" + comparates[i] + "'");
}

ResultsTable ResultsTable::select(const std::vector<std::string>& names) const {
  ResultsTable out;
  out.datasets = datasets;
  out.comparates = names;
  out.higher_is_better = higher_is_better;
  std::vector<std::size_t> idx;
  for (const auto& name : names) idx.push_back(index_of(name));
  out.scores.reserve(n() * names.size());
  for (std::size_t d = 0; d < n(); ++d)
    for (auto c : idx) out.scores.push_back(score(d, c));
  return out;
}

ResultsTable parse_results_csv(const std::string& text) {
  ResultsTable t;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    if (!header) {
      if (cells.size() < 3) throw ParseError("header needs a dataset column and at least two comparates", lineno);
      for (std::size_t c = 1; c < cells.size(); ++c) t.comparates.emplace_back(cells[c]);
      header = true;
      continue;
    }
    if (cells.size() != t.comparates.size() + 1)
      throw ParseError("expected " + std::to_string(t.comparates.size() + 1) + " cells, found " +
                           std::to_string(cells.size()),
                       lineno);
    t.datasets.emplace_back(cells[0]);
    for (std::size_t c = 1; c < cells.size(); ++c) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cells[c].data(), cells[c].data() + cells[c].size(), v);
      if (ec != std::errc() || ptr != cells[c].data() + cells[c].size() || !std::isfinite(v))
        throw ParseError("non-numeric score '" + std::string(cells[c]) + "'", lineno);
      t.scores.push_back(v);
    }
  }
  if (!header) throw ParseError("empty results table", lineno);
  t.validate();
  return t;
}

ResultsTable load_results_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  try {
    return parse_results_csv(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.line());
  }
}

RankTable ranks(const ResultsTable& table) {
  table.validate();
  const std::size_t n = table.n();
  const std::size_t m = table.m();
  RankTable r;
  r.ranks.assign(n * m, 0.0);
  r.average_ranks.assign(m, 0.0);
  for (std::size_t d = 0; d < n; ++d) {
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t above = 0;
      std::size_t tied = 0;
      for (std::size_t j = 0; j < m; ++j) {
        if (j == i) continue;
        if (better(table.score(d, j), table.score(d, i), table.higher_is_better)) ++above;
        else if (table.score(d, j) == table.score(d, i)) ++tied;
      }
      r.ranks[d * m + i] = 1.0 + static_cast<double>(above) + 0.5 * static_cast<double>(tied);
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    double s = 0.0;
    for (std::size_t d = 0; d < n; ++d) s += r.ranks[d * m + i];
    r.average_ranks[i] = s / static_cast<double>(n);
  }
  return r;
}

double chi2_sf(double x, double dof) {
  if (!(dof > 0.0)) throw ArgumentError("chi-squared degrees of freedom must be positive");
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, x / 2.0);
}

FriedmanResult friedman(const ResultsTable& table) {
  const auto r = ranks(table);
  const std::size_t n = table.n();
  const std::size_t m = table.m();
  if (n < 2) throw ArgumentError("the Friedman test needs at least two datasets");
  // 12/(n m (m+1)) sum R_i^2 - 3 n (m+1), written around the expected rank
  // sum n (m+1) / 2 so equal rank sums give exactly zero.
  const double expected = static_cast<double>(n) * static_cast<double>(m + 1) / 2.0;
  double ss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double rank_sum = 0.0;
    for (std::size_t d = 0; d < n; ++d) rank_sum += r.ranks[d * m + i];
    ss += (rank_sum - expected) * (rank_sum - expected);
  }
  FriedmanResult f;
  f.statistic = 12.0 / (static_cast<double>(n) * static_cast<double>(m) * static_cast<double>(m + 1)) * ss;
  f.dof = m - 1;
  f.p_value = chi2_sf(f.statistic, static_cast<double>(f.dof));
  return f;
}

double nemenyi_q(std::size_t m, double alpha) {
  if (m < 2 || m > 20) throw ArgumentError("Nemenyi table covers 2 to 20 comparates, got " + std::to_string(m));
  if (std::abs(alpha - 0.05) < 1e-12) return kQ05[m - 2];
  if (std::abs(alpha - 0.10) < 1e-12) return kQ10[m - 2];
  throw ArgumentError("Nemenyi table covers alpha 0.05 and 0.10 only");
}

double nemenyi_cd(std::size_t m, std::size_t n, double alpha) {
  if (n < 1) throw ArgumentError("critical difference needs at least one dataset");
  const double md = static_cast<double>(m);
  return nemenyi_q(m, alpha) * std::sqrt(md * (md + 1.0) / (6.0 * static_cast<double>(n)));
}

std::vector<double> signed_ranks(std::span<const double> differences) {
  std::vector<double> d;
  for (double x : differences) {
    if (x != 0.0) d.push_back(x);
  }
  std::vector<std::size_t> idx(d.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return std::abs(d[a]) < std::abs(d[b]); });
  std::vector<double> out(d.size());
  std::size_t k = 0;
  while (k < idx.size()) {
    std::size_t e = k;
    while (e + 1 < idx.size() && std::abs(d[idx[e + 1]]) == std::abs(d[idx[k]])) ++e;
    const double midrank = 0.5 * static_cast<double>(k + 1 + e + 1);
    for (std::size_t q = k; q <= e; ++q) out[idx[q]] = d[idx[q]] > 0 ? midrank : -midrank;
    k = e + 1;
  }
  return out;
}

double wilcoxon_exact_p(std::span<const double> sr) {
  const std::size_t n = sr.size();
  if (n == 0) return 1.0;
  if (n > 62) throw ArgumentError("exact signed-rank engine supports at most 62 differences");
  // Doubled ranks are integers (midranks are multiples of 1/2).
  std::vector<std::size_t> r2(n);
  std::size_t total = 0;
  double w_plus = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    r2[i] = static_cast<std::size_t>(std::llround(2.0 * std::abs(sr[i])));
    total += r2[i];
    if (sr[i] > 0) w_plus += std::abs(sr[i]);
  }
  const auto wp2 = static_cast<std::size_t>(std::llround(2.0 * w_plus));
  const std::size_t w2 = std::min(wp2, total - wp2);
  std::vector<double> count(total + 1, 0.0);
  count[0] = 1.0;
  for (auto r : r2) {
    for (std::size_t s = total; s >= r; --s) {
      count[s] += count[s - r];
      if (s == r) break;
    }
  }
  double tail = 0.0;
  for (std::size_t s = 0; s <= w2; ++s) tail += count[s];
  return std::min(1.0, 2.0 * tail / std::ldexp(1.0, static_cast<int>(n)));
}

double wilcoxon_normal_p(std::span<const double> sr) {
  const auto n = static_cast<double>(sr.size());
  if (sr.empty()) return 1.0;
  double w_plus = 0.0;
  double total = 0.0;
  std::vector<double> mags;
  for (double v : sr) {
    total += std::abs(v);
    if (v > 0) w_plus += v;
    mags.push_back(std::abs(v));
  }
  const double w = std::min(w_plus, total - w_plus);
  std::sort(mags.begin(), mags.end());
  double tie_term = 0.0;
  for (std::size_t k = 0; k < mags.size();) {
    std::size_t e = k;
    while (e < mags.size() && mags[e] == mags[k]) ++e;
    const auto t = static_cast<double>(e - k);
    tie_term += t * t * t - t;
    k = e;
  }
  const double mu = n * (n + 1.0) / 4.0;
  const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
  if (var <= 0.0) return 1.0;
  const double z = std::min(0.0, w - mu + 0.5) / std::sqrt(var);
  return std::min(1.0, std::erfc(-z / std::sqrt(2.0)));
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ArgumentError("paired samples differ in length");
  if (a.empty()) throw ArgumentError("no paired samples");
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  const auto sr = signed_ranks(diff);
  WilcoxonResult res;
  res.n_effective = sr.size();
  if (sr.empty()) {
    res.all_zero = true;
    res.exact = true;
    return res;
  }
  for (double v : sr) (v > 0 ? res.w_plus : res.w_minus) += std::abs(v);
  res.w = std::min(res.w_plus, res.w_minus);
  res.exact = sr.size() <= kWilcoxonExactLimit;
  res.p_value = res.exact ? wilcoxon_exact_p(sr) : wilcoxon_normal_p(sr);
  return res;
}

HolmResult holm_correct(std::span<const double> p, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("alpha must lie in (0, 1)");
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0)) throw ArgumentError("p-values must lie in [0, 1]");
  }
  HolmResult h;
  const std::size_t m = p.size();
  h.order.resize(m);
  std::iota(h.order.begin(), h.order.end(), std::size_t{0});
  std::stable_sort(h.order.begin(), h.order.end(), [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
  h.thresholds.assign(m, 0.0);
  h.rejected.assign(m, false);
  bool testing = true;
  for (std::size_t v = 0; v < m; ++v) {
    const auto i = h.order[v];
    h.thresholds[i] = alpha / static_cast<double>(m - v);
    if (testing && p[i] <= h.thresholds[i]) h.rejected[i] = true;
    else testing = false;
  }
  return h;
}

BayesianPosterior bayesian_signed_rank(std::span<const double> z, const BayesianOptions& o) {
  if (!(o.rope >= 0.0)) throw ArgumentError("rope must be nonnegative");
  if (!(o.prior_strength > 0.0)) throw ArgumentError("prior strength must be positive");
  if (o.samples < 1) throw ArgumentError("at least one Monte Carlo sample required");
  std::vector<double> values{o.z0};
  values.insert(values.end(), z.begin(), z.end());
  const std::size_t q = values.size();
  const double bound = 2.0 * o.rope;

  std::mt19937_64 engine(o.seed);
  std::gamma_distribution<double> prior(o.prior_strength, 1.0);
  std::gamma_distribution<double> unit(1.0, 1.0);
  std::vector<double> w(q);
  double left = 0.0;
  double equal = 0.0;
  double right = 0.0;
  for (std::size_t s = 0; s < o.samples; ++s) {
    double total = 0.0;
    for (std::size_t i = 0; i < q; ++i) {
      w[i] = i == 0 ? prior(engine) : unit(engine);
      total += w[i];
    }
    for (auto& x : w) x /= total;
    double l = 0.0;
    double e = 0.0;
    double r = 0.0;
    for (std::size_t i = 0; i < q; ++i) {
      for (std::size_t j = 0; j < q; ++j) {
        const double sum = values[i] + values[j];
        const double ww = w[i] * w[j];
        if (sum < -bound) l += ww;
        else if (sum > bound) r += ww;
        else e += ww;
      }
    }
    left += l;
    equal += e;
    right += r;
  }
  const auto ns = static_cast<double>(o.samples);
  return {left / ns, equal / ns, right / ns, o.rope, o.samples};
}

McmCell mcm_cell(const ResultsTable& table, std::size_t row, std::size_t col, double alpha) {
  McmCell c;
  if (row == col) {
    c.empty = true;
    return c;
  }
  const auto a = table.column(row);
  const auto b = table.column(col);
  double s = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    s += a[d] - b[d];
    if (a[d] == b[d]) ++c.ties;
    else if (better(a[d], b[d], table.higher_is_better)) ++c.wins;
    else ++c.losses;
  }
  c.mean_diff = s / static_cast<double>(a.size());
  c.p_value = wilcoxon_signed_rank(a, b).p_value;
  c.bold = c.p_value <= alpha;
  return c;
}

Mcm build_mcm(const ResultsTable& table, std::vector<std::string> rows, std::vector<std::string> cols, double alpha) {
  table.validate();
  if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("alpha must lie in (0, 1)");
  if (rows.empty()) rows = table.comparates;
  if (cols.empty()) cols = table.comparates;
  Mcm mcm;
  mcm.alpha = alpha;
  mcm.higher_is_better = table.higher_is_better;
  mcm.rows = order_by_mean(table, rows);
  mcm.cols = order_by_mean(table, cols);
  for (const auto& r : mcm.rows) mcm.row_means.push_back(mean(table.column(table.index_of(r))));
  for (const auto& c : mcm.cols) mcm.col_means.push_back(mean(table.column(table.index_of(c))));
  for (const auto& r : mcm.rows)
    for (const auto& c : mcm.cols) mcm.cells.push_back(mcm_cell(table, table.index_of(r), table.index_of(c), alpha));
  return mcm;
}

std::string mcm_to_csv(const Mcm& mcm) {
  std::ostringstream out;
  out << "row,col,mean_diff,wins,ties,losses,p_value,bold\n";
  for (std::size_t r = 0; r < mcm.rows.size(); ++r) {
    for (std::size_t c = 0; c < mcm.cols.size(); ++c) {
      const auto& cell = mcm.cell(r, c);
      if (cell.empty) continue;
      out << mcm.rows[r] << ',' << mcm.cols[c] << ',' << format_double(cell.mean_diff) << ',' << cell.wins << ','
          << cell.ties << ',' << cell.losses << ',' << format_double(cell.p_value) << ',' << (cell.bold ? 1 : 0)
          << '\n';
    }
  }
  return out.str();
}

std::string mcm_to_text(const Mcm& mcm) {
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header{""};
  for (std::size_t c = 0; c < mcm.cols.size(); ++c) header.push_back(mcm.cols[c] + " (" + fixed(mcm.col_means[c], 4) + ")");
  grid.push_back(header);
  for (std::size_t r = 0; r < mcm.rows.size(); ++r) {
    std::vector<std::string> line{mcm.rows[r] + " (" + fixed(mcm.row_means[r], 4) + ")"};
    for (std::size_t c = 0; c < mcm.cols.size(); ++c) {
      const auto& cell = mcm.cell(r, c);
      if (cell.empty) {
        line.emplace_back("-");
        continue;
      }
      std::string text = fixed(cell.mean_diff, 4) + " " + std::to_string(cell.wins) + "/" + std::to_string(cell.ties) +
                         "/" + std::to_string(cell.losses) + " p=" + fixed(cell.p_value, 4);
      if (cell.bold) text = "*" + text + "*";
      line.push_back(text);
    }
    grid.push_back(line);
  }
  std::vector<std::size_t> width(grid.front().size(), 0);
  for (const auto& line : grid)
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  std::ostringstream out;
  for (const auto& line : grid) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      out << std::left << std::setw(static_cast<int>(width[c])) << line[c];
      out << (c + 1 < line.size() ? " | " : "\n");
    }
  }
  out << "cells: mean difference (row - col), wins/ties/losses of row, Wilcoxon p; *bold* when p <= "
      << std::setprecision(6) << mcm.alpha << '\n';
  return out.str();
}

PairwiseHolm pairwise_holm(const ResultsTable& table, double alpha) {
  table.validate();
  PairwiseHolm out;
  for (std::size_t i = 0; i < table.m(); ++i) {
    for (std::size_t j = i + 1; j < table.m(); ++j) {
      out.pairs.emplace_back(i, j);
      out.p_values.push_back(wilcoxon_signed_rank(table.column(i), table.column(j)).p_value);
    }
  }
  out.holm = holm_correct(out.p_values, alpha);
  return out;
}

}  // namespace warpkit
