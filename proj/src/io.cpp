#include "warpkit/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "warpkit/error.hpp"

namespace warpkit {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool parse_number(std::string_view cell, double& out) {
  cell = trim(cell);
  if (cell.empty()) return false;
  if (cell.front() == '+') cell.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc{} && ptr == cell.data() + cell.size() && std::isfinite(out);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    cells.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

// Splits on runs of whitespace or on single commas.
std::vector<std::string_view> split_any(std::string_view line) {
  if (line.find(',') != std::string_view::npos) return split(line, ',');
  std::vector<std::string_view> cells;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    cells.push_back(line.substr(i, j - i));
    i = j;
  }
  return cells;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    const auto line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    ++line_no;
    fn(line, line_no);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

Dataset parse_ucr(std::string_view text, std::string name) {
  Dataset ds;
  ds.name = std::move(name);
  char sep = 0;
  std::size_t width = 0;
  bool all_integral = true;

  for_each_line(text, [&](std::string_view raw, std::size_t line_no) {
    const auto line = trim(raw);
    if (line.empty()) return;
    if (sep == 0) sep = line.find('\t') != std::string_view::npos ? '\t' : ',';
    const auto cells = split(line, sep);
    if (cells.size() < 2) throw ParseError("row has a label but no values", line_no);
    if (width == 0) {
      width = cells.size();
    } else if (cells.size() != width) {
      throw ParseError("ragged row: expected " + std::to_string(width - 1) + " values, found " +
                           std::to_string(cells.size() - 1),
                       line_no);
    }
    double label = 0.0;
    if (!parse_number(cells[0], label)) throw ParseError("non-numeric label '" + std::string(trim(cells[0])) + "'", line_no);
    if (label != std::floor(label)) all_integral = false;
    std::vector<double> values(cells.size() - 1);
    for (std::size_t i = 1; i < cells.size(); ++i) {
      if (!parse_number(cells[i], values[i - 1]))
        throw ParseError("non-numeric value '" + std::string(trim(cells[i])) + "' in column " + std::to_string(i + 1),
                         line_no);
    }
    ds.labels.push_back(label);
    ds.samples.push_back(TimeSeries::univariate(std::move(values)));
  });

  if (ds.samples.empty()) throw ParseError("empty dataset", 0);
  ds.label_kind = all_integral ? LabelKind::integer : LabelKind::real;
  return ds;
}

Dataset load_ucr_dataset(const std::filesystem::path& path) {
  try {
    return parse_ucr(read_file(path), path.stem().string());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

void write_ucr(std::ostream& out, const Dataset& dataset) {
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& s = dataset.samples[i];
    if (s.channels() != 1) throw ArgumentError("UCR writer handles univariate samples only");
    const double label = dataset.has_labels() ? dataset.labels[i] : 0.0;
    if (dataset.label_kind == LabelKind::real)
      out << format_double(label);
    else
      out << static_cast<long long>(label);
    for (std::size_t t = 0; t < s.length(); ++t) out << '\t' << format_double(s(t, 0));
    out << '\n';
  }
}

void save_ucr_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_ucr(out, dataset);
}

Dataset load_multivariate_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw DataError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DataError("no channel files in " + dir.string());

  std::vector<Dataset> per_channel;
  for (const auto& f : files) per_channel.push_back(load_ucr_dataset(f));
  const auto& first = per_channel.front();
  for (std::size_t c = 1; c < per_channel.size(); ++c) {
    const auto& other = per_channel[c];
    if (other.size() != first.size())
      throw DataError(files[c].string() + ": row count differs from " + files[0].string());
    if (other.labels != first.labels) throw DataError(files[c].string() + ": labels differ from " + files[0].string());
  }

  Dataset ds;
  ds.name = dir.filename().string();
  ds.labels = first.labels;
  ds.label_kind = first.label_kind;
  for (std::size_t i = 0; i < first.size(); ++i) {
    std::vector<std::vector<double>> channels;
    for (std::size_t c = 0; c < per_channel.size(); ++c) {
      const auto& s = per_channel[c].samples[i];
      if (s.length() != first.samples[i].length())
        throw ParseError(files[c].string() + ": row length differs across channel files", i + 1);
      channels.push_back(s.channel(0));
    }
    ds.samples.push_back(TimeSeries::from_channels(channels));
  }
  return ds;
}

void save_multivariate_dir(const std::filesystem::path& dir, const Dataset& dataset) {
  dataset.validate();
  std::filesystem::create_directories(dir);
  const std::size_t channels = dataset.channels();
  const int digits = channels < 10 ? 1 : channels < 100 ? 2 : 3;
  for (std::size_t m = 0; m < channels; ++m) {
    Dataset one;
    one.labels = dataset.labels;
    one.label_kind = dataset.label_kind;
    for (const auto& s : dataset.samples) one.samples.push_back(TimeSeries::univariate(s.channel(m)));
    char name[32];
    std::snprintf(name, sizeof name, "dim%0*zu.tsv", digits, m);
    save_ucr_dataset(dir / name, one);
  }
}

std::vector<std::vector<double>> load_matrix(const std::filesystem::path& path) {
  const auto text = read_file(path);
  std::vector<std::vector<double>> rows;
  bool first_content = true;
  for_each_line(text, [&](std::string_view raw, std::size_t line_no) {
    const auto line = trim(raw);
    if (line.empty()) return;
    const auto cells = split_any(line);
    std::vector<double> row(cells.size());
    bool ok = true;
    for (std::size_t i = 0; i < cells.size() && ok; ++i) ok = parse_number(cells[i], row[i]);
    if (!ok) {
      if (first_content) {
        first_content = false;
        return;
      }
      throw ParseError(path.string() + ": non-numeric cell", line_no);
    }
    first_content = false;
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError(path.string() + ": ragged row", line_no);
    rows.push_back(std::move(row));
  });
  if (rows.empty()) throw ParseError(path.string() + ": empty matrix", 0);
  return rows;
}

std::vector<long long> load_int_labels(const std::filesystem::path& path) {
  const auto text = read_file(path);
  std::vector<long long> labels;
  for_each_line(text, [&](std::string_view raw, std::size_t line_no) {
    const auto line = trim(raw);
    if (line.empty()) return;
    double v = 0.0;
    if (!parse_number(line, v) || v != std::floor(v))
      throw ParseError(path.string() + ": label is not an integer", line_no);
    labels.push_back(static_cast<long long>(v));
  });
  return labels;
}

}  // namespace warpkit
