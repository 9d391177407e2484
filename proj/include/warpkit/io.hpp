#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "warpkit/series.hpp"

namespace warpkit {

/// Parses UCR-style text: one sample per line, label first, values after.
/// The separator (tab or comma) is detected from the first non-empty line.
/// All rows must have the same number of values.
Dataset parse_ucr(std::string_view text, std::string name = {});

/// Reads a UCR-style file. Labels are integer class ids when every label is
/// integral, real scores otherwise.
Dataset load_ucr_dataset(const std::filesystem::path& path);

/// Writes univariate samples in UCR layout with tab separators; values use
/// 17 significant digits so a reload reproduces them bit-for-bit.
void write_ucr(std::ostream& out, const Dataset& dataset);
void save_ucr_dataset(const std::filesystem::path& path, const Dataset& dataset);

/// Multivariate layout: a directory holding one UCR file per channel, read in
/// lexicographic filename order. Rows are aligned across files and every file
/// must carry the same labels.
Dataset load_multivariate_dir(const std::filesystem::path& dir);
void save_multivariate_dir(const std::filesystem::path& dir, const Dataset& dataset);

/// Reads a numeric matrix (one row per line, comma/tab/space separated).
/// A leading non-numeric header line is skipped.
std::vector<std::vector<double>> load_matrix(const std::filesystem::path& path);

/// One label per line.
std::vector<long long> load_int_labels(const std::filesystem::path& path);

/// "%.17g" rendering used by every writer in the project.
std::string format_double(double value);

}  // namespace warpkit
