#pragma once

// Input formats: labeled CSV matrices, single CSV columns and the plain-text
// tensor format, plus the two embedded reference tables.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tcalib/residual.hpp"

namespace tcalib::io {

using residual::Array3;
using residual::Matrix;

struct LabeledMatrix {
  Matrix values;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
};

/// Comma-separated, RFC 4180 quoting. The first row holds column labels (with
/// or without a leading corner cell), the first column holds row labels.
/// Errors name the 1-based line and column. Duplicate labels are rejected, as
/// are negative cells unless allow_negative is set.
LabeledMatrix parse_matrix_csv(std::string_view text, bool allow_negative = false);
LabeledMatrix load_counts_csv(const std::filesystem::path& path);
LabeledMatrix load_matrix_csv(const std::filesystem::path& path);

/// Numbers from one CSV column. A non-numeric first row is treated as a
/// header; `column` is either a header name or a 0-based index.
std::vector<double> parse_column_csv(std::string_view text, const std::string& column = "0");
std::vector<double> load_column_csv(const std::filesystem::path& path, const std::string& column = "0");

/// Tensor text format: a line "n m t", then n*t lines of m numbers; slab k
/// occupies lines k*n .. k*n+n-1 and line k*n+i holds x(i, 0..m-1, k).
Array3 parse_tensor(std::string_view text);
Array3 load_tensor(const std::filesystem::path& path);
std::string format_tensor(const Array3& x);

std::string read_file(const std::filesystem::path& path);

/// FNV-1a 64-bit digest, hex encoded.
std::string fnv1a_hex(std::string_view bytes);

/// Embedded tables: "asbestos" (5 x 4 exposure-by-grade counts) and
/// "americas" (22 x 15 country-by-organization memberships).
std::string_view dataset_csv(std::string_view name);
LabeledMatrix load_dataset(std::string_view name);
std::vector<std::string> dataset_names();

}  // namespace tcalib::io
