#include "tcalib/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

#include "tcalib/errors.hpp"

namespace tcalib::io {

namespace {

std::string position(std::size_t line, std::size_t col) {
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_number(std::string_view cell, double& out) {
  cell = trim(cell);
  if (cell.empty()) return false;
  if (cell.front() == '+') cell.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc() && ptr == cell.data() + cell.size() && std::isfinite(out);
}

struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

// RFC 4180 records; blank lines are skipped.
std::vector<CsvRow> split_csv(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<CsvRow> rows;
  CsvRow row;
  std::string field;
  bool quoted = false;
  bool any = false;
  std::size_t line = 1;
  row.line = 1;

  auto end_record = [&] {
    row.fields.push_back(std::move(field));
    field.clear();
    const bool blank = row.fields.size() == 1 && trim(row.fields[0]).empty() && !any;
    if (!blank) rows.push_back(std::move(row));
    row = CsvRow{};
    any = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
      continue;
    }
    switch (ch) {
      case '"':
        quoted = true;
        any = true;
        break;
      case ',':
        row.fields.push_back(std::move(field));
        field.clear();
        any = true;
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        row.line = ++line;
        break;
      default:
        field.push_back(ch);
    }
  }
  if (quoted) throw InputError("unterminated quoted field at " + position(line, row.fields.size() + 1));
  if (!field.empty() || !row.fields.empty() || any) end_record();
  return rows;
}

void reject_duplicates(const std::vector<std::string>& labels, const char* what) {
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) throw InputError(std::string("duplicate ") + what + " label '" + l + "'");
  }
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

LabeledMatrix parse_matrix_csv(std::string_view text, bool allow_negative) {
  const std::vector<CsvRow> rows = split_csv(text);
  if (rows.size() < 2) throw InputError("CSV needs a header row and at least one data row");

  const std::size_t width = rows[1].fields.size();
  if (width < 2) throw InputError("data row needs a label and at least one value at line " + std::to_string(rows[1].line));
  const auto& header = rows[0].fields;
  LabeledMatrix out;
  if (header.size() == width) {
    out.col_labels.assign(header.begin() + 1, header.end());
  } else if (header.size() == width - 1) {
    out.col_labels = header;
  } else {
    throw InputError("header has " + std::to_string(header.size()) + " fields but data rows have " +
                     std::to_string(width) + " at line " + std::to_string(rows[0].line));
  }
  for (auto& l : out.col_labels) l = std::string(trim(l));

  const std::size_t n = rows.size() - 1;
  const std::size_t m = width - 1;
  out.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  for (std::size_t r = 0; r < n; ++r) {
    const CsvRow& row = rows[r + 1];
    if (row.fields.size() != width) {
      throw InputError("ragged row: expected " + std::to_string(width) + " fields, found " +
                       std::to_string(row.fields.size()) + " at line " + std::to_string(row.line));
    }
    out.row_labels.emplace_back(trim(row.fields[0]));
    for (std::size_t c = 0; c < m; ++c) {
      double v = 0.0;
      if (!parse_number(row.fields[c + 1], v)) {
        throw InputError("non-numeric cell '" + row.fields[c + 1] + "' at " + position(row.line, c + 2));
      }
      if (!allow_negative && v < 0.0) throw InputError("negative cell at " + position(row.line, c + 2));
      out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
    }
  }
  reject_duplicates(out.row_labels, "row");
  reject_duplicates(out.col_labels, "column");
  return out;
}

LabeledMatrix load_counts_csv(const std::filesystem::path& path) { return parse_matrix_csv(read_file(path)); }

LabeledMatrix load_matrix_csv(const std::filesystem::path& path) { return parse_matrix_csv(read_file(path), true); }

std::vector<double> parse_column_csv(std::string_view text, const std::string& column) {
  const std::vector<CsvRow> rows = split_csv(text);
  if (rows.empty()) throw InputError("empty sample");

  bool has_header = false;
  for (const auto& f : rows[0].fields) {
    double v = 0.0;
    if (!parse_number(f, v)) has_header = true;
  }

  std::size_t index = 0;
  bool found = false;
  if (has_header) {
    for (std::size_t c = 0; c < rows[0].fields.size(); ++c) {
      if (trim(rows[0].fields[c]) == column) {
        index = c;
        found = true;
        break;
      }
    }
  }
  if (!found) {
    const auto [ptr, ec] = std::from_chars(column.data(), column.data() + column.size(), index);
    if (ec != std::errc() || ptr != column.data() + column.size()) {
      throw InputError("unknown column '" + column + "'");
    }
  }

  std::vector<double> values;
  for (std::size_t r = has_header ? 1 : 0; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    if (index >= row.fields.size()) throw InputError("missing column " + std::to_string(index) + " at line " + std::to_string(row.line));
    double v = 0.0;
    if (!parse_number(row.fields[index], v)) {
      throw InputError("non-numeric cell '" + row.fields[index] + "' at " + position(row.line, index + 1));
    }
    values.push_back(v);
  }
  if (values.empty()) throw InputError("empty sample");
  return values;
}

std::vector<double> load_column_csv(const std::filesystem::path& path, const std::string& column) {
  return parse_column_csv(read_file(path), column);
}

Array3 parse_tensor(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    const std::string_view raw = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    ++line_no;
    if (!trim(raw).empty()) lines.emplace_back(line_no, std::string(trim(raw)));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  if (lines.empty()) throw InputError("tensor file is empty");

  auto numbers = [](const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream ss(line);
    for (std::string tok; ss >> tok;) tokens.push_back(tok);
    return tokens;
  };

  const auto dims = numbers(lines[0].second);
  if (dims.size() != 3) throw InputError("line " + std::to_string(lines[0].first) + ": expected 'n m t'");
  std::size_t d[3] = {0, 0, 0};
  for (int a = 0; a < 3; ++a) {
    const auto& tok = dims[static_cast<std::size_t>(a)];
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), d[a]);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || d[a] == 0) {
      throw InputError("line " + std::to_string(lines[0].first) + ": invalid dimension '" + tok + "'");
    }
  }
  const std::size_t n = d[0], m = d[1], t = d[2];
  if (lines.size() - 1 != n * t) {
    throw InputError("expected " + std::to_string(n * t) + " data lines, found " + std::to_string(lines.size() - 1));
  }

  Array3 x(n, m, t);
  for (std::size_t k = 0; k < t; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& [ln, content] = lines[1 + k * n + i];
      const auto tokens = numbers(content);
      if (tokens.size() != m) {
        throw InputError("line " + std::to_string(ln) + ": expected " + std::to_string(m) + " values, found " +
                         std::to_string(tokens.size()));
      }
      for (std::size_t j = 0; j < m; ++j) {
        double v = 0.0;
        if (!parse_number(tokens[j], v)) throw InputError("non-numeric value '" + tokens[j] + "' at " + position(ln, j + 1));
        x(i, j, k) = v;
      }
    }
  }
  return x;
}

Array3 load_tensor(const std::filesystem::path& path) { return parse_tensor(read_file(path)); }

std::string format_tensor(const Array3& x) {
  std::string out = std::to_string(x.dim_i()) + " " + std::to_string(x.dim_j()) + " " + std::to_string(x.dim_k()) + "\n";
  char buf[64];
  for (std::size_t k = 0; k < x.dim_k(); ++k) {
    for (std::size_t i = 0; i < x.dim_i(); ++i) {
      for (std::size_t j = 0; j < x.dim_j(); ++j) {
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x(i, j, k));
        if (j) out.push_back(' ');
        out.append(buf, ptr);
      }
      out.push_back('\n');
    }
  }
  return out;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace tcalib::io
