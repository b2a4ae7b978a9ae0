#pragma once

// JSON analysis reports. Numbers are written at full double precision so a
// report read back compares equal to the one written.

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tcalib/ca.hpp"
#include "tcalib/clustering.hpp"
#include "tcalib/dispersion.hpp"
#include "tcalib/io.hpp"
#include "tcalib/taxicab.hpp"
#include "tcalib/tensor.hpp"

namespace tcalib::report {

inline constexpr const char* kSchema = "tcalib.report/1";

enum class Method { tca, ca, compare, dispersion, tensor, cluster, seriate };
const char* to_string(Method m);
Method method_from_string(const std::string& s);

struct InputSummary {
  std::string dataset;  // embedded name or file path
  std::string hash;     // fnv1a64 of the source bytes
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  double total = 0.0;

  bool operator==(const InputSummary&) const = default;
};

struct Provenance {
  std::string solver;  // exact | heuristic | jacobi-svd | exhaustive | local_search | closed-form
  std::map<std::string, double> tolerances;

  bool operator==(const Provenance&) const = default;
};

/// One axis: TCA (value = delta) or CA (value = principal inertia).
struct AxisRecord {
  std::size_t index = 1;  // 1-based
  std::string quantity;   // "delta" | "inertia"
  double value = 0.0;
  std::optional<double> singular_value;
  std::optional<bool> exact;
  std::vector<int> u;
  std::vector<int> v;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> row_scores;
  std::vector<double> col_scores;
  std::vector<double> row_contributions;
  std::vector<double> col_contributions;
  std::vector<std::size_t> heavyweight_rows;
  std::vector<std::size_t> heavyweight_cols;
  std::optional<std::array<double, 4>> block_sums;
  std::optional<double> cut_norm;

  bool operator==(const AxisRecord&) const = default;
};

struct AnalysisReport {
  Method method = Method::tca;
  InputSummary input;
  Provenance provenance;
  std::vector<AxisRecord> axes;
  nlohmann::json details = nlohmann::json::object();

  bool operator==(const AnalysisReport&) const = default;
};

nlohmann::json to_json(const AnalysisReport& r);
AnalysisReport from_json(const nlohmann::json& j);

/// Pretty-printed JSON with a trailing newline; byte-identical for equal reports.
std::string write_report(const AnalysisReport& r);
AnalysisReport read_report(const std::string& text);

InputSummary summarize(const io::LabeledMatrix& m, std::string dataset, std::string hash);

AnalysisReport from_tca(const taxicab::TcaDecomposition& d, InputSummary input, taxicab::SolverMode mode);
AnalysisReport from_ca(const ca::CaDecomposition& d, InputSummary input);
AnalysisReport from_comparison(const ca::Comparison& c, InputSummary input);
AnalysisReport from_dispersion(const dispersion::DispersionReport& d, InputSummary input);
AnalysisReport from_tensor(const tensor::TensorAxis& axis, const residual::Array3& data, InputSummary input);
AnalysisReport from_clustering(const clustering::ClusteringResult& c, InputSummary input,
                               const std::string& residual_kind);

}  // namespace tcalib::report
