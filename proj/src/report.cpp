#include "tcalib/report.hpp"

#include <stdexcept>

#include "tcalib/errors.hpp"

namespace tcalib::report {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Method, const char*>, 7> kMethods{{
    {Method::tca, "tca"},
    {Method::ca, "ca"},
    {Method::compare, "compare"},
    {Method::dispersion, "dispersion"},
    {Method::tensor, "tensor"},
    {Method::cluster, "cluster"},
    {Method::seriate, "seriate"},
}};

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

std::vector<int> to_std(const taxicab::SignVector& s) { return {s.signs().begin(), s.signs().end()}; }

template <typename T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <typename T>
std::optional<T> get_optional(const json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  return j.at(key).get<T>();
}

template <typename T>
void put_nonempty(json& j, const char* key, const std::vector<T>& v) {
  if (!v.empty()) j[key] = v;
}

template <typename T>
std::vector<T> get_vector(const json& j, const char* key) {
  if (!j.contains(key)) return {};
  return j.at(key).get<std::vector<T>>();
}

json axis_to_json(const AxisRecord& a) {
  json j;
  j["index"] = a.index;
  j["quantity"] = a.quantity;
  j["value"] = a.value;
  put_optional(j, "singular_value", a.singular_value);
  put_optional(j, "exact", a.exact);
  put_nonempty(j, "u", a.u);
  put_nonempty(j, "v", a.v);
  put_nonempty(j, "a", a.a);
  put_nonempty(j, "b", a.b);
  put_nonempty(j, "row_scores", a.row_scores);
  put_nonempty(j, "col_scores", a.col_scores);
  put_nonempty(j, "row_contributions", a.row_contributions);
  put_nonempty(j, "col_contributions", a.col_contributions);
  j["heavyweight_rows"] = a.heavyweight_rows;
  j["heavyweight_cols"] = a.heavyweight_cols;
  put_optional(j, "block_sums", a.block_sums);
  put_optional(j, "cut_norm", a.cut_norm);
  return j;
}

AxisRecord axis_from_json(const json& j) {
  AxisRecord a;
  a.index = j.at("index").get<std::size_t>();
  a.quantity = j.at("quantity").get<std::string>();
  a.value = j.at("value").get<double>();
  a.singular_value = get_optional<double>(j, "singular_value");
  a.exact = get_optional<bool>(j, "exact");
  a.u = get_vector<int>(j, "u");
  a.v = get_vector<int>(j, "v");
  a.a = get_vector<double>(j, "a");
  a.b = get_vector<double>(j, "b");
  a.row_scores = get_vector<double>(j, "row_scores");
  a.col_scores = get_vector<double>(j, "col_scores");
  a.row_contributions = get_vector<double>(j, "row_contributions");
  a.col_contributions = get_vector<double>(j, "col_contributions");
  a.heavyweight_rows = get_vector<std::size_t>(j, "heavyweight_rows");
  a.heavyweight_cols = get_vector<std::size_t>(j, "heavyweight_cols");
  a.block_sums = get_optional<std::array<double, 4>>(j, "block_sums");
  a.cut_norm = get_optional<double>(j, "cut_norm");
  return a;
}

Provenance base_provenance(std::string solver) {
  Provenance p;
  p.solver = std::move(solver);
  p.tolerances["centering"] = residual::kCenteringTolerance;
  return p;
}

AxisRecord tca_axis_record(const taxicab::TcaDecomposition& d, std::size_t alpha) {
  const taxicab::TaxicabAxis& axis = d.axes[alpha];
  const taxicab::AxisContributions rc = taxicab::rc_axis(d, alpha);
  const taxicab::SeriationReport ser = taxicab::seriate(d, alpha);
  AxisRecord rec;
  rec.index = alpha + 1;
  rec.quantity = "delta";
  rec.value = axis.delta;
  rec.exact = axis.exact;
  rec.u = to_std(axis.u);
  rec.v = to_std(axis.v);
  rec.a = to_std(axis.a);
  rec.b = to_std(axis.b);
  rec.row_scores = to_std(axis.f);
  rec.col_scores = to_std(axis.g);
  rec.row_contributions = rc.rc_rows;
  rec.col_contributions = rc.rc_cols;
  rec.heavyweight_rows = rc.heavyweight_rows;
  rec.heavyweight_cols = rc.heavyweight_cols;
  rec.block_sums = ser.block_sums;
  rec.cut_norm = ser.cut_norm;
  return rec;
}

}  // namespace

const char* to_string(Method m) {
  for (const auto& [k, name] : kMethods)
    if (k == m) return name;
  return "unknown";
}

Method method_from_string(const std::string& s) {
  for (const auto& [k, name] : kMethods)
    if (s == name) return k;
  throw InputError("unknown report method '" + s + "'");
}

json to_json(const AnalysisReport& r) {
  json j;
  j["schema"] = kSchema;
  j["method"] = to_string(r.method);
  j["input"] = {{"dataset", r.input.dataset},       {"hash", r.input.hash},
                {"rows", r.input.rows},             {"cols", r.input.cols},
                {"row_labels", r.input.row_labels}, {"col_labels", r.input.col_labels},
                {"total", r.input.total}};
  j["provenance"] = {{"solver", r.provenance.solver}, {"tolerances", r.provenance.tolerances}};
  j["axes"] = json::array();
  for (const auto& a : r.axes) j["axes"].push_back(axis_to_json(a));
  j["details"] = r.details;
  return j;
}

AnalysisReport from_json(const json& j) {
  if (j.value("schema", "") != kSchema) throw InputError("unsupported report schema");
  AnalysisReport r;
  r.method = method_from_string(j.at("method").get<std::string>());
  const json& in = j.at("input");
  r.input.dataset = in.at("dataset").get<std::string>();
  r.input.hash = in.at("hash").get<std::string>();
  r.input.rows = in.at("rows").get<std::size_t>();
  r.input.cols = in.at("cols").get<std::size_t>();
  r.input.row_labels = in.at("row_labels").get<std::vector<std::string>>();
  r.input.col_labels = in.at("col_labels").get<std::vector<std::string>>();
  r.input.total = in.at("total").get<double>();
  const json& prov = j.at("provenance");
  r.provenance.solver = prov.at("solver").get<std::string>();
  r.provenance.tolerances = prov.at("tolerances").get<std::map<std::string, double>>();
  for (const auto& a : j.at("axes")) r.axes.push_back(axis_from_json(a));
  r.details = j.value("details", json::object());
  return r;
}

std::string write_report(const AnalysisReport& r) { return to_json(r).dump(2) + "\n"; }

AnalysisReport read_report(const std::string& text) {
  try {
    return from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
}

InputSummary summarize(const io::LabeledMatrix& m, std::string dataset, std::string hash) {
  InputSummary s;
  s.dataset = std::move(dataset);
  s.hash = std::move(hash);
  s.rows = static_cast<std::size_t>(m.values.rows());
  s.cols = static_cast<std::size_t>(m.values.cols());
  s.row_labels = m.row_labels;
  s.col_labels = m.col_labels;
  s.total = m.values.sum();
  return s;
}

AnalysisReport from_tca(const taxicab::TcaDecomposition& d, InputSummary input, taxicab::SolverMode mode) {
  AnalysisReport r;
  r.method = Method::tca;
  r.input = std::move(input);
  bool all_exact = true;
  for (const auto& a : d.axes) all_exact = all_exact && a.exact;
  const char* solver = mode == taxicab::SolverMode::heuristic ? "heuristic"
                       : (d.axes.empty() || all_exact)        ? "exact"
                                                              : "heuristic";
  r.provenance = base_provenance(solver);
  r.provenance.tolerances["rank"] = taxicab::kRankTolerance;
  r.provenance.tolerances["heavyweight"] = taxicab::kHeavyweightTolerance;
  for (std::size_t a = 0; a < d.axes.size(); ++a) r.axes.push_back(tca_axis_record(d, a));
  return r;
}

AnalysisReport from_ca(const ca::CaDecomposition& d, InputSummary input) {
  AnalysisReport r;
  r.method = Method::ca;
  r.input = std::move(input);
  r.provenance = base_provenance("jacobi-svd");
  r.provenance.tolerances["singular_value_floor"] = 1e-12;
  for (std::size_t a = 0; a < d.axes(); ++a) {
    AxisRecord rec;
    rec.index = a + 1;
    rec.quantity = "inertia";
    rec.value = d.principal_inertias[a];
    rec.singular_value = d.singular_values[a];
    rec.row_scores = to_std(d.row_scores[a]);
    rec.col_scores = to_std(d.col_scores[a]);
    rec.row_contributions = to_std(d.row_ctr[a]);
    rec.col_contributions = to_std(d.col_ctr[a]);
    r.axes.push_back(std::move(rec));
  }
  r.details["total_inertia"] = d.total_inertia;
  return r;
}

AnalysisReport from_comparison(const ca::Comparison& c, InputSummary input) {
  AnalysisReport r;
  r.method = Method::compare;
  r.input = std::move(input);
  r.provenance = base_provenance("jacobi-svd+exact");
  json entries = json::array();
  for (const auto& e : c.entries) {
    const auto& labels = e.is_row ? r.input.row_labels : r.input.col_labels;
    entries.push_back({{"kind", e.is_row ? "row" : "col"},
                       {"index", e.index},
                       {"label", e.index < labels.size() ? labels[e.index] : std::string()},
                       {"ca_score", e.ca_score},
                       {"ca_contribution", e.ca_contribution},
                       {"tca_score", e.tca_score},
                       {"tca_contribution", e.tca_contribution}});
  }
  r.details["axis"] = c.axis + 1;
  r.details["entries"] = entries;
  r.details["ca_max_contribution"] = c.ca_max_contribution;
  r.details["tca_max_contribution"] = c.tca_max_contribution;
  r.details["row_signs_agree"] = c.row_signs_agree;
  r.details["col_signs_agree"] = c.col_signs_agree;
  return r;
}

AnalysisReport from_dispersion(const dispersion::DispersionReport& d, InputSummary input) {
  AnalysisReport r;
  r.method = Method::dispersion;
  r.input = std::move(input);
  r.provenance = base_provenance("closed-form");
  r.provenance.tolerances["heavyweight"] = dispersion::kHeavyweightTolerance;
  r.details = {{"mean", d.mean},   {"median", d.median}, {"d", d.d},
               {"s2", d.s2},       {"s", d.s},           {"lad", d.lad},
               {"degenerate", d.degenerate}, {"rc_d", d.rc_d},
               {"rc_s2", d.rc_s2}, {"rc_lad", d.rc_lad}, {"heavyweight_indices", d.heavyweight_indices}};
  return r;
}

AnalysisReport from_tensor(const tensor::TensorAxis& axis, const residual::Array3& data, InputSummary input) {
  AnalysisReport r;
  r.method = Method::tensor;
  r.input = std::move(input);
  r.provenance = base_provenance(axis.exact ? "exact" : "heuristic");
  r.details["dims"] = {data.dim_i(), data.dim_j(), data.dim_k()};
  r.details["delta"] = axis.delta;
  r.details["u"] = to_std(axis.u);
  r.details["v"] = to_std(axis.v);
  r.details["w"] = to_std(axis.w);
  r.details["octant_sums"] = axis.octant_sums;
  return r;
}

AnalysisReport from_clustering(const clustering::ClusteringResult& c, InputSummary input,
                               const std::string& residual_kind) {
  AnalysisReport r;
  r.method = Method::cluster;
  r.input = std::move(input);
  r.provenance = base_provenance(clustering::to_string(c.method));
  r.details["p"] = c.p;
  r.details["objective"] = c.objective;
  r.details["residual"] = residual_kind;
  r.details["row_blocks"] = c.partition.row_blocks;
  r.details["col_blocks"] = c.partition.col_blocks;
  return r;
}

}  // namespace tcalib::report
