#include "tcalib/cli.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <CLI11.hpp>
#include <fstream>
#include <optional>
#include <ostream>

#include "tcalib/ca.hpp"
#include "tcalib/clustering.hpp"
#include "tcalib/dispersion.hpp"
#include "tcalib/errors.hpp"
#include "tcalib/io.hpp"
#include "tcalib/report.hpp"
#include "tcalib/svg.hpp"
#include "tcalib/taxicab.hpp"
#include "tcalib/tensor.hpp"

namespace tcalib::cli {

namespace {

struct Common {
  std::string input;
  std::string dataset;
  std::string out_path;
  std::string map_path;
  std::vector<std::size_t> map_axes{1, 2};
};

struct Loaded {
  io::LabeledMatrix matrix;
  report::InputSummary summary;
};

void add_common(CLI::App* cmd, Common& c, const char* input_help) {
  cmd->add_option("input", c.input, input_help);
  cmd->add_option("--dataset", c.dataset, "Use an embedded dataset instead of a file")
      ->check(CLI::IsMember(io::dataset_names()));
  cmd->add_option("--out", c.out_path, "Write the JSON report to this path");
}

void add_map(CLI::App* cmd, Common& c) {
  cmd->add_option("--map", c.map_path, "Write an SVG factor map to this path");
  cmd->add_option("--map-axes", c.map_axes, "Axis pair for the map (1-based)")->expected(2)->delimiter(',');
}

Loaded load(const Common& c, bool allow_negative) {
  if (!c.dataset.empty() && !c.input.empty()) throw InputError("give either an input file or --dataset, not both");
  Loaded l;
  if (!c.dataset.empty()) {
    const std::string_view text = io::dataset_csv(c.dataset);
    l.matrix = io::parse_matrix_csv(text, allow_negative);
    l.summary = report::summarize(l.matrix, c.dataset, io::fnv1a_hex(text));
    return l;
  }
  if (c.input.empty()) throw InputError("no input: pass a CSV file or --dataset");
  const std::string text = io::read_file(c.input);
  l.matrix = io::parse_matrix_csv(text, allow_negative);
  l.summary = report::summarize(l.matrix, c.input, io::fnv1a_hex(text));
  return l;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << content;
}

void emit(const Common& c, const report::AnalysisReport& r, bool with_map) {
  if (!c.out_path.empty()) write_text(c.out_path, report::write_report(r));
  if (with_map && !c.map_path.empty()) {
    write_text(c.map_path, svg::render_map(r, c.map_axes.at(0), c.map_axes.at(1)));
  }
}

std::string label(const std::vector<std::string>& labels, std::size_t i) {
  return i < labels.size() ? labels[i] : std::to_string(i + 1);
}

void print_tca(std::ostream& out, const report::AnalysisReport& r) {
  fmt::print(out, "TCA of {} ({} x {}), {} axes, solver {}\n", r.input.dataset, r.input.rows, r.input.cols,
             r.axes.size(), r.provenance.solver);
  for (const auto& a : r.axes) {
    fmt::print(out, "\naxis {}: delta = {:.6f}  cut norm = {:.6f}\n", a.index, a.value, a.cut_norm.value_or(0.0));
    fmt::print(out, "  {:<14} {:>3} {:>10} {:>10} {:>7}\n", "row", "v", "a", "f", "RC");
    for (std::size_t i = 0; i < a.row_scores.size(); ++i) {
      fmt::print(out, "  {:<14} {:>3} {:>10.4f} {:>10.4f} {:>7.4f}\n", label(r.input.row_labels, i), a.v[i], a.a[i],
                 a.row_scores[i], a.row_contributions[i]);
    }
    fmt::print(out, "  {:<14} {:>3} {:>10} {:>10} {:>7}\n", "column", "u", "b", "g", "RC");
    for (std::size_t j = 0; j < a.col_scores.size(); ++j) {
      fmt::print(out, "  {:<14} {:>3} {:>10.4f} {:>10.4f} {:>7.4f}\n", label(r.input.col_labels, j), a.u[j], a.b[j],
                 a.col_scores[j], a.col_contributions[j]);
    }
    for (std::size_t j : a.heavyweight_cols) fmt::print(out, "  heavyweight column: {}\n", label(r.input.col_labels, j));
    for (std::size_t i : a.heavyweight_rows) fmt::print(out, "  heavyweight row: {}\n", label(r.input.row_labels, i));
  }
}

void print_ca(std::ostream& out, const report::AnalysisReport& r) {
  fmt::print(out, "CA of {} ({} x {}), total inertia {:.6f}\n", r.input.dataset, r.input.rows, r.input.cols,
             r.details.value("total_inertia", 0.0));
  for (const auto& a : r.axes) {
    fmt::print(out, "\naxis {}: sigma = {:.6f}  inertia = {:.6f}\n", a.index, a.singular_value.value_or(0.0), a.value);
    fmt::print(out, "  {:<14} {:>10} {:>7}\n", "row", "f", "CTR");
    for (std::size_t i = 0; i < a.row_scores.size(); ++i)
      fmt::print(out, "  {:<14} {:>10.4f} {:>7.4f}\n", label(r.input.row_labels, i), a.row_scores[i],
                 a.row_contributions[i]);
    fmt::print(out, "  {:<14} {:>10} {:>7}\n", "column", "g", "CTR");
    for (std::size_t j = 0; j < a.col_scores.size(); ++j)
      fmt::print(out, "  {:<14} {:>10.4f} {:>7.4f}\n", label(r.input.col_labels, j), a.col_scores[j],
                 a.col_contributions[j]);
  }
}

taxicab::SolverMode solver_mode(bool exact, bool heuristic) {
  if (exact && heuristic) throw InputError("--exact and --heuristic are mutually exclusive");
  if (exact) return taxicab::SolverMode::exact;
  if (heuristic) return taxicab::SolverMode::heuristic;
  return taxicab::SolverMode::automatic;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Taxicab correspondence analysis, cut norms and robust dispersion"};
  app.name("tcalib");
  app.require_subcommand(1);

  // dispersion
  Common disp;
  std::string column = "0";
  std::vector<double> inline_values;
  auto* c_disp = app.add_subcommand("dispersion", "d, s, LAD and relative contributions of one CSV column");
  c_disp->add_option("input", disp.input, "CSV file holding the sample");
  c_disp->add_option("--column", column, "Column name or 0-based index");
  c_disp->add_option("--values", inline_values, "Inline sample, comma separated")->delimiter(',');
  c_disp->add_option("--out", disp.out_path, "Write the JSON report to this path");

  // tca
  Common tca_opts;
  std::optional<std::size_t> tca_axes;
  bool exact = false, heuristic = false;
  auto* c_tca = app.add_subcommand("tca", "Taxicab correspondence analysis");
  add_common(c_tca, tca_opts, "Count table (CSV)");
  add_map(c_tca, tca_opts);
  c_tca->add_option("--axes", tca_axes, "Number of axes (default: full rank)");
  c_tca->add_flag("--exact", exact, "Force exhaustive search");
  c_tca->add_flag("--heuristic", heuristic, "Force alternating heuristic");

  // ca
  Common ca_opts;
  std::optional<std::size_t> ca_axes;
  auto* c_ca = app.add_subcommand("ca", "Classical correspondence analysis");
  add_common(c_ca, ca_opts, "Count table (CSV)");
  add_map(c_ca, ca_opts);
  c_ca->add_option("--axes", ca_axes, "Number of axes (default: full rank)");

  // compare
  Common cmp_opts;
  std::size_t cmp_axis = 1;
  auto* c_cmp = app.add_subcommand("compare", "CA vs TCA contributions on one axis");
  add_common(c_cmp, cmp_opts, "Count table (CSV)");
  c_cmp->add_option("--axis", cmp_axis, "Axis (1-based)")->required()->check(CLI::PositiveNumber);

  // seriate
  Common ser_opts;
  std::size_t ser_axis = 1;
  bool ser_exact = false, ser_heuristic = false;
  auto* c_ser = app.add_subcommand("seriate", "Balanced 2-blocks seriation of one TCA axis");
  add_common(c_ser, ser_opts, "Count table (CSV)");
  c_ser->add_option("--axis", ser_axis, "Axis (1-based)")->required()->check(CLI::PositiveNumber);
  c_ser->add_flag("--exact", ser_exact, "Force exhaustive search");
  c_ser->add_flag("--heuristic", ser_heuristic, "Force alternating heuristic");

  // tensor
  Common ten_opts;
  bool ten_exact = false, ten_heuristic = false;
  auto* c_ten = app.add_subcommand("tensor", "Triple-center a 3-way array and compute its taxicab norm");
  c_ten->add_option("input", ten_opts.input, "Tensor text file")->required();
  c_ten->add_option("--out", ten_opts.out_path, "Write the JSON report to this path");
  c_ten->add_flag("--exact", ten_exact, "Force exhaustive search");
  c_ten->add_flag("--heuristic", ten_heuristic, "Force cyclic heuristic");

  // cluster
  Common clu_opts;
  std::size_t r_blocks = 2, c_blocks = 2;
  double p = 1.0;
  std::string residual_kind = "additive";
  std::string method_name = "auto";
  auto* c_clu = app.add_subcommand("cluster", "Maximal-interaction two-mode clustering");
  add_common(c_clu, clu_opts, "Data matrix (CSV)");
  c_clu->add_option("--r", r_blocks, "Row blocks")->required();
  c_clu->add_option("--c", c_blocks, "Column blocks")->required();
  c_clu->add_option("--p", p, "Exponent p >= 1")->required();
  c_clu->add_option("--residual", residual_kind, "Interaction kind")
      ->check(CLI::IsMember({"additive", "multiplicative"}));
  c_clu->add_option("--method", method_name, "Search method")->check(CLI::IsMember({"auto", "exhaustive", "local"}));

  std::vector<std::string> argv_store{"tcalib"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kInputError;
  }

  try {
    if (*c_disp) {
      std::vector<double> values = inline_values;
      report::InputSummary summary;
      if (values.empty()) {
        if (disp.input.empty()) throw InputError("no input: pass a CSV file or --values");
        const std::string text = io::read_file(disp.input);
        values = io::parse_column_csv(text, column);
        summary.dataset = disp.input;
        summary.hash = io::fnv1a_hex(text);
      } else {
        summary.dataset = "inline";
      }
      const dispersion::Sample sample(values);
      summary.rows = sample.size();
      summary.cols = 1;
      const auto rep = dispersion::relative_contributions(sample);
      fmt::print(out, "n = {}\nmean = {:.10g}\nmedian = {:.10g}\nd = {:.10g}\ns2 = {:.10g}\ns = {:.10g}\nLAD = {:.10g}\n",
                 sample.size(), rep.mean, rep.median, rep.d, rep.s2, rep.s, rep.lad);
      if (rep.degenerate) {
        fmt::print(out, "degenerate: zero dispersion, no relative contributions\n");
      } else {
        for (std::size_t i : rep.heavyweight_indices) fmt::print(out, "heavyweight element: index {}\n", i);
      }
      emit(disp, report::from_dispersion(rep, summary), false);
      return kOk;
    }

    if (*c_tca) {
      const auto mode = solver_mode(exact, heuristic);
      const Loaded l = load(tca_opts, false);
      const auto p_mat = residual::CorrespondenceMatrix::from_counts(l.matrix.values);
      const std::size_t k = tca_axes.value_or(taxicab::full_rank_axes(p_mat));
      const auto d = taxicab::tca(p_mat, k, mode);
      const auto r = report::from_tca(d, l.summary, mode);
      print_tca(out, r);
      emit(tca_opts, r, true);
      return kOk;
    }

    if (*c_ca) {
      const Loaded l = load(ca_opts, false);
      const auto p_mat = residual::CorrespondenceMatrix::from_counts(l.matrix.values);
      const std::size_t k = ca_axes.value_or(taxicab::full_rank_axes(p_mat));
      const auto r = report::from_ca(ca::ca(p_mat, k), l.summary);
      print_ca(out, r);
      emit(ca_opts, r, true);
      return kOk;
    }

    if (*c_cmp) {
      const Loaded l = load(cmp_opts, false);
      const auto p_mat = residual::CorrespondenceMatrix::from_counts(l.matrix.values);
      const auto cmp = ca::compare_ca_tca(p_mat, cmp_axis - 1);
      const auto r = report::from_comparison(cmp, l.summary);
      if (cmp.empty()) {
        fmt::print(out, "axis {} is not available in both analyses; nothing to compare\n", cmp_axis);
      } else {
        fmt::print(out, "axis {}: contributions (CA: mass*score^2/inertia, TCA: |projection|/delta)\n", cmp_axis);
        fmt::print(out, "  {:<4} {:<14} {:>8} {:>8}\n", "", "point", "CA", "TCA");
        for (const auto& e : cmp.entries) {
          fmt::print(out, "  {:<4} {:<14} {:>8.3f} {:>8.3f}\n", e.is_row ? "row" : "col",
                     label(e.is_row ? l.matrix.row_labels : l.matrix.col_labels, e.index), e.ca_contribution,
                     e.tca_contribution);
        }
        fmt::print(out, "max contribution: CA {:.3f}, TCA {:.3f}\n", cmp.ca_max_contribution,
                   cmp.tca_max_contribution);
      }
      emit(cmp_opts, r, false);
      return kOk;
    }

    if (*c_ser) {
      const auto mode = solver_mode(ser_exact, ser_heuristic);
      const Loaded l = load(ser_opts, false);
      const auto p_mat = residual::CorrespondenceMatrix::from_counts(l.matrix.values);
      const auto d = taxicab::tca(p_mat, ser_axis, mode);
      if (d.axes.size() < ser_axis) throw InputError(fmt::format("axis {} does not exist (rank {})", ser_axis, d.axes.size()));
      const auto ser = taxicab::seriate(d, ser_axis - 1);
      auto r = report::from_tca(d, l.summary, mode);
      r.method = report::Method::seriate;
      r.details = {{"axis", ser_axis},       {"s_opt", ser.s_opt},         {"t_opt", ser.t_opt},
                   {"row_order", ser.row_order}, {"col_order", ser.col_order}, {"block_sums", ser.block_sums},
                   {"cut_norm", ser.cut_norm}, {"delta", ser.delta}};
      const auto& x = d.residuals[ser_axis - 1].values();
      fmt::print(out, "seriation of axis {}: delta = {:.6f}, cut norm = {:.6f}\n", ser_axis, ser.delta, ser.cut_norm);
      fmt::print(out, "{:<14}", "");
      for (std::size_t j : ser.col_order) fmt::print(out, " {:>9}", label(l.matrix.col_labels, j));
      fmt::print(out, "\n");
      for (std::size_t i : ser.row_order) {
        fmt::print(out, "{:<14}", label(l.matrix.row_labels, i));
        for (std::size_t j : ser.col_order)
          fmt::print(out, " {:>9.4f}", x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        fmt::print(out, "\n");
      }
      fmt::print(out, "block sums (S,T) (S,T') (S',T) (S',T'): {:.4f} {:.4f} {:.4f} {:.4f}\n", ser.block_sums[0],
                 ser.block_sums[1], ser.block_sums[2], ser.block_sums[3]);
      emit(ser_opts, r, false);
      return kOk;
    }

    if (*c_ten) {
      if (ten_exact && ten_heuristic) throw InputError("--exact and --heuristic are mutually exclusive");
      const std::string text = io::read_file(ten_opts.input);
      const auto data = io::parse_tensor(text);
      const auto centered = residual::triple_center(data);
      tensor::TensorAxis axis;
      if (ten_heuristic) {
        axis = tensor::tensor_norm_heuristic(centered);
      } else {
        try {
          axis = tensor::tensor_norm_exact(centered);
        } catch (const BudgetError&) {
          if (ten_exact) throw;
          axis = tensor::tensor_norm_heuristic(centered);
        }
      }
      report::InputSummary summary;
      summary.dataset = ten_opts.input;
      summary.hash = io::fnv1a_hex(text);
      summary.rows = data.dim_i();
      summary.cols = data.dim_j();
      fmt::print(out, "tensor {} x {} x {}: delta = {:.10g} ({})\noctant sums:", data.dim_i(), data.dim_j(),
                 data.dim_k(), axis.delta, axis.exact ? "exact" : "heuristic");
      for (double s : axis.octant_sums) fmt::print(out, " {:.6g}", s);
      fmt::print(out, "\n");
      emit(ten_opts, report::from_tensor(axis, data, summary), false);
      return kOk;
    }

    if (*c_clu) {
      const Loaded l = load(clu_opts, residual_kind == "additive");
      const residual::ResidualMatrix x =
          residual_kind == "additive"
              ? residual::additive_double_center(l.matrix.values)
              : residual::correspondence_residual(residual::CorrespondenceMatrix::from_counts(l.matrix.values));
      const auto method = method_name == "exhaustive" ? clustering::Method::exhaustive
                          : method_name == "local"    ? clustering::Method::local_search
                                                      : clustering::Method::automatic;
      const auto res = clustering::maximize(x, r_blocks, c_blocks, p, method);
      fmt::print(out, "f_{} = {:.10g} ({})\n", p, res.objective, clustering::to_string(res.method));
      for (std::size_t a = 0; a < res.partition.row_blocks.size(); ++a) {
        fmt::print(out, "row block {}:", a + 1);
        for (std::size_t i : res.partition.row_blocks[a]) fmt::print(out, " {}", label(l.matrix.row_labels, i));
        fmt::print(out, "\n");
      }
      for (std::size_t b = 0; b < res.partition.col_blocks.size(); ++b) {
        fmt::print(out, "column block {}:", b + 1);
        for (std::size_t j : res.partition.col_blocks[b]) fmt::print(out, " {}", label(l.matrix.col_labels, j));
        fmt::print(out, "\n");
      }
      emit(clu_opts, report::from_clustering(res, l.summary, residual_kind), false);
      return kOk;
    }
  } catch (const BudgetError& e) {
    err << "error: " << e.what() << "\n";
    return kBudgetError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kInputError;
}

}  // namespace tcalib::cli
