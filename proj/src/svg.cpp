#include "tcalib/svg.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "tcalib/errors.hpp"

namespace tcalib::svg {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 540.0;
constexpr double kMargin = 60.0;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = -1.0;
  double hi = 1.0;
};

// Always includes the origin; padded by 10% so labels stay inside.
Range range_of(const std::vector<MapPoint>& pts, bool use_x) {
  double lo = 0.0, hi = 0.0;
  for (const auto& p : pts) {
    const double v = use_x ? p.x : p.y;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi - lo < 1e-12) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double pad = 0.1 * (hi - lo);
  return {lo - pad, hi + pad};
}

}  // namespace

std::vector<MapPoint> map_points(const report::AnalysisReport& r, std::size_t first, std::size_t second) {
  if (r.axes.size() < 2) throw InputError("factor map needs at least two axes");
  if (first == 0 || second == 0 || first > r.axes.size() || second > r.axes.size()) {
    throw InputError("map axis out of range");
  }
  const auto& ax = r.axes[first - 1];
  const auto& ay = r.axes[second - 1];
  std::vector<MapPoint> pts;
  for (std::size_t i = 0; i < ax.row_scores.size(); ++i) {
    const std::string label = i < r.input.row_labels.size() ? r.input.row_labels[i] : fmt::format("r{}", i + 1);
    pts.push_back({label, true, ax.row_scores[i], ay.row_scores[i]});
  }
  for (std::size_t j = 0; j < ax.col_scores.size(); ++j) {
    const std::string label = j < r.input.col_labels.size() ? r.input.col_labels[j] : fmt::format("c{}", j + 1);
    pts.push_back({label, false, ax.col_scores[j], ay.col_scores[j]});
  }
  return pts;
}

std::string render_points(const std::vector<MapPoint>& points, const std::string& title,
                          const std::string& x_label, const std::string& y_label) {
  const Range rx = range_of(points, true);
  const Range ry = range_of(points, false);
  auto px = [&](double x) { return kMargin + (x - rx.lo) / (rx.hi - rx.lo) * (kWidth - 2 * kMargin); };
  auto py = [&](double y) { return kHeight - kMargin - (y - ry.lo) / (ry.hi - ry.lo) * (kHeight - 2 * kMargin); };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\">\n",
      kWidth, kHeight);
  out += fmt::format("<title>{}</title>\n", escape(title));
  out += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", kWidth, kHeight);
  out += fmt::format(
      "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n",
      kMargin, py(0.0), kWidth - kMargin, py(0.0));
  out += fmt::format(
      "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n",
      px(0.0), kMargin, px(0.0), kHeight - kMargin);
  out += fmt::format(
      "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">{}</text>\n",
      kWidth - kMargin, kHeight - kMargin / 3, escape(x_label));
  out += fmt::format(
      "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n", kMargin / 3,
      kMargin / 2, escape(y_label));

  for (const auto& p : points) {
    const char* color = p.is_row ? "#1f5fbf" : "#c0392b";
    out += fmt::format("<g class=\"{}\">\n", p.is_row ? "row" : "col");
    out += fmt::format("<title>{} ({:.6g}, {:.6g})</title>\n", escape(p.label), p.x, p.y);
    if (p.is_row) {
      out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"4\" fill=\"{}\"/>\n", px(p.x), py(p.y), color);
    } else {
      out += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"8\" height=\"8\" fill=\"{}\"/>\n", px(p.x) - 4,
                         py(p.y) - 4, color);
    }
    out += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"11\" fill=\"{}\">{}</text>\n",
        px(p.x) + 6, py(p.y) - 6, color, escape(p.label));
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string render_map(const report::AnalysisReport& r, std::size_t first, std::size_t second) {
  const auto pts = map_points(r, first, second);
  const std::string method = report::to_string(r.method);
  const auto& ax = r.axes[first - 1];
  const auto& ay = r.axes[second - 1];
  auto axis_label = [&](const report::AxisRecord& a) {
    return fmt::format("axis {} ({} = {:.4f})", a.index, a.quantity, a.value);
  };
  return render_points(pts, fmt::format("{} map of {}", method, r.input.dataset), axis_label(ax), axis_label(ay));
}

}  // namespace tcalib::svg
