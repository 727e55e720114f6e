#include "svg_plot.hpp"

#include "relreg/error.hpp"
#include "relreg/io.hpp"
#include "relreg/normal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <vector>

namespace relreg::cli {

namespace {

constexpr double width = 640.0;
constexpr double height = 400.0;
constexpr double margin_left = 60.0;
constexpr double margin_right = 20.0;
constexpr double margin_top = 30.0;
constexpr double margin_bottom = 40.0;

struct Table
{
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

Table
parse_table(const std::string& text)
{
  Table t;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ','))
      fields.push_back(f);
    if (t.header.empty()) {
      t.header = fields;
      continue;
    }
    if (fields.size() != t.header.size())
      throw Error(ErrorCode::MalformedInput,
                  "line " + std::to_string(line_no) + " has " +
                    std::to_string(fields.size()) + " fields");
    std::vector<double> row;
    for (const auto& field : fields) {
      double v = 0.0;
      if (!io::parse_double(field, v))
        throw Error(ErrorCode::MalformedInput,
                    "line " + std::to_string(line_no) + ": bad number '" +
                      field + "'");
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty() || t.rows.empty())
    throw Error(ErrorCode::MalformedInput, "plot input has no data rows");
  return t;
}

std::string
num(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string
label(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

class Canvas
{
public:
  Canvas(double x_lo, double x_hi, double y_lo, double y_hi)
  {
    if (!(x_hi > x_lo)) {
      x_lo -= 0.5;
      x_hi += 0.5;
    }
    if (!(y_hi > y_lo)) {
      y_lo -= 0.5;
      y_hi += 0.5;
    }
    const double pad = 0.05 * (y_hi - y_lo);
    x_lo_ = x_lo;
    x_hi_ = x_hi;
    y_lo_ = y_lo - pad;
    y_hi_ = y_hi + pad;
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
         << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
         << height << "\">\n";
    out_ << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\""
         << height << "\" fill=\"white\"/>\n";
    axes();
  }

  double px(double x) const
  {
    return margin_left +
           (x - x_lo_) / (x_hi_ - x_lo_) * (width - margin_left - margin_right);
  }
  double py(double y) const
  {
    return height - margin_bottom -
           (y - y_lo_) / (y_hi_ - y_lo_) * (height - margin_top - margin_bottom);
  }

  void polyline(const std::vector<std::pair<double, double>>& pts,
                const std::string& colour,
                const std::string& cls,
                bool dashed = false)
  {
    if (pts.empty())
      return;
    out_ << "<polyline class=\"" << cls << "\" fill=\"none\" stroke=\""
         << colour << "\" stroke-width=\"1.5\"";
    if (dashed)
      out_ << " stroke-dasharray=\"5,3\"";
    out_ << " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i)
      out_ << (i ? " " : "") << num(px(pts[i].first)) << ','
           << num(py(pts[i].second));
    out_ << "\"/>\n";
  }

  void bar(double x0, double x1, double y)
  {
    const double top = py(y);
    const double base = py(std::max(0.0, y_lo_));
    out_ << "<rect class=\"bin\" x=\"" << num(px(x0)) << "\" y=\"" << num(top)
         << "\" width=\"" << num(px(x1) - px(x0)) << "\" height=\""
         << num(base - top) << "\" fill=\"#9ecae1\" stroke=\"#3182bd\"/>\n";
  }

  void title(const std::string& text)
  {
    out_ << "<text x=\"" << num(width / 2) << "\" y=\"20\" "
         << "text-anchor=\"middle\" font-family=\"sans-serif\" "
         << "font-size=\"14\">" << text << "</text>\n";
  }

  std::string finish()
  {
    out_ << "</svg>\n";
    return out_.str();
  }

private:
  void axes()
  {
    const double x0 = margin_left;
    const double x1 = width - margin_right;
    const double y0 = height - margin_bottom;
    const double y1 = margin_top;
    out_ << "<g stroke=\"black\" stroke-width=\"1\">\n";
    out_ << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1
         << "\" y2=\"" << y0 << "\"/>\n";
    out_ << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0
         << "\" y2=\"" << y1 << "\"/>\n";
    out_ << "</g>\n<g font-family=\"sans-serif\" font-size=\"10\">\n";
    for (int k = 0; k <= 4; ++k) {
      const double xv = x_lo_ + (x_hi_ - x_lo_) * k / 4.0;
      const double yv = y_lo_ + (y_hi_ - y_lo_) * k / 4.0;
      out_ << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(y0 + 15)
           << "\" text-anchor=\"middle\">" << label(xv) << "</text>\n";
      out_ << "<text x=\"" << num(x0 - 5) << "\" y=\"" << num(py(yv) + 3)
           << "\" text-anchor=\"end\">" << label(yv) << "</text>\n";
    }
    out_ << "</g>\n";
  }

  double x_lo_ = 0.0;
  double x_hi_ = 1.0;
  double y_lo_ = 0.0;
  double y_hi_ = 1.0;
  std::ostringstream out_;
};

bool
header_is(const Table& t, std::initializer_list<const char*> names)
{
  if (t.header.size() != names.size())
    return false;
  std::size_t i = 0;
  for (const char* n : names)
    if (t.header[i++] != n)
      return false;
  return true;
}

// Consecutive defined points form one segment; undefined points break it.
std::vector<std::vector<std::pair<double, double>>>
segments(const Table& t, std::size_t col, std::size_t defined_col)
{
  std::vector<std::vector<std::pair<double, double>>> out(1);
  for (const auto& row : t.rows) {
    if (row[defined_col] != 1.0 || !std::isfinite(row[col])) {
      if (!out.back().empty())
        out.emplace_back();
      continue;
    }
    out.back().emplace_back(row[0], row[col]);
  }
  return out;
}

std::string
render_curves(const Table& t,
              const std::vector<std::size_t>& cols,
              std::size_t defined_col,
              const std::optional<TrueCurve>& truth,
              const std::string& heading)
{
  double x_lo = t.rows.front()[0];
  double x_hi = t.rows.back()[0];
  if (x_lo > x_hi)
    std::swap(x_lo, x_hi);
  double y_lo = std::numeric_limits<double>::infinity();
  double y_hi = -y_lo;
  for (const auto& row : t.rows) {
    if (row[defined_col] != 1.0)
      continue;
    for (auto c : cols) {
      if (std::isfinite(row[c])) {
        y_lo = std::min(y_lo, row[c]);
        y_hi = std::max(y_hi, row[c]);
      }
    }
  }
  std::vector<std::pair<double, double>> true_pts;
  if (truth) {
    for (const auto& row : t.rows) {
      const double v = (*truth)(row[0]);
      true_pts.emplace_back(row[0], v);
      y_lo = std::min(y_lo, v);
      y_hi = std::max(y_hi, v);
    }
  }
  if (!std::isfinite(y_lo)) {
    y_lo = 0.0;
    y_hi = 1.0;
  }
  Canvas canvas(x_lo, x_hi, y_lo, y_hi);
  canvas.title(heading);
  if (truth)
    canvas.polyline(true_pts, "#d62728", "truth", true);
  static const char* colours[] = { "#1f77b4", "#7f7f7f", "#7f7f7f" };
  static const char* classes[] = { "estimate", "lower", "upper" };
  for (std::size_t k = 0; k < cols.size(); ++k)
    for (const auto& seg : segments(t, cols[k], defined_col))
      canvas.polyline(seg, colours[k], classes[k], k > 0);
  return canvas.finish();
}

std::string
render_histogram(const Table& t, std::size_t bins)
{
  std::vector<double> a;
  for (const auto& row : t.rows)
    if (std::isfinite(row[0]))
      a.push_back(row[0]);
  if (a.empty())
    throw Error(ErrorCode::MalformedInput, "no finite values to bin");
  bins = std::max<std::size_t>(bins, 1);
  const auto [mn, mx] = std::minmax_element(a.begin(), a.end());
  double lo = std::min(*mn, -4.0);
  double hi = std::max(*mx, 4.0);
  const double w = (hi - lo) / static_cast<double>(bins);
  std::vector<double> density(bins, 0.0);
  for (double v : a) {
    auto b = static_cast<std::size_t>((v - lo) / w);
    density[std::min(b, bins - 1)] += 1.0;
  }
  for (auto& d : density)
    d /= static_cast<double>(a.size()) * w;
  double top = normal_pdf(0.0);
  for (double d : density)
    top = std::max(top, d);
  Canvas canvas(lo, hi, 0.0, top);
  canvas.title("standardized statistic vs N(0,1)");
  for (std::size_t b = 0; b < bins; ++b)
    canvas.bar(lo + w * static_cast<double>(b),
               lo + w * static_cast<double>(b + 1), density[b]);
  std::vector<std::pair<double, double>> pdf;
  for (int k = 0; k <= 200; ++k) {
    const double x = lo + (hi - lo) * k / 200.0;
    pdf.emplace_back(x, normal_pdf(x));
  }
  canvas.polyline(pdf, "#d62728", "normal");
  return canvas.finish();
}

std::string
render_step(const Table& t)
{
  std::vector<std::pair<double, double>> pts;
  std::vector<std::pair<double, double>> finite;
  for (const auto& row : t.rows)
    if (std::isfinite(row[0]))
      finite.emplace_back(row[0], row[1]);
  if (finite.empty())
    throw Error(ErrorCode::MalformedInput, "step curve has no finite jumps");
  const double span = std::max(finite.back().first - finite.front().first, 1.0);
  const double x_lo = finite.front().first - 0.05 * span;
  const double x_hi = finite.back().first + 0.05 * span;
  double level = t.rows.front()[1];
  pts.emplace_back(x_lo, level);
  for (const auto& [x, v] : finite) {
    pts.emplace_back(x, level);
    pts.emplace_back(x, v);
    level = v;
  }
  pts.emplace_back(x_hi, level);
  Canvas canvas(x_lo, x_hi, 0.0, 1.0);
  canvas.title("Kaplan-Meier censoring survival");
  canvas.polyline(pts, "#1f77b4", "survival");
  return canvas.finish();
}

} // namespace

std::string
render_svg(const std::string& csv_text,
           const std::optional<TrueCurve>& truth,
           std::size_t bins)
{
  const Table t = parse_table(csv_text);
  if (header_is(t, { "x", "estimate", "lower", "upper", "sigma2", "defined" }))
    return render_curves(t, { 1, 2, 3 }, 5, truth, "estimate with confidence band");
  if (header_is(t, { "x", "estimate", "defined" }))
    return render_curves(t, { 1 }, 2, truth, "regression estimate");
  if (header_is(t, { "a" }))
    return render_histogram(t, bins);
  if (header_is(t, { "t", "gbar" }))
    return render_step(t);
  throw Error(ErrorCode::MalformedInput, "unrecognised CSV header");
}

} // namespace relreg::cli
