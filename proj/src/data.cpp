#include "relreg/data.hpp"
#include "relreg/error.hpp"
#include "relreg/io.hpp"

#include <cmath>
#include <sstream>
#include <string_view>

namespace relreg {

CensoredDataset::CensoredDataset(std::vector<Observation> observations)
  : observations_(std::move(observations))
{
  if (observations_.empty())
    throw Error(ErrorCode::EmptyDataset, "dataset has no observations");
  for (std::size_t i = 0; i < observations_.size(); ++i) {
    const auto& obs = observations_[i];
    if (obs.delta != 0 && obs.delta != 1)
      throw Error(ErrorCode::InvalidDelta,
                  "observation " + std::to_string(i) + " has delta " +
                    std::to_string(obs.delta));
    if (!std::isfinite(obs.y) || !std::isfinite(obs.x))
      throw Error(ErrorCode::InvalidArgument,
                  "observation " + std::to_string(i) + " is not finite");
  }
}

double
TrueCurve::operator()(double x) const
{
  if (id == "linear") {
    if (params.size() != 2)
      throw Error(ErrorCode::InvalidArgument, "linear curve needs 2 params");
    return params[0] * x + params[1];
  }
  if (id == "parabolic")
    return x * x + 1.0;
  if (id == "sinusoidal") {
    const double s = std::sin(0.5 * x);
    return s * s + 1.0;
  }
  if (id == "exponential")
    return std::exp(0.5 * x);
  throw Error(ErrorCode::InvalidArgument, "unknown curve '" + id + "'");
}

namespace {

std::vector<std::string_view>
split_fields(std::string_view line)
{
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

std::string_view
trim(std::string_view s)
{
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

} // namespace

CensoredDataset
parse_csv(const std::string& text, const std::string& source)
{
  std::vector<Observation> rows;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (!header_seen) {
      auto fields = split_fields(line);
      if (fields.size() != 3 || trim(fields[0]) != "x" ||
          trim(fields[1]) != "y" || trim(fields[2]) != "delta")
        throw Error(ErrorCode::ParseError,
                    source + ": expected header 'x,y,delta'");
      header_seen = true;
      continue;
    }
    if (line.empty())
      continue;
    const auto fields = split_fields(line);
    if (fields.size() != 3)
      throw ParseError(line_no,
                       fields.size() < 3 ? fields.size() + 1 : 4,
                       std::string(line));
    double x = 0.0;
    double y = 0.0;
    double d = 0.0;
    if (!io::parse_double(fields[0], x))
      throw ParseError(line_no, 1, std::string(fields[0]));
    if (!io::parse_double(fields[1], y))
      throw ParseError(line_no, 2, std::string(fields[1]));
    if (!io::parse_double(fields[2], d))
      throw ParseError(line_no, 3, std::string(fields[2]));
    if (d != 0.0 && d != 1.0)
      throw Error(ErrorCode::InvalidDelta,
                  source + ": line " + std::to_string(line_no) +
                    " has delta '" + std::string(trim(fields[2])) + "'");
    if (!std::isfinite(x))
      throw ParseError(line_no, 1, std::string(fields[0]));
    if (!std::isfinite(y))
      throw ParseError(line_no, 2, std::string(fields[1]));
    rows.push_back({ x, y, static_cast<int>(d) });
  }
  if (!header_seen)
    throw Error(ErrorCode::ParseError, source + ": missing header");
  if (rows.empty())
    throw Error(ErrorCode::EmptyDataset, source + ": no data rows");
  return CensoredDataset(std::move(rows));
}

CensoredDataset
load_csv(const std::string& path)
{
  return parse_csv(io::read_file(path), path);
}

std::string
to_csv(const CensoredDataset& dataset)
{
  std::string out = "x,y,delta\n";
  for (const auto& obs : dataset) {
    out += io::format_double(obs.x);
    out += ',';
    out += io::format_double(obs.y);
    out += ',';
    out += obs.delta == 1 ? '1' : '0';
    out += '\n';
  }
  return out;
}

void
save_csv(const CensoredDataset& dataset, const std::string& path)
{
  io::write_atomic(path, to_csv(dataset));
}

double
censoring_rate(const CensoredDataset& dataset)
{
  std::size_t censored = 0;
  for (const auto& obs : dataset)
    censored += obs.delta == 0 ? 1 : 0;
  return static_cast<double>(censored) / static_cast<double>(dataset.size());
}

} // namespace relreg
