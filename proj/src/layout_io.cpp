#include "cellfree/layout_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "cellfree/error.hpp"

namespace cellfree {

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, sep)) out.push_back(field);
  return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::Config, "layout line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
}

}  // namespace

void write_layout_csv(std::ostream& out, const NetworkLayout& layout, const Grouping* grouping) {
  if (grouping && grouping->assignment.size() != layout.antenna_count())
    throw Error(ErrorCode::Dimension, "grouping does not match the layout's antenna count");
  out << "x_km,y_km,antennas";
  if (grouping) out << ",group";
  out << '\n';
  for (std::size_t i = 0; i < layout.ap_count(); ++i) {
    out << format_double(layout.positions[i].x) << ',' << format_double(layout.positions[i].y) << ','
        << layout.antennas_per_ap;
    if (grouping) {
      out << ',';
      for (int j = 0; j < layout.antennas_per_ap; ++j) {
        if (j) out << ';';
        out << grouping->assignment[i * static_cast<std::size_t>(layout.antennas_per_ap) + static_cast<std::size_t>(j)];
      }
    }
    out << '\n';
  }
}

NetworkLayout read_layout_csv(std::istream& in, std::optional<Region> region) {
  NetworkLayout layout;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  int antennas = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      const auto cols = split(line, ',');
      if (cols.size() < 3 || cols[0] != "x_km" || cols[1] != "y_km" || cols[2] != "antennas")
        throw Error(ErrorCode::Config, "layout header must start with x_km,y_km,antennas");
      continue;
    }
    const auto cols = split(line, ',');
    if (cols.size() < 3) throw Error(ErrorCode::Config, "layout line " + std::to_string(line_no) + ": too few columns");
    const double x = parse_double(cols[0], line_no);
    const double y = parse_double(cols[1], line_no);
    const double m = parse_double(cols[2], line_no);
    if (m < 1.0 || m != std::floor(m))
      throw Error(ErrorCode::Config, "layout line " + std::to_string(line_no) + ": antennas must be a positive integer");
    if (antennas >= 0 && static_cast<int>(m) != antennas)
      throw Error(ErrorCode::Config, "all APs must have the same antenna count");
    antennas = static_cast<int>(m);
    layout.positions.push_back({x, y});
  }
  if (!header_seen) throw Error(ErrorCode::Config, "layout file is empty");
  layout.antennas_per_ap = antennas > 0 ? antennas : 1;
  if (region) {
    layout.region = *region;
  } else {
    double hw = 0.0;
    for (const auto& p : layout.positions) hw = std::max({hw, std::abs(p.x), std::abs(p.y)});
    layout.region = Region{hw > 0.0 ? hw : 1.0};
  }
  for (const auto& p : layout.positions)
    if (!layout.region.contains(p)) throw Error(ErrorCode::Config, "layout AP lies outside the region");
  return layout;
}

NetworkLayout load_layout_csv(const std::string& path, std::optional<Region> region) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open layout file '" + path + "'");
  return read_layout_csv(in, region);
}

}  // namespace cellfree
