#include "pcr99/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>

#include "pcr99/errors.hpp"

namespace pcr99 {

namespace {

bool is_separator(char c) { return c == ',' || c == ' ' || c == '\t' || c == '\r'; }

// Splits a line into doubles; returns false on any malformed token.
bool parse_doubles(const std::string& line, std::vector<double>& out) {
  out.clear();
  std::size_t pos = 0;
  while (pos < line.size()) {
    if (is_separator(line[pos])) {
      ++pos;
      continue;
    }
    std::size_t end = pos;
    while (end < line.size() && !is_separator(line[end])) ++end;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + end, value);
    if (ec != std::errc() || ptr != line.data() + end) return false;
    out.push_back(value);
    pos = end;
  }
  return true;
}

bool is_comment_or_blank(const std::string& line) {
  for (char c : line) {
    if (c == ' ' || c == '\t' || c == '\r') continue;
    return c == '#';
  }
  return true;
}

template <typename PerRow>
void for_each_data_line(const std::string& path, PerRow&& per_row) {
  std::ifstream file(path);
  if (!file) throw IoError("cannot open " + path);
  std::string line;
  int line_number = 0;
  while (std::getline(file, line)) {
    ++line_number;
    if (is_comment_or_blank(line)) continue;
    per_row(line, line_number);
  }
}

}  // namespace

CorrespondenceSet load_correspondences(const std::string& path) {
  std::vector<Point3> source, target;
  std::vector<double> fields;
  for_each_data_line(path, [&](const std::string& line, int line_number) {
    if (!parse_doubles(line, fields) || fields.size() != 6)
      throw ParseError(path, line_number, "expected 6 numbers: ax,ay,az,bx,by,bz");
    source.emplace_back(fields[0], fields[1], fields[2]);
    target.emplace_back(fields[3], fields[4], fields[5]);
  });
  if (source.size() < 3)
    throw ParseError(path, 0,
                     "needs at least 3 correspondences, found " + std::to_string(source.size()));
  return CorrespondenceSet(std::move(source), std::move(target));
}

void save_correspondences(const CorrespondenceSet& corr, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open " + path + " for writing");
  file << "# ax,ay,az,bx,by,bz\n";
  char buf[256];
  for (int i = 0; i < corr.size(); ++i) {
    const Point3& a = corr.source[i];
    const Point3& b = corr.target[i];
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", a.x(), a.y(), a.z(),
                  b.x(), b.y(), b.z());
    file << buf;
  }
  if (!file) throw IoError("failed writing " + path);
}

std::vector<Point3> load_point_cloud(const std::string& path) {
  std::vector<Point3> points;
  std::vector<double> fields;
  for_each_data_line(path, [&](const std::string& line, int line_number) {
    if (!parse_doubles(line, fields) || fields.size() != 3)
      throw ParseError(path, line_number, "expected 3 numbers: x y z");
    points.emplace_back(fields[0], fields[1], fields[2]);
  });
  return points;
}

std::vector<Point3> fit_to_unit_cube(std::vector<Point3> points) {
  if (points.empty()) return points;
  Point3 lo = points.front(), hi = points.front();
  for (const Point3& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double extent = (hi - lo).maxCoeff();
  const double scale = extent > 0.0 ? 1.0 / extent : 1.0;
  for (Point3& p : points) p = (p - lo) * scale;
  return points;
}

}  // namespace pcr99
