#include "lk/cloud_io.hpp"

#include "lk/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace lk::geometry {
namespace {

bool parse_real(std::string_view token, double& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::vector<std::string_view> split(std::string_view line, std::string_view separators) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const std::size_t start = line.find_first_not_of(separators, pos);
    if (start == std::string_view::npos) break;
    const std::size_t end = line.find_first_of(separators, start);
    tokens.push_back(line.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    pos = end == std::string_view::npos ? line.size() : end;
  }
  return tokens;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    auto field = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) field.remove_suffix(1);
    fields.push_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

PointCloud parse_cloud(std::istream& in) {
  std::vector<double> values;
  Index dim = 0;
  Index rows = 0;
  std::string line;
  Index line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split(line, " \t\r,");
    if (tokens.empty()) continue;
    if (dim == 0) {
      dim = static_cast<Index>(tokens.size());
    } else if (static_cast<Index>(tokens.size()) != dim) {
      throw ParseError("expected " + std::to_string(dim) + " coordinates, found " + std::to_string(tokens.size()),
                       line_no);
    }
    for (auto token : tokens) {
      double v = 0.0;
      if (!parse_real(token, v)) throw ParseError("not a number: '" + std::string(token) + "'", line_no);
      if (!std::isfinite(v)) throw ParseError("non-finite coordinate", line_no);
      values.push_back(v);
    }
    ++rows;
  }
  if (rows < 2) throw ParseError("point cloud needs at least 2 points, found " + std::to_string(rows), line_no);
  PointCloud cloud;
  cloud.ambient = Eigen::Map<PointMatrix>(values.data(), rows, dim);
  cloud.sampling = SamplingMode::iid_density;
  return cloud;
}

PointCloud load_cloud(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return parse_cloud(in);
  } catch (const ParseError& e) {
    throw e.in_file(path.string());
  }
}

void write_cloud(const std::filesystem::path& path, const PointCloud& cloud) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << std::setprecision(17);
  for (Index i = 0; i < cloud.size(); ++i) {
    for (Index a = 0; a < cloud.ambient_dim(); ++a) {
      if (a) out << ' ';
      out << cloud.ambient(i, a);
    }
    out << '\n';
  }
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

CoefficientField load_coefficients(const std::filesystem::path& path, Index n_points, Index ambient_dim) {
  auto in = open_input(path);
  const Index n = ambient_dim;
  const Index expected = 1 + n + n * (n + 1) / 2;
  CoefficientField field;
  field.drift = PointMatrix::Zero(n_points, n);
  field.diffusion_inverse.assign(static_cast<std::size_t>(n_points), Matrix::Zero(n, n));
  std::vector<bool> seen(static_cast<std::size_t>(n_points), false);
  std::string line;
  Index line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_csv(line);
    double probe = 0.0;
    if (first_content && !fields.empty() && !parse_real(fields[0], probe)) {
      first_content = false;
      continue;  // header row
    }
    first_content = false;
    if (static_cast<Index>(fields.size()) != expected) {
      throw ParseError(path.string() + ": expected " + std::to_string(expected) + " fields, found " +
                           std::to_string(fields.size()),
                       line_no);
    }
    std::vector<double> v(fields.size());
    for (std::size_t t = 0; t < fields.size(); ++t) {
      if (!parse_real(fields[t], v[t]) || !std::isfinite(v[t])) {
        throw ParseError(path.string() + ": bad number '" + std::string(fields[t]) + "'", line_no);
      }
    }
    const double raw_index = v[0];
    const auto idx = static_cast<Index>(raw_index);
    if (static_cast<double>(idx) != raw_index || idx < 0 || idx >= n_points) {
      throw ParseError(path.string() + ": point index out of range", line_no);
    }
    if (seen[static_cast<std::size_t>(idx)]) throw ParseError(path.string() + ": duplicate point index", line_no);
    seen[static_cast<std::size_t>(idx)] = true;
    for (Index a = 0; a < n; ++a) field.drift(idx, a) = v[static_cast<std::size_t>(1 + a)];
    auto& c = field.diffusion_inverse[static_cast<std::size_t>(idx)];
    std::size_t t = static_cast<std::size_t>(1 + n);
    for (Index r = 0; r < n; ++r) {
      for (Index s = r; s < n; ++s) {
        c(r, s) = v[t];
        c(s, r) = v[t];
        ++t;
      }
    }
  }
  for (Index i = 0; i < n_points; ++i) {
    if (!seen[static_cast<std::size_t>(i)]) {
      throw ParseError(path.string() + ": no coefficients for point " + std::to_string(i), line_no);
    }
  }
  return field;
}

Vector load_values(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<double> values;
  std::string line;
  Index line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split(line, " \t\r,");
    if (tokens.empty()) continue;
    if (tokens.size() != 1) throw ParseError(path.string() + ": expected one value per line", line_no);
    double v = 0.0;
    if (!parse_real(tokens[0], v) || !std::isfinite(v)) {
      throw ParseError(path.string() + ": not a number: '" + std::string(tokens[0]) + "'", line_no);
    }
    values.push_back(v);
  }
  return Eigen::Map<Vector>(values.data(), static_cast<Index>(values.size()));
}

}  // namespace lk::geometry
