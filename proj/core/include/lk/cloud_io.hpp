#pragma once

#include "lk/geometry.hpp"

#include <filesystem>
#include <iosfwd>

namespace lk::geometry {

/// Plain text, one point per line, whitespace-separated reals. Blank lines
/// are skipped. Throws ParseError naming the line.
PointCloud load_cloud(const std::filesystem::path& path);
PointCloud parse_cloud(std::istream& in);

void write_cloud(const std::filesystem::path& path, const PointCloud& cloud);

/// Per-point coefficients as CSV rows: point index, B (n values), upper
/// triangle of C^-1 row by row (n(n+1)/2 values). An optional header row is
/// skipped. Every point index must appear exactly once.
CoefficientField load_coefficients(const std::filesystem::path& path, Index n_points,
                                   Index ambient_dim);

/// One real per line (right-hand sides, reference solutions).
Vector load_values(const std::filesystem::path& path);

}  // namespace lk::geometry
