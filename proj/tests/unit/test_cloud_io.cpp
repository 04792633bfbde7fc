#include "lk/cloud_io.hpp"
#include "lk/errors.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace lk;
using namespace lk::geometry;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("lk_cloud_io_" + name);
  std::ofstream(path) << content;
  return path;
}

std::size_t parse_error_line(const std::string& text) {
  std::istringstream in(text);
  try {
    parse_cloud(in);
  } catch (const ParseError& e) {
    return e.line();
  }
  return static_cast<std::size_t>(-1);
}

}  // namespace

TEST(LoadCloud, ThreeUnitVectors) {
  std::istringstream in("1 0 0\n0 1 0\n0 0 1\n");
  const auto cloud = parse_cloud(in);
  EXPECT_EQ(cloud.size(), 3);
  EXPECT_EQ(cloud.ambient_dim(), 3);
  EXPECT_EQ(cloud.ambient(1, 1), 1.0);
  EXPECT_FALSE(cloud.intrinsic.has_value());
  EXPECT_EQ(cloud.sampling, SamplingMode::iid_density);
}

TEST(LoadCloud, EmptyFileIsAnError) {
  std::istringstream in("");
  EXPECT_THROW(parse_cloud(in), ParseError);
}

TEST(LoadCloud, SinglePointIsAnError) {
  std::istringstream in("1 2 3\n");
  EXPECT_THROW(parse_cloud(in), ParseError);
}

TEST(LoadCloud, RaggedRowReportsLine) { EXPECT_EQ(parse_error_line("1 2 3\n4 5 6\n\n7 8\n"), 4u); }

TEST(LoadCloud, NonNumericTokenReportsLine) { EXPECT_EQ(parse_error_line("1 2\n3 x\n"), 2u); }

TEST(LoadCloud, SkipsBlankLinesAndAcceptsSigns) {
  std::istringstream in("\n+1.5 -2e-3\n\n  3   4\n");
  const auto cloud = parse_cloud(in);
  EXPECT_EQ(cloud.size(), 2);
  EXPECT_EQ(cloud.ambient(0, 0), 1.5);
  EXPECT_EQ(cloud.ambient(0, 1), -2e-3);
}

TEST(LoadCloud, MissingFile) { EXPECT_THROW(load_cloud("/nonexistent/cloud.txt"), Error); }

TEST(LoadCloud, SphereSampleRoundTrip) {
  const auto sphere = sample_sphere(3000, 123);
  const auto path = std::filesystem::temp_directory_path() / "lk_cloud_io_sphere.xyz";
  write_cloud(path, sphere);
  const auto back = load_cloud(path);
  EXPECT_EQ(back.size(), 3000);
  EXPECT_EQ(back.ambient_dim(), 3);
  EXPECT_EQ(back.ambient, sphere.ambient);  // 17 significant digits round-trip exactly
  std::filesystem::remove(path);
}

TEST(LoadCloud, ErrorNamesFileAndLine) {
  const auto path = temp_file("bad.xyz", "1 2\n3 4\n5\n");
  try {
    load_cloud(path);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find(path.string()), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  std::filesystem::remove(path);
}

TEST(LoadCoefficients, UpperTriangleAndHeader) {
  const auto path = temp_file("coeffs.csv",
                              "index,B1,B2,C11,C12,C22\n"
                              "1,0.5,0,2,0.25,3\n"
                              "0,1,2,1,0,1\n");
  const auto field = load_coefficients(path, 2, 2);
  EXPECT_EQ(field.drift(0, 1), 2.0);
  EXPECT_EQ(field.drift(1, 0), 0.5);
  EXPECT_EQ(field.diffusion_inverse[1](0, 1), 0.25);
  EXPECT_EQ(field.diffusion_inverse[1](1, 0), 0.25);
  EXPECT_EQ(field.diffusion_inverse[1](1, 1), 3.0);
  std::filesystem::remove(path);
}

TEST(LoadCoefficients, MissingAndDuplicateIndices) {
  const auto missing = temp_file("missing.csv", "0,1,1\n");
  EXPECT_THROW(load_coefficients(missing, 2, 1), ParseError);
  const auto dup = temp_file("dup.csv", "0,1,1\n0,1,1\n");
  EXPECT_THROW(load_coefficients(dup, 2, 1), ParseError);
  const auto wrong = temp_file("wrong.csv", "0,1\n1,1\n");
  EXPECT_THROW(load_coefficients(wrong, 2, 1), ParseError);
  std::filesystem::remove(missing);
  std::filesystem::remove(dup);
  std::filesystem::remove(wrong);
}

TEST(LoadValues, OnePerLine) {
  const auto path = temp_file("values.txt", "1\n-2.5\n\n3e2\n");
  const Vector v = load_values(path);
  ASSERT_EQ(v.size(), 3);
  EXPECT_EQ(v[2], 300.0);
  std::filesystem::remove(path);
  const auto bad = temp_file("values_bad.txt", "1 2\n");
  EXPECT_THROW(load_values(bad), ParseError);
  std::filesystem::remove(bad);
}
