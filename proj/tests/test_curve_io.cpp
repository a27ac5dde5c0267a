#include "tclab/curve_io.hpp"
#include "tclab/errors.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>

using namespace tclab;
using nlohmann::json;

namespace {

json load(const std::string& name) {
  std::ifstream in(std::string(TCLAB_TEST_DATA) + "/" + name);
  return json::parse(in);
}

// Structural equality with doubles compared by bit pattern.
void expect_bit_equal(const json& a, const json& b, const std::string& path = "$") {
  if (a.is_number_integer() && b.is_number_integer()) {
    EXPECT_EQ(a.get<long long>(), b.get<long long>()) << path;
    return;
  }
  ASSERT_EQ(a.type(), b.type()) << path;
  if (a.is_object()) {
    ASSERT_EQ(a.size(), b.size()) << path;
    for (const auto& [k, v] : a.items()) {
      ASSERT_TRUE(b.contains(k)) << path << "." << k;
      expect_bit_equal(v, b[k], path + "." + k);
    }
  } else if (a.is_array()) {
    ASSERT_EQ(a.size(), b.size()) << path;
    for (std::size_t i = 0; i < a.size(); ++i) expect_bit_equal(a[i], b[i], path + "[" + std::to_string(i) + "]");
  } else if (a.is_number_float()) {
    EXPECT_EQ(std::bit_cast<std::uint64_t>(a.get<double>()), std::bit_cast<std::uint64_t>(b.get<double>())) << path;
  } else {
    EXPECT_EQ(a, b) << path;
  }
}

void expect_error(const json& j, ErrorCode code) {
  try {
    curve_from_json(j);
    FAIL() << "expected an error for " << j.dump();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(CurveIo, FourierSpecRoundTripsBitForBit) {
  const json spec = load("curve_fourier.json");
  const WindingCurve z = curve_from_json(spec);
  EXPECT_EQ(z.Q(), 2);
  EXPECT_EQ(z.orientation(), -1);
  expect_bit_equal(curve_to_json(z), spec);
}

TEST(CurveIo, SampleSpecRoundTripsBitForBit) {
  const json spec = load("curve_samples.json");
  const WindingCurve z = curve_from_json(spec);
  EXPECT_TRUE(z.sample_source());
  EXPECT_EQ(z.max_active(), 3);
  expect_bit_equal(curve_to_json(z), spec);
}

TEST(CurveIo, FileRoundTripIsStable) {
  const auto path = std::filesystem::temp_directory_path() / "tclab_curve_io_test.json";
  const WindingCurve z = read_curve_file(std::string(TCLAB_TEST_DATA) + "/curve_fourier.json");
  write_curve_file(path.string(), z);
  const WindingCurve w = read_curve_file(path.string());
  EXPECT_EQ(curve_to_json(w).dump(), curve_to_json(z).dump());
  EXPECT_EQ(w.series().alpha(), z.series().alpha());
  std::filesystem::remove(path);
}

TEST(CurveIo, MalformedSpecsRaiseParseError) {
  json base = load("curve_fourier.json");
  json j = base;
  j.erase("Q");
  expect_error(j, ErrorCode::ParseError);
  j = base;
  j["orientation"] = 0;
  expect_error(j, ErrorCode::ParseError);
  j = base;
  j["samples"] = json::array({json::array({0.0, 0.0})});
  expect_error(j, ErrorCode::ParseError);
  j = base;
  j["fourier"]["beta"].push_back(json::array({0.0, 0.0}));
  expect_error(j, ErrorCode::ParseError);
  j = base;
  j["fourier"]["alpha"][1] = json::array({0.0});
  expect_error(j, ErrorCode::ParseError);
  j = base;
  j["rho"] = "one";
  expect_error(j, ErrorCode::ParseError);
  EXPECT_THROW(read_curve_file("/nonexistent/curve.json"), Error);
}
