#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bapc/artifacts.hpp"
#include "bapc/dataset.hpp"
#include "bapc/engine.hpp"
#include "bapc/errors.hpp"
#include "bapc/synthetic.hpp"

using namespace bapc;

namespace {

std::filesystem::path temp_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "bapc_io_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string data_file() { return std::string(BAPC_DATA_DIR) + "/air_passengers.csv"; }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("builtin air-passenger series spans 1949-01 through 1960-12") {
  const TimeSeries series = air_passengers();
  REQUIRE(series.size() == 144);
  CHECK(series.labels().front() == "1949-01");
  CHECK(series.labels().back() == "1960-12");
  CHECK(series.at(1) == 112.0);
  CHECK(series.at(144) == 432.0);
}

TEST_CASE("air-passenger fixture loads and matches the builtin values") {
  const TimeSeries series = load_air_passengers(data_file());
  REQUIRE(series.size() == 144);
  for (int t = 1; t <= 144; ++t) {
    CHECK(series.at(t) == air_passengers().at(t));
    CHECK(series.label_at(t) == air_passengers().label_at(t));
  }
}

TEST_CASE("air-passenger loader rejects short or shuffled files") {
  const auto dir = temp_dir();
  {
    std::string contents = "month,passengers\n";
    for (int i = 1; i <= 143; ++i) {
      contents += air_passengers().label_at(i) + "," + format_double(air_passengers().at(i)) + "\n";
    }
    const auto path = dir / "short.csv";
    write_text_atomic(path, contents);
    CHECK_THROWS_AS(load_air_passengers(path.string()), ConfigError);
  }
  {
    std::string contents = "month,passengers\n1949-01,112\n1949-03,118\n";
    const auto path = dir / "gap.csv";
    write_text_atomic(path, contents);
    CHECK_THROWS_AS(load_air_passengers(path.string()), ConfigError);
  }
  {
    const auto path = dir / "header.csv";
    write_text_atomic(path, "time,count\n1949-01,112\n");
    CHECK_THROWS_AS(load_air_passengers(path.string()), ConfigError);
  }
  CHECK_THROWS_AS(load_air_passengers((dir / "missing.csv").string()), ConfigError);
}

TEST_CASE("doubles are serialized with 17 significant digits") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
  CHECK(format_double(-40.0 / 96.0) == "-0.41666666666666669");
}

TEST_CASE("atomic writes land complete files and rewrites are byte-identical") {
  const auto path = temp_dir() / "series.csv";
  const TimeSeries series = generate(SyntheticSpec::defaults(SyntheticKind::Step));
  const std::string body = series_csv(series);
  write_text_atomic(path, body);
  const std::string first = read_file(path);
  write_text_atomic(path, body);
  CHECK(first == read_file(path));
  CHECK(first == body);
  CHECK(!std::filesystem::exists(path.string() + ".tmp"));
}

TEST_CASE("series csv round-trips through the reader") {
  const TimeSeries series = generate(SyntheticSpec::defaults(SyntheticKind::Ramp));
  std::istringstream in(series_csv(series));
  const TimeSeries parsed = read_series_csv(in);
  REQUIRE(parsed.size() == series.size());
  for (int t = 1; t <= series.last_index(); ++t) {
    CHECK(parsed.at(t) == series.at(t));
  }
}

TEST_CASE("bapc result json carries the parameter blocks") {
  const TimeSeries series = generate(SyntheticSpec::defaults(SyntheticKind::Step));
  BapcConfig config;
  config.base_family = Family::Constant;
  config.correction = CorrectionKind::NearestNeighbor1;
  config.window = WindowConfig{96, 48};
  const BapcResult result = bapc::bapc(series, config);
  const std::string json =
      bapc_result_json(result, 7, config.correction_options, config.correction);
  CHECK(json.find("\"family\": \"constant\"") != std::string::npos);
  CHECK(json.find("\"theta0\"") != std::string::npos);
  CHECK(json.find("\"theta_r\"") != std::string::npos);
  CHECK(json.find("\"delta_theta\"") != std::string::npos);
  CHECK(json.find("\"a\": 0.5") != std::string::npos);
  CHECK(json.find("\"n\": 96") != std::string::npos);
  CHECK(json.find("\"r\": 48") != std::string::npos);
  CHECK(json.find("\"seed\": 7") != std::string::npos);
}

TEST_CASE("surrogate matrix csv is keyed by anchor and time") {
  const TimeSeries series(std::vector<double>(30, 1.0), 1);
  BapcConfig config;
  config.base_family = Family::Constant;
  config.correction = CorrectionKind::NearestNeighbor1;
  config.window = WindowConfig{10, 5};
  const SbapcResult sweep = sbapc(series, config);
  const std::string csv = surrogate_matrix_csv(sweep);
  CHECK(csv.rfind("s,t,delta_f\n", 0) == 0);
  CHECK(csv.find("10,1,0\n") != std::string::npos);
  CHECK(csv.find("30,30,0\n") != std::string::npos);
}

}  // TEST_SUITE
