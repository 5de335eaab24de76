#include <doctest.h>

#include <filesystem>

#include <nlohmann/json.hpp>

#include "tsw/error.hpp"
#include "tsw/io.hpp"

using namespace tsw;

TEST_CASE("fnv1a64 reference values") {
  CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
  CHECK(hex64(fnv1a64("a")) == "af63dc4c8601ec8c");
  CHECK(hex64(fnv1a64("foobar")) == "85944171f73967e8");
}

TEST_CASE("shortest double formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 12345678.9, 0.0}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("matrix CSV") {
  const LabeledMatrix m{{"a", "b"}, {0, 0.25, 0.25, 0}};
  const std::string csv = matrix_to_csv(m);
  CHECK(csv.rfind("id,a,b\n", 0) == 0);
  const LabeledMatrix back = matrix_from_csv(csv);
  CHECK(back.ids == m.ids);
  CHECK(back.entries == m.entries);
  CHECK_THROWS(matrix_from_csv("id,a,b\na,0,1\n"));
}

TEST_CASE("pair files") {
  const auto p = parse_pairs("# header\n0 1\n\n2 0\n");
  REQUIRE(p.size() == 2);
  CHECK(p[1].first == 2);
  CHECK(p[1].second == 0);
  CHECK(pairs_to_csv(p, {0.5, 1.0}) == "i,j,distance\n0,1,0.5\n2,0,1\n");
  CHECK_THROWS(parse_pairs("0\n"));
}

TEST_CASE("atomic writes and manifests") {
  const auto dir = std::filesystem::temp_directory_path() / "tsw_io_test";
  std::filesystem::create_directories(dir);
  const auto out = dir / "x.csv";
  write_text(out, "hello");
  CHECK(read_text(out) == "hello");
  CHECK_THROWS_AS(read_text(dir / "missing"), IoError);
  CHECK_THROWS_AS(write_text(dir / "no" / "such" / "file", "x"), IoError);

  RunManifest man;
  man.command = "gram";
  man.seed = 7;
  man.config = {{"bandwidth-quantile", "50"}};
  man.add_artifact(out, "hello");
  man.timings = {{"total", 0.5}};
  const auto j = nlohmann::json::parse(man.to_json());
  CHECK(j["command"] == "gram");
  CHECK(j["seed"] == 7);
  CHECK(j["artifacts"][0]["fnv1a64"] == hex64(fnv1a64("hello")));
  CHECK(manifest_path(out).filename() == "x.csv.manifest.json");
  std::filesystem::remove_all(dir);
}
