#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = dynstab::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

}  // namespace

TEST_CASE("degrees reports") {
  auto r = run({"degrees", "--t", "1/3", "--N", "4"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  std::vector<int> degs;
  for (const auto& row : j["rows"]) {
    degs.push_back(row["deg"]);
    CHECK(row["mass_bound"] == "0/1");
  }
  CHECK(degs == std::vector<int>{2, 4, 8, 16});
  CHECK(j["float_check"]["max_rel_error"].get<double>() < 1e-8);

  r = run({"degrees", "--t", "1/2", "--N", "5", "--format", "csv"});
  REQUIRE(r.code == 0);
  const auto rows = lines_of(r.out);
  CHECK(rows[0] == "n,deg,degH,mass_bound,stable");
  CHECK(rows[5] == "5,1,31,31/32,false");

  r = run({"degrees", "--t", "0/1", "--N", "3"});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["first_drop"] == 0);

  r = run({"degrees", "--map", "x*y, x*z, x^2", "--N", "2"});
  CHECK(r.code == 0);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == 1);
  CHECK(run({"bogus"}).code == 1);
  CHECK(run({"degrees", "--t", "0.5"}).code == 1);
  CHECK(run({"degrees", "--t", "1/x"}).code == 1);
  CHECK(run({"degrees", "--t", "1/3", "--N", "7"}).code == 2);
  CHECK(run({"degrees", "--t", "1/3", "--N", "3", "--degree-cap", "4"}).code == 2);
  CHECK(run({"family", "--t", "1/9"}).code == 2);
  CHECK(run({"family", "--t", "1/9", "--conductor-cap", "72"}).code == 0);
  CHECK(run({"green", "--t", "0.3", "--format", "pgm"}).code == 1);
  CHECK(run({"mass", "--t", "1/2", "--resolution", "16", "--n", "0"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("stability and family") {
  auto r = run({"stability", "--t", "1/4", "--N", "4"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["stable"] == false);
  CHECK(j["cross_validation"]["agree"] == true);

  r = run({"family", "--t", "0.3"});
  REQUIRE(r.code == 0);
  j = nlohmann::json::parse(r.out);
  CHECK(j["mode"] == "float");
  CHECK_FALSE(j.contains("verdict"));
  const double arg = std::atan2(j["fixed_point"][2][1].get<double>(), j["fixed_point"][2][0].get<double>());
  CHECK(arg == doctest::Approx(-2 * M_PI * 0.3));

  r = run({"family", "--t", "1/3", "--cross-validate", "3"});
  REQUIRE(r.code == 0);
  j = nlohmann::json::parse(r.out);
  CHECK(j["conductor"] == 24);
  CHECK(j["verdict"]["stable"] == true);
  CHECK(j["indeterminacy"]["forward"].size() == 3);
}

TEST_CASE("green output") {
  auto r = run({"green", "--map", "x^2,y^2,z^2", "--point", "1,0,0", "--n", "2"});
  REQUIRE(r.code == 0);
  const auto rows = lines_of(r.out);
  REQUIRE(rows.size() == 2);
  const double v = std::stod(rows[1].substr(rows[1].rfind(',') + 1));
  CHECK(std::abs(v + 0.5198604) < 1e-6);

  r = run({"green", "--t", "0.3", "--n", "8", "--samples", "1000", "--seed", "7"});
  REQUIRE(r.code == 0);
  const auto sample_rows = lines_of(r.out);
  CHECK(sample_rows.size() == 1001);
  for (std::size_t k = 1; k < sample_rows.size(); ++k)
    CHECK(std::stod(sample_rows[k].substr(sample_rows[k].rfind(',') + 1)) <= 0);
  CHECK(run({"green", "--t", "0.3", "--n", "8", "--samples", "1000", "--seed", "7"}).out == r.out);
  CHECK(run({"green", "--t", "0.3", "--n", "8", "--samples", "1000", "--seed", "8"}).out != r.out);

  r = run({"green", "--t", "1/2", "--heatmap", "--size", "8", "--n", "4"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("P2\n8 8\n255\n", 0) == 0);
  r = run({"green", "--t", "1/2", "--heatmap", "--size", "8", "--n", "4", "--format", "csv"});
  CHECK(r.code == 0);
}

TEST_CASE("mass output") {
  auto r = run({"mass", "--t", "1/2", "--n", "0", "--M", "1", "--lines", "2", "--resolution", "128"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["rows"][0]["mean_total"].get<double>() == doctest::Approx(1).epsilon(0.05));
  CHECK(j["algebraic_bound"] == "0/1");

  r = run({"mass", "--sweep", "0.5", "--offsets", "0.25,0.0625", "--n", "2", "--lines", "1", "--resolution", "64",
           "--format", "csv"});
  REQUIRE(r.code == 0);
  const auto rows = lines_of(r.out);
  CHECK(rows.size() == 3);
  CHECK(rows[0] == "t,offset,n,M,lines,mean_sublevel,mean_total,algebraic_bound");
  CHECK(rows[1].back() == ',');
}

TEST_CASE("out file") {
  const std::string path = "test_cli_out.csv";
  auto r = run({"--out", path, "green", "--map", "x^2,y^2,z^2", "--point", "0,1,1", "--n", "2"});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str().rfind("point_re0", 0) == 0);
  std::remove(path.c_str());
}
