#include <doctest.h>

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include "nlds/config.hpp"
#include "nlds/error.hpp"
#include "nlds/io.hpp"

using namespace nlds;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "nlds_unit";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("config JSON round-trip") {
  RunConfig c;
  c.spec.f = Reaction::polynomial({0.0, 1.0, 0.0, -2.0});
  c.spec.h = Forcing::separable(0.3, 2.0);
  c.spec.l = Functional::h10_norm;
  c.spec.phi = InitialProfile::random(5, 1.25);
  c.spec.disc.n_interior = 127;
  c.params.K = 1.5;
  c.params.member_seeds = {4, 5};
  c.seed = 77;
  const auto j = config_to_json(c);
  CHECK(j.at("schema_version") == 1);
  const RunConfig back = config_from_json(j);
  CHECK(config_to_json(back) == j);
  CHECK(back.spec.disc.n_interior == 127);
  CHECK(spec_hash(back.spec) == spec_hash(c.spec));
  c.spec.gamma = 0.5;
  CHECK(spec_hash(back.spec) != spec_hash(c.spec));
}

TEST_CASE("partial configs fall back to canonical values; bad ones are rejected") {
  const RunConfig c = config_from_json(nlohmann::json::parse(R"({"spec": {"gamma": 0.25}})"));
  CHECK(c.spec.gamma == 0.25);
  CHECK(c.spec.lambda == 1.0);
  CHECK(c.spec.phi.modes.size() == 2);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"spec": {"gama": 1}})")), ValidationError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"spec": {"m": "one"}})")), ValidationError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"schema_version": 2})")), ValidationError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"discretization": {"dx": 0.3}})")), ValidationError);
  const RunConfig bad = config_from_json(nlohmann::json::parse(R"({"spec": {"m": 0}})"));
  const auto diag = validate_config(bad);
  REQUIRE_FALSE(diag.empty());
  CHECK(diag.front() == "m must be positive");
  CHECK_THROWS_AS(load_config(scratch("missing.json")), IoError);
}

TEST_CASE("flag overrides win over the file") {
  RunConfig c;
  apply_overrides(c, {1.0 / 64, 5e-4, 9, "elsewhere"});
  CHECK(c.spec.disc.n_interior == 63);
  CHECK(c.spec.disc.dtau == 5e-4);
  CHECK(c.spec.disc.dt == 5e-4);
  CHECK(c.seed == 9);
  CHECK(c.out_dir == "elsewhere");
}

TEST_CASE("numbers round-trip bit-exactly through text") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::uint64_t> bits;
  for (int k = 0; k < 10000; ++k) {
    const std::uint64_t b = bits(rng);
    double v;
    std::memcpy(&v, &b, sizeof v);
    if (!std::isfinite(v)) continue;
    const std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("CSV schemas") {
  SUBCASE("empty trajectory is header only") {
    const auto p = scratch("empty.csv");
    write_trajectory_csv(Trajectory{}, p);
    CHECK(slurp(p) == "stamp,x,value\n");
    CHECK(read_csv(p).rows.empty());
  }
  SUBCASE("two-node grid with one stamp has two rows") {
    Trajectory t;
    t.push(0.5, GridFunction(Grid(2), {0.1, -1.0 / 3.0}), 1.0);
    const auto p = scratch("two.csv");
    write_trajectory_csv(t, p);
    const auto table = read_csv(p);
    CHECK(table.header == std::vector<std::string>{"stamp", "x", "value"});
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[1][2] == -1.0 / 3.0);
    CHECK(table.rows[0][1] == 1.0 / 3.0);
  }
  SUBCASE("theta and time change headers") {
    const auto p = scratch("theta.csv");
    write_theta_csv(GridFunction(Grid(3), {1, 2, 3}), p);
    CHECK(slurp(p).rfind("x,theta\n", 0) == 0);
    TimeChange tc(Knot{0.0, 0.0}, 0.5, 1.0);
    tc.append(0.1, 0.7);
    const auto q = scratch("tc.csv");
    write_timechange_csv(tc, q);
    const auto table = read_csv(q);
    CHECK(table.header == std::vector<std::string>{"t", "alpha"});
    CHECK(table.rows.back()[1] == tc.back().alpha);
  }
  SUBCASE("unwritable path reports the path") {
    CHECK_THROWS_WITH_AS(write_theta_csv(GridFunction(Grid(3)), "/nonexistent/dir/x.csv"),
                         doctest::Contains("/nonexistent/dir/x.csv"), IoError);
  }
}
