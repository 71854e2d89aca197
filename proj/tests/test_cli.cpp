#include "barron/cli.hpp"
#include "barron/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace barron;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "barron_gauge");
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("barron_gauge_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

void put(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

const char* kTriangle = R"({"schema_version": 1, "s": 1,
  "domain": {"type": "box", "halfwidths": [1]},
  "atoms": [[3, [0], 1], [-3, [1], 0], [-3, [-1], 0]]})";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("network json round trip") {
  const auto f = network_from_json(nlohmann::json::parse(kTriangle));
  CHECK(f.net.width() == 3);
  CHECK(barron_cost_upper(f.net, f.domain) == 3.0);
  const auto g = network_from_json(network_to_json(f.net, f.domain));
  CHECK(g.net.inner() == f.net.inner());
  CHECK(g.net.outer() == f.net.outer());
  CHECK_THROWS_AS(network_from_json(nlohmann::json::parse(R"({"s": 1, "atoms": []})")), std::invalid_argument);
  const auto ball = network_from_json(nlohmann::json::parse(
      R"({"s": 2, "domain": {"type": "ball", "radius": 2, "dim": 2}, "atoms": [[1, [3, 4], 0]]})"));
  CHECK(barron_cost_upper(ball.net, ball.domain) == doctest::Approx(100.0));
}

TEST_CASE("config overrides") {
  ExperimentConfig c = default_config("moment");
  apply_override(c, "delta=0.3,0.1");
  CHECK(c.delta_grid == std::vector<double>{0.3, 0.1});
  apply_override(c, "seed=12");
  CHECK(c.seed == 12);
  CHECK_THROWS_AS(apply_override(c, "nope=1"), std::invalid_argument);
  CHECK_THROWS_AS(apply_override(c, "seed"), std::invalid_argument);
  CHECK_THROWS_AS(apply_override(c, "moment_tol=x"), std::invalid_argument);
  ExperimentConfig t = default_config("tight");
  apply_override(t, "Rmax=1e4");
  CHECK(t.R_list == std::vector<double>{1e2, 1e3, 1e4});
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"schema_version": 2})"), "tight"),
                  std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"bogus": 1})"), "tight"), std::invalid_argument);
  const auto back = config_from_json(config_to_json(c), "moment");
  CHECK(back.delta_grid == c.delta_grid);
}

TEST_CASE("csv formatting") {
  Table t{{"x", "y"}, {{0.1, 1.0}, {1e-300, -2.5}}};
  CHECK(to_csv(t) == "x,y\n0.10000000000000001,1\n1e-300,-2.5\n");
}

TEST_CASE("help lists subcommands with the schema version") {
  const Run r = run({"--help"});
  CHECK(r.code == 0);
  for (const char* s : {"decay", "moment", "spectral", "barron", "embed", "tight", "mc-rate", "remark2", "fit"})
    CHECK(r.out.find(s) != std::string::npos);
  CHECK(r.out.find("schema v1") != std::string::npos);
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("codes");
  CHECK(run({"frobnicate"}).code == kExitInvalid);
  CHECK(run({}).code == kExitInvalid);
  const Run e = run({"embed", "--set", "delta=1.5", "--out", dir.string()});
  CHECK(e.code == kExitInvalid);
  CHECK(e.err.find("delta") != std::string::npos);
  CHECK(std::count(e.err.begin(), e.err.end(), '\n') == 1);
  CHECK_FALSE(fs::exists(dir / "embed.json"));
  put(dir / "bad.json", "{oops");
  CHECK(run({"decay", "--config", (dir / "bad.json").string()}).code == kExitInvalid);
  CHECK(run({"decay", "--config", (dir / "missing.json").string()}).code == kExitInvalid);
  CHECK(run({"spectral", "--config", (dir / "bad.json").string()}).code == kExitInvalid);
}

TEST_CASE("barron prints the triangular cost") {
  const fs::path dir = scratch("barron");
  put(dir / "triangular.json", kTriangle);
  const Run r = run({"barron", "--config", (dir / "triangular.json").string(), "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("3.0\n", 0) == 0);
  CHECK(r.out.find((dir / "barron.json").string()) != std::string::npos);
  CHECK(fs::exists(dir / "barron.csv"));
}

TEST_CASE("spectral subcommand with a network file reference") {
  const fs::path dir = scratch("spectral");
  const fs::path out = dir / "out";
  put(dir / "triangular.json", kTriangle);
  put(dir / "job.json", R"({"schema_version": 1, "network_file": "triangular.json", "delta": 0.5})");
  const Run r = run({"spectral", "--config", (dir / "job.json").string(), "--out", out.string()});
  CHECK(r.code == 0);
  const auto j = read_json(out / "spectral.json");
  const double v = j["constants"]["spectral_upper"].get<double>();
  CHECK(v > 0.0);
  CHECK(j["config"]["delta"] == 0.5);
  CHECK(std::stod(r.out) == doctest::Approx(v).epsilon(1e-15));
  CHECK(run({"spectral", "--config", (dir / "job.json").string(), "--set", "delta=0", "--out", out.string()}).code ==
        kExitInvalid);
  CHECK(run({"spectral", "--config", (dir / "job.json").string(), "--set", "eps=1", "--out", out.string()}).code ==
        kExitInvalid);
}

TEST_CASE("tight writes a reproducible summary") {
  const fs::path dir = scratch("tight");
  const Run r = run({"tight", "--set", "Rmax=1e6", "--out", dir.string()});
  CHECK(r.code == 0);
  const auto j = read_json(dir / "tight.json");
  CHECK(j["suite"] == "tight");
  CHECK(j["constants"]["slope"].get<double>() == doctest::Approx(0.6366).epsilon(0.05));
  CHECK(j["checks"]["slope_within_5pct"] == true);
  const std::string first = slurp(dir / "tight.csv");
  CHECK(run({"tight", "--set", "Rmax=1e6", "--out", dir.string()}).code == 0);
  CHECK(slurp(dir / "tight.csv") == first);
  for (const auto& e : fs::directory_iterator(dir)) CHECK(e.path().string().find(".tmp") == std::string::npos);
}

}
