#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(CONDINT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("condint-cli-" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

const char* kConfig = "model = ar1\nT = 300\ngamma = 0.1\nseed = 42\nreps = 200\n";

}  // namespace

TEST_CASE("coverage run writes reports and a manifest") {
  TempDir tmp;
  write(tmp.path / "c.cfg", kConfig);
  const auto out = tmp.path / "results";
  CHECK(run("coverage --config " + (tmp.path / "c.cfg").string() + " --out " + out.string()) == 0);
  CHECK(fs::exists(out / "manifest.json"));
  CHECK(fs::exists(out / "coverage.json"));
  CHECK(fs::exists(out / "coverage.csv"));
  const auto json = slurp(out / "coverage.json");
  CHECK(json.find("\"hit_count\"") != std::string::npos);
  CHECK(json.find("\"binomial_se\"") != std::string::npos);
  CHECK(slurp(out / "manifest.json").find("\"status\": \"ok\"") != std::string::npos);
}

TEST_CASE("identical config and seed give byte-identical reports") {
  TempDir tmp;
  write(tmp.path / "c.cfg", kConfig);
  const auto cfg = (tmp.path / "c.cfg").string();
  REQUIRE(run("merging --config " + cfg + " --out " + (tmp.path / "a").string()) == 2);
  write(tmp.path / "m.cfg", "model = ar1\nT = 300, 600, 1200\ngamma = 0.1\nseed = 42\nreps = 100\n");
  const auto m = (tmp.path / "m.cfg").string();
  REQUIRE(run("merging --config " + m + " --out " + (tmp.path / "a").string()) == 0);
  REQUIRE(std::system(("CONDINT_THREADS=3 " + std::string(CONDINT_CLI_PATH) + " merging --config " + m + " --out " +
                       (tmp.path / "b").string() + " >/dev/null 2>&1")
                          .c_str()) == 0);
  CHECK(slurp(tmp.path / "a" / "merging.json") == slurp(tmp.path / "b" / "merging.json"));
  CHECK(slurp(tmp.path / "a" / "merging.csv") == slurp(tmp.path / "b" / "merging.csv"));
  REQUIRE(run("merging --config " + m + " --seed 7 --out " + (tmp.path / "c").string()) == 0);
  CHECK(slurp(tmp.path / "a" / "merging.json") != slurp(tmp.path / "c" / "merging.json"));
}

TEST_CASE("exit codes") {
  TempDir tmp;
  CHECK(run("coverage --out " + (tmp.path / "x").string()) == 2);
  write(tmp.path / "bad.cfg", "model = ar1\nT = 300\ngamma = 1.5\nseed = 1\n");
  CHECK(run("coverage --config " + (tmp.path / "bad.cfg").string() + " --out " + (tmp.path / "y").string()) == 2);
  CHECK(!fs::exists(tmp.path / "y" / "coverage.json"));
  CHECK(fs::exists(tmp.path / "y" / "manifest.json"));
  write(tmp.path / "c.cfg", kConfig);
  write(tmp.path / "file", "x");
  CHECK(run("coverage --config " + (tmp.path / "c.cfg").string() + " --out " + (tmp.path / "file" / "sub").string()) ==
        4);
  CHECK(run("coverage --config " + (tmp.path / "missing.cfg").string() + " --out " + (tmp.path / "z").string()) == 4);
}

TEST_CASE("simulate, estimate, interval and metrics commands") {
  TempDir tmp;
  const auto d = tmp.path.string();
  REQUIRE(run("simulate --model ar1 --theta 0.5 --length 400 --seed 3 --out " + d + "/sim") == 0);
  const auto series = d + "/sim/series.csv";
  CHECK(slurp(series).rfind("t,x\n", 0) == 0);
  CHECK(run("estimate --model ar1 --series " + series + " --out " + d + "/est") == 0);
  CHECK(slurp(tmp.path / "est" / "estimate.json").find("\"theta\"") != std::string::npos);
  CHECK(run("interval --model ar1 --series " + series + " --variant spl --out " + d + "/iv") == 0);
  CHECK(slurp(tmp.path / "iv" / "interval.json").find("\"lower\"") != std::string::npos);
  CHECK(run("interval --model ar1 --series " + series + " --variant 2ip --out " + d + "/iv2") != 0);
  CHECK(run("metrics --a " + series + " --b " + series + " --out " + d + "/met") == 0);
  CHECK(slurp(tmp.path / "met" / "metrics.json").find("\"d_bl\": 0") != std::string::npos);
}
