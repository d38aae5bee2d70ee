#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kData = RTAIL_TEST_DATA;

fs::path workdir() {
  static fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("rtail_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  std::string cmd = std::string(RTAIL_CLI) + " " + args + " > " +
                    (workdir() / "stdout.txt").string() + " 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

std::string out(const std::string& name) { return (workdir() / name).string(); }

}  // namespace

TEST_CASE("exact writes csv and sidecar") {
  REQUIRE(run("exact --config " + kData + "/small.ini --out " + out("exact.csv")) == 0);
  CHECK(first_line(out("exact.csv")).rfind("j,", 0) == 0);
  auto j = nlohmann::json::parse(slurp(out("exact.csv.json")));
  CHECK(j["trunc"] == 512);
  CHECK(j.contains("rho"));
  CHECK_FALSE(fs::exists(out("exact.csv.tmp")));
}

TEST_CASE("asym reports the regime") {
  REQUIRE(run("asym --config " + kData + "/e1.ini --out " + out("asym.csv") + " --points 8") == 0);
  auto j = nlohmann::json::parse(slurp(out("asym.csv.json")));
  CHECK(j["case_id"] == "Case1");
  CHECK(j["a"].get<double>() == 2.5);
}

TEST_CASE("sim columns") {
  REQUIRE(run("sim --config " + kData + "/small.ini --out " + out("sim.csv")) == 0);
  CHECK(first_line(out("sim.csv")) ==
        "j,L_tail,L_tail_hw,D0_tail,D0_tail_hw,D1_tail,D1_tail_hw,L_pmf,upcrossings,reliable");
  auto j = nlohmann::json::parse(slurp(out("sim.csv.json")));
  CHECK(j["replications"].size() == 3);
  CHECK(j["replications"][0]["seed"].is_number_unsigned());
}

TEST_CASE("every command is byte-for-byte repeatable") {
  const std::string cfg = kData + "/small.ini";
  struct Cmd {
    std::string args;
    std::string file;
  } cmds[] = {
      {"exact --config " + cfg + " --out ", "r_exact.csv"},
      {"asym --config " + cfg + " --out ", "r_asym.csv"},
      {"sim --config " + cfg + " --out ", "r_sim.csv"},
      {"compare --config " + cfg + " --out ", "r_cmp.json"},
      {"check-lemma61 --f1 paretotail:theta=1,d=1.5 --f2 paretotail:theta=1,d=2.5 --t 100,400 "
       "--trunc 1024 --out ",
       "r_lemma.csv"},
  };
  for (const auto& c : cmds) {
    CAPTURE(c.args);
    int a = run(c.args + out("a_" + c.file));
    int b = run(c.args + out("b_" + c.file));
    CHECK(a == b);
    CHECK(slurp(out("a_" + c.file)) == slurp(out("b_" + c.file)));
  }
}

TEST_CASE("exit codes") {
  CHECK(run("exact --config " + kData + "/missing.ini --out " + out("x.csv")) == 2);
  CHECK(run("exact --config " + kData + "/unstable.ini --out " + out("x.csv")) == 3);
  CHECK(run("asym --config " + kData + "/light.ini --out " + out("x.csv")) == 5);
  CHECK(run("exact --config " + kData + "/light.ini --out " + out("light.csv")) == 0);
  CHECK(run("check-lemma61 --f1 paretotail:theta=1,d=1.5 --f2 paretotail:theta=1,d=3 "
            "--t 100 --out " + out("x.csv")) == 2);
  CHECK(run("bogus") == 2);

  std::ofstream(out("strict.ini")) << slurp(kData + "/small.ini")
                                   << "compare.ratio_tol = 1e-12\ncompare.curve_tol = 1e-12\n"
                                   << "compare.refined_tol = 1e-12\n";
  CHECK(run("compare --config " + out("strict.ini") + " --out " + out("strict.json")) == 6);
  auto j = nlohmann::json::parse(slurp(out("strict.json")));
  CHECK(j.contains("checks"));
}
