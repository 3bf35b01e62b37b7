#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

class Sandbox {
 public:
  Sandbox() {
    dir_ = fs::temp_directory_path() / ("infolaw-cli-" + std::to_string(::getpid()) + "-" +
                                        std::to_string(counter_++));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Sandbox() { fs::remove_all(dir_); }
  const fs::path& dir() const { return dir_; }
  fs::path operator/(const std::string& name) const { return dir_ / name; }

  Run run(const std::string& args) const {
    const auto out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
    const std::string cmd = std::string("\"") + INFOLAW_CLI_PATH + "\" " + args + " > \"" +
                            out.string() + "\" 2> \"" + err.string() + "\"";
    const int raw = std::system(cmd.c_str());
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out), slurp(err)};
  }

 private:
  fs::path dir_;
  static inline int counter_ = 0;
};

std::string out_flag(const Sandbox& s, const std::string& sub = "o") {
  return "--out \"" + (s / sub).string() + "\"";
}

}  // namespace

TEST_CASE("kc on the default cache") {
  Sandbox s;
  REQUIRE(s.run(out_flag(s) + " enumerate").status == 0);
  CHECK(s.run(out_flag(s) + " kc b").out == "3\n");
  CHECK(s.run(out_flag(s) + " kc b1").out == "6\n");
  CHECK(s.run(out_flag(s) + " kc b0110 --condition b0110").out == "15\n");
  CHECK(s.run(out_flag(s) + " kc b1111111").out == ">22\n");
  const std::string cache = slurp(s / "o/table.csv");
  CHECK(cache.find("# run.machine=UPM-1\n") != std::string::npos);
  CHECK(cache.find("# run.max_len=22\n") != std::string::npos);
  CHECK(cache.find("# run.budget=4096\n") != std::string::npos);
  CHECK(cache.find("# run.domain=upto:4\n") != std::string::npos);
  CHECK(cache.find("# run.seed=0\n") != std::string::npos);
  CHECK(cache.find("workers") == std::string::npos);
}

TEST_CASE("law on the synthetic hypercube") {
  Sandbox s;
  const auto o = out_flag(s);
  REQUIRE(s.run(o + " --domain-exact dist --distance hamming").status == 0);
  REQUIRE(s.run(o + " --lambda 1 confusion --distances \"" + (s / "o/distance_hamming.csv").string() + "\"")
              .status == 0);
  const Run law = s.run(o + " --measure gprime law --matrix \"" + (s / "o/confusion.csv").string() +
                        "\" --distances \"" + (s / "o/distance_hamming.csv").string() + "\"");
  REQUIRE(law.status == 0);
  const auto report = nlohmann::json::parse(slurp(s / "o/law_report.json"));
  CHECK(std::abs(report["slope"].get<double>() + std::log(2.0)) < 1e-9);
  CHECK(report["r2"].get<double>() >= 1 - 1e-9);
  CHECK(report["pairs"] == 120);
  CHECK(report["metadata"]["measure"] == "gprime");
  CHECK(report["metadata"]["lambda"] == "1");

  REQUIRE(s.run(o + " fit --pairs \"" + (s / "o/law_pairs.csv").string() + "\"").status == 0);
  const auto fit = nlohmann::json::parse(slurp(s / "o/fit_report.json"));
  CHECK(fit["winner"] == "exponential");
  CHECK(std::abs(fit["exponential"]["B"].get<double>() - std::log(2.0)) < 1e-9);
}

TEST_CASE("check flags the discrete metric as not normalized") {
  Sandbox s;
  const auto o = out_flag(s);
  REQUIRE(s.run(o + " --domain-exact dist --distance discrete").status == 0);
  const Run r = s.run(o + " check --metric \"" + (s / "o/distance_discrete.csv").string() + "\"");
  REQUIRE(r.status == 0);
  const auto report = nlohmann::json::parse(slurp(s / "o/admissibility_report.json"));
  CHECK(report["normalized_ok"] == false);
  CHECK(report["identity_ok"] == true);
  CHECK(report["triangle_violation_count"] == 0);
}

TEST_CASE("errors have distinct exit codes and one-line messages") {
  Sandbox s;
  const auto o = out_flag(s);

  const Run machine = s.run(o + " --machine UPM-9 enumerate");
  CHECK(machine.status == 16);
  CHECK(machine.err.rfind("error:unknown_machine:", 0) == 0);

  const Run cache = s.run(o + " kc b");
  CHECK(cache.status == 24);
  CHECK(cache.err.rfind("error:io_error:", 0) == 0);

  {
    std::ofstream bad(s / "bad.csv");
    bad << "b,b0\n0,1\n";
  }
  const Run malformed = s.run(o + " check --metric \"" + (s / "bad.csv").string() + "\"");
  CHECK(malformed.status == 17);
  CHECK(malformed.err.rfind("error:malformed_file:", 0) == 0);

  {
    std::ofstream pairs(s / "pairs.csv");
    pairs << "d,g\n1,0.5\n";
  }
  const Run few = s.run(o + " fit --pairs \"" + (s / "pairs.csv").string() + "\"");
  CHECK(few.status == 21);

  for (const Run* r : {&machine, &cache, &malformed, &few}) {
    CHECK(std::count(r->err.begin(), r->err.end(), '\n') == 1);
  }

  CHECK(s.run(o + " frobnicate").status == 2);
  CHECK(s.run(o + " kc").status == 2);
  CHECK(s.run("--help").status == 0);
  CHECK(s.run("--help").out.find("10 + error code") != std::string::npos);
}

TEST_CASE("config file overrides defaults") {
  Sandbox s;
  {
    std::ofstream cfg(s / "run.ini");
    cfg << "max-len=12\nbudget=256\ndomain-bits=2\n";
  }
  REQUIRE(s.run("--config \"" + (s / "run.ini").string() + "\" " + out_flag(s) + " enumerate").status == 0);
  const std::string cache = slurp(s / "o/table.csv");
  CHECK(cache.find("# max_len=12\n") != std::string::npos);
  CHECK(cache.find("# budget=256\n") != std::string::npos);
  CHECK(cache.find("# run.domain=upto:2\n") != std::string::npos);
}

TEST_CASE("worker count never changes an output byte") {
  Sandbox s;
  for (const char* w : {"1", "8"}) {
    const std::string o = out_flag(s, std::string("w") + w) + " --workers " + w + " --max-len 18";
    REQUIRE(s.run(o + " enumerate").status == 0);
    REQUIRE(s.run(o + " dist --distance dsum").status == 0);
    REQUIRE(s.run(o + " invariance --max-output 2").status == 0);
  }
  for (const char* f : {"table.csv", "distance_dsum.csv", "invariance_report.json"}) {
    CHECK_MESSAGE(slurp(s / "w1" / f) == slurp(s / "w8" / f), f);
  }
}
