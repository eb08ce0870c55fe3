#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#ifndef OPINF_BIN_PATH
#error "OPINF_BIN_PATH must point at the command-line binary"
#endif
#ifndef OPINF_GOLDEN_DIR
#error "OPINF_GOLDEN_DIR must point at the golden file directory"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

// Every invocation gets its own scratch working directory, so ledger and
// checkpoint side effects stay observable and isolated.
class Scratch {
 public:
  Scratch() {
    static int counter = 0;
    dir_ = fs::temp_directory_path() /
           ("opinf_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(dir_);
  }
  ~Scratch() { std::error_code ec; fs::remove_all(dir_, ec); }
  const fs::path& dir() const { return dir_; }

  RunResult run(const std::string& args) const {
    const fs::path out = dir_ / "stdout.bin";
    const fs::path err = dir_ / "stderr.bin";
    const std::string cmd = "cd '" + dir_.string() + "' && '" + OPINF_BIN_PATH + "' " + args +
                            " > '" + out.string() + "' 2> '" + err.string() + "'";
    const int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = (rc >= 0 && WIFEXITED(rc)) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

 private:
  fs::path dir_;
};

void check_golden(const std::string& name, const std::string& got) {
  const fs::path golden = fs::path(OPINF_GOLDEN_DIR) / name;
  REQUIRE_MESSAGE(fs::exists(golden), "missing golden file ", golden.string());
  const std::string want = slurp(golden);
  if (got != want) {
    // show the first diverging line for a readable failure
    std::istringstream a(got), b(want);
    std::string la, lb;
    int line = 0;
    while (true) {
      const bool ga = static_cast<bool>(std::getline(a, la));
      const bool gb = static_cast<bool>(std::getline(b, lb));
      ++line;
      if (!ga && !gb) break;
      if (la != lb || ga != gb) {
        FAIL_CHECK("golden mismatch for ", name, " at line ", line, "\n  got:  ",
                   (ga ? la : "<eof>"), "\n  want: ", (gb ? lb : "<eof>"));
        return;
      }
    }
    FAIL_CHECK("golden mismatch for ", name, " (content differs but lines match?)");
  } else {
    CHECK(got == want);
  }
}

} // namespace

TEST_CASE("golden: enumerate") {
  Scratch s;
  const RunResult r4 = s.run("--no-manifest enumerate --n 4");
  CHECK(r4.exit_code == 0);
  check_golden("enumerate_n4.json", r4.out);

  const RunResult r6 = s.run("--no-manifest enumerate --n 6");
  CHECK(r6.exit_code == 0);
  check_golden("enumerate_n6.json", r6.out);
}

TEST_CASE("golden: matrix CSV") {
  Scratch s;
  const RunResult r3 = s.run("matrix --n 3");
  CHECK(r3.exit_code == 0);
  check_golden("matrix_n3.csv", r3.out);

  const RunResult r4 = s.run("matrix --n 4");
  CHECK(r4.exit_code == 0);
  check_golden("matrix_n4.csv", r4.out);
}

TEST_CASE("golden: finner") {
  Scratch s;
  const RunResult special = s.run("--no-manifest finner --e 1/3,2/3");
  CHECK(special.exit_code == 0);
  check_golden("finner_special.json", special.out);

  const RunResult noisy = s.run("--no-manifest finner --p 1/64,1/64,1/64");
  CHECK(noisy.exit_code == 0);
  check_golden("finner_noisy.json", noisy.out);
}

TEST_CASE("golden: certificates") {
  Scratch s;
  const RunResult r5 = s.run("--no-manifest certify --n 5 --json");
  CHECK(r5.exit_code == 0);
  check_golden("certify_n5.json", r5.out);

  const RunResult r6 = s.run("--no-manifest certify --n 6 --json");
  CHECK(r6.exit_code == 0);
  check_golden("certify_n6.json", r6.out);

  const RunResult text = s.run("certify --n 6");
  CHECK(text.exit_code == 0);
  check_golden("certify_n6.txt", text.out);
}

TEST_CASE("golden: region CSV with builtin bounds") {
  Scratch s;  // empty scratch: no ledger present, builtin bound lines apply
  const RunResult r = s.run("region");
  CHECK(r.exit_code == 0);
  check_golden("region.csv", r.out);
}

TEST_CASE("golden: exhaustive k=1 scan") {
  Scratch s;
  const RunResult r = s.run("scan --k 1");
  CHECK(r.exit_code == 0);
  check_golden("scan_k1.csv", r.out);
  CHECK(r.err.find("scanned 64 of 64") != std::string::npos);
  CHECK(r.err.find("violations 0") != std::string::npos);
}

TEST_CASE("golden: counting-argument search") {
  Scratch s;
  const RunResult r = s.run("--no-manifest verify-theorem --k 4");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("EMPTY\n", 0) == 0);
  check_golden("verify_k4.json", r.out.substr(6));
}

TEST_CASE("deterministic output across runs") {
  Scratch s;
  const RunResult a = s.run("--no-manifest enumerate --n 5");
  const RunResult b = s.run("--no-manifest enumerate --n 5");
  CHECK(a.out == b.out);
  CHECK(!a.out.empty());
}

TEST_CASE("bound: exact LP polygon with ledger side effects") {
  Scratch s;
  const RunResult r = s.run("bound --n 4");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("command") == "bound");
  CHECK(j.at("polygon") == 4);
  CHECK(j.at("mode") == "single");
  CHECK(j.at("direction") == "max");
  CHECK(j.at("status") == "converged");
  CHECK(j.at("exact") == "1/2");
  CHECK(std::abs(j.at("bound").get<double>() - 0.5) <= 1e-9);
  CHECK(j.contains("manifest"));
  CHECK(j.at("manifest").at("command") == "bound");
  CHECK(j.at("constraint_counts").at("variables").get<int>() > 0);

  // default ledger: one JSON line recording the run
  const fs::path ledger = s.dir() / "opinf_results.jsonl";
  REQUIRE(fs::exists(ledger));
  const json line = json::parse(slurp(ledger));
  CHECK(line.at("polygon") == 4);
  CHECK(line.at("status") == "converged");

  // a second run appends rather than truncating
  s.run("bound --n 3");
  std::ifstream f(ledger);
  int lines = 0;
  std::string lstr;
  while (std::getline(f, lstr)) ++lines;
  CHECK(lines == 2);
}

TEST_CASE("bound: --no-ledger leaves no files behind") {
  Scratch s;
  const RunResult r = s.run("--no-manifest bound --n 3 --no-ledger");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("exact") == "1");
  CHECK(!j.contains("manifest"));
  CHECK(!fs::exists(s.dir() / "opinf_results.jsonl"));
}

TEST_CASE("bound: checkpoint and resume") {
  Scratch s;
  const RunResult first = s.run("bound --n 6 --no-ledger --checkpoint ck.json");
  REQUIRE(first.exit_code == 0);
  const json j1 = json::parse(first.out);
  REQUIRE(j1.at("status") == "converged");
  CHECK(j1.at("iterations").get<int>() > 1);

  const fs::path ck = s.dir() / "ck.json";
  REQUIRE(fs::exists(ck));
  const json ckj = json::parse(slurp(ck));
  CHECK(ckj.at("kind") == "checkpoint");
  CHECK(ckj.at("polygon") == 6);

  // replaying from the converged state finishes in a single iteration
  const RunResult second = s.run("bound --n 6 --no-ledger --checkpoint ck.json --resume");
  REQUIRE(second.exit_code == 0);
  const json j2 = json::parse(second.out);
  CHECK(j2.at("status") == "converged");
  CHECK(j2.at("iterations").get<int>() == 1);
  CHECK(std::abs(j2.at("bound").get<double>() - j1.at("bound").get<double>()) <= 1e-9);

  // a checkpoint from another run is rejected
  const RunResult bad = s.run("bound --n 5 --no-ledger --checkpoint ck.json --resume");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("region: ledger lines override builtin bound lines") {
  Scratch s;
  {
    std::ofstream ledger(s.dir() / "opinf_results.jsonl");
    json line;
    line["polygon"] = 6;
    line["mode"] = "cumulative";
    line["direction"] = "max";
    line["status"] = "converged";
    line["bound"] = 0.123456789;
    ledger << line.dump() << '\n';
    // non-qualifying lines must be ignored
    json skip = line;
    skip["polygon"] = 7;
    skip["status"] = "not_converged";
    ledger << skip.dump() << '\n';
  }
  const RunResult r = s.run("region");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("bound_line,n6,0.123456789") != std::string::npos);
  // the n7 builtin survives because the ledger line did not converge
  CHECK(r.out.find("bound_line,n7,0.392034224") != std::string::npos);
}

TEST_CASE("exit codes") {
  Scratch s;
  // no certificate beyond the hexagon
  CHECK(s.run("--no-manifest certify --n 8 --json").exit_code == 4);
  // exhaustive scans beyond k=2 are refused
  CHECK(s.run("scan --k 3").exit_code == 2);
  // parse errors
  CHECK(s.run("bound --n 17").exit_code == 2);
  CHECK(s.run("frobnicate").exit_code == 2);
  CHECK(s.run("finner").exit_code == 2);
  CHECK(s.run("finner --p 1,2,3 --e 0,0").exit_code == 2);
  // unnormalized probabilities are reported, not converted
  const RunResult r = s.run("--no-manifest finner --p 1,1,1");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("normalized") == false);
  CHECK(j.contains("normalization_sum"));
  CHECK(!j.contains("e"));
}

TEST_CASE("verify-theorem: exhaustive k=1 and budget cuts") {
  Scratch s;
  const RunResult opi = s.run("--no-manifest verify-theorem --k 1");
  CHECK(opi.exit_code == 0);
  CHECK(opi.out.rfind("EMPTY\n", 0) == 0);
  const json j = json::parse(opi.out.substr(6));
  CHECK(j.at("require_opi") == true);
  CHECK(j.at("scanned") == 64);

  const RunResult found = s.run("--no-manifest verify-theorem --k 1 --allow-non-opi");
  CHECK(found.exit_code == 0);
  CHECK(found.out.rfind("FOUND", 0) == 0);

  const RunResult budget =
      s.run("--no-manifest verify-theorem --k 2 --max-strategies 1000");
  CHECK(budget.exit_code == 3);
  CHECK(budget.out.rfind("BUDGET-EXCEEDED\n", 0) == 0);
  const json bj = json::parse(budget.out.substr(budget.out.find('\n') + 1));
  CHECK(bj.at("next_index") == 1000);
}

TEST_CASE("scan: sampling beyond the exhaustive regime") {
  Scratch s;
  const RunResult r = s.run("scan --k 3 --samples 200 --seed 7");
  CHECK(r.exit_code == 0);
  // header plus 200 records
  int lines = 0;
  for (char ch : r.out) lines += (ch == '\n');
  CHECK(lines == 201);
  CHECK(r.out.rfind("k,strategy_hash,e2_avg,e3_avg,opi_dev,finner_margin\r\n", 0) == 0);

  const RunResult again = s.run("scan --k 3 --samples 200 --seed 7");
  CHECK(again.out == r.out);
}

TEST_CASE("--out writes the payload to a file") {
  Scratch s;
  const RunResult r = s.run("--no-manifest --out payload.json enumerate --n 4");
  CHECK(r.exit_code == 0);
  const fs::path payload = s.dir() / "payload.json";
  REQUIRE(fs::exists(payload));
  const json j = json::parse(slurp(payload));
  CHECK(j.at("command") == "enumerate");
  CHECK(j.at("counts").at("words") == 6);
}
