#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>
#include <sys/wait.h>

namespace {

using nlohmann::json;

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(INVLIM_BIN) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult r;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe))
    r.output.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string fx(const char* name) {
  return std::string(FIXTURES_DIR) + "/" + name;
}

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("cli validate") {
  struct Row {
    const char* file;
    const char* kind;
  };
  for (const Row& row : {Row{"pw2_poset.json", "poset"},
                         Row{"collapse_chain.json", "system"},
                         Row{"btree4.json", "tree"},
                         Row{"z4_to_z2.json", "group-system"},
                         Row{"collapse_elem.json", "element"}}) {
    const CliResult r = run_cli("validate " + fx(row.file));
    CAPTURE(row.file);
    CAPTURE(r.output);
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, std::string("valid ") + row.kind));
    CHECK(contains(r.output, "outcome: pass"));
  }

  // Invariant failures exit 1; unreadable input exits 2.
  for (const char* file :
       {"broken_coherence.json", "collapse_elem_bad.json", "bad_group.json",
        "bad_hom.json", "nontotal.json", "undirected_poset.json"}) {
    const CliResult r = run_cli("validate " + fx(file));
    CAPTURE(file);
    CAPTURE(r.output);
    CHECK(r.exit_code == 1);
    CHECK(contains(r.output, "outcome: fail"));
  }

  CHECK(run_cli("validate " + fx("no_such.json")).exit_code == 2);

  const auto garbled = temp_file("invlim_cli_garbled.json");
  std::ofstream(garbled) << "{\"nodes\": [";
  CHECK(run_cli("validate " + garbled.string()).exit_code == 2);
}

TEST_CASE("cli threads") {
  CliResult r = run_cli("threads " + fx("restriction2.json"));
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "4 threads"));

  r = run_cli("threads " + fx("restriction2.json") + " --limit 2");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "... 2 more"));

  r = run_cli("threads " + fx("vee_system.json"));
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "2 threads"));

  // A symbolic base has no finite thread enumeration.
  r = run_cli("threads " + fx("symbolic_sys.json"));
  CHECK(r.exit_code == 2);
  CHECK(contains(r.output, "outcome: error"));
}

TEST_CASE("cli decompose") {
  CliResult r = run_cli("decompose " + fx("collapse_chain.json") + " " +
                        fx("collapse_elem.json"));
  CAPTURE(r.output);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "\"stabilizer\": \"q\""));
  CHECK(contains(r.output, "recompose matches"));
  CHECK(contains(r.output, "outcome: pass"));

  r = run_cli("decompose " + fx("collapse_chain.json") + " " +
              fx("collapse_elem_bad.json"));
  CHECK(r.exit_code == 1);

  // The element must reference the system it is decomposed over.
  r = run_cli("decompose " + fx("vee_system.json") + " " +
              fx("collapse_elem.json"));
  CHECK(r.exit_code == 2);
  CHECK(contains(r.output, "references system"));
}

TEST_CASE("cli model") {
  struct Row {
    const char* file;
    const char* line;
  };
  for (const Row& row : {Row{"z2.json", "|Aut(M)| = 2"},
                         Row{"z3.json", "|Aut(M)| = 3"},
                         Row{"z4_to_z2.json", "|Aut(M)| = 4"},
                         Row{"klein_vee.json", "|Aut(M)| = 4"}}) {
    const CliResult r = run_cli("model " + fx(row.file));
    CAPTURE(row.file);
    CAPTURE(r.output);
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, row.line));
    CHECK(contains(r.output, "injective, surjective, multiplicative"));
  }

  CHECK(run_cli("model " + fx("bad_group.json")).exit_code == 1);
  CHECK(run_cli("model " + fx("bad_hom.json")).exit_code == 1);
}

TEST_CASE("cli game") {
  const std::string cmd = "game " + fx("pw2_poset.json") + " --seed 7";
  const CliResult a = run_cli(cmd);
  CAPTURE(a.output);
  CHECK(a.exit_code == 0);
  CHECK(contains(a.output, "I : "));
  CHECK(contains(a.output, "II: "));
  CHECK(contains(a.output, "verdict: "));
  CHECK(contains(a.output, "outcome: pass"));

  // Same seed, same transcript.
  const CliResult b = run_cli(cmd);
  CHECK(a.output == b.output);
  const CliResult c = run_cli("game " + fx("pw2_poset.json") + " --seed 8");
  CHECK((c.output == a.output) == false);

  CHECK(run_cli("game " + fx("pw2_poset.json") + " --rounds 0").exit_code ==
        2);
  CHECK(run_cli("game " + fx("undirected_poset.json")).exit_code == 1);
}

TEST_CASE("cli good") {
  CliResult r =
      run_cli("good " + fx("restriction2.json") + " --lambda 4 --nu 4");
  CAPTURE(r.output);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "verdict: good"));
  CHECK(contains(r.output, "holds (climbing witness)"));

  r = run_cli("good " + fx("restriction2.json") + " --lambda 3 --nu 4");
  CHECK(r.exit_code == 1);
  CHECK(contains(r.output, "at clause (2)"));

  r = run_cli("good " + fx("restriction2.json") + " --lambda 4 --nu 5");
  CHECK(r.exit_code == 1);
  CHECK(contains(r.output, "at clause (3)"));

  // Over a symbolic base the game clause stays open.
  r = run_cli("good " + fx("symbolic_sys.json") + " --lambda 4 --nu 1");
  CHECK(r.exit_code == 1);
  CHECK(contains(r.output, "verdict: unknown"));

  CHECK(run_cli("good " + fx("restriction2.json") + " --nu 4").exit_code == 2);
}

TEST_CASE("cli run reports") {
  const auto report_path = temp_file("invlim_cli_report.json");
  std::filesystem::remove(report_path);

  CliResult r = run_cli("validate " + fx("pw2_poset.json") + " --out " +
                        report_path.string());
  CHECK(r.exit_code == 0);
  std::ifstream in(report_path);
  REQUIRE(in.good());
  const json rep = json::parse(in);
  CHECK(contains(rep["command"].get<std::string>(), "validate"));
  REQUIRE(rep["inputs"].size() == 1);
  CHECK(rep["inputs"][0]["digest"].get<std::string>().size() == 16);
  CHECK(rep["outcome"] == "pass");
  CHECK(rep["payload"]["kind"] == "poset");
  CHECK(rep["duration_ms"].is_number());
  CHECK(rep["artifacts"][0] == report_path.string());

  // Reports carry failures and errors too.
  const auto fail_path = temp_file("invlim_cli_fail.json");
  r = run_cli("validate " + fx("broken_coherence.json") + " --out " +
              fail_path.string());
  CHECK(r.exit_code == 1);
  const json fail_rep = json::parse(std::ifstream(fail_path));
  CHECK(fail_rep["outcome"] == "fail");
  CHECK(contains(fail_rep["payload"]["error"].get<std::string>(), "(p, q, r)"));

  const auto err_path = temp_file("invlim_cli_err.json");
  r = run_cli("validate " + fx("no_such.json") + " --out " + err_path.string());
  CHECK(r.exit_code == 2);
  const json err_rep = json::parse(std::ifstream(err_path));
  CHECK(err_rep["outcome"] == "error");
  CHECK(err_rep["payload"].contains("error"));

  // Decompose reports carry the decomposition payload.
  const auto dec_path = temp_file("invlim_cli_dec.json");
  r = run_cli("decompose " + fx("collapse_chain.json") + " " +
              fx("collapse_elem.json") + " --out " + dec_path.string());
  CHECK(r.exit_code == 0);
  const json dec_rep = json::parse(std::ifstream(dec_path));
  CHECK(!dec_rep.contains("roundtrip"));  // lives under payload
  CHECK(dec_rep["payload"]["roundtrip"] == true);
  CHECK(dec_rep["payload"]["decomposition"]["stabilizer"] == "q");
  CHECK(dec_rep["inputs"].size() == 2);
}

TEST_CASE("cli argument errors") {
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("conjure " + fx("pw2_poset.json")).exit_code == 2);
  CHECK(run_cli("validate").exit_code == 2);
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("validate --help").exit_code == 0);
}
