#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "chainfix/instances.hpp"
#include "chainfix/io.hpp"
#include "doctest.h"

using namespace chainfix;
namespace fs = std::filesystem;

namespace {

fs::path work_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "chainfix-cli-tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

struct RunResult {
  int code = -1;
  Json report;
};

int exit_code_of(int status) {
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunResult run_cli(const Json& cfg, const std::string& tag,
                  const std::string& extra = "") {
  fs::path cfgp = work_dir() / (tag + ".cfg.json");
  fs::path outp = work_dir() / (tag + ".out.json");
  save_json(cfgp.string(), cfg);
  std::string cmd = std::string(CHAINFIX_CLI_PATH) + " --config " +
                    cfgp.string() + " --out " + outp.string() + " " + extra +
                    " >/dev/null 2>&1";
  RunResult r;
  r.code = exit_code_of(std::system(cmd.c_str()));
  if (fs::exists(outp)) r.report = load_json(outp.string());
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("lefschetz traces through the command line") {
  Json cfg;
  cfg["command"] = "lefschetz";
  cfg["map"] = "octahedron-antipode";
  RunResult anti = run_cli(cfg, "lef-anti");
  CHECK(anti.code == 0);
  CHECK(anti.report.at("lambda") == "0");
  CHECK(anti.report.at("pass") == true);

  cfg["map"] = "identity";
  cfg["input"] = "octahedron";
  RunResult id = run_cli(cfg, "lef-id");
  CHECK(id.code == 0);
  CHECK(id.report.at("lambda") == "2");
  CHECK(id.report.at("ring") == "Q");
}

TEST_CASE("bad inputs exit with code two") {
  Json cfg;
  cfg["command"] = "lefschetz";
  cfg["input"] = "nonsense";
  cfg["map"] = "identity";
  RunResult r = run_cli(cfg, "err-instance");
  CHECK(r.code == 2);
  CHECK(r.report.at("pass") == false);
  CHECK(r.report.contains("error"));

  Json bad;
  bad["command"] = "frobnicate";
  CHECK(run_cli(bad, "err-command").code == 2);

  int missing = exit_code_of(std::system(
      (std::string(CHAINFIX_CLI_PATH) + " --config " +
       (work_dir() / "no-such-file.json").string() + " >/dev/null 2>&1")
          .c_str()));
  CHECK(missing == 2);
}

TEST_CASE("a broken complex fails verification") {
  Json cfg;
  cfg["command"] = "verify-complex";
  Json K;
  K["ambient"] = 1;
  K["vertices"] = Json::array({Json::array({"0"}), Json::array({"0"})});
  K["cells"] = Json::array(
      {Json::array({Json::array({0}), Json::array({1})}),
       Json::array({Json::array({0, 1})})});
  cfg["input"] = K;
  RunResult r = run_cli(cfg, "verify-bad");
  CHECK(r.code == 1);
  CHECK(r.report.at("pass") == false);
  CHECK(!r.report.at("errors").empty());
}

TEST_CASE("reports and battery files are byte stable") {
  Json cfg;
  cfg["command"] = "homology";
  cfg["input"] = "projective-plane";
  run_cli(cfg, "det-a", "--seed 7");
  run_cli(cfg, "det-b", "--seed 7");
  CHECK(slurp(work_dir() / "det-a.out.json") ==
        slurp(work_dir() / "det-b.out.json"));

  fs::path bat1 = work_dir() / "bat1";
  fs::path bat2 = work_dir() / "bat2";
  fs::create_directories(bat1);
  fs::create_directories(bat2);
  Json emit;
  emit["command"] = "emit-battery";
  emit["dir"] = bat1.string();
  CHECK(run_cli(emit, "emit-1").code == 0);
  emit["dir"] = bat2.string();
  RunResult r = run_cli(emit, "emit-2");
  CHECK(r.code == 0);
  REQUIRE(r.report.at("files").size() == 7);
  for (const auto& name : r.report.at("files")) {
    std::string f = name.get<std::string>();
    CHECK(slurp(bat1 / f) == slurp(bat2 / f));
  }
}

TEST_CASE("the emitted battery round-trips") {
  fs::path bat = work_dir() / "bat-rt";
  fs::create_directories(bat);
  Json emit;
  emit["command"] = "emit-battery";
  emit["dir"] = bat.string();
  REQUIRE(run_cli(emit, "emit-rt").code == 0);

  GeomComplex O = complex_of_json(load_json((bat / "octahedron.json").string()));
  GeomComplex ref = inst_octahedron();
  CHECK(O.vertices == ref.vertices);
  CHECK(O.cells == ref.cells);
  CHECK(O.cell_count(0) == 6);
  CHECK(O.cell_count(2) == 8);

  MultiMap F =
      multimap_of_json(load_json((bat / "antipodal-multimap.json").string()));
  CHECK(F.selections.size() == 2);
  CellSet want = {{0, 0}, {0, 1}};
  CHECK(F.values[0][0] == want);

  ConvexBody X = body_of_json(load_json((bat / "triangle-body.json").string()));
  CHECK(X.d == 3);

  Json cfg;
  cfg["command"] = "homology";
  Json file;
  file["file"] = (bat / "octahedron.json").string();
  cfg["input"] = file;
  RunResult r = run_cli(cfg, "hom-file");
  CHECK(r.code == 0);
  Json betti = Json::array({1, 0, 1});
  CHECK(r.report.at("betti") == betti);
}

TEST_CASE("homology torsion and ring override") {
  Json cfg;
  cfg["command"] = "homology";
  cfg["input"] = "projective-plane";
  RunResult z = run_cli(cfg, "hom-z");
  CHECK(z.report.at("ring") == "Z");
  CHECK(z.report.at("torsion")[1][0] == "2");
  RunResult p2 = run_cli(cfg, "hom-p2", "--ring Zp:2");
  CHECK(p2.report.at("ring") == "Zp:2");
  Json betti = Json::array({1, 1, 1});
  CHECK(p2.report.at("betti") == betti);
}

TEST_CASE("index and mod p commands freeze") {
  Json cfg;
  cfg["command"] = "index";
  cfg["map"] = "path3-reflection";
  RunResult r = run_cli(cfg, "idx-path3");
  CHECK(r.code == 0);
  CHECK(r.report.at("index") == "1");
  CHECK(r.report.at("separation").at("alpha") == true);

  Json mp;
  mp["command"] = "modp";
  mp["map"] = "path3-reflection";
  mp["p"] = 2;
  RunResult m = run_cli(mp, "modp-path3");
  CHECK(m.code == 0);
  CHECK(m.report.at("congruent") == true);
  CHECK(m.report.at("index_f") == m.report.at("index_fm"));
}

TEST_CASE("multivalued dichotomy through the command line") {
  Json cfg;
  cfg["command"] = "multi";
  cfg["multimap"] = "antipodal";
  RunResult r = run_cli(cfg, "multi-anti");
  CHECK(r.code == 0);
  CHECK(r.report.at("usc") == true);
  CHECK(r.report.at("continuous") == true);
  CHECK(r.report.at("determinate") == false);
  CHECK(r.report.at("witness_a") == "2");
  CHECK(r.report.at("witness_b") == "0");
  CHECK(r.report.at("samples").size() == 6);
  CHECK(r.report.at("pass") == true);
}

TEST_CASE("axiom suite and theorem checks run end to end") {
  Json ax;
  ax["command"] = "axioms";
  RunResult a = run_cli(ax, "axioms-q");
  CHECK(a.code == 0);
  CHECK(a.report.at("checks").size() == 31);
  for (const auto& c : a.report.at("checks")) CHECK(c.at("pass") == true);

  Json t2;
  t2["command"] = "check-thm2";
  t2["body"] = "triangle";
  t2["epsilon"] = "1/2";
  RunResult t = run_cli(t2, "thm2-half");
  CHECK(t.code == 0);
  CHECK(t.report.at("carriers") == true);
  CHECK(t.report.at("cells") == true);
  CHECK(t.report.at("composite") == true);
  CHECK(t.report.at("finite_piece") == true);
}
