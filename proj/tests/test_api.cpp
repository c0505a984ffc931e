#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <lspace/lspace.h>

#include "report.hpp"
#include "serialize.hpp"

using namespace lspace;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(FIXTURE_DIR) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct RunOutcome {
  lspace_status status;
  std::string text;
  int pass;
};

RunOutcome run(const char* command, const char* doc, const char* params, bool json = true) {
  lspace_config cfg;
  lspace_config_init(&cfg);
  cfg.json_output = json ? 1 : 0;
  lspace_result* res = nullptr;
  lspace_status st = lspace_run(command, doc, params, &cfg, &res);
  RunOutcome out{st, lspace_result_text(res), lspace_result_pass(res)};
  lspace_result_free(res);
  return out;
}

}  // namespace

TEST_CASE("serialization round trips") {
  SUBCASE("base algebra") {
    BaseAlgebra a = BaseAlgebra::truncated_polynomial(2);
    Json j = base_to_json(a);
    BaseAlgebra b = base_from_json(j);
    CHECK(base_to_json(b) == j);
    CHECK(b.dim() == a.dim());
    CHECK(validate_base_algebra(b).all_pass());
  }

  SUBCASE("L-infinity document, including curved models") {
    for (const char* name : {"heisenberg.json", "gx_1_1.json", "mc_element.json"}) {
      Json j = Json::parse(slurp(name));
      LInfty g = linfty_from_json(j);
      Json k = linfty_to_json(g);
      CHECK(linfty_to_json(linfty_from_json(k)) == k);
    }
  }

  SUBCASE("cochain complex") {
    CochainComplex c;
    c.module.labels = {"x", "y"};
    c.module.degrees = {0, 1};
    c.d = QMatrix(2, 2);
    c.d.at(1, 0) = Rat(3, 2);
    Json j = complex_to_json(c);
    CHECK(complex_to_json(complex_from_json(j)) == j);
  }

  SUBCASE("u-vectors by label") {
    LInfty g = linfty_from_json(Json::parse(slurp("mc_element.json")));
    Json j = Json::parse(R"([["s","a1","2/3"]])");
    QVec v = uvec_from_json(g, j);
    CHECK(uvec_to_json(g, v) == j);
  }

  SUBCASE("rationals as strings") {
    CHECK(rat_to_string(rat_from_string("-6/4")) == "-3/2");
  }
}

TEST_CASE("C API status codes") {
  std::string heis = slurp("heisenberg.json");
  auto ok = run("validate", heis.c_str(), nullptr);
  CHECK(ok.status == LSPACE_OK);
  CHECK(ok.pass == 1);
  CHECK_FALSE(ok.text.empty());

  std::string bad = slurp("mut_1.json");
  auto fail = run("validate", bad.c_str(), nullptr);
  CHECK(fail.status == LSPACE_EMATH);
  CHECK(fail.pass == 0);

  auto garbage = run("validate", "{not json", nullptr);
  CHECK(garbage.status == LSPACE_EINPUT);

  auto unknown = run("frobnicate", heis.c_str(), nullptr);
  CHECK(unknown.status == LSPACE_EINPUT);

  auto missing = run("validate", nullptr, nullptr);
  CHECK(missing.status == LSPACE_EINPUT);
}

TEST_CASE("C API runs every command") {
  auto coh = run("cohomology", slurp("heisenberg.json").c_str(), nullptr);
  CHECK(coh.status == LSPACE_OK);
  Json j = Json::parse(coh.text);
  CHECK(j.at("data").at("h") == Json::parse("[[0,1],[1,2],[2,2],[3,1]]"));

  CHECK(run("mc-verify", slurp("mc_element.json").c_str(), nullptr).status == LSPACE_OK);
  CHECK(run("mc-verify", slurp("mc_element_bad.json").c_str(), nullptr).status ==
        LSPACE_EMATH);
  CHECK(run("mc-solve", slurp("mc_element.json").c_str(), nullptr).status == LSPACE_OK);
  CHECK(run("mc-solve", slurp("blocked.json").c_str(), nullptr).status == LSPACE_EMATH);
  CHECK(run("mc-path", slurp("mc_path.json").c_str(), nullptr).status == LSPACE_OK);
  CHECK(run("descent-check", slurp("circle.json").c_str(), nullptr).status == LSPACE_OK);
  CHECK(run("descent-check", slurp("circle_fiber_bad.json").c_str(), nullptr).status ==
        LSPACE_EMATH);
  CHECK(run("zoo", nullptr, R"({"model":"gx","dim":"1","jets":"1"})").status == LSPACE_OK);
}

TEST_CASE("machine reports are byte-identical across runs") {
  std::string doc = slurp("mc_element.json");
  auto a = run("mc-solve", doc.c_str(), nullptr);
  auto b = run("mc-solve", doc.c_str(), nullptr);
  CHECK(a.text == b.text);

  std::string cover = slurp("circle.json");
  CHECK(run("descent-check", cover.c_str(), nullptr).text ==
        run("descent-check", cover.c_str(), nullptr).text);
}

TEST_CASE("run_command rejects cap overflow instead of truncating") {
  Json doc = Json::parse(slurp("gx_1_1.json"));
  RunConfig cfg;
  cfg.word_cap = 3;
  CHECK_NOTHROW(run_command("cohomology", &doc, {}, cfg));
  // per-word curving terms overflow a tiny cap under strict mode
  lspace_config c;
  lspace_config_init(&c);
  c.word_cap = 0;
  lspace_result* res = nullptr;
  lspace_status st = lspace_run("cohomology", slurp("gx_1_1.json").c_str(), nullptr, &c, &res);
  // either an input-level overflow or a clean report; never a silent wrong answer
  CHECK((st == LSPACE_EINPUT || st == LSPACE_OK));
  lspace_result_free(res);
}

TEST_CASE("CLI subprocess exit codes") {
  std::string fixture = std::string(FIXTURE_DIR) + "/heisenberg.json";
  std::string cmd = std::string(CLI_PATH) + " validate " + fixture + " > /dev/null 2>&1";
  CHECK(std::system(cmd.c_str()) == 0);

  std::string bad = std::string(FIXTURE_DIR) + "/mut_2.json";
  cmd = std::string(CLI_PATH) + " validate " + bad + " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  CHECK(WIFEXITED(rc));
  CHECK(WEXITSTATUS(rc) == 1);

  cmd = std::string(CLI_PATH) + " validate /nonexistent.json > /dev/null 2>&1";
  rc = std::system(cmd.c_str());
  CHECK(WIFEXITED(rc));
  CHECK(WEXITSTATUS(rc) == 2);
}
