#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "mhfx/error.hpp"
#include "mhfx/mhfx.h"
#include "support.hpp"

using namespace testing;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

// Takes ownership of a string from the C API.
std::string take(char* s) {
  std::string out = s ? s : "";
  mhfx_string_free(s);
  return out;
}

struct ProblemHandle {
  mhfx_problem* p = nullptr;
  ~ProblemHandle() { mhfx_problem_free(p); }
};

void strip_times(Json& j) {
  if (j.is_object()) {
    j.erase("wall_time_s");
    for (auto& [k, v] : j.items()) strip_times(v);
  } else if (j.is_array()) {
    for (auto& v : j) strip_times(v);
  }
}

int run(const std::string& args) {
  const std::string cmd = std::string(MHFX_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

const char* kGauss = R"({"mhf": {"variables": ["x"],
  "numerator": [{"param": ["0", "1"], "form": [1]}, {"param": ["0", "-1"], "form": [1]}],
  "denominator": [{"param": ["-1", "1"], "form": [1]}]}})";

}  // namespace

TEST_CASE("property: JSON round trips") {
  Gen g(51);
  for (int i = 0; i < 50; ++i) {
    MHF m = g.mhf(3);
    // parsing canonicalizes
    CHECK(mhf_from_json(to_json(m)) == canonical_form(m));
    EpsSeries s = g.series();
    CHECK(eps_series_from_json(to_json(s)) == s);
    EpsLinear e(g.rational(-5, 5), g.rational(-2, 2));
    CHECK(eps_linear_from_json(to_json(e)) == e);
  }
  for (const auto& name : list_fixtures(default_fixture_dir())) {
    INFO(name);
    const Json fx = read_json_file(default_fixture_dir() + "/" + name + ".json");
    const Problem p = problem_from_json(fx["problem"]);
    CHECK(to_json(problem_from_json(to_json(p))) == to_json(p));
  }
}

TEST_CASE("schema errors") {
  CHECK(code_of([] { mhf_from_json(parse_json_text(R"({"variables": "x"})")); }) ==
        ErrorCode::SchemaError);
  CHECK(code_of([] {
          mhf_from_json(parse_json_text(
              R"({"variables": ["x"], "numerator": [{"param": ["1"], "form": [1, 0]}], "denominator": []})"));
        }) == ErrorCode::SchemaError);
  CHECK(code_of([] { eps_linear_from_json(parse_json_text(R"(["1/0", "0"])")); }) !=
        ErrorCode::InvalidArgument);
  CHECK(code_of([] { eps_linear_from_json(parse_json_text("[1.5, 2]")); }) == ErrorCode::SchemaError);
  CHECK(code_of([] { problem_from_json(parse_json_text(R"({"sum": 3})")); }) ==
        ErrorCode::SchemaError);
  CHECK(code_of([] { parse_json_text("{not json"); }) == ErrorCode::SchemaError);
  Json fx = read_json_file(default_fixture_dir() + "/gauss-integer.json");
  fx["checks"][0]["expect"][0]["value"] = "1.0.0";
  CHECK(code_of([&] { verify_fixture(fx); }) == ErrorCode::SchemaError);
  fx["checks"][0]["kind"] = "sideways";
  CHECK(code_of([&] { verify_fixture(fx); }) == ErrorCode::SchemaError);
}

TEST_CASE("fixture problems parse") {
  const std::string dir = default_fixture_dir();
  CHECK(problem_from_json(read_json_file(dir + "/gauss-half-integer.json")["problem"]).terms.size() ==
        1);
  const Problem sunset = problem_from_json(read_json_file(dir + "/sunset.json")["problem"]);
  CHECK(sunset.terms.size() == 4);
  for (const auto& t : sunset.terms) CHECK(t.mhf.folds() == 3);
  CHECK(list_fixtures(dir).size() == 10);
}

TEST_CASE("C API") {
  CHECK(std::string(mhfx_status_name(MHFX_OK)) == "Ok");
  CHECK(std::string(mhfx_status_name(MHFX_UNKNOWN_CASE)) == "UnknownCase");

  SUBCASE("parse, classify, expand") {
    ProblemHandle h;
    REQUIRE(mhfx_problem_parse(kGauss, &h.p) == MHFX_OK);
    char* s = nullptr;
    REQUIRE(mhfx_classify(h.p, &s) == MHFX_OK);
    Json c = parse_json_text(take(s));
    CHECK(c["terms"][0]["taylor"] == false);
    CHECK(c["terms"][0]["pole_depth"] == 1);
    mhfx_expansion* e = nullptr;
    REQUIRE(mhfx_expand(h.p, 2, &e) == MHFX_OK);
    REQUIRE(mhfx_expansion_to_json(e, &s) == MHFX_OK);
    CHECK(!take(s).empty());
    REQUIRE(mhfx_expansion_to_text(e, &s) == MHFX_OK);
    CHECK(take(s).find("eps") != std::string::npos);
    mhfx_expansion_free(e);
    REQUIRE(mhfx_problem_to_json(h.p, &s) == MHFX_OK);
    CHECK(parse_json_text(take(s)) == to_json(problem_from_json(parse_json_text(kGauss))));
  }
  SUBCASE("eval") {
    ProblemHandle h;
    REQUIRE(mhfx_problem_parse(kGauss, &h.p) == MHFX_OK);
    char* s = nullptr;
    REQUIRE(mhfx_eval(h.p, 2, R"({"x": "1/10"})", R"({"N": 200, "tail_tol": 1e-20})", &s) == MHFX_OK);
    Json v = parse_json_text(take(s));
    REQUIRE(v["orders"].size() == 3);
    CHECK(std::abs(std::stod(v["orders"][1]["decimal"].get<std::string>()) - 0.0057506) < 1e-6);
    REQUIRE(mhfx_eval(h.p, 0, R"({"x": "1/10"})", R"({"mode": "float", "eps": "1/1000"})", &s) ==
            MHFX_OK);
    CHECK(parse_json_text(take(s)).contains("value"));
    CHECK(mhfx_eval(h.p, 2, R"({"y": "1/10"})", nullptr, &s) != MHFX_OK);
    CHECK(std::string(mhfx_last_error()).size() > 0);
  }
  SUBCASE("zero-fold MHF evaluates to 1") {
    ProblemHandle h;
    REQUIRE(mhfx_problem_parse(R"({"mhf": {"variables": [], "numerator": [], "denominator": []}})",
                               &h.p) == MHFX_OK);
    char* s = nullptr;
    REQUIRE(mhfx_eval(h.p, 0, "{}", nullptr, &s) == MHFX_OK);
    CHECK(parse_json_text(take(s))["orders"][0]["exact"] == "1");
    REQUIRE(mhfx_annihilate(h.p, 0, nullptr, &s) == MHFX_OK);
    Json a = parse_json_text(take(s));
    CHECK(a["g"].empty());
    CHECK(a["h"].size() == 1);
  }
  SUBCASE("oracle and annihilator") {
    ProblemHandle h;
    REQUIRE(mhfx_problem_parse(kGauss, &h.p) == MHFX_OK);
    char* s = nullptr;
    REQUIRE(mhfx_oracle(h.p, 1, R"({"x": "1/10"})", R"({"N": 80})", &s) == MHFX_OK);
    CHECK(parse_json_text(take(s))["max_relative_difference"].get<double>() < 1e-6);
    REQUIRE(mhfx_annihilate(h.p, 0, R"({"eps": "1/100", "point": {"x": "1/4"}, "N": 60})", &s) ==
            MHFX_OK);
    CHECK(parse_json_text(take(s))["residual"].get<double>() < 1e-8);
    CHECK(mhfx_annihilate(h.p, 0, nullptr, &s) == MHFX_INVALID_ARGUMENT);
  }
  SUBCASE("bad input") {
    mhfx_problem* p = nullptr;
    CHECK(mhfx_problem_parse("{oops", &p) == MHFX_SCHEMA_ERROR);
    CHECK(p == nullptr);
    CHECK(mhfx_problem_load("/nonexistent/x.json", &p) != MHFX_OK);
    CHECK(mhfx_problem_parse(kGauss, nullptr) == MHFX_INVALID_ARGUMENT);
  }
  SUBCASE("verify") {
    int passed = 0;
    char* s = nullptr;
    REQUIRE(mhfx_verify("gauss-integer", nullptr, &passed, &s) == MHFX_OK);
    CHECK(passed == 1);
    Json first = parse_json_text(take(s));
    REQUIRE(mhfx_verify("gauss-integer", nullptr, &passed, &s) == MHFX_OK);
    Json second = parse_json_text(take(s));
    strip_times(first);
    strip_times(second);
    CHECK(first == second);
    CHECK(mhfx_verify("no-such-case", nullptr, &passed, &s) == MHFX_UNKNOWN_CASE);
  }
}

TEST_CASE("CLI exit codes") {
  const fs::path dir = fs::temp_directory_path() / "mhfx-cli-test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  Json fx = read_json_file(default_fixture_dir() + "/gauss-integer.json");
  fx["checks"][0]["expect"][1]["value"] = "0.0058";  // wrong in the fourth digit
  std::ofstream(dir / "gauss-integer.json") << fx.dump(2);
  std::ofstream(dir / "broken.json") << "{";

  CHECK(run("verify gauss-integer") == 0);
  CHECK(run("verify gauss-integer --fixtures " + dir.string()) == 1);
  CHECK(run("verify broken --fixtures " + dir.string()) == 2);
  CHECK(run("verify no-such-case") == 2);
  CHECK(run("eval " + (dir / "broken.json").string() + " -p x=1/10") == 2);
  CHECK(run("expand " + default_fixture_dir() + "/gauss-integer.json --order 2") == 0);
  CHECK(run("eval " + default_fixture_dir() + "/gauss-integer.json -p x=1/10 --order 1") == 0);
  CHECK(run("classify " + default_fixture_dir() + "/sunset.json") == 0);
  CHECK(run("annihilate " + default_fixture_dir() + "/gauss-half-integer.json --var x --eps 1/10") == 0);
  CHECK(run("frobnicate") == 2);
  fs::remove_all(dir);
}
