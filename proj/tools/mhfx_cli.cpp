// mhfx command-line front end. Links only the C API.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mhfx/mhfx.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kInputError = 2;

struct InputError {
  std::string msg;
};

void check(mhfx_status s) {
  if (s != MHFX_OK) throw InputError{mhfx_last_error()};
}

struct Str {
  char* p = nullptr;
  ~Str() { mhfx_string_free(p); }
  std::string get() const { return p ? p : ""; }
};

using ProblemPtr = std::unique_ptr<mhfx_problem, decltype(&mhfx_problem_free)>;

ProblemPtr load(const std::string& path) {
  mhfx_problem* p = nullptr;
  check(mhfx_problem_load(path.c_str(), &p));
  return {p, &mhfx_problem_free};
}

// "x=3/10" pairs into a point object.
std::string point_json(const std::vector<std::string>& pairs) {
  Json j = Json::object();
  for (const auto& kv : pairs) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw InputError{"bad --point '" + kv + "', expected var=value"};
    j[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return j.dump();
}

// Resolves a variable name or a numeric index against the problem.
int index_of(const mhfx_problem* p, const std::string& var) {
  Str s;
  check(mhfx_problem_to_json(p, &s.p));
  Json j = Json::parse(s.get());
  Json mhf = j.contains("sum") ? j["sum"][0]["mhf"] : j["mhf"];
  const auto& vars = mhf["variables"];
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i].get<std::string>() == var) return static_cast<int>(i);
  try {
    std::size_t used = 0;
    int i = std::stoi(var, &used);
    if (used == var.size()) return i;
  } catch (const std::exception&) {
  }
  throw InputError{"unknown variable '" + var + "'"};
}

void print_eval_text(const Json& r) {
  if (r.contains("value")) {
    const Json& v = r["value"];
    std::cout << "F(eps=" << r["eps"].get<std::string>() << ") = ";
    if (v["mode"] == "complex")
      std::cout << v["re"].get<std::string>() << " + (" << v["im"].get<std::string>() << ") i\n";
    else
      std::cout << v["decimal"].get<std::string>() << "\n";
    return;
  }
  for (const auto& v : r["orders"]) {
    std::cout << "eps^" << v["order"].get<int>() << ": ";
    if (v["mode"] == "complex")
      std::cout << v["re"].get<std::string>() << " + (" << v["im"].get<std::string>() << ") i";
    else
      std::cout << v["decimal"].get<std::string>();
    if (v.contains("exact")) std::cout << "  [" << v["exact"].get<std::string>() << "]";
    std::cout << "\n";
  }
}

void print_verify_text(const Json& r) {
  for (const auto& c : r["cases"]) {
    std::cout << (c["passed"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>() << "\n";
    for (const auto& ch : c["checks"]) {
      std::printf("  %s %s (N=%ld, %s, %.2fs)\n", ch["passed"].get<bool>() ? "ok  " : "FAIL",
                  ch["label"].get<std::string>().c_str(), ch["N"].get<long>(),
                  ch["mode"].get<std::string>().c_str(), ch["wall_time_s"].get<double>());
      for (const auto& res : ch["results"]) {
        if (res["passed"].get<bool>()) continue;
        std::cout << "       expected " << res["reference"].dump() << " got "
                  << res["computed"].dump() << " (error " << res["error"].get<double>()
                  << ", tol " << res["tol"].get<double>() << ")\n";
      }
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eps expansion of multivariable hypergeometric functions"};
  app.require_subcommand(1);

  std::string file, format = "text";
  int order = 2;
  std::vector<std::string> point;

  auto* classify = app.add_subcommand("classify", "report singular lower parameters and pole depth");
  classify->add_option("file", file, "problem or fixture JSON")->required();

  auto* expand = app.add_subcommand("expand", "symbolic eps expansion of each MHF");
  expand->add_option("file", file, "problem or fixture JSON")->required();
  expand->add_option("--order,-K", order, "highest eps order")->capture_default_str();
  expand->add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  long N = 60;
  std::string mode = "exact", eps;
  unsigned prec = 53;
  double tail = 0;
  auto* eval = app.add_subcommand("eval", "numeric eps coefficients at a point");
  eval->add_option("file", file, "problem or fixture JSON")->required();
  eval->add_option("--point,-p", point, "var=value, repeatable (values: 3/10, 0.3, 1-2e-3i)");
  eval->add_option("--order,-K", order, "highest eps order")->capture_default_str();
  eval->add_option("--trunc,-N", N, "truncation of every summation index")->capture_default_str();
  eval->add_option("--mode", mode, "exact, float or complex")
      ->check(CLI::IsMember({"exact", "float", "complex"}))
      ->capture_default_str();
  eval->add_option("--prec", prec, "float precision in bits")->capture_default_str();
  eval->add_option("--tail-tol", tail, "prune summation tails below this relative size (0: full box)");
  eval->add_option("--eps", eps, "evaluate directly at this rational eps instead of expanding");
  eval->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  double h = 1e-3;
  int extra = 6;
  unsigned digits = 80;
  auto* oracle = app.add_subcommand("oracle", "finite-difference eps fit against the symbolic coefficients");
  oracle->add_option("file", file, "single-MHF problem JSON")->required();
  oracle->add_option("--point,-p", point, "var=value, repeatable");
  oracle->add_option("--order,-K", order, "highest eps order")->capture_default_str();
  oracle->add_option("--trunc,-N", N, "truncation")->capture_default_str();
  oracle->add_option("--eps-stencil", h, "largest stencil eps")->capture_default_str();
  oracle->add_option("--extra-points", extra, "stencil points beyond the unknowns")->capture_default_str();
  oracle->add_option("--digits", digits, "working decimal digits")->capture_default_str();

  std::string var;
  bool do_check = false;
  auto* annihilate = app.add_subcommand("annihilate", "annihilating operator for one summation index");
  annihilate->add_option("file", file, "single-MHF problem JSON")->required();
  annihilate->add_option("--var", var, "variable name or index position")->required();
  annihilate->add_option("--eps", eps, "rational eps substituted into the parameters");
  annihilate->add_flag("--check", do_check, "report the truncated residual at --point");
  annihilate->add_option("--point,-p", point, "var=value, repeatable");
  annihilate->add_option("--trunc,-N", N, "truncation for --check")->capture_default_str();

  std::string case_name = "all", fixture_dir;
  auto* verify = app.add_subcommand("verify", "run shipped reference fixtures");
  verify->add_option("case", case_name, "fixture name or 'all'")->capture_default_str();
  verify->add_option("--fixtures", fixture_dir, "fixture directory");
  verify->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (*classify) {
      ProblemPtr p = load(file);
      Str s;
      check(mhfx_classify(p.get(), &s.p));
      std::cout << s.get() << "\n";
    } else if (*expand) {
      ProblemPtr p = load(file);
      mhfx_expansion* e = nullptr;
      check(mhfx_expand(p.get(), order, &e));
      std::unique_ptr<mhfx_expansion, decltype(&mhfx_expansion_free)> guard(e, &mhfx_expansion_free);
      Str s;
      check(format == "json" ? mhfx_expansion_to_json(e, &s.p) : mhfx_expansion_to_text(e, &s.p));
      std::cout << s.get() << (format == "json" ? "\n" : "");
    } else if (*eval) {
      ProblemPtr p = load(file);
      Json o{{"mode", mode}, {"N", N}, {"prec_bits", prec}, {"tail_tol", tail}};
      if (!eps.empty()) o["eps"] = eps;
      Str s;
      check(mhfx_eval(p.get(), order, point_json(point).c_str(), o.dump().c_str(), &s.p));
      if (format == "json")
        std::cout << s.get() << "\n";
      else
        print_eval_text(Json::parse(s.get()));
    } else if (*oracle) {
      ProblemPtr p = load(file);
      Json o{{"N", N}, {"h", h}, {"extra_points", extra}, {"digits", digits}};
      Str s;
      check(mhfx_oracle(p.get(), order, point_json(point).c_str(), o.dump().c_str(), &s.p));
      std::cout << s.get() << "\n";
    } else if (*annihilate) {
      ProblemPtr p = load(file);
      Json o = Json::object();
      if (!eps.empty()) o["eps"] = eps;
      if (do_check) {
        o["point"] = Json::parse(point_json(point));
        o["N"] = N;
      }
      Str s;
      check(mhfx_annihilate(p.get(), index_of(p.get(), var), o.dump().c_str(), &s.p));
      std::cout << s.get() << "\n";
    } else if (*verify) {
      int passed = 0;
      Str s;
      check(mhfx_verify(case_name.c_str(), fixture_dir.empty() ? nullptr : fixture_dir.c_str(),
                        &passed, &s.p));
      if (format == "json")
        std::cout << s.get() << "\n";
      else
        print_verify_text(Json::parse(s.get()));
      return passed ? kOk : kVerifyFailed;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.msg << "\n";
    return kInputError;
  }
  return kOk;
}
