#include "mhfx/verify.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <set>

#include "mhfx/error.hpp"

#ifndef MHFX_FIXTURE_DIR
#define MHFX_FIXTURE_DIR "fixtures"
#endif

namespace mhfx {

namespace {

namespace fs = std::filesystem;

[[noreturn]] void schema(const std::string& path, const std::string& what) {
  fail(ErrorCode::SchemaError, path + ": " + what);
}

const Json& need(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) schema(path, std::string("missing field '") + key + "'");
  return j[key];
}

Mode parse_mode(const std::string& s, const std::string& path) {
  if (s == "exact") return Mode::Exact;
  if (s == "float") return Mode::Float;
  if (s == "complex") return Mode::Complex;
  schema(path, "unknown mode '" + s + "'");
}

Rational rational_field(const Json& j, const std::string& path) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  schema(path, "expected a rational");
}

struct RefValue {
  bool is_complex = false;
  BigFloat re, im;
};

BigFloat decimal(const Json& j, const std::string& path) {
  if (!j.is_string()) schema(path, "expected a decimal string");
  try {
    return BigFloat(j.get<std::string>());
  } catch (const std::exception&) {
    schema(path, "malformed decimal '" + j.get<std::string>() + "'");
  }
}

RefValue parse_ref(const Json& j, const std::string& path) {
  RefValue r;
  if (j.is_string()) {
    r.re = decimal(j, path);
    r.im = 0;
  } else if (j.is_object()) {
    r.is_complex = true;
    r.re = decimal(need(j, "re", path), path + ".re");
    r.im = decimal(need(j, "im", path), path + ".im");
  } else {
    schema(path, "expected a decimal string or {re, im}");
  }
  return r;
}

struct Value {
  bool is_complex = false;
  bool exact_zero = false;
  BigFloat re, im;
};

Value value_of(const Number& n) {
  Value v;
  switch (n.mode) {
    case Mode::Exact:
      v.re = big_from_rational(n.exact);
      v.im = 0;
      v.exact_zero = n.exact == 0;
      break;
    case Mode::Float:
      v.re = n.real;
      v.im = 0;
      v.exact_zero = n.real == 0;
      break;
    case Mode::Complex:
      v.is_complex = true;
      v.re = n.cplx.real();
      v.im = n.cplx.imag();
      v.exact_zero = n.cplx == Complex{};
      break;
  }
  return v;
}

Json value_json(const Value& v) {
  if (v.is_complex) return {{"re", v.re.str(20, std::ios_base::scientific)},
                            {"im", v.im.str(20, std::ios_base::scientific)}};
  return v.re.str(25, std::ios_base::scientific);
}

struct Comparison {
  double error = 0;
  bool passed = false;
};

// tol_kind: "absolute" (per component for complex values), "relative", or
// "exact" (the computed value must be exactly zero).
Comparison compare(const Value& got, const RefValue& ref, double tol, const std::string& kind,
                   const std::string& path) {
  Comparison c;
  if (kind == "exact") {
    c.passed = got.exact_zero;
    c.error = got.exact_zero ? 0.0 : BigFloat(std::max(BigFloat(abs(got.re)), BigFloat(abs(got.im)))).convert_to<double>();
    return c;
  }
  BigFloat dre = abs(got.re - ref.re), dim = abs(got.im - ref.im);
  if (kind == "absolute") {
    c.error = BigFloat(std::max(dre, dim)).convert_to<double>();
  } else if (kind == "relative") {
    BigFloat scale = sqrt(ref.re * ref.re + ref.im * ref.im);
    BigFloat d = sqrt(dre * dre + dim * dim);
    c.error = (scale == 0 ? d : BigFloat(d / scale)).convert_to<double>();
  } else {
    schema(path, "unknown tol_kind '" + kind + "'");
  }
  c.passed = c.error <= tol;
  return c;
}

EvalOptions options_of(const Json& check, const std::string& path) {
  EvalOptions o;
  o.mode = parse_mode(check.value("mode", std::string("exact")), path + ".mode");
  o.N = check.value("N", 60L);
  o.prec_bits = check.value("prec_bits", 53u);
  o.tail_tol = check.value("tail_tol", 0.0);
  if (check.contains("eps")) o.eps = rational_field(check["eps"], path + ".eps");
  return o;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Json run_check(const Problem& problem, int order, const Json& check, const std::string& path,
               bool& passed) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string kind = check.value("kind", std::string("orders"));
  EvalOptions o = options_of(check, path);
  const EvalPoint pt = point_from_json(need(check, "point", path), path + ".point");
  const Json& expect = need(check, "expect", path);
  if (!expect.is_array() || expect.empty()) schema(path + ".expect", "expected a nonempty array");

  PrecisionScope scope(50);
  Json results = Json::array();
  bool ok = true;

  auto record = [&](const Json& e, const std::string& epath, const Value& got, Json extra) {
    const std::string tk = e.value("tol_kind", std::string("absolute"));
    const double tol = e.value("tol", 0.0);
    RefValue ref = parse_ref(need(e, "value", epath), epath + ".value");
    Comparison c = compare(got, ref, tol, tk, epath);
    extra["computed"] = value_json(got);
    extra["reference"] = e["value"];
    extra["tol"] = tol;
    extra["tol_kind"] = tk;
    extra["error"] = c.error;
    extra["passed"] = c.passed;
    ok = ok && c.passed;
    results.push_back(std::move(extra));
  };

  if (kind == "direct") {
    if (!o.eps) schema(path, "a direct check needs 'eps'");
    Number n = eval_problem_direct(problem, pt, o);
    for (std::size_t i = 0; i < expect.size(); ++i)
      record(expect[i], path + ".expect[" + std::to_string(i) + "]", value_of(n), Json::object());
  } else if (kind == "orders" || kind == "eps_sum") {
    const int K = check.value("order", order);
    ProblemExpansion e = expand_problem(problem, pt, K);
    std::set<int> wanted;
    if (kind == "orders")
      for (std::size_t i = 0; i < expect.size(); ++i)
        wanted.insert(need(expect[i], "order", path + ".expect[" + std::to_string(i) + "]").get<int>());
    if (!wanted.empty()) {
      for (auto it = e.orders.begin(); it != e.orders.end();)
        it = wanted.count(it->first) ? std::next(it) : e.orders.erase(it);
      e.min_order = std::min(e.min_order, *wanted.begin());
      e.truncation = std::min(e.truncation, *wanted.rbegin() + 1);
    }
    std::optional<Rational> eps = o.eps;
    o.eps.reset();
    std::map<int, Number> vals = eval_problem(e, pt, o);
    // scale_eps: reference values are C_k eps^k rather than C_k
    std::optional<BigFloat> scale;
    if (check.contains("scale_eps"))
      scale = big_from_rational(rational_field(check["scale_eps"], path + ".scale_eps"));
    if (kind == "orders") {
      for (std::size_t i = 0; i < expect.size(); ++i) {
        const std::string ep = path + ".expect[" + std::to_string(i) + "]";
        const int k = expect[i]["order"].get<int>();
        Value v;
        auto it = vals.find(k);
        if (it == vals.end()) {
          v.re = 0;
          v.im = 0;
          v.exact_zero = true;
        } else {
          v = value_of(it->second);
        }
        if (scale) {
          BigFloat s = pow(*scale, k);
          v.re *= s;
          v.im *= s;
        }
        record(expect[i], ep, v, {{"order", k}});
      }
    } else {
      if (!eps) schema(path, "an eps_sum check needs 'eps'");
      const BigFloat ev = big_from_rational(*eps);
      Value sum;
      sum.re = 0;
      sum.im = 0;
      for (const auto& [k, n] : vals) {
        Value v = value_of(n);
        BigFloat s = pow(ev, k);
        sum.re += v.re * s;
        sum.im += v.im * s;
        sum.is_complex = sum.is_complex || v.is_complex;
      }
      sum.exact_zero = sum.re == 0 && sum.im == 0;
      for (std::size_t i = 0; i < expect.size(); ++i)
        record(expect[i], path + ".expect[" + std::to_string(i) + "]", sum,
               {{"orders", std::to_string(e.min_order) + ".." + std::to_string(e.truncation - 1)}});
    }
  } else {
    schema(path + ".kind", "unknown check kind '" + kind + "'");
  }

  const double wall = seconds_since(t0);
  Json out;
  out["label"] = check.value("label", std::string());
  out["kind"] = kind;
  out["N"] = o.N;
  out["mode"] = mode_name(o.mode);
  if (o.mode == Mode::Float) out["prec_bits"] = o.prec_bits;
  if (o.tail_tol > 0) out["tail_tol"] = o.tail_tol;
  out["source"] = check.value("source", std::string());
  out["wall_time_s"] = wall;
  if (check.contains("max_seconds")) {
    const double limit = check["max_seconds"].get<double>();
    out["max_seconds"] = limit;
    if (wall > limit) ok = false;
  }
  out["passed"] = ok;
  out["results"] = std::move(results);
  passed = passed && ok;
  return out;
}

}  // namespace

std::string default_fixture_dir() { return MHFX_FIXTURE_DIR; }

std::vector<std::string> list_fixtures(const std::string& dir) {
  std::vector<std::string> out;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      out.push_back(entry.path().stem().string());
  if (ec) fail(ErrorCode::InvalidArgument, "cannot list fixture directory " + dir);
  std::sort(out.begin(), out.end());
  return out;
}

VerifyOutcome verify_fixture(const Json& fx) {
  VerifyOutcome v;
  const std::string name = need(fx, "name", "$").get<std::string>();
  const Problem problem = problem_from_json(need(fx, "problem", "$"), "$.problem");
  const int order = need(fx, "order", "$").get<int>();
  const Json& checks = need(fx, "checks", "$");
  const auto t0 = std::chrono::steady_clock::now();
  Json cs = Json::array();
  for (std::size_t i = 0; i < checks.size(); ++i)
    cs.push_back(run_check(problem, order, checks[i], "$.checks[" + std::to_string(i) + "]",
                           v.passed));
  v.report["name"] = name;
  if (fx.contains("title")) v.report["title"] = fx["title"];
  v.report["passed"] = v.passed;
  v.report["wall_time_s"] = seconds_since(t0);
  v.report["checks"] = std::move(cs);
  return v;
}

VerifyOutcome run_verify(const std::string& name, const std::string& dir) {
  std::vector<std::string> names = list_fixtures(dir);
  if (name != "all") {
    if (std::find(names.begin(), names.end(), name) == names.end())
      fail(ErrorCode::UnknownCase, "no fixture named '" + name + "' in " + dir);
    names = {name};
  }
  VerifyOutcome out;
  Json cases = Json::array();
  for (const auto& n : names) {
    VerifyOutcome one = verify_fixture(read_json_file((fs::path(dir) / (n + ".json")).string()));
    out.passed = out.passed && one.passed;
    cases.push_back(std::move(one.report));
  }
  out.report["passed"] = out.passed;
  out.report["cases"] = std::move(cases);
  return out;
}

}  // namespace mhfx
