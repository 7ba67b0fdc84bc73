#include "mhfx/serialize.hpp"

#include <fstream>
#include <sstream>

#include "mhfx/error.hpp"

namespace mhfx {

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& what) {
  fail(ErrorCode::SchemaError, path + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) schema(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema(path, std::string("missing field '") + key + "'");
  return *it;
}

Rational rational_from_json(const Json& j, const std::string& path) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  schema(path, "expected a rational as a string or an integer");
}

int int_from_json(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) schema(path, "expected an integer");
  return j.get<int>();
}

std::vector<PochFactor> factors_from_json(const Json& j, const std::string& path, int r) {
  if (!j.is_array()) schema(path, "expected an array of factors");
  std::vector<PochFactor> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    PochFactor f;
    f.param = eps_linear_from_json(field(j[i], "param", p), p + ".param");
    const Json& form = field(j[i], "form", p);
    if (!form.is_array()) schema(p + ".form", "expected an integer array");
    for (std::size_t k = 0; k < form.size(); ++k)
      f.form.push_back(int_from_json(form[k], p + ".form[" + std::to_string(k) + "]"));
    if (static_cast<int>(f.form.size()) != r)
      schema(p + ".form", "length " + std::to_string(f.form.size()) + " differs from the " +
                              std::to_string(r) + " variables");
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

Json to_json(const EpsLinear& p) { return {{"b0", to_string(p.b0)}, {"b1", to_string(p.b1)}}; }

Json to_json(const EpsSeries& s) {
  Json c = Json::array();
  for (const auto& q : s.coefficients()) c.push_back(to_string(q));
  return {{"min_order", s.min_order()}, {"coeffs", c}, {"truncation", s.truncation()}};
}

Json to_json(const MHF& m) {
  Json j;
  j["variables"] = m.variables;
  bool unit = true;
  for (const auto& s : m.scales) unit = unit && s == 1;
  if (!unit) {
    Json sc = Json::array();
    for (const auto& s : m.scales) sc.push_back(to_string(s));
    j["scales"] = sc;
  }
  for (Side s : {Side::Numerator, Side::Denominator}) {
    Json arr = Json::array();
    for (const auto& f : m.side(s)) arr.push_back({{"param", to_json(f.param)}, {"form", f.form}});
    j[s == Side::Numerator ? "numerator" : "denominator"] = arr;
  }
  return j;
}

Json to_json(const Term& t) {
  Json mono = Json::object();
  for (const auto& [v, e] : t.monomial) mono[v] = e;
  return {{"coeff", to_json(t.coeff)}, {"monomial", mono}, {"mhf", to_json(t.mhf)}};
}

Json to_json(const EpsExpansion& e) {
  Json orders = Json::array();
  for (const auto& [k, terms] : e.orders) {
    Json ts = Json::array();
    for (const auto& t : terms) ts.push_back(to_json(t));
    orders.push_back({{"order", k}, {"terms", ts}});
  }
  return {{"truncation", e.truncation}, {"orders", orders}};
}

Json to_json(const StepDownOperator& h) {
  Json arr = Json::array();
  for (const auto& [mono, c] : h.terms) {
    Json th = Json::object();
    for (const auto& [v, e] : mono) th[v] = e;
    arr.push_back({{"theta_exponents", th}, {"coeff", to_json(c)}});
  }
  return arr;
}

Json to_json(const PrefactorSpec& s) {
  Json j;
  j["constant"] = {{"re", to_string(s.re)}, {"im", to_string(s.im)}};
  j["eps_power"] = s.eps_power;
  Json pw = Json::array();
  for (const auto& p : s.powers) {
    Json base;
    if (p.var.empty())
      base = {{"re", p.value.real()}, {"im", p.value.imag()}};
    else
      base = p.var;
    pw.push_back({{"base", base}, {"exponent", to_json(p.exponent)}});
  }
  j["powers"] = pw;
  Json gm = Json::array();
  for (const auto& g : s.gammas) gm.push_back({{"arg", to_json(g.arg)}, {"power", g.power}});
  j["gammas"] = gm;
  return j;
}

Json to_json(const Problem& p) {
  Json arr = Json::array();
  for (const auto& t : p.terms)
    arr.push_back({{"prefactor", to_json(t.prefactor)}, {"mhf", to_json(t.mhf)}});
  return {{"sum", arr}};
}

Json to_json(const Number& n, int digits) {
  switch (n.mode) {
    case Mode::Exact:
      return {{"mode", "exact"}, {"exact", to_string(n.exact)}, {"decimal", n.str(digits)}};
    case Mode::Float:
      return {{"mode", "float"}, {"decimal", n.str(digits)}};
    case Mode::Complex: {
      char re[40], im[40];
      std::snprintf(re, sizeof re, "%.17e", n.cplx.real());
      std::snprintf(im, sizeof im, "%.17e", n.cplx.imag());
      return {{"mode", "complex"}, {"re", re}, {"im", im}};
    }
  }
  return nullptr;
}

EpsLinear eps_linear_from_json(const Json& j, const std::string& path) {
  if (j.is_array()) {
    if (j.size() != 2) schema(path, "expected [b0, b1]");
    return {rational_from_json(j[0], path + "[0]"), rational_from_json(j[1], path + "[1]")};
  }
  if (j.is_object()) {
    Rational b1 = j.contains("b1") ? rational_from_json(j["b1"], path + ".b1") : Rational(0);
    return {rational_from_json(field(j, "b0", path), path + ".b0"), b1};
  }
  return {rational_from_json(j, path), 0};
}

EpsSeries eps_series_from_json(const Json& j, const std::string& path) {
  if (j.is_string() || j.is_number_integer())
    return EpsSeries::constant(rational_from_json(j, path), 1);
  const int lo = int_from_json(field(j, "min_order", path), path + ".min_order");
  const int t = int_from_json(field(j, "truncation", path), path + ".truncation");
  const Json& c = field(j, "coeffs", path);
  if (!c.is_array()) schema(path + ".coeffs", "expected an array");
  std::vector<Rational> cs;
  for (std::size_t i = 0; i < c.size(); ++i)
    cs.push_back(rational_from_json(c[i], path + ".coeffs[" + std::to_string(i) + "]"));
  return EpsSeries::from_coefficients(lo, std::move(cs), t);
}

MHF mhf_from_json(const Json& j, const std::string& path) {
  MHF m;
  const Json& vars = field(j, "variables", path);
  if (!vars.is_array()) schema(path + ".variables", "expected an array of names");
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (!vars[i].is_string() || vars[i].get<std::string>().empty())
      schema(path + ".variables[" + std::to_string(i) + "]", "expected a variable name");
    m.variables.push_back(vars[i].get<std::string>());
    m.scales.push_back(1);
  }
  const int r = m.folds();
  if (j.contains("scales")) {
    const Json& sc = j["scales"];
    if (!sc.is_array() || static_cast<int>(sc.size()) != r)
      schema(path + ".scales", "expected one scale per variable");
    for (int i = 0; i < r; ++i)
      m.scales[static_cast<std::size_t>(i)] =
          rational_from_json(sc[static_cast<std::size_t>(i)], path + ".scales");
  }
  if (j.contains("numerator")) m.numerator = factors_from_json(j["numerator"], path + ".numerator", r);
  if (j.contains("denominator"))
    m.denominator = factors_from_json(j["denominator"], path + ".denominator", r);
  try {
    return canonical_form(m);
  } catch (const Error& e) {
    fail(ErrorCode::NormalizationError, path + ": " + e.what());
  }
}

Term term_from_json(const Json& j, const std::string& path) {
  Term t;
  t.coeff = j.contains("coeff") ? eps_series_from_json(j["coeff"], path + ".coeff")
                                : EpsSeries::constant(1, 1);
  if (j.contains("monomial")) {
    const Json& mono = j["monomial"];
    if (!mono.is_object()) schema(path + ".monomial", "expected an object");
    for (auto it = mono.begin(); it != mono.end(); ++it)
      t.monomial[it.key()] = int_from_json(it.value(), path + ".monomial." + it.key());
  }
  t.mhf = mhf_from_json(field(j, "mhf", path), path + ".mhf");
  return t;
}

EpsExpansion expansion_from_json(const Json& j, const std::string& path) {
  EpsExpansion e;
  e.truncation = int_from_json(field(j, "truncation", path), path + ".truncation");
  const Json& orders = field(j, "orders", path);
  for (std::size_t i = 0; i < orders.size(); ++i) {
    const std::string p = path + ".orders[" + std::to_string(i) + "]";
    int k = int_from_json(field(orders[i], "order", p), p + ".order");
    const Json& ts = field(orders[i], "terms", p);
    for (std::size_t t = 0; t < ts.size(); ++t)
      e.orders[k].push_back(term_from_json(ts[t], p + ".terms[" + std::to_string(t) + "]"));
  }
  return e;
}

PrefactorSpec prefactor_from_json(const Json& j, const std::string& path) {
  PrefactorSpec s;
  if (!j.is_object()) schema(path, "expected an object");
  if (j.contains("constant")) {
    const Json& c = j["constant"];
    if (c.is_object()) {
      s.re = c.contains("re") ? rational_from_json(c["re"], path + ".constant.re") : Rational(0);
      s.im = c.contains("im") ? rational_from_json(c["im"], path + ".constant.im") : Rational(0);
    } else {
      s.re = rational_from_json(c, path + ".constant");
    }
  }
  if (j.contains("eps_power")) s.eps_power = int_from_json(j["eps_power"], path + ".eps_power");
  if (j.contains("powers"))
    for (std::size_t i = 0; i < j["powers"].size(); ++i) {
      const std::string p = path + ".powers[" + std::to_string(i) + "]";
      const Json& pj = j["powers"][i];
      PowerFactor pf;
      const Json& base = field(pj, "base", p);
      if (base.is_string()) {
        pf.var = base.get<std::string>();
      } else if (base.is_object()) {
        pf.value = {base.value("re", 0.0), base.value("im", 0.0)};
      } else {
        schema(p + ".base", "expected a variable name or {re, im}");
      }
      pf.exponent = eps_linear_from_json(field(pj, "exponent", p), p + ".exponent");
      s.powers.push_back(pf);
    }
  if (j.contains("gammas"))
    for (std::size_t i = 0; i < j["gammas"].size(); ++i) {
      const std::string p = path + ".gammas[" + std::to_string(i) + "]";
      const Json& gj = j["gammas"][i];
      GammaFactor g;
      g.arg = eps_linear_from_json(field(gj, "arg", p), p + ".arg");
      g.power = gj.contains("power") ? int_from_json(gj["power"], p + ".power") : 1;
      s.gammas.push_back(g);
    }
  return s;
}

Problem problem_from_json(const Json& j, const std::string& path) {
  Problem p;
  if (j.contains("mhf")) {
    ProblemTerm t;
    if (j.contains("prefactor")) t.prefactor = prefactor_from_json(j["prefactor"], path + ".prefactor");
    t.mhf = mhf_from_json(j["mhf"], path + ".mhf");
    p.terms.push_back(std::move(t));
    return p;
  }
  const Json& sum = field(j, "sum", path);
  if (!sum.is_array() || sum.empty()) schema(path + ".sum", "expected a nonempty array");
  for (std::size_t i = 0; i < sum.size(); ++i) {
    const std::string q = path + ".sum[" + std::to_string(i) + "]";
    ProblemTerm t;
    if (sum[i].contains("prefactor"))
      t.prefactor = prefactor_from_json(sum[i]["prefactor"], q + ".prefactor");
    t.mhf = mhf_from_json(field(sum[i], "mhf", q), q + ".mhf");
    p.terms.push_back(std::move(t));
  }
  return p;
}

EvalPoint point_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) schema(path, "expected an object of variable values");
  EvalPoint p;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_string() && !it.value().is_number_integer())
      schema(path + "." + it.key(), "expected a value string");
    std::string text =
        it.value().is_string() ? it.value().get<std::string>() : std::to_string(it.value().get<long>());
    p.values[it.key()] = parse_point_value(text);
  }
  return p;
}

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::SchemaError, std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InvalidArgument, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::SchemaError, path + ": malformed JSON: " + e.what());
  }
}

}  // namespace mhfx
