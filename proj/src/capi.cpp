#include "mhfx/mhfx.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>

#include "mhfx/error.hpp"
#include "mhfx/serialize.hpp"
#include "mhfx/verify.hpp"

struct mhfx_problem {
  mhfx::Problem p;
};

struct mhfx_expansion {
  struct Entry {
    mhfx::PrefactorSpec prefactor;
    mhfx::MHF mhf;
    mhfx::EpsExpansion e;
  };
  std::vector<Entry> entries;
};

namespace {

using mhfx::Json;

thread_local std::string last_error;

mhfx_status status_of(mhfx::ErrorCode c) {
  return static_cast<mhfx_status>(static_cast<int>(c) + 1);
}

template <class F>
mhfx_status guard(F&& f) {
  try {
    f();
    last_error.clear();
    return MHFX_OK;
  } catch (const mhfx::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const nlohmann::json::exception& e) {
    last_error = std::string("SchemaError: ") + e.what();
    return MHFX_SCHEMA_ERROR;
  } catch (const std::exception& e) {
    last_error = e.what();
    return MHFX_INTERNAL_ERROR;
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void need(const void* p, const char* what) {
  if (!p) mhfx::fail(mhfx::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

Json options_json(const char* text) {
  if (!text || !*text) return Json::object();
  Json j = mhfx::parse_json_text(text);
  if (!j.is_object()) mhfx::fail(mhfx::ErrorCode::SchemaError, "options: expected an object");
  return j;
}

mhfx::Rational rational_opt(const Json& j, const char* key) {
  const Json& v = j[key];
  if (v.is_number_integer()) return v.get<long>();
  if (v.is_string()) return mhfx::parse_rational(v.get<std::string>());
  mhfx::fail(mhfx::ErrorCode::SchemaError, std::string("options.") + key + ": expected a rational");
}

mhfx::EvalOptions eval_options(const Json& j) {
  mhfx::EvalOptions o;
  const std::string mode = j.value("mode", std::string("exact"));
  if (mode == "exact") o.mode = mhfx::Mode::Exact;
  else if (mode == "float") o.mode = mhfx::Mode::Float;
  else if (mode == "complex") o.mode = mhfx::Mode::Complex;
  else mhfx::fail(mhfx::ErrorCode::InvalidArgument, "unknown mode '" + mode + "'");
  o.N = j.value("N", 60L);
  o.prec_bits = j.value("prec_bits", 53u);
  o.tail_tol = j.value("tail_tol", 0.0);
  if (j.contains("eps")) o.eps = rational_opt(j, "eps");
  if (o.N < 0) mhfx::fail(mhfx::ErrorCode::InvalidArgument, "N must be nonnegative");
  return o;
}

mhfx::EvalPoint point_of(const char* text) {
  if (!text || !*text) return {};
  return mhfx::point_from_json(mhfx::parse_json_text(text), "point");
}

const mhfx::MHF& single_mhf(const mhfx_problem* p) {
  if (p->p.terms.size() != 1 || !p->p.terms[0].prefactor.is_rational() ||
      p->p.terms[0].prefactor.eps_power != 0 || p->p.terms[0].prefactor.re != 1)
    mhfx::fail(mhfx::ErrorCode::InvalidArgument,
               "this operation needs a single MHF without a prefactor");
  return p->p.terms[0].mhf;
}

int pole_depth_of(const mhfx::MHF& m) {
  if (mhfx::classify_singular(m).taylor) return 0;
  return mhfx::pole_depth(mhfx::build_secondary(m).chains);
}

Json theta_poly_json(const mhfx::ThetaPoly& tp) {
  Json arr = Json::array();
  for (const auto& [exps, c] : tp)
    arr.push_back({{"theta", exps}, {"coeff", mhfx::to_string(c)}});
  return arr;
}

std::string prefactor_text(const mhfx::PrefactorSpec& s) {
  std::string out = "(" + mhfx::to_string(s.re);
  if (s.im != 0) out += " + " + mhfx::to_string(s.im) + " i";
  out += ")";
  if (s.eps_power) out += " eps^" + std::to_string(s.eps_power);
  for (const auto& pw : s.powers) {
    std::string base = pw.var;
    if (base.empty())
      base = "(" + std::to_string(pw.value.real()) + "+" + std::to_string(pw.value.imag()) + "i)";
    out += " " + base + "^(" + mhfx::to_string(pw.exponent) + ")";
  }
  for (const auto& g : s.gammas) {
    out += " Gamma(" + mhfx::to_string(g.arg) + ")";
    if (g.power != 1) out += "^" + std::to_string(g.power);
  }
  return out;
}

}  // namespace

extern "C" {

const char* mhfx_status_name(mhfx_status s) {
  if (s == MHFX_OK) return "Ok";
  if (s == MHFX_INTERNAL_ERROR) return "InternalError";
  if (s > MHFX_OK && s < MHFX_INTERNAL_ERROR)
    return mhfx::error_code_name(static_cast<mhfx::ErrorCode>(static_cast<int>(s) - 1));
  return "Unknown";
}

const char* mhfx_last_error(void) { return last_error.c_str(); }

void mhfx_string_free(char* s) { std::free(s); }

mhfx_status mhfx_problem_parse(const char* json, mhfx_problem** out) {
  return guard([&] {
    need(json, "json");
    need(out, "out");
    *out = nullptr;
    auto* p = new mhfx_problem{mhfx::problem_from_json(mhfx::parse_json_text(json))};
    *out = p;
  });
}

mhfx_status mhfx_problem_load(const char* path, mhfx_problem** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    Json j = mhfx::read_json_file(path);
    // A fixture file carries the problem under "problem".
    if (j.is_object() && j.contains("problem") && j.contains("checks")) j = j["problem"];
    *out = new mhfx_problem{mhfx::problem_from_json(j)};
  });
}

void mhfx_problem_free(mhfx_problem* p) { delete p; }

mhfx_status mhfx_problem_to_json(const mhfx_problem* p, char** out) {
  return guard([&] {
    need(p, "problem");
    need(out, "out");
    *out = dup(mhfx::to_json(p->p).dump(2));
  });
}

mhfx_status mhfx_classify(const mhfx_problem* p, char** out) {
  return guard([&] {
    need(p, "problem");
    need(out, "out");
    Json terms = Json::array();
    for (const auto& t : p->p.terms) {
      mhfx::Classification c = mhfx::classify_singular(t.mhf);
      Json sing = Json::array();
      for (std::size_t i : c.singular)
        sing.push_back({{"position", i}, {"param", mhfx::to_json(t.mhf.denominator[i].param)}});
      terms.push_back({{"mhf", mhfx::to_string(t.mhf)},
                       {"taylor", c.taylor},
                       {"singular", sing},
                       {"pole_depth", pole_depth_of(t.mhf)},
                       {"prefactor_pole_bound", t.prefactor.pole_depth()}});
    }
    *out = dup(Json{{"terms", terms}}.dump(2));
  });
}

mhfx_status mhfx_expand(const mhfx_problem* p, int order, mhfx_expansion** out) {
  return guard([&] {
    need(p, "problem");
    need(out, "out");
    *out = nullptr;
    auto* e = new mhfx_expansion;
    try {
      for (const auto& t : p->p.terms)
        e->entries.push_back({t.prefactor, t.mhf, mhfx::laurent_expand(t.mhf, order)});
    } catch (...) {
      delete e;
      throw;
    }
    *out = e;
  });
}

void mhfx_expansion_free(mhfx_expansion* e) { delete e; }

mhfx_status mhfx_expansion_to_json(const mhfx_expansion* e, char** out) {
  return guard([&] {
    need(e, "expansion");
    need(out, "out");
    Json terms = Json::array();
    for (const auto& en : e->entries)
      terms.push_back({{"prefactor", mhfx::to_json(en.prefactor)},
                       {"mhf", mhfx::to_json(en.mhf)},
                       {"expansion", mhfx::to_json(en.e)}});
    *out = dup(Json{{"terms", terms}}.dump(2));
  });
}

mhfx_status mhfx_expansion_to_text(const mhfx_expansion* e, char** out) {
  return guard([&] {
    need(e, "expansion");
    need(out, "out");
    std::string s;
    for (std::size_t i = 0; i < e->entries.size(); ++i) {
      const auto& en = e->entries[i];
      if (e->entries.size() > 1) s += "# term " + std::to_string(i + 1) + "\n";
      if (!(en.prefactor.is_rational() && en.prefactor.re == 1 && en.prefactor.eps_power == 0))
        s += "prefactor: " + prefactor_text(en.prefactor) + "\n";
      s += mhfx::to_string(en.mhf) + "\n";
      s += mhfx::to_string(en.e);
      if (!s.empty() && s.back() != '\n') s += "\n";
    }
    *out = dup(s);
  });
}

mhfx_status mhfx_eval(const mhfx_problem* p, int order, const char* point_json,
                      const char* options, char** out) {
  return guard([&] {
    need(p, "problem");
    need(out, "out");
    const Json oj = options_json(options);
    mhfx::EvalOptions o = eval_options(oj);
    const mhfx::EvalPoint pt = point_of(point_json);
    Json r;
    if (o.eps) {
      r["eps"] = mhfx::to_string(*o.eps);
      r["value"] = mhfx::to_json(mhfx::eval_problem_direct(p->p, pt, o));
    } else {
      mhfx::ProblemExpansion e = mhfx::expand_problem(p->p, pt, order);
      Json orders = Json::array();
      for (const auto& [k, n] : mhfx::eval_problem(e, pt, o)) {
        Json v = mhfx::to_json(n);
        v["order"] = k;
        orders.push_back(std::move(v));
      }
      r["orders"] = std::move(orders);
    }
    r["N"] = o.N;
    *out = dup(r.dump(2));
  });
}

mhfx_status mhfx_oracle(const mhfx_problem* p, int order, const char* point_json,
                        const char* options, char** out) {
  return guard([&] {
    need(p, "problem");
    need(out, "out");
    const mhfx::MHF& m = single_mhf(p);
    const Json oj = options_json(options);
    const mhfx::EvalPoint pt = point_of(point_json);
    mhfx::OracleOptions oo;
    oo.h = oj.value("h", oo.h);
    oo.extra_points = oj.value("extra_points", oo.extra_points);
    oo.digits10 = oj.value("digits", oo.digits10);
    const long N = oj.value("N", 60L);
    const int depth = pole_depth_of(m);
    std::map<int, mhfx::BigFloat> fit = mhfx::fd_oracle(m, pt, N, order, depth, oo);

    mhfx::PrecisionScope scope(oo.digits10);
    mhfx::EvalOptions eo;
    eo.mode = mhfx::Mode::Float;
    eo.prec_bits = 4 * oo.digits10;
    eo.N = N;
    std::map<int, mhfx::Number> sym = mhfx::eval_expansion(mhfx::laurent_expand(m, order), pt, eo);
    // a vanishing coefficient is measured against the largest one
    mhfx::BigFloat floor = 0;
    for (const auto& [k, v] : sym) floor = std::max(floor, mhfx::BigFloat(abs(v.real)));
    floor = std::max(floor, mhfx::BigFloat(1e-30));
    Json rows = Json::array();
    double worst = 0;
    for (const auto& [k, v] : fit) {
      Json row{{"order", k}, {"oracle", v.str(20, std::ios_base::scientific)}};
      auto it = sym.find(k);
      mhfx::BigFloat s = it == sym.end() ? mhfx::BigFloat(0) : it->second.real;
      row["symbolic"] = s.str(20, std::ios_base::scientific);
      mhfx::BigFloat d = abs(v - s);
      mhfx::BigFloat as = abs(s);
      mhfx::BigFloat scale = as == 0 ? floor : as;
      const double rel = mhfx::BigFloat(d / scale).convert_to<double>();
      row["relative_difference"] = rel;
      worst = std::max(worst, rel);
      rows.push_back(std::move(row));
    }
    *out = dup(Json{{"pole_depth", depth}, {"N", N}, {"h", oo.h}, {"orders", rows},
                    {"max_relative_difference", worst}}
                   .dump(2));
  });
}

mhfx_status mhfx_annihilate(const mhfx_problem* p, int index, const char* options, char** out) {
  return guard([&] {
    need(p, "problem");
    need(out, "out");
    const mhfx::MHF& m = single_mhf(p);
    if (index < 0 || (index >= m.folds() && !(m.folds() == 0 && index == 0)))
      mhfx::fail(mhfx::ErrorCode::InvalidArgument,
                 "index " + std::to_string(index) + " out of range for a " +
                     std::to_string(m.folds()) + "-fold series");
    const Json oj = options_json(options);
    std::optional<mhfx::Rational> eps;
    if (oj.contains("eps")) eps = rational_opt(oj, "eps");
    mhfx::Annihilator a = mhfx::build_annihilator(m, index, eps);
    Json r{{"index", index},
           {"variable", m.folds() ? m.variables[index] : ""},
           {"g", theta_poly_json(a.g)},
           {"h", theta_poly_json(a.h)}};
    if (oj.contains("point")) {
      const mhfx::EvalPoint pt = mhfx::point_from_json(oj["point"], "options.point");
      const long N = oj.value("N", 60L);
      mhfx::MHF at = m;
      if (eps)
        for (auto* side : {&at.numerator, &at.denominator})
          for (auto& f : *side) f.param = {f.param.b0 + f.param.b1 * *eps, 0};
      r["N"] = N;
      r["residual"] = mhfx::annihilator_residual(at, a, pt, N);
    }
    *out = dup(r.dump(2));
  });
}

mhfx_status mhfx_verify(const char* name, const char* fixture_dir, int* passed, char** out) {
  return guard([&] {
    need(out, "out");
    const std::string dir = fixture_dir ? fixture_dir : mhfx::default_fixture_dir();
    mhfx::VerifyOutcome v = mhfx::run_verify(name ? name : "all", dir);
    if (passed) *passed = v.passed ? 1 : 0;
    *out = dup(v.report.dump(2));
  });
}

}  // extern "C"
