#include "lqhv/io.hpp"

#include <fstream>
#include <sstream>

#include "lqhv/errors.hpp"

namespace lqhv::io {

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorKind::parse, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) bad(std::string("expected an object holding \"") + key + "\"");
  const auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing key \"") + key + "\"");
  return *it;
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) bad(where + ": expected a number");
  return j.get<double>();
}

std::size_t count(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    bad(where + ": expected a non-negative integer");
  return j.get<std::size_t>();
}

std::vector<std::size_t> counts(const Json& j, const std::string& where) {
  if (!j.is_array()) bad(where + ": expected an array");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(count(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<double> numbers(const Json& j, const std::string& where) {
  if (!j.is_array()) bad(where + ": expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Json cplx_json(cplx z) { return Json::array({z.real(), z.imag()}); }

cplx cplx_from(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) bad(where + ": expected [re, im]");
  return {number(j[0], where), number(j[1], where)};
}

std::vector<cplx> cplx_list(const Json& j, const std::string& where) {
  if (!j.is_array()) bad(where + ": expected an array of [re, im]");
  std::vector<cplx> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(cplx_from(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

// Wraps library validation so malformed content reports as a parse error.
template <class F>
auto checked(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::parse) throw;
    bad(what + ": " + e.what());
  }
}

}  // namespace

Json to_json(const ComplexMatrix& m) {
  Json data = Json::array();
  for (const cplx& z : m.data()) data.push_back(cplx_json(z));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

ComplexMatrix matrix_from_json(const Json& j) {
  const std::size_t r = count(field(j, "rows"), "rows");
  const std::size_t c = count(field(j, "cols"), "cols");
  auto data = cplx_list(field(j, "data"), "data");
  if (data.size() != r * c)
    bad("matrix data has " + std::to_string(data.size()) + " entries, expected " +
        std::to_string(r * c));
  return ComplexMatrix(r, c, std::move(data));
}

Json to_json(const FactorShape& s) { return Json{{"dims", s.dims}, {"mult", s.mult}}; }

FactorShape shape_from_json(const Json& j) {
  auto d = counts(field(j, "dims"), "dims");
  auto m = counts(field(j, "mult"), "mult");
  return checked("shape", [&] { return FactorShape(std::move(d), std::move(m)); });
}

Json to_json(const QuantumState& s) {
  return Json{{"dims", s.dims}, {"matrix", to_json(s.rho)}};
}

QuantumState state_from_json(const Json& j) {
  auto dims = counts(field(j, "dims"), "dims");
  if (j.contains("vector")) {
    const auto v = cplx_list(j["vector"], "vector");
    return checked("state", [&] { return make_pure_state(dims, v); });
  }
  auto m = matrix_from_json(field(j, "matrix"));
  return checked("state", [&] { return make_state(std::move(dims), std::move(m)); });
}

Json to_json(const OutcomeSpace& o) { return Json{{"values", o.values}}; }

OutcomeSpace outcomes_from_json(const Json& j) {
  const Json& v = field(j, "values");
  if (!v.is_array()) bad("values: expected an array per site");
  OutcomeSpace o;
  for (std::size_t n = 0; n < v.size(); ++n)
    o.values.push_back(numbers(v[n], "values[" + std::to_string(n) + "]"));
  return o;
}

Json to_json(const PovmFamily& p) {
  Json sites = Json::array();
  for (const auto& site : p.effects) {
    Json settings = Json::array();
    for (const auto& setting : site) {
      Json effects = Json::array();
      for (const auto& e : setting) effects.push_back(to_json(e));
      settings.push_back(std::move(effects));
    }
    sites.push_back(std::move(settings));
  }
  return sites;
}

PovmFamily povms_from_json(const Json& j) {
  if (!j.is_array()) bad("povms: expected [site][setting][outcome] nesting");
  PovmFamily p;
  for (const auto& site : j) {
    if (!site.is_array()) bad("povms: site entry is not an array");
    p.effects.emplace_back();
    for (const auto& setting : site) {
      if (!setting.is_array()) bad("povms: setting entry is not an array");
      p.effects.back().emplace_back();
      for (const auto& e : setting) p.effects.back().back().push_back(matrix_from_json(e));
    }
  }
  return p;
}

Json to_json(const Scenario& sc) {
  return Json{{"state", to_json(sc.state)}, {"povms", to_json(sc.povms)},
              {"outcomes", to_json(sc.outcomes)}};
}

Scenario scenario_from_json(const Json& j) {
  Scenario sc{state_from_json(field(j, "state")), povms_from_json(field(j, "povms")),
              outcomes_from_json(field(j, "outcomes"))};
  checked("scenario", [&] {
    validate(sc);
    return 0;
  });
  return sc;
}

Json to_json(const BellFunctional& f) {
  Json rows = Json::array();
  for (std::size_t s = 0; s < f.setting_tuples(); ++s) {
    Json row = Json::array();
    for (std::size_t k = 0; k < f.outcome_tuples(); ++k) row.push_back(f.at(s, k));
    rows.push_back(std::move(row));
  }
  return Json{{"settings", f.settings}, {"outcomes", f.outcome_sizes}, {"coeffs", std::move(rows)}};
}

BellFunctional functional_from_json(const Json& j) {
  BellFunctional f = checked("functional", [&] {
    return zero_functional(counts(field(j, "settings"), "settings"),
                           counts(field(j, "outcomes"), "outcomes"));
  });
  const Json& rows = field(j, "coeffs");
  if (!rows.is_array() || rows.size() != f.setting_tuples())
    bad("coeffs: expected one row per setting tuple (" + std::to_string(f.setting_tuples()) + ")");
  for (std::size_t s = 0; s < rows.size(); ++s) {
    const auto row = numbers(rows[s], "coeffs[" + std::to_string(s) + "]");
    if (row.size() != f.outcome_tuples())
      bad("coeffs[" + std::to_string(s) + "]: expected " + std::to_string(f.outcome_tuples()) +
          " entries");
    for (std::size_t k = 0; k < row.size(); ++k) f.at(s, k) = row[k];
  }
  return f;
}

Json to_json(const SignedMeasure& mu) {
  return Json{{"settings", mu.settings}, {"outcomes", mu.outcome_sizes}, {"weights", mu.weights}};
}

SignedMeasure measure_from_json(const Json& j) {
  SignedMeasure mu{counts(field(j, "settings"), "settings"),
                   counts(field(j, "outcomes"), "outcomes"),
                   numbers(field(j, "weights"), "weights")};
  if (mu.settings.size() != mu.outcome_sizes.size()) bad("measure: settings/outcomes length");
  std::size_t cells = 1;
  for (std::size_t n = 0; n < mu.settings.size(); ++n)
    for (std::size_t s = 0; s < mu.settings[n]; ++s) cells *= mu.outcome_sizes[n];
  if (cells != mu.weights.size()) bad("measure: weights length does not match the cell count");
  return mu;
}

Json to_json(const SourceOperator& t) {
  Json j{{"shape", to_json(t.shape)}, {"matrix", to_json(t.op)}, {"builder", to_string(t.tag)}};
  if (!t.origin.dims.empty()) j["state"] = to_json(t.origin);
  return j;
}

SourceOperator source_operator_from_json(const Json& j) {
  SourceOperator t;
  t.shape = shape_from_json(field(j, "shape"));
  t.op = matrix_from_json(field(j, "matrix"));
  t.tag = BuilderTag::custom;
  if (j.contains("builder")) {
    const auto& b = j["builder"];
    if (!b.is_string()) bad("builder: expected a string");
    for (BuilderTag tag : {BuilderTag::tau, BuilderTag::tau_tilde, BuilderTag::singlet_special,
                           BuilderTag::separable_positive, BuilderTag::custom})
      if (b.get<std::string>() == to_string(tag)) t.tag = tag;
  }
  if (j.contains("state")) t.origin = state_from_json(j["state"]);
  checked("source operator", [&] {
    if (t.op.rows() != t.shape.total_dim() || !t.op.square())
      fail(ErrorKind::shape, "matrix size differs from the shape's total dimension");
    return 0;
  });
  return t;
}

Json to_json(const BoundReport& r) {
  Json sources = Json::array();
  for (const auto& e : r.source_norm_bounds)
    sources.push_back(Json{{"builder", to_string(e.tag)},
                           {"undilated_site", e.undilated_site},
                           {"value", e.value},
                           {"exact", e.exact}});
  Json named = Json::array();
  for (const auto& v : r.state_specific) named.push_back(Json{{"label", v.label}, {"value", v.value}});
  return Json{{"dims", r.dims},
              {"settings", r.settings},
              {"xi_N", r.xi_N},
              {"theta_N", r.theta_N},
              {"theorem4_min", r.theorem4_min},
              {"theorem4_relaxed", r.theorem4_relaxed},
              {"source_norm_bounds", std::move(sources)},
              {"state_specific", std::move(named)},
              {"skipped", r.skipped},
              {"final_upper", r.final_upper}};
}

Json to_json(const CoveringBracket& b) {
  return Json{{"lower", b.lower}, {"upper", b.upper}, {"exact", b.exact}};
}

Json to_json(const PositivityVerdict& v) {
  Json j{{"status", to_string(v.status)}, {"min_found", v.min_found}};
  if (v.witness) {
    Json w = Json::array();
    for (const auto& vec : *v.witness) {
      Json one = Json::array();
      for (const cplx& z : vec) one.push_back(cplx_json(z));
      w.push_back(std::move(one));
    }
    j["witness"] = std::move(w);
    j["witness_value"] = v.witness_value;
  }
  return j;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    bad("malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_json(ss.str());
  } catch (const Error& e) {
    fail(ErrorKind::parse, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorKind::io, "write failed for " + path.string());
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace lqhv::io
