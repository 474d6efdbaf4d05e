#include "lqhv/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "lqhv/bounds.hpp"
#include "lqhv/errors.hpp"
#include "lqhv/io.hpp"
#include "lqhv/lqhv.hpp"
#include "lqhv/norms_positivity.hpp"
#include "lqhv/source_ops.hpp"

namespace lqhv::cli {

using io::Json;

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"source-op", "gamma",  "upsilon",  "bounds",
                                          "bell-eval", "verify", "reproduce"};
  return c;
}

const std::vector<std::string>& reproduce_cases() {
  static const std::vector<std::string> c{"singlet-sqrt3", "chsh-gamma", "swap-covering",
                                          "corollary3"};
  return c;
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorKind::argument, what);
}

Json tolerances(const RunConfig& c) {
  return Json{{"hermitian", kHermitianTol},   {"positive", kPositiveTol},
              {"refute", kRefuteTol},         {"lhv", kLhvTol},
              {"null_marginal", kNullMarginal}, {"dimension_cap", dimension_cap()},
              {"lp_variable_cap", kLpVariableCap}, {"restarts", c.restarts}};
}

Json source_op(const RunConfig& c) {
  require(!c.state_path.empty(), "source-op: --state is required");
  const QuantumState st = io::state_from_json(io::read_json_file(c.state_path));
  require(!c.settings.empty(), "source-op: --settings is required");
  std::vector<SourceOperator> cands;
  if (c.builder == "tau" || c.builder == "auto") cands.push_back(build_tau(st, c.settings));
  if (c.builder == "tau_tilde" || (c.builder == "auto" && c.settings[0] == 1))
    cands.push_back(build_tau_tilde(st, c.settings));
  require(!cands.empty(), "source-op: unknown builder '" + c.builder + "'");
  std::size_t best = 0;
  std::vector<double> norms;
  for (const auto& t : cands) norms.push_back(trace_norm(t.op));
  for (std::size_t i = 1; i < cands.size(); ++i)
    if (norms[i] < norms[best]) best = i;
  Json j = io::to_json(cands[best]);
  j["trace_norm"] = norms[best];
  j["defining_residual"] = verify_defining_relation(cands[best], c.trials, c.seed);
  return j;
}

SourceOperator load_operator(const std::string& path) {
  Json j = io::read_json_file(path);
  // accept a full report as well as a bare operator
  if (j.contains("result")) j = j["result"];
  return io::source_operator_from_json(j);
}

Json verify(const RunConfig& c) {
  require(!c.op_path.empty(), "verify: --op is required");
  const SourceOperator t = load_operator(c.op_path);
  Json j{{"check", c.check}, {"shape", io::to_json(t.shape)}};
  if (c.check == "tensor-positivity") {
    j["verdict"] = io::to_json(probe_tensor_positivity(t.op, t.shape, c.restarts, c.seed));
  } else if (c.check == "covering-bracket") {
    j["bracket"] = io::to_json(covering_bracket(t.op, t.shape, c.restarts, c.seed));
    j["trace_norm"] = trace_norm(t.op);
  } else if (c.check == "defining-relation") {
    require(!t.origin.dims.empty(), "verify: defining-relation needs the operator's state");
    j["residual"] = verify_defining_relation(t, c.trials, c.seed);
  } else {
    fail(ErrorKind::argument, "verify: unknown check '" + c.check + "'");
  }
  return j;
}

Json gamma_json(const Scenario& sc, const GammaResult& g) {
  std::size_t cells = 1;
  const auto s = sc.settings();
  const auto k = sc.outcomes.sizes();
  for (std::size_t n = 0; n < s.size(); ++n)
    for (std::size_t i = 0; i < s[n]; ++i) cells *= k[n];
  const std::size_t rows = product(s) * product(k);
  Json j{{"gamma", g.gamma},
         {"lhv", g.lhv},
         {"lp_variables", 2 * cells},
         {"lp_constraints", rows},
         {"simplex_iterations", g.iterations},
         {"total_variation", g.optimal_measure.total_variation()},
         {"negative_mass", g.optimal_measure.negative_mass()},
         {"max_marginal_deviation", max_marginal_deviation(g.optimal_measure, sc)}};
  const BellFunctional f = extract_optimal_functional(g);
  j["dual_b_abs"] = lhv_constants(f).b_abs;
  j["dual_ratio"] = violation_ratio(sc, f);
  return j;
}

Json gamma(const RunConfig& c) {
  require(!c.scenario_path.empty(), "gamma: --scenario is required");
  const Scenario sc = io::scenario_from_json(io::read_json_file(c.scenario_path));
  const GammaResult g = compute_gamma(sc);
  if (!c.dual_out.empty())
    io::write_text_file(c.dual_out, io::dump(io::to_json(extract_optimal_functional(g))));
  if (!c.measure_out.empty())
    io::write_text_file(c.measure_out, io::dump(io::to_json(g.optimal_measure)));
  return gamma_json(sc, g);
}

Json upsilon(const RunConfig& c) {
  require(!c.state_path.empty(), "upsilon: --state is required");
  const QuantumState st = io::state_from_json(io::read_json_file(c.state_path));
  const UpsilonEstimate e = estimate_upsilon(st, c.settings, c.outcomes, c.budget, c.seed);
  return Json{{"best_gamma", e.best_gamma},
              {"evaluations", e.evaluations},
              {"budget", c.budget},
              {"best_povms", io::to_json(e.best_povms)}};
}

Json bounds(const RunConfig& c) {
  require(!c.settings.empty(), "bounds: --settings is required");
  if (!c.state_path.empty()) {
    const QuantumState st = io::state_from_json(io::read_json_file(c.state_path));
    require(c.dims.empty() || c.dims == st.dims, "bounds: --dims disagrees with the state");
    return io::to_json(state_bound(st, c.settings, std::min<std::size_t>(c.restarts, 16), c.seed));
  }
  require(!c.dims.empty(), "bounds: --dims or --state is required");
  return io::to_json(theorem4_bound(c.dims, c.settings));
}

Json bell_eval(const RunConfig& c) {
  require(!c.scenario_path.empty() && !c.functional_path.empty(),
          "bell-eval: --scenario and --functional are required");
  const Scenario sc = io::scenario_from_json(io::read_json_file(c.scenario_path));
  const BellFunctional f = io::functional_from_json(io::read_json_file(c.functional_path));
  if (f.settings != sc.settings() || f.outcome_sizes != sc.outcomes.sizes())
    fail(ErrorKind::shape, "bell-eval: functional shape differs from the scenario");
  const LhvConstants lc = lhv_constants(f);
  Json j{{"b_inf", lc.b_inf}, {"b_sup", lc.b_sup}, {"b_abs", lc.b_abs},
         {"quantum_value", quantum_value(sc, f)}};
  j["ratio"] = lc.b_abs > 0 ? Json(violation_ratio(sc, f)) : Json(nullptr);
  return j;
}

Json reproduce(const RunConfig& c) {
  const double pi = 3.14159265358979323846;
  if (c.case_name == "singlet-sqrt3") {
    const SourceOperator t = build_singlet_special();
    auto ev = eigenvalues_hermitian(t.op);
    std::sort(ev.begin(), ev.end());
    return Json{{"case", c.case_name},
                {"trace_norm", trace_norm(t.op)},
                {"expected", std::sqrt(3.0)},
                {"eigenvalues", ev},
                {"defining_residual", verify_defining_relation(t, c.trials, c.seed)}};
  }
  if (c.case_name == "chsh-gamma") {
    const Scenario sc =
        qubit_scenario(make_singlet(), {{{0, 0}, {pi / 2, 0}}, {{pi / 4, 0}, {-pi / 4, 0}}});
    Json j = gamma_json(sc, compute_gamma(sc));
    j["case"] = c.case_name;
    j["expected"] = std::sqrt(2.0);
    j["chsh_ratio"] = violation_ratio(sc, chsh_functional());
    return j;
  }
  if (c.case_name == "swap-covering") {
    Json rows = Json::array();
    for (std::size_t d = 2; d <= 4; ++d) {
      ComplexMatrix v(d * d, d * d);
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) v(a * d + b, b * d + a) = 1.0;
      const auto br = covering_bracket(v, FactorShape::sites({d, d}), c.restarts, c.seed);
      rows.push_back(Json{{"d", d}, {"lower", br.lower}, {"upper", br.upper}});
    }
    return Json{{"case", c.case_name}, {"swap", std::move(rows)}};
  }
  if (c.case_name == "corollary3") {
    Json rows = Json::array();
    for (std::size_t s = 1; s <= 5; ++s)
      for (std::size_t d = 1; d <= 5; ++d) {
        const std::vector<std::size_t> d2{d, d}, s2{s, s}, d3{d, d, d}, s3{s, s, s};
        rows.push_back(Json{{"S", s}, {"d", d},
                            {"N2", theorem4_bound(d2, s2).final_upper},
                            {"N3", theorem4_bound(d3, s3).final_upper}});
      }
    return Json{{"case", c.case_name}, {"bounds", std::move(rows)}};
  }
  fail(ErrorKind::argument, "reproduce: unknown case '" + c.case_name + "'");
}

Json dispatch(const RunConfig& c) {
  if (c.command == "source-op") return source_op(c);
  if (c.command == "verify") return verify(c);
  if (c.command == "gamma") return gamma(c);
  if (c.command == "upsilon") return upsilon(c);
  if (c.command == "bounds") return bounds(c);
  if (c.command == "bell-eval") return bell_eval(c);
  if (c.command == "reproduce") return reproduce(c);
  fail(ErrorKind::argument, "unknown command '" + c.command + "'");
}

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    std::ostringstream ss;
    ss << std::setprecision(17) << v.get<double>();
    return ss.str();
  }
  return v.dump();
}

void flatten(const Json& j, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), rows);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i)
      flatten(j[i], prefix + "[" + std::to_string(i) + "]", rows);
  } else {
    rows.emplace_back(prefix, scalar_text(j));
  }
}

std::string render(const Json& report, const std::string& format) {
  if (format == "json") return io::dump(report);
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(report, "", rows);
  std::ostringstream ss;
  if (format == "csv") {
    ss << "key,value\n";
    for (const auto& [k, v] : rows) ss << k << ',' << v << '\n';
  } else if (format == "table") {
    std::size_t w = 0;
    for (const auto& r : rows) w = std::max(w, r.first.size());
    for (const auto& [k, v] : rows) ss << std::left << std::setw(static_cast<int>(w + 2)) << k << v << '\n';
  } else {
    fail(ErrorKind::argument, "unknown output format '" + format + "'");
  }
  return ss.str();
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    Json report{{"command", config.command},
                {"version", kVersion},
                {"seed", config.seed},
                {"tolerances", tolerances(config)}};
    report["result"] = dispatch(config);
    const std::string text = render(report, config.format);
    if (config.out_path.empty()) out << text;
    else io::write_text_file(config.out_path, text);
    return kExitOk;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return e.kind() == ErrorKind::io || e.kind() == ErrorKind::parse ? kExitIo : kExitDomain;
  } catch (const std::exception& e) {
    err << "error (internal): " << e.what() << '\n';
    return kExitDomain;
  }
}

}  // namespace lqhv::cli
