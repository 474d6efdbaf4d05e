#include <iostream>

#include "CLI11.hpp"
#include "lqhv/cli.hpp"

namespace {

// "2,2,3" style list
std::vector<std::size_t> parse_list(const std::string& s) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t next = s.find(',', pos);
    const std::string item = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    std::size_t used = 0;
    const unsigned long v = std::stoul(item, &used);
    if (used != item.size()) throw std::invalid_argument(item);
    out.push_back(v);
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using lqhv::cli::RunConfig;
  CLI::App app{"Source operators, LqHV parameters and Bell-violation bounds"};
  app.set_version_flag("--version", lqhv::cli::kVersion);
  app.require_subcommand(1);

  RunConfig cfg;
  std::string dims, settings, outcomes;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "Seed for randomized subroutines");
    sub->add_option("--out", cfg.out_path, "Write the report here instead of stdout");
    sub->add_option("--format", cfg.format, "Report format")
        ->check(CLI::IsMember({"json", "table", "csv"}));
  };

  auto* src = app.add_subcommand("source-op", "Build a source operator for a state");
  src->add_option("--state", cfg.state_path)->required()->check(CLI::ExistingFile);
  src->add_option("--settings", settings)->required();
  src->add_option("--builder", cfg.builder)->check(CLI::IsMember({"tau", "tau_tilde", "auto"}));
  src->add_option("--trials", cfg.trials, "Random trials for the defining-relation residual");
  common(src);

  auto* ver = app.add_subcommand("verify", "Positivity probe or covering bracket of an operator");
  ver->add_option("--op", cfg.op_path)->required()->check(CLI::ExistingFile);
  ver->add_option("--check", cfg.check)
      ->check(CLI::IsMember({"tensor-positivity", "covering-bracket", "defining-relation"}));
  ver->add_option("--restarts", cfg.restarts);
  ver->add_option("--trials", cfg.trials);
  common(ver);

  auto* gam = app.add_subcommand("gamma", "Exact gamma of a scenario by linear programming");
  gam->add_option("--scenario", cfg.scenario_path)->required()->check(CLI::ExistingFile);
  gam->add_option("--dual-out", cfg.dual_out, "Write the optimal functional");
  gam->add_option("--measure-out", cfg.measure_out, "Write the optimal signed measure");
  common(gam);

  auto* ups = app.add_subcommand("upsilon", "Search projective measurements for a large gamma");
  ups->add_option("--state", cfg.state_path)->required()->check(CLI::ExistingFile);
  ups->add_option("--settings", settings)->required();
  ups->add_option("--outcomes", outcomes)->required();
  ups->add_option("--budget", cfg.budget, "Number of LP evaluations");
  common(ups);

  auto* bnd = app.add_subcommand("bounds", "Analytic upper bounds on Bell violations");
  bnd->add_option("--dims", dims);
  bnd->add_option("--settings", settings)->required();
  bnd->add_option("--state", cfg.state_path)->check(CLI::ExistingFile);
  bnd->add_option("--restarts", cfg.restarts);
  common(bnd);

  auto* bel = app.add_subcommand("bell-eval", "LHV constants and quantum value of a functional");
  bel->add_option("--scenario", cfg.scenario_path)->required()->check(CLI::ExistingFile);
  bel->add_option("--functional", cfg.functional_path)->required()->check(CLI::ExistingFile);
  common(bel);

  auto* rep = app.add_subcommand("reproduce", "Recompute a reference case");
  rep->add_option("--case", cfg.case_name)
      ->required()
      ->check(CLI::IsMember(lqhv::cli::reproduce_cases()));
  rep->add_option("--restarts", cfg.restarts);
  common(rep);

  try {
    app.parse(argc, argv);
    cfg.command = app.get_subcommands().front()->get_name();
    if (!dims.empty()) cfg.dims = parse_list(dims);
    if (!settings.empty()) cfg.settings = parse_list(settings);
    if (!outcomes.empty()) cfg.outcomes = parse_list(outcomes);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : lqhv::cli::kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error (argument): bad integer list: " << e.what() << '\n';
    return lqhv::cli::kExitDomain;
  }
  return lqhv::cli::run(cfg, std::cout, std::cerr);
}
