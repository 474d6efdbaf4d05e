#pragma once

// Command pipelines behind the lqhv_cli executable.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lqhv::cli {

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  std::string command;  // source-op, gamma, upsilon, bounds, bell-eval, verify, reproduce
  std::string state_path;
  std::string scenario_path;
  std::string functional_path;
  std::string op_path;
  std::string out_path;
  std::string dual_out;
  std::string measure_out;
  std::vector<std::size_t> dims;
  std::vector<std::size_t> settings;
  std::vector<std::size_t> outcomes;
  std::string builder = "auto";          // tau, tau_tilde, auto
  std::string check = "covering-bracket";  // tensor-positivity, covering-bracket, defining-relation
  std::string case_name;
  std::size_t restarts = 64;
  std::size_t budget = 2000;
  std::size_t trials = 20;
  std::uint64_t seed = 0;
  std::string format = "json";  // json, table, csv
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitIo = 2;

const std::vector<std::string>& commands();
const std::vector<std::string>& reproduce_cases();

// Runs one command. The report goes to `out` (or to out_path), diagnostics
// to `err`. Returns 0, 1 on domain errors, 2 on I/O and parse errors.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace lqhv::cli
