#ifndef DECISION_GATE_COMMANDS_HPP
#define DECISION_GATE_COMMANDS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>

#include "decision_gate/simulation.hpp"

namespace dgate {

// Exit codes shared by every subcommand: 0 ship/success, 1 no-ship,
// 2 input error, 3 infeasible design.
inline constexpr int kExitShip = 0;
inline constexpr int kExitNoShip = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitInfeasible = 3;

int cmd_design(const std::string& config_path, const std::string& format, std::ostream& out,
               std::ostream& err);

int cmd_evaluate(const std::string& config_path, const std::string& results_path,
                 const std::string& format, std::ostream& out, std::ostream& err);

struct SimulateArgs {
  std::string scenario = "status_quo";
  std::string structure = "independent";
  std::string correction = "prop41";
  bool nyholt = false;
  int64_t replications = 20000;
  uint64_t seed = 0;
  int looks = 10;
  int threads = 1;
  std::string spending = "linear";
  std::string format = "table";
  std::string out_path;  // empty: stdout
  bool paper_tables = false;
  int success_count = 5;
  int guardrail_count = 5;
  int deterioration_count = 2;
  int quality_count = 2;
  double alpha = 0.05;
  double alpha_minus = 0.05;
  double beta = 0.2;
};

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);

}  // namespace dgate

#endif
