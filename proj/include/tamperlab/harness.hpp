#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tamperlab/cid.hpp"
#include "tamperlab/planners.hpp"
#include "tamperlab/rational.hpp"

namespace tamperlab::harness {

class HarnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One scenario document.
// {"environment": "advisors" | "map": "path.txt", "agent": "naive_rm", "horizon": 3,
//  "policies": ["diamond", "plan:ti_unaware"], "frozen": [...], "safe_policy": "diamond",
//  "plan": true, "first_feedback": "diamond", "csv": "out.csv"}
struct ScenarioConfig {
  std::string environment;
  std::string map_path;
  std::string agent = "standard_rl";
  std::vector<std::string> frozen;
  std::string safe_policy;  // empty: default safe policy of the environment
  int horizon = 0;
  std::vector<std::string> policies;  // named policies, or plan:<objective>
  bool include_plan = true;           // adds the agent's own planner as the last row
  std::string first_feedback;         // condition on S_1 and this D_1 instead of the prior
  std::string csv_path;
};

ScenarioConfig parse_scenario(std::string_view json_text);
std::string save_scenario(const ScenarioConfig& cfg);

struct ScenarioRow {
  std::string policy;
  Rational agent_reward;
  Rational user_utility;
  std::string first_action;  // distinct first actions over the initial branches, '|' separated
  std::string digest;
};

struct ScenarioResult {
  std::string environment;
  std::string agent;
  int horizon = 0;
  std::vector<ScenarioRow> rows;
};

std::unique_ptr<worlds::EnvModel> load_environment(const ScenarioConfig& cfg);
planners::Objective make_objective(const worlds::EnvModel& env, const ScenarioConfig& cfg);
planners::Policy resolve_policy(const worlds::EnvModel& env, int m, const ScenarioConfig& cfg, std::string_view name);

// Writes cfg.csv_path when set.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

// header: policy,agent_reward,user_utility,first_action
std::string to_csv(const ScenarioResult& r);
std::string format_result(const ScenarioResult& r);

// Four reward-modeling agents against the two named advisors policies.
ScenarioResult advisors_table();

std::vector<std::string> scenario_names();
ScenarioConfig builtin_scenario(std::string_view name);

// ---- claims ----

struct ClaimCheck {
  std::string id;
  std::string check;  // what is run
  std::optional<bool> graphical;
  std::optional<bool> behavioral;
  std::string detail;
  bool pass() const { return graphical.value_or(true) && behavioral.value_or(true); }
};

std::vector<std::string> claim_ids();
std::vector<ClaimCheck> verify_claims();
std::string format_claims(const std::vector<ClaimCheck>& checks);

// ---- diagrams ----

struct Analysis {
  int agent = 0;
  std::vector<cid::Edge> pruned;  // empty unless pruning was requested
  std::vector<cid::IncentiveReport> nodes;
  std::vector<bool> tampering;  // parallel to nodes
};

// Every chance node of d (after pruning when asked), classified for `agent`.
Analysis analyze(const cid::InfluenceDiagram& d, int agent, bool prune);
std::string format_analysis(const Analysis& a);

// ---- export ----

// kind: dot <diagram> [horizon], csv <scenario | advisors_table>, map <layout>
std::string export_text(std::string_view kind, std::string_view name, std::optional<int> horizon = std::nullopt);
void write_file(const std::string& path, std::string_view content);
std::string read_file(const std::string& path);

}  // namespace tamperlab::harness
