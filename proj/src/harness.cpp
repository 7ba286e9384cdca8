#include "tamperlab/harness.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "tamperlab/worlds.hpp"

namespace tamperlab::harness {

using nlohmann::json;
using planners::History;
using planners::Objective;
using planners::ObjectiveKind;
using planners::Policy;

namespace {

std::string join(const std::vector<std::string>& xs, std::string_view sep) {
  std::string out;
  for (const auto& x : xs) out += (out.empty() ? "" : std::string(sep)) + x;
  return out;
}

std::vector<std::string> string_list(const json& j, const char* key) {
  if (!j.is_array()) throw HarnessError(std::string("scenario field '") + key + "' must be a list of strings");
  std::vector<std::string> out;
  for (const auto& x : j) {
    if (!x.is_string()) throw HarnessError(std::string("scenario field '") + key + "' must be a list of strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

std::string string_field(const json& j, const char* key) {
  if (!j.is_string()) throw HarnessError(std::string("scenario field '") + key + "' must be a string");
  return j.get<std::string>();
}

Objective objective_for(const worlds::EnvModel& env, const ScenarioConfig& cfg, std::string_view name) {
  ObjectiveKind k = planners::parse_objective(name);
  if (k == ObjectiveKind::PartialTI) return Objective::partial_ti(cfg.frozen);
  if (k == ObjectiveKind::CounterfactualRM)
    return Objective::counterfactual(cfg.safe_policy.empty() ? planners::default_safe_policy(env)
                                                             : planners::named_policy(env, cfg.safe_policy));
  return Objective::of(k);
}

// distinct first decisions over S1, the latent value and D1
std::string first_actions(const worlds::EnvModel& env, const Policy& pi, const History& from) {
  if (!from.states.empty()) return env.action_names().at(pi.act(from));
  std::vector<std::string> seen;
  for (const auto& [s, ps] : env.initial())
    for (const auto& [l, pl] : env.latent_prior())
      for (const auto& [d, pd] : env.feedback(l, s)) {
        std::string a = env.action_names().at(pi.act(planners::start_history(env, s, d)));
        if (std::find(seen.begin(), seen.end(), a) == seen.end()) seen.push_back(a);
      }
  return join(seen, "|");
}

struct Builtin {
  std::string name;
  ScenarioConfig cfg;
};

History start_from(const worlds::EnvModel& env, const ScenarioConfig& cfg) {
  if (cfg.first_feedback.empty()) return {};
  const auto& names = env.feedback_names();
  auto it = std::find(names.begin(), names.end(), cfg.first_feedback);
  if (it == names.end() || it == names.begin())
    throw HarnessError("unknown feedback '" + cfg.first_feedback + "' for " + env.name() + " (valid: " +
                       join({names.begin() + 1, names.end()}, ", ") + ")");
  if (env.initial().size() != 1) throw HarnessError("first_feedback needs a single initial state");
  return planners::start_history(env, env.initial().front().first, static_cast<worlds::FeedbackId>(it - names.begin()));
}

ScenarioConfig make_cfg(std::string env, std::string agent, int m, std::vector<std::string> policies, bool plan,
                        std::string d1 = "") {
  ScenarioConfig c;
  c.first_feedback = std::move(d1);
  c.environment = std::move(env);
  c.agent = std::move(agent);
  c.horizon = m;
  c.policies = std::move(policies);
  c.include_plan = plan;
  return c;
}

const std::vector<Builtin>& builtins() {
  static const std::vector<Builtin> all = {
      {"advisors_naive", make_cfg("advisors", "naive_rm", 3, {"diamond", "fool_rock"}, true, "diamond")},
      {"advisors_ti_unaware", make_cfg("advisors", "ti_unaware_rm", 3, {"diamond", "fool_rock"}, true, "diamond")},
      {"modifiable_rf_dominance",
       make_cfg("modifiable_rf_mini", "standard_rl", 6, {"plan:standard_rl", "plan:ti_unaware", "stay"}, false)},
      {"belief_tamper", make_cfg("belief_tamper", "model_based", 4, {"seq:gather", "seq:tamper", "plan:obs_reward"}, true)},
      {"obs_tamper", make_cfg("obs_tamper_mini", "model_based", 6, {"plan:obs_reward", "stay"}, true)},
      {"chase", make_cfg("chase", "ti_aware", 6, {"stay", "plan:ti_unaware"}, true)},
      {"feedback_mini", make_cfg("feedback_mini", "naive_rm", 6, {"plan:uninfluenceable", "plan:counterfactual_rm"}, true)},
  };
  return all;
}

}  // namespace

ScenarioConfig parse_scenario(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw HarnessError(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw HarnessError("scenario must be a JSON object");
  static const std::set<std::string> known = {"environment", "map",  "agent", "frozen",         "safe_policy",
                                              "horizon",     "policies", "plan", "first_feedback", "csv"};
  for (const auto& [k, _] : j.items())
    if (!known.count(k)) throw HarnessError("unknown scenario field '" + k + "' (valid: " + join({known.begin(), known.end()}, ", ") + ")");
  ScenarioConfig c;
  if (j.contains("environment")) c.environment = string_field(j["environment"], "environment");
  if (j.contains("map")) c.map_path = string_field(j["map"], "map");
  if (c.environment.empty() == c.map_path.empty()) throw HarnessError("scenario needs exactly one of 'environment' and 'map'");
  if (j.contains("agent")) c.agent = string_field(j["agent"], "agent");
  if (j.contains("frozen")) c.frozen = string_list(j["frozen"], "frozen");
  if (j.contains("safe_policy")) c.safe_policy = string_field(j["safe_policy"], "safe_policy");
  if (!j.contains("horizon")) throw HarnessError("scenario needs a 'horizon'");
  if (!j["horizon"].is_number_integer()) throw HarnessError("scenario field 'horizon' must be an integer");
  c.horizon = j["horizon"].get<int>();
  if (c.horizon < 1) throw HarnessError("horizon must be positive");
  if (j.contains("policies")) c.policies = string_list(j["policies"], "policies");
  if (j.contains("plan")) {
    if (!j["plan"].is_boolean()) throw HarnessError("scenario field 'plan' must be true or false");
    c.include_plan = j["plan"].get<bool>();
  }
  if (j.contains("first_feedback")) c.first_feedback = string_field(j["first_feedback"], "first_feedback");
  if (j.contains("csv")) c.csv_path = string_field(j["csv"], "csv");
  return c;
}

std::string save_scenario(const ScenarioConfig& c) {
  json j;
  if (!c.environment.empty()) j["environment"] = c.environment;
  if (!c.map_path.empty()) j["map"] = c.map_path;
  j["agent"] = c.agent;
  if (!c.frozen.empty()) j["frozen"] = c.frozen;
  if (!c.safe_policy.empty()) j["safe_policy"] = c.safe_policy;
  j["horizon"] = c.horizon;
  j["policies"] = c.policies;
  j["plan"] = c.include_plan;
  if (!c.first_feedback.empty()) j["first_feedback"] = c.first_feedback;
  if (!c.csv_path.empty()) j["csv"] = c.csv_path;
  return j.dump(2) + "\n";
}

std::unique_ptr<worlds::EnvModel> load_environment(const ScenarioConfig& cfg) {
  if (!cfg.map_path.empty()) {
    std::string stem = std::filesystem::path(cfg.map_path).stem().string();
    return worlds::make_grid_environment(stem, read_file(cfg.map_path));
  }
  return worlds::make_environment(cfg.environment);
}

Objective make_objective(const worlds::EnvModel& env, const ScenarioConfig& cfg) {
  return objective_for(env, cfg, cfg.agent);
}

Policy resolve_policy(const worlds::EnvModel& env, int m, const ScenarioConfig& cfg, std::string_view name) {
  if (name == "plan") return resolve_policy(env, m, cfg, "plan:" + cfg.agent);
  if (name.substr(0, 5) == "plan:") {
    Policy p = planners::planner_policy(env, m, objective_for(env, cfg, name.substr(5)));
    p.name = std::string(name);
    return p;
  }
  return planners::named_policy(env, name);
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  auto env = load_environment(cfg);
  const int m = cfg.horizon;
  Objective obj = make_objective(*env, cfg);
  const History from = start_from(*env, cfg);
  ScenarioResult out{env->name(), cfg.agent, m, {}};
  std::vector<std::string> names = cfg.policies;
  if (cfg.include_plan) names.push_back("plan");
  if (names.empty()) throw HarnessError("scenario lists no policies and plan is off");
  for (const auto& name : names) {
    Policy pi = resolve_policy(*env, m, cfg, name);
    ScenarioRow row;
    row.policy = name;
    row.agent_reward = planners::exact_value(*env, pi, obj, m, from);
    row.user_utility = planners::exact_user_utility(*env, pi, m, from);
    row.first_action = first_actions(*env, pi, from);
    row.digest = planners::policy_digest(*env, pi, m);
    out.rows.push_back(std::move(row));
  }
  if (!cfg.csv_path.empty()) write_file(cfg.csv_path, to_csv(out));
  return out;
}

std::string to_csv(const ScenarioResult& r) {
  std::string out = "policy,agent_reward,user_utility,first_action\n";
  for (const auto& x : r.rows)
    out += x.policy + "," + to_fraction(x.agent_reward) + "," + to_fraction(x.user_utility) + "," + x.first_action + "\n";
  return out;
}

std::string format_result(const ScenarioResult& r) {
  std::vector<std::vector<std::string>> cells = {{"policy", "agent_reward", "", "user_utility", "", "first_action", "digest"}};
  for (const auto& x : r.rows)
    cells.push_back({x.policy, to_fraction(x.agent_reward), to_decimal(x.agent_reward), to_fraction(x.user_utility),
                     to_decimal(x.user_utility), x.first_action, x.digest});
  std::vector<std::size_t> width(cells[0].size(), 0);
  for (const auto& row : cells)
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  std::ostringstream os;
  os << "environment " << r.environment << ", agent " << r.agent << ", horizon " << r.horizon << "\n";
  for (const auto& row : cells) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::string cell = row[i];
      if (i == 2 || i == 4) cell = cell.empty() ? "" : "(" + cell + ")";
      line += cell + std::string(width[i] + (i == 2 || i == 4 ? 2 : 0) - cell.size() + 2, ' ');
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    os << line << "\n";
  }
  return os.str();
}

ScenarioResult advisors_table() {
  ScenarioResult out{"advisors", "*", 3, {}};
  for (const char* agent : {"naive_rm", "ti_unaware_rm", "counterfactual_rm", "uninfluenceable"}) {
    ScenarioConfig c = make_cfg("advisors", agent, 3, {"diamond", "fool_rock"}, false, "diamond");
    for (auto row : run_scenario(c).rows) {
      row.policy = std::string(agent) + ":" + row.policy;
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

std::vector<std::string> scenario_names() {
  std::vector<std::string> out;
  for (const auto& b : builtins()) out.push_back(b.name);
  return out;
}

ScenarioConfig builtin_scenario(std::string_view name) {
  for (const auto& b : builtins())
    if (b.name == name) return b.cfg;
  throw HarnessError("unknown scenario '" + std::string(name) + "' (valid: advisors_table, " +
                     join(scenario_names(), ", ") + ")");
}

Analysis analyze(const cid::InfluenceDiagram& d0, int agent, bool prune) {
  Analysis a;
  a.agent = agent;
  cid::InfluenceDiagram d = d0;
  if (prune) {
    auto p = cid::prune_irrelevant_information_links(d0);
    d = std::move(p.diagram);
    a.pruned = std::move(p.removed);
  }
  if (d.decisions_of(agent).empty()) throw HarnessError("diagram has no decisions for agent " + std::to_string(agent));
  for (const auto& n : d.nodes()) {
    if (n.kind != cid::NodeKind::Chance) continue;
    a.nodes.push_back(cid::classify_incentive(d, n.id, agent));
    a.tampering.push_back(cid::tampering_incentive(d, n.id, agent));
  }
  return a;
}

std::string format_analysis(const Analysis& a) {
  std::ostringstream os;
  os << "agent " << a.agent << "\n";
  for (const auto& e : a.pruned)
    os << "pruned " << e.from << " -> " << e.to << "\n";
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    const auto& r = a.nodes[i];
    os << r.node << " " << cid::to_string(r.classification) << (r.actionable ? " actionable" : "")
       << (a.tampering[i] ? " tampering" : "");
    if (!r.witness.empty()) os << " via " << join(r.witness, " -> ");
    os << "\n";
  }
  return os.str();
}

namespace {

bool has_layout(std::string_view name) {
  try {
    worlds::layout(name);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

std::string export_text(std::string_view kind, std::string_view name, std::optional<int> horizon) {
  if (kind == "dot") return cid::export_dot(cid::canonical_diagram(name, horizon.value_or(3)));
  if (kind == "map") {
    const auto envs = worlds::environment_names();
    if (std::find(envs.begin(), envs.end(), name) != envs.end() && !has_layout(name)) {
      auto env = worlds::make_environment(name);
      return env->describe(env->initial().front().first);
    }
    return std::string(worlds::layout(name).text);
  }
  if (kind == "csv") {
    if (name == "advisors_table") return to_csv(advisors_table());
    ScenarioConfig c;
    if (name.size() > 5 && name.substr(name.size() - 5) == ".json")
      c = parse_scenario(read_file(std::string(name)));
    else
      c = builtin_scenario(name);
    if (horizon) c.horizon = *horizon;
    c.csv_path.clear();
    return to_csv(run_scenario(c));
  }
  throw HarnessError("unknown export kind '" + std::string(kind) + "' (valid: dot, csv, map)");
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw HarnessError("cannot write " + path);
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw HarnessError("cannot write " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw HarnessError("cannot read " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace tamperlab::harness
