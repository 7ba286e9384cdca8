#include <cstdio>
#include <deque>
#include <map>
#include <sstream>

#include "json.hpp"
#include "tamperlab/planners.hpp"
#include "tamperlab/worlds.hpp"

namespace tamperlab::planners {

namespace {

using worlds::ChaseEnv;
using worlds::AdvisorsEnv;
using worlds::GridMap;
using worlds::GridWorld;
using worlds::Item;
using worlds::Terrain;

constexpr int kDr[] = {-1, 1, 0, 0};
constexpr int kDc[] = {0, 0, -1, 1};

// First step of a shortest path to the nearest expert tile, walls and items block.
ActionId toward_expert(const GridWorld& w, const History& h) {
  auto g = w.state(h.states.back());
  const GridMap& map = w.map();
  if (map.terrain[g.agent] == Terrain::Expert) return GridWorld::Stay;
  std::vector<int> first(map.rows * map.cols, -1);
  std::deque<int> todo;
  first[g.agent] = GridWorld::Stay;
  todo.push_back(g.agent);
  while (!todo.empty()) {
    int c = todo.front();
    todo.pop_front();
    for (int a = 0; a < 4; ++a) {
      int r = c / map.cols + kDr[a], col = c % map.cols + kDc[a];
      if (!map.in_bounds(r, col)) continue;
      int n = map.cell(r, col);
      if (first[n] != -1 || map.terrain[n] == Terrain::Wall || g.items[n] != Item::None) continue;
      first[n] = c == g.agent ? a : first[c];
      if (map.terrain[n] == Terrain::Expert) return static_cast<ActionId>(first[n]);
      todo.push_back(n);
    }
  }
  return GridWorld::Stay;
}

bool is_advisors(const EnvModel& env) { return dynamic_cast<const AdvisorsEnv*>(&env) != nullptr; }

bool has_expert_tile(const EnvModel& env) {
  auto* w = dynamic_cast<const GridWorld*>(&env);
  return w && w->map().has(Terrain::Expert);
}

bool can_stay(const EnvModel& env) {
  return dynamic_cast<const GridWorld*>(&env) || dynamic_cast<const ChaseEnv*>(&env);
}

void collect(const EnvModel& env, const Policy& pi, int m, std::map<std::vector<int>, nlohmann::json>& out) {
  std::size_t nodes = 0;
  std::function<void(History&, LatentId)> rec = [&](History& h, LatentId l) {
    if (++nodes > kMaxTreeNodes) throw IntractableError("policy tabulation exceeds the node budget");
    if (static_cast<int>(h.t()) >= m) return;
    ActionId a = pi.act(h);
    if (a >= env.num_actions()) throw PlanError("partial policy '" + pi.name + "'");
    std::vector<int> key{static_cast<int>(h.t())};
    key.insert(key.end(), h.states.begin(), h.states.end());
    key.push_back(-1);
    key.insert(key.end(), h.feedback.begin(), h.feedback.end());
    if (!out.count(key)) {
      nlohmann::json fb = nlohmann::json::array();
      for (FeedbackId d : h.feedback) fb.push_back(env.feedback_names().at(d));
      out[key] = {{"t", h.t()}, {"states", h.states}, {"feedback", fb}, {"action", env.action_names()[a]}};
    }
    h.actions.push_back(a);
    for (const auto& [s, ps] : env.transition(h.states.back(), a)) {
      h.states.push_back(s);
      h.observations.push_back(env.observe(s));
      for (const auto& [d, pd] : env.feedback(l, s)) {
        h.feedback.push_back(d);
        rec(h, l);
        h.feedback.pop_back();
      }
      h.observations.pop_back();
      h.states.pop_back();
    }
    h.actions.pop_back();
  };
  for (const auto& [s, ps] : env.initial())
    for (const auto& [l, pl] : env.latent_prior())
      for (const auto& [d, pd] : env.feedback(l, s)) {
        History h = start_history(env, s, d);
        rec(h, l);
      }
}

}  // namespace

std::vector<std::string> policy_names(const EnvModel& env) {
  std::vector<std::string> out;
  if (is_advisors(env)) out = {"diamond", "fool_rock"};
  if (can_stay(env)) out.push_back("stay");
  if (has_expert_tile(env)) out.push_back("visit_expert");
  out.push_back("seq:<action>,...");
  return out;
}

Policy named_policy(const EnvModel& env, std::string_view name) {
  if (name.substr(0, 4) == "seq:") {
    std::vector<ActionId> acts;
    std::stringstream ss{std::string(name.substr(4))};
    std::string item;
    while (std::getline(ss, item, ',')) acts.push_back(env.action_id(item));
    if (acts.empty()) throw EnvError("policy '" + std::string(name) + "' lists no actions");
    return Policy{std::string(name), [acts](const History& h) { return acts[std::min(h.t(), acts.size()) - 1]; }};
  }
  if (is_advisors(env) && name == "diamond")
    return Policy{"diamond", [](const History&) { return ActionId{AdvisorsEnv::GatherDiamond}; }};
  if (is_advisors(env) && name == "fool_rock")
    return Policy{"fool_rock", [](const History& h) {
                    return ActionId{h.t() == 1 ? AdvisorsEnv::AskFool : AdvisorsEnv::GatherRock};
                  }};
  if (can_stay(env) && name == "stay") return Policy{"stay", [](const History&) { return ActionId{4}; }};
  if (has_expert_tile(env) && name == "visit_expert") {
    const auto* w = dynamic_cast<const GridWorld*>(&env);
    return Policy{"visit_expert", [w](const History& h) { return toward_expert(*w, h); }};
  }
  std::string valid;
  for (const auto& n : policy_names(env)) valid += (valid.empty() ? "" : ", ") + n;
  throw EnvError("unknown policy '" + std::string(name) + "' for " + env.name() + " (valid: " + valid + ")");
}

Policy default_safe_policy(const EnvModel& env) {
  if (is_advisors(env)) return named_policy(env, "diamond");
  if (has_expert_tile(env)) return named_policy(env, "visit_expert");
  if (can_stay(env)) return named_policy(env, "stay");
  return named_policy(env, "seq:" + env.action_names().front());
}

std::string tabulate_policy(const EnvModel& env, const Policy& pi, int m) {
  std::map<std::vector<int>, nlohmann::json> rows;
  collect(env, pi, m, rows);
  nlohmann::json out;
  out["policy"] = pi.name;
  out["environment"] = env.name();
  out["horizon"] = m;
  out["decisions"] = nlohmann::json::array();
  for (auto& [_, row] : rows) out["decisions"].push_back(std::move(row));
  return out.dump();
}

std::string policy_digest(const EnvModel& env, const Policy& pi, int m) {
  // the name is not part of the behavior
  Policy anon{"", pi.act};
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : tabulate_policy(env, anon, m)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace tamperlab::planners
