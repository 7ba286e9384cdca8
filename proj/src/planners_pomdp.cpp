#include <map>

#include "tamperlab/planners.hpp"

namespace tamperlab::planners {

namespace {

using Belief = std::vector<std::pair<StateId, Rational>>;

struct Entry {
  Rational value;
  ActionId action = 0;
};

Belief normalized(const std::map<StateId, Rational>& w) {
  Rational total = 0;
  for (const auto& [_, p] : w) total += p;
  Belief b;
  for (const auto& [s, p] : w) b.emplace_back(s, p / total);
  return b;
}

}  // namespace

// Backward induction over exact filtering beliefs.
struct PomdpPlanner::Impl {
  const EnvModel& env;
  int m;
  ObjectiveKind kind;
  std::map<Belief, std::uint32_t> ids;
  std::vector<Belief> beliefs;
  std::map<std::pair<std::uint32_t, std::uint32_t>, Entry> table;  // (k, belief)

  Impl(const EnvModel& e, int horizon, ObjectiveKind k) : env(e), m(horizon), kind(k) {}

  std::uint32_t id(const Belief& b) {
    auto [it, fresh] = ids.emplace(b, static_cast<std::uint32_t>(beliefs.size()));
    if (fresh) beliefs.push_back(b);
    return it->second;
  }

  Rational r(StateId s) const {
    return kind == ObjectiveKind::ObsReward ? env.observation_reward(s) : env.reward(s, env.aspects(s));
  }

  Belief filter(const History& h) const {
    std::map<StateId, Rational> w;
    for (const auto& [s, p] : env.initial())
      if (env.observe(s) == h.observations[0]) w[s] += p;
    for (std::size_t k = 1; k < h.t(); ++k) {
      if (w.empty()) break;
      std::map<StateId, Rational> n;
      for (const auto& [s, p] : w)
        for (const auto& [t, pt] : env.transition(s, h.actions[k - 1]))
          if (env.observe(t) == h.observations[k]) n[t] += p * pt;
      w = std::move(n);
    }
    if (w.empty()) throw PlanError("observation history is impossible from the initial distribution");
    return normalized(w);
  }

  Entry solve(int k, std::uint32_t bid) {
    auto key = std::make_pair(static_cast<std::uint32_t>(k), bid);
    auto it = table.find(key);
    if (it != table.end()) return it->second;
    const Belief b = beliefs[bid];
    Entry e;
    for (const auto& [s, p] : b) e.value += p * r(s);
    if (k < m) {
      Rational best;
      for (ActionId a = 0; a < env.num_actions(); ++a) {
        std::map<ObsId, std::map<StateId, Rational>> by_obs;
        for (const auto& [s, p] : b)
          for (const auto& [t, pt] : env.transition(s, a)) by_obs[env.observe(t)][t] += p * pt;
        Rational q = 0;
        for (const auto& [o, w] : by_obs) {
          Rational po = 0;
          for (const auto& [_, x] : w) po += x;
          q += po * solve(k + 1, id(normalized(w))).value;
        }
        if (a == 0 || q > best) {
          best = q;
          e.action = a;
        }
      }
      e.value += best;
    }
    if (table.size() + 1 > kMaxInfoStates)
      throw IntractableError(env.name() + ": more than " + std::to_string(kMaxInfoStates) + " information states");
    table.emplace(key, e);
    return e;
  }
};

PomdpPlanner::PomdpPlanner(const EnvModel& env, int m, ObjectiveKind kind) {
  if (kind != ObjectiveKind::ObsReward && kind != ObjectiveKind::ModelBasedReward)
    throw PlanError("objective " + std::string(objective_name(kind)) + " is not observation-based");
  if (!env.has_observation()) throw PlanError(env.name() + " has no observation function");
  impl_ = std::make_shared<Impl>(env, m, kind);
}

PlanResult PomdpPlanner::plan(const History& h0) {
  auto& I = *impl_;
  History h = complete_history(I.env, h0);
  const int t = static_cast<int>(h.t());
  if (t >= I.m) throw PlanError("t=" + std::to_string(t) + " leaves no decision before horizon " + std::to_string(I.m));
  if (h.actions.size() + 1 != h.t()) throw PlanError("observation-based planning needs the action history");
  Entry e = I.solve(t, I.id(I.filter(h)));
  return {e.action, e.value};
}

}  // namespace tamperlab::planners
