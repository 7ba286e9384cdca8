#pragma once

#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "tamperlab/planners.hpp"
#include "tamperlab/worlds.hpp"

namespace oracle {

using namespace tamperlab;
using namespace tamperlab::planners;
using tamperlab::worlds::GridState;
using tamperlab::worlds::GridWorld;

// What a brute-force policy may condition on.
enum class KeyKind { Markov, StatesFeedback, ObsActions };

inline std::vector<int> info_key(KeyKind kind, const History& h) {
  std::vector<int> k{static_cast<int>(h.t())};
  switch (kind) {
    case KeyKind::Markov:
      k.push_back(static_cast<int>(h.states.back()));
      break;
    case KeyKind::StatesFeedback:
      for (auto s : h.states) k.push_back(static_cast<int>(s));
      k.push_back(-1);
      for (auto d : h.feedback) k.push_back(static_cast<int>(d));
      break;
    case KeyKind::ObsActions:
      for (auto o : h.observations) k.push_back(static_cast<int>(o));
      k.push_back(-1);
      for (auto a : h.actions) k.push_back(static_cast<int>(a));
      break;
  }
  return k;
}

struct NeedDecision {
  std::vector<int> key;
};

using Table = std::map<std::vector<int>, ActionId>;

// Enumerates every deterministic policy over the decision points the evaluation
// actually reaches. eval runs the policy to completion; visit gets each total
// table with its result. Throws once more than `limit` policies were produced.
template <class R>
std::size_t for_each_policy(const EnvModel& env, KeyKind kind, const std::function<R(const Policy&)>& eval,
                            const std::function<void(const Table&, const R&)>& visit, std::size_t limit = 10000) {
  Table table;
  std::size_t count = 0;
  Policy pi{"brute", [&](const History& h) {
              auto key = info_key(kind, h);
              auto it = table.find(key);
              if (it == table.end()) throw NeedDecision{key};
              return it->second;
            }};
  std::function<void()> rec = [&] {
    try {
      R r = eval(pi);
      if (++count > limit) throw std::runtime_error("too many policies");
      visit(table, r);
    } catch (const NeedDecision& nd) {
      for (ActionId a = 0; a < env.num_actions(); ++a) {
        table[nd.key] = a;
        rec();
      }
      table.erase(nd.key);
    }
  };
  rec();
  return count;
}

struct BruteMax {
  Rational best;
  std::size_t policies = 0;
};

inline BruteMax brute_max(const EnvModel& env, KeyKind kind, const Objective& obj, int m, const History& from,
                          std::size_t limit = 10000) {
  BruteMax out;
  bool first = true;
  out.policies = for_each_policy<Rational>(
      env, kind, [&](const Policy& p) { return exact_value(env, p, obj, m, from); },
      [&](const Table&, const Rational& v) {
        if (first || v > out.best) out.best = v;
        first = false;
      },
      limit);
  return out;
}

inline KeyKind key_kind_for(const EnvModel& env, ObjectiveKind k) {
  switch (k) {
    case ObjectiveKind::ObsReward:
    case ObjectiveKind::ModelBasedReward:
      return KeyKind::ObsActions;
    case ObjectiveKind::NaiveRM:
    case ObjectiveKind::TIUnawareRM:
    case ObjectiveKind::Uninfluenceable:
    case ObjectiveKind::CounterfactualRM:
      return KeyKind::StatesFeedback;
    case ObjectiveKind::StandardRL:
      return env.has_feedback() ? KeyKind::StatesFeedback : KeyKind::Markov;
    default:
      return KeyKind::Markov;
  }
}

// Every (t, s) reachable within m steps, with one concrete state path leading there.
inline std::map<std::pair<int, StateId>, std::vector<StateId>> reachable_paths(const EnvModel& env, int m) {
  std::map<std::pair<int, StateId>, std::vector<StateId>> out;
  std::vector<StateId> frontier;
  for (const auto& [s, p] : env.initial()) {
    out[{1, s}] = {s};
    frontier.push_back(s);
  }
  for (int t = 1; t < m; ++t) {
    std::vector<StateId> next;
    for (StateId s : frontier) {
      for (ActionId a = 0; a < env.num_actions(); ++a)
        for (const auto& [n, p] : env.transition(s, a)) {
          if (out.count({t + 1, n})) continue;
          auto path = out[{t, s}];
          path.push_back(n);
          out[{t + 1, n}] = path;
          next.push_back(n);
        }
    }
    frontier = next;
  }
  return out;
}

inline History history_along(const EnvModel& env, const std::vector<StateId>& path) {
  History h;
  h.states = path;
  for (std::size_t k = 1; k < path.size(); ++k) {
    ActionId pick = 0;
    for (ActionId a = env.num_actions(); a-- > 0;)
      for (const auto& [n, p] : env.transition(path[k - 1], a))
        if (n == path[k]) pick = a;
    h.actions.push_back(pick);
  }
  return complete_history(env, h);
}

// Optimal finite-horizon values and first actions by plain value iteration.
struct ViResult {
  std::vector<std::vector<Rational>> value;   // [k][s], k = 1..m
  std::vector<std::vector<ActionId>> action;  // [k][s], k = 1..m-1
};

inline ViResult value_iteration(const EnvModel& env, int m, const std::function<Rational(StateId)>& r) {
  std::size_t n = env.num_states();
  ViResult out;
  out.value.assign(m + 1, std::vector<Rational>(n));
  out.action.assign(m + 1, std::vector<ActionId>(n, 0));
  for (StateId s = 0; s < n; ++s) out.value[m][s] = r(s);
  for (int k = m - 1; k >= 1; --k) {
    for (StateId s = 0; s < n; ++s) {
      Rational best;
      ActionId arg = 0;
      for (ActionId a = 0; a < env.num_actions(); ++a) {
        Rational q = 0;
        for (const auto& [t, p] : env.transition(s, a)) q += p * out.value[k + 1][t];
        if (a == 0 || q > best) {
          best = q;
          arg = a;
        }
      }
      out.value[k][s] = r(s) + best;
      out.action[k][s] = arg;
    }
  }
  return out;
}

// Same map with the parameter tiles painted over, thetas fixed.
inline std::string strip_theta_tiles(std::string text) {
  for (char& c : text)
    if (c == 'P' || c == 'Q') c = '.';
  return text;
}

}  // namespace oracle
