#include <map>

#include "tamperlab/planners.hpp"

namespace tamperlab::planners {

namespace {

bool is_rm(ObjectiveKind k) {
  return k == ObjectiveKind::NaiveRM || k == ObjectiveKind::TIUnawareRM || k == ObjectiveKind::Uninfluenceable ||
         k == ObjectiveKind::CounterfactualRM;
}

bool is_pomdp(ObjectiveKind k) { return k == ObjectiveKind::ObsReward || k == ObjectiveKind::ModelBasedReward; }

// Solver instances for one (env, m, objective), created on first use.
class Solver {
 public:
  Solver(const EnvModel& env, int m, Objective obj) : env_(env), m_(m), obj_(std::move(obj)) {
    if (m < 2) throw PlanError("horizon must be at least 2");
    if (obj_.kind == ObjectiveKind::PartialTI) frozen_ = env.aspect_indices(obj_.frozen);
    if (obj_.kind == ObjectiveKind::CounterfactualRM && !obj_.safe)
      throw PlanError("counterfactual planning needs a safe policy");
    if (uses_rm()) {
      auto k = obj_.kind == ObjectiveKind::StandardRL ? ObjectiveKind::NaiveRM : obj_.kind;
      rm_.emplace(env, m, k, obj_.safe);
    } else if (is_pomdp(obj_.kind)) {
      pomdp_.emplace(env, m, obj_.kind);
    } else {
      mdp_.emplace(env, m);
    }
  }

  bool uses_rm() const { return is_rm(obj_.kind) || (obj_.kind == ObjectiveKind::StandardRL && env_.has_feedback()); }

  // what the decision may depend on
  std::vector<int> key(const History& h) const {
    std::vector<int> k{static_cast<int>(h.t())};
    if (uses_rm()) {
      k.insert(k.end(), h.states.begin(), h.states.end());
      k.push_back(-1);
      k.insert(k.end(), h.feedback.begin(), h.feedback.end());
    } else if (pomdp_) {
      k.insert(k.end(), h.observations.begin(), h.observations.end());
      k.push_back(-1);
      k.insert(k.end(), h.actions.begin(), h.actions.end());
    } else {
      k.push_back(static_cast<int>(h.states.back()));
    }
    return k;
  }

  PlanResult plan(const History& h0) {
    History h = complete_history(env_, h0);
    if (rm_) return rm_->plan(h);
    if (pomdp_) return pomdp_->plan(h);
    const int t = static_cast<int>(h.t());
    const StateId s = h.states.back();
    switch (obj_.kind) {
      case ObjectiveKind::StandardRL:
        return mdp_->standard(t, s);
      case ObjectiveKind::TIAware:
        return mdp_->partial(t, s, {}, env_.aspects(s));
      case ObjectiveKind::TIUnaware:
        return mdp_->frozen(t, s, env_.aspects(s));
      case ObjectiveKind::PartialTI:
        return mdp_->partial(t, s, frozen_, env_.aspects(s));
      default:
        throw PlanError("unhandled objective");
    }
  }

 private:
  const EnvModel& env_;
  int m_;
  Objective obj_;
  std::vector<std::size_t> frozen_;
  std::optional<MdpPlanner> mdp_;
  std::optional<RmPlanner> rm_;
  std::optional<PomdpPlanner> pomdp_;
};

}  // namespace

PlanResult plan(const EnvModel& env, int m, const Objective& obj, const History& h) {
  return Solver(env, m, obj).plan(h);
}

Policy planner_policy(const EnvModel& env, int m, const Objective& obj) {
  struct State {
    Solver solver;
    std::map<std::vector<int>, ActionId> memo;
  };
  auto st = std::make_shared<State>(State{Solver(env, m, obj), {}});
  const EnvModel* e = &env;
  return Policy{std::string(objective_name(obj.kind)), [st, e](const History& h0) {
                  History h = complete_history(*e, h0);
                  auto k = st->solver.key(h);
                  auto it = st->memo.find(k);
                  if (it != st->memo.end()) return it->second;
                  ActionId a = st->solver.plan(h).action;
                  st->memo.emplace(std::move(k), a);
                  return a;
                }};
}

ActionId plan_standard_rl(const EnvModel& env, int m, const History& h) {
  return plan(env, m, Objective::of(ObjectiveKind::StandardRL), h).action;
}
ActionId plan_ti_aware(const EnvModel& env, int m, const History& h) {
  return plan(env, m, Objective::of(ObjectiveKind::TIAware), h).action;
}
ActionId plan_ti_unaware(const EnvModel& env, int m, const History& h) {
  return plan(env, m, Objective::of(ObjectiveKind::TIUnaware), h).action;
}
ActionId plan_partial_ti(const EnvModel& env, int m, const History& h, const std::vector<std::string>& frozen) {
  return plan(env, m, Objective::partial_ti(frozen), h).action;
}
ActionId plan_rm_naive(const EnvModel& env, int m, const History& h) {
  return plan(env, m, Objective::of(ObjectiveKind::NaiveRM), h).action;
}
ActionId plan_rm_ti_unaware(const EnvModel& env, int m, const History& h) {
  return plan(env, m, Objective::of(ObjectiveKind::TIUnawareRM), h).action;
}
ActionId plan_uninfluenceable(const EnvModel& env, int m, const History& h) {
  return plan(env, m, Objective::of(ObjectiveKind::Uninfluenceable), h).action;
}
ActionId plan_counterfactual(const EnvModel& env, int m, const History& h, const Policy& pi_safe) {
  return plan(env, m, Objective::counterfactual(pi_safe), h).action;
}
ActionId plan_obs_reward(const EnvModel& env, int m, const History& h) {
  return plan(env, m, Objective::of(ObjectiveKind::ObsReward), h).action;
}
ActionId plan_model_based_rewards(const EnvModel& env, int m, const History& h) {
  return plan(env, m, Objective::of(ObjectiveKind::ModelBasedReward), h).action;
}

}  // namespace tamperlab::planners
