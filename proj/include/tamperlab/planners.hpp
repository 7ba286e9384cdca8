#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tamperlab/env_model.hpp"
#include "tamperlab/rational.hpp"

namespace tamperlab::planners {

using worlds::ActionId;
using worlds::EnvError;
using worlds::EnvModel;
using worlds::FeedbackId;
using worlds::IntractableError;
using worlds::LatentId;
using worlds::ObsId;
using worlds::Params;
using worlds::StateId;

// Distinct (timestep, information state) keys a planner may touch.
inline constexpr std::size_t kMaxInfoStates = 100000;
// Trajectory-tree nodes visited by one exact evaluation.
inline constexpr std::size_t kMaxTreeNodes = 2000000;

class PlanError : public EnvError {
 public:
  using EnvError::EnvError;
};

// Everything that happened up to timestep t = states.size().
// feedback and observations run parallel to states; actions has t-1 entries.
struct History {
  std::vector<StateId> states;
  std::vector<FeedbackId> feedback;
  std::vector<ActionId> actions;
  std::vector<ObsId> observations;

  std::size_t t() const { return states.size(); }
};

// History holding only S_1 (feedback and observation filled from the env).
History start_history(const EnvModel& env, StateId s1, FeedbackId d1 = worlds::kNoFeedback);
// Fills missing feedback/observation entries and checks the lengths.
History complete_history(const EnvModel& env, History h);

struct Policy {
  std::string name;
  std::function<ActionId(const History&)> act;
};

enum class ObjectiveKind {
  StandardRL,
  TIAware,
  TIUnaware,
  PartialTI,
  NaiveRM,
  TIUnawareRM,
  Uninfluenceable,
  CounterfactualRM,
  ObsReward,
  ModelBasedReward,
};

std::string_view objective_name(ObjectiveKind k);
// Accepts the names produced by objective_name; error lists them.
ObjectiveKind parse_objective(std::string_view name);
const std::vector<ObjectiveKind>& all_objectives();

struct Objective {
  ObjectiveKind kind = ObjectiveKind::StandardRL;
  std::vector<std::string> frozen;  // PartialTI
  std::optional<Policy> safe;       // CounterfactualRM

  static Objective of(ObjectiveKind k) { return Objective{k, {}, std::nullopt}; }
  static Objective partial_ti(std::vector<std::string> frozen) {
    return Objective{ObjectiveKind::PartialTI, std::move(frozen), std::nullopt};
  }
  static Objective counterfactual(Policy safe) {
    return Objective{ObjectiveKind::CounterfactualRM, {}, std::move(safe)};
  }
};

// Posterior over latent ids given states and feedback, indexed by LatentId.
std::vector<Rational> posterior(const EnvModel& env, const std::vector<StateId>& states,
                                const std::vector<FeedbackId>& feedback);

// Feedback D~_1..D~_m from running pi_safe out of s1, mixed over the posterior.
Dist<std::vector<FeedbackId>> counterfactual_feedback(const EnvModel& env, const std::vector<Rational>& post,
                                                      StateId s1, const Policy& pi_safe, int m);

// Expected objective score of pi from the information state `from` up to step m
// (inclusive). Empty `from` starts at the initial distribution.
Rational exact_value(const EnvModel& env, const Policy& pi, const Objective& obj, int m, const History& from = {});

// Expected sum of user utility over the same steps. With true_latent the latent
// parameter is fixed instead of drawn from the prior/posterior.
Rational exact_user_utility(const EnvModel& env, const Policy& pi, int m, const History& from = {},
                            std::optional<LatentId> true_latent = std::nullopt);

struct PlanResult {
  ActionId action = 0;
  Rational value;
};

// Solvers keep their tables between calls. They hold a reference to env.

class MdpPlanner {
 public:
  MdpPlanner(const EnvModel& env, int m);
  // future parameters at every step
  PlanResult standard(int t, StateId s);
  // parameters pinned to p
  PlanResult frozen(int t, StateId s, const Params& p);
  // aspects in `frozen` pinned to pins, the rest evolve; every future self
  // re-optimizes under its own view
  PlanResult partial(int t, StateId s, const std::vector<std::size_t>& frozen, const Params& pins);

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

class RmPlanner {
 public:
  RmPlanner(const EnvModel& env, int m, ObjectiveKind kind, std::optional<Policy> safe = std::nullopt);
  PlanResult plan(const History& h);

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

class PomdpPlanner {
 public:
  PomdpPlanner(const EnvModel& env, int m, ObjectiveKind kind);
  PlanResult plan(const History& h);

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

PlanResult plan(const EnvModel& env, int m, const Objective& obj, const History& h);

// Re-plans at every step; results are memoized per information state.
Policy planner_policy(const EnvModel& env, int m, const Objective& obj);

ActionId plan_standard_rl(const EnvModel& env, int m, const History& h);
ActionId plan_ti_aware(const EnvModel& env, int m, const History& h);
ActionId plan_ti_unaware(const EnvModel& env, int m, const History& h);
ActionId plan_partial_ti(const EnvModel& env, int m, const History& h, const std::vector<std::string>& frozen);
ActionId plan_rm_naive(const EnvModel& env, int m, const History& h);
ActionId plan_rm_ti_unaware(const EnvModel& env, int m, const History& h);
ActionId plan_uninfluenceable(const EnvModel& env, int m, const History& h);
ActionId plan_counterfactual(const EnvModel& env, int m, const History& h, const Policy& pi_safe);
ActionId plan_obs_reward(const EnvModel& env, int m, const History& h);
ActionId plan_model_based_rewards(const EnvModel& env, int m, const History& h);

// ---- named policies ----

// advisors: diamond, fool_rock. Any env: seq:<a>,<b>,... (last action repeats),
// stay (gridworlds and chase). Gridworlds with an expert tile: visit_expert.
Policy named_policy(const EnvModel& env, std::string_view name);
std::vector<std::string> policy_names(const EnvModel& env);
// gather_diamond for advisors, visit_expert where an expert exists, else stay
Policy default_safe_policy(const EnvModel& env);

// Actions of pi on every history reachable within m steps, as JSON text
// {"policy": name, "horizon": m, "decisions": [{"t":..,"states":[..],"feedback":[..],"action":".."}]}.
std::string tabulate_policy(const EnvModel& env, const Policy& pi, int m);
// FNV-1a 64 of the tabulation, lowercase hex
std::string policy_digest(const EnvModel& env, const Policy& pi, int m);

}  // namespace tamperlab::planners
