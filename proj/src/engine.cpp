#include <algorithm>
#include <functional>
#include <map>

#include "tamperlab/planners.hpp"

namespace tamperlab::planners {

namespace {

const std::vector<std::pair<ObjectiveKind, std::string_view>> kNames = {
    {ObjectiveKind::StandardRL, "standard_rl"},
    {ObjectiveKind::TIAware, "ti_aware"},
    {ObjectiveKind::TIUnaware, "ti_unaware"},
    {ObjectiveKind::PartialTI, "partial_ti"},
    {ObjectiveKind::NaiveRM, "naive_rm"},
    {ObjectiveKind::TIUnawareRM, "ti_unaware_rm"},
    {ObjectiveKind::Uninfluenceable, "uninfluenceable"},
    {ObjectiveKind::CounterfactualRM, "counterfactual_rm"},
    {ObjectiveKind::ObsReward, "obs_reward"},
    {ObjectiveKind::ModelBasedReward, "model_based"},
};

Params naive_rm(const EnvModel& env, const std::vector<FeedbackId>& d, std::size_t upto) {
  Params p = env.rm_initial();
  for (std::size_t i = 0; i < upto && i < d.size(); ++i) p = env.rm_update(p, d[i]);
  return p;
}

ActionId checked(const EnvModel& env, const Policy& pi, const History& h) {
  ActionId a = pi.act(h);
  if (a >= env.num_actions())
    throw PlanError("partial policy '" + pi.name + "': no valid action at t=" + std::to_string(h.t()));
  return a;
}

struct Root {
  History h;
  LatentId latent;
  Rational p;
};

std::vector<Root> roots(const EnvModel& env, const History& from, std::optional<LatentId> fixed) {
  std::vector<Root> out;
  if (from.states.empty()) {
    for (const auto& [s, ps] : env.initial()) {
      Dist<LatentId> lat = env.latent_prior();
      if (fixed) lat = {{*fixed, Rational(1)}};
      for (const auto& [l, pl] : lat)
        for (const auto& [d, pd] : env.feedback(l, s)) out.push_back({start_history(env, s, d), l, ps * pl * pd});
    }
    return out;
  }
  History h = complete_history(env, from);
  if (h.actions.size() + 1 != h.t()) throw PlanError("evaluation needs the action history");
  if (fixed) return {{h, *fixed, Rational(1)}};
  auto post = posterior(env, h.states, h.feedback);
  for (LatentId l = 0; l < post.size(); ++l)
    if (post[l] != 0) out.push_back({h, l, post[l]});
  return out;
}

// Depth-first walk over every continuation of the roots up to step m.
class Walker {
 public:
  using Leaf = std::function<void(const History&, LatentId, const Rational&)>;

  Walker(const EnvModel& env, const Policy& pi, int m) : env_(env), pi_(pi), m_(m) {}

  void run(const std::vector<Root>& rs, const Leaf& leaf) {
    for (const auto& r : rs) {
      History h = r.h;
      if (static_cast<int>(h.t()) > m_) throw PlanError("history longer than the horizon");
      walk(h, r.latent, r.p, leaf);
    }
  }

 private:
  void walk(History& h, LatentId l, const Rational& p, const Leaf& leaf) {
    if (++nodes_ > kMaxTreeNodes) throw IntractableError("trajectory tree exceeds " + std::to_string(kMaxTreeNodes) + " nodes");
    if (static_cast<int>(h.t()) == m_) {
      leaf(h, l, p);
      return;
    }
    ActionId a = checked(env_, pi_, h);
    h.actions.push_back(a);
    for (const auto& [s, ps] : env_.transition(h.states.back(), a)) {
      h.states.push_back(s);
      h.observations.push_back(env_.observe(s));
      for (const auto& [d, pd] : env_.feedback(l, s)) {
        h.feedback.push_back(d);
        walk(h, l, p * ps * pd, leaf);
        h.feedback.pop_back();
      }
      h.observations.pop_back();
      h.states.pop_back();
    }
    h.actions.pop_back();
  }

  const EnvModel& env_;
  const Policy& pi_;
  int m_;
  std::size_t nodes_ = 0;
};

std::vector<Rational> point_mass(std::size_t n, LatentId l) {
  std::vector<Rational> v(n);
  v[l] = 1;
  return v;
}

}  // namespace

std::string_view objective_name(ObjectiveKind k) {
  for (const auto& [kind, n] : kNames)
    if (kind == k) return n;
  return "?";
}

ObjectiveKind parse_objective(std::string_view name) {
  std::string valid;
  for (const auto& [kind, n] : kNames) {
    if (n == name) return kind;
    valid += (valid.empty() ? "" : ", ") + std::string(n);
  }
  throw EnvError("unknown objective '" + std::string(name) + "' (valid: " + valid + ")");
}

const std::vector<ObjectiveKind>& all_objectives() {
  static const std::vector<ObjectiveKind> all = [] {
    std::vector<ObjectiveKind> v;
    for (const auto& [k, _] : kNames) v.push_back(k);
    return v;
  }();
  return all;
}

History start_history(const EnvModel& env, StateId s1, FeedbackId d1) {
  History h;
  h.states = {s1};
  h.feedback = {d1};
  h.observations = {env.observe(s1)};
  return h;
}

History complete_history(const EnvModel& env, History h) {
  const std::size_t t = h.t();
  if (t == 0) throw PlanError("history has no states");
  for (StateId s : h.states)
    if (s >= env.num_states()) throw PlanError("state " + std::to_string(s) + " not in the domain");
  if (h.feedback.empty()) h.feedback.assign(t, worlds::kNoFeedback);
  if (h.observations.empty())
    for (StateId s : h.states) h.observations.push_back(env.observe(s));
  if (h.feedback.size() != t) throw PlanError("feedback length does not match the states");
  if (h.observations.size() != t) throw PlanError("observation length does not match the states");
  if (!h.actions.empty() && h.actions.size() != t - 1) throw PlanError("expected " + std::to_string(t - 1) + " actions");
  for (ActionId a : h.actions)
    if (a >= env.num_actions()) throw PlanError("action " + std::to_string(a) + " out of range");
  return h;
}

std::vector<Rational> posterior(const EnvModel& env, const std::vector<StateId>& states,
                                const std::vector<FeedbackId>& feedback) {
  if (states.size() != feedback.size()) throw EnvError("posterior needs one feedback entry per state");
  std::vector<Rational> w(env.latent_names().size());
  for (const auto& [l, p] : env.latent_prior()) w[l] = p;
  for (std::size_t k = 0; k < states.size(); ++k) {
    for (LatentId l = 0; l < w.size(); ++l) {
      if (w[l] == 0) continue;
      Rational like = 0;
      for (const auto& [d, p] : env.feedback(l, states[k]))
        if (d == feedback[k]) like = p;
      w[l] *= like;
    }
  }
  Rational total = 0;
  for (const auto& x : w) total += x;
  if (total == 0) throw EnvError("feedback sequence has zero likelihood under every latent value");
  for (auto& x : w) x /= total;
  return w;
}

Dist<std::vector<FeedbackId>> counterfactual_feedback(const EnvModel& env, const std::vector<Rational>& post,
                                                      StateId s1, const Policy& pi_safe, int m) {
  if (m < 1) throw PlanError("horizon must be at least 1");
  if (post.size() != env.latent_names().size()) throw PlanError("posterior size does not match the latent space");
  std::map<std::vector<FeedbackId>, Rational> acc;
  for (LatentId l = 0; l < post.size(); ++l) {
    if (post[l] == 0) continue;
    Walker w(env, pi_safe, m);
    std::vector<Root> rs;
    for (const auto& [d, pd] : env.feedback(l, s1)) rs.push_back({start_history(env, s1, d), l, post[l] * pd});
    w.run(rs, [&](const History& h, LatentId, const Rational& p) { acc[h.feedback] += p; });
  }
  return {acc.begin(), acc.end()};
}

Rational exact_value(const EnvModel& env, const Policy& pi, const Objective& obj, int m, const History& from) {
  const std::size_t t0 = from.states.empty() ? 1 : from.t();
  if (m < 1 || t0 > static_cast<std::size_t>(m)) throw PlanError("horizon " + std::to_string(m) + " is before t");
  const auto kind = obj.kind;
  if ((kind == ObjectiveKind::ObsReward || kind == ObjectiveKind::ModelBasedReward) && !env.has_observation())
    throw PlanError(env.name() + " has no observation function");
  if (kind == ObjectiveKind::CounterfactualRM && !obj.safe) throw PlanError("counterfactual objective needs a safe policy");
  if (kind == ObjectiveKind::PartialTI) env.aspect_indices(obj.frozen);
  const std::size_t nl = env.latent_names().size();

  // counterfactual reward-model distribution per (S_1, latent)
  std::map<std::pair<StateId, LatentId>, std::map<Params, Rational>> cf;
  auto cf_models = [&](StateId s1, LatentId l) -> const std::map<Params, Rational>& {
    auto key = std::make_pair(s1, l);
    auto it = cf.find(key);
    if (it != cf.end()) return it->second;
    std::map<Params, Rational> dist;
    for (const auto& [seq, p] : counterfactual_feedback(env, point_mass(nl, l), s1, *obj.safe, m))
      dist[naive_rm(env, seq, seq.size())] += p;
    return cf.emplace(key, std::move(dist)).first->second;
  };

  Rational total = 0;
  auto leaf = [&](const History& h, LatentId, const Rational& p) {
    Rational score = 0;
    const auto& S = h.states;
    auto sum_with = [&](const Params& q) {
      Rational v = 0;
      for (std::size_t k = t0; k <= S.size(); ++k) v += env.reward(S[k - 1], q);
      return v;
    };
    switch (kind) {
      case ObjectiveKind::StandardRL:
      case ObjectiveKind::NaiveRM:
        if (kind == ObjectiveKind::NaiveRM || env.has_feedback()) {
          Params rm = env.rm_initial();
          for (std::size_t k = 1; k <= S.size(); ++k) {
            rm = env.rm_update(rm, h.feedback[k - 1]);
            if (k >= t0) score += env.reward(S[k - 1], rm);
          }
        } else {
          for (std::size_t k = t0; k <= S.size(); ++k) score += env.reward(S[k - 1], env.aspects(S[k - 1]));
        }
        break;
      case ObjectiveKind::TIAware:
      case ObjectiveKind::TIUnaware:
      case ObjectiveKind::PartialTI:
        score = sum_with(env.aspects(S[t0 - 1]));
        break;
      case ObjectiveKind::TIUnawareRM:
        score = sum_with(naive_rm(env, h.feedback, t0));
        break;
      case ObjectiveKind::ObsReward:
        for (std::size_t k = t0; k <= S.size(); ++k) score += env.observation_reward(S[k - 1]);
        break;
      case ObjectiveKind::ModelBasedReward:
        for (std::size_t k = t0; k <= S.size(); ++k) score += env.reward(S[k - 1], env.aspects(S[k - 1]));
        break;
      case ObjectiveKind::Uninfluenceable: {
        auto post = posterior(env, h.states, h.feedback);
        for (LatentId l = 0; l < nl; ++l)
          if (post[l] != 0) score += post[l] * sum_with(env.latent_params(l));
        break;
      }
      case ObjectiveKind::CounterfactualRM: {
        auto post = posterior(env, h.states, h.feedback);
        for (LatentId l = 0; l < nl; ++l) {
          if (post[l] == 0) continue;
          for (const auto& [q, pq] : cf_models(S[0], l)) score += post[l] * pq * sum_with(q);
        }
        break;
      }
    }
    total += p * score;
  };
  Walker(env, pi, m).run(roots(env, from, std::nullopt), leaf);
  return total;
}

Rational exact_user_utility(const EnvModel& env, const Policy& pi, int m, const History& from,
                            std::optional<LatentId> true_latent) {
  const std::size_t t0 = from.states.empty() ? 1 : from.t();
  if (m < 1 || t0 > static_cast<std::size_t>(m)) throw PlanError("horizon " + std::to_string(m) + " is before t");
  if (true_latent && *true_latent >= env.latent_names().size()) throw PlanError("unknown latent value");
  Rational total = 0;
  Walker(env, pi, m).run(roots(env, from, true_latent), [&](const History& h, LatentId l, const Rational& p) {
    Rational u = 0;
    for (std::size_t k = t0; k <= h.t(); ++k) u += env.user_utility(h.states[k - 1], l);
    total += p * u;
  });
  return total;
}

}  // namespace tamperlab::planners
