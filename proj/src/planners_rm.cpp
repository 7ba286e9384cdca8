#include <array>
#include <map>

#include "tamperlab/planners.hpp"

namespace tamperlab::planners {

namespace {

struct Entry {
  Rational value;
  ActionId action = 0;
};

struct Branch {
  FeedbackId d;
  Rational p;
  std::uint32_t post;
};

}  // namespace

// Belief MDP over (k, state, reward model, posterior over the latent value).
struct RmPlanner::Impl {
  const EnvModel& env;
  int m;
  ObjectiveKind kind;
  std::optional<Policy> safe;
  MdpPlanner frozen;

  std::map<std::vector<Rational>, std::uint32_t> post_ids;
  std::vector<std::vector<Rational>> posts;
  std::map<Params, std::uint32_t> rm_ids;
  std::vector<Params> rms;
  std::map<std::pair<StateId, std::uint32_t>, std::vector<Branch>> branches;
  // counterfactual reward per (S_1, latent): state -> expected reward under RM(D~)
  std::map<std::pair<StateId, LatentId>, std::map<Params, Rational>> cf_models;

  using Key = std::array<std::uint32_t, 5>;  // s1, k, s, rm, post
  std::map<Key, Entry> table;

  Impl(const EnvModel& e, int horizon, ObjectiveKind k, std::optional<Policy> sp)
      : env(e), m(horizon), kind(k), safe(std::move(sp)), frozen(e, horizon) {}

  std::uint32_t post_id(const std::vector<Rational>& p) {
    auto [it, fresh] = post_ids.emplace(p, static_cast<std::uint32_t>(posts.size()));
    if (fresh) posts.push_back(p);
    return it->second;
  }
  std::uint32_t rm_id(const Params& p) {
    auto [it, fresh] = rm_ids.emplace(p, static_cast<std::uint32_t>(rms.size()));
    if (fresh) rms.push_back(p);
    return it->second;
  }

  // feedback at s' under the current belief, with the updated belief
  const std::vector<Branch>& feedback_branches(StateId s, std::uint32_t pid) {
    auto key = std::make_pair(s, pid);
    auto it = branches.find(key);
    if (it != branches.end()) return it->second;
    const std::vector<Rational> post = posts[pid];
    std::map<FeedbackId, std::vector<Rational>> joint;
    for (LatentId l = 0; l < post.size(); ++l) {
      if (post[l] == 0) continue;
      for (const auto& [d, pd] : env.feedback(l, s)) {
        auto& v = joint[d];
        if (v.empty()) v.assign(post.size(), Rational(0));
        v[l] += post[l] * pd;
      }
    }
    std::vector<Branch> out;
    for (auto& [d, w] : joint) {
      Rational total = 0;
      for (const auto& x : w) total += x;
      for (auto& x : w) x /= total;
      out.push_back({d, total, post_id(w)});
    }
    return branches.emplace(key, std::move(out)).first->second;
  }

  const std::map<Params, Rational>& cf_model(StateId s1, LatentId l) {
    auto key = std::make_pair(s1, l);
    auto it = cf_models.find(key);
    if (it != cf_models.end()) return it->second;
    std::vector<Rational> point(env.latent_names().size());
    point[l] = 1;
    std::map<Params, Rational> dist;
    for (const auto& [seq, p] : counterfactual_feedback(env, point, s1, *safe, m)) {
      Params rm = env.rm_initial();
      for (FeedbackId d : seq) rm = env.rm_update(rm, d);
      dist[rm] += p;
    }
    return cf_models.emplace(key, std::move(dist)).first->second;
  }

  Rational reward(StateId s1, StateId s, std::uint32_t rm, std::uint32_t pid) {
    switch (kind) {
      case ObjectiveKind::NaiveRM:
        return env.reward(s, rms[rm]);
      case ObjectiveKind::Uninfluenceable: {
        Rational v = 0;
        const auto& post = posts[pid];
        for (LatentId l = 0; l < post.size(); ++l)
          if (post[l] != 0) v += post[l] * env.reward(s, env.latent_params(l));
        return v;
      }
      case ObjectiveKind::CounterfactualRM: {
        Rational v = 0;
        const std::vector<Rational> post = posts[pid];
        for (LatentId l = 0; l < post.size(); ++l) {
          if (post[l] == 0) continue;
          for (const auto& [q, pq] : cf_model(s1, l)) v += post[l] * pq * env.reward(s, q);
        }
        return v;
      }
      default:
        throw PlanError("not a reward-modeling objective");
    }
  }

  Entry solve(StateId s1, int k, StateId s, std::uint32_t rm, std::uint32_t pid) {
    // the naive agent is the only one whose score depends on the reward model
    if (kind != ObjectiveKind::NaiveRM) rm = 0;
    if (kind != ObjectiveKind::CounterfactualRM) s1 = 0;
    Key key{s1, static_cast<std::uint32_t>(k), s, rm, pid};
    auto it = table.find(key);
    if (it != table.end()) return it->second;
    Entry e;
    e.value = reward(s1, s, rm, pid);
    if (k < m) {
      Rational best;
      for (ActionId a = 0; a < env.num_actions(); ++a) {
        Rational q = 0;
        for (const auto& [t, pt] : env.transition(s, a)) {
          const auto bs = feedback_branches(t, pid);
          for (const auto& b : bs) {
            std::uint32_t rm2 = kind == ObjectiveKind::NaiveRM ? rm_id(env.rm_update(rms[rm], b.d)) : 0;
            q += pt * b.p * solve(s1, k + 1, t, rm2, b.post).value;
          }
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

RmPlanner::RmPlanner(const EnvModel& env, int m, ObjectiveKind kind, std::optional<Policy> safe) {
  switch (kind) {
    case ObjectiveKind::NaiveRM:
    case ObjectiveKind::TIUnawareRM:
    case ObjectiveKind::Uninfluenceable:
      break;
    case ObjectiveKind::CounterfactualRM:
      if (!safe) throw PlanError("counterfactual planning needs a safe policy");
      break;
    default:
      throw PlanError("objective " + std::string(objective_name(kind)) + " is not a reward-modeling objective");
  }
  impl_ = std::make_shared<Impl>(env, m, kind, std::move(safe));
}

PlanResult RmPlanner::plan(const History& h0) {
  auto& I = *impl_;
  History h = complete_history(I.env, h0);
  const int t = static_cast<int>(h.t());
  if (t >= I.m) throw PlanError("t=" + std::to_string(t) + " leaves no decision before horizon " + std::to_string(I.m));
  Params rm = I.env.rm_initial();
  for (FeedbackId d : h.feedback) rm = I.env.rm_update(rm, d);
  if (I.kind == ObjectiveKind::TIUnawareRM) return I.frozen.frozen(t, h.states.back(), rm);
  auto post = posterior(I.env, h.states, h.feedback);
  Entry e = I.solve(h.states.front(), t, h.states.back(), I.rm_id(rm), I.post_id(post));
  return {e.action, e.value};
}

}  // namespace tamperlab::planners
