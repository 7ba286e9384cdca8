#include <map>
#include <unordered_map>

#include "tamperlab/planners.hpp"

namespace tamperlab::planners {

namespace {

struct Entry {
  Rational value;
  ActionId action = 0;
};

}  // namespace

struct MdpPlanner::Impl {
  const EnvModel& env;
  int m;
  std::size_t n;

  std::unordered_map<std::uint64_t, Entry> standard;
  std::map<Params, std::unordered_map<std::uint64_t, Entry>> frozen;

  // partial: one induction per (frozen set, pinned values)
  struct Partial {
    bool ready = false;
    std::vector<std::size_t> idx;
    Params pins;
    std::unordered_map<std::uint64_t, ActionId> act;
    std::map<Params, std::uint32_t> views;
    std::vector<Params> view_list;
    std::unordered_map<std::uint64_t, Rational> worth;
  };
  std::map<std::pair<std::vector<std::size_t>, Params>, Partial> partials;

  Impl(const EnvModel& e, int horizon) : env(e), m(horizon), n(e.num_states()) {}

  std::uint64_t key(int k, StateId s) const { return static_cast<std::uint64_t>(k) * n + s; }

  void guard(std::size_t size) const {
    if (size > kMaxInfoStates)
      throw IntractableError(env.name() + ": more than " + std::to_string(kMaxInfoStates) + " information states");
  }

  template <class Reward, class Table>
  const Entry& solve(Table& table, int k, StateId s, const Reward& r) {
    auto it = table.find(key(k, s));
    if (it != table.end()) return it->second;
    Entry e;
    e.value = r(s);
    if (k < m) {
      Rational best;
      for (ActionId a = 0; a < env.num_actions(); ++a) {
        Rational q = 0;
        for (const auto& [t, p] : env.transition(s, a)) q += p * solve(table, k + 1, t, r).value;
        if (a == 0 || q > best) {
          best = q;
          e.action = a;
        }
      }
      e.value += best;
    }
    guard(table.size() + 1);
    return table.emplace(key(k, s), std::move(e)).first->second;
  }

  std::uint32_t view_id(Partial& P, StateId s) {
    Params e = env.aspects(s);
    for (std::size_t i : P.idx) e[i] = P.pins[i];
    auto [it, fresh] = P.views.emplace(e, static_cast<std::uint32_t>(P.view_list.size()));
    if (fresh) P.view_list.push_back(e);
    return it->second;
  }

  ActionId partial_act(Partial& P, int k, StateId s) {
    auto it = P.act.find(key(k, s));
    if (it != P.act.end()) return it->second;
    std::uint32_t e = view_id(P, s);
    Rational best;
    ActionId arg = 0;
    for (ActionId a = 0; a < env.num_actions(); ++a) {
      Rational q = 0;
      for (const auto& [t, p] : env.transition(s, a)) q += p * partial_worth(P, k + 1, t, e);
      if (a == 0 || q > best) {
        best = q;
        arg = a;
      }
    }
    guard(P.act.size() + 1);
    P.act.emplace(key(k, s), arg);
    return arg;
  }

  // value of following the planned selves from (k, s), scored under view e
  Rational partial_worth(Partial& P, int k, StateId s, std::uint32_t e) {
    const std::uint64_t wk = key(k, s) ^ (static_cast<std::uint64_t>(e) << 40);
    auto it = P.worth.find(wk);
    if (it != P.worth.end()) return it->second;
    Rational v = env.reward(s, P.view_list[e]);
    if (k < m) {
      ActionId a = partial_act(P, k, s);
      for (const auto& [t, p] : env.transition(s, a)) v += p * partial_worth(P, k + 1, t, e);
    }
    P.worth.emplace(wk, v);
    return v;
  }
};

MdpPlanner::MdpPlanner(const EnvModel& env, int m) : impl_(std::make_shared<Impl>(env, m)) {}

namespace {
void check_t(int t, int m) {
  if (t < 1) throw PlanError("t must be at least 1");
  if (t >= m) throw PlanError("t=" + std::to_string(t) + " leaves no decision before horizon " + std::to_string(m));
}
}  // namespace

PlanResult MdpPlanner::standard(int t, StateId s) {
  check_t(t, impl_->m);
  const auto& env = impl_->env;
  const Entry& e = impl_->solve(impl_->standard, t, s, [&](StateId x) { return env.reward(x, env.aspects(x)); });
  return {e.action, e.value};
}

PlanResult MdpPlanner::frozen(int t, StateId s, const Params& p) {
  check_t(t, impl_->m);
  const auto& env = impl_->env;
  auto& table = impl_->frozen[p];
  const Entry& e = impl_->solve(table, t, s, [&](StateId x) { return env.reward(x, p); });
  return {e.action, e.value};
}

PlanResult MdpPlanner::partial(int t, StateId s, const std::vector<std::size_t>& frozen, const Params& pins) {
  check_t(t, impl_->m);
  Params key_pins;
  for (std::size_t i : frozen) key_pins.push_back(pins.at(i));
  auto& P = impl_->partials[{frozen, key_pins}];
  if (!P.ready) {
    P.ready = true;
    P.idx = frozen;
    P.pins = pins;
  }
  ActionId a = impl_->partial_act(P, t, s);
  Rational v = impl_->partial_worth(P, t, s, impl_->view_id(P, s));
  return {a, v};
}

}  // namespace tamperlab::planners
