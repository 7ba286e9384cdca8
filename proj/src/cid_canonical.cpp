#include <functional>
#include <map>

#include "tamperlab/cid.hpp"

namespace tamperlab::cid {

namespace {

std::string S(int k) { return "S" + std::to_string(k); }
std::string A(int k) { return "A" + std::to_string(k); }
std::string R(int k) { return "R" + std::to_string(k); }
std::string D(int k) { return "D" + std::to_string(k); }
std::string O(int k) { return "O" + std::to_string(k); }
std::string I(int k) { return "I" + std::to_string(k); }
std::string TR(int k) { return "Theta_R" + std::to_string(k); }
std::string TO(int k) { return "Theta_O" + std::to_string(k); }
std::string RU(int agent, int k) { return "R^" + std::to_string(agent) + "_" + std::to_string(k); }
std::string tw(const std::string& s) { return "~" + s; }
const std::string kStar = "Theta_R*";

struct Builder {
  std::vector<Node> nodes;
  std::vector<Edge> edges;

  void chance(const std::string& id) { nodes.push_back({id, NodeKind::Chance, std::nullopt}); }
  void decision(const std::string& id, int agent) { nodes.push_back({id, NodeKind::Decision, agent}); }
  void utility(const std::string& id, int agent) { nodes.push_back({id, NodeKind::Utility, agent}); }
  void causal(const std::string& a, const std::string& b) { edges.push_back({a, b, EdgeKind::Causal}); }
  void info(const std::string& a, const std::string& b) { edges.push_back({a, b, EdgeKind::Information}); }

  InfluenceDiagram done() { return InfluenceDiagram::build(std::move(nodes), std::move(edges)); }
};

// State chain S1..Sm with actions A1..A{m-1}; actions owned by `owner(k)`.
void state_chain(Builder& b, int m, const std::function<int(int)>& owner) {
  for (int k = 1; k <= m; ++k) b.chance(S(k));
  for (int k = 1; k < m; ++k) {
    b.decision(A(k), owner(k));
    b.causal(S(k), S(k + 1));
    b.causal(A(k), S(k + 1));
  }
}

int single(int) { return 1; }

// Modifiable reward parameter chain Theta_R1..Theta_Rm.
void reward_param_chain(Builder& b, int m) {
  for (int k = 1; k <= m; ++k) b.chance(TR(k));
  for (int k = 1; k < m; ++k) {
    b.causal(A(k), TR(k + 1));
    b.causal(TR(k), TR(k + 1));
    b.causal(S(k), TR(k + 1));
  }
  for (int k = 1; k < m; ++k) {
    b.info(S(k), A(k));
    b.info(TR(k), A(k));
  }
}

void feedback_chain(Builder& b, int m, int first) {
  b.chance(kStar);
  for (int k = first; k <= m; ++k) {
    b.chance(D(k));
    b.causal(kStar, D(k));
    if (k >= 2) b.causal(S(k - 1), D(k));
  }
}

InfluenceDiagram known_mdp(int m) {
  Builder b;
  state_chain(b, m, single);
  for (int k = 1; k <= m; ++k) {
    b.utility(R(k), 1);
    b.causal(S(k), R(k));
  }
  for (int k = 1; k < m; ++k) b.info(S(k), A(k));
  return b.done();
}

InfluenceDiagram unknown_mdp(int m) {
  Builder b;
  state_chain(b, m, single);
  b.chance("Theta_T");
  b.chance("Theta_R");
  for (int k = 1; k <= m; ++k) {
    b.utility(R(k), 1);
    b.causal(S(k), R(k));
    b.causal("Theta_T", S(k));
    b.causal("Theta_R", R(k));
  }
  for (int k = 1; k < m; ++k) {
    for (int j = 1; j <= k; ++j) {
      b.info(S(j), A(k));
      b.info(R(j), A(k));
    }
    for (int j = 1; j < k; ++j) b.info(A(j), A(k));
  }
  return b.done();
}

InfluenceDiagram control_incentive(int) {
  Builder b;
  b.decision("A1", 0);
  b.chance("X");
  b.utility("R1", 0);
  b.causal("A1", "X");
  b.causal("X", "R1");
  return b.done();
}

InfluenceDiagram information_incentive(int) {
  Builder b;
  b.decision("A1", 0);
  b.decision("A2", 0);
  b.chance("O");
  b.chance("X");
  b.utility("R2", 0);
  b.causal("A1", "O");
  b.causal("X", "O");
  b.causal("X", "R2");
  b.causal("A2", "R2");
  b.info("O", "A2");
  return b.done();
}

InfluenceDiagram irrelevant_link(int) {
  Builder b;
  b.decision("A1", 0);
  b.decision("A2", 0);
  b.chance("O");
  b.utility("R2", 0);
  b.causal("A1", "O");
  b.causal("A2", "R2");
  b.info("O", "A2");
  return b.done();
}

InfluenceDiagram modifiable_rf(int m) {
  Builder b;
  state_chain(b, m, single);
  reward_param_chain(b, m);
  for (int k = 1; k <= m; ++k) {
    b.utility(R(k), 1);
    b.causal(S(k), R(k));
    b.causal(TR(k), R(k));
  }
  return b.done();
}

InfluenceDiagram ti_aware(int m) {
  Builder b;
  state_chain(b, m, [](int k) { return k; });
  reward_param_chain(b, m);
  for (int i = 1; i < m; ++i) {
    for (int k = 1; k <= m; ++k) {
      b.utility(RU(i, k), i);
      b.causal(S(k), RU(i, k));
      b.causal(TR(i), RU(i, k));
    }
  }
  return b.done();
}

InfluenceDiagram ti_unaware_belief(int m) {
  Builder b;
  state_chain(b, m, single);
  reward_param_chain(b, m);
  for (int k = 1; k <= m; ++k) {
    b.utility(RU(1, k), 1);
    b.causal(S(k), RU(1, k));
    b.causal(TR(1), RU(1, k));
  }
  for (int k = 2; k < m; ++k) b.info(TR(1), A(k));
  return b.done();
}

std::string X(int k) { return "X" + std::to_string(k); }
std::string Y(int k) { return "Y" + std::to_string(k); }

InfluenceDiagram partial_ti(int m, bool belief) {
  Builder b;
  const int n = m - 1;
  for (int k = 1; k <= n; ++k) {
    b.chance(X(k));
    b.chance(Y(k));
    b.decision(A(k), k);
    b.utility(R(k), k);
    if (k > 1) {
      b.causal(X(k - 1), X(k));
      b.causal(Y(k - 1), Y(k));
    }
    b.causal(belief && k > 1 ? X(1) : X(k), R(k));
    b.causal(Y(k), R(k));
    b.causal(A(k), R(k));
    for (int j = 1; j <= k; ++j) {
      b.info(X(j), A(k));
      b.info(Y(j), A(k));
    }
  }
  return b.done();
}

InfluenceDiagram reward_modeling(int m) {
  Builder b;
  state_chain(b, m, single);
  feedback_chain(b, m, 1);
  for (int k = 1; k <= m; ++k) {
    b.utility(R(k), 1);
    b.causal(S(k), R(k));
    for (int j = 1; j <= k; ++j) b.causal(D(j), R(k));
  }
  for (int k = 1; k < m; ++k)
    for (int j = 1; j <= k; ++j) {
      b.info(S(j), A(k));
      b.info(D(j), A(k));
    }
  return b.done();
}

InfluenceDiagram ti_unaware_rm(int m, bool belief) {
  Builder b;
  state_chain(b, m, [belief](int k) { return belief ? 1 : k; });
  feedback_chain(b, m, 1);
  for (int i = 1; i < m; ++i) {
    for (int k = 1; k <= m; ++k) {
      std::string r = RU(i, k);
      if (belief && i > 1)
        b.chance(r);
      else
        b.utility(r, i);
      b.causal(S(k), r);
      for (int j = 1; j <= i; ++j) b.causal(D(j), r);
    }
  }
  for (int k = 1; k < m; ++k) {
    b.info(S(k), A(k));
    if (belief) {
      b.info(D(1), A(k));
    } else {
      for (int j = 1; j <= k; ++j) b.info(D(j), A(k));
    }
  }
  return b.done();
}

InfluenceDiagram uninfluenceable_rm(int m) {
  Builder b;
  state_chain(b, m, single);
  feedback_chain(b, m, 1);
  for (int k = 1; k <= m; ++k) {
    b.utility(R(k), 1);
    b.causal(S(k), R(k));
    b.causal(kStar, R(k));
  }
  for (int k = 1; k < m; ++k)
    for (int j = 1; j <= k; ++j) {
      b.info(S(j), A(k));
      b.info(D(j), A(k));
    }
  return b.done();
}

InfluenceDiagram counterfactual_rm(int m) {
  Builder b;
  state_chain(b, m, single);
  feedback_chain(b, m, 2);
  // Twin network driven by the safe policy; its "decisions" are chance nodes.
  for (int k = 1; k < m; ++k) b.chance(tw(A(k)));
  for (int k = 2; k <= m; ++k) {
    b.chance(tw(S(k)));
    b.chance(tw(D(k)));
    b.causal(kStar, tw(D(k)));
  }
  auto twin_state = [](int k) { return k == 1 ? S(1) : tw(S(k)); };
  for (int k = 1; k < m; ++k) {
    b.causal(twin_state(k), tw(S(k + 1)));
    b.causal(tw(A(k)), tw(S(k + 1)));
    b.causal(twin_state(k), tw(D(k + 1)));
    b.causal(twin_state(k), tw(A(k)));
    if (k >= 2) b.causal(tw(D(k)), tw(A(k)));
  }
  for (int k = 1; k <= m; ++k) {
    b.utility(R(k), 1);
    b.causal(S(k), R(k));
    for (int j = 2; j <= k; ++j) b.causal(tw(D(j)), R(k));
  }
  for (int k = 1; k < m; ++k) {
    b.info(S(k), A(k));
    if (k >= 2) b.info(D(k), A(k));
  }
  return b.done();
}

InfluenceDiagram pomdp(int m, bool modifiable_obs, bool model_based) {
  Builder b;
  state_chain(b, m, single);
  for (int k = 1; k <= m; ++k) {
    b.chance(O(k));
    b.utility(R(k), 1);
    b.causal(S(k), O(k));
    b.causal(model_based ? S(k) : O(k), R(k));
  }
  if (modifiable_obs) {
    for (int k = 1; k <= m; ++k) {
      b.chance(TO(k));
      b.causal(TO(k), O(k));
    }
    for (int k = 1; k < m; ++k) {
      b.causal(A(k), TO(k + 1));
      b.causal(TO(k), TO(k + 1));
      b.causal(S(k), TO(k + 1));
    }
  }
  for (int k = 1; k < m; ++k)
    for (int j = 1; j <= k; ++j) {
      b.info(O(j), A(k));
      if (!model_based) b.info(R(j), A(k));
    }
  return b.done();
}

InfluenceDiagram memory_mdp(int m) {
  Builder b;
  state_chain(b, m, single);
  b.chance("Theta_T");
  b.chance("Theta_R");
  for (int k = 1; k <= m; ++k) {
    b.utility(R(k), 1);
    b.causal(S(k), R(k));
    b.causal("Theta_T", S(k));
    b.causal("Theta_R", R(k));
  }
  for (int k = 1; k < m; ++k) {
    b.chance(I(k));
    b.causal(S(k), I(k));
    b.causal(R(k), I(k));
    if (k > 1) {
      b.causal(I(k - 1), I(k));
      b.causal(A(k - 1), I(k));
    }
    b.info(I(k), A(k));
  }
  return b.done();
}

InfluenceDiagram rm_explicit_params(int m) {
  Builder b;
  state_chain(b, m, single);
  reward_param_chain(b, m);
  feedback_chain(b, m, 1);
  for (int k = 1; k <= m; ++k) {
    b.utility(R(k), 1);
    b.causal(S(k), R(k));
    b.causal(TR(k), R(k));
    b.causal(D(k), TR(k));
  }
  return b.done();
}

// ti_aware with feedback writing the parameter
InfluenceDiagram ti_aware_rm(int m) {
  Builder b;
  state_chain(b, m, [](int k) { return k; });
  reward_param_chain(b, m);
  feedback_chain(b, m, 1);
  for (int k = 1; k <= m; ++k) b.causal(D(k), TR(k));
  for (int i = 1; i < m; ++i)
    for (int k = 1; k <= m; ++k) {
      b.utility(RU(i, k), i);
      b.causal(S(k), RU(i, k));
      b.causal(TR(i), RU(i, k));
    }
  return b.done();
}

InfluenceDiagram combined(int m) {
  Builder b;
  state_chain(b, m, single);
  for (int k = 1; k <= m; ++k) b.chance(TR(k));
  for (int k = 1; k < m; ++k) {
    b.causal(A(k), TR(k + 1));
    b.causal(TR(k), TR(k + 1));
    b.causal(S(k), TR(k + 1));
  }
  feedback_chain(b, m, 1);
  for (int k = 1; k <= m; ++k) {
    b.chance(O(k));
    b.utility(R(k), 1);
    b.causal(S(k), O(k));
    b.causal(O(k), R(k));
    b.causal(TR(k), R(k));
    b.causal(D(k), TR(k));
  }
  for (int k = 1; k < m; ++k) {
    b.chance(I(k));
    b.causal(S(k), I(k));
    b.causal(O(k), I(k));
    b.causal(R(k), I(k));
    if (k > 1) b.causal(I(k - 1), I(k));
    b.info(I(k), A(k));
  }
  return b.done();
}

using Ctor = std::function<InfluenceDiagram(int)>;

const std::map<std::string, Ctor>& registry() {
  static const std::map<std::string, Ctor> r = {
      {"known_mdp", known_mdp},
      {"unknown_mdp", unknown_mdp},
      {"control_incentive", control_incentive},
      {"information_incentive", information_incentive},
      {"irrelevant_link", irrelevant_link},
      {"modifiable_rf", modifiable_rf},
      {"ti_aware", ti_aware},
      {"ti_unaware_belief", ti_unaware_belief},
      {"partial_ti_reality", [](int m) { return partial_ti(m, false); }},
      {"partial_ti_belief", [](int m) { return partial_ti(m, true); }},
      {"reward_modeling", reward_modeling},
      {"ti_unaware_rm_reality", [](int m) { return ti_unaware_rm(m, false); }},
      {"ti_unaware_rm_belief", [](int m) { return ti_unaware_rm(m, true); }},
      {"uninfluenceable_rm", uninfluenceable_rm},
      {"counterfactual_rm", counterfactual_rm},
      {"pomdp", [](int m) { return pomdp(m, false, false); }},
      {"pomdp_modifiable_obs", [](int m) { return pomdp(m, true, false); }},
      {"model_based_rewards", [](int m) { return pomdp(m, true, true); }},
      {"memory_mdp", memory_mdp},
      {"rm_explicit_params", rm_explicit_params},
      {"ti_aware_rm", ti_aware_rm},
      {"combined", combined},
  };
  return r;
}

}  // namespace

std::vector<std::string> canonical_names() {
  std::vector<std::string> out;
  for (const auto& [name, _] : registry()) out.push_back(name);
  return out;
}

InfluenceDiagram canonical_diagram(std::string_view name, int horizon) {
  auto it = registry().find(std::string(name));
  if (it == registry().end()) {
    std::string msg = "unknown diagram '" + std::string(name) + "'; known:";
    for (const auto& n : canonical_names()) msg += " " + n;
    throw DiagramError(msg);
  }
  if (horizon < 2) throw DiagramError("horizon must be at least 2, got " + std::to_string(horizon));
  return it->second(horizon);
}

}  // namespace tamperlab::cid
