#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "tamperlab/worlds.hpp"

using namespace tamperlab;
using namespace tamperlab::worlds;

namespace {

const GridWorld& grid(const std::unique_ptr<EnvModel>& e) { return dynamic_cast<const GridWorld&>(*e); }

GridState place(const GridWorld& w, std::vector<std::pair<int, Item>> items, int td, int tr) {
  GridState g = w.initial_state();
  std::fill(g.items.begin(), g.items.end(), Item::None);
  for (auto [c, it] : items) g.items[c] = it;
  g.theta_diamond = td;
  g.theta_rock = tr;
  return g;
}

}  // namespace

TEST(ParseMap, SingleRow) {
  GridMap m = GridMap::parse("A d G");
  EXPECT_EQ(m.rows, 1);
  EXPECT_EQ(m.cols, 3);
  EXPECT_EQ(m.agent, 0);
  EXPECT_EQ(m.items[1], Item::Diamond);
  EXPECT_EQ(m.terrain[2], Terrain::Goal);
  EXPECT_EQ(m.render(), "AdG\n");
}

TEST(ParseMap, ThetaTilesInBottomRow) {
  GridMap m = GridMap::parse(layout("rocks_diamonds_tiles").text);
  EXPECT_EQ(m.rows, 5);
  EXPECT_EQ(m.cols, 5);
  for (int c = 0; c < 5; ++c)
    for (int r = 0; r < 4; ++r) {
      EXPECT_NE(m.terrain[m.cell(r, c)], Terrain::ThetaDiamond);
      EXPECT_NE(m.terrain[m.cell(r, c)], Terrain::ThetaRock);
    }
  EXPECT_EQ(m.terrain[m.cell(4, 1)], Terrain::ThetaDiamond);
  EXPECT_EQ(m.terrain[m.cell(4, 2)], Terrain::ThetaRock);
}

TEST(ParseMap, Errors) {
  EXPECT_THROW(GridMap::parse("A.A"), MapError);
  EXPECT_THROW(GridMap::parse("..."), MapError);
  EXPECT_THROW(GridMap::parse("A..\n.."), MapError);
  EXPECT_THROW(GridMap::parse("A.x"), MapError);
  EXPECT_THROW(GridMap::parse(""), MapError);
  try {
    GridMap::parse("A.\n...");
    FAIL();
  } catch (const MapError& e) {
    EXPECT_NE(std::string(e.what()).find("ragged"), std::string::npos);
  }
}

TEST(ParseMap, RoundTripEveryLayout) {
  for (const auto& l : layouts()) {
    EXPECT_EQ(GridMap::parse(l.text).render(), GridMap::normalize(l.text)) << l.name;
  }
  EXPECT_EQ(GridMap::normalize("A d\r\n\n G . \n"), "Ad\nG.\n");
}

TEST(Step, ThetaRockToggleOnEntry) {
  auto env = make_grid_environment("t", "AQ.\n...");
  const auto& w = grid(env);
  GridState g = w.initial_state();
  ASSERT_EQ(g.theta_rock, -1);
  GridState n = w.step_state(g, GridWorld::Right);
  EXPECT_EQ(n.agent, 1);
  EXPECT_EQ(n.theta_rock, 1);
  EXPECT_EQ(n.theta_diamond, 1);
  // standing still does not toggle again
  EXPECT_EQ(w.step_state(n, GridWorld::Stay).theta_rock, 1);
  // leaving and re-entering toggles back
  GridState back = w.step_state(w.step_state(n, GridWorld::Right), GridWorld::Left);
  EXPECT_EQ(back.theta_rock, -1);
}

TEST(Step, WallsAndEdgesBlock) {
  auto env = make_grid_environment("t", "A#\n..");
  const auto& w = grid(env);
  GridState g = w.initial_state();
  for (ActionId a : {GridWorld::Up, GridWorld::Left, GridWorld::Right}) {
    GridState n = w.step_state(g, a);
    EXPECT_EQ(n.agent, g.agent);
    EXPECT_EQ(n.items, g.items);
  }
  EXPECT_EQ(w.step_state(g, GridWorld::Down).agent, 2);
}

TEST(Step, SokobanPush) {
  auto env = make_grid_environment("t", "Ad.r\n..#.");
  const auto& w = grid(env);
  GridState g = w.initial_state();
  GridState n = w.step_state(g, GridWorld::Right);
  EXPECT_EQ(n.agent, 1);
  EXPECT_EQ(n.items[2], Item::Diamond);
  // diamond now next to the rock: push blocked
  GridState m = w.step_state(n, GridWorld::Right);
  EXPECT_EQ(m.agent, 1);
  EXPECT_EQ(m.items[2], Item::Diamond);
  // push into the grid edge is blocked
  auto env2 = make_grid_environment("t2", "Ad");
  EXPECT_EQ(grid(env2).step_state(grid(env2).initial_state(), GridWorld::Right).agent, 0);
  // push into a wall is blocked
  auto env3 = make_grid_environment("t3", "Ad#");
  EXPECT_EQ(grid(env3).step_state(grid(env3).initial_state(), GridWorld::Right).agent, 0);
}

TEST(Step, ObservationTileOverlays) {
  auto env = make_grid_environment("t", "Ao.\n...");
  const auto& w = grid(env);
  GridState g = w.step_state(w.initial_state(), GridWorld::Right);
  ASSERT_EQ(g.overlay, std::vector<Item>{Item::Diamond});
  g = w.step_state(g, GridWorld::Stay);
  EXPECT_EQ(g.overlay, (std::vector<Item>{Item::Diamond, Item::Diamond}));
  auto win = w.window(g);
  EXPECT_EQ(win[0].item, Item::Diamond);
  EXPECT_EQ(win[1].item, Item::Diamond);
  EXPECT_EQ(win[2].item, Item::None);
  for (int i = 0; i < 20; ++i) g = w.step_state(g, GridWorld::Stay);
  EXPECT_EQ(g.overlay.size(), 9u);
}

TEST(Step, UnknownAction) {
  auto env = make_grid_environment("t", "A.");
  EXPECT_THROW(grid(env).step_state(grid(env).initial_state(), 7), EnvError);
  EXPECT_THROW(env->transition(0, 9), EnvError);
  EXPECT_THROW(env->transition(999, 0), EnvError);
  EXPECT_THROW(env->action_id("jump"), EnvError);
}

TEST(RewardFormula, Examples) {
  auto env = make_grid_environment("t", "AGGGGG");
  const auto& w = grid(env);
  auto g = place(w, {{1, Item::Diamond}, {2, Item::Diamond}, {3, Item::Rock}}, 1, -1);
  EXPECT_EQ(w.reward_with(g, 1, -1), 1);
  EXPECT_EQ(w.reward_with(place(w, {}, 1, -1), 1, -1), 0);
  auto full = place(w, {{1, Item::Diamond}, {2, Item::Diamond}, {3, Item::Rock}, {4, Item::Rock}, {5, Item::Rock}}, 1, 1);
  EXPECT_EQ(w.reward_with(full, 1, 1), 5);
  // items outside the goal area do not count
  EXPECT_EQ(w.reward_with(place(w, {{0, Item::Diamond}}, 1, -1), 1, -1), 0);
}

TEST(RewardFormula, PermutationInvariantInsideGoal) {
  auto env = make_grid_environment("t", "A..\nGGG\nGG.");
  const auto& w = grid(env);
  std::vector<int> goal = {3, 4, 5, 6, 7};
  std::vector<Item> pattern = {Item::Diamond, Item::Diamond, Item::Rock, Item::None, Item::None};
  std::sort(pattern.begin(), pattern.end());
  std::set<int> values;
  do {
    GridState g = w.initial_state();
    for (std::size_t i = 0; i < goal.size(); ++i) g.items[goal[i]] = pattern[i];
    for (int td : {-1, 1})
      for (int tr : {-1, 1}) values.insert(w.reward_with(g, td, tr) * 100 + td * 10 + tr);
  } while (std::next_permutation(pattern.begin(), pattern.end()));
  EXPECT_EQ(values.size(), 4u);  // one value per theta pair
}

TEST(Observe, CornerHasFiveOutOfBoundsCells) {
  auto env = make_grid_environment("t", "A..\n...\n...", {View::Window});
  const auto& w = grid(env);
  auto win = w.window(w.initial_state());
  int oob = 0;
  for (const auto& c : win) oob += c.terrain == ' ';
  EXPECT_EQ(oob, 5);
}

TEST(Observe, NineOverlaysCoverEverything) {
  auto env = make_grid_environment("t", "Ado\n...");
  const auto& w = grid(env);
  GridState g = w.initial_state();
  g.overlay.assign(9, Item::Diamond);
  for (int a = 0; a < 3; ++a) {
    for (const auto& c : w.window(g)) EXPECT_EQ(c.item, Item::Diamond);
    g = w.step_state(g, GridWorld::Down);
  }
}

TEST(Observe, DiamondRightOfAgent) {
  auto env = make_grid_environment("t", "...\n.Ad\n...", {View::Window});
  const auto& w = grid(env);
  auto win = w.window(w.initial_state());
  EXPECT_EQ(win[5].item, Item::Diamond);
  for (int i = 0; i < 9; ++i)
    if (i != 5) {
      EXPECT_EQ(win[i].item, Item::None);
    }
}

TEST(Observe, EmptyOverlayMatchesRawWindowEverywhere) {
  for (const char* name : {"obs_tamper_mini", "modifiable_rf_mini", "feedback_mini", "two_aspect_mini"}) {
    auto env = make_environment(name);
    const auto& w = grid(env);
    const GridMap& m = w.map();
    for (StateId s = 0; s < env->num_states(); ++s) {
      GridState g = w.state(s);
      if (!g.overlay.empty()) continue;
      auto win = w.window(g);
      int r0 = g.agent / m.cols, c0 = g.agent % m.cols;
      int k = 0;
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc, ++k) {
          int r = r0 + dr, c = c0 + dc;
          bool in = r >= 0 && r < m.rows && c >= 0 && c < m.cols;
          char want_t = in ? terrain_glyph(m.terrain[r * m.cols + c]) : ' ';
          Item want_i = in ? g.items[r * m.cols + c] : Item::None;
          ASSERT_EQ(win[k].terrain, want_t) << name << " state " << s;
          ASSERT_EQ(win[k].item, want_i) << name << " state " << s;
        }
    }
  }
}

TEST(Kernels, NormalizedEverywhere) {
  for (const auto& name : environment_names()) {
    auto env = make_environment(name);
    EXPECT_EQ(total_mass(env->initial()), 1) << name;
    EXPECT_EQ(total_mass(env->latent_prior()), 1) << name;
    for (StateId s = 0; s < env->num_states(); ++s) {
      for (ActionId a = 0; a < env->num_actions(); ++a) {
        const auto& d = env->transition(s, a);
        ASSERT_EQ(total_mass(d), 1) << name;
        for (const auto& [_, p] : d) ASSERT_GT(p, 0) << name;
      }
      for (LatentId l = 0; l < env->latent_names().size(); ++l) ASSERT_EQ(total_mass(env->feedback(l, s)), 1) << name;
    }
  }
}

TEST(Kernels, RewardParametersNeverMoveTheProperState) {
  for (const auto& name : environment_names()) {
    auto env = make_environment(name);
    auto* w = dynamic_cast<const GridWorld*>(env.get());
    if (!w) continue;
    for (StateId s = 0; s < env->num_states(); ++s) {
      GridState g = w->state(s);
      for (ActionId a = 0; a < env->num_actions(); ++a) {
        GridState ref = w->step_state(g, a);
        for (int td : {-1, 1})
          for (int tr : {-1, 1}) {
            GridState h = g;
            h.theta_diamond = td;
            h.theta_rock = tr;
            GridState n = w->step_state(h, a);
            ASSERT_EQ(n.agent, ref.agent) << name;
            ASSERT_EQ(n.items, ref.items) << name;
            ASSERT_EQ(n.overlay, ref.overlay) << name;
          }
      }
    }
  }
}

TEST(Kernels, MiniaturesStayTractable) {
  for (const auto& name : environment_names()) {
    auto env = make_environment(name);
    EXPECT_LE(env->num_states(), kMaxStates) << name;
  }
  EXPECT_THROW(make_environment("rocks_diamonds_tiles"), IntractableError);
  EXPECT_THROW(make_environment("nowhere"), EnvError);
}

TEST(Advisors, Literals) {
  AdvisorsEnv env;
  ASSERT_EQ(env.initial().size(), 1u);
  StateId s1 = env.initial()[0].first;
  EXPECT_EQ(env.raw(s1)[0], AdvisorsEnv::Expert);
  EXPECT_EQ(env.initial()[0].second, 1);
  EXPECT_EQ(env.latent_prior()[0].second, make_rational(1, 2));
  EXPECT_EQ(env.latent_prior()[1].second, make_rational(1, 2));

  std::map<int, Rational> gd;
  for (const auto& [s, p] : env.transition(s1, AdvisorsEnv::GatherDiamond)) gd[env.raw(s)[0]] = p;
  EXPECT_EQ(gd[AdvisorsEnv::Diamond], make_rational(1, 4));
  EXPECT_EQ(gd[AdvisorsEnv::None], make_rational(3, 4));
  for (ActionId a : {AdvisorsEnv::AskExpert, AdvisorsEnv::AskFool, AdvisorsEnv::GatherRock}) {
    const auto& d = env.transition(s1, a);
    ASSERT_EQ(d.size(), 1u);
    int want = a == AdvisorsEnv::AskExpert ? AdvisorsEnv::Expert : a == AdvisorsEnv::AskFool ? AdvisorsEnv::Fool : AdvisorsEnv::Rock;
    EXPECT_EQ(env.raw(d[0].first)[0], want);
  }

  LatentId rock = env.latent_id("rock"), diamond = env.latent_id("diamond");
  StateId fool = env.transition(s1, AdvisorsEnv::AskFool)[0].first;
  for (LatentId l : {rock, diamond}) {
    const auto& f = env.feedback(l, fool);
    ASSERT_EQ(f.size(), 1u);
    EXPECT_EQ(env.feedback_names()[f[0].first], "rock");
    const auto& e = env.feedback(l, s1);
    ASSERT_EQ(e.size(), 1u);
    EXPECT_EQ(env.feedback_names()[e[0].first], env.latent_names()[l]);
  }
  for (StateId s = 0; s < env.num_states(); ++s) {
    int k = env.raw(s)[0];
    if (k == AdvisorsEnv::Rock || k == AdvisorsEnv::Diamond || k == AdvisorsEnv::None) {
      EXPECT_EQ(env.feedback(rock, s)[0].first, kNoFeedback);
    }
  }
  // the first state is the expert, never rewarded whatever the reward model says
  for (int p : {-1, 0, 1}) EXPECT_EQ(env.reward(s1, {p}), 0);
  StateId rs = env.transition(s1, AdvisorsEnv::GatherRock)[0].first;
  EXPECT_EQ(env.reward(rs, {0}), 1);
  EXPECT_EQ(env.reward(rs, {1}), 0);
  EXPECT_EQ(env.rm_update({-1}, kNoFeedback), Params{-1});
  EXPECT_EQ(env.rm_update({-1}, 2), Params{1});
}

TEST(Advisors, EqualCredibilityLikelihood) {
  AdvisorsEnv env(true);
  StateId s1 = env.initial()[0].first;
  StateId fool = env.transition(s1, AdvisorsEnv::AskFool)[0].first;
  for (StateId s : {s1, fool}) {
    std::map<std::string, Rational> f;
    for (const auto& [d, p] : env.feedback(env.latent_id("diamond"), s)) f[env.feedback_names()[d]] = p;
    EXPECT_EQ(f["diamond"], make_rational(3, 4));
    EXPECT_EQ(f["rock"], make_rational(1, 4));
  }
}

TEST(Chase, StayingLetsBothApproach) {
  ChaseLayout l;
  l.rows = 1;
  l.cols = 9;
  l.agent = 4;
  l.expert = 0;
  l.fool = 8;
  ChaseEnv env(l);
  StateId s = env.initial()[0].first;
  for (int i = 0; i < 3; ++i) s = env.transition(s, ChaseEnv::Stay)[0].first;
  auto p = env.pos(s);
  EXPECT_EQ(p.expert, 3);
  EXPECT_EQ(p.fool, 5);
  EXPECT_FALSE(p.expert_done);
  EXPECT_FALSE(p.fool_done);
}

TEST(Chase, ContactRewritesParameters) {
  ChaseLayout l;
  l.rows = 1;
  l.cols = 9;
  l.agent = 4;
  l.expert = 0;
  l.fool = 8;
  l.theta_diamond = -1;
  l.theta_rock = -1;
  l.true_diamond = 1;
  l.true_rock = -1;
  ChaseEnv env(l);
  // run left into the expert
  StateId s = env.initial()[0].first;
  s = env.transition(s, ChaseEnv::Left)[0].first;  // agent 3, expert 1
  s = env.transition(s, ChaseEnv::Left)[0].first;  // agent 2, expert moves onto it
  auto p = env.pos(s);
  EXPECT_TRUE(p.expert_done);
  EXPECT_EQ(env.aspects(s), (Params{1, -1}));
  // the expert stops, the fool keeps coming
  int expert_at = p.expert;
  s = env.transition(s, ChaseEnv::Stay)[0].first;
  EXPECT_EQ(env.pos(s).expert, expert_at);

  StateId f = env.initial()[0].first;
  f = env.transition(f, ChaseEnv::Right)[0].first;
  f = env.transition(f, ChaseEnv::Right)[0].first;
  EXPECT_TRUE(env.pos(f).fool_done);
  EXPECT_EQ(env.aspects(f), (Params{1, 1}));
}

TEST(Chase, SimultaneousContactAppliesExpertLast) {
  ChaseLayout l;
  l.rows = 1;
  l.cols = 3;
  l.agent = 1;
  l.expert = 0;
  l.fool = 2;
  l.true_diamond = -1;
  l.true_rock = 1;
  ChaseEnv env(l);
  StateId s = env.initial()[0].first;
  s = env.transition(s, ChaseEnv::Stay)[0].first;
  auto p = env.pos(s);
  EXPECT_TRUE(p.expert_done);
  EXPECT_TRUE(p.fool_done);
  EXPECT_EQ(env.aspects(s), (Params{-1, 1}));
}

TEST(Chase, ParseLayout) {
  auto l = parse_chase_layout("#.#\nE.A\nd.F\n");
  EXPECT_EQ(l.rows, 3);
  EXPECT_EQ(l.cols, 3);
  EXPECT_EQ(l.agent, 5);
  EXPECT_EQ(l.expert, 3);
  EXPECT_EQ(l.fool, 8);
  EXPECT_EQ(l.walls, (std::vector<int>{0, 2}));
  EXPECT_EQ(l.diamond_pads, (std::vector<int>{6}));
  EXPECT_THROW(parse_chase_layout("E.A\n"), EnvError);
  EXPECT_THROW(parse_chase_layout("E.A\n.F\n"), EnvError);
  EXPECT_THROW(parse_chase_layout("EAFx\n"), EnvError);
}

TEST(Chase, WallsBlockAgentAndNpcsGoAround) {
  // fool must go around the wall block to reach the agent
  ChaseEnv env(parse_chase_layout(
      "A#F\n"
      ".#.\n"
      "..E\n"));
  StateId s = env.initial()[0].first;
  s = env.transition(s, ChaseEnv::Right)[0].first;
  auto p = env.pos(s);
  EXPECT_EQ(p.agent, 0);
  EXPECT_EQ(p.fool, 5);    // down the right column
  EXPECT_EQ(p.expert, 7);  // left along the bottom
  s = env.transition(s, ChaseEnv::Up)[0].first;
  p = env.pos(s);
  EXPECT_EQ(p.fool, 8);
  EXPECT_EQ(p.expert, 6);
}

TEST(Chase, DefaultLayoutHasEscapeShaft) {
  ChaseEnv env(default_chase_layout());
  auto p = env.initial_pos();
  EXPECT_EQ(env.distance(p.agent, p.expert), 1);
  EXPECT_EQ(env.distance(p.agent, p.fool), 1);
  StateId s = env.initial()[0].first;
  StateId up = env.transition(s, ChaseEnv::Up)[0].first;
  auto q = env.pos(up);
  // the agent's own step, measured against where the NPCs stood
  EXPECT_GT(env.distance(q.agent, p.expert), env.distance(p.agent, p.expert));
  EXPECT_GT(env.distance(q.agent, p.fool), env.distance(p.agent, p.fool));
  EXPECT_EQ(env.transition(s, ChaseEnv::Down)[0].first, env.transition(s, ChaseEnv::Stay)[0].first);
  EXPECT_LT(env.num_states(), 100000u);
}

TEST(Chase, AfterExpertStartsDelivered) {
  ChaseEnv env(chase_after_expert_layout());
  StateId s = env.initial()[0].first;
  EXPECT_TRUE(env.pos(s).expert_done);
  EXPECT_EQ(env.aspects(s), env.latent_params(0));
  int e = env.pos(s).expert;
  s = env.transition(s, ChaseEnv::Stay)[0].first;
  EXPECT_EQ(env.pos(s).expert, e);
  EXPECT_EQ(make_environment("chase_after_expert")->name(), "chase_after_expert");
}

TEST(BeliefTamper, TamperCorruptsOnlyTheObservation) {
  BeliefTamperEnv env(3);
  StateId s = env.initial()[0].first;
  s = env.transition(s, BeliefTamperEnv::Tamper)[0].first;
  EXPECT_EQ(env.raw(s)[1], 0);
  EXPECT_NE(env.observation_text(env.observe(s)).find("seen=3"), std::string::npos);
  for (int i = 0; i < 2; ++i) s = env.transition(s, BeliefTamperEnv::Tamper)[0].first;
  EXPECT_EQ(env.observation_reward(s), 3);
  EXPECT_EQ(env.user_utility(s, 0), 0);
}

TEST(BeliefTamper, GatheringExpectsAQuarterPerStep) {
  for (int n = 1; n <= 5; ++n) {
    BeliefTamperEnv env(n);
    std::map<StateId, Rational> dist{{env.initial()[0].first, Rational(1)}};
    for (int k = 0; k < n; ++k) {
      std::map<StateId, Rational> next;
      for (const auto& [s, p] : dist)
        for (const auto& [t, q] : env.transition(s, BeliefTamperEnv::Gather)) next[t] += p * q;
      dist = next;
    }
    Rational expected = 0;
    for (const auto& [s, p] : dist) expected += p * env.raw(s)[1];
    EXPECT_EQ(expected, make_rational(n, 4)) << n;
  }
}
