#include "tamperlab/worlds.hpp"

namespace tamperlab::worlds {

const char* AdvisorsEnv::state_name(int s) {
  static const char* names[] = {"expert", "fool", "rock", "diamond", "none"};
  return names[s];
}

AdvisorsEnv::AdvisorsEnv(bool equal_credibility) : equal_credibility_(equal_credibility) {
  name_ = equal_credibility ? "advisors_equal_credibility" : "advisors";
  actions_ = {"ask_expert", "ask_fool", "gather_rock", "gather_diamond"};
  aspect_names_ = {"reward_params"};
  latent_names_ = {"rock", "diamond"};
  latent_prior_ = {{0, make_rational(1, 2)}, {1, make_rational(1, 2)}};
  latent_params_ = {{0}, {1}};
  has_feedback_ = true;
  feedback_names_ = {"none", "rock", "diamond"};
  feedback_params_ = {{}, {0}, {1}};
  rm_initial_ = {-1};
  enumerate();
}

Dist<EnvModel::Raw> AdvisorsEnv::raw_initial() const { return {{{Expert}, Rational(1)}}; }

Dist<EnvModel::Raw> AdvisorsEnv::raw_step(const Raw&, ActionId a) const {
  switch (a) {
    case AskExpert: return {{{Expert}, Rational(1)}};
    case AskFool: return {{{Fool}, Rational(1)}};
    case GatherRock: return {{{Rock}, Rational(1)}};
    case GatherDiamond: return {{{Diamond}, make_rational(1, 4)}, {{None}, make_rational(3, 4)}};
  }
  throw EnvError("unknown action " + std::to_string(a));
}

Params AdvisorsEnv::raw_aspects(const Raw&) const { return {-1}; }

Rational AdvisorsEnv::raw_reward(const Raw& s, const Params& p) const {
  if (s[0] == Rock && p.at(0) == 0) return 1;
  if (s[0] == Diamond && p.at(0) == 1) return 1;
  return 0;
}

std::string AdvisorsEnv::raw_describe(const Raw& s) const { return state_name(s[0]); }

Dist<FeedbackId> AdvisorsEnv::raw_feedback(LatentId l, const Raw& s) const {
  const FeedbackId truth = 1 + l, other = 2 - l;
  if (equal_credibility_ && (s[0] == Expert || s[0] == Fool))
    return {{truth, make_rational(3, 4)}, {other, make_rational(1, 4)}};
  if (s[0] == Expert) return {{truth, Rational(1)}};
  if (s[0] == Fool) return {{1, Rational(1)}};
  return {{kNoFeedback, Rational(1)}};
}

}  // namespace tamperlab::worlds
