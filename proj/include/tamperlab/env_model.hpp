#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tamperlab/rational.hpp"

namespace tamperlab::worlds {

using StateId = std::uint32_t;
using ActionId = std::uint32_t;
using LatentId = std::uint32_t;
using FeedbackId = std::uint32_t;
using ObsId = std::uint32_t;

// One integer per named aspect (reward parameter, observation overlay code, ...).
using Params = std::vector<int>;

inline constexpr FeedbackId kNoFeedback = 0;
inline constexpr std::size_t kMaxStates = 100000;

class EnvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IntractableError : public EnvError {
 public:
  using EnvError::EnvError;
};

// Finite environment with an explicitly enumerated state space.
// Subclasses describe states as integer vectors (Raw); the constructor of the
// subclass calls enumerate() once its configuration is set.
class EnvModel {
 public:
  using Raw = std::vector<int>;

  virtual ~EnvModel() = default;

  const std::string& name() const { return name_; }

  std::size_t num_states() const { return raws_.size(); }
  std::size_t num_actions() const { return actions_.size(); }
  const std::vector<std::string>& action_names() const { return actions_; }
  ActionId action_id(std::string_view a) const;

  const Dist<StateId>& initial() const { return initial_; }
  const Dist<StateId>& transition(StateId s, ActionId a) const;
  const Raw& raw(StateId s) const { return raws_.at(s); }
  StateId id_of(const Raw& r) const;
  std::string describe(StateId s) const { return raw_describe(raws_.at(s)); }

  // aspects
  const std::vector<std::string>& aspect_names() const { return aspect_names_; }
  // Expands aliases such as "reward_params"; throws on unknown names.
  std::vector<std::size_t> aspect_indices(const std::vector<std::string>& names) const;
  const Params& aspects(StateId s) const { return aspects_.at(s); }
  Rational reward(StateId s, const Params& p) const { return raw_reward(raws_.at(s), p); }

  // latent user parameter
  const std::vector<std::string>& latent_names() const { return latent_names_; }
  LatentId latent_id(std::string_view n) const;
  const Dist<LatentId>& latent_prior() const { return latent_prior_; }
  const Params& latent_params(LatentId l) const { return latent_params_.at(l); }
  Rational user_utility(StateId s, LatentId l) const { return raw_user_utility(raws_.at(s), l); }

  // feedback channel
  bool has_feedback() const { return has_feedback_; }
  const std::vector<std::string>& feedback_names() const { return feedback_names_; }
  const Dist<FeedbackId>& feedback(LatentId l, StateId s) const;
  const Params& rm_initial() const { return rm_initial_; }
  // most recent non-empty feedback wins
  Params rm_update(const Params& p, FeedbackId d) const;

  // observation channel
  bool has_observation() const { return has_observation_; }
  ObsId observe(StateId s) const { return obs_.at(s); }
  const std::string& observation_text(ObsId o) const { return obs_text_.at(o); }
  Rational observation_reward(StateId s) const { return raw_observation_reward(raws_.at(s)); }

 protected:
  virtual Dist<Raw> raw_initial() const = 0;
  virtual Dist<Raw> raw_step(const Raw& s, ActionId a) const = 0;
  virtual Params raw_aspects(const Raw& s) const = 0;
  virtual Rational raw_reward(const Raw& s, const Params& p) const = 0;
  virtual std::string raw_describe(const Raw& s) const;
  virtual Dist<FeedbackId> raw_feedback(LatentId l, const Raw& s) const;
  virtual std::string raw_observe(const Raw& s) const { return raw_describe(s); }
  virtual Rational raw_observation_reward(const Raw& s) const { return raw_reward(s, raw_aspects(s)); }
  virtual Rational raw_user_utility(const Raw& s, LatentId l) const { return raw_reward(s, latent_params_.at(l)); }

  // Breadth-first enumeration from the initial distribution. Also fills the
  // default single latent and the reward-model start when the subclass left them empty.
  void enumerate();

  std::string name_;
  std::vector<std::string> actions_;
  std::vector<std::string> aspect_names_;
  std::map<std::string, std::vector<std::string>> aspect_aliases_;
  std::vector<std::string> latent_names_;
  Dist<LatentId> latent_prior_;
  std::vector<Params> latent_params_;
  bool has_feedback_ = false;
  std::vector<std::string> feedback_names_{"none"};
  std::vector<Params> feedback_params_{{}};
  Params rm_initial_;
  bool has_observation_ = false;

 private:
  std::vector<Raw> raws_;
  std::map<Raw, StateId> index_;
  Dist<StateId> initial_;
  std::vector<std::vector<Dist<StateId>>> trans_;
  std::vector<Params> aspects_;
  std::vector<std::vector<Dist<FeedbackId>>> feedback_;
  std::vector<ObsId> obs_;
  std::vector<std::string> obs_text_;
};

}  // namespace tamperlab::worlds
