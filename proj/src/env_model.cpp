#include "tamperlab/env_model.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace tamperlab::worlds {

namespace {

template <class T>
void require_normalized(const Dist<T>& d, const std::string& what) {
  for (const auto& [_, p] : d)
    if (p < 0) throw EnvError(what + ": negative probability");
  if (total_mass(d) != 1) throw EnvError(what + ": probabilities sum to " + to_fraction(total_mass(d)));
}

}  // namespace

ActionId EnvModel::action_id(std::string_view a) const {
  for (std::size_t i = 0; i < actions_.size(); ++i)
    if (actions_[i] == a) return static_cast<ActionId>(i);
  std::string valid;
  for (const auto& n : actions_) valid += (valid.empty() ? "" : ", ") + n;
  throw EnvError("unknown action '" + std::string(a) + "' (valid: " + valid + ")");
}

const Dist<StateId>& EnvModel::transition(StateId s, ActionId a) const {
  if (s >= raws_.size()) throw EnvError("state " + std::to_string(s) + " not in domain");
  if (a >= actions_.size()) throw EnvError("unknown action " + std::to_string(a));
  return trans_[s][a];
}

StateId EnvModel::id_of(const Raw& r) const {
  auto it = index_.find(r);
  if (it == index_.end()) throw EnvError("state not in domain");
  return it->second;
}

std::vector<std::size_t> EnvModel::aspect_indices(const std::vector<std::string>& names) const {
  std::vector<std::size_t> out;
  auto add = [&](const std::string& n) {
    auto it = std::find(aspect_names_.begin(), aspect_names_.end(), n);
    if (it == aspect_names_.end()) {
      std::string valid;
      for (const auto& a : aspect_names_) valid += (valid.empty() ? "" : ", ") + a;
      for (const auto& [k, _] : aspect_aliases_) valid += ", " + k;
      throw EnvError("unknown aspect '" + n + "' (valid: " + valid + ")");
    }
    std::size_t i = static_cast<std::size_t>(it - aspect_names_.begin());
    if (std::find(out.begin(), out.end(), i) == out.end()) out.push_back(i);
  };
  for (const auto& n : names) {
    auto al = aspect_aliases_.find(n);
    if (al != aspect_aliases_.end())
      for (const auto& m : al->second) add(m);
    else
      add(n);
  }
  std::sort(out.begin(), out.end());
  return out;
}

LatentId EnvModel::latent_id(std::string_view n) const {
  for (std::size_t i = 0; i < latent_names_.size(); ++i)
    if (latent_names_[i] == n) return static_cast<LatentId>(i);
  std::string valid;
  for (const auto& x : latent_names_) valid += (valid.empty() ? "" : ", ") + x;
  throw EnvError("unknown latent value '" + std::string(n) + "' (valid: " + valid + ")");
}

const Dist<FeedbackId>& EnvModel::feedback(LatentId l, StateId s) const {
  if (l >= latent_names_.size()) throw EnvError("unknown latent " + std::to_string(l));
  return feedback_.at(s)[l];
}

Params EnvModel::rm_update(const Params& p, FeedbackId d) const {
  if (d == kNoFeedback) return p;
  return feedback_params_.at(d);
}

std::string EnvModel::raw_describe(const Raw& s) const {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < s.size(); ++i) out << (i ? "," : "") << s[i];
  out << ")";
  return out.str();
}

Dist<FeedbackId> EnvModel::raw_feedback(LatentId, const Raw&) const { return {{kNoFeedback, Rational(1)}}; }

void EnvModel::enumerate() {
  raws_.clear();
  index_.clear();
  auto intern = [&](const Raw& r, std::deque<StateId>& todo) {
    auto [it, fresh] = index_.emplace(r, static_cast<StateId>(raws_.size()));
    if (fresh) {
      if (raws_.size() >= kMaxStates)
        throw IntractableError("environment '" + name_ + "' has more than " + std::to_string(kMaxStates) +
                               " reachable states");
      raws_.push_back(r);
      todo.push_back(it->second);
    }
    return it->second;
  };
  auto merge = [](Dist<StateId> d) {
    std::sort(d.begin(), d.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    Dist<StateId> out;
    for (auto& [s, p] : d) {
      if (p == 0) continue;
      if (!out.empty() && out.back().first == s) out.back().second += p;
      else out.emplace_back(s, p);
    }
    return out;
  };

  std::deque<StateId> todo;
  Dist<StateId> init;
  for (const auto& [r, p] : raw_initial()) init.emplace_back(intern(r, todo), p);
  initial_ = merge(init);
  require_normalized(initial_, name_ + " initial distribution");

  trans_.clear();
  while (!todo.empty()) {
    StateId s = todo.front();
    todo.pop_front();
    if (trans_.size() <= s) trans_.resize(s + 1);
    trans_[s].resize(actions_.size());
    for (ActionId a = 0; a < actions_.size(); ++a) {
      Dist<StateId> d;
      for (const auto& [r, p] : raw_step(raws_[s], a)) d.emplace_back(intern(r, todo), p);
      trans_[s][a] = merge(d);
      require_normalized(trans_[s][a], name_ + " transition from " + raw_describe(raws_[s]));
    }
  }

  aspects_.clear();
  for (const auto& r : raws_) aspects_.push_back(raw_aspects(r));

  if (rm_initial_.empty()) rm_initial_ = aspects_[initial_.front().first];
  if (latent_names_.empty()) {
    latent_names_ = {"default"};
    latent_prior_ = {{0, Rational(1)}};
    latent_params_ = {rm_initial_};
  }
  require_normalized(latent_prior_, name_ + " latent prior");

  feedback_.assign(raws_.size(), {});
  for (StateId s = 0; s < raws_.size(); ++s)
    for (LatentId l = 0; l < latent_names_.size(); ++l) {
      Dist<FeedbackId> d = raw_feedback(l, raws_[s]);
      require_normalized(d, name_ + " feedback at " + raw_describe(raws_[s]));
      for (const auto& [f, _] : d)
        if (f >= feedback_names_.size()) throw EnvError(name_ + ": feedback id out of range");
      feedback_[s].push_back(std::move(d));
    }

  obs_.clear();
  obs_text_.clear();
  std::map<std::string, ObsId> seen;
  for (const auto& r : raws_) {
    std::string text = raw_observe(r);
    auto [it, fresh] = seen.emplace(text, static_cast<ObsId>(obs_text_.size()));
    if (fresh) obs_text_.push_back(text);
    obs_.push_back(it->second);
  }
}

}  // namespace tamperlab::worlds
