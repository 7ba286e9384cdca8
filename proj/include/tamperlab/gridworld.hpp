#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "tamperlab/env_model.hpp"

namespace tamperlab::worlds {

enum class Terrain { Floor, Wall, Goal, ThetaDiamond, ThetaRock, Expert, Fool, ObsDiamond, ObsRock };
enum class Item { None = 0, Rock = 1, Diamond = 2 };

class MapError : public EnvError {
 public:
  using EnvError::EnvError;
};

// Static layout plus the initial agent and item positions. Cells are row-major.
struct GridMap {
  int rows = 0;
  int cols = 0;
  std::vector<Terrain> terrain;
  std::vector<Item> items;
  int agent = 0;

  // Legend: . # G A r d P Q E F o O. Spaces inside a row are ignored.
  static GridMap parse(std::string_view text);
  // Drops carriage returns, blanks inside rows and empty lines.
  static std::string normalize(std::string_view text);
  std::string render() const;

  int cell(int r, int c) const { return r * cols + c; }
  bool in_bounds(int r, int c) const { return r >= 0 && r < rows && c >= 0 && c < cols; }
  bool has(Terrain t) const;
};

char terrain_glyph(Terrain t);

struct GridState {
  int agent = 0;
  int theta_diamond = 1;
  int theta_rock = -1;
  std::vector<Item> overlay;  // slot i holds the i-th fake item
  std::vector<Item> items;
};

// Window cell as seen by the camera.
struct ViewCell {
  char terrain = ' ';  // ' ' out of bounds
  Item item = Item::None;
};

enum class View { Auto, Full, Window };

struct GridOptions {
  View view = View::Auto;
  int theta_diamond = 1;
  int theta_rock = -1;
};

// Rocks-and-diamonds world. Aspects: theta_diamond, theta_rock, obs_params
// (alias reward_params = both thetas). Maps with E/F tiles get a latent user
// parameter over the four sign combinations and a feedback channel.
class GridWorld : public EnvModel {
 public:
  static constexpr ActionId Up = 0, Down = 1, Left = 2, Right = 3, Stay = 4;
  static constexpr std::size_t kOverlaySlots = 9;

  GridWorld(std::string name, GridMap map, GridOptions opt = {});

  const GridMap& map() const { return map_; }
  bool windowed() const { return windowed_; }

  GridState state(StateId s) const { return decode(raw(s)); }
  StateId id_of_state(const GridState& g) const { return id_of(encode(g)); }
  GridState initial_state() const;
  // deterministic successor
  GridState step_state(const GridState& g, ActionId a) const;

  std::array<ViewCell, 9> window(const GridState& g) const;
  int reward_with(const GridState& g, int theta_diamond, int theta_rock) const;
  int observed_reward_with(const GridState& g) const;

  static std::string latent_label(int theta_diamond, int theta_rock);

 protected:
  Dist<Raw> raw_initial() const override;
  Dist<Raw> raw_step(const Raw& s, ActionId a) const override;
  Params raw_aspects(const Raw& s) const override;
  Rational raw_reward(const Raw& s, const Params& p) const override;
  std::string raw_describe(const Raw& s) const override;
  Dist<FeedbackId> raw_feedback(LatentId l, const Raw& s) const override;
  std::string raw_observe(const Raw& s) const override;
  Rational raw_observation_reward(const Raw& s) const override;

 private:
  Raw encode(const GridState& g) const;
  GridState decode(const Raw& r) const;

  GridMap map_;
  GridOptions opt_;
  bool windowed_ = false;
};

}  // namespace tamperlab::worlds
