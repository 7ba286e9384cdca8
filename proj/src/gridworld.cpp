#include "tamperlab/gridworld.hpp"

#include <sstream>

namespace tamperlab::worlds {

namespace {

constexpr int kDr[] = {-1, 1, 0, 0, 0};
constexpr int kDc[] = {0, 0, -1, 1, 0};

char item_glyph(Item i) { return i == Item::Rock ? 'r' : i == Item::Diamond ? 'd' : '.'; }

// (+1,-1) ordering of the four sign combinations
constexpr int kCombos[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};

int combo_index(int td, int tr) {
  for (int i = 0; i < 4; ++i)
    if (kCombos[i][0] == td && kCombos[i][1] == tr) return i;
  return -1;
}

}  // namespace

char terrain_glyph(Terrain t) {
  switch (t) {
    case Terrain::Floor: return '.';
    case Terrain::Wall: return '#';
    case Terrain::Goal: return 'G';
    case Terrain::ThetaDiamond: return 'P';
    case Terrain::ThetaRock: return 'Q';
    case Terrain::Expert: return 'E';
    case Terrain::Fool: return 'F';
    case Terrain::ObsDiamond: return 'o';
    case Terrain::ObsRock: return 'O';
  }
  return '?';
}

std::string GridMap::normalize(std::string_view text) {
  std::string out, line;
  auto flush = [&] {
    if (!line.empty()) out += line + "\n";
    line.clear();
  };
  for (char c : text) {
    if (c == '\n') flush();
    else if (c != '\r' && c != ' ' && c != '\t') line += c;
  }
  flush();
  return out;
}

GridMap GridMap::parse(std::string_view text) {
  std::string norm = normalize(text);
  std::vector<std::string> lines;
  std::istringstream in(norm);
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  if (lines.empty()) throw MapError("empty map");
  GridMap m;
  m.rows = static_cast<int>(lines.size());
  m.cols = static_cast<int>(lines[0].size());
  int agents = 0;
  for (int r = 0; r < m.rows; ++r) {
    if (static_cast<int>(lines[r].size()) != m.cols)
      throw MapError("ragged map: row " + std::to_string(r) + " has " + std::to_string(lines[r].size()) +
                     " cells, expected " + std::to_string(m.cols));
    for (int c = 0; c < m.cols; ++c) {
      char g = lines[r][c];
      Terrain t = Terrain::Floor;
      Item it = Item::None;
      switch (g) {
        case '.': break;
        case '#': t = Terrain::Wall; break;
        case 'G': t = Terrain::Goal; break;
        case 'A':
          ++agents;
          m.agent = m.cell(r, c);
          break;
        case 'r': it = Item::Rock; break;
        case 'd': it = Item::Diamond; break;
        case 'P': t = Terrain::ThetaDiamond; break;
        case 'Q': t = Terrain::ThetaRock; break;
        case 'E': t = Terrain::Expert; break;
        case 'F': t = Terrain::Fool; break;
        case 'o': t = Terrain::ObsDiamond; break;
        case 'O': t = Terrain::ObsRock; break;
        default:
          throw MapError(std::string("unknown glyph '") + g + "' at row " + std::to_string(r) + ", column " +
                         std::to_string(c));
      }
      m.terrain.push_back(t);
      m.items.push_back(it);
    }
  }
  if (agents != 1) throw MapError("map needs exactly one agent, found " + std::to_string(agents));
  return m;
}

std::string GridMap::render() const {
  std::string out;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      int i = cell(r, c);
      if (i == agent) out += 'A';
      else if (items[i] != Item::None) out += item_glyph(items[i]);
      else out += terrain_glyph(terrain[i]);
    }
    out += '\n';
  }
  return out;
}

bool GridMap::has(Terrain t) const {
  for (Terrain x : terrain)
    if (x == t) return true;
  return false;
}

std::string GridWorld::latent_label(int td, int tr) {
  auto sign = [](int v) { return v > 0 ? std::string("+1") : std::string("-1"); };
  return "(" + sign(td) + "," + sign(tr) + ")";
}

GridWorld::GridWorld(std::string name, GridMap map, GridOptions opt) : map_(std::move(map)), opt_(opt) {
  name_ = std::move(name);
  actions_ = {"up", "down", "left", "right", "stay"};
  aspect_names_ = {"theta_diamond", "theta_rock", "obs_params"};
  aspect_aliases_ = {{"reward_params", {"theta_diamond", "theta_rock"}}};
  bool tiles = map_.has(Terrain::ObsDiamond) || map_.has(Terrain::ObsRock);
  windowed_ = opt_.view == View::Window || (opt_.view == View::Auto && tiles);
  has_observation_ = true;
  if (map_.has(Terrain::Expert) || map_.has(Terrain::Fool)) {
    has_feedback_ = true;
    for (const auto& c : kCombos) {
      latent_names_.push_back(latent_label(c[0], c[1]));
      latent_params_.push_back({c[0], c[1], 0});
      latent_prior_.emplace_back(static_cast<LatentId>(latent_prior_.size()), make_rational(1, 4));
      feedback_names_.push_back(latent_label(c[0], c[1]));
      feedback_params_.push_back({c[0], c[1], 0});
    }
  }
  enumerate();
}

GridState GridWorld::initial_state() const {
  GridState g;
  g.agent = map_.agent;
  g.theta_diamond = opt_.theta_diamond;
  g.theta_rock = opt_.theta_rock;
  g.items = map_.items;
  return g;
}

EnvModel::Raw GridWorld::encode(const GridState& g) const {
  Raw r{g.agent, g.theta_diamond, g.theta_rock};
  for (std::size_t i = 0; i < kOverlaySlots; ++i)
    r.push_back(i < g.overlay.size() ? static_cast<int>(g.overlay[i]) : 0);
  for (Item it : g.items) r.push_back(static_cast<int>(it));
  return r;
}

GridState GridWorld::decode(const Raw& r) const {
  GridState g;
  g.agent = r[0];
  g.theta_diamond = r[1];
  g.theta_rock = r[2];
  for (std::size_t i = 0; i < kOverlaySlots && r[3 + i] != 0; ++i) g.overlay.push_back(static_cast<Item>(r[3 + i]));
  for (std::size_t i = 3 + kOverlaySlots; i < r.size(); ++i) g.items.push_back(static_cast<Item>(r[i]));
  return g;
}

GridState GridWorld::step_state(const GridState& g, ActionId a) const {
  if (a >= actions_.size()) throw EnvError("unknown action " + std::to_string(a));
  GridState n = g;
  int r = g.agent / map_.cols, c = g.agent % map_.cols;
  int tr = r + kDr[a], tc = c + kDc[a];
  bool moved = false;
  if (a != Stay && map_.in_bounds(tr, tc) && map_.terrain[map_.cell(tr, tc)] != Terrain::Wall) {
    int target = map_.cell(tr, tc);
    if (n.items[target] == Item::None) {
      moved = true;
    } else {
      int br = tr + kDr[a], bc = tc + kDc[a];
      if (map_.in_bounds(br, bc)) {
        int beyond = map_.cell(br, bc);
        if (map_.terrain[beyond] != Terrain::Wall && n.items[beyond] == Item::None) {
          n.items[beyond] = n.items[target];
          n.items[target] = Item::None;
          moved = true;
        }
      }
    }
    if (moved) n.agent = target;
  }
  Terrain here = map_.terrain[n.agent];
  if (moved && here == Terrain::ThetaDiamond) n.theta_diamond = -n.theta_diamond;
  if (moved && here == Terrain::ThetaRock) n.theta_rock = -n.theta_rock;
  if (n.overlay.size() < kOverlaySlots) {
    if (here == Terrain::ObsDiamond) n.overlay.push_back(Item::Diamond);
    if (here == Terrain::ObsRock) n.overlay.push_back(Item::Rock);
  }
  return n;
}

std::array<ViewCell, 9> GridWorld::window(const GridState& g) const {
  std::array<ViewCell, 9> w{};
  int r0 = g.agent / map_.cols, c0 = g.agent % map_.cols;
  for (int i = 0; i < 9; ++i) {
    int r = r0 + i / 3 - 1, c = c0 + i % 3 - 1;
    if (!map_.in_bounds(r, c)) continue;
    int cell = map_.cell(r, c);
    w[i].terrain = terrain_glyph(map_.terrain[cell]);
    w[i].item = g.items[cell];
  }
  for (std::size_t i = 0; i < g.overlay.size(); ++i) w[i].item = g.overlay[i];
  return w;
}

int GridWorld::reward_with(const GridState& g, int td, int tr) const {
  int d = 0, rk = 0;
  for (std::size_t i = 0; i < g.items.size(); ++i) {
    if (map_.terrain[i] != Terrain::Goal) continue;
    if (g.items[i] == Item::Diamond) ++d;
    if (g.items[i] == Item::Rock) ++rk;
  }
  return td * d + tr * rk;
}

int GridWorld::observed_reward_with(const GridState& g) const {
  int total = 0;
  for (const ViewCell& v : window(g)) {
    if (v.terrain != 'G') continue;
    if (v.item == Item::Diamond) total += g.theta_diamond;
    if (v.item == Item::Rock) total += g.theta_rock;
  }
  return total;
}

Dist<EnvModel::Raw> GridWorld::raw_initial() const { return {{encode(initial_state()), Rational(1)}}; }

Dist<EnvModel::Raw> GridWorld::raw_step(const Raw& s, ActionId a) const {
  return {{encode(step_state(decode(s), a)), Rational(1)}};
}

Params GridWorld::raw_aspects(const Raw& s) const {
  int code = 0, scale = 1;
  for (std::size_t i = 0; i < kOverlaySlots; ++i, scale *= 3) code += s[3 + i] * scale;
  return {s[1], s[2], code};
}

Rational GridWorld::raw_reward(const Raw& s, const Params& p) const { return reward_with(decode(s), p.at(0), p.at(1)); }

std::string GridWorld::raw_describe(const Raw& s) const {
  GridState g = decode(s);
  GridMap shown = map_;
  shown.agent = g.agent;
  shown.items = g.items;
  std::string out = shown.render();
  out += "theta=" + latent_label(g.theta_diamond, g.theta_rock);
  if (!g.overlay.empty()) {
    out += " overlay=";
    for (Item it : g.overlay) out += item_glyph(it);
  }
  return out + "\n";
}

Dist<FeedbackId> GridWorld::raw_feedback(LatentId l, const Raw& s) const {
  if (!has_feedback_) return {{kNoFeedback, Rational(1)}};
  Terrain here = map_.terrain[s[0]];
  if (here == Terrain::Expert) return {{static_cast<FeedbackId>(1 + l), Rational(1)}};
  if (here == Terrain::Fool) return {{static_cast<FeedbackId>(1 + combo_index(1, 1)), Rational(1)}};
  return {{kNoFeedback, Rational(1)}};
}

std::string GridWorld::raw_observe(const Raw& s) const {
  if (!windowed_) return raw_describe(s);
  std::string out;
  auto w = window(decode(s));
  for (int i = 0; i < 9; ++i) {
    out += w[i].terrain;
    out += w[i].item == Item::None ? ' ' : item_glyph(w[i].item);
    if (i % 3 == 2) out += '\n';
  }
  return out;
}

Rational GridWorld::raw_observation_reward(const Raw& s) const {
  GridState g = decode(s);
  return windowed_ ? observed_reward_with(g) : reward_with(g, g.theta_diamond, g.theta_rock);
}

}  // namespace tamperlab::worlds
