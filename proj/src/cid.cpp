#include "tamperlab/cid.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <deque>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"

namespace tamperlab::cid {

namespace {

using Json = nlohmann::json;

NodeKind parse_node_kind(const std::string& s) {
  if (s == "chance") return NodeKind::Chance;
  if (s == "decision") return NodeKind::Decision;
  if (s == "utility") return NodeKind::Utility;
  throw DiagramError("unknown node kind '" + s + "'");
}

EdgeKind parse_edge_kind(const std::string& s) {
  if (s == "causal") return EdgeKind::Causal;
  if (s == "information") return EdgeKind::Information;
  throw DiagramError("unknown edge kind '" + s + "'");
}

std::string edge_name(const Edge& e) { return e.from + "->" + e.to; }

}  // namespace

const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Chance: return "chance";
    case NodeKind::Decision: return "decision";
    case NodeKind::Utility: return "utility";
  }
  return "?";
}

const char* to_string(EdgeKind k) {
  return k == EdgeKind::Causal ? "causal" : "information";
}

const char* to_string(Incentive c) {
  switch (c) {
    case Incentive::None: return "none";
    case Incentive::Information: return "information";
    case Incentive::Control: return "control";
  }
  return "?";
}

InfluenceDiagram InfluenceDiagram::build(std::vector<Node> nodes, std::vector<Edge> edges) {
  InfluenceDiagram d;
  std::sort(nodes.begin(), nodes.end(),
            [](const Node& a, const Node& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    if (n.id.empty()) throw DiagramError("node with empty id");
    if (i > 0 && nodes[i - 1].id == n.id) throw DiagramError("duplicate node '" + n.id + "'");
    if (n.kind == NodeKind::Chance && n.agent)
      throw DiagramError("chance node '" + n.id + "' carries an agent id");
    if (n.kind != NodeKind::Chance) {
      if (!n.agent) throw DiagramError("node '" + n.id + "' needs an agent id");
      if (*n.agent < 0) throw DiagramError("node '" + n.id + "' has a negative agent id");
    }
  }
  d.nodes_ = std::move(nodes);

  std::sort(edges.begin(), edges.end());
  d.parents_.assign(d.nodes_.size(), {});
  d.children_.assign(d.nodes_.size(), {});
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    if (!d.has_node(e.from)) throw DiagramError("edge " + edge_name(e) + ": unknown node '" + e.from + "'");
    if (!d.has_node(e.to)) throw DiagramError("edge " + edge_name(e) + ": unknown node '" + e.to + "'");
    if (e.from == e.to) throw DiagramError("edge " + edge_name(e) + " is a self loop");
    if (i > 0 && edges[i - 1].from == e.from && edges[i - 1].to == e.to)
      throw DiagramError("duplicate edge " + edge_name(e));
    NodeKind target = d.node(e.to).kind;
    if (e.kind == EdgeKind::Information && target != NodeKind::Decision)
      throw DiagramError("information edge " + edge_name(e) + " must end at a decision node");
    if (e.kind == EdgeKind::Causal && target == NodeKind::Decision)
      throw DiagramError("causal edge " + edge_name(e) + " ends at decision node '" + e.to + "'");
    std::size_t a = d.index_of(e.from), b = d.index_of(e.to);
    d.children_[a].push_back(b);
    d.parents_[b].push_back(a);
  }
  for (auto& v : d.parents_) std::sort(v.begin(), v.end());
  for (auto& v : d.children_) std::sort(v.begin(), v.end());
  d.edges_ = std::move(edges);

  // Kahn's algorithm; anything left over sits on a cycle.
  std::vector<std::size_t> indeg(d.nodes_.size());
  for (std::size_t i = 0; i < d.nodes_.size(); ++i) indeg[i] = d.parents_[i].size();
  std::deque<std::size_t> ready;
  for (std::size_t i = 0; i < indeg.size(); ++i)
    if (indeg[i] == 0) ready.push_back(i);
  std::size_t seen = 0;
  while (!ready.empty()) {
    std::size_t v = ready.front();
    ready.pop_front();
    ++seen;
    for (std::size_t c : d.children_[v])
      if (--indeg[c] == 0) ready.push_back(c);
  }
  if (seen != d.nodes_.size()) {
    for (std::size_t i = 0; i < indeg.size(); ++i)
      if (indeg[i] > 0) throw DiagramError("cycle through node '" + d.nodes_[i].id + "'");
  }

  std::set<int> deciders, utility_owners;
  for (const Node& n : d.nodes_) {
    if (n.kind == NodeKind::Decision) deciders.insert(*n.agent);
    if (n.kind == NodeKind::Utility) utility_owners.insert(*n.agent);
  }
  for (const Node& n : d.nodes_) {
    if (n.kind == NodeKind::Utility && !deciders.count(*n.agent))
      throw DiagramError("utility node '" + n.id + "' belongs to agent " +
                         std::to_string(*n.agent) + " which has no decision");
    if (n.kind == NodeKind::Decision && !utility_owners.count(*n.agent))
      throw DiagramError("decision node '" + n.id + "' belongs to agent " +
                         std::to_string(*n.agent) + " which has no utility");
  }
  return d;
}

bool InfluenceDiagram::has_node(std::string_view id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const Node& n, std::string_view v) { return n.id < v; });
  return it != nodes_.end() && it->id == id;
}

std::size_t InfluenceDiagram::index_of(std::string_view id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const Node& n, std::string_view v) { return n.id < v; });
  if (it == nodes_.end() || it->id != id) throw DiagramError("unknown node '" + std::string(id) + "'");
  return static_cast<std::size_t>(it - nodes_.begin());
}

const Node& InfluenceDiagram::node(std::string_view id) const { return nodes_[index_of(id)]; }

std::set<int> InfluenceDiagram::agents() const {
  std::set<int> out;
  for (const Node& n : nodes_)
    if (n.agent) out.insert(*n.agent);
  return out;
}

std::vector<std::string> InfluenceDiagram::decisions_of(int agent) const {
  std::vector<std::string> out;
  for (const Node& n : nodes_)
    if (n.kind == NodeKind::Decision && n.agent == agent) out.push_back(n.id);
  return out;
}

std::vector<std::string> InfluenceDiagram::utilities_of(int agent) const {
  std::vector<std::string> out;
  for (const Node& n : nodes_)
    if (n.kind == NodeKind::Utility && n.agent == agent) out.push_back(n.id);
  return out;
}

InfluenceDiagram InfluenceDiagram::without(const std::vector<Edge>& removed) const {
  std::vector<Edge> kept;
  for (const Edge& e : edges_)
    if (std::find(removed.begin(), removed.end(), e) == removed.end()) kept.push_back(e);
  return build(nodes_, std::move(kept));
}

InfluenceDiagram load_diagram(std::string_view json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw DiagramError(std::string("malformed diagram document: ") + e.what());
  }
  try {
    if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("edges"))
      throw DiagramError("diagram document needs 'nodes' and 'edges'");
    std::vector<Node> nodes;
    for (const auto& jn : doc.at("nodes")) {
      Node n;
      n.id = jn.at("id").get<std::string>();
      n.kind = parse_node_kind(jn.at("kind").get<std::string>());
      if (jn.contains("agent") && !jn.at("agent").is_null()) n.agent = jn.at("agent").get<int>();
      nodes.push_back(std::move(n));
    }
    std::vector<Edge> edges;
    for (const auto& je : doc.at("edges")) {
      Edge e;
      e.from = je.at("from").get<std::string>();
      e.to = je.at("to").get<std::string>();
      e.kind = parse_edge_kind(je.at("kind").get<std::string>());
      edges.push_back(std::move(e));
    }
    return InfluenceDiagram::build(std::move(nodes), std::move(edges));
  } catch (const Json::exception& e) {
    throw DiagramError(std::string("malformed diagram document: ") + e.what());
  }
}

std::string save_diagram(const InfluenceDiagram& d) {
  Json doc;
  doc["nodes"] = Json::array();
  for (const Node& n : d.nodes()) {
    Json jn = {{"id", n.id}, {"kind", to_string(n.kind)}};
    if (n.agent) jn["agent"] = *n.agent;
    doc["nodes"].push_back(jn);
  }
  doc["edges"] = Json::array();
  for (const Edge& e : d.edges())
    doc["edges"].push_back({{"from", e.from}, {"to", e.to}, {"kind", to_string(e.kind)}});
  return doc.dump(2) + "\n";
}

namespace {

std::vector<bool> reach_from(const InfluenceDiagram& d, std::size_t start) {
  std::vector<bool> seen(d.size(), false);
  std::vector<std::size_t> stack(d.children(start).begin(), d.children(start).end());
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    if (seen[v]) continue;
    seen[v] = true;
    for (std::size_t c : d.children(v)) stack.push_back(c);
  }
  return seen;
}

std::vector<std::size_t> indices(const InfluenceDiagram& d, const std::set<std::string>& ids) {
  std::vector<std::size_t> out;
  for (const auto& id : ids) out.push_back(d.index_of(id));
  return out;
}

// Reachable-trail search: a node is reached when some active trail from X
// arrives at it. Direction 0 = arrived from a child, 1 = arrived from a parent.
bool d_separated_idx(const InfluenceDiagram& d, const std::vector<std::size_t>& x,
                     const std::vector<bool>& in_y, const std::vector<bool>& in_z) {
  const std::size_t n = d.size();
  std::vector<bool> anc(n, false);
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < n; ++i)
    if (in_z[i]) stack.push_back(i);
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    if (anc[v]) continue;
    anc[v] = true;
    for (std::size_t p : d.parents(v)) stack.push_back(p);
  }
  std::vector<std::array<bool, 2>> visited(n, {false, false});
  std::vector<std::pair<std::size_t, int>> todo;
  for (std::size_t v : x) todo.push_back({v, 0});
  while (!todo.empty()) {
    auto [v, dir] = todo.back();
    todo.pop_back();
    if (visited[v][dir]) continue;
    visited[v][dir] = true;
    if (!in_z[v] && in_y[v]) return false;
    if (dir == 0) {
      if (in_z[v]) continue;
      for (std::size_t p : d.parents(v)) todo.push_back({p, 0});
      for (std::size_t c : d.children(v)) todo.push_back({c, 1});
    } else {
      if (!in_z[v])
        for (std::size_t c : d.children(v)) todo.push_back({c, 1});
      if (anc[v])
        for (std::size_t p : d.parents(v)) todo.push_back({p, 0});
    }
  }
  return true;
}

}  // namespace

std::set<std::string> descendants(const InfluenceDiagram& d, std::string_view n) {
  std::size_t i = d.index_of(n);
  std::vector<bool> seen = reach_from(d, i);
  std::set<std::string> out;
  for (std::size_t v = 0; v < d.size(); ++v)
    if (seen[v]) out.insert(d.nodes()[v].id);
  return out;
}

bool d_separated(const InfluenceDiagram& d, const std::set<std::string>& x,
                 const std::set<std::string>& y, const std::set<std::string>& z) {
  auto xi = indices(d, x), yi = indices(d, y), zi = indices(d, z);
  std::vector<int> owner(d.size(), 0);
  for (auto v : xi) owner[v] |= 1;
  for (auto v : yi) {
    if (owner[v]) throw DiagramError("node '" + d.nodes()[v].id + "' appears in more than one set");
    owner[v] |= 2;
  }
  for (auto v : zi) {
    if (owner[v]) throw DiagramError("node '" + d.nodes()[v].id + "' appears in more than one set");
    owner[v] |= 4;
  }
  std::vector<bool> in_y(d.size()), in_z(d.size());
  for (std::size_t v = 0; v < d.size(); ++v) {
    in_y[v] = owner[v] & 2;
    in_z[v] = owner[v] & 4;
  }
  return d_separated_idx(d, xi, in_y, in_z);
}

namespace {

bool link_irrelevant(const InfluenceDiagram& d, const Edge& e) {
  std::size_t w = d.index_of(e.from), a = d.index_of(e.to);
  int agent = *d.nodes()[a].agent;
  std::vector<bool> down = reach_from(d, a);
  std::vector<bool> in_y(d.size(), false), in_z(d.size(), false);
  bool any = false;
  for (std::size_t v = 0; v < d.size(); ++v) {
    const Node& n = d.nodes()[v];
    if (down[v] && n.kind == NodeKind::Utility && n.agent == agent) {
      in_y[v] = true;
      any = true;
    }
  }
  if (!any) return true;
  in_z[a] = true;
  for (std::size_t p : d.parents(a))
    if (p != w) in_z[p] = true;
  return d_separated_idx(d, {w}, in_y, in_z);
}

}  // namespace

PruneResult prune_irrelevant_information_links(const InfluenceDiagram& d) {
  InfluenceDiagram cur = d;
  std::vector<Edge> removed;
  for (;;) {
    bool changed = false;
    std::vector<Edge> candidates;
    for (const Edge& e : cur.edges())
      if (e.kind == EdgeKind::Information) candidates.push_back(e);
    for (const Edge& e : candidates) {
      if (link_irrelevant(cur, e)) {
        cur = cur.without({e});
        removed.push_back(e);
        changed = true;
      }
    }
    if (!changed) break;
  }
  std::sort(removed.begin(), removed.end());
  return {std::move(cur), std::move(removed)};
}

namespace {

// Lexicographically smallest directed path starting at one of `starts` and
// ending at the first node satisfying `is_target` (start excluded). Interior
// nodes must satisfy `may_pass`.
std::vector<std::size_t> smallest_path(const InfluenceDiagram& d, const std::vector<std::size_t>& starts,
                                       const std::function<bool(std::size_t)>& is_target,
                                       const std::function<bool(std::size_t)>& may_pass) {
  const std::size_t n = d.size();
  // good[v]: from v (already on the path) some continuation reaches a target.
  std::vector<int> memo(n, -1);
  std::function<bool(std::size_t)> completes = [&](std::size_t v) -> bool {
    if (memo[v] >= 0) return memo[v];
    bool ok = false;
    for (std::size_t c : d.children(v)) {
      if (is_target(c) || (may_pass(c) && completes(c))) {
        ok = true;
        break;
      }
    }
    memo[v] = ok;
    return ok;
  };
  std::vector<std::size_t> sorted = starts;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t s : sorted) {
    if (!completes(s)) continue;
    std::vector<std::size_t> path{s};
    std::size_t v = s;
    for (;;) {
      std::size_t next = n;
      for (std::size_t c : d.children(v)) {
        if (is_target(c) || (may_pass(c) && completes(c))) {
          next = c;
          break;
        }
      }
      path.push_back(next);
      if (is_target(next)) return path;
      v = next;
    }
  }
  return {};
}

}  // namespace

IncentiveReport classify_incentive(const InfluenceDiagram& raw, std::string_view node, int agent) {
  if (!raw.has_node(node)) throw DiagramError("unknown node '" + std::string(node) + "'");
  if (!raw.agents().count(agent)) throw DiagramError("unknown agent " + std::to_string(agent));
  InfluenceDiagram d = prune_irrelevant_information_links(raw).diagram;
  const std::size_t n = d.index_of(node);

  std::vector<bool> is_util(d.size(), false), is_dec(d.size(), false);
  for (std::size_t v = 0; v < d.size(); ++v) {
    const Node& x = d.nodes()[v];
    is_util[v] = x.kind == NodeKind::Utility && x.agent == agent;
    is_dec[v] = x.kind == NodeKind::Decision && x.agent == agent;
  }

  IncentiveReport r;
  r.node = std::string(node);
  r.agent = agent;

  std::vector<bool> down = reach_from(d, n);
  bool has_util = false;
  for (std::size_t v = 0; v < d.size(); ++v) has_util = has_util || (down[v] && is_util[v]);
  if (!has_util) return r;

  auto target = [&](std::size_t v) { return is_util[v]; };
  auto anything = [](std::size_t) { return true; };
  auto avoid_dec = [&](std::size_t v) { return !is_dec[v]; };

  std::vector<std::size_t> suffix = smallest_path(d, {n}, target, avoid_dec);
  r.classification = suffix.empty() ? Incentive::Information : Incentive::Control;
  if (suffix.empty()) suffix = smallest_path(d, {n}, target, anything);

  std::vector<std::size_t> decisions;
  for (std::size_t v = 0; v < d.size(); ++v)
    if (is_dec[v] && v != n) decisions.push_back(v);
  std::vector<std::size_t> prefix =
      smallest_path(d, decisions, [&](std::size_t v) { return v == n; }, anything);
  r.actionable = !prefix.empty();

  std::vector<std::size_t> path;
  if (r.actionable) path.assign(prefix.begin(), prefix.end() - 1);
  path.insert(path.end(), suffix.begin(), suffix.end());
  for (std::size_t v : path) r.witness.push_back(d.nodes()[v].id);
  return r;
}

bool tampering_incentive(const InfluenceDiagram& d, std::string_view n, int agent) {
  IncentiveReport r = classify_incentive(d, n, agent);
  return r.classification == Incentive::Control && r.actionable;
}

namespace {

bool plain_identifier(const std::string& s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

std::string dot_id(const std::string& s) {
  if (plain_identifier(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

const char* agent_color(int agent) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  return palette[static_cast<std::size_t>(agent) % 8];
}

}  // namespace

std::string export_dot(const InfluenceDiagram& d) {
  std::ostringstream out;
  out << "digraph cid {\n";
  for (const Node& n : d.nodes()) {
    out << "  " << dot_id(n.id) << " [shape=";
    switch (n.kind) {
      case NodeKind::Chance: out << "circle"; break;
      case NodeKind::Decision: out << "square"; break;
      case NodeKind::Utility: out << "diamond"; break;
    }
    if (n.agent) out << ", color=\"" << agent_color(*n.agent) << "\", label=\"" << n.id << " (" << *n.agent << ")\"";
    out << "];\n";
  }
  for (const Edge& e : d.edges()) {
    out << "  " << dot_id(e.from) << " -> " << dot_id(e.to);
    if (e.kind == EdgeKind::Information) out << " [style=dashed]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace tamperlab::cid
