#pragma once

#include <compare>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tamperlab::cid {

enum class NodeKind { Chance, Decision, Utility };
enum class EdgeKind { Causal, Information };

struct Node {
  std::string id;
  NodeKind kind = NodeKind::Chance;
  std::optional<int> agent;
};

struct Edge {
  std::string from;
  std::string to;
  EdgeKind kind = EdgeKind::Causal;

  auto operator<=>(const Edge&) const = default;
};

class DiagramError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Typed DAG. Nodes are stored sorted by id and addressed by index internally.
class InfluenceDiagram {
 public:
  // Validates every structural rule; throws DiagramError naming the culprit.
  static InfluenceDiagram build(std::vector<Node> nodes, std::vector<Edge> edges);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t size() const { return nodes_.size(); }

  bool has_node(std::string_view id) const;
  const Node& node(std::string_view id) const;
  std::size_t index_of(std::string_view id) const;

  const std::vector<std::size_t>& parents(std::size_t i) const { return parents_[i]; }
  const std::vector<std::size_t>& children(std::size_t i) const { return children_[i]; }

  std::set<int> agents() const;
  std::vector<std::string> decisions_of(int agent) const;
  std::vector<std::string> utilities_of(int agent) const;

  InfluenceDiagram without(const std::vector<Edge>& removed) const;

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> children_;
};

const char* to_string(NodeKind k);
const char* to_string(EdgeKind k);

InfluenceDiagram load_diagram(std::string_view json_text);
std::string save_diagram(const InfluenceDiagram& d);

std::set<std::string> descendants(const InfluenceDiagram& d, std::string_view n);

bool d_separated(const InfluenceDiagram& d, const std::set<std::string>& x,
                 const std::set<std::string>& y, const std::set<std::string>& z);

struct PruneResult {
  InfluenceDiagram diagram;
  std::vector<Edge> removed;
};

PruneResult prune_irrelevant_information_links(const InfluenceDiagram& d);

enum class Incentive { None, Information, Control };
const char* to_string(Incentive c);

struct IncentiveReport {
  std::string node;
  int agent = 0;
  Incentive classification = Incentive::None;
  bool actionable = false;
  std::vector<std::string> witness;
};

IncentiveReport classify_incentive(const InfluenceDiagram& d, std::string_view n, int agent);
bool tampering_incentive(const InfluenceDiagram& d, std::string_view n, int agent);

std::vector<std::string> canonical_names();
InfluenceDiagram canonical_diagram(std::string_view name, int horizon);

std::string export_dot(const InfluenceDiagram& d);

}  // namespace tamperlab::cid
