#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace codisco {

// Nodes of a graph over n observed variables are the ids 0..n-1. A Dag may
// declare l additional latent nodes, which occupy ids n..n+l-1. Mags and Pags
// are defined over observed nodes only and never contain a latent id.
using NodeId = int;

// Node sets are bitmasks indexed by NodeId, so every graph in this library is
// capped at kMaxNodes nodes (observed + latent). All workloads here are far
// below that.
using NodeSet = std::uint64_t;

inline constexpr int kMaxNodes = 64;

constexpr NodeSet node_bit(NodeId v) { return NodeSet{1} << v; }
constexpr bool contains(NodeSet s, NodeId v) { return (s >> v) & NodeSet{1}; }
constexpr NodeSet with_node(NodeSet s, NodeId v) { return s | node_bit(v); }
constexpr NodeSet without_node(NodeSet s, NodeId v) { return s & ~node_bit(v); }

int set_size(NodeSet s);
std::vector<NodeId> set_to_vector(NodeSet s);
NodeSet make_node_set(std::initializer_list<NodeId> nodes);
NodeSet make_node_set(const std::vector<NodeId>& nodes);

// Mark placed at one endpoint of a mixed-graph edge.
enum class EdgeMark { tail, arrowhead, circle };

// Directed acyclic graph with an optional block of latent nodes. Immutable
// after construction. Construction throws std::invalid_argument on bad ids,
// self loops, duplicate edges, or a directed cycle.
class Dag {
 public:
  Dag(int num_observed, int num_latent,
      std::vector<std::pair<NodeId, NodeId>> edges);

  int num_observed() const { return num_observed_; }
  int num_latent() const { return num_latent_; }
  int num_nodes() const { return num_observed_ + num_latent_; }
  bool is_latent(NodeId v) const { return v >= num_observed_; }

  // Edges as (parent, child) pairs in ascending order.
  const std::vector<std::pair<NodeId, NodeId>>& edges() const {
    return edges_;
  }

  bool has_edge(NodeId parent, NodeId child) const;
  NodeSet parents(NodeId v) const { return parents_[v]; }
  NodeSet children(NodeId v) const { return children_[v]; }

  // Reflexive ancestor set: v is always in ancestors(v).
  NodeSet ancestors(NodeId v) const { return ancestors_[v]; }
  bool is_ancestor(NodeId u, NodeId v) const {
    return contains(ancestors_[v], u);
  }

  // The graph after the atomic intervention do(target): all edges into
  // target, from observed and latent parents alike, are removed.
  Dag mutilated(NodeId target) const;

  bool operator==(const Dag& other) const;

 private:
  int num_observed_ = 0;
  int num_latent_ = 0;
  std::vector<std::pair<NodeId, NodeId>> edges_;
  std::vector<NodeSet> parents_;
  std::vector<NodeSet> children_;
  std::vector<NodeSet> ancestors_;
};

// One edge of a mixed graph, canonicalized so that u < v. Marks are read at
// the named endpoint: mark_u == tail and mark_v == arrowhead is u -> v.
struct MixedEdge {
  NodeId u = 0;
  NodeId v = 0;
  EdgeMark mark_u = EdgeMark::tail;
  EdgeMark mark_v = EdgeMark::tail;

  bool operator==(const MixedEdge& other) const = default;
};

MixedEdge directed_edge(NodeId from, NodeId to);
MixedEdge bidirected_edge(NodeId u, NodeId v);
MixedEdge circle_edge(NodeId u, NodeId v);  // u o-o v

// Mixed graph whose edges are directed or bidirected. This type enforces only
// local structure (valid ids, no self loops, no duplicate or circle-marked or
// tail-tail edges); ancestrality and maximality are checked by validate_mag.
// Immutable after construction.
class Mag {
 public:
  Mag(int num_nodes, std::vector<MixedEdge> edges);

  int num_nodes() const { return num_nodes_; }

  // Canonical edge list: u < v, sorted by (u, v).
  const std::vector<MixedEdge>& edges() const { return edges_; }

  bool adjacent(NodeId u, NodeId v) const;

  NodeSet out_neighbors(NodeId u) const { return out_[u]; }  // u -> v
  NodeSet in_neighbors(NodeId u) const { return in_[u]; }    // v -> u
  NodeSet bi_neighbors(NodeId u) const { return bi_[u]; }    // u <-> v
  NodeSet neighbors(NodeId u) const { return out_[u] | in_[u] | bi_[u]; }

  // Reflexive ancestor set over the directed edges alone.
  NodeSet ancestors(NodeId v) const { return ancestors_[v]; }
  bool is_ancestor(NodeId u, NodeId v) const {
    return contains(ancestors_[v], u);
  }

  // Unordered adjacent pairs (u, v) with u < v, sorted.
  std::vector<std::pair<NodeId, NodeId>> skeleton() const;

  bool operator==(const Mag& other) const;

 private:
  int num_nodes_ = 0;
  std::vector<MixedEdge> edges_;
  std::vector<NodeSet> out_;
  std::vector<NodeSet> in_;
  std::vector<NodeSet> bi_;
  std::vector<NodeSet> ancestors_;
};

// Partial ancestral graph: a mixed graph whose endpoint marks may also be
// circles. Purely structural; soundness relative to a Mag is up to callers.
class Pag {
 public:
  Pag(int num_nodes, std::vector<MixedEdge> edges);

  int num_nodes() const { return num_nodes_; }
  const std::vector<MixedEdge>& edges() const { return edges_; }

  bool adjacent(NodeId u, NodeId v) const;
  NodeSet neighbors(NodeId u) const { return adj_[u]; }

  // Mark sitting at endpoint `at` of the edge between `at` and `other`.
  // Throws std::invalid_argument if the nodes are not adjacent.
  EdgeMark mark_at(NodeId at, NodeId other) const;

  // Nodes v with the fully directed edge u -> v (tail at u, arrowhead at v,
  // no circles).
  NodeSet directed_out(NodeId u) const;

  std::vector<std::pair<NodeId, NodeId>> skeleton() const;

  friend bool operator==(const Pag& a, const Pag& b) {
    return a.num_nodes_ == b.num_nodes_ && a.edges_ == b.edges_;
  }

 private:
  int num_nodes_ = 0;
  std::vector<MixedEdge> edges_;
  std::vector<NodeSet> adj_;
  std::vector<EdgeMark> marks_;  // marks_[a * num_nodes_ + b], valid if adjacent
};

// How a neighbor relates to the owner of an incidence set.
enum class IncidenceType { tail, head, bidirected };

// Local view of one node u in a Mag: every neighbor v together with the kind
// of edge seen from u. type tail means u -> v, head means u <- v, bidirected
// means u <-> v.
struct IncidenceSet {
  NodeId owner = -1;
  std::map<NodeId, IncidenceType> entries;

  bool operator==(const IncidenceSet& other) const = default;
};

IncidenceSet incidence_set(const Mag& g, NodeId u);

// Nodes whose incidence sets differ between the two graphs. Throws
// std::invalid_argument if the graphs have different node counts.
NodeSet node_diff(const Mag& g1, const Mag& g2);
int node_distance(const Mag& g1, const Mag& g2);

// Outcome of the full Mag validity check. On failure, `violation` names the
// first offence found (a directed cycle, an almost-directed cycle through a
// bidirected edge, or a non-adjacent pair that no subset separates).
struct MagValidity {
  bool ok = true;
  std::string violation;

  explicit operator bool() const { return ok; }
};

// Checks ancestrality and maximality. Maximality is checked by exhausting
// candidate separating sets for every non-adjacent pair, which is exponential
// in num_nodes; intended for the small graphs this library works at.
MagValidity validate_mag(const Mag& g);

// Marginalizes the latent nodes out of d: observed nodes u, v are adjacent
// iff d has an inducing path between them relative to the latent set, and
// each edge end is a tail iff that endpoint is an ancestor of the other in d.
Mag dag_to_mag(const Dag& d);

// d-separation of u and v given z in d. z must contain observed nodes only;
// u and v may be any nodes not in z.
bool d_separated(const Dag& d, NodeId u, NodeId v, NodeSet z);

// m-separation of u and v given z in g.
bool m_separated(const Mag& g, NodeId u, NodeId v, NodeSet z);

// True iff g1 and g2 agree on every m-separation statement. Graphs with
// different skeletons never do, which this exploits as a fast path.
bool same_separation_relation(const Mag& g1, const Mag& g2);

// Text round-trip. The format is a header line `nodes <n> latents <l>`
// followed by one edge per line, `u <mark><mark> v`, where the left mark is
// one of `-`, `<`, `o` and the right one of `-`, `>`, `o`. Examples:
// `0 -> 1`, `2 <> 3`, `1 o> 4`. Lines that are blank or start with `#` are
// skipped. Parsers throw std::runtime_error with the offending line number.
std::string to_text(const Dag& d);
std::string to_text(const Mag& g);
std::string to_text(const Pag& g);
Dag parse_dag(const std::string& text);
Mag parse_mag(const std::string& text);
Pag parse_pag(const std::string& text);

}  // namespace codisco
