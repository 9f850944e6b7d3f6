#include "codisco/graph.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <sstream>
#include <stdexcept>
#include <string>

namespace codisco {

namespace {

std::string node_pair_text(NodeId u, NodeId v) {
  return std::to_string(u) + " and " + std::to_string(v);
}

void check_node_count(int num_nodes) {
  if (num_nodes < 0 || num_nodes > kMaxNodes) {
    throw std::invalid_argument("node count " + std::to_string(num_nodes) +
                                " out of range 0.." +
                                std::to_string(kMaxNodes));
  }
}

void check_node_id(NodeId v, int num_nodes) {
  if (v < 0 || v >= num_nodes) {
    throw std::invalid_argument("node id " + std::to_string(v) +
                                " out of range for " +
                                std::to_string(num_nodes) + " nodes");
  }
}

// Reflexive ancestor sets over the directed edges given as parent masks.
// Runs to a fixpoint, so it terminates on cyclic inputs too; validate_mag
// relies on that to diagnose cycles instead of the constructor hanging.
std::vector<NodeSet> reflexive_ancestors(
    const std::vector<NodeSet>& parents) {
  const int n = static_cast<int>(parents.size());
  std::vector<NodeSet> anc(n);
  for (NodeId v = 0; v < n; ++v) anc[v] = node_bit(v);
  bool changed = true;
  while (changed) {
    changed = false;
    for (NodeId v = 0; v < n; ++v) {
      NodeSet acc = anc[v];
      for (NodeId p : set_to_vector(parents[v])) acc |= anc[p];
      if (acc != anc[v]) {
        anc[v] = acc;
        changed = true;
      }
    }
  }
  return anc;
}

}  // namespace

int set_size(NodeSet s) { return std::popcount(s); }

std::vector<NodeId> set_to_vector(NodeSet s) {
  std::vector<NodeId> out;
  out.reserve(static_cast<size_t>(std::popcount(s)));
  while (s != 0) {
    out.push_back(std::countr_zero(s));
    s &= s - 1;
  }
  return out;
}

NodeSet make_node_set(std::initializer_list<NodeId> nodes) {
  NodeSet s = 0;
  for (NodeId v : nodes) s = with_node(s, v);
  return s;
}

NodeSet make_node_set(const std::vector<NodeId>& nodes) {
  NodeSet s = 0;
  for (NodeId v : nodes) s = with_node(s, v);
  return s;
}

Dag::Dag(int num_observed, int num_latent,
         std::vector<std::pair<NodeId, NodeId>> edges)
    : num_observed_(num_observed),
      num_latent_(num_latent),
      edges_(std::move(edges)) {
  if (num_observed < 0 || num_latent < 0) {
    throw std::invalid_argument("negative node count");
  }
  check_node_count(num_nodes());
  const int n = num_nodes();
  parents_.assign(n, 0);
  children_.assign(n, 0);
  std::sort(edges_.begin(), edges_.end());
  for (size_t i = 0; i < edges_.size(); ++i) {
    auto [p, c] = edges_[i];
    check_node_id(p, n);
    check_node_id(c, n);
    if (p == c) {
      throw std::invalid_argument("self loop at node " + std::to_string(p));
    }
    if (i > 0 && edges_[i - 1] == edges_[i]) {
      throw std::invalid_argument("duplicate edge " + node_pair_text(p, c));
    }
    parents_[c] = with_node(parents_[c], p);
    children_[p] = with_node(children_[p], c);
  }

  // Kahn's algorithm; anything left unprocessed sits on a directed cycle.
  std::vector<int> indegree(n);
  std::deque<NodeId> ready;
  for (NodeId v = 0; v < n; ++v) {
    indegree[v] = set_size(parents_[v]);
    if (indegree[v] == 0) ready.push_back(v);
  }
  int processed = 0;
  while (!ready.empty()) {
    NodeId v = ready.front();
    ready.pop_front();
    ++processed;
    for (NodeId c : set_to_vector(children_[v])) {
      if (--indegree[c] == 0) ready.push_back(c);
    }
  }
  if (processed != n) {
    throw std::invalid_argument("edge list contains a directed cycle");
  }

  ancestors_ = reflexive_ancestors(parents_);
}

bool Dag::has_edge(NodeId parent, NodeId child) const {
  check_node_id(parent, num_nodes());
  check_node_id(child, num_nodes());
  return contains(children_[parent], child);
}

Dag Dag::mutilated(NodeId target) const {
  check_node_id(target, num_nodes());
  std::vector<std::pair<NodeId, NodeId>> kept;
  kept.reserve(edges_.size());
  for (const auto& e : edges_) {
    if (e.second != target) kept.push_back(e);
  }
  return Dag(num_observed_, num_latent_, std::move(kept));
}

bool Dag::operator==(const Dag& other) const {
  return num_observed_ == other.num_observed_ &&
         num_latent_ == other.num_latent_ && edges_ == other.edges_;
}

MixedEdge directed_edge(NodeId from, NodeId to) {
  if (from < to) return {from, to, EdgeMark::tail, EdgeMark::arrowhead};
  return {to, from, EdgeMark::arrowhead, EdgeMark::tail};
}

MixedEdge bidirected_edge(NodeId u, NodeId v) {
  if (u > v) std::swap(u, v);
  return {u, v, EdgeMark::arrowhead, EdgeMark::arrowhead};
}

MixedEdge circle_edge(NodeId u, NodeId v) {
  if (u > v) std::swap(u, v);
  return {u, v, EdgeMark::circle, EdgeMark::circle};
}

Mag::Mag(int num_nodes, std::vector<MixedEdge> edges)
    : num_nodes_(num_nodes), edges_(std::move(edges)) {
  check_node_count(num_nodes);
  out_.assign(num_nodes_, 0);
  in_.assign(num_nodes_, 0);
  bi_.assign(num_nodes_, 0);
  for (auto& e : edges_) {
    check_node_id(e.u, num_nodes_);
    check_node_id(e.v, num_nodes_);
    if (e.u == e.v) {
      throw std::invalid_argument("self loop at node " + std::to_string(e.u));
    }
    if (e.u > e.v) {
      std::swap(e.u, e.v);
      std::swap(e.mark_u, e.mark_v);
    }
    if (e.mark_u == EdgeMark::circle || e.mark_v == EdgeMark::circle) {
      throw std::invalid_argument("circle mark on edge " +
                                  node_pair_text(e.u, e.v));
    }
    if (e.mark_u == EdgeMark::tail && e.mark_v == EdgeMark::tail) {
      throw std::invalid_argument("undirected edge " +
                                  node_pair_text(e.u, e.v));
    }
    if (adjacent(e.u, e.v)) {
      throw std::invalid_argument("duplicate edge " +
                                  node_pair_text(e.u, e.v));
    }
    if (e.mark_u == EdgeMark::arrowhead && e.mark_v == EdgeMark::arrowhead) {
      bi_[e.u] = with_node(bi_[e.u], e.v);
      bi_[e.v] = with_node(bi_[e.v], e.u);
    } else if (e.mark_u == EdgeMark::tail) {  // u -> v
      out_[e.u] = with_node(out_[e.u], e.v);
      in_[e.v] = with_node(in_[e.v], e.u);
    } else {  // v -> u
      out_[e.v] = with_node(out_[e.v], e.u);
      in_[e.u] = with_node(in_[e.u], e.v);
    }
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const MixedEdge& a, const MixedEdge& b) {
              return std::pair(a.u, a.v) < std::pair(b.u, b.v);
            });
  ancestors_ = reflexive_ancestors(in_);
}

bool Mag::adjacent(NodeId u, NodeId v) const {
  check_node_id(u, num_nodes_);
  check_node_id(v, num_nodes_);
  return contains(neighbors(u), v);
}

std::vector<std::pair<NodeId, NodeId>> Mag::skeleton() const {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  pairs.reserve(edges_.size());
  for (const auto& e : edges_) pairs.emplace_back(e.u, e.v);
  return pairs;
}

bool Mag::operator==(const Mag& other) const {
  return num_nodes_ == other.num_nodes_ && edges_ == other.edges_;
}

Pag::Pag(int num_nodes, std::vector<MixedEdge> edges)
    : num_nodes_(num_nodes), edges_(std::move(edges)) {
  check_node_count(num_nodes);
  adj_.assign(num_nodes_, 0);
  marks_.assign(static_cast<size_t>(num_nodes_) * num_nodes_,
                EdgeMark::circle);
  for (auto& e : edges_) {
    check_node_id(e.u, num_nodes_);
    check_node_id(e.v, num_nodes_);
    if (e.u == e.v) {
      throw std::invalid_argument("self loop at node " + std::to_string(e.u));
    }
    if (e.u > e.v) {
      std::swap(e.u, e.v);
      std::swap(e.mark_u, e.mark_v);
    }
    if (adjacent(e.u, e.v)) {
      throw std::invalid_argument("duplicate edge " +
                                  node_pair_text(e.u, e.v));
    }
    adj_[e.u] = with_node(adj_[e.u], e.v);
    adj_[e.v] = with_node(adj_[e.v], e.u);
    marks_[static_cast<size_t>(e.u) * num_nodes_ + e.v] = e.mark_u;
    marks_[static_cast<size_t>(e.v) * num_nodes_ + e.u] = e.mark_v;
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const MixedEdge& a, const MixedEdge& b) {
              return std::pair(a.u, a.v) < std::pair(b.u, b.v);
            });
}

bool Pag::adjacent(NodeId u, NodeId v) const {
  check_node_id(u, num_nodes_);
  check_node_id(v, num_nodes_);
  return contains(adj_[u], v);
}

EdgeMark Pag::mark_at(NodeId at, NodeId other) const {
  if (!adjacent(at, other)) {
    throw std::invalid_argument("no edge between " +
                                node_pair_text(at, other));
  }
  return marks_[static_cast<size_t>(at) * num_nodes_ + other];
}

NodeSet Pag::directed_out(NodeId u) const {
  check_node_id(u, num_nodes_);
  NodeSet result = 0;
  for (NodeId v : set_to_vector(adj_[u])) {
    if (marks_[static_cast<size_t>(u) * num_nodes_ + v] == EdgeMark::tail &&
        marks_[static_cast<size_t>(v) * num_nodes_ + u] ==
            EdgeMark::arrowhead) {
      result = with_node(result, v);
    }
  }
  return result;
}

std::vector<std::pair<NodeId, NodeId>> Pag::skeleton() const {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  pairs.reserve(edges_.size());
  for (const auto& e : edges_) pairs.emplace_back(e.u, e.v);
  return pairs;
}

IncidenceSet incidence_set(const Mag& g, NodeId u) {
  IncidenceSet result;
  result.owner = u;
  for (NodeId v : set_to_vector(g.out_neighbors(u))) {
    result.entries[v] = IncidenceType::tail;
  }
  for (NodeId v : set_to_vector(g.in_neighbors(u))) {
    result.entries[v] = IncidenceType::head;
  }
  for (NodeId v : set_to_vector(g.bi_neighbors(u))) {
    result.entries[v] = IncidenceType::bidirected;
  }
  return result;
}

NodeSet node_diff(const Mag& g1, const Mag& g2) {
  if (g1.num_nodes() != g2.num_nodes()) {
    throw std::invalid_argument("graphs have different node counts");
  }
  NodeSet diff = 0;
  for (NodeId u = 0; u < g1.num_nodes(); ++u) {
    if (g1.out_neighbors(u) != g2.out_neighbors(u) ||
        g1.in_neighbors(u) != g2.in_neighbors(u) ||
        g1.bi_neighbors(u) != g2.bi_neighbors(u)) {
      diff = with_node(diff, u);
    }
  }
  return diff;
}

int node_distance(const Mag& g1, const Mag& g2) {
  return set_size(node_diff(g1, g2));
}

namespace {

// Reachability core shared by d-separation and m-separation. Half-edges are
// grouped per node into `out` (tail here), `in` (arrowhead here, tail there)
// and `bi` (arrowheads at both ends). States are (node, arrived through an
// arrowhead). A walk may continue through w as a collider only if w is an
// ancestor of z (reflexively, so w in z qualifies), and as a non-collider
// only if w is outside z. Walk reachability and path reachability coincide
// for this relation, which the tests check against a path enumerator.
bool marked_connected(const std::vector<NodeSet>& out,
                      const std::vector<NodeSet>& in,
                      const std::vector<NodeSet>& bi,
                      const std::vector<NodeSet>& anc, NodeId u, NodeId v,
                      NodeSet z) {
  NodeSet anc_z = 0;
  for (NodeId w : set_to_vector(z)) anc_z |= anc[w];

  NodeSet seen_tail = 0;  // states reached with a tail at the node
  NodeSet seen_head = 0;  // states reached with an arrowhead at the node
  std::deque<std::pair<NodeId, bool>> queue;

  auto visit = [&](NodeId x, bool head_in) {
    NodeSet& seen = head_in ? seen_head : seen_tail;
    if (contains(seen, x)) return;
    seen = with_node(seen, x);
    queue.emplace_back(x, head_in);
  };

  for (NodeId x : set_to_vector(out[u])) {
    if (x == v) return true;
    visit(x, true);
  }
  for (NodeId x : set_to_vector(in[u])) {
    if (x == v) return true;
    visit(x, false);
  }
  for (NodeId x : set_to_vector(bi[u])) {
    if (x == v) return true;
    visit(x, true);
  }

  while (!queue.empty()) {
    auto [w, head_in] = queue.front();
    queue.pop_front();

    const bool pass_as_noncollider = !contains(z, w);
    const bool pass_as_collider = contains(anc_z, w);

    // w -> x leaves through a tail, so w is a non-collider on the walk.
    if (pass_as_noncollider) {
      for (NodeId x : set_to_vector(out[w])) {
        if (x == v) return true;
        visit(x, true);
      }
    }
    // x -> w and w <-> x leave through an arrowhead at w, so w is a collider
    // exactly when it was also entered through one.
    const bool pass_head_out = head_in ? pass_as_collider : pass_as_noncollider;
    if (pass_head_out) {
      for (NodeId x : set_to_vector(in[w])) {
        if (x == v) return true;
        visit(x, false);
      }
      for (NodeId x : set_to_vector(bi[w])) {
        if (x == v) return true;
        visit(x, true);
      }
    }
  }
  return false;
}

void check_separation_query(int num_nodes, NodeId u, NodeId v, NodeSet z) {
  check_node_id(u, num_nodes);
  check_node_id(v, num_nodes);
  if (u == v) {
    throw std::invalid_argument("separation query needs distinct endpoints");
  }
  if (contains(z, u) || contains(z, v)) {
    throw std::invalid_argument("conditioning set contains an endpoint");
  }
  if (num_nodes < kMaxNodes && (z >> num_nodes) != 0) {
    throw std::invalid_argument("conditioning set contains an unknown node");
  }
}

}  // namespace

bool d_separated(const Dag& d, NodeId u, NodeId v, NodeSet z) {
  check_separation_query(d.num_nodes(), u, v, z);
  for (NodeId w : set_to_vector(z)) {
    if (d.is_latent(w)) {
      throw std::invalid_argument("conditioning set contains latent node " +
                                  std::to_string(w));
    }
  }
  const int n = d.num_nodes();
  std::vector<NodeSet> out(n), in(n), bi(n, 0), anc(n);
  for (NodeId w = 0; w < n; ++w) {
    out[w] = d.children(w);
    in[w] = d.parents(w);
    anc[w] = d.ancestors(w);
  }
  return !marked_connected(out, in, bi, anc, u, v, z);
}

bool m_separated(const Mag& g, NodeId u, NodeId v, NodeSet z) {
  check_separation_query(g.num_nodes(), u, v, z);
  const int n = g.num_nodes();
  std::vector<NodeSet> out(n), in(n), bi(n), anc(n);
  for (NodeId w = 0; w < n; ++w) {
    out[w] = g.out_neighbors(w);
    in[w] = g.in_neighbors(w);
    bi[w] = g.bi_neighbors(w);
    anc[w] = g.ancestors(w);
  }
  return !marked_connected(out, in, bi, anc, u, v, z);
}

namespace {

// True iff d has an inducing path between observed nodes u and v relative to
// the latent set: a path whose non-endpoint non-colliders are all latent and
// whose colliders are all ancestors of u or v. Same state space as the
// separation walk.
bool has_inducing_path(const Dag& d, NodeId u, NodeId v) {
  const int n = d.num_nodes();
  NodeSet latents = 0;
  for (NodeId w = 0; w < n; ++w) {
    if (d.is_latent(w)) latents = with_node(latents, w);
  }
  const NodeSet anc_uv = d.ancestors(u) | d.ancestors(v);

  NodeSet seen_tail = 0;
  NodeSet seen_head = 0;
  std::deque<std::pair<NodeId, bool>> queue;
  auto visit = [&](NodeId x, bool head_in) {
    NodeSet& seen = head_in ? seen_head : seen_tail;
    if (contains(seen, x)) return;
    seen = with_node(seen, x);
    queue.emplace_back(x, head_in);
  };

  for (NodeId x : set_to_vector(d.children(u))) {
    if (x == v) return true;
    visit(x, true);
  }
  for (NodeId x : set_to_vector(d.parents(u))) {
    if (x == v) return true;
    visit(x, false);
  }

  while (!queue.empty()) {
    auto [w, head_in] = queue.front();
    queue.pop_front();

    const bool pass_as_noncollider = contains(latents, w);
    const bool pass_as_collider = contains(anc_uv, w);

    if (pass_as_noncollider) {
      for (NodeId x : set_to_vector(d.children(w))) {
        if (x == v) return true;
        visit(x, true);
      }
    }
    const bool pass_head_out = head_in ? pass_as_collider : pass_as_noncollider;
    if (pass_head_out) {
      for (NodeId x : set_to_vector(d.parents(w))) {
        if (x == v) return true;
        visit(x, false);
      }
    }
  }
  return false;
}

}  // namespace

Mag dag_to_mag(const Dag& d) {
  const int n = d.num_observed();
  std::vector<MixedEdge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (!has_inducing_path(d, u, v)) continue;
      MixedEdge e{u, v,
                  d.is_ancestor(u, v) ? EdgeMark::tail : EdgeMark::arrowhead,
                  d.is_ancestor(v, u) ? EdgeMark::tail : EdgeMark::arrowhead};
      edges.push_back(e);
    }
  }
  return Mag(n, std::move(edges));
}

MagValidity validate_mag(const Mag& g) {
  const int n = g.num_nodes();
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : set_to_vector(g.ancestors(u))) {
      if (v != u && g.is_ancestor(u, v)) {
        return {false, "directed cycle through nodes " + node_pair_text(v, u)};
      }
    }
  }
  for (const auto& e : g.edges()) {
    if (e.mark_u != EdgeMark::arrowhead || e.mark_v != EdgeMark::arrowhead) {
      continue;
    }
    if (g.is_ancestor(e.u, e.v)) {
      return {false, "bidirected edge between " + node_pair_text(e.u, e.v) +
                         " but " + std::to_string(e.u) + " is an ancestor of " +
                         std::to_string(e.v)};
    }
    if (g.is_ancestor(e.v, e.u)) {
      return {false, "bidirected edge between " + node_pair_text(e.u, e.v) +
                         " but " + std::to_string(e.v) + " is an ancestor of " +
                         std::to_string(e.u)};
    }
  }
  const NodeSet all = (n == kMaxNodes) ? ~NodeSet{0}
                                       : ((NodeSet{1} << n) - 1);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (g.adjacent(u, v)) continue;
      const NodeSet others = without_node(without_node(all, u), v);
      bool separable = false;
      NodeSet z = 0;
      while (true) {
        if (m_separated(g, u, v, z)) {
          separable = true;
          break;
        }
        if (z == others) break;
        z = (z - others) & others;  // next subset of `others`
      }
      if (!separable) {
        return {false, "non-adjacent nodes " + node_pair_text(u, v) +
                           " cannot be separated by any subset"};
      }
    }
  }
  return {true, ""};
}

bool same_separation_relation(const Mag& g1, const Mag& g2) {
  if (g1.num_nodes() != g2.num_nodes()) return false;
  const int n = g1.num_nodes();
  for (NodeId u = 0; u < n; ++u) {
    if ((g1.out_neighbors(u) | g1.in_neighbors(u) | g1.bi_neighbors(u)) !=
        (g2.out_neighbors(u) | g2.in_neighbors(u) | g2.bi_neighbors(u))) {
      return false;
    }
  }
  const NodeSet all = (n == kMaxNodes) ? ~NodeSet{0}
                                       : ((NodeSet{1} << n) - 1);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (g1.adjacent(u, v)) continue;  // adjacent pairs never separate
      const NodeSet others = without_node(without_node(all, u), v);
      NodeSet z = 0;
      while (true) {
        if (m_separated(g1, u, v, z) != m_separated(g2, u, v, z)) {
          return false;
        }
        if (z == others) break;
        z = (z - others) & others;
      }
    }
  }
  return true;
}

namespace {

char left_mark_char(EdgeMark m) {
  switch (m) {
    case EdgeMark::tail:
      return '-';
    case EdgeMark::arrowhead:
      return '<';
    case EdgeMark::circle:
      return 'o';
  }
  return '?';
}

char right_mark_char(EdgeMark m) {
  switch (m) {
    case EdgeMark::tail:
      return '-';
    case EdgeMark::arrowhead:
      return '>';
    case EdgeMark::circle:
      return 'o';
  }
  return '?';
}

std::string edge_line(const MixedEdge& e) {
  std::string line = std::to_string(e.u);
  line += ' ';
  line += left_mark_char(e.mark_u);
  line += right_mark_char(e.mark_v);
  line += ' ';
  line += std::to_string(e.v);
  return line;
}

std::string header_line(int nodes, int latents) {
  return "nodes " + std::to_string(nodes) + " latents " +
         std::to_string(latents);
}

[[noreturn]] void parse_fail(int line_no, const std::string& message) {
  throw std::runtime_error("line " + std::to_string(line_no) + ": " + message);
}

struct ParsedText {
  int nodes = 0;
  int latents = 0;
  std::vector<MixedEdge> edges;
  std::vector<int> edge_lines;  // source line of each edge, for diagnostics
};

bool mark_from_char(char c, bool left, EdgeMark& out) {
  if (c == '-') {
    out = EdgeMark::tail;
    return true;
  }
  if (c == 'o') {
    out = EdgeMark::circle;
    return true;
  }
  if ((left && c == '<') || (!left && c == '>')) {
    out = EdgeMark::arrowhead;
    return true;
  }
  return false;
}

ParsedText parse_text(const std::string& text) {
  ParsedText result;
  std::istringstream stream(text);
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(stream, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first) || first[0] == '#') continue;
    if (!header_seen) {
      std::string latents_word;
      if (first != "nodes" || !(fields >> result.nodes) ||
          !(fields >> latents_word) || latents_word != "latents" ||
          !(fields >> result.latents)) {
        parse_fail(line_no, "expected header `nodes <n> latents <l>`");
      }
      std::string extra;
      if (fields >> extra) parse_fail(line_no, "trailing tokens after header");
      header_seen = true;
      continue;
    }
    MixedEdge e;
    std::string marks;
    try {
      e.u = std::stoi(first);
    } catch (const std::exception&) {
      parse_fail(line_no, "expected a node id, got `" + first + "`");
    }
    if (!(fields >> marks >> e.v)) {
      parse_fail(line_no, "expected `u <marks> v`");
    }
    std::string extra;
    if (fields >> extra) parse_fail(line_no, "trailing tokens after edge");
    if (marks.size() != 2 || !mark_from_char(marks[0], true, e.mark_u) ||
        !mark_from_char(marks[1], false, e.mark_v)) {
      parse_fail(line_no, "bad edge marks `" + marks + "`");
    }
    result.edges.push_back(e);
    result.edge_lines.push_back(line_no);
  }
  if (!header_seen) parse_fail(line_no + 1, "missing header line");
  return result;
}

}  // namespace

std::string to_text(const Dag& d) {
  std::string out = header_line(d.num_observed(), d.num_latent());
  out += '\n';
  for (const auto& [p, c] : d.edges()) {
    out += edge_line(directed_edge(p, c));
    out += '\n';
  }
  return out;
}

std::string to_text(const Mag& g) {
  std::string out = header_line(g.num_nodes(), 0);
  out += '\n';
  for (const auto& e : g.edges()) {
    out += edge_line(e);
    out += '\n';
  }
  return out;
}

std::string to_text(const Pag& g) {
  std::string out = header_line(g.num_nodes(), 0);
  out += '\n';
  for (const auto& e : g.edges()) {
    out += edge_line(e);
    out += '\n';
  }
  return out;
}

Dag parse_dag(const std::string& text) {
  ParsedText parsed = parse_text(text);
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (size_t i = 0; i < parsed.edges.size(); ++i) {
    const MixedEdge& e = parsed.edges[i];
    const int line_no = parsed.edge_lines[i];
    if (e.mark_u == EdgeMark::tail && e.mark_v == EdgeMark::arrowhead) {
      edges.emplace_back(e.u, e.v);
    } else if (e.mark_u == EdgeMark::arrowhead && e.mark_v == EdgeMark::tail) {
      edges.emplace_back(e.v, e.u);
    } else {
      parse_fail(line_no, "a directed graph allows only -> or <- edges");
    }
  }
  try {
    return Dag(parsed.nodes, parsed.latents, std::move(edges));
  } catch (const std::invalid_argument& err) {
    throw std::runtime_error(std::string("text is not a valid graph: ") +
                             err.what());
  }
}

Mag parse_mag(const std::string& text) {
  ParsedText parsed = parse_text(text);
  if (parsed.latents != 0) {
    throw std::runtime_error("line 1: a mixed graph header needs latents 0");
  }
  try {
    return Mag(parsed.nodes, std::move(parsed.edges));
  } catch (const std::invalid_argument& err) {
    throw std::runtime_error(std::string("text is not a valid graph: ") +
                             err.what());
  }
}

Pag parse_pag(const std::string& text) {
  ParsedText parsed = parse_text(text);
  if (parsed.latents != 0) {
    throw std::runtime_error("line 1: a mixed graph header needs latents 0");
  }
  try {
    return Pag(parsed.nodes, std::move(parsed.edges));
  } catch (const std::invalid_argument& err) {
    throw std::runtime_error(std::string("text is not a valid graph: ") +
                             err.what());
  }
}

}  // namespace codisco
