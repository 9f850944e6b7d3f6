#include "codisco/pag.hpp"

#include <array>
#include <stdexcept>

namespace codisco {

namespace {

constexpr int kMaxClassEdges = 9;

// Ancestrality alone; maximality is not needed here. Candidates that pass
// the separation-relation filter against a maximal g inherit g's separating
// sets, so they are maximal automatically.
bool is_ancestral(const Mag& g) {
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    for (NodeId v : set_to_vector(g.ancestors(u))) {
      if (v != u && g.is_ancestor(u, v)) return false;
    }
  }
  for (const auto& e : g.edges()) {
    if (e.mark_u == EdgeMark::arrowhead && e.mark_v == EdgeMark::arrowhead &&
        (g.is_ancestor(e.u, e.v) || g.is_ancestor(e.v, e.u))) {
      return false;
    }
  }
  return true;
}

}  // namespace

Pag skeleton_pag(const Mag& g) {
  std::vector<MixedEdge> edges;
  edges.reserve(g.edges().size());
  for (const auto& [u, v] : g.skeleton()) edges.push_back(circle_edge(u, v));
  return Pag(g.num_nodes(), std::move(edges));
}

Pag equivalence_class_pag(const Mag& g) {
  const auto skeleton = g.skeleton();
  const int m = static_cast<int>(skeleton.size());
  if (m > kMaxClassEdges) {
    throw std::invalid_argument(
        "equivalence-class enumeration supports at most " +
        std::to_string(kMaxClassEdges) + " edges, got " + std::to_string(m));
  }

  const std::array<std::pair<EdgeMark, EdgeMark>, 3> orientations = {{
      {EdgeMark::tail, EdgeMark::arrowhead},       // u -> v
      {EdgeMark::arrowhead, EdgeMark::tail},       // u <- v
      {EdgeMark::arrowhead, EdgeMark::arrowhead},  // u <-> v
  }};

  // Cheap necessary condition, precomputed once: every class member agrees
  // with g on each unshielded collider. This prunes nearly all of the 3^m
  // codes before the expensive separation comparison, which stays the final
  // authority.
  struct UnshieldedTriple {
    int ab = 0;  // edge index of (a, b)
    int cb = 0;  // edge index of (c, b)
    bool b_second_ab = false;
    bool b_second_cb = false;
    bool collider = false;
  };
  std::vector<UnshieldedTriple> triples;
  {
    std::vector<std::vector<int>> edge_at(g.num_nodes(),
                                          std::vector<int>(g.num_nodes(), -1));
    for (int i = 0; i < m; ++i) {
      edge_at[skeleton[i].first][skeleton[i].second] = i;
      edge_at[skeleton[i].second][skeleton[i].first] = i;
    }
    for (NodeId b = 0; b < g.num_nodes(); ++b) {
      const std::vector<NodeId> nbrs = set_to_vector(g.neighbors(b));
      const NodeSet heads = g.in_neighbors(b) | g.bi_neighbors(b);
      for (size_t x = 0; x < nbrs.size(); ++x) {
        for (size_t y = x + 1; y < nbrs.size(); ++y) {
          const NodeId a = nbrs[x];
          const NodeId c = nbrs[y];
          if (g.adjacent(a, c)) continue;
          UnshieldedTriple t;
          t.ab = edge_at[a][b];
          t.cb = edge_at[c][b];
          t.b_second_ab = a < b;
          t.b_second_cb = c < b;
          t.collider = contains(heads, a) && contains(heads, c);
          triples.push_back(t);
        }
      }
    }
  }
  // Orientation 0 puts the arrowhead at the second endpoint, 1 at the
  // first, 2 at both.
  const auto head_at_b = [](int pick, bool b_second) {
    return b_second ? pick != 1 : pick != 0;
  };

  // Per edge, which of the three orientations appears in a class member.
  std::vector<std::array<bool, 3>> seen(m, {false, false, false});
  bool any_member = false;

  std::vector<int> choice(m, 0);
  long total = 1;
  for (int i = 0; i < m; ++i) total *= 3;
  for (long code = 0; code < total; ++code) {
    long rest = code;
    for (int i = 0; i < m; ++i) {
      choice[i] = static_cast<int>(rest % 3);
      rest /= 3;
    }
    bool colliders_match = true;
    for (const UnshieldedTriple& t : triples) {
      const bool collider = head_at_b(choice[t.ab], t.b_second_ab) &&
                            head_at_b(choice[t.cb], t.b_second_cb);
      if (collider != t.collider) {
        colliders_match = false;
        break;
      }
    }
    if (!colliders_match) continue;
    std::vector<MixedEdge> edges;
    edges.reserve(m);
    for (int i = 0; i < m; ++i) {
      auto [mu, mv] = orientations[choice[i]];
      edges.push_back({skeleton[i].first, skeleton[i].second, mu, mv});
    }
    Mag candidate(g.num_nodes(), std::move(edges));
    if (!is_ancestral(candidate)) continue;
    if (!same_separation_relation(candidate, g)) continue;
    any_member = true;
    for (int i = 0; i < m; ++i) seen[i][choice[i]] = true;
  }
  if (!any_member) {
    // g itself always qualifies, so reaching this means the input was not a
    // valid Mag in the first place.
    throw std::invalid_argument("input graph is not ancestral");
  }

  std::vector<MixedEdge> pag_edges;
  pag_edges.reserve(m);
  for (int i = 0; i < m; ++i) {
    EdgeMark at_u = EdgeMark::circle;
    EdgeMark at_v = EdgeMark::circle;
    // seen[i] holds per-orientation membership; a mark is decided when every
    // member agrees on it.
    const bool arrow_u = seen[i][1] || seen[i][2];
    const bool tail_u = seen[i][0];
    const bool arrow_v = seen[i][0] || seen[i][2];
    const bool tail_v = seen[i][1];
    if (arrow_u && !tail_u) at_u = EdgeMark::arrowhead;
    if (tail_u && !arrow_u) at_u = EdgeMark::tail;
    if (arrow_v && !tail_v) at_v = EdgeMark::arrowhead;
    if (tail_v && !arrow_v) at_v = EdgeMark::tail;
    pag_edges.push_back({skeleton[i].first, skeleton[i].second, at_u, at_v});
  }
  return Pag(g.num_nodes(), std::move(pag_edges));
}

Pag class_or_skeleton_pag(const Mag& g) {
  if (static_cast<int>(g.edges().size()) <= kMaxClassEdges) {
    return equivalence_class_pag(g);
  }
  return skeleton_pag(g);
}

}  // namespace codisco
