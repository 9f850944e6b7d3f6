#include "codisco/discovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <utility>

#include "json.hpp"

namespace codisco {

namespace {

struct UnionFind {
  std::vector<int> parent;

  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

ClusterResult components_to_partition(UnionFind& uf, int m) {
  std::vector<std::vector<EntityId>> blocks;
  std::vector<int> block_of(m, -1);
  for (int i = 0; i < m; ++i) {
    int root = uf.find(i);
    if (block_of[root] == -1) {
      block_of[root] = static_cast<int>(blocks.size());
      blocks.emplace_back();
    }
    blocks[block_of[root]].push_back(i);
  }
  return make_partition(std::move(blocks), m);
}

void check_setup(const std::vector<EntityOracle>& oracles,
                 const std::vector<Pag>& pags) {
  if (oracles.empty() || oracles.size() != pags.size()) {
    throw std::invalid_argument("need one PAG per entity oracle");
  }
  const int n = pags[0].num_nodes();
  for (size_t i = 0; i < pags.size(); ++i) {
    if (pags[i].num_nodes() != n || oracles[i].num_observed() != n) {
      throw std::invalid_argument("entity " + std::to_string(i) +
                                  " disagrees on the observed node count");
    }
  }
}

void check_params(const AlgoParams& p) {
  if (p.alpha <= 0.0 || p.alpha > 1.0) {
    throw std::invalid_argument("alpha must lie in (0, 1]");
  }
  if (p.beta < 0.0 || p.beta >= p.alpha) {
    throw std::invalid_argument("beta must lie in [0, alpha)");
  }
  if (p.delta <= 0.0 || p.delta >= 1.0) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
}

// The multiset S. Draws come from `rng` so callers can chain later draws off
// the same stream; an explicit sample or size override takes precedence over
// the formula value.
std::vector<NodeId> make_sample(const AlgoParams& p, int n,
                                double formula_size, std::mt19937_64& rng) {
  if (p.explicit_sample.has_value()) {
    for (NodeId u : *p.explicit_sample) {
      if (u < 0 || u >= n) {
        throw std::invalid_argument("explicit sample node " +
                                    std::to_string(u) + " out of range");
      }
    }
    return *p.explicit_sample;
  }
  const int size = p.sample_size_override.has_value()
                       ? *p.sample_size_override
                       : static_cast<int>(std::ceil(formula_size));
  if (size < 0) {
    throw std::invalid_argument("sample size must be non-negative");
  }
  std::vector<NodeId> sample;
  sample.reserve(static_cast<size_t>(size));
  for (int i = 0; i < size; ++i) {
    sample.push_back(static_cast<NodeId>(rng() % static_cast<unsigned>(n)));
  }
  return sample;
}

std::vector<NodeId> sorted_distinct(const std::vector<NodeId>& sample) {
  std::vector<NodeId> nodes = sample;
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

// Incidence set of one node as three masks; cheap to compare and hash-free.
struct NodeView {
  NodeSet out = 0;
  NodeSet in = 0;
  NodeSet bi = 0;

  bool operator==(const NodeView& other) const = default;
};

NodeView node_view(EntityOracle& oracle, const Pag& pag, NodeId u) {
  NodeView view;
  view.out = identify_out_nbr(oracle, pag, u);
  view.bi = identify_bidirected(oracle, pag, u);
  view.in = pag.neighbors(u) & ~(view.out | view.bi);
  return view;
}

std::vector<int> ledger_counts(const std::vector<EntityOracle>& oracles) {
  std::vector<int> counts;
  counts.reserve(oracles.size());
  for (const auto& o : oracles) counts.push_back(o.intervention_count());
  return counts;
}

bool same_skeleton(const Pag& a, const Pag& b) {
  if (a.num_nodes() != b.num_nodes()) return false;
  for (NodeId u = 0; u < a.num_nodes(); ++u) {
    if (a.neighbors(u) != b.neighbors(u)) return false;
  }
  return true;
}

}  // namespace

int ClusterResult::num_entities() const {
  int total = 0;
  for (const auto& block : clusters) total += static_cast<int>(block.size());
  return total;
}

int ClusterResult::cluster_of(EntityId i) const {
  for (size_t b = 0; b < clusters.size(); ++b) {
    for (EntityId e : clusters[b]) {
      if (e == i) return static_cast<int>(b);
    }
  }
  return -1;
}

ClusterResult make_partition(std::vector<std::vector<EntityId>> blocks,
                             int num_entities) {
  std::vector<bool> seen(num_entities, false);
  int covered = 0;
  for (auto& block : blocks) {
    if (block.empty()) {
      throw std::invalid_argument("partition blocks must be non-empty");
    }
    std::sort(block.begin(), block.end());
    for (EntityId e : block) {
      if (e < 0 || e >= num_entities || seen[e]) {
        throw std::invalid_argument("blocks must exactly cover the entities");
      }
      seen[e] = true;
      ++covered;
    }
  }
  if (covered != num_entities) {
    throw std::invalid_argument("blocks must exactly cover the entities");
  }
  std::sort(blocks.begin(), blocks.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return ClusterResult{std::move(blocks)};
}

std::string to_json(const ClusterResult& result) {
  nlohmann::json j;
  j["clusters"] = result.clusters;
  return j.dump();
}

std::string to_json(const RecoveryReport& report) {
  nlohmann::json j;
  j["sample"] = report.sample;
  j["intervention_counts"] = report.intervention_counts;
  j["agreement"] = report.agreement;
  j["assembly_conflicts"] = report.assembly_conflicts;
  j["fallback_nodes"] = report.fallback_nodes;
  j["refinement_iterations"] = report.refinement_iterations;
  std::vector<std::string> graphs;
  graphs.reserve(report.recovered.size());
  for (const Mag& g : report.recovered) graphs.push_back(to_text(g));
  j["recovered"] = graphs;
  return j.dump();
}

NodeSet identify_out_nbr(EntityOracle& oracle, const Pag& pag, NodeId u) {
  NodeSet out = pag.directed_out(u);
  bool registered = false;
  for (NodeId v : set_to_vector(pag.neighbors(u))) {
    if (pag.mark_at(u, v) != EdgeMark::circle ||
        pag.mark_at(v, u) == EdgeMark::tail) {
      continue;
    }
    if (!registered) {
      oracle.register_intervention(u);
      registered = true;
    }
    if (!oracle.ci_test({u, v, 0, u})) out = with_node(out, v);
  }
  return out;
}

NodeSet identify_bidirected(EntityOracle& oracle, const Pag& pag, NodeId u) {
  NodeSet bi = 0;
  bool registered_u = false;
  for (NodeId v : set_to_vector(pag.neighbors(u))) {
    const EdgeMark at_u = pag.mark_at(u, v);
    const EdgeMark at_v = pag.mark_at(v, u);
    if (at_u == EdgeMark::arrowhead && at_v == EdgeMark::arrowhead) {
      bi = with_node(bi, v);
      continue;
    }
    if (at_u == EdgeMark::tail || at_v == EdgeMark::tail) continue;
    // Forms u o-o v, u <-o v, u o-> v remain. Dependence under do(u) already
    // rules the edge out, so do(v) is bought only after that test passes.
    if (!registered_u) {
      oracle.register_intervention(u);
      registered_u = true;
    }
    if (!oracle.ci_test({u, v, 0, u})) continue;
    oracle.register_intervention(v);
    if (oracle.ci_test({u, v, 0, v})) bi = with_node(bi, v);
  }
  return bi;
}

Mag recover_full_mag(EntityOracle& oracle, const Pag& pag) {
  const int n = pag.num_nodes();
  std::vector<NodeSet> out(n);
  for (NodeId u = 0; u < n; ++u) {
    // The budget is one intervention per node, spent unconditionally; the
    // helpers below reuse these registrations.
    oracle.register_intervention(u);
    out[u] = identify_out_nbr(oracle, pag, u);
  }
  std::vector<NodeSet> bi(n);
  for (NodeId u = 0; u < n; ++u) bi[u] = identify_bidirected(oracle, pag, u);
  std::vector<MixedEdge> edges;
  for (const auto& [u, v] : pag.skeleton()) {
    if (contains(out[u], v)) {
      edges.push_back(directed_edge(u, v));
    } else if (contains(out[v], u)) {
      edges.push_back(directed_edge(v, u));
    } else {
      edges.push_back(bidirected_edge(u, v));
    }
  }
  return Mag(n, std::move(edges));
}

ClusterOutcome cluster_alpha_beta(std::vector<EntityOracle>& oracles,
                                  const std::vector<Pag>& pags,
                                  const AlgoParams& params) {
  check_setup(oracles, pags);
  check_params(params);
  const int m = static_cast<int>(oracles.size());
  const int n = pags[0].num_nodes();

  std::mt19937_64 rng(params.rng_seed);
  const double formula = 4.0 * std::log(m / params.delta) /
                         ((params.alpha - params.beta) *
                          (params.alpha - params.beta));
  std::vector<NodeId> sample = make_sample(params, n, formula, rng);
  const std::vector<NodeId> nodes = sorted_distinct(sample);

  std::vector<std::vector<NodeView>> views(
      m, std::vector<NodeView>(nodes.size()));
  for (int i = 0; i < m; ++i) {
    for (size_t s = 0; s < nodes.size(); ++s) {
      views[i][s] = node_view(oracles[i], pags[i], nodes[s]);
    }
  }
  auto view_at = [&](int i, NodeId u) -> const NodeView& {
    size_t s = std::lower_bound(nodes.begin(), nodes.end(), u) - nodes.begin();
    return views[i][s];
  };

  std::vector<std::vector<int>> count(m, std::vector<int>(m, 0));
  const double threshold =
      (1.0 - (params.alpha + params.beta) / 2.0) * sample.size();
  UnionFind uf(m);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      int agree = 0;
      for (NodeId u : sample) {
        if (view_at(i, u) == view_at(j, u)) ++agree;
      }
      count[i][j] = count[j][i] = agree;
      if (agree + 1e-9 >= threshold) uf.unite(i, j);
    }
  }

  ClusterOutcome outcome{components_to_partition(uf, m), {}};
  outcome.report.sample = std::move(sample);
  outcome.report.agreement = std::move(count);
  outcome.report.intervention_counts = ledger_counts(oracles);
  return outcome;
}

RecoveryReport recover_dominant_mags(std::vector<EntityOracle>& oracles,
                                     const std::vector<Pag>& pags,
                                     const ClusterResult& clusters,
                                     const AlgoParams& params) {
  check_setup(oracles, pags);
  const int m = static_cast<int>(oracles.size());
  if (clusters.num_entities() != m) {
    throw std::invalid_argument("partition does not cover the entities");
  }
  const int n = pags[0].num_nodes();

  // Offset keeps this phase's draws decoupled from the clustering draws made
  // with the same seed.
  std::mt19937_64 rng(params.rng_seed + 0x9e3779b97f4a7c15ULL);
  RecoveryReport report;
  report.recovered.assign(m, Mag(0, {}));

  for (const auto& cluster : clusters.clusters) {
    std::vector<std::vector<EntityId>> drawn(n);
    for (EntityId i : cluster) {
      NodeId u = static_cast<NodeId>(rng() % static_cast<unsigned>(n));
      drawn[u].push_back(i);
      report.sample.push_back(u);
    }

    std::vector<NodeView> dominant(n);
    for (NodeId u = 0; u < n; ++u) {
      std::vector<EntityId> pool = drawn[u];
      if (pool.empty()) {
        pool.push_back(cluster.front());
        ++report.fallback_nodes;
      }
      std::vector<NodeView> local;
      local.reserve(pool.size());
      for (EntityId i : pool) {
        local.push_back(node_view(oracles[i], pags[i], u));
      }
      int best = 0;
      int best_score = -1;
      for (size_t a = 0; a < pool.size(); ++a) {
        int score = 0;
        for (size_t b = 0; b < pool.size(); ++b) {
          if (a != b && local[a] == local[b]) ++score;
        }
        if (score > best_score) {  // ties keep the lowest entity id
          best_score = score;
          best = static_cast<int>(a);
        }
      }
      dominant[u] = local[best];
    }

    // Stitch per-node winners into one graph. The winners at the two ends
    // of a pair may disagree; the lower node id wins and the disagreement is
    // tallied.
    auto claim = [&](NodeId at, NodeId other) -> std::optional<EdgeMark> {
      if (contains(dominant[at].out, other)) return EdgeMark::tail;
      if (contains(dominant[at].in, other)) return EdgeMark::arrowhead;
      if (contains(dominant[at].bi, other)) return EdgeMark::circle;
      return std::nullopt;  // circle stands in for "bidirected" here
    };
    std::vector<MixedEdge> edges;
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        std::optional<EdgeMark> at_u = claim(u, v);
        std::optional<EdgeMark> at_v = claim(v, u);
        bool consistent;
        if (!at_u.has_value() && !at_v.has_value()) {
          consistent = true;
        } else if (at_u.has_value() && at_v.has_value()) {
          consistent = (*at_u == EdgeMark::tail && *at_v == EdgeMark::arrowhead) ||
                       (*at_u == EdgeMark::arrowhead && *at_v == EdgeMark::tail) ||
                       (*at_u == EdgeMark::circle && *at_v == EdgeMark::circle);
        } else {
          consistent = false;
        }
        if (!consistent) ++report.assembly_conflicts;
        std::optional<EdgeMark> deciding = at_u.has_value() ? at_u : at_v;
        if (!deciding.has_value()) continue;
        const bool from_u = at_u.has_value();
        const NodeId a = from_u ? u : v;
        const NodeId b = from_u ? v : u;
        switch (*deciding) {
          case EdgeMark::tail:
            edges.push_back(directed_edge(a, b));
            break;
          case EdgeMark::arrowhead:
            edges.push_back(directed_edge(b, a));
            break;
          case EdgeMark::circle:
            edges.push_back(bidirected_edge(a, b));
            break;
        }
      }
    }
    Mag assembled(n, std::move(edges));
    for (EntityId i : cluster) report.recovered[i] = assembled;
  }

  report.intervention_counts = ledger_counts(oracles);
  return report;
}

namespace {

ClusterOutcome cluster_by_sample_match(
    std::vector<EntityOracle>& oracles, const std::vector<Pag>& pags,
    const AlgoParams& params, bool compare_full_incidence) {
  check_setup(oracles, pags);
  check_params(params);
  const int m = static_cast<int>(oracles.size());
  const int n = pags[0].num_nodes();

  std::mt19937_64 rng(params.rng_seed);
  const double formula = 2.0 * std::log(m / params.delta) / params.alpha;
  std::vector<NodeId> sample = make_sample(params, n, formula, rng);
  const std::vector<NodeId> nodes = sorted_distinct(sample);

  std::vector<std::vector<NodeView>> views(
      m, std::vector<NodeView>(nodes.size()));
  for (int i = 0; i < m; ++i) {
    for (size_t s = 0; s < nodes.size(); ++s) {
      if (compare_full_incidence) {
        views[i][s] = node_view(oracles[i], pags[i], nodes[s]);
      } else {
        views[i][s].out = identify_out_nbr(oracles[i], pags[i], nodes[s]);
        views[i][s].in = pags[i].neighbors(nodes[s]);  // adjacency only
      }
    }
  }

  UnionFind uf(m);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      if (!same_skeleton(pags[i], pags[j])) continue;
      bool match = true;
      for (size_t s = 0; s < nodes.size() && match; ++s) {
        match = views[i][s] == views[j][s];
      }
      if (match) uf.unite(i, j);
    }
  }

  ClusterOutcome outcome{components_to_partition(uf, m), {}};
  outcome.report.sample = std::move(sample);
  outcome.report.intervention_counts = ledger_counts(oracles);
  return outcome;
}

}  // namespace

ClusterOutcome cluster_no_latents(std::vector<EntityOracle>& oracles,
                                  const std::vector<Pag>& pags,
                                  const AlgoParams& params) {
  return cluster_by_sample_match(oracles, pags, params, false);
}

ClusterOutcome cluster_alpha_bounded(std::vector<EntityOracle>& oracles,
                                     const std::vector<Pag>& pags,
                                     const AlgoParams& params) {
  return cluster_by_sample_match(oracles, pags, params, true);
}

namespace {

// Is v a bidirected neighbor of u for this entity? Decided marks answer
// directly; circle forms need the two interventional tests, both of whose
// targets the caller has already registered.
bool bidirected_member(EntityOracle& oracle, const Pag& pag, NodeId u,
                       NodeId v) {
  if (u == v || !pag.adjacent(u, v)) return false;
  const EdgeMark at_u = pag.mark_at(u, v);
  const EdgeMark at_v = pag.mark_at(v, u);
  if (at_u == EdgeMark::tail || at_v == EdgeMark::tail) return false;
  if (at_u == EdgeMark::arrowhead && at_v == EdgeMark::arrowhead) return true;
  return oracle.ci_test({u, v, 0, u}) && oracle.ci_test({u, v, 0, v});
}

}  // namespace

ClusterOutcome cluster_alpha_general(std::vector<EntityOracle>& oracles,
                                     const std::vector<Pag>& pags,
                                     const AlgoParams& params) {
  check_setup(oracles, pags);
  check_params(params);
  const int m = static_cast<int>(oracles.size());
  const int n = pags[0].num_nodes();

  std::mt19937_64 rng(params.rng_seed);
  const double formula = 2.0 * std::log(2.0 * m / params.delta) / params.alpha;
  std::vector<NodeId> sample = make_sample(params, n, formula, rng);
  const std::vector<NodeId> nodes = sorted_distinct(sample);

  // Registering every sampled node up front (not only where the PAG leaves
  // circles at u) keeps the refinement's lazy bidirected tests inside the
  // |S| + 2*iterations budget.
  std::vector<std::vector<NodeSet>> out(m,
                                        std::vector<NodeSet>(nodes.size()));
  for (int i = 0; i < m; ++i) {
    for (size_t s = 0; s < nodes.size(); ++s) {
      oracles[i].register_intervention(nodes[s]);
      out[i][s] = identify_out_nbr(oracles[i], pags[i], nodes[s]);
    }
  }

  std::vector<std::vector<bool>> adj(m, std::vector<bool>(m, false));
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      if (!same_skeleton(pags[i], pags[j])) continue;
      bool match = true;
      for (size_t s = 0; s < nodes.size() && match; ++s) {
        match = out[i][s] == out[j][s];
      }
      adj[i][j] = adj[j][i] = match;
    }
  }

  RecoveryReport report;
  report.sample = sample;

  auto component_partition = [&]() {
    UnionFind uf(m);
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) {
        if (adj[i][j]) uf.unite(i, j);
      }
    }
    return components_to_partition(uf, m);
  };

  while (true) {
    ClusterResult parts = component_partition();
    bool any_edge = false;
    for (int i = 0; i < m && !any_edge; ++i) {
      for (int j = i + 1; j < m && !any_edge; ++j) any_edge = adj[i][j];
    }
    if (!any_edge) break;  // all singletons, nothing left to refine
    const int k_now = static_cast<int>(parts.clusters.size());
    if (report.refinement_iterations >= k_now * k_now + 1) break;
    ++report.refinement_iterations;

    std::vector<NodeId> pi(m);
    for (int i = 0; i < m; ++i) {
      pi[i] = static_cast<NodeId>(rng() % static_cast<unsigned>(n));
      oracles[i].register_intervention(pi[i]);
    }

    bool changed = false;
    for (const auto& component : parts.clusters) {
      // Find one colliding edge whose endpoints disagree about a bidirected
      // edge at some sampled node; then the whole component intervenes on
      // the collision node and every disagreeing edge goes.
      NodeId fire_v = -1;
      for (size_t a = 0; a < component.size() && fire_v < 0; ++a) {
        for (size_t b = a + 1; b < component.size() && fire_v < 0; ++b) {
          const EntityId i = component[a];
          const EntityId j = component[b];
          if (!adj[i][j] || pi[i] != pi[j]) continue;
          const NodeId v = pi[i];
          for (NodeId u : nodes) {
            if (bidirected_member(oracles[i], pags[i], u, v) !=
                bidirected_member(oracles[j], pags[j], u, v)) {
              fire_v = v;
              break;
            }
          }
        }
      }
      if (fire_v < 0) continue;
      for (EntityId i : component) oracles[i].register_intervention(fire_v);
      std::vector<std::vector<bool>> is_bi(component.size());
      for (size_t a = 0; a < component.size(); ++a) {
        for (NodeId u : nodes) {
          is_bi[a].push_back(
              bidirected_member(oracles[component[a]], pags[component[a]], u,
                                fire_v));
        }
      }
      for (size_t a = 0; a < component.size(); ++a) {
        for (size_t b = a + 1; b < component.size(); ++b) {
          const EntityId i = component[a];
          const EntityId j = component[b];
          if (adj[i][j] && is_bi[a] != is_bi[b]) {
            adj[i][j] = adj[j][i] = false;
            changed = true;
          }
        }
      }
    }
    if (!changed) break;
  }

  ClusterOutcome outcome{component_partition(), std::move(report)};
  outcome.report.intervention_counts = ledger_counts(oracles);
  return outcome;
}

std::vector<Mag> meta_recover(std::vector<EntityOracle>& oracles,
                              const std::vector<Pag>& pags,
                              const ClusterResult& clusters) {
  check_setup(oracles, pags);
  const int m = static_cast<int>(oracles.size());
  if (clusters.num_entities() != m) {
    throw std::invalid_argument("partition does not cover the entities");
  }
  const int n = pags[0].num_nodes();

  std::vector<Mag> result(m, Mag(0, {}));
  for (const auto& cluster : clusters.clusters) {
    const Pag& shared = pags[cluster.front()];
    for (EntityId i : cluster) {
      if (!(pags[i] == shared)) {
        throw std::invalid_argument(
            "cluster members disagree on their prior graph; the partition "
            "is not an exact clustering");
      }
    }
    // Round-robin node assignment; entity cluster[t mod size] handles node t.
    std::vector<NodeSet> out(n);
    for (NodeId u = 0; u < n; ++u) {
      EntityId handler = cluster[u % cluster.size()];
      out[u] = identify_out_nbr(oracles[handler], shared, u);
    }
    std::vector<MixedEdge> edges;
    for (const auto& [u, v] : shared.skeleton()) {
      if (contains(out[u], v)) {
        edges.push_back(directed_edge(u, v));
      } else if (contains(out[v], u)) {
        edges.push_back(directed_edge(v, u));
      } else {
        edges.push_back(bidirected_edge(u, v));
      }
    }
    Mag assembled(n, std::move(edges));
    for (EntityId i : cluster) result[i] = assembled;
  }
  return result;
}

namespace {

// Number of nodes at which the two PAGs present the same local picture.
int incidence_agreement(const Pag& a, const Pag& b) {
  int agree = 0;
  for (NodeId u = 0; u < a.num_nodes(); ++u) {
    if (a.neighbors(u) != b.neighbors(u)) continue;
    bool same = true;
    for (NodeId v : set_to_vector(a.neighbors(u))) {
      if (a.mark_at(u, v) != b.mark_at(u, v) ||
          a.mark_at(v, u) != b.mark_at(v, u)) {
        same = false;
        break;
      }
    }
    if (same) ++agree;
  }
  return agree;
}

// Stoer-Wagner over a dense non-negative weight matrix. Returns one side of
// a minimum-weight global cut; ties resolve to the first phase that reached
// the minimum, which is deterministic.
std::vector<int> min_cut_side(std::vector<std::vector<long>> w) {
  const int m = static_cast<int>(w.size());
  std::vector<std::vector<int>> groups(m);
  for (int i = 0; i < m; ++i) groups[i] = {i};
  std::vector<int> active(m);
  std::iota(active.begin(), active.end(), 0);

  long best_weight = std::numeric_limits<long>::max();
  std::vector<int> best_side = groups[0];

  while (active.size() > 1) {
    std::vector<long> weight_to_set(m, 0);
    std::vector<bool> added(m, false);
    int prev = -1;
    int last = -1;
    for (size_t step = 0; step < active.size(); ++step) {
      int pick = -1;
      for (int cand : active) {
        if (added[cand]) continue;
        if (pick == -1 || weight_to_set[cand] > weight_to_set[pick]) {
          pick = cand;
        }
      }
      added[pick] = true;
      prev = last;
      last = pick;
      for (int other : active) {
        if (!added[other]) weight_to_set[other] += w[pick][other];
      }
    }
    if (weight_to_set[last] < best_weight) {
      best_weight = weight_to_set[last];
      best_side = groups[last];
    }
    // Merge the last-added vertex into the one before it.
    for (int other : active) {
      if (other == last || other == prev) continue;
      w[prev][other] += w[last][other];
      w[other][prev] = w[prev][other];
    }
    groups[prev].insert(groups[prev].end(), groups[last].begin(),
                        groups[last].end());
    active.erase(std::find(active.begin(), active.end(), last));
  }
  return best_side;
}

}  // namespace

BaselineOutcome baseline_pag_cluster(const std::vector<Pag>& pags, int k) {
  const int m = static_cast<int>(pags.size());
  if (m == 0) throw std::invalid_argument("need at least one PAG");
  if (k < 1 || k > m) {
    throw std::invalid_argument("cluster count must lie in [1, entities]");
  }

  std::vector<std::vector<long>> w(m, std::vector<long>(m, 0));
  bool all_equal_weights = true;
  long first_weight = -1;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      w[i][j] = w[j][i] = incidence_agreement(pags[i], pags[j]);
      if (first_weight == -1) first_weight = w[i][j];
      if (w[i][j] != first_weight) all_equal_weights = false;
    }
  }

  BaselineOutcome outcome;
  outcome.low_confidence = (m > 1) && all_equal_weights;

  if (k == 1 || m == 1) {
    std::vector<EntityId> everyone(m);
    std::iota(everyone.begin(), everyone.end(), 0);
    outcome.clusters = make_partition({everyone}, m);
    return outcome;
  }

  if (k == 2) {
    std::vector<int> side = min_cut_side(w);
    std::vector<bool> in_side(m, false);
    for (int i : side) in_side[i] = true;
    std::vector<EntityId> a, b;
    for (int i = 0; i < m; ++i) (in_side[i] ? a : b).push_back(i);
    outcome.clusters = make_partition({std::move(a), std::move(b)}, m);
    return outcome;
  }

  // k >= 3: maximum-weight forest with k trees, the usual surrogate for
  // removing minimum-weight edges until k components survive.
  struct WeightedPair {
    long weight;
    int i;
    int j;
  };
  std::vector<WeightedPair> order;
  order.reserve(static_cast<size_t>(m) * (m - 1) / 2);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) order.push_back({w[i][j], i, j});
  }
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return std::tie(b.weight, a.i, a.j) < std::tie(a.weight, b.i, b.j);
  });
  UnionFind uf(m);
  int components = m;
  for (const auto& e : order) {
    if (components == k) break;
    if (uf.find(e.i) != uf.find(e.j)) {
      uf.unite(e.i, e.j);
      --components;
    }
  }
  outcome.clusters = components_to_partition(uf, m);
  return outcome;
}

std::vector<NodeId> greedy_sample_selection(const std::vector<Pag>& pags,
                                            int budget) {
  if (pags.empty()) throw std::invalid_argument("need at least one PAG");
  if (budget < 1) throw std::invalid_argument("budget must be at least 1");
  const int n = pags[0].num_nodes();
  std::vector<std::pair<int, NodeId>> degree;
  degree.reserve(n);
  for (NodeId u = 0; u < n; ++u) {
    int total = 0;
    for (const Pag& pag : pags) total += set_size(pag.neighbors(u));
    degree.emplace_back(total, u);
  }
  std::sort(degree.begin(), degree.end());
  std::vector<NodeId> picks;
  for (const auto& [_, u] : degree) {
    if (static_cast<int>(picks.size()) == budget) break;
    picks.push_back(u);
  }
  return picks;
}

}  // namespace codisco
