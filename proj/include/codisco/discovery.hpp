#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "codisco/graph.hpp"
#include "codisco/oracle.hpp"

namespace codisco {

// Disjoint entity blocks covering 0..M-1. Canonical form: members sorted
// ascending, blocks sorted by smallest member.
struct ClusterResult {
  std::vector<std::vector<EntityId>> clusters;

  int num_entities() const;
  int cluster_of(EntityId i) const;  // index into clusters, -1 if absent

  bool operator==(const ClusterResult& other) const = default;
};

// Canonicalizes blocks and validates that they exactly cover 0..M-1.
ClusterResult make_partition(std::vector<std::vector<EntityId>> blocks,
                             int num_entities);

// Knobs shared by the clustering algorithms. alpha bounds the cross-cluster
// node distance from below (fraction of n), beta bounds the within-cluster
// distance from above. The sampled node multiset S is drawn uniformly with
// replacement from the seeded generator unless an override fixes its size or
// an explicit sample replaces the drawing entirely.
struct AlgoParams {
  double alpha = 0.6;
  double beta = 0.0;
  double delta = 0.1;
  std::optional<int> sample_size_override;
  std::optional<std::vector<NodeId>> explicit_sample;
  std::uint64_t rng_seed = 0;
};

// What a run did, in auditable form. intervention_counts mirrors the
// oracles' ledgers at return time. agreement holds the pairwise Count(i, j)
// tallies where the algorithm uses them (empty otherwise). recovered is
// filled by the recovery entry points, one graph per entity.
struct RecoveryReport {
  std::vector<Mag> recovered;
  std::vector<int> intervention_counts;
  std::vector<NodeId> sample;
  std::vector<std::vector<int>> agreement;
  int assembly_conflicts = 0;
  int fallback_nodes = 0;
  int refinement_iterations = 0;
};

struct ClusterOutcome {
  ClusterResult clusters;
  RecoveryReport report;
};

std::string to_json(const ClusterResult& result);
std::string to_json(const RecoveryReport& report);

// Out_i(u): the nodes v with u -> v in the entity's MAG. Starts from the
// PAG's already-directed edges; each circle-at-u neighbor is settled by one
// CI test under do(u). Registers at most one intervention, and none when the
// PAG leaves no circle at u.
NodeSet identify_out_nbr(EntityOracle& oracle, const Pag& pag, NodeId u);

// Bi_i(u): the nodes v with u <-> v in the entity's MAG. Each undecided
// neighbor must be independent of u under do(u) and under do(v); the do(v)
// intervention is only bought when the do(u) test already passed. Registers
// at most |D_i(u)| + 1 interventions.
NodeSet identify_bidirected(EntityOracle& oracle, const Pag& pag, NodeId u);

// Recovers the entity's full MAG, spending exactly one intervention per
// observed node.
Mag recover_full_mag(EntityOracle& oracle, const Pag& pag);

// Clustering under the (alpha, beta) regime: per-node incidence sets over a
// shared sample S, pairwise agreement Count, edge when Count clears the
// (1 - (alpha+beta)/2)|S| threshold, connected components as clusters.
ClusterOutcome cluster_alpha_beta(std::vector<EntityOracle>& oracles,
                                  const std::vector<Pag>& pags,
                                  const AlgoParams& params);

// Recovers a dominant graph per cluster: every entity draws one node,
// the drawn entities reconstruct their incidence set at that node, and the
// per-node majority (argmax of NCount, ties to the lowest EntityId) is
// stitched into the graph every member receives. Nodes nobody drew are
// filled by the cluster's lowest-numbered entity and tallied in the report.
RecoveryReport recover_dominant_mags(std::vector<EntityOracle>& oracles,
                                     const std::vector<Pag>& pags,
                                     const ClusterResult& clusters,
                                     const AlgoParams& params);

// alpha-clustering without latents: out-neighbor and adjacency agreement
// over S, |S| = ceil(2 ln(M/delta) / alpha).
ClusterOutcome cluster_no_latents(std::vector<EntityOracle>& oracles,
                                  const std::vector<Pag>& pags,
                                  const AlgoParams& params);

// alpha-clustering with latents, degree-bounded budget: exact incidence-set
// match over S, same sample size as cluster_no_latents.
ClusterOutcome cluster_alpha_bounded(std::vector<EntityOracle>& oracles,
                                     const std::vector<Pag>& pags,
                                     const AlgoParams& params);

// alpha-clustering with latents, large clusters: out-neighbor agreement on
// S first, then iterative refinement. Each round every entity intervenes on
// a fresh uniform node; a collision pi(i) = pi(j) = v on a surviving edge
// whose endpoints disagree about v being bidirected with some u in S makes
// the whole component intervene on v and drops every edge that disagrees.
// Stops when an iteration leaves the edge set unchanged.
ClusterOutcome cluster_alpha_general(std::vector<EntityOracle>& oracles,
                                     const std::vector<Pag>& pags,
                                     const AlgoParams& params);

// Given true alpha-clusters (one shared MAG per cluster), splits the node
// set round-robin across each cluster's members, resolves every PAG edge
// with the assigned members' out-neighbor sets, and hands the assembled
// graph to all members. Throws std::invalid_argument if a cluster's PAGs
// are not all equal.
std::vector<Mag> meta_recover(std::vector<EntityOracle>& oracles,
                              const std::vector<Pag>& pags,
                              const ClusterResult& clusters);

struct BaselineOutcome {
  ClusterResult clusters;
  // True when every pairwise weight is identical, so the cut was arbitrary.
  bool low_confidence = false;
};

// Intervention-free baseline: clusters the PAGs alone. Pair weight counts
// the nodes whose PAG incidence matches; the partition removes
// minimum-weight edges (exact minimum cut for k = 2) until k components
// remain.
BaselineOutcome baseline_pag_cluster(const std::vector<Pag>& pags, int k);

// Nodes in ascending order of summed PAG degree (ties by id), truncated to
// budget. Feeds AlgoParams::explicit_sample for the greedy baseline.
std::vector<NodeId> greedy_sample_selection(const std::vector<Pag>& pags,
                                            int budget);

}  // namespace codisco
