#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "codisco/discovery.hpp"
#include "codisco/graph.hpp"

namespace codisco {

// Thrown when a randomized construction exhausts its step or retry budget;
// carries the seed so callers can resample.
class GenerationFailure : public std::runtime_error {
 public:
  GenerationFailure(const std::string& what, std::uint64_t seed)
      : std::runtime_error(what + " (seed " + std::to_string(seed) + ")"),
        seed_(seed) {}
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

// Uniform random topological order; each forward pair kept with probability p.
Dag gen_erdos_renyi(int n, double p, std::uint64_t seed);

// Adds `count` fresh latent nodes, each the parent of a distinct uniformly
// chosen observed pair. Existing edges and latents are kept.
Dag inject_latents(const Dag& d, int count, std::uint64_t seed);

enum class PerturbMode {
  at_least,         // stop once distance >= target (cross-cluster)
  exactly_at_most,  // aim for target, accept any value in (0, target]
};

// Random walk over observed-edge edits (insert, delete, reverse; latent
// edges untouched) until node_distance(dag_to_mag(result), reference) meets
// the mode's condition. With markov_equiv, only edits that keep the result's
// MAG m-separation-equivalent to `reference` are accepted. Throws
// GenerationFailure once step_cap edits (default 10 n^2) were tried.
Dag perturb_to_target_distance(const Dag& d, const Mag& reference, int target,
                               PerturbMode mode, std::uint64_t seed,
                               bool markov_equiv = false, int step_cap = 0);

struct InstanceParams {
  int num_entities = 40;
  int num_clusters = 2;
  double alpha = 0.6;
  double beta = 0.2;
  double gamma = 0.9;
  int num_observed = 10;
  double edge_prob = 0.3;
  int latents_per_dag = 2;
  std::string network_label = "er";
  // When set, dominant graphs perturb this structure instead of fresh
  // Erdos-Renyi draws; num_observed is taken from it.
  std::optional<Dag> base_network;
};

struct EntityTruth {
  EntityId id;
  Dag dag;
  Mag mag;
};

struct ClusterInstance {
  std::vector<EntityTruth> entities;
  ClusterResult truth_partition;
  InstanceParams params;
  std::uint64_t seed = 0;
  // Only meaningful for alpha instances (beta == 0): whether the dominant
  // graphs of different clusters ended up Markov equivalent as intended, or
  // generation had to fall back to distance-only separation.
  bool markov_equiv_achieved = false;
};

// Builds k dominant DAG/MAG pairs at pairwise MAG distance >= alpha*n,
// assigns ceil(gamma*M/k) copies of each, fills the rest of each cluster
// with variants at pairwise within-distance in (0, beta*n] and cross
// distance >= alpha*n, and validates the clustering property pairwise
// before returning. beta == 0 makes every member a dominant copy and asks
// for Markov-equivalent cross-cluster dominants first.
ClusterInstance build_instance(const InstanceParams& params,
                               std::uint64_t seed);

// Re-runs the pairwise node-distance validation on an instance; throws
// std::invalid_argument naming the first violating pair.
void validate_instance(const ClusterInstance& instance);

// Parses a DAG fixture from the text format. If the file's stem (or the
// given name) matches a bundled network, node and edge counts are asserted
// against the manifest. Known names resolve without touching the
// filesystem: asia (8/8), earthquake (5/4), sachs (11/17), survey (6/6).
Dag load_network(const std::string& path_or_name);

// Instance bundle directory: instance.json plus one truth-DAG text file per
// entity.
void write_bundle(const ClusterInstance& instance, const std::string& dir);
ClusterInstance read_bundle(const std::string& dir);

}  // namespace codisco
