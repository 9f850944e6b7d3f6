#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "codisco/graph.hpp"

namespace codisco {

// Entities are indexed 0..M-1.
using EntityId = int;

// One conditional-independence question. An absent target is an
// observational query; a present target w asks under do(w). Interventions
// are atomic: there is no multi-target form.
struct CiQuery {
  NodeId u = 0;
  NodeId v = 0;
  NodeSet z = 0;
  std::optional<NodeId> target;
};

// Thrown when an interventional query names a target that was never
// registered on that entity. Algorithms must pay for an interventional
// distribution before reading from it.
class BudgetViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Simulated CI oracle for a single entity. Answers are exact d-separation
// statements on the hidden truth DAG (or on its mutilation for
// interventional queries), optionally flipped with probability
// flip_probability for robustness studies. The ledger tracks the distinct
// nodes intervened on; re-registering a node is free.
class EntityOracle {
 public:
  EntityOracle(EntityId entity, Dag truth, double flip_probability = 0.0,
               std::uint64_t noise_seed = 0);

  EntityId entity() const { return entity_; }
  const Dag& truth() const { return truth_; }
  int num_observed() const { return truth_.num_observed(); }

  // Adds w to the set of available interventional distributions and returns
  // the updated count. Idempotent. Latent or unknown nodes are rejected with
  // std::invalid_argument.
  int register_intervention(NodeId w);

  int intervention_count() const { return set_size(targets_); }
  NodeSet intervened() const { return targets_; }

  // True means u and v are independent given z (under do(target) if one is
  // set). Throws BudgetViolation if the target was not registered first.
  bool ci_test(const CiQuery& q);

  // When set, every answered query appends one line:
  // `<entity> <u> <v> [z...] target=<w|obs> -> indep|dep`.
  void set_query_log(std::vector<std::string>* sink) { log_ = sink; }

 private:
  const Dag& graph_for(std::optional<NodeId> target);

  EntityId entity_;
  Dag truth_;
  NodeSet targets_ = 0;
  double flip_probability_;
  std::mt19937_64 noise_rng_;
  std::map<NodeId, Dag> mutilated_;
  std::vector<std::string>* log_ = nullptr;
};

}  // namespace codisco
