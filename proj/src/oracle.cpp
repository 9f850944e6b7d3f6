#include "codisco/oracle.hpp"

#include <utility>

namespace codisco {

EntityOracle::EntityOracle(EntityId entity, Dag truth, double flip_probability,
                           std::uint64_t noise_seed)
    : entity_(entity),
      truth_(std::move(truth)),
      flip_probability_(flip_probability),
      noise_rng_(noise_seed) {
  if (entity < 0) {
    throw std::invalid_argument("entity id must be non-negative");
  }
  if (flip_probability < 0.0 || flip_probability > 1.0) {
    throw std::invalid_argument("flip probability must lie in [0, 1]");
  }
}

int EntityOracle::register_intervention(NodeId w) {
  if (w < 0 || w >= truth_.num_nodes() || truth_.is_latent(w)) {
    throw std::invalid_argument("node " + std::to_string(w) +
                                " is not an intervenable observed node");
  }
  targets_ = with_node(targets_, w);
  return intervention_count();
}

const Dag& EntityOracle::graph_for(std::optional<NodeId> target) {
  if (!target.has_value()) return truth_;
  auto it = mutilated_.find(*target);
  if (it == mutilated_.end()) {
    it = mutilated_.emplace(*target, truth_.mutilated(*target)).first;
  }
  return it->second;
}

bool EntityOracle::ci_test(const CiQuery& q) {
  for (NodeId end : {q.u, q.v}) {
    if (end < 0 || end >= truth_.num_observed()) {
      throw std::invalid_argument("query endpoint " + std::to_string(end) +
                                  " is not an observed node");
    }
  }
  if (q.target.has_value()) {
    if (*q.target < 0 || *q.target >= truth_.num_nodes() ||
        truth_.is_latent(*q.target)) {
      throw std::invalid_argument("intervention target " +
                                  std::to_string(*q.target) +
                                  " is not an observed node");
    }
    if (!contains(targets_, *q.target)) {
      throw BudgetViolation(
          "entity " + std::to_string(entity_) + " queried do(" +
          std::to_string(*q.target) +
          ") without registering that intervention first");
    }
  }

  bool independent = d_separated(graph_for(q.target), q.u, q.v, q.z);
  if (flip_probability_ > 0.0 &&
      std::bernoulli_distribution(flip_probability_)(noise_rng_)) {
    independent = !independent;
  }

  if (log_ != nullptr) {
    std::string line = std::to_string(entity_) + " " + std::to_string(q.u) +
                       " " + std::to_string(q.v) + " [";
    bool first = true;
    for (NodeId w : set_to_vector(q.z)) {
      if (!first) line += ' ';
      line += std::to_string(w);
      first = false;
    }
    line += "] target=";
    line += q.target.has_value() ? std::to_string(*q.target) : "obs";
    line += independent ? " -> indep" : " -> dep";
    log_->push_back(std::move(line));
  }
  return independent;
}

}  // namespace codisco
