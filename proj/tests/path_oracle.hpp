#pragma once

#include <vector>

#include "codisco/graph.hpp"

namespace codisco::testing {

// Brute-force re-implementations of the separation semantics used to check
// the library's walk-based traversals. Everything here works from the
// path-based definitions directly: enumerate simple paths, classify each
// internal node as collider or non-collider from the marks at it, and apply
// the blocking rules. Exponential, so intended for n up to about 10.

// Reflexive ancestor sets recomputed by plain DFS over directed edges.
std::vector<NodeSet> slow_ancestors(const Dag& d);
std::vector<NodeSet> slow_ancestors(const Mag& g);

bool slow_d_separated(const Dag& d, NodeId u, NodeId v, NodeSet z);
bool slow_m_separated(const Mag& g, NodeId u, NodeId v, NodeSet z);

// True iff some simple path between observed nodes u and v is inducing
// relative to the latent block of d: every internal non-collider is latent
// and every internal collider is an ancestor of u or v.
bool slow_has_inducing_path(const Dag& d, NodeId u, NodeId v);

// True iff some z made of observed nodes other than u and v d-separates them
// in d. Marginalizing the latents makes u and v adjacent exactly when this
// is false.
bool slow_separable(const Dag& d, NodeId u, NodeId v);

}  // namespace codisco::testing
