#pragma once

#include "codisco/graph.hpp"

namespace codisco {

// The weakest sound prior: g's skeleton with every endpoint mark a circle.
Pag skeleton_pag(const Mag& g);

// The strongest sound prior: enumerate every mark assignment over g's
// skeleton, keep the ancestral graphs whose full m-separation relation
// matches g's, and report each endpoint's mark when all class members agree
// on it (circle otherwise). Brute force over 3^|edges| candidates; graphs
// with more than 9 edges are refused with std::invalid_argument, in which
// case callers fall back to skeleton_pag.
Pag equivalence_class_pag(const Mag& g);

// equivalence_class_pag when feasible, skeleton_pag otherwise.
Pag class_or_skeleton_pag(const Mag& g);

}  // namespace codisco
