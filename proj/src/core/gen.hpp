#pragma once

#include "core/expr.hpp"
#include "core/rng.hpp"

namespace aoi {

// Fresh constants drawn during tree generation and constant mutation.
inline constexpr double kConstantPool[] = {0.0, 1.0, 2.0, -1.0};

// Random well-typed tree of the requested output type with depth <=
// depth_budget. `full` expands operators all the way down (the "full"
// half of ramped half-and-half); otherwise terminals may appear early.
//
// A boolean tree over a signature without boolean variables needs
// depth_budget >= 2 (its shallowest form is a comparison of terminals).
ExprPtr random_tree(const VarSignature& sig, Type want, int depth_budget, bool full, Rng& rng);

// Minimum depth budget a boolean tree needs over this signature.
int min_bool_depth(const VarSignature& sig);

} // namespace aoi
