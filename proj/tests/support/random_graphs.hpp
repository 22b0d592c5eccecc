#pragma once

#include <optional>
#include <random>

#include "smw/graph.hpp"
#include "smw/protocol.hpp"
#include "smw/spectral.hpp"

// Seeded random instances shared by the property tests and the
// acceptance runner.

namespace smw::testing {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);
int uniform_int(Rng& rng, int lo, int hi);  // inclusive

/// Random symmetric weight of the requested class. Definite weights have
/// lambda_min >= 0.2 in magnitude; semidefinite ones have rank < d.
Matrix random_weight(Rng& rng, int d, WeightClass cls);

/// Random PD matrix G G^T / d + 0.2 I.
Matrix random_pd(Rng& rng, int d);

/// Erdos-Renyi style signed graph. d = 1 only draws definite classes.
/// With `nonnegative`, only PosDef/PosSemiDef weights appear.
SignedGraph random_graph(Rng& rng, int n, int d, bool directed, double density, bool nonnegative = false);

struct Instance {
  SignedGraph graph;
  Decomposition dec;
};

/// Draws graphs until one admits a V1 passing the structural assumption
/// and, with `require_coupling`, positive definite coupling on every V1 vertex. The partition
/// is the smallest one found by suggest_decomposition.
Instance random_valid_instance(Rng& rng, int max_n, int max_d, bool directed, bool require_coupling);

/// Random graph plus a random V1 (each vertex with probability 0.4),
/// redrawn until the structural assumption holds.
Instance random_assumption_instance(Rng& rng, int max_n, int max_d);

/// Random PD B_i on V1 with delta_i = max(0, C_i + U(-3, 3)), so roughly
/// half of the groundings sit below the coupling bound.
Grounding random_grounding_near_bound(Rng& rng, const Instance& inst);

}  // namespace smw::testing
