#pragma once

#include <map>
#include <span>
#include <vector>

#include "smw/graph.hpp"
#include "smw/spectral.hpp"

namespace smw {

/// Default gap between the coupling coefficient and its lower bound.
inline constexpr double kDefaultMargin = 0.1;
/// Coupling blocks on V1 must have lambda_min above this to be inverted.
inline constexpr double kSingularCouplingTol = 1e-8;

/// Enforce: a failed structural assumption throws AssumptionViolated.
/// Report: the failure is recorded on the design and construction goes on;
/// stability then rests on verify_design alone.
enum class AssumptionPolicy { Enforce, Report };

/// Informed-agent protocol driving every agent to theta.
///
/// Informed agents are the vertices with a negative in-edge. Each carries
/// B_i = sum over its antagonistic in-neighbours of |A_ij| (taken with a
/// positive sign) and a common coefficient delta; the external signal is
/// x0 = k1 * theta with k1 = 1 + 2 / delta, which makes 1_N (x) theta an
/// equilibrium of the grounded dynamics.
struct ProtocolDesign {
  Vector theta;
  std::vector<int> informed;
  double delta = 0.0;
  std::map<int, MatrixWeight> blocks;  // informed vertex -> B_i
  double k1 = 0.0;
  Vector x0;
  double bound_c = 0.0;                // 0 for undirected graphs
  std::map<int, double> per_vertex_c;  // V1 -> C_i (directed only)
  AssumptionReport assumption;

  /// delta > C holds, i.e. the sufficient stability condition is met.
  bool meets_bound() const { return delta > bound_c; }

  /// Per-vertex (delta_i, B_i) over all n agents; naive agents get zeros.
  Grounding grounding(int n, int d) const;
};

/// B_i for every vertex with a negative in-edge.
std::map<int, MatrixWeight> coupling_blocks(const SignedGraph& g);

/// Every V1 vertex has a positive definite B_i.
bool definite_coupling(const SignedGraph& g, const Decomposition& dec);

struct CouplingBound {
  std::map<int, double> per_vertex;
  double c = 0.0;
};

/// C_i = 1/2 lambda_max[|B_i|^{-1} (sum_out |A_ji| - sum_in |A_ij|)] for
/// i in V1, evaluated through the Cholesky reduction R^{-T} M R^{-1}.
/// `blocks` must provide B_i for every V1 vertex.
CouplingBound coupling_bound(const SignedGraph& g, const Decomposition& dec,
                             const std::map<int, MatrixWeight>& blocks,
                             AssumptionPolicy policy = AssumptionPolicy::Enforce);

/// Protocol with delta = C + margin (directed) or delta = margin
/// (undirected, where any positive coefficient works).
ProtocolDesign design_fixed(const SignedGraph& g, const Decomposition& dec, const Vector& theta,
                            double margin = kDefaultMargin, AssumptionPolicy policy = AssumptionPolicy::Enforce);

/// Same construction with a caller-chosen coefficient. C is still
/// computed and reported; delta <= C is allowed (meets_bound() is false).
ProtocolDesign design_with_delta(const SignedGraph& g, const Decomposition& dec, const Vector& theta,
                                 double delta, AssumptionPolicy policy = AssumptionPolicy::Enforce);

struct DesignCheck {
  bool spec_ok = false;   // min Re lambda(L_B) > 1e-8
  bool null_ok = false;   // null(L_hat) = span{Psi(1, k1)}
  double equilibrium_residual = 0.0;  // max |L_hat Psi(1, k1)|
  SpectralReport spectral;
};

inline constexpr double kSpecTol = 1e-8;

DesignCheck verify_design(const SignedGraph& g, const ProtocolDesign& design);

/// Matrices of a designed network: L_B, L_hat and the constant input
/// Delta_B x0 of the agent dynamics x' = -L_B x + Delta_B x0.
struct ClosedLoop {
  Laplacian grounded;
  Laplacian augmented;
  Vector input;
};

ClosedLoop closed_loop(const SignedGraph& g, const ProtocolDesign& design);

struct NetworkCase {
  SignedGraph graph;
  Decomposition decomposition;
  AssumptionPolicy policy = AssumptionPolicy::Enforce;
};

struct SwitchingDesign {
  std::vector<ProtocolDesign> designs;  // indexed like the graph list
  double alpha = 0.0;                   // dwell time
};

/// One design per graph, all sharing theta. Errors name the graph (1-based).
SwitchingDesign design_switching(std::span<const NetworkCase> cases, const Vector& theta, double alpha,
                                 double margin = kDefaultMargin);

/// Per-graph explicit coefficients instead of margins.
SwitchingDesign design_switching_with_delta(std::span<const NetworkCase> cases, const Vector& theta,
                                            double alpha, std::span<const double> deltas);

struct Contraction {
  double lambda = 1.0;                  // max_i exp(-2 alpha lambda_min(S_i))
  std::vector<double> min_symmetric;    // lambda_min(S_i) per graph
};

/// Throws NotContracting when some symmetric part is not positive definite.
Contraction contraction_factor(const SwitchingDesign& design, std::span<const SignedGraph> graphs);

inline constexpr double kNecessaryTol = 1e-6;

/// z lies in the intersection of the null spaces of the given augmented
/// Laplacians (to 1e-6 relative).
bool necessary_condition_check(const Vector& z, std::span<const Matrix> augmented);

}  // namespace smw
