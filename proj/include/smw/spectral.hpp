#pragma once

#include <complex>
#include <span>
#include <vector>

#include "smw/graph.hpp"

namespace smw {

enum class LaplacianKind { Signed, Grounded, Augmented, ExpandedGrounded, ExpandedAugmented };

/// An (agents x agents) grid of d x d blocks. Augmented kinds carry one
/// extra block row/column for the external signal.
struct Laplacian {
  Matrix matrix;
  LaplacianKind kind;
  int agents;
  int dim;
};

/// Per-vertex coupling to the external signal: delta_i >= 0 and B_i.
/// Naive vertices carry delta_i = 0 and a Zero block.
struct Grounding {
  std::vector<double> delta;
  std::vector<MatrixWeight> blocks;

  static Grounding none(int n, int d);
  int size() const { return static_cast<int>(delta.size()); }
};

Laplacian signed_laplacian(const SignedGraph& g);

/// L_B = L + blockdiag(delta_i |B_i|).
Laplacian grounded_laplacian(const Laplacian& signed_l, const Grounding& grounding);

/// [[L_B, -(Delta (x) I) B], [0, 0]] with the signed B blocks.
Laplacian augmented_laplacian(const Laplacian& grounded, const Grounding& grounding);

struct ExpandedSystem {
  SignedGraph graph;    // 2N vertices, all weights PosDef/PosSemiDef
  Grounding grounding;  // delta mirrored, B_{i+N} = -B_i
  Laplacian grounded;   // kind ExpandedGrounded
};

/// Lift to the 2N-vertex all-nonnegative system: cooperative edges stay
/// in both copies, antagonistic edges are rerouted to the mirror copy.
ExpandedSystem expand_system(const SignedGraph& g, const Grounding& grounding);

/// Eigenvalues sorted by real part, ties by imaginary part.
std::vector<std::complex<double>> spectrum(const Matrix& m);

double min_real_part(const Matrix& m);

/// Column-orthonormal basis of a subspace of R^rows.
struct Basis {
  Matrix columns;

  int dim() const { return static_cast<int>(columns.cols()); }
  int ambient() const { return static_cast<int>(columns.rows()); }
};

inline constexpr double kRankTol = 1e-8;

/// Right null space by SVD; singular values <= tol * sigma_max count as zero.
Basis null_space(const Matrix& m, double tol = kRankTol);

/// Orthonormal basis of span(a): Householder QR of the columns.
Basis orthonormalize(const Matrix& a, double tol = kRankTol);

/// Intersection of subspaces: the common null space of the stacked
/// complement projectors I - Q_i Q_i^T.
Basis intersect_null_spaces(std::span<const Basis> bases);

/// Largest principal-angle sine between two subspaces; 1 if the
/// dimensions differ.
double subspace_gap(const Basis& a, const Basis& b);

/// ||v - P v|| for the orthogonal projector P onto span(basis).
double distance_to_span(const Basis& basis, const Vector& v);

/// Psi(xi, xi0) = [xi (1_N (x) I_d); xi0 I_d].
Matrix consensus_space(int agents, int dim, double xi, double xi0);

/// mu_2(M) = lambda_max((M + M^T) / 2).
double log_norm2(const Matrix& m);

/// lambda_min of the symmetric part.
double min_symmetric_eigenvalue(const Matrix& m);

double spectral_norm(const Matrix& m);

/// e^{tM} by Pade(13) scaling and squaring.
Matrix matrix_exp(const Matrix& m, double t = 1.0);

/// Phi_B(x) minus the diagonal lower bound of the quadratic form, for a
/// grounded Laplacian whose off-diagonal weights are all PSD. The bound
/// is read off the matrix: delta_i|B_i| = D_i - sum_j A_ij.
double lemma2_gap(const Matrix& grounded, int dim, const Vector& x);

struct SpectralReport {
  double min_real_part = 0.0;
  int null_dim = 0;
  bool psi_match = false;
  std::vector<std::complex<double>> eigenvalues;
};

inline constexpr double kPsiAngleTol = 1e-6;

/// Spectrum of L_B plus the null space of L_hat compared with span{Psi(1, k1)}.
SpectralReport spectral_report(const Laplacian& grounded, const Laplacian& augmented, double k1);

}  // namespace smw
