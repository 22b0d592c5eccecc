#include "smw/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace smw {
namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, std::string(what) + " must be square");
}

Basis null_space_any(const Matrix& m, double tol) {
  const Eigen::Index cols = m.cols();
  if (m.size() == 0 || m.cwiseAbs().maxCoeff() == 0.0) return Basis{Matrix::Identity(cols, cols)};
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw Error(ErrorCode::NumericalFailure, "SVD did not converge");
  const Vector& sv = svd.singularValues();
  const double cut = tol * sv(0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cut) ++rank;
  return Basis{svd.matrixV().rightCols(cols - rank)};
}

}  // namespace

Grounding Grounding::none(int n, int d) {
  return Grounding{std::vector<double>(static_cast<size_t>(n), 0.0),
                   std::vector<MatrixWeight>(static_cast<size_t>(n), MatrixWeight::zero(d))};
}

Laplacian signed_laplacian(const SignedGraph& g) {
  const int d = g.dim();
  Matrix l = Matrix::Zero(g.size() * d, g.size() * d);
  for (const auto& [key, w] : g.weights()) {
    const auto [i, j] = key;
    l.block(i * d, j * d, d, d) -= w.entries();
    l.block(i * d, i * d, d, d) += w.abs();
  }
  return Laplacian{std::move(l), LaplacianKind::Signed, g.size(), d};
}

Laplacian grounded_laplacian(const Laplacian& signed_l, const Grounding& grounding) {
  if (signed_l.kind != LaplacianKind::Signed) throw Error(ErrorCode::InvalidArgument, "expected a signed Laplacian");
  if (grounding.size() != signed_l.agents || grounding.blocks.size() != grounding.delta.size()) {
    throw Error(ErrorCode::DimensionMismatch, "grounding does not match the Laplacian");
  }
  const int d = signed_l.dim;
  Laplacian out{signed_l.matrix, LaplacianKind::Grounded, signed_l.agents, d};
  for (int i = 0; i < signed_l.agents; ++i) {
    const double delta = grounding.delta[static_cast<size_t>(i)];
    const MatrixWeight& b = grounding.blocks[static_cast<size_t>(i)];
    if (b.dim() != d) throw Error(ErrorCode::DimensionMismatch, "coupling block is not d x d");
    if (!(delta >= 0.0)) throw Error(ErrorCode::InvalidArgument, "coupling coefficients must be >= 0");
    out.matrix.block(i * d, i * d, d, d) += delta * b.abs();
  }
  return out;
}

Laplacian augmented_laplacian(const Laplacian& grounded, const Grounding& grounding) {
  if (grounded.kind != LaplacianKind::Grounded && grounded.kind != LaplacianKind::ExpandedGrounded) {
    throw Error(ErrorCode::InvalidArgument, "expected a grounded Laplacian");
  }
  if (grounding.size() != grounded.agents) throw Error(ErrorCode::DimensionMismatch, "grounding size");
  const int d = grounded.dim;
  const int nd = grounded.agents * d;
  Matrix hat = Matrix::Zero(nd + d, nd + d);
  hat.topLeftCorner(nd, nd) = grounded.matrix;
  for (int i = 0; i < grounded.agents; ++i) {
    const MatrixWeight& b = grounding.blocks[static_cast<size_t>(i)];
    if (b.dim() != d) throw Error(ErrorCode::DimensionMismatch, "coupling block is not d x d");
    hat.block(i * d, nd, d, d) = -grounding.delta[static_cast<size_t>(i)] * b.entries();
  }
  const auto kind = grounded.kind == LaplacianKind::Grounded ? LaplacianKind::Augmented
                                                              : LaplacianKind::ExpandedAugmented;
  return Laplacian{std::move(hat), kind, grounded.agents, d};
}

ExpandedSystem expand_system(const SignedGraph& g, const Grounding& grounding) {
  const int n = g.size();
  const int d = g.dim();
  if (grounding.size() != n) throw Error(ErrorCode::DimensionMismatch, "grounding size");
  std::vector<Edge> edges;
  for (const auto& [key, w] : g.weights()) {
    const auto [i, j] = key;
    const MatrixWeight lifted = classify_weight(w.abs());
    if (w.sign() > 0) {
      edges.push_back({j, i, lifted});
      edges.push_back({j + n, i + n, lifted});
    } else {
      edges.push_back({j + n, i, lifted});
      edges.push_back({j, i + n, lifted});
    }
  }
  // Every arc is materialized explicitly, so the lifted graph is stored as
  // directed even for undirected inputs.
  SignedGraph lifted(2 * n, d, true, edges);

  Grounding gbar;
  gbar.delta.reserve(static_cast<size_t>(2 * n));
  gbar.blocks.reserve(static_cast<size_t>(2 * n));
  for (int i = 0; i < n; ++i) {
    gbar.delta.push_back(grounding.delta[static_cast<size_t>(i)]);
    gbar.blocks.push_back(grounding.blocks[static_cast<size_t>(i)]);
  }
  for (int i = 0; i < n; ++i) {
    gbar.delta.push_back(grounding.delta[static_cast<size_t>(i)]);
    gbar.blocks.push_back(classify_weight(-grounding.blocks[static_cast<size_t>(i)].entries()));
  }
  Laplacian lb = grounded_laplacian(signed_laplacian(lifted), gbar);
  lb.kind = LaplacianKind::ExpandedGrounded;
  return ExpandedSystem{std::move(lifted), std::move(gbar), std::move(lb)};
}

std::vector<std::complex<double>> spectrum(const Matrix& m) {
  require_square(m, "matrix");
  if (m.size() == 0) return {};
  Eigen::EigenSolver<Matrix> es(m, false);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::NumericalFailure, "eigensolver did not converge");
  std::vector<std::complex<double>> ev(es.eigenvalues().begin(), es.eigenvalues().end());
  std::sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return ev;
}

double min_real_part(const Matrix& m) {
  const auto ev = spectrum(m);
  if (ev.empty()) throw Error(ErrorCode::DimensionMismatch, "empty matrix");
  return ev.front().real();
}

Basis null_space(const Matrix& m, double tol) {
  require_square(m, "matrix");
  return null_space_any(m, tol);
}

Basis orthonormalize(const Matrix& a, double tol) {
  if (a.cols() == 0) return Basis{Matrix(a.rows(), 0)};
  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  qr.setThreshold(tol);
  const Eigen::Index rank = qr.rank();
  Matrix q = qr.householderQ() * Matrix::Identity(a.rows(), rank);
  return Basis{std::move(q)};
}

Basis intersect_null_spaces(std::span<const Basis> bases) {
  if (bases.empty()) throw Error(ErrorCode::InvalidArgument, "no subspaces to intersect");
  const Eigen::Index rows = bases.front().columns.rows();
  Matrix stacked(rows * static_cast<Eigen::Index>(bases.size()), rows);
  for (size_t k = 0; k < bases.size(); ++k) {
    const Matrix& q = bases[k].columns;
    if (q.rows() != rows) throw Error(ErrorCode::DimensionMismatch, "bases live in different spaces");
    stacked.middleRows(static_cast<Eigen::Index>(k) * rows, rows) =
        Matrix::Identity(rows, rows) - q * q.transpose();
  }
  return null_space_any(stacked, kRankTol);
}

double subspace_gap(const Basis& a, const Basis& b) {
  if (a.ambient() != b.ambient()) throw Error(ErrorCode::DimensionMismatch, "bases live in different spaces");
  if (a.dim() != b.dim()) return 1.0;
  if (a.dim() == 0) return 0.0;
  const Matrix residual = b.columns - a.columns * (a.columns.transpose() * b.columns);
  return std::min(1.0, spectral_norm(residual));
}

double distance_to_span(const Basis& basis, const Vector& v) {
  if (basis.ambient() != v.size()) throw Error(ErrorCode::DimensionMismatch, "vector length");
  return (v - basis.columns * (basis.columns.transpose() * v)).norm();
}

Matrix consensus_space(int agents, int dim, double xi, double xi0) {
  Matrix psi(static_cast<Eigen::Index>(agents + 1) * dim, dim);
  for (int i = 0; i < agents; ++i) psi.middleRows(i * dim, dim) = xi * Matrix::Identity(dim, dim);
  psi.bottomRows(dim) = xi0 * Matrix::Identity(dim, dim);
  return psi;
}

double log_norm2(const Matrix& m) {
  require_square(m, "matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double min_symmetric_eigenvalue(const Matrix& m) {
  require_square(m, "matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

Matrix matrix_exp(const Matrix& m, double t) {
  require_square(m, "matrix");
  if (!(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "t must be >= 0");
  const Eigen::Index n = m.rows();
  const Matrix a0 = t * m;
  if (!a0.allFinite()) throw Error(ErrorCode::NumericalFailure, "non-finite input");

  static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;

  const double norm1 = a0.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > theta13) squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
  const Matrix a = a0 / std::ldexp(1.0, squarings);

  const Matrix id = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const Matrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
  const Matrix u = a * u_inner;
  const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

  Eigen::PartialPivLU<Matrix> lu(v - u);
  Matrix r = lu.solve(v + u);
  for (int k = 0; k < squarings; ++k) r = r * r;
  if (!r.allFinite()) throw Error(ErrorCode::NumericalFailure, "matrix exponential overflowed");
  return r;
}

double lemma2_gap(const Matrix& grounded, int dim, const Vector& x) {
  require_square(grounded, "matrix");
  if (dim < 1 || grounded.rows() % dim != 0 || x.size() != grounded.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix, block size and vector disagree");
  }
  const int n = static_cast<int>(grounded.rows()) / dim;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const Matrix a = -grounded.block(i * dim, j * dim, dim, dim);
      if (a.cwiseAbs().maxCoeff() == 0.0) continue;
      Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.transpose()), Eigen::EigenvaluesOnly);
      const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
      if (es.eigenvalues().minCoeff() < -kDefinitenessTol * scale) {
        throw Error(ErrorCode::NotNonnegativeWeights,
                    "block (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") is not PSD");
      }
    }
  }
  const double phi = x.dot(grounded * x);
  double bound = 0.0;
  for (int i = 0; i < n; ++i) {
    Matrix m = grounded.block(i * dim, i * dim, dim, dim);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      // A_ij = -block(i, j); subtract (A_ij + A_ji) / 2.
      m += 0.5 * (grounded.block(i * dim, j * dim, dim, dim) + grounded.block(j * dim, i * dim, dim, dim));
    }
    const auto xi = x.segment(i * dim, dim);
    bound += xi.dot(m * xi);
  }
  return phi - bound;
}

SpectralReport spectral_report(const Laplacian& grounded, const Laplacian& augmented, double k1) {
  SpectralReport r;
  r.eigenvalues = spectrum(grounded.matrix);
  r.min_real_part = r.eigenvalues.empty() ? 0.0 : r.eigenvalues.front().real();
  const Basis null = null_space(augmented.matrix);
  r.null_dim = null.dim();
  const Basis psi = orthonormalize(consensus_space(grounded.agents, grounded.dim, 1.0, k1));
  r.psi_match = subspace_gap(null, psi) < kPsiAngleTol;
  return r;
}

}  // namespace smw
