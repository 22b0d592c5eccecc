#pragma once

#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "smw/error.hpp"

namespace smw {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Absolute eigenvalue tolerance used to decide definiteness classes.
inline constexpr double kDefinitenessTol = 1e-9;

enum class WeightClass { PosDef, PosSemiDef, Zero, NegSemiDef, NegDef };

const char* to_string(WeightClass c);

/// A symmetric d x d edge or coupling weight together with its
/// definiteness class. Only (semi-)definite weights are representable.
class MatrixWeight {
 public:
  static MatrixWeight zero(int d);

  const Matrix& entries() const { return entries_; }
  WeightClass cls() const { return class_; }
  int dim() const { return static_cast<int>(entries_.rows()); }

  /// +1, 0 or -1.
  int sign() const;
  bool is_zero() const { return class_ == WeightClass::Zero; }
  /// Strictly definite (positive or negative).
  bool is_definite() const { return class_ == WeightClass::PosDef || class_ == WeightClass::NegDef; }

  /// sgn(W) * W, positive semi-definite for every class.
  Matrix abs() const { return static_cast<double>(sign()) * entries_; }
  /// max{W, 0} in the definiteness order.
  Matrix positive_part() const;
  /// max{-W, 0} in the definiteness order.
  Matrix negative_part() const;

  friend bool operator==(const MatrixWeight& a, const MatrixWeight& b) {
    return a.class_ == b.class_ && a.entries_ == b.entries_;
  }

 private:
  friend MatrixWeight classify_weight(const Matrix& raw, double tol);
  MatrixWeight(Matrix entries, WeightClass cls) : entries_(std::move(entries)), class_(cls) {}

  Matrix entries_;
  WeightClass class_;
};

/// Symmetrize `raw` and classify it by its eigenvalues.
/// Throws AsymmetricWeight when max|raw - raw^T| > 1e-9 * max|raw|, and
/// IndefiniteWeight when eigenvalues of both signs exceed `tol`.
MatrixWeight classify_weight(const Matrix& raw, double tol = kDefinitenessTol);

/// One directed edge: weight A_{to,from} on the edge from `from` to `to`.
/// Vertex indices are 0-based in the library; files use 1-based ids.
struct Edge {
  int from;
  int to;
  MatrixWeight weight;
};

class SignedGraph {
 public:
  using WeightMap = std::map<std::pair<int, int>, MatrixWeight>;

  /// Builds a graph from edges. Zero-class weights are dropped. For
  /// undirected graphs every edge is mirrored; if both directions are
  /// given they must agree entrywise.
  SignedGraph(int n, int d, bool directed, const std::vector<Edge>& edges);

  int size() const { return n_; }
  int dim() const { return d_; }
  bool directed() const { return directed_; }

  /// A_ij (edge from j to i), or nullptr when there is no edge.
  const MatrixWeight* weight(int i, int j) const;
  /// Keyed by (i, j) meaning A_ij.
  const WeightMap& weights() const { return weights_; }

  /// Edges with each undirected pair listed once (i < j kept).
  std::vector<Edge> edges() const;

  void check_vertex(int v) const;

 private:
  int n_;
  int d_;
  bool directed_;
  WeightMap weights_;
};

/// Vertex partition V = V1 u V2 with V1 nonempty.
class Decomposition {
 public:
  Decomposition(int n, std::vector<int> v1);

  const std::vector<int>& v1() const { return v1_; }
  const std::vector<int>& v2() const { return v2_; }
  bool in_v1(int v) const { return member_[static_cast<size_t>(v)]; }
  int size() const { return static_cast<int>(member_.size()); }

 private:
  std::vector<int> v1_;
  std::vector<int> v2_;
  std::vector<bool> member_;
};

struct VertexSets {
  std::vector<int> in;        // N_i: j with A_ij != 0
  std::vector<int> out;       // N'_i: j with A_ji != 0
  std::vector<int> negative;  // Omega_i: j with sgn(A_ij) = -1
  std::vector<int> positive;  // Gamma_i: j with sgn(A_ij) = +1
};

struct StructuralSets {
  std::vector<VertexSets> vertex;
  std::vector<int> antagonized;  // U: vertices with a negative in-edge
};

StructuralSets structural_sets(const SignedGraph& g);

/// True iff a directed path from `from` to `to` uses only strictly
/// definite edges. A vertex reaches itself.
bool pn_reachable(const SignedGraph& g, int from, int to);

/// All vertices reachable from any of `sources` along definite edges.
std::vector<bool> pn_reachable_from(const SignedGraph& g, const std::vector<int>& sources);

/// sum_{j in N_i} |A_ij| - sum_{j in N'_i} |A_ji|
Matrix degree_imbalance(const SignedGraph& g, int i);

bool in_degree_dominated(const SignedGraph& g, int i, double tol = kDefinitenessTol);

struct AssumptionReport {
  bool path_cover = true;
  bool dominance = true;
  std::vector<int> path_failures;
  std::vector<int> dominance_failures;
  std::vector<int> failures;  // sorted union of the two lists

  bool ok() const { return path_cover && dominance; }
};

/// Directed graphs: path cover plus in-degree dominance on V2.
/// Undirected graphs: path cover only, dominance reported true.
AssumptionReport verify_assumption(const SignedGraph& g, const Decomposition& dec);

inline constexpr int kMaxDecompositionSearch = 15;

/// Exhaustive search for the smallest V1 (lexicographic tie-break) that
/// passes verify_assumption and the optional extra `accept` filter.
/// Throws TooLarge when N > 15.
std::optional<Decomposition> suggest_decomposition(
    const SignedGraph& g, const std::function<bool(const Decomposition&)>& accept = {});

}  // namespace smw
