#include "smw/graph.hpp"

#include <algorithm>
#include <deque>
#include <string>

namespace smw {

const char* to_string(WeightClass c) {
  switch (c) {
    case WeightClass::PosDef: return "PosDef";
    case WeightClass::PosSemiDef: return "PosSemiDef";
    case WeightClass::Zero: return "Zero";
    case WeightClass::NegSemiDef: return "NegSemiDef";
    case WeightClass::NegDef: return "NegDef";
  }
  return "?";
}

MatrixWeight MatrixWeight::zero(int d) { return MatrixWeight(Matrix::Zero(d, d), WeightClass::Zero); }

int MatrixWeight::sign() const {
  switch (class_) {
    case WeightClass::PosDef:
    case WeightClass::PosSemiDef: return 1;
    case WeightClass::NegDef:
    case WeightClass::NegSemiDef: return -1;
    case WeightClass::Zero: return 0;
  }
  return 0;
}

Matrix MatrixWeight::positive_part() const {
  return sign() > 0 ? entries_ : Matrix::Zero(entries_.rows(), entries_.cols()).eval();
}

Matrix MatrixWeight::negative_part() const {
  return sign() < 0 ? (-entries_).eval() : Matrix::Zero(entries_.rows(), entries_.cols()).eval();
}

MatrixWeight classify_weight(const Matrix& raw, double tol) {
  if (raw.rows() != raw.cols() || raw.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "weight must be a non-empty square matrix");
  }
  const double scale = raw.cwiseAbs().maxCoeff();
  const double asym = (raw - raw.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * scale) {
    throw Error(ErrorCode::AsymmetricWeight, "asymmetry " + std::to_string(asym));
  }
  Matrix sym = 0.5 * (raw + raw.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::NumericalFailure, "weight eigensolve");
  const Vector& ev = es.eigenvalues();
  const double lo = ev.minCoeff();
  const double hi = ev.maxCoeff();

  WeightClass cls;
  if (hi > tol && lo < -tol) {
    throw Error(ErrorCode::IndefiniteWeight,
                "eigenvalues span [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  } else if (hi <= tol && lo >= -tol) {
    cls = WeightClass::Zero;
  } else if (lo > tol) {
    cls = WeightClass::PosDef;
  } else if (hi < -tol) {
    cls = WeightClass::NegDef;
  } else if (hi > tol) {
    cls = WeightClass::PosSemiDef;
  } else {
    cls = WeightClass::NegSemiDef;
  }
  return MatrixWeight(std::move(sym), cls);
}

SignedGraph::SignedGraph(int n, int d, bool directed, const std::vector<Edge>& edges)
    : n_(n), d_(d), directed_(directed) {
  if (n < 1 || d < 1) throw Error(ErrorCode::InvalidGraph, "need n >= 1 and d >= 1");
  auto put = [&](int i, int j, const MatrixWeight& w, bool mirror) {
    auto [it, inserted] = weights_.emplace(std::make_pair(i, j), w);
    if (inserted) return;
    if (mirror && it->second.entries() == w.entries()) return;
    if (mirror) {
      throw Error(ErrorCode::InvalidGraph, "undirected edge (" + std::to_string(j + 1) + "," +
                                               std::to_string(i + 1) + ") given twice with different weights");
    }
    throw Error(ErrorCode::InvalidGraph,
                "duplicate edge " + std::to_string(j + 1) + "->" + std::to_string(i + 1));
  };
  for (const Edge& e : edges) {
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n) {
      throw Error(ErrorCode::VertexOutOfRange, "edge endpoint outside 1.." + std::to_string(n));
    }
    if (e.from == e.to) throw Error(ErrorCode::InvalidGraph, "self-loop at " + std::to_string(e.to + 1));
    if (e.weight.dim() != d) throw Error(ErrorCode::DimensionMismatch, "edge weight is not d x d");
    if (e.weight.is_zero()) continue;
    put(e.to, e.from, e.weight, false);
    if (!directed) put(e.from, e.to, e.weight, true);
  }
}

const MatrixWeight* SignedGraph::weight(int i, int j) const {
  auto it = weights_.find({i, j});
  return it == weights_.end() ? nullptr : &it->second;
}

std::vector<Edge> SignedGraph::edges() const {
  std::vector<Edge> out;
  for (const auto& [key, w] : weights_) {
    const auto [i, j] = key;
    if (!directed_ && i > j) continue;
    out.push_back({j, i, w});
  }
  return out;
}

void SignedGraph::check_vertex(int v) const {
  if (v < 0 || v >= n_) {
    throw Error(ErrorCode::VertexOutOfRange,
                "vertex " + std::to_string(v + 1) + " outside 1.." + std::to_string(n_));
  }
}

Decomposition::Decomposition(int n, std::vector<int> v1) : v1_(std::move(v1)), member_(static_cast<size_t>(n), false) {
  if (v1_.empty()) throw Error(ErrorCode::InvalidPartition, "V1 must be nonempty");
  for (int v : v1_) {
    if (v < 0 || v >= n) throw Error(ErrorCode::InvalidPartition, "V1 vertex out of range");
    if (member_[static_cast<size_t>(v)]) throw Error(ErrorCode::InvalidPartition, "V1 lists a vertex twice");
    member_[static_cast<size_t>(v)] = true;
  }
  std::sort(v1_.begin(), v1_.end());
  for (int v = 0; v < n; ++v) {
    if (!member_[static_cast<size_t>(v)]) v2_.push_back(v);
  }
}

StructuralSets structural_sets(const SignedGraph& g) {
  StructuralSets s;
  s.vertex.resize(static_cast<size_t>(g.size()));
  // The map is ordered by (i, j), so every list below comes out sorted
  // except `out`, which is sorted afterwards.
  for (const auto& [key, w] : g.weights()) {
    const auto [i, j] = key;
    auto& vi = s.vertex[static_cast<size_t>(i)];
    vi.in.push_back(j);
    (w.sign() < 0 ? vi.negative : vi.positive).push_back(j);
    s.vertex[static_cast<size_t>(j)].out.push_back(i);
  }
  for (int i = 0; i < g.size(); ++i) {
    auto& vi = s.vertex[static_cast<size_t>(i)];
    std::sort(vi.out.begin(), vi.out.end());
    if (!vi.negative.empty()) s.antagonized.push_back(i);
  }
  return s;
}

std::vector<bool> pn_reachable_from(const SignedGraph& g, const std::vector<int>& sources) {
  const auto n = static_cast<size_t>(g.size());
  std::vector<std::vector<int>> succ(n);
  for (const auto& [key, w] : g.weights()) {
    if (w.is_definite()) succ[static_cast<size_t>(key.second)].push_back(key.first);
  }
  std::vector<bool> seen(n, false);
  std::deque<int> queue;
  for (int s : sources) {
    g.check_vertex(s);
    if (!seen[static_cast<size_t>(s)]) {
      seen[static_cast<size_t>(s)] = true;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : succ[static_cast<size_t>(u)]) {
      if (!seen[static_cast<size_t>(v)]) {
        seen[static_cast<size_t>(v)] = true;
        queue.push_back(v);
      }
    }
  }
  return seen;
}

bool pn_reachable(const SignedGraph& g, int from, int to) {
  g.check_vertex(from);
  g.check_vertex(to);
  return pn_reachable_from(g, {from})[static_cast<size_t>(to)];
}

Matrix degree_imbalance(const SignedGraph& g, int i) {
  g.check_vertex(i);
  Matrix m = Matrix::Zero(g.dim(), g.dim());
  for (const auto& [key, w] : g.weights()) {
    if (key.first == i) m += w.abs();
    if (key.second == i) m -= w.abs();
  }
  return m;
}

bool in_degree_dominated(const SignedGraph& g, int i, double tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(degree_imbalance(g, i), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

AssumptionReport verify_assumption(const SignedGraph& g, const Decomposition& dec) {
  if (dec.size() != g.size()) throw Error(ErrorCode::InvalidPartition, "partition size differs from graph");
  AssumptionReport r;
  const auto reach = pn_reachable_from(g, dec.v1());
  for (int v : dec.v2()) {
    if (!reach[static_cast<size_t>(v)]) r.path_failures.push_back(v);
    if (g.directed() && !in_degree_dominated(g, v)) r.dominance_failures.push_back(v);
  }
  r.path_cover = r.path_failures.empty();
  r.dominance = r.dominance_failures.empty();
  std::set_union(r.path_failures.begin(), r.path_failures.end(), r.dominance_failures.begin(),
                 r.dominance_failures.end(), std::back_inserter(r.failures));
  return r;
}

std::optional<Decomposition> suggest_decomposition(const SignedGraph& g,
                                                   const std::function<bool(const Decomposition&)>& accept) {
  const int n = g.size();
  if (n > kMaxDecompositionSearch) {
    throw Error(ErrorCode::TooLarge, "exhaustive search is capped at " + std::to_string(kMaxDecompositionSearch) +
                                         " vertices");
  }
  // Dominance does not depend on the partition; compute it once.
  std::vector<bool> dominated(static_cast<size_t>(n), true);
  if (g.directed()) {
    for (int v = 0; v < n; ++v) dominated[static_cast<size_t>(v)] = in_degree_dominated(g, v);
  }
  for (int k = 1; k <= n; ++k) {
    // Lexicographic enumeration of k-subsets.
    std::vector<int> pick(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) pick[static_cast<size_t>(i)] = i;
    while (true) {
      Decomposition dec(n, pick);
      bool ok = std::all_of(dec.v2().begin(), dec.v2().end(),
                            [&](int v) { return dominated[static_cast<size_t>(v)]; });
      if (ok) {
        const auto reach = pn_reachable_from(g, dec.v1());
        ok = std::all_of(dec.v2().begin(), dec.v2().end(), [&](int v) { return reach[static_cast<size_t>(v)]; });
      }
      if (ok && (!accept || accept(dec))) return dec;

      int pos = k - 1;
      while (pos >= 0 && pick[static_cast<size_t>(pos)] == n - k + pos) --pos;
      if (pos < 0) break;
      ++pick[static_cast<size_t>(pos)];
      for (int i = pos + 1; i < k; ++i) pick[static_cast<size_t>(i)] = pick[static_cast<size_t>(i - 1)] + 1;
    }
  }
  return std::nullopt;
}

}  // namespace smw
