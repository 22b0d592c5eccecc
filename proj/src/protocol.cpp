#include "smw/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace smw {
namespace {

std::string vertex_list(const std::vector<int>& vs) {
  std::ostringstream os;
  for (size_t k = 0; k < vs.size(); ++k) os << (k ? "," : "") << "v" << vs[k] + 1;
  return os.str();
}

AssumptionReport require_assumption(const SignedGraph& g, const Decomposition& dec, AssumptionPolicy policy) {
  AssumptionReport r = verify_assumption(g, dec);
  if (r.ok() || policy == AssumptionPolicy::Report) return r;
  std::string msg;
  if (!r.path_cover) msg += "no definite path from V1 to " + vertex_list(r.path_failures);
  if (!r.dominance) {
    if (!msg.empty()) msg += "; ";
    msg += "not in-degree-dominated: " + vertex_list(r.dominance_failures);
  }
  throw Error(ErrorCode::AssumptionViolated, msg);
}

ProtocolDesign build_design(const SignedGraph& g, const Decomposition& dec, const Vector& theta, double coefficient,
                            bool coefficient_is_margin, AssumptionPolicy policy) {
  const int d = g.dim();
  if (theta.size() != d) throw Error(ErrorCode::DimensionMismatch, "theta must have d entries");
  if (theta.isZero(0.0)) throw Error(ErrorCode::ZeroTheta, "the consensus state must be nonzero");
  if (!(coefficient > 0.0) || !std::isfinite(coefficient)) {
    throw Error(ErrorCode::InvalidArgument, coefficient_is_margin ? "margin must be > 0" : "delta must be > 0");
  }
  const AssumptionReport report = require_assumption(g, dec, policy);

  ProtocolDesign p;
  p.assumption = report;
  p.theta = theta;
  const StructuralSets sets = structural_sets(g);
  p.informed = sets.antagonized;
  p.blocks = coupling_blocks(g);
  for (int i : dec.v1()) {
    auto it = p.blocks.find(i);
    if (it == p.blocks.end() || it->second.cls() != WeightClass::PosDef) {
      throw Error(ErrorCode::DegenerateCoupling,
                  "v" + std::to_string(i + 1) + " in V1 has no positive definite antagonistic in-weight");
    }
  }

  if (g.directed()) {
    const CouplingBound bound = coupling_bound(g, dec, p.blocks, policy);
    p.bound_c = bound.c;
    p.per_vertex_c = bound.per_vertex;
    p.delta = coefficient_is_margin ? bound.c + coefficient : coefficient;
  } else {
    p.bound_c = 0.0;
    p.delta = coefficient;
  }
  if (!(p.delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "coupling coefficient must be > 0");
  p.k1 = 1.0 + 2.0 / p.delta;
  p.x0 = p.k1 * theta;
  return p;
}

}  // namespace

std::map<int, MatrixWeight> coupling_blocks(const SignedGraph& g) {
  const int d = g.dim();
  const StructuralSets sets = structural_sets(g);
  std::map<int, MatrixWeight> out;
  for (int i : sets.antagonized) {
    Matrix sum = Matrix::Zero(d, d);
    for (int j : sets.vertex[static_cast<size_t>(i)].negative) sum += g.weight(i, j)->abs();
    out.emplace(i, classify_weight(sum));
  }
  return out;
}

bool definite_coupling(const SignedGraph& g, const Decomposition& dec) {
  const auto blocks = coupling_blocks(g);
  for (int i : dec.v1()) {
    auto it = blocks.find(i);
    if (it == blocks.end() || it->second.cls() != WeightClass::PosDef) return false;
  }
  return true;
}

Grounding ProtocolDesign::grounding(int n, int d) const {
  Grounding gr = Grounding::none(n, d);
  for (const auto& [i, b] : blocks) {
    if (i < 0 || i >= n || b.dim() != d) throw Error(ErrorCode::DimensionMismatch, "design does not fit graph");
    gr.delta[static_cast<size_t>(i)] = delta;
    gr.blocks[static_cast<size_t>(i)] = b;
  }
  return gr;
}

CouplingBound coupling_bound(const SignedGraph& g, const Decomposition& dec,
                             const std::map<int, MatrixWeight>& blocks, AssumptionPolicy policy) {
  require_assumption(g, dec, policy);
  CouplingBound out;
  out.c = -std::numeric_limits<double>::infinity();
  for (int i : dec.v1()) {
    auto it = blocks.find(i);
    if (it == blocks.end()) {
      throw Error(ErrorCode::InvalidArgument, "no coupling block for v" + std::to_string(i + 1));
    }
    const Matrix b = it->second.abs();
    Eigen::SelfAdjointEigenSolver<Matrix> bes(b, Eigen::EigenvaluesOnly);
    if (bes.eigenvalues().minCoeff() <= kSingularCouplingTol) {
      throw Error(ErrorCode::SingularCoupling, "|B_" + std::to_string(i + 1) + "| is not positive definite");
    }
    // |B|^{-1} M is similar to R^{-1} M R^{-T} with |B| = R R^T.
    const Matrix m = -degree_imbalance(g, i);
    Eigen::LLT<Matrix> llt(b);
    if (llt.info() != Eigen::Success) throw Error(ErrorCode::SingularCoupling, "Cholesky failed");
    const auto r = llt.matrixL();
    Matrix reduced = r.solve(m);
    reduced = r.solve(reduced.transpose().eval()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (reduced + reduced.transpose()), Eigen::EigenvaluesOnly);
    const double ci = 0.5 * es.eigenvalues().maxCoeff();
    out.per_vertex.emplace(i, ci);
    out.c = std::max(out.c, ci);
  }
  return out;
}

ProtocolDesign design_fixed(const SignedGraph& g, const Decomposition& dec, const Vector& theta, double margin,
                            AssumptionPolicy policy) {
  return build_design(g, dec, theta, margin, true, policy);
}

ProtocolDesign design_with_delta(const SignedGraph& g, const Decomposition& dec, const Vector& theta, double delta,
                                 AssumptionPolicy policy) {
  return build_design(g, dec, theta, delta, false, policy);
}

ClosedLoop closed_loop(const SignedGraph& g, const ProtocolDesign& design) {
  const int n = g.size();
  const int d = g.dim();
  const Grounding gr = design.grounding(n, d);
  Laplacian lb = grounded_laplacian(signed_laplacian(g), gr);
  Laplacian hat = augmented_laplacian(lb, gr);
  Vector input = Vector::Zero(n * d);
  for (const auto& [i, b] : design.blocks) input.segment(i * d, d) = design.delta * (b.entries() * design.x0);
  return ClosedLoop{std::move(lb), std::move(hat), std::move(input)};
}

DesignCheck verify_design(const SignedGraph& g, const ProtocolDesign& design) {
  const ClosedLoop cl = closed_loop(g, design);
  DesignCheck c;
  c.spectral = spectral_report(cl.grounded, cl.augmented, design.k1);
  c.spec_ok = c.spectral.min_real_part > kSpecTol;
  c.null_ok = c.spectral.null_dim == g.dim() && c.spectral.psi_match;
  const Matrix psi = consensus_space(g.size(), g.dim(), 1.0, design.k1);
  c.equilibrium_residual = (cl.augmented.matrix * psi).cwiseAbs().maxCoeff();
  return c;
}

namespace {

template <class MakeDesign>
SwitchingDesign switching_impl(std::span<const NetworkCase> cases, double alpha, MakeDesign&& make) {
  if (cases.empty()) throw Error(ErrorCode::InvalidArgument, "no graphs given");
  if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "dwell time must be > 0");
  SwitchingDesign sw;
  sw.alpha = alpha;
  for (size_t k = 0; k < cases.size(); ++k) {
    try {
      sw.designs.push_back(make(k));
    } catch (const Error& e) {
      throw Error(e.code(), "graph " + std::to_string(k + 1) + ": " + e.message());
    }
  }
  return sw;
}

}  // namespace

SwitchingDesign design_switching(std::span<const NetworkCase> cases, const Vector& theta, double alpha,
                                 double margin) {
  return switching_impl(cases, alpha, [&](size_t k) {
    return design_fixed(cases[k].graph, cases[k].decomposition, theta, margin, cases[k].policy);
  });
}

SwitchingDesign design_switching_with_delta(std::span<const NetworkCase> cases, const Vector& theta,
                                            double alpha, std::span<const double> deltas) {
  if (deltas.size() != cases.size()) throw Error(ErrorCode::DimensionMismatch, "one delta per graph required");
  return switching_impl(cases, alpha, [&](size_t k) {
    return design_with_delta(cases[k].graph, cases[k].decomposition, theta, deltas[k], cases[k].policy);
  });
}

Contraction contraction_factor(const SwitchingDesign& design, std::span<const SignedGraph> graphs) {
  if (design.designs.size() != graphs.size()) throw Error(ErrorCode::DimensionMismatch, "one design per graph");
  if (!(design.alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "dwell time must be > 0");
  Contraction c;
  c.lambda = 0.0;
  std::vector<int> bad;
  for (size_t k = 0; k < graphs.size(); ++k) {
    const ClosedLoop cl = closed_loop(graphs[k], design.designs[k]);
    const double lmin = min_symmetric_eigenvalue(cl.grounded.matrix);
    c.min_symmetric.push_back(lmin);
    if (lmin <= 0.0) bad.push_back(static_cast<int>(k));
    c.lambda = std::max(c.lambda, std::exp(-2.0 * design.alpha * lmin));
  }
  if (!bad.empty()) {
    std::string msg = "symmetric part not positive definite for graph";
    for (int k : bad) msg += " " + std::to_string(k + 1);
    throw Error(ErrorCode::NotContracting, msg);
  }
  return c;
}

bool necessary_condition_check(const Vector& z, std::span<const Matrix> augmented) {
  if (augmented.empty()) throw Error(ErrorCode::InvalidArgument, "no Laplacians given");
  std::vector<Basis> bases;
  bases.reserve(augmented.size());
  for (const Matrix& m : augmented) {
    if (m.rows() != z.size()) throw Error(ErrorCode::DimensionMismatch, "state length");
    bases.push_back(null_space(m));
  }
  const Basis common = intersect_null_spaces(bases);
  return distance_to_span(common, z) <= kNecessaryTol * z.norm();
}

}  // namespace smw
