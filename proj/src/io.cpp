#include "smw/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace smw::io {
namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) bad("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing field \"") + key + "\"");
  return *it;
}

int as_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) bad(std::string(what) + " must be an integer");
  return j.get<int>();
}

double as_double(const Json& j, const char* what) {
  if (!j.is_number()) bad(std::string(what) + " must be a number");
  return j.get<double>();
}

Vector as_vector(const Json& j, const char* what) {
  if (!j.is_array()) bad(std::string(what) + " must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (size_t k = 0; k < j.size(); ++k) v(static_cast<Eigen::Index>(k)) = as_double(j[k], what);
  return v;
}

Matrix as_matrix(const Json& j, int d, const char* what) {
  if (!j.is_array() || j.size() != static_cast<size_t>(d)) bad(std::string(what) + " must have d rows");
  Matrix m(d, d);
  for (int r = 0; r < d; ++r) {
    const Json& row = j[static_cast<size_t>(r)];
    if (!row.is_array() || row.size() != static_cast<size_t>(d)) bad(std::string(what) + " must have d columns");
    for (int c = 0; c < d; ++c) m(r, c) = as_double(row[static_cast<size_t>(c)], what);
  }
  return m;
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_json(const Vector& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

}  // namespace

SignedGraph graph_from_json(const Json& j) {
  const int d = as_int(field(j, "d"), "d");
  const int n = as_int(field(j, "n"), "n");
  const Json& directed = field(j, "directed");
  if (!directed.is_boolean()) bad("directed must be a boolean");
  if (d < 1 || n < 1) bad("n and d must be positive");
  const Json& list = field(j, "edges");
  if (!list.is_array()) bad("edges must be an array");
  std::vector<Edge> edges;
  edges.reserve(list.size());
  for (const Json& e : list) {
    const int from = as_int(field(e, "from"), "from");
    const int to = as_int(field(e, "to"), "to");
    edges.push_back({from - 1, to - 1, classify_weight(as_matrix(field(e, "weight"), d, "weight"))});
  }
  return SignedGraph(n, d, directed.get<bool>(), edges);
}

Json to_json(const SignedGraph& g) {
  Json edges = Json::array();
  for (const Edge& e : g.edges()) {
    edges.push_back({{"from", e.from + 1}, {"to", e.to + 1}, {"weight", matrix_json(e.weight.entries())}});
  }
  return {{"d", g.dim()}, {"n", g.size()}, {"directed", g.directed()}, {"edges", std::move(edges)}};
}

ProtocolDesign design_from_json(const Json& j) {
  ProtocolDesign p;
  p.theta = as_vector(field(j, "theta"), "theta");
  p.delta = as_double(field(j, "delta"), "delta");
  p.k1 = as_double(field(j, "k1"), "k1");
  p.x0 = as_vector(field(j, "x0"), "x0");
  p.bound_c = as_double(field(j, "C"), "C");
  const Json& informed = field(j, "informed");
  if (!informed.is_array()) bad("informed must be an array");
  for (const Json& v : informed) p.informed.push_back(as_int(v, "informed") - 1);
  const Json& per = field(j, "perVertexC");
  if (!per.is_object()) bad("perVertexC must be an object");
  for (const auto& [key, value] : per.items()) p.per_vertex_c.emplace(std::stoi(key) - 1, as_double(value, "C_i"));
  const Json& blocks = field(j, "blocks");
  if (!blocks.is_object()) bad("blocks must be an object");
  const int d = static_cast<int>(p.theta.size());
  for (const auto& [key, value] : blocks.items()) {
    p.blocks.emplace(std::stoi(key) - 1, classify_weight(as_matrix(value, d, "block")));
  }
  return p;
}

Json to_json(const ProtocolDesign& p) {
  Json informed = Json::array();
  for (int v : p.informed) informed.push_back(v + 1);
  Json per = Json::object();
  for (const auto& [v, c] : p.per_vertex_c) per[std::to_string(v + 1)] = c;
  Json blocks = Json::object();
  for (const auto& [v, b] : p.blocks) blocks[std::to_string(v + 1)] = matrix_json(b.entries());
  return {{"theta", vector_json(p.theta)}, {"delta", p.delta},         {"k1", p.k1},
          {"x0", vector_json(p.x0)},       {"informed", informed},     {"C", p.bound_c},
          {"perVertexC", per},             {"blocks", std::move(blocks)}};
}

Json to_json(const SpectralReport& r) {
  Json ev = Json::array();
  for (const auto& z : r.eigenvalues) ev.push_back({z.real(), z.imag()});
  return {{"minRealPart", r.min_real_part}, {"nullDim", r.null_dim}, {"psiMatch", r.psi_match},
          {"eigenvalues", std::move(ev)}};
}

Json to_json(const AssumptionReport& r) {
  auto ids = [](const std::vector<int>& vs) {
    Json a = Json::array();
    for (int v : vs) a.push_back(v + 1);
    return a;
  };
  return {{"pathCover", r.path_cover},
          {"dominance", r.dominance},
          {"pathFailures", ids(r.path_failures)},
          {"dominanceFailures", ids(r.dominance_failures)},
          {"failures", ids(r.failures)}};
}

SwitchingSchedule schedule_from_json(const Json& j) {
  const double alpha = as_double(field(j, "alpha"), "alpha");
  const Json& pattern = field(j, "pattern");
  if (!pattern.is_array() || pattern.empty()) bad("pattern must be a nonempty array");
  std::vector<int> ids;
  for (const Json& v : pattern) {
    const int id = as_int(v, "pattern entry");
    if (id < 1) bad("pattern entries are 1-based graph indices");
    ids.push_back(id - 1);
  }
  const Json& dt = field(j, "dt");
  std::vector<double> durations;
  if (dt.is_number()) {
    durations.assign(ids.size(), dt.get<double>());
  } else if (dt.is_array()) {
    for (const Json& v : dt) durations.push_back(as_double(v, "dt"));
  } else {
    bad("dt must be a number or an array");
  }
  bool repeat = false;
  if (auto it = j.find("repeat"); it != j.end()) {
    if (!it->is_boolean()) bad("repeat must be a boolean");
    repeat = it->get<bool>();
  }
  return SwitchingSchedule(alpha, std::move(durations), std::move(ids), repeat);
}

Json to_json(const SwitchingSchedule& s) {
  Json pattern = Json::array();
  for (int id : s.graph_ids()) pattern.push_back(id + 1);
  return {{"alpha", s.alpha()}, {"pattern", pattern}, {"dt", s.durations()}, {"repeat", s.repeats()}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    bad(path.string() + ": " + e.what());
  }
}

SignedGraph read_graph(const std::filesystem::path& path) { return graph_from_json(read_json_file(path)); }

SwitchingSchedule read_schedule(const std::filesystem::path& path) {
  return schedule_from_json(read_json_file(path));
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << 't';
  for (int i = 1; i <= traj.agents; ++i) {
    for (int c = 1; c <= traj.dim; ++c) os << ",x" << i << '_' << c;
  }
  os << ",errnorm\n";
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
  };
  for (size_t k = 0; k < traj.samples(); ++k) {
    put(traj.times[k]);
    for (Eigen::Index c = 0; c < traj.states[k].size(); ++c) {
      os << ',';
      put(traj.states[k](c));
    }
    os << ',';
    put(traj.error_norm[k]);
    os << '\n';
  }
}

}  // namespace smw::io
