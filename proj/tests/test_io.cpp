#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "random_graphs.hpp"
#include "smw/io.hpp"

using namespace smw;
using io::Json;

namespace {

void check_same(const SignedGraph& a, const SignedGraph& b) {
  CHECK(a.size() == b.size());
  CHECK(a.dim() == b.dim());
  CHECK(a.directed() == b.directed());
  CHECK(a.weights() == b.weights());
}

ErrorCode parse_code(const std::string& text) {
  try {
    io::graph_from_json(Json::parse(text));
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("parsed");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("graph round trip") {
  for (const char* name : {"directed7.json", "directed7_a65_semidefinite.json", "switching_g2.json",
                           "switching_g3.json"}) {
    const SignedGraph g = testing::load_fixture(name);
    const SignedGraph back = io::graph_from_json(Json::parse(io::to_json(g).dump()));
    check_same(g, back);
  }
  testing::Rng rng(61);
  for (int trial = 0; trial < 30; ++trial) {
    const SignedGraph g = testing::random_graph(rng, 6, 3, trial % 2 == 0, 0.5);
    check_same(g, io::graph_from_json(Json::parse(io::to_json(g).dump())));
  }
}

TEST_CASE("graph ids are 1-based and undirected pairs appear once") {
  const Json j = Json::parse(R"({"d": 1, "n": 2, "directed": false,
                                 "edges": [{"from": 1, "to": 2, "weight": [[-2]]}]})");
  const SignedGraph g = io::graph_from_json(j);
  REQUIRE(g.weight(1, 0));
  CHECK(g.weight(1, 0)->entries()(0, 0) == -2.0);
  CHECK(g.weight(0, 1));
  CHECK(io::to_json(g)["edges"].size() == 1);
}

TEST_CASE("malformed graphs") {
  CHECK(parse_code(R"({"d": 1, "n": 2})") == ErrorCode::ParseError);
  CHECK(parse_code(R"({"d": 1, "n": 2, "directed": 1, "edges": []})") == ErrorCode::ParseError);
  CHECK(parse_code(R"({"d": 2, "n": 2, "directed": true, "edges": [{"from": 1, "to": 2, "weight": [[1]]}]})") ==
        ErrorCode::ParseError);
  CHECK(parse_code(R"({"d": 1, "n": 2, "directed": true, "edges": [{"from": 1, "to": 3, "weight": [[1]]}]})") ==
        ErrorCode::VertexOutOfRange);
  CHECK(parse_code(R"({"d": 2, "n": 2, "directed": true,
                       "edges": [{"from": 1, "to": 2, "weight": [[1, 0], [0, -1]]}]})") ==
        ErrorCode::IndefiniteWeight);
  CHECK_THROWS_AS(io::read_graph("/nonexistent/graph.json"), Error);
}

TEST_CASE("design round trip") {
  const SignedGraph base = testing::load_fixture("directed7.json");
  const ProtocolDesign p = design_fixed(base, Decomposition(7, {0, 1, 2, 3}), testing::theta_example());
  const Json j = io::to_json(p);
  CHECK(j["informed"] == Json::array({1, 2, 3, 4, 6}));
  CHECK(j["blocks"].contains("6"));
  const ProtocolDesign back = io::design_from_json(Json::parse(j.dump()));
  CHECK(back.theta == p.theta);
  CHECK(back.delta == p.delta);
  CHECK(back.k1 == p.k1);
  CHECK(back.x0 == p.x0);
  CHECK(back.informed == p.informed);
  CHECK(back.bound_c == p.bound_c);
  CHECK(back.per_vertex_c == p.per_vertex_c);
  CHECK(back.blocks == p.blocks);
}

TEST_CASE("schedule round trip") {
  const SwitchingSchedule s = io::read_schedule(testing::fixture("switching_schedule.json"));
  CHECK(s.alpha() == 0.02);
  CHECK(s.graph_ids() == std::vector<int>{0, 0, 1, 2, 2});
  CHECK(s.durations().size() == 5);
  CHECK(s.repeats());
  const SwitchingSchedule back = io::schedule_from_json(Json::parse(io::to_json(s).dump()));
  CHECK(back.graph_ids() == s.graph_ids());
  CHECK(back.durations() == s.durations());
  CHECK(back.alpha() == s.alpha());
  CHECK(back.repeats() == s.repeats());

  CHECK_THROWS_AS(io::schedule_from_json(Json::parse(R"({"alpha": 0.1, "pattern": [0], "dt": 0.1})")), Error);
  CHECK_THROWS_AS(io::schedule_from_json(Json::parse(R"({"alpha": 0.1, "pattern": [1], "dt": "x"})")), Error);
}

TEST_CASE("spectral report and trajectory output") {
  SpectralReport r;
  r.min_real_part = 0.5;
  r.null_dim = 3;
  r.psi_match = true;
  r.eigenvalues = {{0.5, -1.0}, {0.5, 1.0}};
  const Json j = io::to_json(r);
  CHECK(j["minRealPart"] == 0.5);
  CHECK(j["nullDim"] == 3);
  CHECK(j["psiMatch"] == true);
  CHECK(j["eigenvalues"][1] == Json::array({0.5, 1.0}));

  Trajectory t;
  t.agents = 2;
  t.dim = 1;
  t.theta = Vector::Ones(1);
  t.times = {0.0, 0.1};
  t.states = {(Vector(2) << 1.0 / 3.0, 2.0).finished(), (Vector(2) << 1.0, 1.0).finished()};
  t.error_norm = {1.2, 0.0};
  std::ostringstream os;
  io::write_trajectory_csv(os, t);
  std::istringstream in(os.str());
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  CHECK(header == "t,x1_1,x2_1,errnorm");
  CHECK(first == "0,0.33333333333333331,2,1.2");
}
