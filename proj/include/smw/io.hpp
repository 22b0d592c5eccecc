#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "smw/graph.hpp"
#include "smw/protocol.hpp"
#include "smw/simulator.hpp"
#include "smw/spectral.hpp"

// File formats. Vertex ids and graph indices are 1-based on disk and
// 0-based in memory.

namespace smw::io {

using Json = nlohmann::json;

/// {"d", "n", "directed", "edges": [{"from", "to", "weight": [[...]]}]}
SignedGraph graph_from_json(const Json& j);
Json to_json(const SignedGraph& g);

/// {"theta", "delta", "k1", "x0", "informed", "C", "perVertexC", "blocks"}
ProtocolDesign design_from_json(const Json& j);
Json to_json(const ProtocolDesign& p);

/// {"minRealPart", "nullDim", "psiMatch", "eigenvalues": [[re, im], ...]}
Json to_json(const SpectralReport& r);

Json to_json(const AssumptionReport& r);

/// {"alpha", "pattern": [graph ids], "dt": [..] or number, "repeat"}
SwitchingSchedule schedule_from_json(const Json& j);
Json to_json(const SwitchingSchedule& s);

Json read_json_file(const std::filesystem::path& path);
SignedGraph read_graph(const std::filesystem::path& path);
SwitchingSchedule read_schedule(const std::filesystem::path& path);

/// Header `t,x1_1,...,xN_d,errnorm`, 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace smw::io
