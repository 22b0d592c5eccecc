#pragma once

#include <string>

#include "smw/io.hpp"

namespace smw::testing {

inline std::string fixture(const std::string& name) { return std::string(SMW_FIXTURE_DIR) + "/" + name; }

inline SignedGraph load_fixture(const std::string& name) { return io::read_graph(fixture(name)); }

inline Vector theta_example() { return (Vector(3) << 1.0, 2.0, -1.0).finished(); }

}  // namespace smw::testing
