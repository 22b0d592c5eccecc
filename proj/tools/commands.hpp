#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace smw::cli {

enum ExitCode : int { kOk = 0, kDomainFailure = 1, kInputFailure = 2 };

struct Scenario {
  std::vector<std::string> graph_files;
  std::string v1 = "auto";  // "auto", or per-graph lists "1,2,3;2,3"
  std::vector<double> theta;
  std::optional<double> margin;
  std::vector<double> delta;  // empty, or one per graph
  double h = 1e-3;
  double horizon = 20.0;
  std::uint64_t seed = 42;
  std::string start = "random";  // or "equilibrium"
  double tol = 1e-3;
  double window = 0.05;
  int every = 1;
  std::optional<std::string> schedule;
  std::optional<std::string> out_dir;
  bool json = false;
  bool unchecked = false;  // design past a failed structural assumption
};

int cmd_check(const Scenario& s, std::ostream& out, std::ostream& err);
int cmd_design(const Scenario& s, std::ostream& out, std::ostream& err);
int cmd_simulate(const Scenario& s, std::ostream& out, std::ostream& err);

/// Full front end: parses argv and dispatches. Returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace smw::cli
