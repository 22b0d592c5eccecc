#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "smw/error.hpp"
#include "smw/graph.hpp"
#include "smw/io.hpp"
#include "smw/protocol.hpp"
#include "smw/simulator.hpp"
#include "smw/spectral.hpp"

namespace smw::cli {
namespace {

using io::Json;

// Failures while reading inputs exit with 2, everything later with 1.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::vector<int> parse_ids(const std::string& s) {
  std::vector<int> out;
  for (const std::string& tok : split(s, ',')) {
    try {
      size_t used = 0;
      const int v = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v - 1);
    } catch (const std::exception&) {
      throw InputError("bad vertex id '" + tok + "' in --v1");
    }
  }
  return out;
}

struct Loaded {
  std::vector<SignedGraph> graphs;
  std::vector<std::optional<std::vector<int>>> v1;  // nullopt = auto
  Vector theta;
};

Loaded load(const Scenario& s, bool need_theta) {
  if (s.graph_files.empty()) throw InputError("no graph given");
  Loaded l;
  for (const std::string& f : s.graph_files) {
    try {
      l.graphs.push_back(io::read_graph(f));
    } catch (const Error& e) {
      throw InputError(f + ": " + e.what());
    }
  }
  for (const SignedGraph& g : l.graphs) {
    if (g.dim() != l.graphs.front().dim() || g.size() != l.graphs.front().size()) {
      throw InputError("graphs differ in N or d");
    }
  }
  if (s.v1 == "auto") {
    l.v1.assign(l.graphs.size(), std::nullopt);
  } else {
    const auto parts = split(s.v1, ';');
    if (parts.size() != 1 && parts.size() != l.graphs.size()) {
      throw InputError("--v1 needs one list, or one per graph separated by ';'");
    }
    for (size_t k = 0; k < l.graphs.size(); ++k) {
      const std::string& p = parts[parts.size() == 1 ? 0 : k];
      if (p == "auto") {
        l.v1.emplace_back(std::nullopt);
      } else {
        l.v1.emplace_back(parse_ids(p));
      }
    }
  }
  if (need_theta) {
    if (s.theta.empty()) throw InputError("--theta is required");
    l.theta = Eigen::Map<const Vector>(s.theta.data(), static_cast<Eigen::Index>(s.theta.size()));
    if (l.theta.size() != l.graphs.front().dim()) throw InputError("--theta must have d entries");
  }
  if (!s.delta.empty() && s.delta.size() != l.graphs.size()) {
    throw InputError("--delta needs one value per graph");
  }
  return l;
}

// Explicit lists are validated as given; "auto" searches for the smallest
// admissible V1, optionally also requiring definite coupling on it.
Decomposition decomposition_for(const SignedGraph& g, const std::optional<std::vector<int>>& v1, bool for_design) {
  if (v1) {
    try {
      return Decomposition(g.size(), *v1);
    } catch (const Error& e) {
      throw InputError(e.what());
    }
  }
  std::function<bool(const Decomposition&)> accept;
  if (for_design) accept = [&g](const Decomposition& dec) { return definite_coupling(g, dec); };
  auto found = suggest_decomposition(g, accept);
  if (!found) throw Error(ErrorCode::AssumptionViolated, "no vertex partition satisfies the structural assumption");
  return *found;
}

Json ids_json(const std::vector<int>& vs) {
  Json a = Json::array();
  for (int v : vs) a.push_back(v + 1);
  return a;
}

std::string ids_text(const std::vector<int>& vs) {
  std::string out;
  for (size_t k = 0; k < vs.size(); ++k) out += (k ? "," : "") + std::to_string(vs[k] + 1);
  return out;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p);
  if (!f) throw InputError("cannot write " + p.string());
  f << text;
}

std::optional<std::filesystem::path> out_dir(const Scenario& s) {
  if (!s.out_dir) return std::nullopt;
  std::filesystem::path dir(*s.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

std::vector<ProtocolDesign> build_designs(const Scenario& s, const Loaded& l, std::vector<Decomposition>& decs,
                                          std::ostream& err) {
  if (s.unchecked && s.v1 == "auto") throw InputError("--unchecked needs an explicit --v1");
  const AssumptionPolicy policy = s.unchecked ? AssumptionPolicy::Report : AssumptionPolicy::Enforce;
  std::vector<ProtocolDesign> out;
  for (size_t k = 0; k < l.graphs.size(); ++k) {
    const std::string prefix = l.graphs.size() > 1 ? "graph " + std::to_string(k + 1) + ": " : "";
    try {
      decs.push_back(decomposition_for(l.graphs[k], l.v1[k], true));
      if (!s.delta.empty()) {
        out.push_back(design_with_delta(l.graphs[k], decs.back(), l.theta, s.delta[k], policy));
      } else {
        out.push_back(design_fixed(l.graphs[k], decs.back(), l.theta, s.margin.value_or(kDefaultMargin), policy));
      }
      const AssumptionReport& r = out.back().assumption;
      if (!r.ok()) err << "warning: " << prefix << "structural assumption fails at vertices " << ids_text(r.failures) << '\n';
    } catch (const Error& e) {
      throw Error(e.code(), prefix + e.message());
    }
  }
  return out;
}

std::optional<SwitchingSchedule> load_schedule(const Scenario& s, size_t graphs) {
  if (!s.schedule) return std::nullopt;
  try {
    SwitchingSchedule sch = io::read_schedule(*s.schedule);
    for (int id : sch.graph_ids()) {
      if (static_cast<size_t>(id) >= graphs) throw InputError("schedule names graph " + std::to_string(id + 1));
    }
    return sch;
  } catch (const Error& e) {
    throw InputError(*s.schedule + ": " + e.what());
  }
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDomainFailure;
  }
}

}  // namespace

int cmd_check(const Scenario& s, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Loaded l = load(s, false);
    Json reports = Json::array();
    bool all_ok = true;
    for (size_t k = 0; k < l.graphs.size(); ++k) {
      const Decomposition dec = [&] {
        try {
          return decomposition_for(l.graphs[k], l.v1[k], false);
        } catch (const Error&) {
          if (l.v1[k]) throw;
          // No admissible partition: report failures for V1 = U.
          std::vector<int> u = structural_sets(l.graphs[k]).antagonized;
          if (u.empty()) u.push_back(0);
          return Decomposition(l.graphs[k].size(), u);
        }
      }();
      const AssumptionReport r = verify_assumption(l.graphs[k], dec);
      all_ok = all_ok && r.ok();
      Json j = io::to_json(r);
      j["v1"] = ids_json(dec.v1());
      j["ok"] = r.ok();
      reports.push_back(std::move(j));
      if (!s.json) {
        if (l.graphs.size() > 1) out << "graph " << k + 1 << ": ";
        out << "V1 = {" << ids_text(dec.v1()) << "} ";
        if (r.ok()) {
          out << "assumption holds\n";
        } else {
          out << "assumption fails";
          if (!r.path_cover) out << "; unreachable: " << ids_text(r.path_failures);
          if (!r.dominance) out << "; not dominated: " << ids_text(r.dominance_failures);
          out << '\n';
        }
      }
    }
    if (s.json) out << (reports.size() == 1 ? reports.front() : reports).dump(2) << '\n';
    return all_ok ? kOk : kDomainFailure;
  });
}

int cmd_design(const Scenario& s, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (s.margin && !s.delta.empty()) throw InputError("give either --margin or --delta");
    const Loaded l = load(s, true);
    const auto schedule = load_schedule(s, l.graphs.size());
    std::vector<Decomposition> decs;
    const std::vector<ProtocolDesign> designs = build_designs(s, l, decs, err);

    Json results = Json::array();
    bool all_ok = true;
    for (size_t k = 0; k < designs.size(); ++k) {
      const DesignCheck c = verify_design(l.graphs[k], designs[k]);
      all_ok = all_ok && c.spec_ok && c.null_ok;
      results.push_back({{"v1", ids_json(decs[k].v1())},
                         {"design", io::to_json(designs[k])},
                         {"spectral", io::to_json(c.spectral)},
                         {"assumption", io::to_json(designs[k].assumption)},
                         {"boundMet", designs[k].meets_bound()},
                         {"stable", c.spec_ok},
                         {"equilibriumResidual", c.equilibrium_residual}});
    }
    Json doc = designs.size() == 1 ? results.front() : Json{{"graphs", results}};
    if (schedule) {
      SwitchingDesign sw{designs, schedule->alpha()};
      try {
        const Contraction con = contraction_factor(sw, l.graphs);
        doc["Lambda"] = con.lambda;
        doc["minSymmetric"] = con.min_symmetric;
      } catch (const Error& e) {
        doc["Lambda"] = nullptr;
        err << "warning: " << e.what() << '\n';
      }
    }

    if (auto dir = out_dir(s)) {
      if (designs.size() == 1) {
        write_file(*dir / "design.json", results.front()["design"].dump(2) + "\n");
        write_file(*dir / "spectral.json", results.front()["spectral"].dump(2) + "\n");
      } else {
        for (size_t k = 0; k < designs.size(); ++k) {
          const std::string tag = std::to_string(k + 1);
          write_file(*dir / ("design_" + tag + ".json"), results[k]["design"].dump(2) + "\n");
          write_file(*dir / ("spectral_" + tag + ".json"), results[k]["spectral"].dump(2) + "\n");
        }
      }
    }

    if (s.json) {
      out << doc.dump(2) << '\n';
    } else {
      for (size_t k = 0; k < designs.size(); ++k) {
        const ProtocolDesign& p = designs[k];
        if (designs.size() > 1) out << "graph " << k + 1 << ":\n";
        out << "  V1        {" << ids_text(decs[k].v1()) << "}\n";
        out << "  informed  {" << ids_text(p.informed) << "}\n";
        out << "  C         " << p.bound_c << '\n';
        out << "  delta     " << p.delta << (p.meets_bound() ? "" : "  (below bound)") << '\n';
        out << "  k1        " << p.k1 << '\n';
        out << "  x0        " << p.x0.transpose() << '\n';
        out << "  min Re    " << results[k]["spectral"]["minRealPart"].get<double>() << '\n';
      }
      if (doc.contains("Lambda") && !doc["Lambda"].is_null()) out << "Lambda " << doc["Lambda"].get<double>() << '\n';
    }
    return all_ok ? kOk : kDomainFailure;
  });
}

int cmd_simulate(const Scenario& s, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (s.margin && !s.delta.empty()) throw InputError("give either --margin or --delta");
    const Loaded l = load(s, true);
    const auto schedule = load_schedule(s, l.graphs.size());
    if (l.graphs.size() > 1 && !schedule) throw InputError("several graphs need --schedule");
    if (l.graphs.size() == 1 && schedule) throw InputError("--schedule needs several graphs");
    if (s.start != "random" && s.start != "equilibrium") throw InputError("--start is random or equilibrium");

    std::vector<Decomposition> decs;
    const std::vector<ProtocolDesign> designs = build_designs(s, l, decs, err);
    const int n = l.graphs.front().size();
    const int d = l.graphs.front().dim();

    Vector x_init(static_cast<Eigen::Index>(n) * d);
    if (s.start == "equilibrium") {
      for (int i = 0; i < n; ++i) x_init.segment(i * d, d) = l.theta;
    } else {
      std::mt19937_64 rng(s.seed);
      std::uniform_real_distribution<double> u(-5.0, 5.0);
      for (Eigen::Index k = 0; k < x_init.size(); ++k) x_init(k) = u(rng);
    }

    Trajectory traj;
    Json lambda = nullptr;
    if (schedule) {
      SwitchingDesign sw{designs, schedule->alpha()};
      try {
        lambda = contraction_factor(sw, l.graphs).lambda;
      } catch (const Error& e) {
        err << "warning: " << e.what() << '\n';
      }
      traj = integrate_switching(*schedule, sw, l.graphs, x_init, s.h, s.horizon, s.every);
    } else {
      traj = integrate_fixed(l.graphs.front(), designs.front(), x_init, s.h, s.horizon, s.every);
    }

    const ConvergenceReport rep = convergence_report(traj, l.theta, s.tol, s.window);
    Json summary = {{"converged", rep.converged},
                    {"settleTime", rep.settle_time ? Json(*rep.settle_time) : Json(nullptr)},
                    {"finalError", rep.final_error},
                    {"Lambda", lambda}};

    if (auto dir = out_dir(s)) {
      std::ofstream csv(*dir / "trajectory.csv");
      if (!csv) throw InputError("cannot write trajectory.csv");
      io::write_trajectory_csv(csv, traj);
      write_file(*dir / "summary.json", summary.dump(2) + "\n");
    }
    if (s.json) {
      out << summary.dump(2) << '\n';
    } else {
      out << (rep.converged ? "converged" : "not converged") << "  final error " << rep.final_error;
      if (rep.settle_time) out << "  settle time " << *rep.settle_time;
      out << '\n';
    }
    return rep.converged ? kOk : kDomainFailure;
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Consensus design and simulation for signed matrix-weighted networks"};
  app.require_subcommand(1);
  Scenario s;
  std::optional<std::string> graph;
  std::vector<std::string> graphs;
  std::string theta_csv;
  std::string delta_csv;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--graph", graph, "graph JSON file");
    sub->add_option("--graphs", graphs, "several graph JSON files (switching)");
    sub->add_option("--v1", s.v1, "V1 as 1-based ids, ';' between graphs, or auto");
    sub->add_flag("--json", s.json, "print JSON");
  };
  auto designing = [&](CLI::App* sub) {
    sub->add_option("--theta", theta_csv, "consensus state, comma separated");
    auto* m = sub->add_option("--margin", s.margin, "delta = C + margin");
    auto* dl = sub->add_option("--delta", delta_csv, "explicit delta, one per graph");
    m->excludes(dl);
    sub->add_option("--schedule", s.schedule, "switching schedule JSON");
    sub->add_option("--out", s.out_dir, "output directory");
    sub->add_flag("--unchecked", s.unchecked, "design even when the structural assumption fails (explicit --v1)");
  };

  CLI::App* check = app.add_subcommand("check", "verify the structural assumption");
  common(check);
  CLI::App* design = app.add_subcommand("design", "design the protocol");
  common(design);
  designing(design);
  CLI::App* sim = app.add_subcommand("simulate", "simulate the closed loop");
  sim->set_help_flag("--help", "print this help message and exit");  // frees -h for the step
  common(sim);
  designing(sim);
  sim->add_option("--h", s.h, "RK4 step")->capture_default_str();
  sim->add_option("--T", s.horizon, "horizon")->capture_default_str();
  sim->add_option("--seed", s.seed, "seed for the random initial state")->capture_default_str();
  sim->add_option("--start", s.start, "random or equilibrium")->capture_default_str();
  sim->add_option("--tol", s.tol, "convergence tolerance")->capture_default_str();
  sim->add_option("--window", s.window, "trailing window fraction")->capture_default_str();
  sim->add_option("--every", s.every, "keep every n-th step")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kInputFailure;
  }

  if (graph) s.graph_files.push_back(*graph);
  s.graph_files.insert(s.graph_files.end(), graphs.begin(), graphs.end());
  auto numbers = [&](const std::string& csv, const char* what, std::vector<double>& dst) {
    for (const std::string& tok : split(csv, ',')) {
      try {
        size_t used = 0;
        dst.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        err << "error: bad number '" << tok << "' in " << what << '\n';
        return false;
      }
    }
    return true;
  };
  if (!theta_csv.empty() && !numbers(theta_csv, "--theta", s.theta)) return kInputFailure;
  if (!delta_csv.empty() && !numbers(delta_csv, "--delta", s.delta)) return kInputFailure;

  if (*check) return cmd_check(s, out, err);
  if (*design) return cmd_design(s, out, err);
  return cmd_simulate(s, out, err);
}

}  // namespace smw::cli
