#pragma once

#include <optional>
#include <span>
#include <vector>

#include "smw/graph.hpp"
#include "smw/protocol.hpp"

namespace smw {

inline constexpr double kDefaultStep = 1e-3;
inline constexpr double kDivergenceGuard = 1e12;
inline constexpr double kDefaultConvergenceTol = 1e-3;
inline constexpr double kDefaultWindow = 0.05;

/// Sampled agent states x(t) with the error norm ||x(t) - 1_N (x) theta||_2.
struct Trajectory {
  int agents = 0;
  int dim = 0;
  Vector theta;
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<double> error_norm;

  size_t samples() const { return times.size(); }
  /// max_i ||x_i - theta||_inf at sample k.
  double agent_error(size_t k) const;
};

/// Classic RK4 on x' = -L_B x + Delta_B x0 with fixed step h, sampled
/// every `sample_every` steps (the final state is always kept). A final
/// partial step lands exactly on the horizon.
Trajectory integrate_fixed(const SignedGraph& g, const ProtocolDesign& design, const Vector& x_init, double h,
                           double horizon, int sample_every = 1);

/// Piecewise-constant topology: interval k lasts durations[k mod L] and
/// uses graph graph_ids[k mod L]; without `repeat` the pattern is used once.
class SwitchingSchedule {
 public:
  struct Interval {
    double start;
    double end;
    int graph;
  };

  SwitchingSchedule(double alpha, std::vector<double> durations, std::vector<int> graph_ids, bool repeat);

  double alpha() const { return alpha_; }
  bool repeats() const { return repeat_; }
  const std::vector<double>& durations() const { return durations_; }
  const std::vector<int>& graph_ids() const { return graph_ids_; }
  double period() const { return period_; }

  /// Interval k, or nullopt once a non-repeating pattern is exhausted.
  std::optional<Interval> interval(size_t k) const;

  /// Switch times t_k (t_0 = 0) not exceeding `horizon`.
  std::vector<double> switch_times(double horizon) const;

 private:
  double alpha_;
  std::vector<double> durations_;
  std::vector<int> graph_ids_;
  std::vector<double> offsets_;  // prefix sums within one pattern pass
  double period_ = 0.0;
  bool repeat_;
};

/// Integrates across switches with steps aligned to every switch time.
/// Requires h <= alpha / 4. Throws ScheduleExhausted when the horizon
/// outruns a non-repeating schedule.
Trajectory integrate_switching(const SwitchingSchedule& schedule, const SwitchingDesign& design,
                               std::span<const SignedGraph> graphs, const Vector& x_init, double h, double horizon,
                               int sample_every = 1);

struct ConvergenceReport {
  bool converged = false;
  double final_error = 0.0;  // max_i ||x_i(T) - theta||_inf
  std::optional<double> settle_time;
};

ConvergenceReport convergence_report(const Trajectory& traj, const Vector& theta,
                                     double tol = kDefaultConvergenceTol, double window = kDefaultWindow);

}  // namespace smw
