#include "smw/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "smw/kernels.hpp"

namespace smw {
namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// x' = b - A x for one constant topology.
struct AffineField {
  RowMajor a;
  Vector b;
};

AffineField field_of(const SignedGraph& g, const ProtocolDesign& design) {
  ClosedLoop cl = closed_loop(g, design);
  return AffineField{RowMajor(cl.grounded.matrix), std::move(cl.input)};
}

std::span<const double> view(const Vector& v) { return {v.data(), static_cast<size_t>(v.size())}; }
std::span<double> view(Vector& v) { return {v.data(), static_cast<size_t>(v.size())}; }

class Rk4 {
 public:
  explicit Rk4(Eigen::Index n) : k1_(n), k2_(n), k3_(n), k4_(n), tmp_(n) {}

  void step(const AffineField& f, Vector& x, double h) {
    const std::span<const double> a{f.a.data(), static_cast<size_t>(f.a.size())};
    const auto b = view(f.b);
    kernels::affine(a, view(x), b, view(k1_));
    kernels::offset(view(x), 0.5 * h, view(k1_), view(tmp_));
    kernels::affine(a, view(tmp_), b, view(k2_));
    kernels::offset(view(x), 0.5 * h, view(k2_), view(tmp_));
    kernels::affine(a, view(tmp_), b, view(k3_));
    kernels::offset(view(x), h, view(k3_), view(tmp_));
    kernels::affine(a, view(tmp_), b, view(k4_));
    kernels::axpy(h / 6.0, view(k1_), view(x));
    kernels::axpy(h / 3.0, view(k2_), view(x));
    kernels::axpy(h / 3.0, view(k3_), view(x));
    kernels::axpy(h / 6.0, view(k4_), view(x));
  }

 private:
  Vector k1_, k2_, k3_, k4_, tmp_;
};

class Recorder {
 public:
  Recorder(Trajectory& traj, int every) : traj_(traj), every_(every) {}

  void record(double t, const Vector& x) {
    traj_.times.push_back(t);
    traj_.states.push_back(x);
    traj_.error_norm.push_back(error_norm(x));
  }

  // Called after every step; keeps every `every_`-th state.
  void after_step(double t, const Vector& x, bool last) {
    if (!(kernels::max_abs(view(x)) <= kDivergenceGuard)) {
      throw Error(ErrorCode::NonFinite, "state left the 1e12 guard; last finite time " + std::to_string(last_t_));
    }
    last_t_ = t;
    ++count_;
    if (last || count_ % every_ == 0) record(t, x);
  }

 private:
  double error_norm(const Vector& x) const {
    const int d = traj_.dim;
    double s = 0.0;
    for (int i = 0; i < traj_.agents; ++i) s += (x.segment(i * d, d) - traj_.theta).squaredNorm();
    return std::sqrt(s);
  }

  Trajectory& traj_;
  int every_;
  long long count_ = 0;
  double last_t_ = 0.0;
};

// Steps of size h from t0 to t1, the last one shortened to land on t1.
// Times are formed as t0 + j h to avoid accumulated drift.
void run_segment(Rk4& rk, const AffineField& f, Vector& x, double t0, double t1, double h, Recorder& rec,
                 bool final_segment) {
  const double len = t1 - t0;
  const auto full = static_cast<long long>(std::floor(len / h * (1.0 + 1e-12)));
  const double rest = len - static_cast<double>(full) * h;
  const bool partial = rest > 1e-12 * std::max(1.0, std::fabs(t1));
  for (long long j = 1; j <= full; ++j) {
    rk.step(f, x, h);
    const bool last = final_segment && !partial && j == full;
    rec.after_step(j == full && !partial ? t1 : t0 + static_cast<double>(j) * h, x, last);
  }
  if (partial) {
    rk.step(f, x, rest);
    rec.after_step(t1, x, final_segment);
  }
}

void check_run(double h, double horizon, int sample_every) {
  if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::InvalidArgument, "step must be > 0");
  if (!(horizon >= h)) throw Error(ErrorCode::InvalidArgument, "horizon must be >= step");
  if (sample_every < 1) throw Error(ErrorCode::InvalidArgument, "sample stride must be >= 1");
}

Trajectory start(int n, int d, const Vector& theta, const Vector& x_init) {
  if (x_init.size() != static_cast<Eigen::Index>(n) * d) {
    throw Error(ErrorCode::DimensionMismatch, "initial state must have N*d entries");
  }
  Trajectory t;
  t.agents = n;
  t.dim = d;
  t.theta = theta;
  return t;
}

}  // namespace

double Trajectory::agent_error(size_t k) const {
  const Vector& x = states.at(k);
  double m = 0.0;
  for (int i = 0; i < agents; ++i) m = std::max(m, (x.segment(i * dim, dim) - theta).cwiseAbs().maxCoeff());
  return m;
}

Trajectory integrate_fixed(const SignedGraph& g, const ProtocolDesign& design, const Vector& x_init, double h,
                           double horizon, int sample_every) {
  check_run(h, horizon, sample_every);
  Trajectory traj = start(g.size(), g.dim(), design.theta, x_init);
  const AffineField f = field_of(g, design);
  Rk4 rk(x_init.size());
  Recorder rec(traj, sample_every);
  Vector x = x_init;
  rec.record(0.0, x);
  run_segment(rk, f, x, 0.0, horizon, h, rec, true);
  return traj;
}

SwitchingSchedule::SwitchingSchedule(double alpha, std::vector<double> durations, std::vector<int> graph_ids,
                                     bool repeat)
    : alpha_(alpha), durations_(std::move(durations)), graph_ids_(std::move(graph_ids)), repeat_(repeat) {
  if (!(alpha_ > 0.0)) throw Error(ErrorCode::InvalidArgument, "dwell time must be > 0");
  if (graph_ids_.empty()) throw Error(ErrorCode::InvalidArgument, "empty switching pattern");
  if (durations_.size() == 1 && graph_ids_.size() > 1) durations_.assign(graph_ids_.size(), durations_.front());
  if (durations_.size() != graph_ids_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "one duration per pattern slot required");
  }
  offsets_.reserve(durations_.size());
  for (size_t k = 0; k < durations_.size(); ++k) {
    // Dwell check with a relative slack so 0.02 >= 0.02 survives rounding.
    if (!(durations_[k] >= alpha_ * (1.0 - 1e-12))) {
      throw Error(ErrorCode::InvalidArgument, "interval " + std::to_string(k + 1) + " is shorter than the dwell time");
    }
    if (graph_ids_[k] < 0) throw Error(ErrorCode::InvalidArgument, "negative graph index");
    offsets_.push_back(period_);
    period_ += durations_[k];
  }
}

std::optional<SwitchingSchedule::Interval> SwitchingSchedule::interval(size_t k) const {
  const size_t len = durations_.size();
  if (!repeat_ && k >= len) return std::nullopt;
  const size_t cycle = k / len;
  const size_t slot = k % len;
  const double base = static_cast<double>(cycle) * period_;
  const double start = base + offsets_[slot];
  const double end = slot + 1 < len ? base + offsets_[slot + 1] : static_cast<double>(cycle + 1) * period_;
  return Interval{start, end, graph_ids_[slot]};
}

std::vector<double> SwitchingSchedule::switch_times(double horizon) const {
  std::vector<double> out;
  for (size_t k = 0;; ++k) {
    const auto iv = interval(k);
    if (!iv || iv->start > horizon) break;
    out.push_back(iv->start);
  }
  return out;
}

Trajectory integrate_switching(const SwitchingSchedule& schedule, const SwitchingDesign& design,
                               std::span<const SignedGraph> graphs, const Vector& x_init, double h, double horizon,
                               int sample_every) {
  check_run(h, horizon, sample_every);
  if (h > schedule.alpha() / 4.0 * (1.0 + 1e-12)) throw Error(ErrorCode::InvalidArgument, "step must be <= alpha/4");
  if (graphs.empty() || design.designs.size() != graphs.size()) {
    throw Error(ErrorCode::DimensionMismatch, "one design per graph required");
  }
  for (int id : schedule.graph_ids()) {
    if (id >= static_cast<int>(graphs.size())) {
      throw Error(ErrorCode::InvalidArgument, "schedule names graph " + std::to_string(id + 1) + " of " +
                                                  std::to_string(graphs.size()));
    }
  }
  const int n = graphs.front().size();
  const int d = graphs.front().dim();
  for (const SignedGraph& g : graphs) {
    if (g.size() != n || g.dim() != d) throw Error(ErrorCode::DimensionMismatch, "graphs differ in N or d");
  }
  if (!schedule.repeats() && schedule.period() < horizon * (1.0 - 1e-12)) {
    throw Error(ErrorCode::ScheduleExhausted, "schedule ends before the horizon and does not repeat");
  }

  std::vector<AffineField> fields;
  fields.reserve(graphs.size());
  for (size_t k = 0; k < graphs.size(); ++k) fields.push_back(field_of(graphs[k], design.designs[k]));

  Trajectory traj = start(n, d, design.designs.front().theta, x_init);
  Rk4 rk(x_init.size());
  Recorder rec(traj, sample_every);
  Vector x = x_init;
  rec.record(0.0, x);
  for (size_t k = 0;; ++k) {
    const auto iv = schedule.interval(k);
    if (!iv) throw Error(ErrorCode::ScheduleExhausted, "schedule ran out");
    const bool last = iv->end >= horizon * (1.0 - 1e-12);
    const double end = last ? horizon : iv->end;
    if (end - iv->start > 0.0) run_segment(rk, fields[static_cast<size_t>(iv->graph)], x, iv->start, end, h, rec, last);
    if (last) break;
  }
  return traj;
}

ConvergenceReport convergence_report(const Trajectory& traj, const Vector& theta, double tol, double window) {
  if (traj.samples() == 0) throw Error(ErrorCode::InvalidArgument, "empty trajectory");
  if (theta.size() != traj.dim) throw Error(ErrorCode::DimensionMismatch, "theta length");
  if (!(window >= 0.0 && window <= 1.0)) throw Error(ErrorCode::InvalidArgument, "window must be in [0, 1]");

  auto err = [&](size_t k) {
    const Vector& x = traj.states[k];
    double m = 0.0;
    for (int i = 0; i < traj.agents; ++i) {
      m = std::max(m, (x.segment(i * traj.dim, traj.dim) - theta).cwiseAbs().maxCoeff());
    }
    return m;
  };

  ConvergenceReport r;
  const size_t last = traj.samples() - 1;
  r.final_error = err(last);
  const double t0 = traj.times.front();
  const double t_end = traj.times.back();
  const double window_start = t_end - window * (t_end - t0);

  // Walk backwards while the condition holds.
  size_t first_ok = traj.samples();
  for (size_t k = traj.samples(); k-- > 0;) {
    if (!(err(k) < tol)) break;
    first_ok = k;
  }
  if (first_ok < traj.samples()) r.settle_time = traj.times[first_ok];
  r.converged = r.settle_time.has_value() && *r.settle_time <= window_start;
  return r;
}

}  // namespace smw
