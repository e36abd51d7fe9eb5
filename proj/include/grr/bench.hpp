/*
 * Copyright (C) 2026 The expansion-grr Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
*/

#ifndef GRR__BENCH_HPP
#define GRR__BENCH_HPP

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "dtw.hpp"
#include "teleop.hpp"

namespace grr {

//==============================================================================
enum class TaskKind
{
  RandomLine,
  SelfCrossingLine,
  RandomCircle,
  PartialCircle
};

inline const char* to_string(TaskKind k)
{
  switch (k)
  {
    case TaskKind::RandomLine: return "random_line";
    case TaskKind::SelfCrossingLine: return "self_crossing_line";
    case TaskKind::RandomCircle: return "random_circle";
    case TaskKind::PartialCircle: return "partial_circle";
  }
  return "unknown";
}

inline TaskKind task_kind_from_string(const std::string& s)
{
  for (auto k : {TaskKind::RandomLine, TaskKind::SelfCrossingLine,
      TaskKind::RandomCircle, TaskKind::PartialCircle})
  {
    if (s == to_string(k))
      return k;
  }
  throw std::invalid_argument("unknown task kind '" + s + "'");
}

enum class SolverKind
{
  Grr,
  Newton
};

inline const char* to_string(SolverKind k)
{
  return k == SolverKind::Grr ? "expansion-grr" : "newton-ik";
}

inline SolverKind solver_kind_from_string(const std::string& s)
{
  if (s == "expansion-grr" || s == "grr")
    return SolverKind::Grr;
  if (s == "newton-ik" || s == "newton")
    return SolverKind::Newton;
  throw std::invalid_argument("unknown solver '" + s + "'");
}

//==============================================================================
/// Human input replayed at a fixed rate.
struct WaypointStream
{
  static constexpr double rate_hz = 50.0;
  static constexpr double duration_s = 4.0;
  static constexpr std::size_t length = 200;

  TaskKind kind = TaskKind::RandomLine;
  std::uint64_t rng_seed = 0;
  std::vector<TaskPoint> waypoints;
};

/// Region the generators sample from, plus the task space the streams live
/// in.
struct Workspace
{
  TaskSpace space;
  ReachRegion reach;

  /// Base position in task coordinates.
  Eigen::VectorXd base;

  static Workspace of(const KinematicChain& chain, const TaskSpace& space)
  {
    return Workspace{space, reach_region(chain, space),
      chain.base().translation().head(chain.translation_dim())};
  }

  int dim() const { return space.translation_dim; }
  double margin() const { return 0.05 * reach.outer; }
};

namespace detail {

inline Eigen::VectorXd sample_in_reach(const Workspace& ws, std::mt19937_64& rng)
{
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (true)
  {
    Eigen::VectorXd v(ws.dim());
    for (int i = 0; i < ws.dim(); ++i)
      v[i] = u(rng);
    v = ws.reach.center + ws.reach.outer * v;
    if (ws.reach.contains(v, ws.margin()))
      return v;
  }
}

inline Eigen::VectorXd random_unit(int dim, std::mt19937_64& rng)
{
  std::normal_distribution<double> g(0.0, 1.0);
  while (true)
  {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i)
      v[i] = g(rng);
    if (v.norm() > 1e-6)
      return v.normalized();
  }
}

inline WaypointStream line_stream(const Workspace& ws, TaskKind kind,
  std::uint64_t seed, const Eigen::VectorXd& a, const Eigen::VectorXd& b)
{
  WaypointStream s{kind, seed, {}};
  const auto n = WaypointStream::length;
  for (std::size_t i = 0; i < n; ++i)
  {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    s.waypoints.push_back(ws.space.point(a + t * (b - a)));
  }
  return s;
}

/// Orthonormal in-plane basis of a circle with the given normal.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> circle_basis(
  int dim, const Eigen::Vector3d& normal)
{
  if (dim == 2)
    return {Eigen::Vector2d::UnitX(), Eigen::Vector2d::UnitY()};
  Eigen::Vector3d helper = std::abs(normal.x()) < 0.9
    ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  const Eigen::Vector3d e1 = normal.cross(helper).normalized();
  const Eigen::Vector3d e2 = normal.cross(e1);
  return {e1, e2};
}

inline WaypointStream circle_stream(const Workspace& ws, TaskKind kind,
  std::uint64_t seed, const Eigen::VectorXd& center, double radius,
  const std::pair<Eigen::VectorXd, Eigen::VectorXd>& basis, double phase)
{
  WaypointStream s{kind, seed, {}};
  const auto n = WaypointStream::length;
  for (std::size_t i = 0; i < n; ++i)
  {
    const double a = phase + 2.0 * std::numbers::pi * static_cast<double>(i)
      / static_cast<double>(n - 1);
    s.waypoints.push_back(ws.space.point(
      center + radius * (std::cos(a) * basis.first + std::sin(a) * basis.second)));
  }
  // Close the loop exactly.
  s.waypoints.back() = s.waypoints.front();
  return s;
}

inline Eigen::Vector3d random_normal(int dim, std::mt19937_64& rng)
{
  if (dim == 2)
    return Eigen::Vector3d::UnitZ();
  return random_unit(3, rng);
}

} // namespace detail

//==============================================================================
/// Line between two random points of the reachable interior.
inline WaypointStream gen_random_line(const Workspace& ws, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  const auto a = detail::sample_in_reach(ws, rng);
  const auto b = detail::sample_in_reach(ws, rng);
  return detail::line_stream(ws, TaskKind::RandomLine, seed, a, b);
}

/// Line through the base: endpoints on opposite sides, colinear with it.
inline WaypointStream gen_self_crossing_line(const Workspace& ws,
  std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  const double outer = ws.reach.outer - ws.margin();
  std::uniform_real_distribution<double> radius(0.5 * outer, outer);
  std::uniform_real_distribution<double> jitter(-0.02, 0.02);
  while (true)
  {
    const Eigen::VectorXd u = detail::random_unit(ws.dim(), rng);
    const double r1 = radius(rng);
    const double r2 = std::clamp(r1 + jitter(rng) * ws.reach.outer,
        0.5 * outer, outer);
    const Eigen::VectorXd a = ws.base + r1 * u;
    const Eigen::VectorXd b = ws.base - r2 * u;
    if (ws.reach.contains(a, ws.margin()) && ws.reach.contains(b, ws.margin()))
      return detail::line_stream(ws, TaskKind::SelfCrossingLine, seed, a, b);
  }
}

/// Circle fully inside the reachable interior.
inline WaypointStream gen_random_circle(const Workspace& ws, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  const auto normal = detail::random_normal(ws.dim(), rng);
  const auto basis = detail::circle_basis(ws.dim(), normal);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (true)
  {
    const Eigen::VectorXd center = detail::sample_in_reach(ws, rng);
    const double room = ws.reach.outer - ws.margin()
      - (center - ws.reach.center).norm();
    if (room < 0.1 * ws.reach.outer)
      continue;
    const double radius = (0.1 + 0.9 * unit(rng)) * room;
    const double phase = 2.0 * std::numbers::pi * unit(rng);
    auto s = detail::circle_stream(ws, TaskKind::RandomCircle, seed, center,
        radius, basis, phase);
    const bool inside = std::all_of(s.waypoints.begin(), s.waypoints.end(),
        [&](const TaskPoint& p) { return ws.reach.contains(p.translation); });
    if (inside)
      return s;
  }
}

/// Fraction of waypoints outside the reach region.
inline double unreachable_fraction(const Workspace& ws,
  const WaypointStream& s)
{
  std::size_t out = 0;
  for (const auto& p : s.waypoints)
    out += ws.reach.contains(p.translation) ? 0 : 1;
  return static_cast<double>(out) / static_cast<double>(s.waypoints.size());
}

/// Circle with 10% to 40% of its waypoints beyond reach. The loop starts and
/// ends at its point deepest inside the reach region.
inline WaypointStream gen_partial_circle(const Workspace& ws,
  std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  const auto normal = detail::random_normal(ws.dim(), rng);
  const auto basis = detail::circle_basis(ws.dim(), normal);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double outer = ws.reach.outer;
  while (true)
  {
    const Eigen::VectorXd dir = detail::random_unit(ws.dim(), rng);
    const double offset = (0.3 + 0.5 * unit(rng)) * outer;
    Eigen::VectorXd center = ws.reach.center + offset * dir;
    const double radius = (0.2 + 0.6 * unit(rng)) * outer;

    // Deepest point: toward the reach center within the circle's plane.
    const Eigen::VectorXd to_center = ws.reach.center - center;
    const double x = to_center.dot(basis.first);
    const double y = to_center.dot(basis.second);
    const double phase = (std::abs(x) + std::abs(y) < 1e-12) ? 0.0
      : std::atan2(y, x);
    auto s = detail::circle_stream(ws, TaskKind::PartialCircle, seed, center,
        radius, basis, phase);
    if (!ws.reach.contains(s.waypoints.front().translation, ws.margin()))
      continue;
    const double f = unreachable_fraction(ws, s);
    if (f >= 0.1 && f <= 0.4)
      return s;
  }
}

inline WaypointStream generate(TaskKind kind, const Workspace& ws,
  std::uint64_t seed)
{
  switch (kind)
  {
    case TaskKind::RandomLine: return gen_random_line(ws, seed);
    case TaskKind::SelfCrossingLine: return gen_self_crossing_line(ws, seed);
    case TaskKind::RandomCircle: return gen_random_circle(ws, seed);
    case TaskKind::PartialCircle: return gen_partial_circle(ws, seed);
  }
  throw std::invalid_argument("unknown task kind");
}

//==============================================================================
/// Mean task distance of the pairs matched by dynamic time warping.
inline double dtw_deviation(const std::vector<TaskPoint>& input,
  const std::vector<TaskPoint>& produced, const TaskMetricWeights& w = {})
{
  return dtw_align(input, produced,
      [&](const TaskPoint& a, const TaskPoint& b) {
        return task_distance(a, b, w);
      }).mean();
}

/// Mean ratio of configuration step to task step along a produced path.
/// Steps with a negligible task move are skipped.
inline double path_smoothness(const KinematicChain& chain,
  const std::vector<Configuration>& produced_q,
  const std::vector<TaskPoint>& produced_t, const TaskMetricWeights& w = {})
{
  if (produced_q.size() != produced_t.size())
    throw std::invalid_argument("path_smoothness needs matching paths");
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 1; i < produced_q.size(); ++i)
  {
    const double dp = task_distance(produced_t[i - 1], produced_t[i], w);
    if (dp < 1e-9)
      continue;
    sum += config_distance(chain, produced_q[i - 1], produced_q[i]) / dp;
    ++count;
  }
  if (count == 0)
    throw UndefinedMetric("path smoothness is undefined for a stationary path");
  return sum / static_cast<double>(count);
}

//==============================================================================
struct TrialResult
{
  TaskKind kind = TaskKind::RandomLine;
  SolverKind solver = SolverKind::Grr;
  std::uint64_t rng_seed = 0;

  std::vector<TaskPoint> input_path;
  std::vector<bool> input_feasible;
  std::vector<TaskPoint> produced_path_t;
  std::vector<Configuration> produced_path_q;

  std::optional<double> deviation;
  std::optional<double> smoothness;
  bool success = false;
  std::string failure_reason;
  double wall_ms = 0.0;
};

struct SuccessCriteria
{
  /// Distance between the final output and the last feasible input.
  double goal_tolerance = 0.0;

  /// Consecutive near-stationary steps that count as a stall.
  std::size_t stall_window = 25;

  /// Output motion below this counts as stationary.
  double stall_motion = 1e-5;

  /// Feasible input motion over the window that makes it a stall.
  double stall_input_motion = 0.0;

  static SuccessCriteria for_pitch(double pitch)
  {
    return SuccessCriteria{pitch * std::sqrt(2.0), 25, 1e-5, 0.5 * pitch};
  }
};

/// Sets success and failure_reason. Failures: "self-collision" if any output
/// collides, "stalled" if the output stops while the feasible input moves,
/// "local-minima" if the run ends away from the last feasible input.
inline bool judge_success(TrialResult& trial, const KinematicChain& chain,
  const SuccessCriteria& criteria)
{
  trial.success = false;
  trial.failure_reason.clear();
  const auto& q = trial.produced_path_q;
  const auto& pt = trial.produced_path_t;
  const auto& in = trial.input_path;

  for (const auto& c : q)
  {
    if (!self_collision_free(chain, c))
    {
      trial.failure_reason = "self-collision";
      return false;
    }
  }

  // Latest feasible input at every step.
  std::vector<std::optional<Eigen::VectorXd>> feasible(in.size());
  for (std::size_t i = 0; i < in.size(); ++i)
  {
    if (trial.input_feasible[i])
      feasible[i] = in[i].translation;
    else if (i > 0)
      feasible[i] = feasible[i - 1];
  }

  std::size_t run = 0;
  double input_motion = 0.0;
  for (std::size_t i = 1; i < pt.size(); ++i)
  {
    const double moved = (pt[i].translation - pt[i - 1].translation).norm();
    if (moved < criteria.stall_motion)
    {
      ++run;
      if (feasible[i] && feasible[i - 1])
        input_motion += (*feasible[i] - *feasible[i - 1]).norm();
      if (run > criteria.stall_window
        && input_motion > criteria.stall_input_motion)
      {
        trial.failure_reason = "stalled";
        return false;
      }
    }
    else
    {
      run = 0;
      input_motion = 0.0;
    }
  }

  if (!feasible.back())
  {
    trial.failure_reason = "local-minima";
    return false;
  }
  const double miss = (pt.back().translation - *feasible.back()).norm();
  if (miss > criteria.goal_tolerance)
  {
    trial.failure_reason = "local-minima";
    return false;
  }

  trial.success = true;
  return true;
}

//==============================================================================
/// Replays one stream through one solver. Both solvers start from the
/// roadmap's configuration for the first waypoint.
inline TrialResult run_trial(
  SolverKind solver,
  const WaypointStream& stream,
  const RoadmapQuery& query,
  const Workspace& ws,
  const TeleopParams& teleop,
  const SuccessCriteria& criteria)
{
  TrialResult t;
  t.kind = stream.kind;
  t.solver = solver;
  t.rng_seed = stream.rng_seed;
  t.input_path = stream.waypoints;
  for (const auto& p : stream.waypoints)
    t.input_feasible.push_back(ws.reach.contains(p.translation));

  const auto start = std::chrono::steady_clock::now();
  auto state = teleop_start(query, stream.waypoints.front());
  if (!state)
  {
    t.failure_reason = "local-minima";
    return t;
  }

  if (solver == SolverKind::Grr)
  {
    TeleopState s = *state;
    for (const auto& p : stream.waypoints)
    {
      auto [q, next] = teleop_step(std::move(s), p, query, teleop);
      s = std::move(next);
      t.produced_path_q.push_back(std::move(q));
    }
  }
  else
  {
    NewtonTeleop newton{query.chain(), query.settings().projection,
      query.graph().weights(), state->current};
    for (const auto& p : stream.waypoints)
      t.produced_path_q.push_back(newton.step(p));
  }
  t.wall_ms = std::chrono::duration<double, std::milli>(
    std::chrono::steady_clock::now() - start).count();

  for (const auto& q : t.produced_path_q)
    t.produced_path_t.push_back(query.task_point(q));

  const auto& w = query.graph().weights();
  t.deviation = dtw_deviation(t.input_path, t.produced_path_t, w);
  try
  {
    t.smoothness = path_smoothness(query.chain(), t.produced_path_q,
        t.produced_path_t, w);
  }
  catch (const UndefinedMetric&)
  {
    t.smoothness.reset();
  }
  judge_success(t, query.chain(), criteria);
  return t;
}

//==============================================================================
struct BenchConfig
{
  std::vector<TaskKind> tasks = {TaskKind::RandomLine,
    TaskKind::SelfCrossingLine, TaskKind::RandomCircle,
    TaskKind::PartialCircle};
  std::vector<SolverKind> solvers = {SolverKind::Grr, SolverKind::Newton};
  std::size_t trials = 20;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
};

struct Aggregate
{
  std::size_t trials = 0;
  std::size_t successes = 0;

  /// Means over trials where every solver succeeded.
  std::optional<double> deviation;
  std::optional<double> smoothness;
  std::size_t common = 0;

  /// Means over this solver's own successes.
  std::optional<double> deviation_all;
  std::optional<double> smoothness_all;

  double success_rate() const
  {
    return trials == 0 ? 0.0
      : static_cast<double>(successes) / static_cast<double>(trials);
  }
};

struct BenchReport
{
  BenchConfig config;
  SuccessCriteria criteria;
  std::vector<TrialResult> trials;

  /// Keyed by (task, solver).
  std::map<std::pair<TaskKind, SolverKind>, Aggregate> summary;
};

/// Seed of trial `index` of a task kind.
inline std::uint64_t trial_seed(std::uint64_t base, TaskKind kind,
  std::size_t index)
{
  return base * 1000003ull + static_cast<std::uint64_t>(kind) * 100003ull
    + static_cast<std::uint64_t>(index);
}

inline std::map<std::pair<TaskKind, SolverKind>, Aggregate> aggregate(
  const BenchConfig& config, const std::vector<TrialResult>& trials)
{
  std::map<std::pair<TaskKind, SolverKind>, Aggregate> out;
  // trial id -> all solvers succeeded
  std::map<std::pair<TaskKind, std::uint64_t>, bool> all_ok;
  for (const auto& t : trials)
  {
    auto key = std::make_pair(t.kind, t.rng_seed);
    auto it = all_ok.find(key);
    if (it == all_ok.end())
      all_ok.emplace(key, t.success);
    else
      it->second = it->second && t.success;
  }

  struct Sums
  {
    double dev = 0, smooth = 0, dev_all = 0, smooth_all = 0;
    std::size_t n_dev = 0, n_smooth = 0, n_dev_all = 0, n_smooth_all = 0;
  };
  std::map<std::pair<TaskKind, SolverKind>, Sums> sums;

  for (const auto& t : trials)
  {
    const auto key = std::make_pair(t.kind, t.solver);
    auto& a = out[key];
    auto& s = sums[key];
    ++a.trials;
    if (!t.success)
      continue;
    ++a.successes;
    if (t.deviation) { s.dev_all += *t.deviation; ++s.n_dev_all; }
    if (t.smoothness) { s.smooth_all += *t.smoothness; ++s.n_smooth_all; }
    if (!all_ok[{t.kind, t.rng_seed}])
      continue;
    ++a.common;
    if (t.deviation) { s.dev += *t.deviation; ++s.n_dev; }
    if (t.smoothness) { s.smooth += *t.smoothness; ++s.n_smooth; }
  }

  for (auto& [key, a] : out)
  {
    const auto& s = sums[key];
    if (s.n_dev) a.deviation = s.dev / static_cast<double>(s.n_dev);
    if (s.n_smooth) a.smoothness = s.smooth / static_cast<double>(s.n_smooth);
    if (s.n_dev_all) a.deviation_all = s.dev_all / static_cast<double>(s.n_dev_all);
    if (s.n_smooth_all)
      a.smoothness_all = s.smooth_all / static_cast<double>(s.n_smooth_all);
  }
  (void)config;
  return out;
}

/// Replays `trials` streams of every task kind through every solver.
inline BenchReport run_benchmark(
  const RoadmapQuery& query,
  const BenchConfig& config,
  const TeleopParams& teleop,
  const SuccessCriteria& criteria)
{
  const Workspace ws = Workspace::of(query.chain(), query.graph().space());

  struct Job
  {
    SolverKind solver;
    WaypointStream stream;
  };
  std::vector<Job> jobs;
  for (auto kind : config.tasks)
  {
    for (std::size_t i = 0; i < config.trials; ++i)
    {
      const auto stream = generate(kind, ws, trial_seed(config.seed, kind, i));
      for (auto solver : config.solvers)
        jobs.push_back(Job{solver, stream});
    }
  }

  BenchReport report{config, criteria, {}, {}};
  report.trials.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++)
    {
      report.trials[j] = run_trial(jobs[j].solver, jobs[j].stream, query, ws,
          teleop, criteria);
    }
  };

  const std::size_t threads = std::max<std::size_t>(1, config.threads);
  if (threads == 1)
    worker();
  else
  {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back(worker);
    for (auto& t : pool)
      t.join();
  }

  report.summary = aggregate(config, report.trials);
  return report;
}

} // namespace grr

#endif // GRR__BENCH_HPP
