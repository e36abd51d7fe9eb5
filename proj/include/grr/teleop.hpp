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

#ifndef GRR__TELEOP_HPP
#define GRR__TELEOP_HPP

#include <deque>
#include <optional>
#include <utility>

#include "query.hpp"

namespace grr {

enum class TeleopStatus
{
  Tracking,
  Detouring,
  Blocked
};

inline const char* to_string(TeleopStatus s)
{
  switch (s)
  {
    case TeleopStatus::Tracking: return "tracking";
    case TeleopStatus::Detouring: return "detouring";
    case TeleopStatus::Blocked: return "blocked";
  }
  return "unknown";
}

struct TeleopParams
{
  /// Largest task-space move emitted in one tick while tracking. Larger input
  /// jumps are followed through the roadmap instead.
  double max_track_step = 0.0;

  /// Waypoint spacing of detour and fallback plans.
  double plan_step = 0.0;

  /// Capacity of the (input, output) history.
  std::size_t history = 1024;

  /// One grid cell per tick, tracking or planned.
  static TeleopParams for_graph(const TaskGraph& graph)
  {
    const double pitch = graph.grid() ? graph.grid()->pitch() : 0.1;
    return TeleopParams{pitch, pitch, 1024};
  }
};

struct TeleopState
{
  Configuration current;
  std::optional<TaskPoint> active_target;
  std::deque<Configuration> detour_plan;
  TeleopStatus status = TeleopStatus::Tracking;

  /// Where the controller is actually heading; differs from the input while
  /// blocked.
  std::optional<TaskPoint> effective_target;

  std::deque<std::pair<TaskPoint, Configuration>> history;
};

/// Starts at the roadmap's configuration for p.
inline std::optional<TeleopState> teleop_start(const RoadmapQuery& query,
  const TaskPoint& p)
{
  const auto r = query.resolve(p);
  if (!r.ok())
    return std::nullopt;
  TeleopState s;
  s.current = r.q;
  s.active_target = p;
  s.effective_target = p;
  return s;
}

//==============================================================================
/// One control tick: track the input through the roadmap when the move from
/// the current configuration passes the continuity check, detour along
/// resolved edges when the input is covered but not directly reachable, and
/// fall back to the nearest reachable vertex when it is not covered at all.
inline std::pair<Configuration, TeleopState> teleop_step(
  TeleopState state,
  const TaskPoint& p_t,
  const RoadmapQuery& query,
  const TeleopParams& params)
{
  const auto emit = [&](Configuration q, TeleopStatus status) {
    state.current = std::move(q);
    state.status = status;
    state.history.emplace_back(p_t, state.current);
    while (state.history.size() > params.history)
      state.history.pop_front();
    return std::pair<Configuration, TeleopState>{state.current, state};
  };

  state.active_target = p_t;

  if (!state.detour_plan.empty())
  {
    Configuration next = std::move(state.detour_plan.front());
    state.detour_plan.pop_front();
    return emit(std::move(next), state.detour_plan.empty()
      ? TeleopStatus::Tracking : TeleopStatus::Detouring);
  }

  const TaskPoint p_c = query.task_point(state.current);
  const auto q_t = query.resolve(p_t, &state.current);
  if (q_t.ok())
  {
    const bool near = query.task_distance(p_c, p_t) <= params.max_track_step;
    if (near && is_continuous(query.chain(), p_c, p_t, state.current, q_t.q,
      query.settings(), query.graph().weights()))
    {
      state.effective_target = p_t;
      return emit(q_t.q, TeleopStatus::Tracking);
    }

    // Covered but not directly reachable: plan through the roadmap.
    const auto plan = query.plan_task_path(state.current, p_t,
        params.plan_step);
    if (plan.ok() && plan.path.size() > 1)
    {
      state.effective_target = p_t;
      state.detour_plan.assign(plan.path.begin() + 1, plan.path.end());
      Configuration next = std::move(state.detour_plan.front());
      state.detour_plan.pop_front();
      return emit(std::move(next), state.detour_plan.empty()
        ? TeleopStatus::Tracking : TeleopStatus::Detouring);
    }
  }

  // Fall back to the nearest vertex reachable from where the robot is.
  const int here = query.vertex_of(state.current);
  const int target = here >= 0
    ? query.nearest_assigned(p_t, query.component(here)) : -1;
  if (target < 0)
    return emit(state.current, TeleopStatus::Blocked);

  state.effective_target = query.graph().vertex(target);
  const auto plan = query.plan_task_path(state.current,
      query.graph().vertex(target), params.plan_step);
  if (!plan.ok() || plan.path.size() < 2)
    return emit(state.current, TeleopStatus::Blocked);
  return emit(plan.path[1], TeleopStatus::Blocked);
}

//==============================================================================
/// Baseline teleoperation: Newton projection of every input from the
/// previous output. Holds position when the projection fails.
struct NewtonTeleop
{
  const KinematicChain& chain;
  ProjectionParams params;
  TaskMetricWeights weights;
  Configuration current;

  Configuration step(const TaskPoint& p)
  {
    const auto r = project(chain, p, current, params, weights);
    if (r)
      current = r.q;
    return current;
  }
};

} // namespace grr

#endif // GRR__TELEOP_HPP
