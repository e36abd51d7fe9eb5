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

#ifndef GRR__QUERY_HPP
#define GRR__QUERY_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "continuity.hpp"

namespace grr {

enum class QueryStatus
{
  Success,
  OutOfCoverage,
  ProjectionFailed,
  UnreachableGoal
};

inline const char* to_string(QueryStatus s)
{
  switch (s)
  {
    case QueryStatus::Success: return "success";
    case QueryStatus::OutOfCoverage: return "out-of-coverage";
    case QueryStatus::ProjectionFailed: return "projection-failed";
    case QueryStatus::UnreachableGoal: return "unreachable-goal";
  }
  return "unknown";
}

struct ResolveResult
{
  QueryStatus status = QueryStatus::OutOfCoverage;
  Configuration q;
  double residual = 0.0;

  /// Vertices whose configurations formed the projection guess.
  std::vector<int> support;

  bool ok() const { return status == QueryStatus::Success; }
};

struct PlanResult
{
  QueryStatus status = QueryStatus::UnreachableGoal;

  /// Starts with the start configuration.
  std::vector<Configuration> path;

  /// Task graph vertices visited by the plan, in order.
  std::vector<int> vertices;

  bool ok() const { return status == QueryStatus::Success; }
};

//==============================================================================
/// Read-only view that answers queries against a built roadmap: continuous
/// IK, task-space path planning, and nearest-vertex lookups.
class RoadmapQuery
{
public:

  RoadmapQuery(const KinematicChain& chain, const TaskGraph& graph,
    const ResolutionRoadmap& roadmap)
  : _chain(chain), _graph(graph), _roadmap(roadmap)
  {
    if (roadmap.assignments.size() != graph.size())
      throw std::invalid_argument("roadmap does not match the task graph");

    _resolved_adjacency.assign(graph.size(), {});
    for (const auto& [a, b] : roadmap.resolved_edges)
    {
      _resolved_adjacency[static_cast<std::size_t>(a)].push_back(b);
      _resolved_adjacency[static_cast<std::size_t>(b)].push_back(a);
    }
    for (auto& adj : _resolved_adjacency)
      std::sort(adj.begin(), adj.end());

    _component.assign(graph.size(), -1);
    int next = 0;
    for (std::size_t s = 0; s < graph.size(); ++s)
    {
      if (_component[s] >= 0 || !roadmap.assignments[s])
        continue;
      std::vector<int> stack{static_cast<int>(s)};
      _component[s] = next;
      while (!stack.empty())
      {
        const int v = stack.back();
        stack.pop_back();
        for (int u : _resolved_adjacency[static_cast<std::size_t>(v)])
        {
          if (_component[static_cast<std::size_t>(u)] < 0)
          {
            _component[static_cast<std::size_t>(u)] = next;
            stack.push_back(u);
          }
        }
      }
      ++next;
    }
  }

  const KinematicChain& chain() const { return _chain; }
  const TaskGraph& graph() const { return _graph; }
  const ResolutionRoadmap& roadmap() const { return _roadmap; }
  const GrrSettings& settings() const { return _roadmap.settings; }

  /// Component label in the resolved-edge graph, -1 for unassigned vertices.
  int component(int v) const
  {
    return _component.at(static_cast<std::size_t>(v));
  }

  TaskPoint task_point(const Configuration& q) const
  {
    return forward_kinematics(_chain, q, _graph.space().mode);
  }

  double task_distance(const TaskPoint& a, const TaskPoint& b) const
  {
    return _graph.distance(a, b);
  }

  //----------------------------------------------------------------------------
  /// Configuration for an arbitrary task point. Supports come from the k
  /// nearest assigned vertices, restricted to the largest component of their
  /// resolved-edge subgraph (ties: the component holding the nearest
  /// vertex). With a context configuration the component whose members are
  /// closest to it is chosen instead.
  ResolveResult resolve(const TaskPoint& p,
    const Configuration* context = nullptr) const
  {
    ResolveResult out;
    const auto supports = assigned_supports(p, _graph, _roadmap,
        static_cast<std::size_t>(settings().k));
    if (supports.empty())
    {
      out.status = QueryStatus::OutOfCoverage;
      return out;
    }

    const auto selected = select_component(supports, context);
    const auto r = project_from_supports(_chain, p, selected, settings(),
        _graph.weights());
    for (const auto& s : r.supports)
      out.support.push_back(s.vertex);
    out.q = r.projection.q;
    out.residual = r.projection.residual;
    out.status = r.ok() ? QueryStatus::Success : QueryStatus::ProjectionFailed;
    return out;
  }

  /// Supports of the local resolved-edge subgraph component used by resolve.
  std::vector<Support> select_component(const std::vector<Support>& supports,
    const Configuration* context = nullptr) const
  {
    const std::size_t n = supports.size();
    std::vector<int> label(n, -1);
    int groups = 0;
    for (std::size_t s = 0; s < n; ++s)
    {
      if (label[s] >= 0)
        continue;
      std::vector<std::size_t> stack{s};
      label[s] = groups;
      while (!stack.empty())
      {
        const std::size_t a = stack.back();
        stack.pop_back();
        for (std::size_t b = 0; b < n; ++b)
        {
          if (label[b] < 0 && resolved(supports[a].vertex, supports[b].vertex))
          {
            label[b] = groups;
            stack.push_back(b);
          }
        }
      }
      ++groups;
    }

    std::vector<std::size_t> size(static_cast<std::size_t>(groups), 0);
    for (int l : label)
      ++size[static_cast<std::size_t>(l)];

    // Supports arrive sorted by distance, so group 0 holds the nearest vertex.
    int best = 0;
    if (context)
    {
      std::vector<double> closest(static_cast<std::size_t>(groups),
        std::numeric_limits<double>::infinity());
      for (std::size_t s = 0; s < n; ++s)
      {
        auto& c = closest[static_cast<std::size_t>(label[s])];
        c = std::min(c, config_distance(_chain, *context, supports[s].q));
      }
      for (int g = 1; g < groups; ++g)
      {
        const auto gi = static_cast<std::size_t>(g);
        const auto bi = static_cast<std::size_t>(best);
        if (closest[gi] < closest[bi]
          || (closest[gi] == closest[bi] && size[gi] > size[bi]))
        {
          best = g;
        }
      }
    }
    else
    {
      for (int g = 1; g < groups; ++g)
      {
        if (size[static_cast<std::size_t>(g)] > size[static_cast<std::size_t>(best)])
          best = g;
      }
    }

    std::vector<Support> out;
    for (std::size_t s = 0; s < n; ++s)
    {
      if (label[s] == best)
        out.push_back(supports[s]);
    }
    return out;
  }

  bool resolved(int a, int b) const
  {
    const auto& adj = _resolved_adjacency.at(static_cast<std::size_t>(a));
    return std::binary_search(adj.begin(), adj.end(), b);
  }

  const std::vector<int>& resolved_neighbors(int v) const
  {
    return _resolved_adjacency.at(static_cast<std::size_t>(v));
  }

  //----------------------------------------------------------------------------
  /// Nearest assigned vertex to p, optionally restricted to one resolved-edge
  /// component. Returns -1 when there is none.
  int nearest_assigned(const TaskPoint& p, int in_component = -1) const
  {
    std::size_t k = 16;
    while (true)
    {
      const std::size_t kk = std::min(k, _graph.size());
      for (int v : _graph.nearest_neighbors(p, kk))
      {
        if (!_roadmap.assigned(v))
          continue;
        if (in_component >= 0 && component(v) != in_component)
          continue;
        return v;
      }
      if (kk == _graph.size())
        return -1;
      k *= 4;
    }
  }

  /// Assigned vertex closest to the configuration's tool point, preferring
  /// the component whose assignment is nearest in configuration space.
  int vertex_of(const Configuration& q) const
  {
    const TaskPoint p = task_point(q);
    const auto supports = assigned_supports(p, _graph, _roadmap,
        static_cast<std::size_t>(settings().k));
    if (supports.empty())
      return nearest_assigned(p);
    return select_component(supports, &q).front().vertex;
  }

  //----------------------------------------------------------------------------
  /// A* over resolved edges with task-distance costs.
  std::optional<std::vector<int>> shortest_path(int start, int goal) const
  {
    return shortest_path(std::vector<std::pair<int, double>>{{start, 0.0}},
        goal);
  }

  /// A* from several start vertices, each with an initial cost.
  std::optional<std::vector<int>> shortest_path(
    const std::vector<std::pair<int, double>>& starts, int goal) const
  {
    if (starts.empty() || component(goal) < 0)
      return std::nullopt;

    const auto& goal_t = _graph.vertex(goal).translation;
    const double wt = _graph.weights().translation;
    const auto heuristic = [&](int v) {
      return wt * (_graph.vertex(v).translation - goal_t).norm();
    };

    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;
    std::vector<double> cost(_graph.size(),
      std::numeric_limits<double>::infinity());
    std::vector<int> parent(_graph.size(), -1);
    std::vector<bool> closed(_graph.size(), false);
    for (const auto& [start, c] : starts)
    {
      if (component(start) != component(goal))
        continue;
      if (c < cost[static_cast<std::size_t>(start)])
      {
        cost[static_cast<std::size_t>(start)] = c;
        open.emplace(c + heuristic(start), start);
      }
    }

    while (!open.empty())
    {
      const int v = open.top().second;
      open.pop();
      if (closed[static_cast<std::size_t>(v)])
        continue;
      closed[static_cast<std::size_t>(v)] = true;
      if (v == goal)
        break;
      for (int u : resolved_neighbors(v))
      {
        const double c = cost[static_cast<std::size_t>(v)]
          + _graph.distance(_graph.vertex(v), _graph.vertex(u));
        if (c < cost[static_cast<std::size_t>(u)])
        {
          cost[static_cast<std::size_t>(u)] = c;
          parent[static_cast<std::size_t>(u)] = v;
          open.emplace(c + heuristic(u), u);
        }
      }
    }

    if (!closed[static_cast<std::size_t>(goal)])
      return std::nullopt;
    std::vector<int> path;
    for (int v = goal; v >= 0; v = parent[static_cast<std::size_t>(v)])
      path.push_back(v);
    std::reverse(path.begin(), path.end());
    return path;
  }

  /// Configuration path from q_start to p_goal that follows resolved task
  /// graph edges. Waypoints are at most `step` apart in task distance; each
  /// is projected from the configurations at the ends of its segment.
  PlanResult plan_task_path(const Configuration& q_start,
    const TaskPoint& p_goal, double step) const
  {
    if (!(step > 0.0))
      throw std::invalid_argument("plan step must be positive");

    PlanResult out;
    // A goal whose nearest vertex lies in another component is unreachable:
    // the final leg to p_goal would cross an unresolved edge.
    const int start = vertex_of(q_start);
    const int goal = nearest_assigned(p_goal);
    if (start < 0 || goal < 0 || component(goal) != component(start))
      return out;

    // Enter the roadmap at any adjacent vertex of the start's local
    // component, so a configuration halfway along an edge does not back up
    // to its nearer end first.
    const TaskPoint p_start = task_point(q_start);
    const double reach = _graph.grid()
      ? _graph.grid()->pitch() * std::sqrt(static_cast<double>(
          _graph.space().translation_dim))
      : 0.0;
    std::vector<std::pair<int, double>> entries{
      {start, task_distance(p_start, _graph.vertex(start))}};
    const auto supports = assigned_supports(p_start, _graph, _roadmap,
        static_cast<std::size_t>(settings().k));
    if (!supports.empty())
    {
      for (const auto& s : select_component(supports, &q_start))
      {
        if (s.vertex != start && s.distance <= reach)
          entries.emplace_back(s.vertex, s.distance);
      }
    }

    const auto vertices = shortest_path(entries, goal);
    if (!vertices)
      return out;
    out.vertices = *vertices;

    // Polyline of (task point, configuration) anchors.
    struct Anchor
    {
      TaskPoint p;
      Configuration q;
    };
    std::vector<Anchor> anchors;
    anchors.push_back(Anchor{task_point(q_start), q_start});
    for (int v : *vertices)
      anchors.push_back(Anchor{_graph.vertex(v), _roadmap.config(v)});

    const auto goal_q = resolve(p_goal, &_roadmap.config(goal));
    if (goal_q.ok())
      anchors.push_back(Anchor{p_goal, goal_q.q});

    out.path.push_back(q_start);
    for (std::size_t a = 1; a < anchors.size(); ++a)
    {
      const auto& from = anchors[a - 1];
      const auto& to = anchors[a];
      const double length = task_distance(from.p, to.p);
      if (length <= settings().projection.tolerance)
      {
        if (config_distance(_chain, out.path.back(), to.q)
          >= settings().continuity.epsilon)
        {
          out.path.push_back(to.q);
        }
        continue;
      }
      const int pieces = std::max(1, static_cast<int>(std::ceil(length / step)));
      for (int s = 1; s <= pieces; ++s)
      {
        if (s == pieces)
        {
          out.path.push_back(to.q);
          break;
        }
        const TaskPoint w = lerp(from.p, to.p, static_cast<double>(s) / pieces);
        std::vector<Support> supports{
          Support{-1, from.q, task_distance(w, from.p)},
          Support{-1, to.q, task_distance(w, to.p)}};
        const auto r = project_from_supports(_chain, w, supports, settings(),
            _graph.weights());
        if (!r.ok())
        {
          out.status = QueryStatus::ProjectionFailed;
          return out;
        }
        out.path.push_back(r.q());
      }
    }

    out.status = QueryStatus::Success;
    return out;
  }

private:
  const KinematicChain& _chain;
  const TaskGraph& _graph;
  const ResolutionRoadmap& _roadmap;
  std::vector<std::vector<int>> _resolved_adjacency;
  std::vector<int> _component;
};

} // namespace grr

#endif // GRR__QUERY_HPP
