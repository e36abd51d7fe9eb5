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

#ifndef GRR__ROADMAP_HPP
#define GRR__ROADMAP_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "chain.hpp"
#include "projection.hpp"
#include "task_graph.hpp"

namespace grr {

//==============================================================================
struct ContinuityParams
{
  /// Largest allowed deviation of a projected midpoint, relative to the
  /// chord length in configuration space. Must exceed 0.5.
  double c = 0.0;

  /// Chord length below which an edge is accepted without bisecting.
  double epsilon = 0.0;

  /// Bisection levels before an edge is rejected.
  int depth_limit = 16;

  static ContinuityParams defaults_for(std::size_t dof)
  {
    const double s = std::sqrt(static_cast<double>(dof));
    return ContinuityParams{0.5 * s, 0.05 * s, 16};
  }

  void validate() const
  {
    if (!(c > 0.5) || !(epsilon > 0.0) || depth_limit < 0)
      throw std::invalid_argument("continuity parameters need c > 0.5, "
        "epsilon > 0");
  }
};

//==============================================================================
/// Everything the roadmap algorithms need besides the chain and graphs.
struct GrrSettings
{
  ProjectionParams projection;
  ContinuityParams continuity;

  /// Neighborhood size for projection support and BFS expansion.
  int k = 6;

  static GrrSettings defaults_for(const KinematicChain& chain, TaskMode mode)
  {
    GrrSettings s;
    s.continuity = ContinuityParams::defaults_for(chain.dof());
    s.k = 2 * chain.task_dim(mode) + 2;
    return s;
  }

  void validate() const
  {
    projection.validate();
    continuity.validate();
    if (k < 1)
      throw std::invalid_argument("k must be >= 1");
  }
};

//==============================================================================
struct BuildReport
{
  std::vector<int> seeds;
  std::size_t resolved_first_pass = 0;
  std::size_t failed_first_pass = 0;
  std::size_t resolved_on_retry = 0;
  std::vector<int> failed;
  std::size_t edges_checked = 0;
  std::size_t edges_passed = 0;
  std::size_t pruned_vertices = 0;

  /// Wall-clock time of the build. Not persisted.
  double wall_seconds = 0.0;

  bool operator==(const BuildReport& o) const
  {
    return seeds == o.seeds && resolved_first_pass == o.resolved_first_pass
      && failed_first_pass == o.failed_first_pass
      && resolved_on_retry == o.resolved_on_retry && failed == o.failed
      && edges_checked == o.edges_checked && edges_passed == o.edges_passed
      && pruned_vertices == o.pruned_vertices;
  }
};

//==============================================================================
/// Partial map from task graph vertices to configurations, plus the task
/// graph edges that passed the continuity check.
struct ResolutionRoadmap
{
  std::uint64_t task_graph_fingerprint = 0;
  std::vector<std::optional<Configuration>> assignments;
  std::vector<Edge> resolved_edges;
  GrrSettings settings;
  BuildReport report;

  bool assigned(int v) const
  {
    return assignments.at(static_cast<std::size_t>(v)).has_value();
  }

  const Configuration& config(int v) const
  {
    return *assignments.at(static_cast<std::size_t>(v));
  }

  std::size_t assigned_count() const
  {
    std::size_t n = 0;
    for (const auto& a : assignments)
      n += a.has_value() ? 1 : 0;
    return n;
  }
};

//==============================================================================
/// Fraction of task graph edges that the roadmap resolved.
inline double connectivity(const ResolutionRoadmap& roadmap,
  const TaskGraph& graph)
{
  if (graph.edges().empty())
    throw std::invalid_argument("connectivity is undefined without edges");
  return static_cast<double>(roadmap.resolved_edges.size())
    / static_cast<double>(graph.edges().size());
}

class UndefinedMetric : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Mean ratio of configuration distance to task distance over resolved edges.
inline double smoothness(const ResolutionRoadmap& roadmap,
  const TaskGraph& graph, const KinematicChain& chain)
{
  if (roadmap.resolved_edges.empty())
    throw UndefinedMetric("smoothness needs at least one resolved edge");
  double sum = 0.0;
  for (const auto& [a, b] : roadmap.resolved_edges)
  {
    sum += config_distance(chain, roadmap.config(a), roadmap.config(b))
      / graph.distance(graph.vertex(a), graph.vertex(b));
  }
  return sum / static_cast<double>(roadmap.resolved_edges.size());
}

} // namespace grr

#endif // GRR__ROADMAP_HPP
