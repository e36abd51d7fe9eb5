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

#ifndef GRR__CONTINUITY_HPP
#define GRR__CONTINUITY_HPP

#include <algorithm>
#include <vector>

#include "roadmap.hpp"

namespace grr {

//==============================================================================
/// Recursive bisection test: the projected midpoint of every sub-edge must
/// stay within c times the sub-edge's configuration distance of both ends,
/// until sub-edges are shorter than epsilon.
inline bool is_continuous(
  const KinematicChain& chain,
  const TaskPoint& p_i,
  const TaskPoint& p_j,
  const Configuration& q_i,
  const Configuration& q_j,
  const GrrSettings& settings,
  const TaskMetricWeights& weights = {},
  int depth = 0)
{
  const double d = config_distance(chain, q_i, q_j);
  if (d < settings.continuity.epsilon)
    return true;
  if (depth >= settings.continuity.depth_limit)
    return false;

  const TaskPoint p_m = bisect_p(p_i, p_j);
  const Configuration q_bisect = bisect_q(chain, q_i, q_j);
  const ProjectionResult q_m =
    project(chain, p_m, q_bisect, settings.projection, weights);
  if (!q_m)
    return false;

  const double deviation = std::max(
    config_distance(chain, q_i, q_m.q), config_distance(chain, q_m.q, q_j));
  if (deviation > settings.continuity.c * d)
    return false;

  return is_continuous(chain, p_i, p_m, q_i, q_m.q, settings, weights,
      depth + 1)
    && is_continuous(chain, p_m, p_j, q_m.q, q_j, settings, weights, depth + 1);
}

//==============================================================================
/// A configuration supporting a projection and its task distance to the
/// target.
struct Support
{
  int vertex = -1;
  Configuration q;
  double distance = 0.0;
};

/// Weights (max(d) / d_i)^2, normalized to sum to one. Callers handle a zero
/// distance before calling.
inline std::vector<double> support_weights(const std::vector<double>& ds)
{
  const double max_d = *std::max_element(ds.begin(), ds.end());
  std::vector<double> ws;
  ws.reserve(ds.size());
  double sum = 0.0;
  for (double d : ds)
  {
    const double w = (max_d / d) * (max_d / d);
    ws.push_back(w);
    sum += w;
  }
  for (double& w : ws)
    w /= sum;
  return ws;
}

/// Guess configuration blended from the supports: a zero-distance support is
/// used as is, otherwise the inverse-square weighted average.
inline Configuration support_guess(const KinematicChain& chain,
  const std::vector<Support>& supports)
{
  for (const auto& s : supports)
  {
    if (s.distance == 0.0)
      return s.q;
  }

  std::vector<Configuration> qs;
  std::vector<double> ds;
  qs.reserve(supports.size());
  ds.reserve(supports.size());
  for (const auto& s : supports)
  {
    qs.push_back(s.q);
    ds.push_back(s.distance);
  }
  const auto ws = support_weights(ds);
  return weighted_average(chain, qs, ws);
}

enum class NeighborProjectionStatus
{
  Success,
  NoSupport,
  ProjectionFailed
};

struct NeighborProjection
{
  NeighborProjectionStatus status = NeighborProjectionStatus::NoSupport;
  ProjectionResult projection;
  std::vector<Support> supports;

  bool ok() const { return status == NeighborProjectionStatus::Success; }
  const Configuration& q() const { return projection.q; }
};

inline NeighborProjection project_from_supports(
  const KinematicChain& chain,
  const TaskPoint& p,
  std::vector<Support> supports,
  const GrrSettings& settings,
  const TaskMetricWeights& weights)
{
  NeighborProjection out;
  out.supports = std::move(supports);
  if (out.supports.empty())
    return out;

  out.projection = project(chain, p, support_guess(chain, out.supports),
    settings.projection, weights);
  out.status = out.projection.ok() ? NeighborProjectionStatus::Success
    : NeighborProjectionStatus::ProjectionFailed;
  return out;
}

/// Assigned configurations among the k nearest graph vertices of p.
inline std::vector<Support> assigned_supports(
  const TaskPoint& p,
  const TaskGraph& graph,
  const ResolutionRoadmap& roadmap,
  std::size_t k)
{
  std::vector<Support> supports;
  for (int j : graph.nearest_neighbors(p, k))
  {
    if (roadmap.assigned(j))
    {
      supports.push_back(
        Support{j, roadmap.config(j), graph.distance(p, graph.vertex(j))});
    }
  }
  return supports;
}

/// Projects the weighted average of the assigned configurations among the k
/// nearest graph vertices of p.
inline NeighborProjection project_neighbors(
  const KinematicChain& chain,
  const TaskPoint& p,
  const TaskGraph& graph,
  const ResolutionRoadmap& roadmap,
  std::size_t k,
  const GrrSettings& settings)
{
  return project_from_supports(chain, p,
      assigned_supports(p, graph, roadmap, k), settings, graph.weights());
}

} // namespace grr

#endif // GRR__CONTINUITY_HPP
