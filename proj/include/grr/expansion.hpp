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

#ifndef GRR__EXPANSION_HPP
#define GRR__EXPANSION_HPP

#include <algorithm>
#include <chrono>
#include <numbers>
#include <deque>
#include <map>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "continuity.hpp"

namespace grr {

/// Seed configurations keyed by task graph vertex, in expansion order.
using SeedList = std::vector<std::pair<int, Configuration>>;

class NoSeeds : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//==============================================================================
/// Checks and records task graph edges between assigned vertices. Results
/// are cached per unordered vertex pair.
class EdgeChecker
{
public:

  EdgeChecker(const KinematicChain& chain, const TaskGraph& graph,
    const GrrSettings& settings)
  : _chain(chain), _graph(graph), _settings(settings)
  {
  }

  void check_incident(int v, ResolutionRoadmap& roadmap)
  {
    for (int u : _graph.neighbors(v))
    {
      if (!roadmap.assigned(u))
        continue;
      const Edge e = make_edge(u, v);
      if (_cache.count(e))
        continue;
      const bool ok = is_continuous(_chain, _graph.vertex(e.first),
          _graph.vertex(e.second), roadmap.config(e.first),
          roadmap.config(e.second), _settings, _graph.weights());
      _cache.emplace(e, ok);
      ++roadmap.report.edges_checked;
      if (ok)
        ++roadmap.report.edges_passed;
    }
  }

  std::vector<Edge> passed() const
  {
    std::vector<Edge> out;
    for (const auto& [e, ok] : _cache)
    {
      if (ok)
        out.push_back(e);
    }
    return out;
  }

private:
  const KinematicChain& _chain;
  const TaskGraph& _graph;
  const GrrSettings& _settings;
  std::map<Edge, bool> _cache;
};

//==============================================================================
/// Breadth-first expansion of the roadmap from the seeds. Every newly visited
/// vertex is assigned by projecting from its assigned neighbors, then its
/// task graph edges to assigned vertices are checked for continuity. Vertices
/// whose projection fails get one retry after the main pass.
inline ResolutionRoadmap global_expansion(
  const KinematicChain& chain,
  const TaskGraph& graph,
  const SeedList& seeds,
  const GrrSettings& settings)
{
  settings.validate();
  if (seeds.empty())
    throw std::invalid_argument("global_expansion needs at least one seed");

  const auto start = std::chrono::steady_clock::now();

  ResolutionRoadmap roadmap;
  roadmap.task_graph_fingerprint = graph.fingerprint();
  roadmap.settings = settings;
  roadmap.assignments.assign(graph.size(), std::nullopt);

  std::deque<int> queue;
  std::vector<bool> visited(graph.size(), false);
  for (const auto& [v, q] : seeds)
  {
    if (v < 0 || static_cast<std::size_t>(v) >= graph.size())
      throw std::invalid_argument("seed references a bad vertex");
    if (visited[static_cast<std::size_t>(v)])
      continue;
    roadmap.assignments[static_cast<std::size_t>(v)] = q;
    roadmap.report.seeds.push_back(v);
    visited[static_cast<std::size_t>(v)] = true;
    queue.push_back(v);
  }

  EdgeChecker checker(chain, graph, settings);
  const auto k = static_cast<std::size_t>(settings.k);
  std::vector<int> failed;

  const auto visit = [&](int j) {
    if (!visited[static_cast<std::size_t>(j)])
    {
      visited[static_cast<std::size_t>(j)] = true;
      queue.push_back(j);
    }
  };

  while (!queue.empty())
  {
    const int i = queue.front();
    queue.pop_front();

    for (int j : graph.nearest_neighbors(graph.vertex(i), k + 1))
    {
      if (j != i)
        visit(j);
    }
    // Grid neighbors too, so every vertex of a connected graph is reached.
    for (int j : graph.neighbors(i))
      visit(j);

    if (!roadmap.assigned(i))
    {
      const auto r = project_neighbors(chain, graph.vertex(i), graph, roadmap,
          k, settings);
      if (!r.ok())
      {
        failed.push_back(i);
        continue;
      }
      roadmap.assignments[static_cast<std::size_t>(i)] = r.q();
      ++roadmap.report.resolved_first_pass;
    }
    checker.check_incident(i, roadmap);
  }

  roadmap.report.failed_first_pass = failed.size();
  for (int i : failed)
  {
    const auto r = project_neighbors(chain, graph.vertex(i), graph, roadmap, k,
        settings);
    if (!r.ok())
    {
      roadmap.report.failed.push_back(i);
      continue;
    }
    roadmap.assignments[static_cast<std::size_t>(i)] = r.q();
    ++roadmap.report.resolved_on_retry;
    checker.check_incident(i, roadmap);
  }

  roadmap.resolved_edges = checker.passed();
  roadmap.report.wall_seconds = std::chrono::duration<double>(
    std::chrono::steady_clock::now() - start).count();
  return roadmap;
}

//==============================================================================
/// Seeds from a closed configuration path: each entry is projected onto the
/// task point of its nearest vertex. The first entry mapping to a vertex
/// wins; entries whose projection fails are skipped.
inline SeedList seed_from_cycle(
  const KinematicChain& chain,
  const std::vector<Configuration>& cycle,
  const TaskGraph& graph,
  const GrrSettings& settings)
{
  if (cycle.empty())
    throw std::invalid_argument("seed cycle is empty");

  SeedList seeds;
  std::vector<bool> taken(graph.size(), false);
  for (const auto& q : cycle)
  {
    const TaskPoint p = forward_kinematics(chain, q, graph.space().mode);
    const int v = graph.nearest_neighbors(p, 1).front();
    if (taken[static_cast<std::size_t>(v)])
      continue;
    const auto r = project(chain, graph.vertex(v), q, settings.projection,
        graph.weights());
    if (!r)
      continue;
    taken[static_cast<std::size_t>(v)] = true;
    seeds.emplace_back(v, r.q);
  }

  if (seeds.empty())
    throw NoSeeds("no seed cycle entry projected onto the task graph");
  return seeds;
}

/// One seed: a random configuration projected onto a random vertex.
inline SeedList random_seed(
  const KinematicChain& chain,
  const TaskGraph& graph,
  const GrrSettings& settings,
  std::mt19937_64& rng,
  int attempts = 100)
{
  std::uniform_int_distribution<std::size_t> pick(0, graph.size() - 1);
  for (int a = 0; a < attempts; ++a)
  {
    const int v = static_cast<int>(pick(rng));
    Configuration q(static_cast<Eigen::Index>(chain.dof()));
    for (std::size_t i = 0; i < chain.dof(); ++i)
    {
      const auto& j = chain.joints()[i];
      std::uniform_real_distribution<double> u(
        j.continuous ? -std::numbers::pi : j.lower,
        j.continuous ? std::numbers::pi : j.upper);
      q[static_cast<Eigen::Index>(i)] = u(rng);
    }
    const auto r = project(chain, graph.vertex(v), q, settings.projection,
        graph.weights());
    if (r)
      return SeedList{{v, r.q}};
  }
  throw NoSeeds("no random configuration projected onto the task graph");
}

//==============================================================================
struct BuiltRoadmap
{
  TaskGraph graph;
  ResolutionRoadmap roadmap;
};

/// Drops unassigned vertices (and anything they disconnect from the largest
/// remaining component) from both the task graph and the roadmap.
inline BuiltRoadmap prune_unresolved(const TaskGraph& graph,
  const ResolutionRoadmap& roadmap)
{
  std::vector<bool> keep(graph.size());
  for (std::size_t i = 0; i < graph.size(); ++i)
    keep[i] = roadmap.assignments[i].has_value();
  auto [assigned, old_of_assigned] = induced_subgraph(graph, keep);
  auto [kept, old_of_kept] = largest_component(assigned);

  std::vector<int> old_of(old_of_kept.size());
  std::vector<int> remap(graph.size(), -1);
  for (std::size_t i = 0; i < old_of_kept.size(); ++i)
  {
    old_of[i] = old_of_assigned[static_cast<std::size_t>(old_of_kept[i])];
    remap[static_cast<std::size_t>(old_of[i])] = static_cast<int>(i);
  }

  BuiltRoadmap out{std::move(kept), ResolutionRoadmap{}};
  auto& r = out.roadmap;
  r.settings = roadmap.settings;
  r.report = roadmap.report;
  r.report.pruned_vertices = graph.size() - out.graph.size();
  r.task_graph_fingerprint = out.graph.fingerprint();
  r.assignments.reserve(old_of.size());
  for (int o : old_of)
    r.assignments.push_back(roadmap.assignments[static_cast<std::size_t>(o)]);
  for (const auto& [a, b] : roadmap.resolved_edges)
  {
    const int ra = remap[static_cast<std::size_t>(a)];
    const int rb = remap[static_cast<std::size_t>(b)];
    if (ra >= 0 && rb >= 0)
      r.resolved_edges.push_back(make_edge(ra, rb));
  }
  std::sort(r.resolved_edges.begin(), r.resolved_edges.end());
  for (auto& s : r.report.seeds)
    s = remap[static_cast<std::size_t>(s)];
  std::erase(r.report.seeds, -1);
  return out;
}

/// Expansion followed by pruning of vertices that could not be resolved.
inline BuiltRoadmap build_roadmap(
  const KinematicChain& chain,
  const TaskGraph& graph,
  const SeedList& seeds,
  const GrrSettings& settings)
{
  const auto start = std::chrono::steady_clock::now();
  const ResolutionRoadmap raw = global_expansion(chain, graph, seeds, settings);
  if (raw.assigned_count() == graph.size())
  {
    return BuiltRoadmap{graph, raw};
  }
  BuiltRoadmap out = prune_unresolved(graph, raw);
  out.roadmap.report.wall_seconds = std::chrono::duration<double>(
    std::chrono::steady_clock::now() - start).count();
  return out;
}

} // namespace grr

#endif // GRR__EXPANSION_HPP
