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

#ifndef GRR__TASK_GRAPH_HPP
#define GRR__TASK_GRAPH_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chain.hpp"
#include "kd_tree.hpp"
#include "task_space.hpp"

namespace grr {

using Edge = std::pair<int, int>;

inline Edge make_edge(int a, int b)
{
  return a < b ? Edge{a, b} : Edge{b, a};
}

//==============================================================================
/// Axis-aligned box in translation coordinates.
struct Box
{
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  int dim() const { return static_cast<int>(lo.size()); }

  bool contains(const Eigen::VectorXd& t) const
  {
    return (t.array() >= lo.array()).all() && (t.array() <= hi.array()).all();
  }
};

struct GridMeta
{
  Eigen::VectorXd origin;
  Eigen::VectorXd cell_size;
  std::vector<int> counts;

  /// Largest cell edge length.
  double pitch() const { return cell_size.maxCoeff(); }
};

//==============================================================================
/// Task description shared by every vertex of a task graph.
struct TaskSpace
{
  TaskMode mode = TaskMode::Position;
  int translation_dim = 2;

  /// Required when mode is FixedOrientation.
  std::optional<Eigen::Quaterniond> orientation;

  TaskPoint point(Eigen::VectorXd t) const
  {
    return TaskPoint{std::move(t),
      mode == TaskMode::FixedOrientation ? orientation : std::nullopt, mode};
  }
};

//==============================================================================
/// Annulus that contains every tool position the chain can reach for a task
/// space. With a fixed orientation the last link is rigid in the world, so
/// the annulus is centered on the shifted wrist origin.
struct ReachRegion
{
  Eigen::VectorXd center;
  double inner = 0.0;
  double outer = 0.0;

  bool contains(const Eigen::VectorXd& t, double margin = 0.0) const
  {
    const double d = (t - center).norm();
    return d <= outer - margin && d >= inner + (inner > 0.0 ? margin : 0.0);
  }
};

inline ReachRegion reach_region(const KinematicChain& chain,
  const TaskSpace& space)
{
  const int dim = chain.translation_dim();
  ReachRegion region;
  Eigen::Vector3d center = chain.base().translation();

  std::vector<double> lengths;
  for (const auto& j : chain.joints())
    lengths.push_back(j.offset.norm());

  if (space.mode == TaskMode::FixedOrientation && space.orientation)
  {
    // Tool pose fixes the last joint frame's rotation, hence the position of
    // the last joint relative to the tool.
    const Eigen::Quaterniond& o = *space.orientation;
    const Eigen::Matrix3d tool_rotation = o.toRotationMatrix();
    const Eigen::Matrix3d last_rotation =
      tool_rotation * chain.end_effector().linear().transpose();
    const Eigen::Vector3d tail = last_rotation
      * (chain.joints().back().offset + chain.end_effector().translation());
    lengths.pop_back();
    // The remaining links reach from the base to the last joint; shifting by
    // the rigid tail maps that annulus onto tool positions.
    center += tail;
  }
  else
  {
    lengths.push_back(chain.end_effector().translation().norm());
  }

  region.center = center.head(dim);
  double total = 0.0;
  for (double l : lengths)
    total += l;
  region.outer = total;
  region.inner = KinematicChain::min_reach_of(lengths);
  return region;
}

//==============================================================================
class EmptyWorkspace : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//==============================================================================
/// Discretized task space: vertices, undirected edges and a kNN index.
class TaskGraph
{
public:

  TaskGraph() = default;

  TaskGraph(
    TaskSpace space,
    std::vector<TaskPoint> vertices,
    std::vector<Edge> edges,
    TaskMetricWeights weights = {},
    std::optional<GridMeta> grid = std::nullopt)
  : _space(std::move(space)),
    _vertices(std::move(vertices)),
    _weights(weights),
    _grid(std::move(grid))
  {
    if (_space.mode == TaskMode::Position)
      _weights.orientation = 0.0;
    _weights.validate();
    if (_space.mode == TaskMode::FixedOrientation && !_space.orientation)
      throw std::invalid_argument("fixed-orientation task space needs an "
        "orientation");

    for (const auto& v : _vertices)
    {
      if (v.mode != _space.mode
        || v.translation.size() != _space.translation_dim)
      {
        throw std::invalid_argument("task graph vertex has a different mode");
      }
      if (_space.mode == TaskMode::FixedOrientation
        && (!v.orientation
        || v.orientation->coeffs() != _space.orientation->coeffs()))
      {
        throw std::invalid_argument("task graph vertices must share the fixed "
          "orientation");
      }
    }

    std::set<Edge> unique;
    const int n = static_cast<int>(_vertices.size());
    for (const auto& [a, b] : edges)
    {
      if (a < 0 || b < 0 || a >= n || b >= n)
        throw std::invalid_argument("task graph edge references a bad vertex");
      if (a == b)
        throw std::invalid_argument("task graph edge is a self-loop");
      if (!unique.insert(make_edge(a, b)).second)
        throw std::invalid_argument("task graph has a duplicate edge");
    }
    _edges.assign(unique.begin(), unique.end());

    _adjacency.assign(_vertices.size(), {});
    for (const auto& [a, b] : _edges)
    {
      _adjacency[static_cast<std::size_t>(a)].push_back(b);
      _adjacency[static_cast<std::size_t>(b)].push_back(a);
    }
    for (auto& adj : _adjacency)
      std::sort(adj.begin(), adj.end());

    std::vector<Eigen::VectorXd> pts;
    pts.reserve(_vertices.size());
    for (const auto& v : _vertices)
      pts.push_back(v.translation);
    _index = KdTree(std::move(pts));
  }

  const TaskSpace& space() const { return _space; }
  const std::vector<TaskPoint>& vertices() const { return _vertices; }
  const TaskPoint& vertex(int i) const
  {
    return _vertices.at(static_cast<std::size_t>(i));
  }
  std::size_t size() const { return _vertices.size(); }
  const std::vector<Edge>& edges() const { return _edges; }
  const std::vector<int>& neighbors(int i) const
  {
    return _adjacency.at(static_cast<std::size_t>(i));
  }
  const TaskMetricWeights& weights() const { return _weights; }
  const std::optional<GridMeta>& grid() const { return _grid; }

  bool has_edge(int a, int b) const
  {
    const auto& adj = neighbors(a);
    return std::binary_search(adj.begin(), adj.end(), b);
  }

  double distance(const TaskPoint& a, const TaskPoint& b) const
  {
    return task_distance(a, b, _weights);
  }

  /// Up to k vertices, ascending by task distance to p, ties by index.
  std::vector<int> nearest_neighbors(const TaskPoint& p, std::size_t k) const
  {
    if (k == 0)
      throw std::invalid_argument("nearest_neighbors needs k >= 1");
    if (p.translation.size() != _space.translation_dim)
      throw std::invalid_argument("query dimension does not match graph");

    // Translation distance ranks vertices because the orientation term is
    // the same for every vertex of one graph.
    auto hits = _index.knn(p.translation, k);
    if (hits.size() == k)
    {
      // The squared-distance order of the tree and the rounded task distance
      // can disagree by an ulp at the cut-off, so widen it slightly and let
      // the task distance decide which ties survive.
      const double cut = std::sqrt(hits.back().first);
      hits = _index.within(p.translation, cut * (1.0 + 1e-9) + 1e-12);
    }
    std::vector<std::pair<double, int>> ranked;
    ranked.reserve(hits.size());
    for (const auto& [d2, i] : hits)
      ranked.emplace_back(rank_distance(p, i), i);
    std::sort(ranked.begin(), ranked.end());
    if (ranked.size() > k)
      ranked.resize(k);

    std::vector<int> out;
    out.reserve(ranked.size());
    for (const auto& r : ranked)
      out.push_back(r.second);
    return out;
  }

  /// Labels of connected components, numbered in order of first vertex.
  std::vector<int> components() const
  {
    std::vector<int> label(_vertices.size(), -1);
    int next = 0;
    for (std::size_t s = 0; s < _vertices.size(); ++s)
    {
      if (label[s] >= 0)
        continue;
      std::vector<int> stack{static_cast<int>(s)};
      label[s] = next;
      while (!stack.empty())
      {
        const int v = stack.back();
        stack.pop_back();
        for (int u : neighbors(v))
        {
          if (label[static_cast<std::size_t>(u)] < 0)
          {
            label[static_cast<std::size_t>(u)] = next;
            stack.push_back(u);
          }
        }
      }
      ++next;
    }
    return label;
  }

  bool is_connected() const
  {
    const auto label = components();
    return std::all_of(label.begin(), label.end(),
      [](int l) { return l == 0; });
  }

  /// FNV-1a over the vertex coordinates and edge list.
  std::uint64_t fingerprint() const
  {
    std::uint64_t h = 1469598103934665603ull;
    const auto mix = [&h](const void* data, std::size_t n) {
      const auto* bytes = static_cast<const unsigned char*>(data);
      for (std::size_t i = 0; i < n; ++i)
      {
        h ^= bytes[i];
        h *= 1099511628211ull;
      }
    };
    const int mode = static_cast<int>(_space.mode);
    mix(&mode, sizeof(mode));
    for (const auto& v : _vertices)
      mix(v.translation.data(), sizeof(double)
        * static_cast<std::size_t>(v.translation.size()));
    for (const auto& e : _edges)
    {
      mix(&e.first, sizeof(int));
      mix(&e.second, sizeof(int));
    }
    return h;
  }

private:

  double rank_distance(const TaskPoint& p, int i) const
  {
    const auto& v = vertex(i);
    if (p.mode == v.mode)
      return task_distance(p, v, _weights);
    return _weights.translation * (p.translation - v.translation).norm();
  }

  TaskSpace _space;
  std::vector<TaskPoint> _vertices;
  std::vector<Edge> _edges;
  std::vector<std::vector<int>> _adjacency;
  TaskMetricWeights _weights;
  std::optional<GridMeta> _grid;
  KdTree _index;
};

//==============================================================================
/// Induced subgraph on the kept vertices. Returns the new graph and the old
/// index of every new vertex.
inline std::pair<TaskGraph, std::vector<int>> induced_subgraph(
  const TaskGraph& graph, const std::vector<bool>& keep)
{
  std::vector<int> remap(graph.size(), -1);
  std::vector<int> old_of;
  std::vector<TaskPoint> vertices;
  for (std::size_t i = 0; i < graph.size(); ++i)
  {
    if (!keep[i])
      continue;
    remap[i] = static_cast<int>(vertices.size());
    old_of.push_back(static_cast<int>(i));
    vertices.push_back(graph.vertices()[i]);
  }
  std::vector<Edge> edges;
  for (const auto& [a, b] : graph.edges())
  {
    const int ra = remap[static_cast<std::size_t>(a)];
    const int rb = remap[static_cast<std::size_t>(b)];
    if (ra >= 0 && rb >= 0)
      edges.emplace_back(ra, rb);
  }
  return {TaskGraph(graph.space(), std::move(vertices), std::move(edges),
      graph.weights(), graph.grid()), std::move(old_of)};
}

/// Keeps the largest connected component (ties: the one with the lowest
/// vertex index).
inline std::pair<TaskGraph, std::vector<int>> largest_component(
  const TaskGraph& graph)
{
  const auto label = graph.components();
  std::vector<int> count;
  for (int l : label)
  {
    if (static_cast<std::size_t>(l) >= count.size())
      count.resize(static_cast<std::size_t>(l) + 1, 0);
    ++count[static_cast<std::size_t>(l)];
  }
  const int best = static_cast<int>(
    std::max_element(count.begin(), count.end()) - count.begin());
  std::vector<bool> keep(graph.size());
  for (std::size_t i = 0; i < graph.size(); ++i)
    keep[i] = label[i] == best;
  return induced_subgraph(graph, keep);
}

//==============================================================================
/// Grid discretization of a workspace box. Cell centers outside the chain's
/// reach region are dropped; cells differing by at most one step per axis
/// are connected; only the largest connected component is kept.
inline TaskGraph build_grid(
  const Box& box,
  const std::vector<int>& resolution,
  const KinematicChain& chain,
  const TaskSpace& space,
  const TaskMetricWeights& weights = {})
{
  const int dim = box.dim();
  if (dim != chain.translation_dim() || space.translation_dim != dim)
    throw std::invalid_argument("workspace dimension does not match chain");
  if (static_cast<int>(resolution.size()) != dim)
    throw std::invalid_argument("resolution needs one count per axis");
  for (int i = 0; i < dim; ++i)
  {
    if (!(box.hi[i] > box.lo[i]))
      throw std::invalid_argument("workspace box is empty");
    if (resolution[static_cast<std::size_t>(i)] < 2)
      throw std::invalid_argument("resolution must be >= 2 per axis");
  }

  GridMeta meta;
  meta.origin = box.lo;
  meta.counts = resolution;
  meta.cell_size.resize(dim);
  for (int i = 0; i < dim; ++i)
    meta.cell_size[i] = (box.hi[i] - box.lo[i]) / resolution[static_cast<std::size_t>(i)];

  const ReachRegion region = reach_region(chain, space);

  std::size_t total = 1;
  for (int c : resolution)
    total *= static_cast<std::size_t>(c);

  std::vector<int> cell_to_vertex(total, -1);
  std::vector<TaskPoint> vertices;
  std::vector<std::vector<int>> coords;
  for (std::size_t cell = 0; cell < total; ++cell)
  {
    std::vector<int> c(static_cast<std::size_t>(dim));
    std::size_t rest = cell;
    for (int a = dim - 1; a >= 0; --a)
    {
      const auto n = static_cast<std::size_t>(resolution[static_cast<std::size_t>(a)]);
      c[static_cast<std::size_t>(a)] = static_cast<int>(rest % n);
      rest /= n;
    }
    Eigen::VectorXd t(dim);
    for (int a = 0; a < dim; ++a)
      t[a] = box.lo[a] + (c[static_cast<std::size_t>(a)] + 0.5) * meta.cell_size[a];
    if (!region.contains(t))
      continue;
    cell_to_vertex[cell] = static_cast<int>(vertices.size());
    vertices.push_back(space.point(t));
    coords.push_back(std::move(c));
  }

  if (vertices.empty())
    throw EmptyWorkspace("no grid cell lies within the reach of the chain");

  // Forward half of the 3^dim neighborhood so each edge is produced once.
  std::vector<std::vector<int>> offsets;
  const int combos = dim == 2 ? 9 : 27;
  for (int m = 0; m < combos; ++m)
  {
    std::vector<int> o(static_cast<std::size_t>(dim));
    int rest = m;
    for (int a = dim - 1; a >= 0; --a)
    {
      o[static_cast<std::size_t>(a)] = rest % 3 - 1;
      rest /= 3;
    }
    const auto first = std::find_if(o.begin(), o.end(),
      [](int v) { return v != 0; });
    if (first != o.end() && *first > 0)
      offsets.push_back(std::move(o));
  }

  std::vector<Edge> edges;
  for (std::size_t v = 0; v < vertices.size(); ++v)
  {
    for (const auto& o : offsets)
    {
      std::size_t cell = 0;
      bool inside = true;
      for (int a = 0; a < dim; ++a)
      {
        const int c = coords[v][static_cast<std::size_t>(a)]
          + o[static_cast<std::size_t>(a)];
        if (c < 0 || c >= resolution[static_cast<std::size_t>(a)])
        {
          inside = false;
          break;
        }
        cell = cell * static_cast<std::size_t>(resolution[static_cast<std::size_t>(a)])
          + static_cast<std::size_t>(c);
      }
      if (!inside)
        continue;
      const int u = cell_to_vertex[cell];
      if (u >= 0)
        edges.emplace_back(static_cast<int>(v), u);
    }
  }

  TaskGraph full(space, std::move(vertices), std::move(edges), weights, meta);
  return largest_component(full).first;
}

} // namespace grr

#endif // GRR__TASK_GRAPH_HPP
