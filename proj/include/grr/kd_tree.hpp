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

#ifndef GRR__KD_TREE_HPP
#define GRR__KD_TREE_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <numeric>
#include <queue>
#include <utility>
#include <vector>

namespace grr {

//==============================================================================
/// Static kd-tree over a fixed point set. Queries order neighbors by
/// (squared distance, index) so results are deterministic under ties.
class KdTree
{
public:

  using Neighbor = std::pair<double, int>;

  KdTree() = default;

  explicit KdTree(std::vector<Eigen::VectorXd> points)
  : _points(std::move(points))
  {
    _order.resize(_points.size());
    std::iota(_order.begin(), _order.end(), 0);
    if (!_points.empty())
    {
      _dim = static_cast<int>(_points.front().size());
      _nodes.reserve(_points.size());
      _root = build(0, static_cast<int>(_order.size()), 0);
    }
  }

  std::size_t size() const { return _points.size(); }

  /// Up to k nearest points, ascending by (squared distance, index).
  std::vector<Neighbor> knn(const Eigen::VectorXd& query, std::size_t k) const
  {
    std::priority_queue<Neighbor> heap;
    if (k == 0 || _root < 0)
      return {};
    search(_root, query, k, heap);

    std::vector<Neighbor> out;
    out.reserve(heap.size());
    while (!heap.empty())
    {
      out.push_back(heap.top());
      heap.pop();
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

  /// Every point within radius of query, in no particular order.
  std::vector<Neighbor> within(const Eigen::VectorXd& query, double radius) const
  {
    std::vector<Neighbor> out;
    if (_root >= 0 && radius >= 0.0)
      collect(_root, query, radius * radius, out);
    return out;
  }

private:

  struct Node
  {
    int point = -1;
    int axis = 0;
    int left = -1;
    int right = -1;
  };

  int build(int begin, int end, int depth)
  {
    if (begin >= end)
      return -1;

    const int axis = depth % _dim;
    const int mid = begin + (end - begin) / 2;
    std::nth_element(_order.begin() + begin, _order.begin() + mid,
      _order.begin() + end,
      [&](int a, int b) {
        const double va = _points[static_cast<std::size_t>(a)][axis];
        const double vb = _points[static_cast<std::size_t>(b)][axis];
        return va < vb || (va == vb && a < b);
      });

    const int id = static_cast<int>(_nodes.size());
    _nodes.push_back(Node{_order[static_cast<std::size_t>(mid)], axis, -1, -1});
    const int left = build(begin, mid, depth + 1);
    const int right = build(mid + 1, end, depth + 1);
    _nodes[static_cast<std::size_t>(id)].left = left;
    _nodes[static_cast<std::size_t>(id)].right = right;
    return id;
  }

  void search(int node_id, const Eigen::VectorXd& query, std::size_t k,
    std::priority_queue<Neighbor>& heap) const
  {
    const Node& node = _nodes[static_cast<std::size_t>(node_id)];
    const auto& pt = _points[static_cast<std::size_t>(node.point)];
    const Neighbor candidate{(pt - query).squaredNorm(), node.point};
    if (heap.size() < k)
      heap.push(candidate);
    else if (candidate < heap.top())
    {
      heap.pop();
      heap.push(candidate);
    }

    const double diff = query[node.axis] - pt[node.axis];
    const int near = diff < 0.0 ? node.left : node.right;
    const int far = diff < 0.0 ? node.right : node.left;
    if (near >= 0)
      search(near, query, k, heap);
    // Ties on the splitting plane may still hold lower-index candidates.
    if (far >= 0 && (heap.size() < k || diff * diff <= heap.top().first))
      search(far, query, k, heap);
  }

  void collect(int node_id, const Eigen::VectorXd& query, double r2,
    std::vector<Neighbor>& out) const
  {
    const Node& node = _nodes[static_cast<std::size_t>(node_id)];
    const auto& pt = _points[static_cast<std::size_t>(node.point)];
    const double d2 = (pt - query).squaredNorm();
    if (d2 <= r2)
      out.emplace_back(d2, node.point);

    const double diff = query[node.axis] - pt[node.axis];
    if (node.left >= 0 && (diff < 0.0 || diff * diff <= r2))
      collect(node.left, query, r2, out);
    if (node.right >= 0 && (diff >= 0.0 || diff * diff <= r2))
      collect(node.right, query, r2, out);
  }

  std::vector<Eigen::VectorXd> _points;
  std::vector<int> _order;
  std::vector<Node> _nodes;
  int _root = -1;
  int _dim = 0;
};

} // namespace grr

#endif // GRR__KD_TREE_HPP
