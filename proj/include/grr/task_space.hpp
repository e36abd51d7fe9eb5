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

#ifndef GRR__TASK_SPACE_HPP
#define GRR__TASK_SPACE_HPP

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <cmath>
#include <optional>
#include <stdexcept>

namespace grr {

enum class TaskMode
{
  Position,
  FixedOrientation
};

inline const char* to_string(TaskMode mode)
{
  return mode == TaskMode::Position ? "position" : "fixed_orientation";
}

//==============================================================================
/// A point of the task space: a 2D or 3D translation, plus an orientation
/// when the task constrains it.
struct TaskPoint
{
  Eigen::VectorXd translation;
  std::optional<Eigen::Quaterniond> orientation;
  TaskMode mode = TaskMode::Position;

  static TaskPoint position(Eigen::VectorXd t)
  {
    return TaskPoint{std::move(t), std::nullopt, TaskMode::Position};
  }

  static TaskPoint fixed(Eigen::VectorXd t, const Eigen::Quaterniond& o)
  {
    if (std::abs(o.norm() - 1.0) > 1e-9)
      throw std::invalid_argument("task point orientation must be unit norm");
    return TaskPoint{std::move(t), o, TaskMode::FixedOrientation};
  }
};

/// Rotation of theta about +z.
inline Eigen::Quaterniond planar_orientation(double theta)
{
  return Eigen::Quaterniond(std::cos(0.5 * theta), 0.0, 0.0,
    std::sin(0.5 * theta));
}

//==============================================================================
struct TaskMetricWeights
{
  double translation = 1.0;
  double orientation = 0.3;

  void validate() const
  {
    if (!(translation >= 0.0) || !(orientation >= 0.0)
      || !(translation + orientation > 0.0))
    {
      throw std::invalid_argument("task metric weights must be >= 0 and not "
        "both zero");
    }
  }
};

inline void require_same_mode(const TaskPoint& a, const TaskPoint& b)
{
  if (a.mode != b.mode || a.translation.size() != b.translation.size())
    throw std::invalid_argument("task points have different modes");
  if (a.mode == TaskMode::FixedOrientation
    && (!a.orientation || !b.orientation))
  {
    throw std::invalid_argument("fixed-orientation task point lacks an "
      "orientation");
  }
}

/// w_t * |t_a - t_b| + w_o * (1 - |o_a . o_b|). The orientation weight is
/// ignored in position mode.
inline double task_distance(
  const TaskPoint& a,
  const TaskPoint& b,
  const TaskMetricWeights& w = {})
{
  require_same_mode(a, b);
  double d = w.translation * (a.translation - b.translation).norm();
  if (a.mode == TaskMode::FixedOrientation)
  {
    const double dot = std::abs(a.orientation->coeffs().dot(
      b.orientation->coeffs()));
    d += w.orientation * (1.0 - std::min(1.0, dot));
  }
  return d;
}

/// Translation midpoint. Points of one task space share their fixed
/// orientation, so the first point's orientation is kept as is.
inline TaskPoint bisect_p(const TaskPoint& a, const TaskPoint& b)
{
  require_same_mode(a, b);
  TaskPoint m = a;
  m.translation = 0.5 * (a.translation + b.translation);
  return m;
}

inline TaskPoint lerp(const TaskPoint& a, const TaskPoint& b, double s)
{
  require_same_mode(a, b);
  TaskPoint m = a;
  m.translation = a.translation + s * (b.translation - a.translation);
  return m;
}

} // namespace grr

#endif // GRR__TASK_SPACE_HPP
