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

#ifndef GRR__CHAIN_HPP
#define GRR__CHAIN_HPP

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "task_space.hpp"

namespace grr {

/// Joint values in radians, one entry per joint.
using Configuration = Eigen::VectorXd;

//==============================================================================
/// Wraps an angle into [-pi, pi).
inline double wrap_angle(double a)
{
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(a + std::numbers::pi, two_pi);
  if (r < 0.0)
    r += two_pi;
  r -= std::numbers::pi;
  if (r >= std::numbers::pi)
    r -= two_pi;
  return r;
}

/// Signed shortest angular difference b - a, in [-pi, pi).
inline double angle_diff(double a, double b)
{
  return wrap_angle(b - a);
}

//==============================================================================
struct RevoluteJoint
{
  /// Rotation axis in the frame of the joint.
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();

  /// Fixed translation from this joint to the next one (or to the tool frame
  /// for the last joint), expressed after the joint rotation.
  Eigen::Vector3d offset = Eigen::Vector3d::Zero();

  bool continuous = true;
  double lower = -std::numbers::pi;
  double upper = std::numbers::pi;
};

//==============================================================================
/// A collision capsule rigidly attached to a body of the chain.
///
/// Body 0 is the fixed base. Body i+1 moves with joint i and its frame sits at
/// joint i's origin, rotated by the joint value.
struct Capsule
{
  int body = 0;
  Eigen::Vector3d a = Eigen::Vector3d::Zero();
  Eigen::Vector3d b = Eigen::Vector3d::Zero();
  double radius = 0.0;
};

//==============================================================================
/// Geometry of a serial chain of revolute joints. Immutable once built.
class KinematicChain
{
public:

  KinematicChain(
    std::vector<RevoluteJoint> joints,
    std::vector<Capsule> capsules = {},
    Eigen::Isometry3d base = Eigen::Isometry3d::Identity(),
    Eigen::Isometry3d end_effector = Eigen::Isometry3d::Identity(),
    bool planar = false)
  : _joints(std::move(joints)),
    _capsules(std::move(capsules)),
    _base(base),
    _end_effector(end_effector),
    _planar(planar)
  {
    validate();
  }

  /// Chain of planar links rotating about +z with the given lengths along +x.
  static KinematicChain planar_links(
    std::span<const double> lengths,
    double capsule_radius = 0.0)
  {
    std::vector<RevoluteJoint> joints;
    std::vector<Capsule> capsules;
    for (std::size_t i = 0; i < lengths.size(); ++i)
    {
      RevoluteJoint j;
      j.offset = Eigen::Vector3d(lengths[i], 0.0, 0.0);
      joints.push_back(j);
      capsules.push_back(
        Capsule{static_cast<int>(i) + 1, Eigen::Vector3d::Zero(), j.offset,
          capsule_radius});
    }
    return KinematicChain(std::move(joints), std::move(capsules),
             Eigen::Isometry3d::Identity(), Eigen::Isometry3d::Identity(),
             true);
  }

  std::size_t dof() const { return _joints.size(); }
  bool planar() const { return _planar; }
  const std::vector<RevoluteJoint>& joints() const { return _joints; }
  const std::vector<Capsule>& capsules() const { return _capsules; }
  const Eigen::Isometry3d& base() const { return _base; }
  const Eigen::Isometry3d& end_effector() const { return _end_effector; }

  /// Number of translation coordinates of the task space this chain spans.
  int translation_dim() const { return _planar ? 2 : 3; }

  /// Number of orientation coordinates when the orientation is constrained.
  int orientation_dim() const { return _planar ? 1 : 3; }

  int task_dim(TaskMode mode) const
  {
    return translation_dim()
      + (mode == TaskMode::FixedOrientation ? orientation_dim() : 0);
  }

  /// Frame of every moving body (joint i rotated by q[i]) followed by the tool
  /// frame as the final element.
  std::vector<Eigen::Isometry3d> frames(const Configuration& q) const
  {
    check_size(q);
    std::vector<Eigen::Isometry3d> out;
    out.reserve(_joints.size() + 1);
    Eigen::Isometry3d t = _base;
    for (std::size_t i = 0; i < _joints.size(); ++i)
    {
      t = t * Eigen::AngleAxisd(q[static_cast<Eigen::Index>(i)],
        _joints[i].axis);
      out.push_back(t);
      t = t * Eigen::Translation3d(_joints[i].offset);
    }
    out.push_back(t * _end_effector);
    return out;
  }

  Eigen::Isometry3d tool_pose(const Configuration& q) const
  {
    return frames(q).back();
  }

  /// Upper bound on the tool distance from the base origin.
  double reach() const
  {
    double total = _end_effector.translation().norm();
    for (const auto& j : _joints)
      total += j.offset.norm();
    return total;
  }

  /// Lower bound on the distance between the base origin and the tool.
  double min_reach() const
  {
    std::vector<double> lengths;
    for (const auto& j : _joints)
      lengths.push_back(j.offset.norm());
    lengths.push_back(_end_effector.translation().norm());
    return min_reach_of(lengths);
  }

  static double min_reach_of(const std::vector<double>& lengths)
  {
    double total = 0.0;
    double longest = 0.0;
    for (double l : lengths)
    {
      total += l;
      longest = std::max(longest, l);
    }
    return std::max(0.0, 2.0 * longest - total);
  }

  void check_size(const Configuration& q) const
  {
    if (static_cast<std::size_t>(q.size()) != _joints.size())
    {
      throw std::invalid_argument(
        "configuration has " + std::to_string(q.size())
        + " values but the chain has " + std::to_string(_joints.size())
        + " joints");
    }
  }

  /// Wraps continuous joints into [-pi, pi) and clamps limited ones.
  Configuration normalize(Configuration q) const
  {
    check_size(q);
    for (std::size_t i = 0; i < _joints.size(); ++i)
    {
      const auto idx = static_cast<Eigen::Index>(i);
      const auto& j = _joints[i];
      q[idx] = j.continuous ? wrap_angle(q[idx])
        : std::clamp(q[idx], j.lower, j.upper);
    }
    return q;
  }

  bool within_limits(const Configuration& q) const
  {
    check_size(q);
    for (std::size_t i = 0; i < _joints.size(); ++i)
    {
      const auto& j = _joints[i];
      const double v = q[static_cast<Eigen::Index>(i)];
      if (!std::isfinite(v))
        return false;
      if (!j.continuous && (v < j.lower || v > j.upper))
        return false;
    }
    return true;
  }

private:

  void validate() const
  {
    if (_joints.empty())
      throw std::invalid_argument("a kinematic chain needs at least one joint");

    for (std::size_t i = 0; i < _joints.size(); ++i)
    {
      const auto& j = _joints[i];
      if (std::abs(j.axis.norm() - 1.0) > 1e-9)
      {
        throw std::invalid_argument(
          "joint " + std::to_string(i) + " axis is not a unit vector");
      }
      if (!j.continuous && !(j.lower < j.upper))
      {
        throw std::invalid_argument(
          "joint " + std::to_string(i) + " lower limit must be below upper");
      }
      if (_planar)
      {
        if (std::abs(std::abs(j.axis.z()) - 1.0) > 1e-9
          || std::abs(j.offset.z()) > 1e-12)
        {
          throw std::invalid_argument(
            "joint " + std::to_string(i)
            + " is not planar (axis must be +-z, offset in the xy plane)");
        }
      }
    }

    for (const auto& c : _capsules)
    {
      if (c.body < 0 || c.body > static_cast<int>(_joints.size()))
        throw std::invalid_argument("capsule attached to unknown body");
      if (c.radius < 0.0)
        throw std::invalid_argument("capsule radius must be nonnegative");
    }

    if (_planar)
    {
      const auto planar_rotation = [](const Eigen::Isometry3d& t) {
        return (t.linear().col(2) - Eigen::Vector3d::UnitZ()).norm() < 1e-9;
      };
      if (!planar_rotation(_base) || !planar_rotation(_end_effector)
        || std::abs(_end_effector.translation().z()) > 1e-12)
      {
        throw std::invalid_argument(
          "planar chain base and end effector must rotate about z only");
      }
    }
  }

  std::vector<RevoluteJoint> _joints;
  std::vector<Capsule> _capsules;
  Eigen::Isometry3d _base;
  Eigen::Isometry3d _end_effector;
  bool _planar;
};

//==============================================================================
/// Tool point of the chain at q. Orientation is reported only for
/// TaskMode::FixedOrientation; planar chains report (x, y) and a rotation
/// about z.
inline TaskPoint forward_kinematics(
  const KinematicChain& chain,
  const Configuration& q,
  TaskMode mode = TaskMode::Position)
{
  const Eigen::Isometry3d tool = chain.tool_pose(q);
  TaskPoint p;
  p.mode = mode;
  if (chain.planar())
  {
    p.translation = tool.translation().head<2>();
    if (mode == TaskMode::FixedOrientation)
    {
      const double theta = std::atan2(tool.linear()(1, 0), tool.linear()(0, 0));
      p.orientation = planar_orientation(theta);
    }
  }
  else
  {
    p.translation = tool.translation();
    if (mode == TaskMode::FixedOrientation)
      p.orientation = Eigen::Quaterniond(tool.linear()).normalized();
  }
  return p;
}

//==============================================================================
/// Geometric Jacobian of the tool point restricted to the active task
/// coordinates: translation rows, plus angular velocity rows (z only for
/// planar chains) in fixed-orientation mode.
inline Eigen::MatrixXd jacobian(
  const KinematicChain& chain,
  const Configuration& q,
  TaskMode mode = TaskMode::Position)
{
  const auto frames = chain.frames(q);
  const Eigen::Vector3d tool = frames.back().translation();
  const auto n = static_cast<Eigen::Index>(chain.dof());
  Eigen::MatrixXd j(chain.task_dim(mode), n);

  for (Eigen::Index i = 0; i < n; ++i)
  {
    const auto& f = frames[static_cast<std::size_t>(i)];
    const Eigen::Vector3d z =
      f.linear() * chain.joints()[static_cast<std::size_t>(i)].axis;
    const Eigen::Vector3d lin = z.cross(tool - f.translation());
    if (chain.planar())
    {
      j(0, i) = lin.x();
      j(1, i) = lin.y();
      if (mode == TaskMode::FixedOrientation)
        j(2, i) = z.z();
    }
    else
    {
      j.block<3, 1>(0, i) = lin;
      if (mode == TaskMode::FixedOrientation)
        j.block<3, 1>(3, i) = z;
    }
  }
  return j;
}

//==============================================================================
/// Euclidean norm of per-joint differences, using the shortest angular
/// difference for continuous joints.
inline double config_distance(
  const KinematicChain& chain,
  const Configuration& a,
  const Configuration& b)
{
  chain.check_size(a);
  chain.check_size(b);
  double sum = 0.0;
  for (std::size_t i = 0; i < chain.dof(); ++i)
  {
    const auto idx = static_cast<Eigen::Index>(i);
    const double d = chain.joints()[i].continuous ? angle_diff(a[idx], b[idx])
      : b[idx] - a[idx];
    sum += d * d;
  }
  return std::sqrt(sum);
}

/// Interpolates from a toward b by fraction s, along the shorter arc for
/// continuous joints.
inline Configuration interpolate(
  const KinematicChain& chain,
  const Configuration& a,
  const Configuration& b,
  double s)
{
  chain.check_size(a);
  chain.check_size(b);
  Configuration out(a.size());
  for (std::size_t i = 0; i < chain.dof(); ++i)
  {
    const auto idx = static_cast<Eigen::Index>(i);
    out[idx] = chain.joints()[i].continuous
      ? a[idx] + s * angle_diff(a[idx], b[idx])
      : a[idx] + s * (b[idx] - a[idx]);
  }
  return chain.normalize(out);
}

inline Configuration bisect_q(
  const KinematicChain& chain,
  const Configuration& a,
  const Configuration& b)
{
  return interpolate(chain, a, b, 0.5);
}

//==============================================================================
/// Weighted mean of configurations. Continuous joints use the circular mean;
/// when the resultant phasor vanishes the highest-weight input wins.
inline Configuration weighted_average(
  const KinematicChain& chain,
  std::span<const Configuration> qs,
  std::span<const double> ws)
{
  if (qs.empty())
    throw std::invalid_argument("weighted_average needs at least one input");
  if (qs.size() != ws.size())
    throw std::invalid_argument("weighted_average weight count mismatch");

  double sum = 0.0;
  std::size_t heaviest = 0;
  for (std::size_t i = 0; i < ws.size(); ++i)
  {
    if (!(ws[i] >= 0.0))
      throw std::invalid_argument("weighted_average weights must be >= 0");
    sum += ws[i];
    if (ws[i] > ws[heaviest])
      heaviest = i;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("weighted_average weights must sum to 1");

  for (const auto& q : qs)
    chain.check_size(q);

  Configuration out(static_cast<Eigen::Index>(chain.dof()));
  for (std::size_t j = 0; j < chain.dof(); ++j)
  {
    const auto idx = static_cast<Eigen::Index>(j);
    if (chain.joints()[j].continuous)
    {
      double s = 0.0;
      double c = 0.0;
      for (std::size_t i = 0; i < qs.size(); ++i)
      {
        s += ws[i] * std::sin(qs[i][idx]);
        c += ws[i] * std::cos(qs[i][idx]);
      }
      out[idx] = std::hypot(s, c) < 1e-9 ? qs[heaviest][idx]
        : std::atan2(s, c);
    }
    else
    {
      double v = 0.0;
      for (std::size_t i = 0; i < qs.size(); ++i)
        v += ws[i] * qs[i][idx];
      out[idx] = v;
    }
  }
  return chain.normalize(out);
}

//==============================================================================
/// Squared distance between segments [p1, q1] and [p2, q2].
inline double segment_distance_squared(
  const Eigen::Vector3d& p1, const Eigen::Vector3d& q1,
  const Eigen::Vector3d& p2, const Eigen::Vector3d& q2)
{
  constexpr double eps = 1e-15;
  const Eigen::Vector3d d1 = q1 - p1;
  const Eigen::Vector3d d2 = q2 - p2;
  const Eigen::Vector3d r = p1 - p2;
  const double a = d1.squaredNorm();
  const double e = d2.squaredNorm();
  const double f = d2.dot(r);
  double s = 0.0;
  double t = 0.0;

  if (a <= eps && e <= eps)
    return r.squaredNorm();

  if (a <= eps)
  {
    t = std::clamp(f / e, 0.0, 1.0);
  }
  else
  {
    const double c = d1.dot(r);
    if (e <= eps)
    {
      s = std::clamp(-c / a, 0.0, 1.0);
    }
    else
    {
      const double b = d1.dot(d2);
      const double denom = a * e - b * b;
      s = denom > eps ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0)
      {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      }
      else if (t > 1.0)
      {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }

  return ((p1 + d1 * s) - (p2 + d2 * t)).squaredNorm();
}

/// True iff no pair of capsules on non-adjacent bodies overlaps.
inline bool self_collision_free(const KinematicChain& chain,
  const Configuration& q)
{
  const auto& caps = chain.capsules();
  if (caps.size() < 2)
    return true;

  const auto frames = chain.frames(q);
  const auto body_frame = [&](int body) -> Eigen::Isometry3d {
    return body == 0 ? chain.base() : frames[static_cast<std::size_t>(body - 1)];
  };

  std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>> world;
  world.reserve(caps.size());
  for (const auto& c : caps)
  {
    const auto f = body_frame(c.body);
    world.emplace_back(f * c.a, f * c.b);
  }

  for (std::size_t i = 0; i < caps.size(); ++i)
  {
    for (std::size_t j = i + 1; j < caps.size(); ++j)
    {
      if (std::abs(caps[i].body - caps[j].body) <= 1)
        continue;
      const double reach = caps[i].radius + caps[j].radius;
      if (reach <= 0.0)
        continue;
      const double d2 = segment_distance_squared(
        world[i].first, world[i].second, world[j].first, world[j].second);
      if (d2 < reach * reach)
        return false;
    }
  }
  return true;
}

} // namespace grr

#endif // GRR__CHAIN_HPP
