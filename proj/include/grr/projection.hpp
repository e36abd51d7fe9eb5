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

#ifndef GRR__PROJECTION_HPP
#define GRR__PROJECTION_HPP

#include <stdexcept>

#include "chain.hpp"
#include "task_space.hpp"

namespace grr {

//==============================================================================
struct ProjectionParams
{
  int max_iterations = 100;

  /// Residual threshold, measured with the task metric.
  double tolerance = 1e-4;

  /// Damping of the least-squares step.
  double damping = 1e-6;

  /// Largest joint-space step norm per iteration (rad).
  double step_clamp = 0.5;

  void validate() const
  {
    if (max_iterations < 1 || !(tolerance > 0.0) || !(damping >= 0.0)
      || !(step_clamp > 0.0))
    {
      throw std::invalid_argument("invalid projection parameters");
    }
  }
};

enum class ProjectionStatus
{
  Success,
  ResidualFailure,
  CollisionFailure
};

struct ProjectionResult
{
  ProjectionStatus status = ProjectionStatus::ResidualFailure;

  /// Final iterate. Only a valid solution when status is Success.
  Configuration q;

  /// Task-space distance between the tool point and the target.
  double residual = 0.0;

  int iterations = 0;

  bool ok() const { return status == ProjectionStatus::Success; }
  explicit operator bool() const { return ok(); }
};

//==============================================================================
/// Error vector (target - current) in the coordinates of the task Jacobian.
/// Orientation error is the rotation vector of target * current^-1.
inline Eigen::VectorXd task_residual(
  const KinematicChain& chain,
  const TaskPoint& target,
  const TaskPoint& current)
{
  require_same_mode(target, current);
  const int nt = chain.translation_dim();
  Eigen::VectorXd r(chain.task_dim(target.mode));
  r.head(nt) = target.translation - current.translation;
  if (target.mode == TaskMode::FixedOrientation)
  {
    Eigen::Quaterniond err = *target.orientation * current.orientation->conjugate();
    if (err.w() < 0.0)
      err.coeffs() *= -1.0;
    const Eigen::AngleAxisd aa(err.normalized());
    const Eigen::Vector3d rv = aa.angle() * aa.axis();
    if (chain.planar())
      r[nt] = rv.z();
    else
      r.segment<3>(nt) = rv;
  }
  return r;
}

//==============================================================================
/// Moves q_guess onto the self-motion manifold of p with damped least-squares
/// Newton steps, then rejects self-colliding results.
inline ProjectionResult project(
  const KinematicChain& chain,
  const TaskPoint& p,
  const Configuration& q_guess,
  const ProjectionParams& params = {},
  const TaskMetricWeights& weights = {})
{
  chain.check_size(q_guess);
  if (p.translation.size() != chain.translation_dim())
    throw std::invalid_argument("task point dimension does not match chain");

  ProjectionResult result;
  result.q = chain.normalize(q_guess);
  const int m = chain.task_dim(p.mode);
  const Eigen::MatrixXd damping =
    params.damping * Eigen::MatrixXd::Identity(m, m);

  bool converged = false;
  for (int it = 0; ; ++it)
  {
    const TaskPoint current = forward_kinematics(chain, result.q, p.mode);
    result.residual = task_distance(current, p, weights);
    const Eigen::VectorXd r = task_residual(chain, p, current);
    const double orientation_error = p.mode == TaskMode::FixedOrientation
      ? r.tail(chain.orientation_dim()).norm() : 0.0;

    if (result.residual <= params.tolerance
      && orientation_error <= params.tolerance)
    {
      converged = true;
      result.iterations = it;
      break;
    }
    if (it == params.max_iterations)
    {
      result.iterations = it;
      break;
    }

    const Eigen::MatrixXd j = jacobian(chain, result.q, p.mode);
    Eigen::VectorXd dq =
      j.transpose() * (j * j.transpose() + damping).ldlt().solve(r);
    const double norm = dq.norm();
    if (!std::isfinite(norm))
    {
      result.iterations = it;
      break;
    }
    if (norm < 1e-12)
    {
      // Stuck on a singular pose with the residual orthogonal to the range
      // of J (e.g. a straight chain asked to shrink): bend every joint a
      // little so the next Jacobian sees the residual.
      for (int i = 0; i < dq.size(); ++i)
        dq[i] = (i % 2 == 0 ? 1e-2 : -1e-2);
    }
    else if (norm > params.step_clamp)
      dq *= params.step_clamp / norm;
    result.q = chain.normalize(result.q + dq);
  }

  if (!converged)
  {
    result.status = ProjectionStatus::ResidualFailure;
    return result;
  }
  result.status = self_collision_free(chain, result.q)
    ? ProjectionStatus::Success : ProjectionStatus::CollisionFailure;
  return result;
}

} // namespace grr

#endif // GRR__PROJECTION_HPP
