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

#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace grr;

TEST(Projection, OnManifoldIsUnchanged)
{
  const auto c = test::planar(3);
  Configuration q(3);
  q << 0.2, -0.7, 1.1;
  const auto r = project(c, forward_kinematics(c, q), q);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.iterations, 0);
  EXPECT_TRUE(r.q.isApprox(q));
}

TEST(Projection, ThreeLinkReachesTarget)
{
  const auto c = test::planar(3);
  const auto target = TaskPoint::position(Eigen::Vector2d(2.5, 0.0));
  const auto r = project(c, target, Configuration::Zero(3));
  ASSERT_TRUE(r.ok());
  EXPECT_LE((forward_kinematics(c, r.q).translation - target.translation)
    .norm(), 1e-4);
}

TEST(Projection, UnreachableTargetFails)
{
  const auto c = test::planar(3);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10; ++i)
  {
    const auto r = project(c, TaskPoint::position(Eigen::Vector2d(3.5, 0.2)),
        test::random_config(c, rng));
    EXPECT_EQ(r.status, ProjectionStatus::ResidualFailure);
  }
}

TEST(Projection, CollidingResultIsRejected)
{
  // A base capsule at the origin; a target at the base forces the folded arm
  // through it.
  std::vector<RevoluteJoint> joints(2);
  for (auto& j : joints)
    j.offset = Eigen::Vector3d::UnitX();
  std::vector<Capsule> caps{
    {0, Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero(), 0.2},
    {1, Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitX(), 0.2},
    {2, Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitX(), 0.2}};
  const KinematicChain c(joints, caps, Eigen::Isometry3d::Identity(),
    Eigen::Isometry3d::Identity(), true);
  Configuration guess(2);
  guess << 0.0, 3.0;
  const auto r = project(c, TaskPoint::position(Eigen::Vector2d(0.0, 0.0)),
      guess);
  EXPECT_EQ(r.status, ProjectionStatus::CollisionFailure);
}

TEST(Projection, LimitedJointsStayWithinBounds)
{
  const auto robot = load_robot_spec(test::robot_path("spatial7"));
  std::mt19937_64 rng(2);
  for (int i = 0; i < 200; ++i)
  {
    const auto target = forward_kinematics(robot.chain,
        test::random_config(robot.chain, rng));
    const auto r = project(robot.chain, target,
        test::random_config(robot.chain, rng));
    if (r.ok())
    {
      EXPECT_TRUE(robot.chain.within_limits(r.q));
    }
  }
}

class ProjectionResidual : public ::testing::TestWithParam<bool>
{
};

// Random reachable targets with guesses perturbed by noise of norm 0.3.
TEST_P(ProjectionResidual, PostConditionHolds)
{
  const bool fixed = GetParam();
  const auto c = test::planar(5);
  const TaskMode mode = fixed ? TaskMode::FixedOrientation : TaskMode::Position;
  const ProjectionParams params;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  int ok = 0;
  for (int i = 0; i < 1000; ++i)
  {
    const auto q = test::random_config(c, rng);
    const auto target = forward_kinematics(c, q, mode);
    Configuration noise(5);
    for (int k = 0; k < 5; ++k)
      noise[k] = n(rng);
    const auto r = project(c, target, c.normalize(q + 0.3 * noise.normalized()),
        params);
    if (!r.ok())
      continue;
    ++ok;
    EXPECT_LE(task_distance(forward_kinematics(c, r.q, mode), target),
      params.tolerance);
    EXPECT_TRUE(self_collision_free(c, r.q));
  }
  EXPECT_GE(ok, 990);
}

INSTANTIATE_TEST_SUITE_P(Modes, ProjectionResidual, ::testing::Bool());

TEST(Projection, IdempotentUpToTolerance)
{
  const auto c = test::planar(5);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i)
  {
    const auto target = forward_kinematics(c, test::random_config(c, rng));
    const auto once = project(c, target, test::random_config(c, rng));
    if (!once)
      continue;
    const auto twice = project(c, target, once.q);
    ASSERT_TRUE(twice.ok());
    // A residual below tolerance moves the joints by at most the residual
    // divided by the smallest singular value it excites.
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(jacobian(c, once.q));
    const double sigma = svd.singularValues().minCoeff();
    EXPECT_LE(config_distance(c, once.q, twice.q),
      2.0 * ProjectionParams{}.tolerance / std::max(sigma, 1e-3));
  }
}

TEST(Projection, RejectsBadParams)
{
  ProjectionParams p;
  p.tolerance = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}
