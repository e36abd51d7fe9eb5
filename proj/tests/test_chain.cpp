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

#include <numbers>

#include "fixtures.hpp"

using namespace grr;
using std::numbers::pi;

namespace {

KinematicChain limited(std::size_t n, double lo, double hi)
{
  std::vector<RevoluteJoint> joints(n);
  for (auto& j : joints)
  {
    j.offset = Eigen::Vector3d::UnitX();
    j.continuous = false;
    j.lower = lo;
    j.upper = hi;
  }
  return KinematicChain(joints, {}, Eigen::Isometry3d::Identity(),
           Eigen::Isometry3d::Identity(), true);
}

Configuration Q(std::initializer_list<double> v)
{
  Configuration q(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v)
    q[i++] = x;
  return q;
}

} // namespace

//==============================================================================
TEST(ForwardKinematics, StraightArm)
{
  const auto c = test::planar(3);
  EXPECT_TRUE(forward_kinematics(c, Q({0, 0, 0})).translation.isApprox(
    Eigen::Vector2d(3, 0)));
  EXPECT_LT((forward_kinematics(c, Q({pi / 2, 0, 0})).translation
    - Eigen::Vector2d(0, 3)).norm(), 1e-12);
}

TEST(ForwardKinematics, TwoLinkElbow)
{
  const auto p = forward_kinematics(test::planar(2), Q({pi / 2, -pi / 2}));
  EXPECT_LT((p.translation - Eigen::Vector2d(1, 1)).norm(), 1e-12);
}

TEST(ForwardKinematics, PlanarOrientationIsLinkSum)
{
  const auto p = forward_kinematics(test::planar(3), Q({0.3, 0.4, -1.0}),
      TaskMode::FixedOrientation);
  ASSERT_TRUE(p.orientation);
  EXPECT_NEAR(std::abs(p.orientation->coeffs().dot(
    planar_orientation(-0.3).coeffs())), 1.0, 1e-12);
}

TEST(ForwardKinematics, RejectsWrongSize)
{
  EXPECT_THROW(forward_kinematics(test::planar(3), Q({0, 0})),
    std::invalid_argument);
}

//==============================================================================
TEST(Jacobian, UnitLever)
{
  const auto j = jacobian(test::planar(1), Q({0}));
  ASSERT_EQ(j.rows(), 2);
  ASSERT_EQ(j.cols(), 1);
  EXPECT_NEAR(j(0, 0), 0.0, 1e-12);
  EXPECT_NEAR(j(1, 0), 1.0, 1e-12);
}

TEST(Jacobian, TwoLinkLevers)
{
  const auto j = jacobian(test::planar(2), Q({0, 0}));
  Eigen::Matrix2d want;
  want << 0, 0, 2, 1;
  EXPECT_TRUE(j.isApprox(want));
}

TEST(Jacobian, FixedOrientationAddsAngularRows)
{
  const auto j = jacobian(test::planar(3), Q({0.1, 0.2, 0.3}),
      TaskMode::FixedOrientation);
  EXPECT_EQ(j.rows(), 3);
  EXPECT_TRUE(j.row(2).isApprox(Eigen::RowVector3d(1, 1, 1)));
}

class JacobianFiniteDifference : public ::testing::TestWithParam<std::string>
{
};

TEST_P(JacobianFiniteDifference, MatchesCentralDifferences)
{
  const auto robot = load_robot_spec(test::robot_path(GetParam()));
  const auto& chain = robot.chain;
  std::mt19937_64 rng(3);
  const double h = 1e-6;
  for (int trial = 0; trial < 100; ++trial)
  {
    const auto q = test::random_config(chain, rng);
    const auto j = jacobian(chain, q);
    for (Eigen::Index c = 0; c < q.size(); ++c)
    {
      Configuration a = q, b = q;
      a[c] += h;
      b[c] -= h;
      const Eigen::VectorXd fd = (forward_kinematics(chain, a).translation
        - forward_kinematics(chain, b).translation) / (2 * h);
      EXPECT_LT((fd - j.col(c)).cwiseAbs().maxCoeff(), 1e-5);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Robots, JacobianFiniteDifference,
  ::testing::Values("planar5_position", "spatial7"));

//==============================================================================
TEST(ConfigDistance, Examples)
{
  const auto c = test::planar(1);
  EXPECT_EQ(config_distance(c, Q({0.4}), Q({0.4})), 0.0);
  EXPECT_NEAR(config_distance(c, Q({3.1}), Q({-3.1})), 2 * pi - 6.2, 1e-12);
  EXPECT_NEAR(config_distance(limited(2, -5, 5), Q({0, 0}), Q({3, 4})), 5.0,
    1e-12);
  EXPECT_THROW(config_distance(c, Q({0}), Q({0, 0})), std::invalid_argument);
}

TEST(ConfigDistance, MetricAxioms)
{
  const auto c = test::planar(5);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i)
  {
    const auto a = test::random_config(c, rng);
    const auto b = test::random_config(c, rng);
    const auto m = test::random_config(c, rng);
    EXPECT_NEAR(config_distance(c, a, b), config_distance(c, b, a), 1e-12);
    EXPECT_LE(config_distance(c, a, b),
      config_distance(c, a, m) + config_distance(c, m, b) + 1e-12);
  }
}

TEST(BisectQ, Examples)
{
  const auto q = Q({0.3, -2.0});
  EXPECT_TRUE(bisect_q(test::planar(2), q, q).isApprox(q));
  EXPECT_TRUE(bisect_q(limited(2, -5, 5), Q({0, 1}), Q({2, 3})).isApprox(
    Q({1, 2})));
  EXPECT_NEAR(std::abs(bisect_q(test::planar(1), Q({3}), Q({-3}))[0]), pi,
    1e-12);
}

TEST(WeightedAverage, Examples)
{
  const auto one = test::planar(1);
  const std::vector<Configuration> single{Q({1.25})};
  const std::vector<double> w1{1.0};
  EXPECT_NEAR(weighted_average(one, single, w1)[0], 1.25, 1e-12);

  const std::vector<Configuration> lim{Q({0}), Q({2})};
  const std::vector<double> half{0.5, 0.5};
  EXPECT_NEAR(weighted_average(limited(1, -5, 5), lim, half)[0], 1.0, 1e-12);

  const std::vector<Configuration> wrap{Q({3}), Q({-3})};
  EXPECT_NEAR(std::abs(weighted_average(one, wrap, half)[0]), pi, 1e-12);
}

TEST(WeightedAverage, OneHotWeightsSelectInput)
{
  const auto c = test::planar(5);
  std::mt19937_64 rng(6);
  std::vector<Configuration> qs;
  for (int i = 0; i < 4; ++i)
    qs.push_back(test::random_config(c, rng));
  for (std::size_t hot = 0; hot < qs.size(); ++hot)
  {
    std::vector<double> w(qs.size(), 0.0);
    w[hot] = 1.0;
    EXPECT_LT(config_distance(c, weighted_average(c, qs, w), qs[hot]), 1e-12);
  }
}

TEST(WeightedAverage, RejectsBadInput)
{
  const auto c = test::planar(1);
  const std::vector<Configuration> none;
  const std::vector<double> nw;
  EXPECT_THROW(weighted_average(c, none, nw), std::invalid_argument);
  const std::vector<Configuration> two{Q({0}), Q({1})};
  const std::vector<double> bad{0.5, 0.2};
  EXPECT_THROW(weighted_average(c, two, bad), std::invalid_argument);
}

//==============================================================================
TEST(SelfCollision, ZeroRadiusAlwaysFree)
{
  const auto c = test::planar(5);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i)
    EXPECT_TRUE(self_collision_free(c, test::random_config(c, rng)));
}

TEST(SelfCollision, FoldedTwoLink)
{
  // Base capsule on body 0, one capsule per link.
  std::vector<RevoluteJoint> joints(2);
  for (auto& j : joints)
    j.offset = Eigen::Vector3d::UnitX();
  std::vector<Capsule> caps{
    {0, Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero(), 0.2},
    {1, Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitX(), 0.2},
    {2, Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitX(), 0.2}};
  const KinematicChain c(joints, caps, Eigen::Isometry3d::Identity(),
    Eigen::Isometry3d::Identity(), true);
  EXPECT_FALSE(self_collision_free(c, Q({0, pi})));
  EXPECT_TRUE(self_collision_free(c, Q({0, pi / 2})));
}

TEST(SelfCollision, SegmentDistanceAgainstSampling)
{
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1, 1);
  const auto rv = [&] { return Eigen::Vector3d(u(rng), u(rng), u(rng)); };
  for (int i = 0; i < 100; ++i)
  {
    const Eigen::Vector3d a = rv(), b = rv(), c = rv(), d = rv();
    double best = 1e300;
    for (int s = 0; s <= 200; ++s)
      for (int t = 0; t <= 200; ++t)
        best = std::min(best, ((a + (b - a) * s / 200.0)
          - (c + (d - c) * t / 200.0)).squaredNorm());
    const double got = segment_distance_squared(a, b, c, d);
    EXPECT_LE(got, best + 1e-12);
    EXPECT_NEAR(std::sqrt(got), std::sqrt(best), 2e-2);
  }
}

//==============================================================================
TEST(TaskDistance, Examples)
{
  const auto a = TaskPoint::position(Eigen::Vector2d(0, 0));
  const auto b = TaskPoint::position(Eigen::Vector2d(3, 4));
  EXPECT_NEAR(task_distance(a, b), 5.0, 1e-12);

  const auto o0 = planar_orientation(0.0);
  const auto f0 = TaskPoint::fixed(Eigen::Vector2d(0, 0), o0);
  const auto f1 = TaskPoint::fixed(Eigen::Vector2d(0, 0),
      planar_orientation(pi));
  EXPECT_NEAR(task_distance(f0, f1), 0.3, 1e-12);

  // q and -q are the same rotation.
  const Eigen::Quaterniond neg(-o0.w(), -o0.x(), -o0.y(), -o0.z());
  EXPECT_NEAR(task_distance(f0, TaskPoint::fixed(Eigen::Vector2d(0, 0), neg)),
    0.0, 1e-12);
  EXPECT_THROW(task_distance(a, f0), std::invalid_argument);
}

TEST(TaskDistance, BisectIsMidpoint)
{
  const auto a = TaskPoint::position(Eigen::Vector2d(1, 2));
  const auto b = TaskPoint::position(Eigen::Vector2d(3, -2));
  const auto m = bisect_p(a, b);
  EXPECT_TRUE(m.translation.isApprox(Eigen::Vector2d(2, 0)));
  EXPECT_NEAR(task_distance(a, m), task_distance(m, b), 1e-12);
}
