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

namespace {

Configuration Q(std::initializer_list<double> v)
{
  Configuration q(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v)
    q[i++] = x;
  return q;
}

TaskPoint P(double x, double y)
{
  return TaskPoint::position(Eigen::Vector2d(x, y));
}

GrrSettings settings_for(const KinematicChain& c)
{
  return GrrSettings::defaults_for(c, TaskMode::Position);
}

/// Line of n vertices spaced 0.5 apart along x.
TaskGraph line_graph(int n)
{
  std::vector<TaskPoint> vs;
  std::vector<Edge> es;
  for (int i = 0; i < n; ++i)
  {
    vs.push_back(P(0.5 * i, 0.0));
    if (i > 0)
      es.emplace_back(i - 1, i);
  }
  return TaskGraph(test::position_space(), vs, es);
}

} // namespace

//==============================================================================
TEST(ContinuityParams, DefaultsScaleWithDof)
{
  const auto p = ContinuityParams::defaults_for(4);
  EXPECT_DOUBLE_EQ(p.c, 1.0);
  EXPECT_DOUBLE_EQ(p.epsilon, 0.1);
  EXPECT_EQ(p.depth_limit, 16);
  EXPECT_THROW((ContinuityParams{0.5, 0.1, 16}.validate()),
    std::invalid_argument);
  EXPECT_EQ(GrrSettings::defaults_for(test::planar(5), TaskMode::Position).k,
    6);
  EXPECT_EQ(GrrSettings::defaults_for(test::planar(5),
    TaskMode::FixedOrientation).k, 8);
}

TEST(IsContinuous, IdenticalConfigurations)
{
  const auto c = test::planar(3);
  const auto q = Q({0.3, 0.5, -0.2});
  const auto p = forward_kinematics(c, q);
  EXPECT_TRUE(is_continuous(c, p, p, q, q, settings_for(c)));
}

TEST(IsContinuous, ElbowFlipIsRejected)
{
  const auto c = test::planar(3);
  const auto s = settings_for(c);
  const auto pi_ = P(2.0, 0.05);
  const auto pj = P(2.0, 0.10);
  const auto up = project(c, pi_, Q({0.6, -1.2, 0.6}));
  const auto down = project(c, pj, Q({-0.6, 1.2, -0.6}));
  ASSERT_TRUE(up.ok());
  ASSERT_TRUE(down.ok());
  EXPECT_LT(up.q[1], 0.0);
  EXPECT_GT(down.q[1], 0.0);
  EXPECT_FALSE(is_continuous(c, pi_, pj, up.q, down.q, s));
}

TEST(IsContinuous, ManifoldWalkIsAccepted)
{
  const auto c = test::planar(3);
  const auto s = settings_for(c);
  const auto p0 = P(2.0, 0.0);
  const auto p1 = P(2.0, 0.2);
  const auto start = project(c, p0, Q({0.6, -1.2, 0.6}));
  ASSERT_TRUE(start.ok());
  Configuration q = start.q;
  for (int i = 1; i <= 50; ++i)
  {
    const auto r = project(c, lerp(p0, p1, i / 50.0), q);
    ASSERT_TRUE(r.ok());
    q = r.q;
  }
  EXPECT_TRUE(is_continuous(c, p0, p1, start.q, q, s));
}

TEST(IsContinuous, DepthLimitRejects)
{
  const auto c = test::planar(3);
  auto s = settings_for(c);
  s.continuity.depth_limit = 0;
  const auto a = Q({0.6, -1.2, 0.6});
  const auto b = Q({0.7, -1.2, 0.6});
  EXPECT_FALSE(is_continuous(c, forward_kinematics(c, a),
    forward_kinematics(c, b), a, b, s));
}

//==============================================================================
TEST(SupportWeights, InverseSquare)
{
  const auto w = support_weights({1.0, 2.0});
  ASSERT_EQ(w.size(), 2u);
  EXPECT_NEAR(w[0], 0.8, 1e-12);
  EXPECT_NEAR(w[1], 0.2, 1e-12);
}

TEST(SupportGuess, SingleNeighborIsUsedAsIs)
{
  const auto c = test::planar(3);
  const std::vector<Support> s{{4, Q({0.1, 0.2, 0.3}), 0.7}};
  EXPECT_TRUE(support_guess(c, s).isApprox(Q({0.1, 0.2, 0.3})));
}

TEST(SupportGuess, ZeroDistanceShortCircuits)
{
  const auto c = test::planar(3);
  const std::vector<Support> s{{1, Q({0.1, 0.2, 0.3}), 0.5},
    {2, Q({1.0, 1.0, 1.0}), 0.0}};
  EXPECT_EQ(support_guess(c, s), Q({1.0, 1.0, 1.0}));
}

TEST(ProjectNeighbors, CoincidingVertex)
{
  const auto& b = test::planar_position_roadmap();
  const auto s = b.roadmap.settings;
  for (int v : {0, 100, 500})
  {
    const auto r = project_neighbors(b.robot.chain, b.graph.vertex(v), b.graph,
        b.roadmap, static_cast<std::size_t>(s.k), s);
    ASSERT_TRUE(r.ok());
    EXPECT_LE(config_distance(b.robot.chain, r.q(), b.roadmap.config(v)),
      s.projection.tolerance);
  }
}

TEST(ProjectNeighbors, NoSupport)
{
  const auto c = test::planar(1);
  const auto g = line_graph(3);
  ResolutionRoadmap rm;
  rm.assignments.assign(3, std::nullopt);
  const auto r = project_neighbors(c, g.vertex(0), g, rm, 2,
      settings_for(test::planar(2)));
  EXPECT_EQ(r.status, NeighborProjectionStatus::NoSupport);
}

//==============================================================================
TEST(GlobalExpansion, SeedsCoveringEveryVertex)
{
  const auto c = test::planar(3);
  const auto s = settings_for(c);
  SeedList seeds;
  Configuration q = Q({0.4, -0.8, 0.4});
  // Seeds walk the manifold, so neighboring seeds share a branch.
  std::vector<TaskPoint> vs;
  for (int i = 0; i < 4; ++i)
    vs.push_back(P(1.0 + 0.25 * i, 0.5));
  const TaskGraph g(test::position_space(), vs, {{0, 1}, {1, 2}, {2, 3}});
  for (int v = 0; v < 4; ++v)
  {
    const auto r = project(c, vs[static_cast<std::size_t>(v)], q);
    ASSERT_TRUE(r.ok());
    q = r.q;
    seeds.emplace_back(v, q);
  }
  const auto rm = global_expansion(c, g, seeds, s);
  for (const auto& [v, sq] : seeds)
    EXPECT_EQ(rm.config(v), sq);
  EXPECT_EQ(rm.report.resolved_first_pass, 0u);
  EXPECT_EQ(rm.report.edges_checked, 3u);
  EXPECT_EQ(rm.resolved_edges.size(), 3u);
}

TEST(GlobalExpansion, RejectsEmptySeeds)
{
  const auto c = test::planar(3);
  EXPECT_THROW(global_expansion(c, line_graph(3), {}, settings_for(c)),
    std::invalid_argument);
}

//==============================================================================
TEST(Metrics, HandGraph)
{
  const auto c = test::planar(1);
  std::vector<TaskPoint> vs;
  for (int i = 0; i < 4; ++i)
    vs.push_back(P(0.5 * i, 0.0));
  const TaskGraph g(test::position_space(), vs,
    {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  ResolutionRoadmap rm;
  rm.assignments = {Q({0.0}), Q({2.0}), Q({2.0}), Q({2.0})};
  rm.resolved_edges = {{0, 1}, {1, 2}, {2, 3}};
  EXPECT_DOUBLE_EQ(connectivity(rm, g), 0.75);

  rm.resolved_edges = {{0, 1}};
  EXPECT_DOUBLE_EQ(smoothness(rm, g, c), 4.0);

  rm.resolved_edges = {{1, 2}, {2, 3}};
  EXPECT_EQ(smoothness(rm, g, c), 0.0);

  rm.resolved_edges = {{0, 1}, {1, 2}, {2, 3}, {0, 3}};
  EXPECT_DOUBLE_EQ(connectivity(rm, g), 1.0);

  rm.resolved_edges.clear();
  EXPECT_THROW(smoothness(rm, g, c), UndefinedMetric);

  const TaskGraph lonely(test::position_space(), {vs[0]}, {});
  EXPECT_THROW(connectivity(rm, lonely), std::invalid_argument);
}

//==============================================================================
TEST(SeedFromCycle, SingleEntry)
{
  const auto& b = test::planar_position_roadmap();
  const auto s = b.roadmap.settings;
  const auto seeds = seed_from_cycle(b.robot.chain, {b.robot.seed_cycle[3]},
      b.graph, s);
  ASSERT_EQ(seeds.size(), 1u);
  EXPECT_EQ(seeds[0].first, b.graph.nearest_neighbors(
    forward_kinematics(b.robot.chain, b.robot.seed_cycle[3]), 1)[0]);
}

TEST(SeedFromCycle, FirstEntryWinsAVertex)
{
  const auto& b = test::planar_position_roadmap();
  const auto s = b.roadmap.settings;
  const Configuration q = b.robot.seed_cycle[5];
  Configuration q2 = q;
  q2[4] += 1e-4;
  const auto seeds = seed_from_cycle(b.robot.chain, {q, q2}, b.graph, s);
  ASSERT_EQ(seeds.size(), 1u);
  const auto direct = project(b.robot.chain, b.graph.vertex(seeds[0].first), q,
      s.projection);
  EXPECT_EQ(seeds[0].second, direct.q);
}

TEST(SeedFromCycle, ErrorsAndNoSeeds)
{
  const auto& b = test::planar_position_roadmap();
  EXPECT_THROW(seed_from_cycle(b.robot.chain, {}, b.graph, b.roadmap.settings),
    std::invalid_argument);
}

TEST(SeedFromCycle, SweepSeedsAreMutuallyConsistent)
{
  for (const auto* b : {&test::planar_position_roadmap(),
      &test::planar_fixed_roadmap()})
  {
    const auto& c = b->robot.chain;
    const auto s = b->roadmap.settings;
    const auto seeds = seed_from_cycle(c, b->robot.seed_cycle, b->graph, s);
    EXPECT_GT(seeds.size(), 20u);
    std::size_t checked = 0;
    for (std::size_t i = 0; i < seeds.size(); ++i)
      for (std::size_t j = i + 1; j < seeds.size(); ++j)
      {
        if (!b->graph.has_edge(seeds[i].first, seeds[j].first))
          continue;
        ++checked;
        EXPECT_TRUE(is_continuous(c, b->graph.vertex(seeds[i].first),
          b->graph.vertex(seeds[j].first), seeds[i].second, seeds[j].second, s,
          b->graph.weights()));
      }
    EXPECT_GT(checked, 0u);
  }
}

//==============================================================================
class RoadmapProperties : public ::testing::TestWithParam<int>
{
protected:
  const test::Built& built() const
  {
    return GetParam() == 0 ? test::planar_position_roadmap()
           : test::planar_fixed_roadmap();
  }
};

TEST_P(RoadmapProperties, FullConnectivityFromCycle)
{
  const auto& b = built();
  EXPECT_EQ(b.graph.size(), b.roadmap.assigned_count());
  EXPECT_DOUBLE_EQ(connectivity(b.roadmap, b.graph), 1.0);
  EXPECT_TRUE(b.roadmap.report.failed.empty());
}

TEST_P(RoadmapProperties, AssignmentsSatisfyProjection)
{
  const auto& b = built();
  const auto& c = b.robot.chain;
  for (std::size_t v = 0; v < b.graph.size(); ++v)
  {
    const int i = static_cast<int>(v);
    ASSERT_TRUE(b.roadmap.assigned(i));
    EXPECT_LE(b.graph.distance(forward_kinematics(c, b.roadmap.config(i),
      b.graph.space().mode), b.graph.vertex(i)),
      b.roadmap.settings.projection.tolerance);
    EXPECT_TRUE(self_collision_free(c, b.roadmap.config(i)));
  }
}

TEST_P(RoadmapProperties, ResolvedEdgesRecheck)
{
  const auto& b = built();
  for (const auto& [x, y] : b.roadmap.resolved_edges)
  {
    ASSERT_TRUE(b.graph.has_edge(x, y));
    EXPECT_TRUE(is_continuous(b.robot.chain, b.graph.vertex(x),
      b.graph.vertex(y), b.roadmap.config(x), b.roadmap.config(y),
      b.roadmap.settings, b.graph.weights()));
  }
}

TEST_P(RoadmapProperties, BuildIsDeterministic)
{
  const auto& b = built();
  const test::Built again(load_robot_spec(test::robot_path(b.robot.name ==
    "planar5_facing_right" ? "planar5_fixed" : "planar5_position")));
  EXPECT_EQ(again.roadmap.assignments, b.roadmap.assignments);
  EXPECT_EQ(again.roadmap.resolved_edges, b.roadmap.resolved_edges);
  EXPECT_EQ(again.roadmap.report, b.roadmap.report);
}

INSTANTIATE_TEST_SUITE_P(PlanarModes, RoadmapProperties,
  ::testing::Values(0, 1));

TEST(SeedingAblation, MultiSeedDominatesSingleSeed)
{
  const auto robot = load_robot_spec(test::robot_path("planar5_position"));
  const auto s = GrrSettings::defaults_for(robot.chain, robot.space.mode);
  const TaskGraph g = build_grid(*robot.workspace, robot.resolution,
      robot.chain, robot.space);
  const double multi = connectivity(global_expansion(robot.chain, g,
      seed_from_cycle(robot.chain, robot.seed_cycle, g, s), s), g);
  EXPECT_EQ(multi, 1.0);
  for (std::uint64_t seed = 0; seed < 5; ++seed)
  {
    std::mt19937_64 rng(seed);
    const auto single = global_expansion(robot.chain, g,
        random_seed(robot.chain, g, s, rng), s);
    EXPECT_LE(connectivity(single, g), multi);
    // Injectivity: one configuration per vertex, each on its manifold.
    EXPECT_EQ(single.assignments.size(), g.size());
  }
}

TEST(Spatial, BuildsWithHighConnectivity)
{
  const test::Built b(load_robot_spec(test::robot_path("spatial7")));
  EXPECT_GE(connectivity(b.roadmap, b.graph), 0.95);
  EXPECT_EQ(b.graph.size(), b.roadmap.assigned_count());
  EXPECT_TRUE(b.graph.is_connected());
}
