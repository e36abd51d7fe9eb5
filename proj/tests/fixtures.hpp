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

#ifndef GRR__TEST__FIXTURES_HPP
#define GRR__TEST__FIXTURES_HPP

#include <memory>
#include <random>
#include <string>
#include <vector>

#include <grr/io.hpp>

namespace grr::test {

inline std::string robot_path(const std::string& name)
{
  return std::string(GRR_DATA_DIR) + "/robots/" + name + ".json";
}

/// Chain of unit (or given length) planar links with zero-radius capsules.
inline KinematicChain planar(std::size_t n, double length = 1.0)
{
  const std::vector<double> lengths(n, length);
  return KinematicChain::planar_links(lengths);
}

inline TaskSpace position_space(int dim = 2)
{
  return TaskSpace{TaskMode::Position, dim, std::nullopt};
}

inline TaskSpace facing_right()
{
  return TaskSpace{TaskMode::FixedOrientation, 2, planar_orientation(0.0)};
}

inline Configuration random_config(const KinematicChain& chain,
  std::mt19937_64& rng)
{
  Configuration q(static_cast<Eigen::Index>(chain.dof()));
  for (std::size_t i = 0; i < chain.dof(); ++i)
  {
    const auto& j = chain.joints()[i];
    std::uniform_real_distribution<double> u(
      j.continuous ? -std::numbers::pi : j.lower,
      j.continuous ? std::numbers::pi : j.upper);
    q[static_cast<Eigen::Index>(i)] = u(rng);
  }
  return chain.normalize(q);
}

/// A robot spec with its built roadmap and a query over it. Never moves, so
/// the query's references stay valid.
struct Built
{
  RobotSpec robot;
  TaskGraph graph;
  ResolutionRoadmap roadmap;
  std::unique_ptr<RoadmapQuery> query;

  Built(RobotSpec spec, bool single_seed = false, std::uint64_t seed = 0)
  : robot(std::move(spec))
  {
    const auto settings = GrrSettings::defaults_for(robot.chain,
        robot.space.mode);
    const auto g = build_grid(*robot.workspace, robot.resolution, robot.chain,
        robot.space);
    SeedList seeds;
    if (single_seed)
    {
      std::mt19937_64 rng(seed);
      seeds = random_seed(robot.chain, g, settings, rng);
    }
    else
      seeds = seed_from_cycle(robot.chain, robot.seed_cycle, g, settings);
    auto b = build_roadmap(robot.chain, g, seeds, settings);
    graph = std::move(b.graph);
    roadmap = std::move(b.roadmap);
    query = std::make_unique<RoadmapQuery>(robot.chain, graph, roadmap);
  }

  Built(const Built&) = delete;
  Built& operator=(const Built&) = delete;
};

inline const Built& planar_position_roadmap()
{
  static const Built b(load_robot_spec(robot_path("planar5_position")));
  return b;
}

inline const Built& planar_fixed_roadmap()
{
  static const Built b(load_robot_spec(robot_path("planar5_fixed")));
  return b;
}

} // namespace grr::test

#endif // GRR__TEST__FIXTURES_HPP
