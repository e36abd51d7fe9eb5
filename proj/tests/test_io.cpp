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

#include <functional>
#include <sstream>

#include "fixtures.hpp"

using namespace grr;

namespace {

std::string stored(const test::Built& b)
{
  return roadmap_to_string(b.robot, b.graph, b.roadmap);
}

std::string error_of(const std::function<void()>& f)
{
  try
  {
    f();
  }
  catch (const std::exception& e)
  {
    return e.what();
  }
  return "";
}

bool contains(const std::string& s, const std::string& needle)
{
  return s.find(needle) != std::string::npos;
}

Json doc_of(const test::Built& b)
{
  return Json::parse(stored(b));
}

} // namespace

//==============================================================================
class RoundTrip : public ::testing::TestWithParam<int>
{
protected:
  const test::Built& built() const
  {
    return GetParam() == 0 ? test::planar_position_roadmap()
           : test::planar_fixed_roadmap();
  }
};

TEST_P(RoundTrip, SaveLoadSaveIsIdentical)
{
  const auto& b = built();
  const std::string text = stored(b);
  const auto loaded = parse_roadmap(text, b.robot);
  EXPECT_EQ(loaded.roadmap.assignments, b.roadmap.assignments);
  EXPECT_EQ(loaded.roadmap.resolved_edges, b.roadmap.resolved_edges);
  EXPECT_EQ(loaded.roadmap.report, b.roadmap.report);
  EXPECT_EQ(loaded.graph.edges(), b.graph.edges());
  EXPECT_EQ(loaded.graph.fingerprint(), b.graph.fingerprint());
  EXPECT_EQ(roadmap_to_string(b.robot, loaded.graph, loaded.roadmap), text);
}

TEST_P(RoundTrip, LoadedRoadmapAnswersQueriesIdentically)
{
  const auto& b = built();
  const auto loaded = parse_roadmap(stored(b), b.robot);
  const RoadmapQuery q(b.robot.chain, loaded.graph, loaded.roadmap);
  for (int v : {5, 50, 500})
  {
    const auto p = b.graph.vertex(v);
    EXPECT_EQ(q.resolve(p).q, b.query->resolve(p).q);
  }
}

TEST_P(RoundTrip, FileRoundTrip)
{
  const auto& b = built();
  const std::string path = ::testing::TempDir() + "roadmap_"
    + std::to_string(GetParam()) + ".json";
  save_roadmap(path, b.robot, b.graph, b.roadmap);
  const auto loaded = load_roadmap(path, b.robot);
  EXPECT_EQ(loaded.roadmap.assignments, b.roadmap.assignments);
}

INSTANTIATE_TEST_SUITE_P(PlanarModes, RoundTrip, ::testing::Values(0, 1));

TEST(RoadmapFile, BuildTimeIsNotStored)
{
  EXPECT_FALSE(contains(stored(test::planar_position_roadmap()),
    "wall_seconds"));
}

//==============================================================================
TEST(RoadmapFile, TruncatedNamesMissingSections)
{
  const auto& b = test::planar_position_roadmap();
  const std::string text = stored(b);
  const auto cut = text.find("\"edges\"");
  ASSERT_NE(cut, std::string::npos);
  const std::string msg = error_of([&] {
      parse_roadmap(text.substr(0, cut + 40), b.robot, "cut.json");
    });
  EXPECT_TRUE(contains(msg, "cut.json")) << msg;
  EXPECT_TRUE(contains(msg, "'resolved_edges'")) << msg;
  EXPECT_TRUE(contains(msg, "'build_report'")) << msg;
  EXPECT_FALSE(contains(msg, "'vertices'")) << msg;
}

TEST(RoadmapFile, MissingSectionIsReported)
{
  const auto& b = test::planar_position_roadmap();
  auto doc = doc_of(b);
  doc.erase("resolved_edges");
  const std::string msg = error_of([&] {
      parse_roadmap(doc.dump(), b.robot);
    });
  EXPECT_TRUE(contains(msg, "missing section 'resolved_edges'")) << msg;
}

TEST(RoadmapFile, VersionMismatch)
{
  const auto& b = test::planar_position_roadmap();
  auto doc = doc_of(b);
  doc["version"] = 2;
  const std::string msg = error_of([&] { parse_roadmap(doc.dump(), b.robot); });
  EXPECT_TRUE(contains(msg, "unsupported version 2")) << msg;
}

TEST(RoadmapFile, RobotHashMismatch)
{
  const auto& b = test::planar_position_roadmap();
  const auto other = load_robot_spec(test::robot_path("planar5_fixed"));
  EXPECT_NE(robot_hash(b.robot.chain, b.robot.space),
    robot_hash(other.chain, other.space));
  const std::string msg = error_of([&] {
      parse_roadmap(stored(b), other);
    });
  EXPECT_TRUE(contains(msg, "different robot")) << msg;
}

TEST(RoadmapFile, CorruptedContentIsRejected)
{
  const auto& b = test::planar_position_roadmap();
  {
    auto doc = doc_of(b);
    doc["resolved_edges"].push_back(Json::array({0, 999999}));
    EXPECT_THROW(parse_roadmap(doc.dump(), b.robot), FormatError);
  }
  {
    auto doc = doc_of(b);
    doc["vertices"][0][0] = 0.123;
    const std::string msg = error_of([&] {
        parse_roadmap(doc.dump(), b.robot);
      });
    EXPECT_TRUE(contains(msg, "task_graph_fingerprint")) << msg;
  }
  {
    auto doc = doc_of(b);
    doc["configurations"][3] = "elbow";
    EXPECT_THROW(parse_roadmap(doc.dump(), b.robot), FormatError);
  }
  EXPECT_THROW(parse_roadmap("[]", b.robot), FormatError);
}

//==============================================================================
TEST(RobotSpec, LoadsShippedRobots)
{
  const auto p = load_robot_spec(test::robot_path("planar5_position"));
  EXPECT_EQ(p.chain.dof(), 5u);
  EXPECT_TRUE(p.chain.planar());
  EXPECT_EQ(p.space.mode, TaskMode::Position);
  EXPECT_EQ(p.seed_cycle.size(), 64u);
  ASSERT_TRUE(p.workspace);

  const auto f = load_robot_spec(test::robot_path("planar5_fixed"));
  EXPECT_EQ(f.space.mode, TaskMode::FixedOrientation);
  ASSERT_TRUE(f.space.orientation);

  const auto s = load_robot_spec(test::robot_path("spatial7"));
  EXPECT_EQ(s.chain.dof(), 7u);
  EXPECT_FALSE(s.chain.planar());
  EXPECT_GT(s.chain.capsules().size(), 0u);
}

TEST(RobotSpec, SweepCycleIsClosedAndOnOnePath)
{
  const auto p = load_robot_spec(test::robot_path("planar5_position"));
  for (std::size_t i = 0; i < p.seed_cycle.size(); ++i)
  {
    const auto& a = p.seed_cycle[i];
    const auto& b = p.seed_cycle[(i + 1) % p.seed_cycle.size()];
    EXPECT_NEAR(config_distance(p.chain, a, b), 2 * std::numbers::pi / 64,
      1e-9);
  }
}

TEST(RobotSpec, ValidationErrors)
{
  const auto parse = [](const std::string& text) {
    return error_of([&] { parse_robot_spec(text, "robot.json"); });
  };
  EXPECT_TRUE(contains(parse(R"({"name": "x", "joints": [], "task":
    {"mode": "position"}})"), "at least one joint"));
  EXPECT_TRUE(contains(parse(R"({"name": "x", "joints": [{"axis": [0, 0, 1],
    "offset": [1, 0, 0], "continuous": true}], "task": {"mode": "wobble"}})"),
    "wobble"));
  // Two planar joints cannot be redundant for a 2D position task.
  EXPECT_FALSE(parse(R"({"name": "x", "planar": true, "joints": [
    {"axis": [0, 0, 1], "offset": [1, 0, 0], "continuous": true},
    {"axis": [0, 0, 1], "offset": [1, 0, 0], "continuous": true}],
    "task": {"mode": "position"}})").empty());
  EXPECT_TRUE(contains(parse(R"({"name": "x", "joints": [)"), "robot.json"));
  EXPECT_TRUE(contains(parse(R"({"name": "x", "joints": [{"axis": [0, 0, 1],
    "offset": [1, 0]}], "task": {"mode": "position"}})"), "joints"));
}

//==============================================================================
TEST(BenchRecords, FieldNames)
{
  TrialResult t;
  t.kind = TaskKind::PartialCircle;
  t.solver = SolverKind::Newton;
  t.rng_seed = 42;
  t.failure_reason = "stalled";
  t.deviation = 0.5;
  const Json j = trial_json(t);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items())
    keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"task_kind", "solver", "rng_seed",
    "success", "failure_reason", "deviation", "smoothness", "wall_ms"}));
  EXPECT_EQ(j["task_kind"], "partial_circle");
  EXPECT_EQ(j["solver"], "newton-ik");
  EXPECT_EQ(j["failure_reason"], "stalled");
  EXPECT_TRUE(j["smoothness"].is_null());

  BenchReport report;
  report.trials = {t, t};
  std::ostringstream out;
  write_bench_records(out, report);
  std::istringstream lines(out.str());
  std::string line;
  int n = 0;
  while (std::getline(lines, line))
  {
    EXPECT_EQ(Json::parse(line)["rng_seed"], 42);
    ++n;
  }
  EXPECT_EQ(n, 2);
}
