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

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include <grr/io.hpp>
#include <grr/teleop_service.hpp>

namespace {

std::vector<double> parse_numbers(const std::string& text)
{
  std::vector<double> out;
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ','))
  {
    std::size_t used = 0;
    double v = 0.0;
    try
    {
      v = std::stod(item, &used);
    }
    catch (const std::exception&)
    {
      used = 0;
    }
    if (used == 0 || used != item.size())
      throw std::invalid_argument("'" + item + "' is not a number");
    out.push_back(v);
  }
  if (out.empty())
    throw std::invalid_argument("expected a comma separated list of numbers");
  return out;
}

Eigen::VectorXd to_vector(const std::vector<double>& v)
{
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
           static_cast<Eigen::Index>(v.size()));
}

/// "x0,y0:x1,y1"
grr::Box parse_box(const std::string& text)
{
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("workspace must look like lo0,lo1:hi0,hi1");
  grr::Box box{to_vector(parse_numbers(text.substr(0, colon))),
    to_vector(parse_numbers(text.substr(colon + 1)))};
  if (box.lo.size() != box.hi.size())
    throw std::invalid_argument("workspace corners differ in dimension");
  if (!(box.lo.array() < box.hi.array()).all())
    throw std::invalid_argument("workspace needs lo < hi");
  return box;
}

std::vector<int> parse_resolution(const std::string& text, int dim)
{
  std::vector<int> out;
  for (double v : parse_numbers(text))
  {
    if (v < 1 || v != static_cast<int>(v))
      throw std::invalid_argument("resolution entries must be positive integers");
    out.push_back(static_cast<int>(v));
  }
  if (out.size() == 1)
    out.assign(static_cast<std::size_t>(dim), out.front());
  if (static_cast<int>(out.size()) != dim)
    throw std::invalid_argument("resolution needs " + std::to_string(dim)
      + " entries");
  return out;
}

template<class T>
std::vector<T> parse_list(const std::string& text, T (*convert)(const std::string&))
{
  std::vector<T> out;
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ','))
    out.push_back(convert(item));
  return out;
}

struct Loaded
{
  grr::RobotSpec robot;
  grr::StoredRoadmap stored;
};

//==============================================================================
int run_build(const std::string& robot_path, const std::string& workspace,
  const std::string& resolution, std::optional<int> k, std::optional<double> c,
  std::optional<double> epsilon, bool single_seed, std::uint64_t seed,
  const std::string& out)
{
  const auto robot = grr::load_robot_spec(robot_path);
  const int dim = robot.space.translation_dim;

  grr::Box box;
  if (!workspace.empty())
    box = parse_box(workspace);
  else if (robot.workspace)
    box = *robot.workspace;
  else
    throw std::invalid_argument("no --workspace given and none in the robot spec");
  if (box.dim() != dim)
    throw std::invalid_argument("workspace dimension does not match the task space");

  std::vector<int> res = robot.resolution;
  if (!resolution.empty())
    res = parse_resolution(resolution, dim);
  if (res.empty())
    throw std::invalid_argument("no --resolution given and none in the robot spec");

  auto settings = grr::GrrSettings::defaults_for(robot.chain, robot.space.mode);
  if (k)
    settings.k = *k;
  if (c)
    settings.continuity.c = *c;
  if (epsilon)
    settings.continuity.epsilon = *epsilon;
  settings.validate();

  const auto graph = grr::build_grid(box, res, robot.chain, robot.space);

  grr::SeedList seeds;
  if (single_seed)
  {
    std::mt19937_64 rng(seed);
    seeds = grr::random_seed(robot.chain, graph, settings, rng);
  }
  else
  {
    if (robot.seed_cycle.empty())
      throw std::invalid_argument("robot spec has no seed_cycle; use --single-seed");
    seeds = grr::seed_from_cycle(robot.chain, robot.seed_cycle, graph, settings);
  }

  const auto built = grr::build_roadmap(robot.chain, graph, seeds, settings);
  grr::save_roadmap(out, robot, built.graph, built.roadmap);

  const double conn = grr::connectivity(built.roadmap, built.graph);
  std::string smooth = "undefined";
  try
  {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f",
      grr::smoothness(built.roadmap, built.graph, robot.chain));
    smooth = buf;
  }
  catch (const grr::UndefinedMetric&)
  {
  }
  std::printf("%-24s %10s %16s %12s %14s\n", "robot", "vertices",
    "connectivity(%)", "smoothness", "build_time(s)");
  std::printf("%-24s %10zu %16.2f %12s %14.3f\n", robot.name.c_str(),
    built.graph.size(), 100.0 * conn, smooth.c_str(),
    built.roadmap.report.wall_seconds);
  std::printf("seeds %zu, pruned %zu, wrote %s\n",
    built.roadmap.report.seeds.size(), built.roadmap.report.pruned_vertices,
    out.c_str());
  return 0;
}

Loaded load(const std::string& robot_path, const std::string& roadmap_path)
{
  auto robot = grr::load_robot_spec(robot_path);
  auto stored = grr::load_roadmap(roadmap_path, robot);
  return Loaded{std::move(robot), std::move(stored)};
}

int run_eval(const std::string& robot_path, const std::string& roadmap_path,
  std::size_t sample, std::uint64_t seed)
{
  const auto l = load(robot_path, roadmap_path);
  const auto& g = l.stored.graph;
  const auto& r = l.stored.roadmap;

  const double conn = grr::connectivity(r, g);
  std::printf("vertices       %zu (assigned %zu)\n", g.size(), r.assigned_count());
  std::printf("edges          %zu (resolved %zu)\n", g.edges().size(),
    r.resolved_edges.size());
  std::printf("connectivity   %.2f%%\n", 100.0 * conn);
  try
  {
    std::printf("smoothness     %.4f\n", grr::smoothness(r, g, l.robot.chain));
  }
  catch (const grr::UndefinedMetric&)
  {
    std::printf("smoothness     undefined\n");
  }

  std::vector<grr::Edge> edges = r.resolved_edges;
  std::mt19937_64 rng(seed);
  std::shuffle(edges.begin(), edges.end(), rng);
  if (edges.size() > sample)
    edges.resize(sample);
  std::size_t failed = 0;
  for (const auto& [a, b] : edges)
  {
    if (!grr::is_continuous(l.robot.chain, g.vertex(a), g.vertex(b),
      r.config(a), r.config(b), r.settings, g.weights()))
    {
      ++failed;
    }
  }
  std::printf("re-verified    %zu edges, %zu failed\n", edges.size(), failed);
  return failed == 0 ? 0 : 1;
}

int run_bench(const std::string& robot_path, const std::string& roadmap_path,
  const std::string& tasks, std::size_t trials, const std::string& solvers,
  std::uint64_t seed, std::size_t threads, const std::string& out)
{
  const auto l = load(robot_path, roadmap_path);
  const grr::RoadmapQuery query(l.robot.chain, l.stored.graph, l.stored.roadmap);

  grr::BenchConfig config;
  config.tasks = parse_list<grr::TaskKind>(tasks,
      [](const std::string& s) { return grr::task_kind_from_string(s); });
  config.solvers = parse_list<grr::SolverKind>(solvers,
      [](const std::string& s) { return grr::solver_kind_from_string(s); });
  config.trials = trials;
  config.seed = seed;
  config.threads = threads;

  const double pitch = l.stored.graph.grid() ? l.stored.graph.grid()->pitch()
    : 0.1;
  const auto report = grr::run_benchmark(query, config,
      grr::TeleopParams::for_graph(l.stored.graph),
      grr::SuccessCriteria::for_pitch(pitch));

  std::ofstream records(out, std::ios::trunc);
  if (!records)
    throw std::runtime_error("cannot write '" + out + "'");
  grr::write_bench_records(records, report);
  std::ofstream summary(out + ".summary.json", std::ios::trunc);
  summary << grr::summary_json(report).dump(2) << "\n";

  std::printf("%s", grr::summary_table(report).c_str());
  std::printf("wrote %s and %s.summary.json\n", out.c_str(), out.c_str());
  return 0;
}

int run_resolve(const std::string& robot_path, const std::string& roadmap_path,
  const std::string& point)
{
  const auto l = load(robot_path, roadmap_path);
  const grr::RoadmapQuery query(l.robot.chain, l.stored.graph, l.stored.roadmap);
  const auto t = to_vector(parse_numbers(point));
  if (t.size() != l.stored.graph.space().translation_dim)
    throw std::invalid_argument("point has the wrong dimension");
  const auto r = query.resolve(l.stored.graph.space().point(t));
  if (!r.ok())
  {
    std::fprintf(stderr, "resolve failed: %s\n", grr::to_string(r.status));
    return 2;
  }
  grr::Json j{{"configuration", grr::io_detail::vec(r.q)},
    {"residual", r.residual}, {"support", r.support}};
  std::printf("%s\n", j.dump().c_str());
  return 0;
}

boost::asio::io_context* serving = nullptr;

int run_serve(const std::string& robot_path, const std::string& roadmap_path,
  unsigned short port, const std::string& address)
{
  const auto l = load(robot_path, roadmap_path);
  const grr::RoadmapQuery query(l.robot.chain, l.stored.graph, l.stored.roadmap);
  boost::asio::io_context ioc(1);
  grr::TeleopServer server(ioc, l.robot, query,
    grr::TeleopParams::for_graph(l.stored.graph), port, address);
  std::printf("listening on ws://%s:%u\n", address.c_str(), server.port());
  std::fflush(stdout);

  serving = &ioc;
  std::signal(SIGINT, [](int) { if (serving) serving->stop(); });
  std::signal(SIGTERM, [](int) { if (serving) serving->stop(); });
  ioc.run();
  serving = nullptr;
  return 0;
}

} // namespace

//==============================================================================
int main(int argc, char** argv)
{
  CLI::App app{"Global redundancy resolution roadmaps"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 1;
  app.add_option("--seed", seed, "Seed for every stochastic step")
    ->capture_default_str();

  std::string robot_path;
  std::string roadmap_path;

  // build
  auto* build = app.add_subcommand("build", "Build a roadmap");
  std::string workspace, resolution, out;
  std::optional<int> k;
  std::optional<double> c, epsilon;
  bool single_seed = false;
  build->add_option("robot", robot_path, "Robot spec (JSON)")->required()
    ->check(CLI::ExistingFile);
  build->add_option("--workspace", workspace, "Grid box lo0,lo1:hi0,hi1");
  build->add_option("--resolution", resolution, "Cells per axis n[,n...]");
  build->add_option("--k", k, "Neighborhood size");
  build->add_option("--c", c, "Continuity deviation factor");
  build->add_option("--epsilon", epsilon, "Continuity resolution");
  build->add_flag("--single-seed", single_seed, "One random seed instead of the "
    "robot's seed cycle");
  build->add_option("-o,--output", out, "Roadmap file to write")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "Recompute roadmap metrics");
  std::size_t sample = 200;
  eval->add_option("roadmap", roadmap_path)->required()->check(CLI::ExistingFile);
  eval->add_option("--robot", robot_path, "Robot spec (JSON)")->required()
    ->check(CLI::ExistingFile);
  eval->add_option("--sample", sample, "Resolved edges to re-verify")
    ->capture_default_str();

  // bench
  auto* bench = app.add_subcommand("bench", "Run the teleoperation benchmark");
  std::string tasks = "random_line,self_crossing_line,random_circle,partial_circle";
  std::string solvers = "expansion-grr,newton-ik";
  std::size_t trials = 20;
  std::size_t threads = 1;
  bench->add_option("roadmap", roadmap_path)->required()->check(CLI::ExistingFile);
  bench->add_option("--robot", robot_path, "Robot spec (JSON)")->required()
    ->check(CLI::ExistingFile);
  bench->add_option("--tasks", tasks)->capture_default_str();
  bench->add_option("--trials", trials)->capture_default_str();
  bench->add_option("--solvers", solvers)->capture_default_str();
  bench->add_option("--threads", threads)->capture_default_str();
  bench->add_option("-o,--output", out, "Line-delimited trial records")
    ->required();

  // serve
  auto* serve = app.add_subcommand("serve", "Run the teleoperation service");
  unsigned short port = 8765;
  std::string address = "127.0.0.1";
  serve->add_option("roadmap", roadmap_path)->required()->check(CLI::ExistingFile);
  serve->add_option("--robot", robot_path, "Robot spec (JSON)")->required()
    ->check(CLI::ExistingFile);
  serve->add_option("--port", port)->capture_default_str();
  serve->add_option("--address", address)->capture_default_str();

  // resolve
  auto* resolve = app.add_subcommand("resolve", "Configuration for one point");
  std::string point;
  resolve->add_option("roadmap", roadmap_path)->required()
    ->check(CLI::ExistingFile);
  resolve->add_option("--robot", robot_path, "Robot spec (JSON)")->required()
    ->check(CLI::ExistingFile);
  resolve->add_option("--point", point, "Task point x,y[,z]")->required();

  CLI11_PARSE(app, argc, argv);

  try
  {
    if (*build)
      return run_build(robot_path, workspace, resolution, k, c, epsilon,
               single_seed, seed, out);
    if (*eval)
      return run_eval(robot_path, roadmap_path, sample, seed);
    if (*bench)
      return run_bench(robot_path, roadmap_path, tasks, trials, solvers, seed,
               threads, out);
    if (*serve)
      return run_serve(robot_path, roadmap_path, port, address);
    if (*resolve)
      return run_resolve(robot_path, roadmap_path, point);
  }
  catch (const std::exception& e)
  {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
