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

#ifndef GRR__IO_HPP
#define GRR__IO_HPP

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "bench.hpp"
#include "expansion.hpp"

namespace grr {

using Json = nlohmann::ordered_json;

/// Malformed, truncated or inconsistent input file.
class FormatError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* roadmap_format = "expansion-grr-roadmap";
inline constexpr int roadmap_version = 1;

//==============================================================================
namespace io_detail {

/// Field accessor that names the offending field on failure.
class Reader
{
public:

  Reader(const Json& j, std::string path)
  : _j(j), _path(std::move(path))
  {
  }

  const Json& json() const { return _j; }
  const std::string& path() const { return _path; }

  [[noreturn]] void fail(const std::string& what) const
  {
    throw FormatError(_path + ": " + what);
  }

  bool has(const std::string& key) const
  {
    return _j.is_object() && _j.contains(key) && !_j.at(key).is_null();
  }

  Reader at(const std::string& key) const
  {
    if (!_j.is_object())
      fail("expected an object");
    if (!_j.contains(key))
      fail("missing field '" + key + "'");
    return Reader(_j.at(key), _path + "." + key);
  }

  Reader at(std::size_t i) const
  {
    return Reader(_j.at(i), _path + "[" + std::to_string(i) + "]");
  }

  std::size_t size() const
  {
    if (!_j.is_array())
      fail("expected an array");
    return _j.size();
  }

  double number() const
  {
    if (!_j.is_number())
      fail("expected a number");
    return _j.get<double>();
  }

  std::int64_t integer() const
  {
    if (!_j.is_number_integer())
      fail("expected an integer");
    return _j.get<std::int64_t>();
  }

  bool boolean() const
  {
    if (!_j.is_boolean())
      fail("expected true or false");
    return _j.get<bool>();
  }

  std::string string() const
  {
    if (!_j.is_string())
      fail("expected a string");
    return _j.get<std::string>();
  }

  Eigen::VectorXd vector(std::optional<std::size_t> n = std::nullopt) const
  {
    const std::size_t m = size();
    if (n && m != *n)
      fail("expected " + std::to_string(*n) + " numbers, got "
        + std::to_string(m));
    Eigen::VectorXd v(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i)
      v[static_cast<Eigen::Index>(i)] = at(i).number();
    return v;
  }

private:
  const Json& _j;
  std::string _path;
};

inline Json vec(const Eigen::VectorXd& v)
{
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    a.push_back(v[i]);
  return a;
}

inline Json quat(const Eigen::Quaterniond& q)
{
  return Json::array({q.w(), q.x(), q.y(), q.z()});
}

inline Eigen::Quaterniond read_quat(const Reader& r)
{
  const Eigen::VectorXd v = r.vector(4);
  Eigen::Quaterniond q(v[0], v[1], v[2], v[3]);
  if (std::abs(q.norm() - 1.0) > 1e-9)
    r.fail("quaternion must have unit norm");
  return q;
}

inline Json pose(const Eigen::Isometry3d& T)
{
  return Json{
    {"translation", vec(T.translation())},
    {"rotation", quat(Eigen::Quaterniond(T.linear()))}};
}

inline Eigen::Isometry3d read_pose(const Reader& r)
{
  Eigen::Isometry3d T = Eigen::Isometry3d::Identity();
  if (r.has("translation"))
    T.translation() = r.at("translation").vector(3);
  if (r.has("rotation"))
    T.linear() = read_quat(r.at("rotation")).toRotationMatrix();
  return T;
}

inline std::uint64_t fnv1a(const std::string& s)
{
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s)
  {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex(std::uint64_t h)
{
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

/// Parses text, turning syntax errors into a FormatError that names the
/// line, the top-level section being read and the sections never reached.
inline Json parse_sections(const std::string& text, const std::string& what,
  const std::vector<std::string>& sections)
{
  std::vector<std::string> seen;
  Json::parser_callback_t cb =
    [&](int depth, Json::parse_event_t event, Json& parsed) {
      if (depth == 1 && event == Json::parse_event_t::key)
        seen.push_back(parsed.get<std::string>());
      return true;
    };
  try
  {
    return Json::parse(text, cb);
  }
  catch (const Json::parse_error& e)
  {
    std::string msg = what + ": " + e.what();
    if (!seen.empty())
      msg += " (in section '" + seen.back() + "')";
    std::vector<std::string> missing;
    for (const auto& s : sections)
    {
      if (std::find(seen.begin(), seen.end(), s) == seen.end())
        missing.push_back(s);
    }
    if (!missing.empty())
    {
      msg += "; missing section";
      msg += missing.size() > 1 ? "s " : " ";
      for (std::size_t i = 0; i < missing.size(); ++i)
        msg += (i ? ", '" : "'") + missing[i] + "'";
    }
    throw FormatError(msg);
  }
}

inline std::string read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_file(const std::string& path, const std::string& text)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out)
    throw std::runtime_error("failed writing '" + path + "'");
}

} // namespace io_detail

//==============================================================================
/// A robot, its task space and optional build inputs.
struct RobotSpec
{
  std::string name;
  KinematicChain chain;
  TaskSpace space;
  std::optional<Box> workspace;
  std::vector<int> resolution;
  std::vector<Configuration> seed_cycle;
};

inline Json task_space_json(const TaskSpace& space)
{
  Json j{{"mode", to_string(space.mode)},
    {"translation_dim", space.translation_dim}};
  j["orientation"] = space.orientation
    ? io_detail::quat(*space.orientation) : Json(nullptr);
  return j;
}

inline TaskMode task_mode_from_string(const std::string& s)
{
  if (s == to_string(TaskMode::Position))
    return TaskMode::Position;
  if (s == to_string(TaskMode::FixedOrientation))
    return TaskMode::FixedOrientation;
  throw std::invalid_argument("unknown task mode '" + s + "'");
}

/// Canonical description of the chain and task space. Everything a roadmap
/// depends on, and nothing else.
inline Json robot_json(const KinematicChain& chain, const TaskSpace& space)
{
  Json joints = Json::array();
  for (const auto& j : chain.joints())
  {
    Json o{{"axis", io_detail::vec(j.axis)}, {"offset", io_detail::vec(j.offset)}};
    if (j.continuous)
      o["continuous"] = true;
    else
      o["limits"] = Json::array({j.lower, j.upper});
    joints.push_back(std::move(o));
  }
  Json capsules = Json::array();
  for (const auto& c : chain.capsules())
  {
    capsules.push_back(Json{{"body", c.body}, {"a", io_detail::vec(c.a)},
        {"b", io_detail::vec(c.b)}, {"radius", c.radius}});
  }
  return Json{
    {"planar", chain.planar()},
    {"base", io_detail::pose(chain.base())},
    {"joints", std::move(joints)},
    {"capsules", std::move(capsules)},
    {"end_effector", io_detail::pose(chain.end_effector())},
    {"task", task_space_json(space)}};
}

inline std::string robot_hash(const KinematicChain& chain,
  const TaskSpace& space)
{
  return io_detail::hex(io_detail::fnv1a(robot_json(chain, space).dump()));
}

/// Seed cycle given as a sweep: q(s) = base + s * direction for s over a
/// full turn, with `samples` entries.
inline std::vector<Configuration> sweep_cycle(const KinematicChain& chain,
  const Configuration& base, const Eigen::VectorXd& direction, int samples)
{
  chain.check_size(base);
  if (direction.size() != base.size())
    throw std::invalid_argument("sweep direction has the wrong size");
  if (samples < 1)
    throw std::invalid_argument("sweep needs at least one sample");
  std::vector<Configuration> out;
  for (int i = 0; i < samples; ++i)
  {
    const double s = -std::numbers::pi
      + 2.0 * std::numbers::pi * static_cast<double>(i) / samples;
    out.push_back(chain.normalize(base + s * direction));
  }
  return out;
}

inline RobotSpec parse_robot_spec(const std::string& text,
  const std::string& origin = "robot spec")
{
  using io_detail::Reader;
  const Json doc = io_detail::parse_sections(text, origin,
      {"name", "joints", "task"});
  const Reader r(doc, origin);

  std::vector<RevoluteJoint> joints;
  const Reader jr = r.at("joints");
  if (jr.size() == 0)
    jr.fail("a robot needs at least one joint");
  for (std::size_t i = 0; i < jr.size(); ++i)
  {
    const Reader j = jr.at(i);
    RevoluteJoint joint;
    joint.axis = j.at("axis").vector(3);
    if (j.has("offset"))
      joint.offset = j.at("offset").vector(3);
    const bool limited = j.has("limits");
    joint.continuous = j.has("continuous") ? j.at("continuous").boolean()
      : !limited;
    if (!joint.continuous)
    {
      if (!limited)
        j.fail("a joint that is not continuous needs 'limits'");
      const Eigen::VectorXd l = j.at("limits").vector(2);
      joint.lower = l[0];
      joint.upper = l[1];
    }
    joints.push_back(joint);
  }

  std::vector<Capsule> capsules;
  if (r.has("capsules"))
  {
    const Reader cr = r.at("capsules");
    for (std::size_t i = 0; i < cr.size(); ++i)
    {
      const Reader c = cr.at(i);
      capsules.push_back(Capsule{static_cast<int>(c.at("body").integer()),
          c.at("a").vector(3), c.at("b").vector(3), c.at("radius").number()});
    }
  }

  const bool planar = r.has("planar") && r.at("planar").boolean();
  const Eigen::Isometry3d base = r.has("base")
    ? io_detail::read_pose(r.at("base")) : Eigen::Isometry3d::Identity();
  const Eigen::Isometry3d ee = r.has("end_effector")
    ? io_detail::read_pose(r.at("end_effector")) : Eigen::Isometry3d::Identity();

  std::optional<KinematicChain> chain;
  try
  {
    chain.emplace(std::move(joints), std::move(capsules), base, ee, planar);
  }
  catch (const std::invalid_argument& e)
  {
    r.fail(e.what());
  }

  TaskSpace space;
  const Reader tr = r.at("task");
  try
  {
    space.mode = task_mode_from_string(tr.at("mode").string());
  }
  catch (const std::invalid_argument& e)
  {
    tr.at("mode").fail(e.what());
  }
  space.translation_dim = chain->translation_dim();
  if (space.mode == TaskMode::FixedOrientation)
  {
    if (tr.has("orientation"))
      space.orientation = io_detail::read_quat(tr.at("orientation"));
    else if (tr.has("planar_angle"))
      space.orientation = planar_orientation(tr.at("planar_angle").number());
    else
      tr.fail("fixed-orientation mode needs 'orientation' or 'planar_angle'");
  }
  if (static_cast<std::size_t>(chain->task_dim(space.mode)) >= chain->dof())
    r.fail("the chain is not redundant for this task space");

  RobotSpec spec{r.at("name").string(), std::move(*chain), space,
    std::nullopt, {}, {}};
  const auto dim = static_cast<std::size_t>(space.translation_dim);

  if (r.has("workspace"))
  {
    const Reader w = r.at("workspace");
    Box box{w.at("lo").vector(dim), w.at("hi").vector(dim)};
    if (!(box.lo.array() < box.hi.array()).all())
      w.fail("workspace needs lo < hi");
    spec.workspace = box;
  }
  if (r.has("resolution"))
  {
    const Reader res = r.at("resolution");
    if (res.size() != dim)
      res.fail("expected " + std::to_string(dim) + " cell counts");
    for (std::size_t i = 0; i < dim; ++i)
    {
      const auto n = res.at(i).integer();
      if (n < 1)
        res.at(i).fail("cell counts must be positive");
      spec.resolution.push_back(static_cast<int>(n));
    }
  }

  if (r.has("seed_cycle"))
  {
    const Reader sc = r.at("seed_cycle");
    const auto dof = spec.chain.dof();
    if (sc.json().is_object())
    {
      const Configuration base_q = sc.at("base").vector(dof);
      const Eigen::VectorXd dir = sc.at("direction").vector(dof);
      const int samples = sc.has("samples")
        ? static_cast<int>(sc.at("samples").integer()) : 64;
      if (samples < 1)
        sc.at("samples").fail("must be positive");
      spec.seed_cycle = sweep_cycle(spec.chain, base_q, dir, samples);
    }
    else
    {
      for (std::size_t i = 0; i < sc.size(); ++i)
        spec.seed_cycle.push_back(spec.chain.normalize(sc.at(i).vector(dof)));
    }
  }
  return spec;
}

inline RobotSpec load_robot_spec(const std::string& path)
{
  return parse_robot_spec(io_detail::read_file(path), path);
}

//==============================================================================
/// Task graph and roadmap as stored together on disk.
struct StoredRoadmap
{
  TaskGraph graph;
  ResolutionRoadmap roadmap;
};

inline Json settings_json(const GrrSettings& s)
{
  return Json{
    {"projection", {
      {"max_iterations", s.projection.max_iterations},
      {"tolerance", s.projection.tolerance},
      {"damping", s.projection.damping},
      {"step_clamp", s.projection.step_clamp}}},
    {"continuity", {
      {"c", s.continuity.c},
      {"epsilon", s.continuity.epsilon},
      {"depth_limit", s.continuity.depth_limit}}},
    {"k", s.k}};
}

inline Json report_json(const BuildReport& r)
{
  return Json{
    {"seeds", r.seeds},
    {"resolved_first_pass", r.resolved_first_pass},
    {"failed_first_pass", r.failed_first_pass},
    {"resolved_on_retry", r.resolved_on_retry},
    {"failed", r.failed},
    {"edges_checked", r.edges_checked},
    {"edges_passed", r.edges_passed},
    {"pruned_vertices", r.pruned_vertices}};
}

inline const std::vector<std::string>& roadmap_sections()
{
  static const std::vector<std::string> s{"format", "version", "robot_hash",
    "task", "metric", "params", "grid", "vertices", "configurations",
    "edges", "resolved_edges", "build_report", "task_graph_fingerprint"};
  return s;
}

/// Serializes with round-trip exact floats. The output depends only on the
/// inputs, never on timing.
inline std::string roadmap_to_string(const RobotSpec& robot,
  const TaskGraph& graph, const ResolutionRoadmap& roadmap)
{
  using io_detail::vec;
  Json doc;
  doc["format"] = roadmap_format;
  doc["version"] = roadmap_version;
  doc["robot_hash"] = robot_hash(robot.chain, robot.space);
  doc["task"] = task_space_json(graph.space());
  doc["metric"] = Json{{"translation", graph.weights().translation},
    {"orientation", graph.weights().orientation}};
  doc["params"] = settings_json(roadmap.settings);
  if (graph.grid())
  {
    const auto& g = *graph.grid();
    doc["grid"] = Json{{"origin", vec(g.origin)},
      {"cell_size", vec(g.cell_size)}, {"counts", g.counts}};
  }
  else
    doc["grid"] = nullptr;

  Json vertices = Json::array();
  for (const auto& v : graph.vertices())
    vertices.push_back(vec(v.translation));
  doc["vertices"] = std::move(vertices);

  Json configs = Json::array();
  for (const auto& a : roadmap.assignments)
    configs.push_back(a ? vec(*a) : Json(nullptr));
  doc["configurations"] = std::move(configs);

  Json edges = Json::array();
  for (const auto& [a, b] : graph.edges())
    edges.push_back(Json::array({a, b}));
  doc["edges"] = std::move(edges);

  Json resolved = Json::array();
  for (const auto& [a, b] : roadmap.resolved_edges)
    resolved.push_back(Json::array({a, b}));
  doc["resolved_edges"] = std::move(resolved);

  doc["build_report"] = report_json(roadmap.report);
  doc["task_graph_fingerprint"] = io_detail::hex(roadmap.task_graph_fingerprint);
  return doc.dump(1) + "\n";
}

inline void save_roadmap(const std::string& path, const RobotSpec& robot,
  const TaskGraph& graph, const ResolutionRoadmap& roadmap)
{
  io_detail::write_file(path, roadmap_to_string(robot, graph, roadmap));
}

inline StoredRoadmap parse_roadmap(const std::string& text,
  const RobotSpec& robot, const std::string& origin = "roadmap")
{
  using io_detail::Reader;
  const Json doc = io_detail::parse_sections(text, origin, roadmap_sections());
  const Reader r(doc, origin);
  if (!doc.is_object())
    r.fail("expected an object");
  for (const auto& s : roadmap_sections())
  {
    if (!doc.contains(s))
      r.fail("missing section '" + s + "'");
  }

  if (r.at("format").string() != roadmap_format)
    r.at("format").fail("not a roadmap file");
  const auto version = r.at("version").integer();
  if (version != roadmap_version)
    r.at("version").fail("unsupported version " + std::to_string(version)
      + " (expected " + std::to_string(roadmap_version) + ")");
  const std::string expected_hash = robot_hash(robot.chain, robot.space);
  if (r.at("robot_hash").string() != expected_hash)
    r.at("robot_hash").fail("roadmap was built for a different robot (hash "
      + r.at("robot_hash").string() + ", robot spec has " + expected_hash + ")");

  const Reader task = r.at("task");
  TaskSpace space;
  space.mode = task_mode_from_string(task.at("mode").string());
  space.translation_dim = static_cast<int>(task.at("translation_dim").integer());
  if (task.has("orientation"))
    space.orientation = io_detail::read_quat(task.at("orientation"));
  const auto dim = static_cast<std::size_t>(space.translation_dim);

  TaskMetricWeights weights{r.at("metric").at("translation").number(),
    r.at("metric").at("orientation").number()};

  GrrSettings settings;
  {
    const Reader p = r.at("params");
    const Reader pp = p.at("projection");
    settings.projection.max_iterations =
      static_cast<int>(pp.at("max_iterations").integer());
    settings.projection.tolerance = pp.at("tolerance").number();
    settings.projection.damping = pp.at("damping").number();
    settings.projection.step_clamp = pp.at("step_clamp").number();
    const Reader pc = p.at("continuity");
    settings.continuity.c = pc.at("c").number();
    settings.continuity.epsilon = pc.at("epsilon").number();
    settings.continuity.depth_limit =
      static_cast<int>(pc.at("depth_limit").integer());
    settings.k = static_cast<int>(p.at("k").integer());
    try
    {
      settings.validate();
    }
    catch (const std::invalid_argument& e)
    {
      p.fail(e.what());
    }
  }

  std::optional<GridMeta> grid;
  if (r.has("grid"))
  {
    const Reader g = r.at("grid");
    GridMeta m{g.at("origin").vector(dim), g.at("cell_size").vector(dim), {}};
    const Reader counts = g.at("counts");
    for (std::size_t i = 0; i < counts.size(); ++i)
      m.counts.push_back(static_cast<int>(counts.at(i).integer()));
    grid = m;
  }

  std::vector<TaskPoint> vertices;
  const Reader vr = r.at("vertices");
  for (std::size_t i = 0; i < vr.size(); ++i)
    vertices.push_back(space.point(vr.at(i).vector(dim)));

  const std::size_t vertex_count = vertices.size();
  const auto read_edges = [&](const Reader& er) {
    std::vector<Edge> out;
    for (std::size_t i = 0; i < er.size(); ++i)
    {
      const Reader e = er.at(i);
      if (e.size() != 2)
        e.fail("an edge has two vertex indices");
      const auto a = e.at(0).integer();
      const auto b = e.at(1).integer();
      if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= vertex_count
        || static_cast<std::size_t>(b) >= vertex_count)
      {
        e.fail("vertex index out of range");
      }
      out.push_back(make_edge(static_cast<int>(a), static_cast<int>(b)));
    }
    return out;
  };

  StoredRoadmap out;
  try
  {
    out.graph = TaskGraph(space, std::move(vertices),
        read_edges(r.at("edges")), weights, grid);
  }
  catch (const std::invalid_argument& e)
  {
    r.fail(std::string("invalid task graph: ") + e.what());
  }

  auto& rm = out.roadmap;
  rm.settings = settings;
  const Reader cr = r.at("configurations");
  if (cr.size() != out.graph.size())
    cr.fail("expected one entry per vertex");
  for (std::size_t i = 0; i < cr.size(); ++i)
  {
    const Reader c = cr.at(i);
    if (c.json().is_null())
      rm.assignments.emplace_back(std::nullopt);
    else
      rm.assignments.emplace_back(c.vector(robot.chain.dof()));
  }
  rm.resolved_edges = read_edges(r.at("resolved_edges"));
  std::sort(rm.resolved_edges.begin(), rm.resolved_edges.end());
  for (const auto& e : rm.resolved_edges)
  {
    if (!out.graph.has_edge(e.first, e.second))
      r.at("resolved_edges").fail("resolved edge is not a task graph edge");
  }

  const Reader br = r.at("build_report");
  const auto ints = [](const Reader& a) {
    std::vector<int> v;
    for (std::size_t i = 0; i < a.size(); ++i)
      v.push_back(static_cast<int>(a.at(i).integer()));
    return v;
  };
  const auto count = [](const Reader& a) {
    return static_cast<std::size_t>(a.integer());
  };
  rm.report.seeds = ints(br.at("seeds"));
  rm.report.resolved_first_pass = count(br.at("resolved_first_pass"));
  rm.report.failed_first_pass = count(br.at("failed_first_pass"));
  rm.report.resolved_on_retry = count(br.at("resolved_on_retry"));
  rm.report.failed = ints(br.at("failed"));
  rm.report.edges_checked = count(br.at("edges_checked"));
  rm.report.edges_passed = count(br.at("edges_passed"));
  rm.report.pruned_vertices = count(br.at("pruned_vertices"));

  rm.task_graph_fingerprint = out.graph.fingerprint();
  if (r.at("task_graph_fingerprint").string()
    != io_detail::hex(rm.task_graph_fingerprint))
  {
    r.at("task_graph_fingerprint").fail("does not match the stored graph");
  }
  return out;
}

inline StoredRoadmap load_roadmap(const std::string& path,
  const RobotSpec& robot)
{
  return parse_roadmap(io_detail::read_file(path), robot, path);
}

//==============================================================================
/// One line-delimited record per trial.
inline Json trial_json(const TrialResult& t)
{
  return Json{
    {"task_kind", to_string(t.kind)},
    {"solver", to_string(t.solver)},
    {"rng_seed", t.rng_seed},
    {"success", t.success},
    {"failure_reason", t.success ? Json(nullptr) : Json(t.failure_reason)},
    {"deviation", t.deviation ? Json(*t.deviation) : Json(nullptr)},
    {"smoothness", t.smoothness ? Json(*t.smoothness) : Json(nullptr)},
    {"wall_ms", t.wall_ms}};
}

inline Json summary_json(const BenchReport& report)
{
  const auto opt = [](const std::optional<double>& v) {
    return v ? Json(*v) : Json(nullptr);
  };
  Json rows = Json::array();
  for (const auto& [key, a] : report.summary)
  {
    rows.push_back(Json{
      {"task_kind", to_string(key.first)},
      {"solver", to_string(key.second)},
      {"trials", a.trials},
      {"successes", a.successes},
      {"success_rate", a.success_rate()},
      {"common_successes", a.common},
      {"deviation", opt(a.deviation)},
      {"smoothness", opt(a.smoothness)},
      {"deviation_all", opt(a.deviation_all)},
      {"smoothness_all", opt(a.smoothness_all)}});
  }
  return Json{
    {"trials_per_task", report.config.trials},
    {"seed", report.config.seed},
    {"goal_tolerance", report.criteria.goal_tolerance},
    {"stall_window", report.criteria.stall_window},
    {"stall_motion", report.criteria.stall_motion},
    {"stall_input_motion", report.criteria.stall_input_motion},
    {"rows", std::move(rows)}};
}

inline void write_bench_records(std::ostream& out, const BenchReport& report)
{
  for (const auto& t : report.trials)
    out << trial_json(t).dump() << "\n";
}

/// Fixed-width table of the aggregate means.
inline std::string summary_table(const BenchReport& report)
{
  std::ostringstream s;
  const auto cell = [](const std::optional<double>& v) {
    char buf[32];
    if (v)
      std::snprintf(buf, sizeof(buf), "%12.6f", *v);
    else
      std::snprintf(buf, sizeof(buf), "%12s", "-");
    return std::string(buf);
  };
  char head[160];
  std::snprintf(head, sizeof(head), "%-20s %-14s %9s %12s %12s %8s\n",
    "task", "solver", "success%", "deviation", "smoothness", "common");
  s << head;
  for (const auto& [key, a] : report.summary)
  {
    char row[160];
    std::snprintf(row, sizeof(row), "%-20s %-14s %9.1f %s %s %8zu\n",
      to_string(key.first), to_string(key.second), 100.0 * a.success_rate(),
      cell(a.deviation).c_str(), cell(a.smoothness).c_str(), a.common);
    s << row;
  }
  return s.str();
}

} // namespace grr

#endif // GRR__IO_HPP
