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

#ifndef GRR__TELEOP_SERVICE_HPP
#define GRR__TELEOP_SERVICE_HPP

#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "io.hpp"
#include "teleop.hpp"

namespace grr {

//==============================================================================
/// Protocol logic of one teleoperation client, independent of transport.
///
/// Client messages:
///   {"type": "target", "x", "y"(, "z")}         latest target wins
///   {"type": "reset"}                           back to the home pose
/// Server messages:
///   {"type": "meta", ...}                       once, on connect
///   {"type": "state", "tick", "joints", "ee", "status", "target",
///    "target_effective"}                        every control tick
///   {"type": "error", "msg"}                    on a rejected message
class TeleopSession
{
public:

  TeleopSession(const RobotSpec& robot, const RoadmapQuery& query,
    TeleopParams params)
  : _robot(robot), _query(query), _params(params)
  {
    _home = home_point();
    reset();
  }

  /// Task point the robot starts from: the seed vertex nearest the middle
  /// of the workspace box.
  TaskPoint home_point() const
  {
    const auto& g = _query.graph();
    const auto& rm = _query.roadmap();
    if (g.size() == 0 || rm.assigned_count() == 0)
      throw std::runtime_error("roadmap has no assigned vertex");
    const auto [lo, hi] = bounds();
    const TaskPoint center = g.space().point(0.5 * (lo + hi));

    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int v : rm.report.seeds)
    {
      if (v < 0 || !rm.assigned(v))
        continue;
      const double d = g.distance(center, g.vertex(v));
      if (d < best_d)
      {
        best = v;
        best_d = d;
      }
    }
    if (best < 0)
      best = _query.nearest_assigned(center);
    return g.vertex(best);
  }

  /// Workspace box: the grid extent, or the vertex bounds without a grid.
  std::pair<Eigen::VectorXd, Eigen::VectorXd> bounds() const
  {
    const auto& g = _query.graph();
    if (g.grid())
    {
      const auto& m = *g.grid();
      Eigen::VectorXd hi = m.origin;
      for (std::size_t i = 0; i < m.counts.size(); ++i)
      {
        const auto k = static_cast<Eigen::Index>(i);
        hi[k] += m.cell_size[k] * m.counts[i];
      }
      return {m.origin, hi};
    }
    Eigen::VectorXd lo = g.vertex(0).translation;
    Eigen::VectorXd hi = lo;
    for (const auto& v : g.vertices())
    {
      lo = lo.cwiseMin(v.translation);
      hi = hi.cwiseMax(v.translation);
    }
    return {lo, hi};
  }

  /// {"x": .., "y": .. [, "z": ..]}
  static Json point_json(const Eigen::VectorXd& t)
  {
    static const char* names[] = {"x", "y", "z"};
    Json j = Json::object();
    for (Eigen::Index i = 0; i < t.size() && i < 3; ++i)
      j[names[i]] = t[i];
    return j;
  }

  void reset()
  {
    auto s = teleop_start(_query, _home);
    if (!s)
      throw std::runtime_error("cannot resolve the home pose");
    _state = std::move(*s);
    _target.reset();
  }

  Json meta() const
  {
    const auto& g = _query.graph();
    const auto& chain = _query.chain();
    const auto reach = reach_region(chain, g.space());
    const auto [lo, hi] = bounds();
    Json links = Json::array();
    for (const auto& j : chain.joints())
      links.push_back(j.offset.norm());
    Json robot = robot_json(chain, g.space());
    robot["link_lengths"] = std::move(links);
    return Json{{"type", "meta"},
      {"name", _robot.name},
      {"robot", std::move(robot)},
      {"dof", chain.dof()},
      {"rate_hz", 50.0},
      {"workspace", {{"lo", point_json(lo)}, {"hi", point_json(hi)}}},
      {"reach", {{"center", point_json(reach.center)},
        {"inner", reach.inner}, {"outer", reach.outer}}},
      {"grid_pitch", g.grid() ? Json(g.grid()->pitch()) : Json(nullptr)},
      {"home", point_json(_home.translation)}};
  }

  static Json error(const std::string& msg)
  {
    return Json{{"type", "error"}, {"msg", msg}};
  }

  /// Applies one client message. Returns an error reply if it is rejected.
  std::optional<Json> on_message(const std::string& text)
  {
    Json msg;
    try
    {
      msg = Json::parse(text);
    }
    catch (const Json::parse_error& e)
    {
      return error(std::string("malformed message: ") + e.what());
    }
    if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string())
      return error("message needs a string 'type'");

    const std::string type = msg["type"].get<std::string>();
    if (type == "reset")
    {
      reset();
      return std::nullopt;
    }
    if (type != "target")
      return error("unknown message type '" + type + "'");

    // Either {"x", "y"[, "z"]} or "point": [x, y(, z)].
    const auto dim = _query.graph().space().translation_dim;
    static const char* names[] = {"x", "y", "z"};
    Eigen::VectorXd t(dim);
    const bool listed = msg.contains("point");
    if (listed && (!msg["point"].is_array()
      || static_cast<int>(msg["point"].size()) != dim))
    {
      return error("target 'point' needs " + std::to_string(dim) + " numbers");
    }
    for (int i = 0; i < dim; ++i)
    {
      const Json* x = nullptr;
      if (listed)
        x = &msg["point"][static_cast<std::size_t>(i)];
      else if (msg.contains(names[i]))
        x = &msg[names[i]];
      if (!x)
        return error(std::string("target is missing '") + names[i] + "'");
      if (!x->is_number() || !std::isfinite(x->get<double>()))
        return error("target coordinates must be finite numbers");
      t[i] = x->get<double>();
    }
    _target = _query.graph().space().point(t);
    return std::nullopt;
  }

  /// One control tick. Steps toward the latest target, if any.
  Json tick()
  {
    if (_target)
    {
      auto [q, next] = teleop_step(std::move(_state), *_target, _query,
          _params);
      _state = std::move(next);
    }
    ++_tick;
    return state_message();
  }

  Json state_message() const
  {
    const TaskPoint ee = _query.task_point(_state.current);
    Json j{{"type", "state"},
      {"tick", _tick},
      {"joints", io_detail::vec(_state.current)},
      {"ee", point_json(ee.translation)},
      {"status", to_string(_state.status)}};
    j["target"] = _target ? point_json(_target->translation) : Json(nullptr);
    j["target_effective"] = _state.effective_target
      ? point_json(_state.effective_target->translation) : Json(nullptr);
    return j;
  }

  const TeleopState& state() const { return _state; }
  std::uint64_t ticks() const { return _tick; }

private:
  const RobotSpec& _robot;
  const RoadmapQuery& _query;
  TeleopParams _params;
  TaskPoint _home;
  TeleopState _state;
  std::optional<TaskPoint> _target;
  std::uint64_t _tick = 0;
};

//==============================================================================
namespace service_detail {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = boost::beast::websocket;
using tcp = boost::asio::ip::tcp;

/// One websocket client: a read loop, a 50 Hz control timer, and a write
/// queue that drops state frames while a write is in flight.
class Connection : public std::enable_shared_from_this<Connection>
{
public:

  Connection(tcp::socket socket, const RobotSpec& robot,
    const RoadmapQuery& query, TeleopParams params,
    std::chrono::milliseconds period)
  : _ws(std::move(socket)),
    _timer(_ws.get_executor()),
    _session(robot, query, params),
    _period(period)
  {
  }

  void start()
  {
    _ws.set_option(websocket::stream_base::timeout::suggested(
        beast::role_type::server));
    _ws.async_accept(
      [self = shared_from_this()](beast::error_code ec) {
        if (ec)
          return;
        self->send(self->_session.meta().dump(), true);
        self->read();
        self->_next = std::chrono::steady_clock::now();
        self->schedule();
      });
  }

  std::uint64_t dropped() const { return _dropped; }

private:

  void read()
  {
    _ws.async_read(_in,
      [self = shared_from_this()](beast::error_code ec, std::size_t) {
        if (ec)
        {
          self->close();
          return;
        }
        const std::string text = beast::buffers_to_string(self->_in.data());
        self->_in.consume(self->_in.size());
        if (auto reply = self->_session.on_message(text))
          self->send(reply->dump(), true);
        self->read();
      });
  }

  void schedule()
  {
    _next += _period;
    _timer.expires_at(_next);
    _timer.async_wait(
      [self = shared_from_this()](beast::error_code ec) {
        if (ec || self->_closed)
          return;
        const Json state = self->_session.tick();
        self->send(state.dump(), false);
        self->schedule();
      });
  }

  void send(std::string text, bool must_deliver)
  {
    if (_closed)
      return;
    if (!must_deliver && (_writing || !_out.empty()))
    {
      ++_dropped;
      return;
    }
    _out.push_back(std::move(text));
    if (!_writing)
      write_next();
  }

  void write_next()
  {
    if (_out.empty() || _closed)
    {
      _writing = false;
      return;
    }
    _writing = true;
    _ws.text(true);
    _ws.async_write(asio::buffer(_out.front()),
      [self = shared_from_this()](beast::error_code ec, std::size_t) {
        // The buffer stays queued until its write completes.
        self->_out.pop_front();
        if (ec)
        {
          self->close();
          return;
        }
        self->write_next();
      });
  }

  void close()
  {
    _closed = true;
    _timer.cancel();
  }

  websocket::stream<beast::tcp_stream> _ws;
  asio::steady_timer _timer;
  beast::flat_buffer _in;
  std::deque<std::string> _out;
  bool _writing = false;
  bool _closed = false;
  std::uint64_t _dropped = 0;
  TeleopSession _session;
  std::chrono::milliseconds _period;
  std::chrono::steady_clock::time_point _next;
};

} // namespace service_detail

//==============================================================================
/// Websocket teleoperation service on a single io_context. Each client gets
/// its own session and control loop.
class TeleopServer
{
public:

  /// Binds immediately; port 0 picks a free port. Throws if the port is
  /// taken.
  TeleopServer(boost::asio::io_context& ioc, const RobotSpec& robot,
    const RoadmapQuery& query, TeleopParams params,
    unsigned short port, const std::string& address = "127.0.0.1",
    std::chrono::milliseconds period = std::chrono::milliseconds(20))
  : _ioc(ioc), _acceptor(ioc), _robot(robot), _query(query),
    _params(params), _period(period)
  {
    using service_detail::tcp;
    const tcp::endpoint ep(boost::asio::ip::make_address(address), port);
    boost::system::error_code ec;
    _acceptor.open(ep.protocol(), ec);
    if (!ec)
      _acceptor.bind(ep, ec);
    if (!ec)
      _acceptor.listen(boost::asio::socket_base::max_listen_connections, ec);
    if (ec)
      throw std::runtime_error("cannot listen on " + address + ":"
        + std::to_string(port) + ": " + ec.message());
    accept();
  }

  unsigned short port() const { return _acceptor.local_endpoint().port(); }

  void stop()
  {
    boost::system::error_code ec;
    _acceptor.close(ec);
  }

private:

  void accept()
  {
    _acceptor.async_accept(boost::asio::make_strand(_ioc),
      [this](boost::system::error_code ec, service_detail::tcp::socket socket) {
        if (ec)
          return;
        std::make_shared<service_detail::Connection>(std::move(socket),
          _robot, _query, _params, _period)->start();
        accept();
      });
  }

  boost::asio::io_context& _ioc;
  service_detail::tcp::acceptor _acceptor;
  const RobotSpec& _robot;
  const RoadmapQuery& _query;
  TeleopParams _params;
  std::chrono::milliseconds _period;
};

} // namespace grr

#endif // GRR__TELEOP_SERVICE_HPP
