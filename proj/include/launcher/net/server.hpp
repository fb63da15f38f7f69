#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "launcher/net/backend.hpp"
#include "launcher/net/controller.hpp"
#include "launcher/net/protocol.hpp"
#include "launcher/sim/sim_config.hpp"

namespace launcher::net {

struct ServerConfig
{
    std::string bind_address = "127.0.0.1";
    std::uint16_t tcp_port = default_tcp_port;       ///< 0 picks a free port
    std::uint16_t gateway_port = default_gateway_port; ///< 0 picks a free port
    bool gateway = true;
    /// Console assets served from "/". Empty serves a placeholder page.
    std::string static_dir;
    /// Soft real-time budget for a round trip, s.
    double max_latency_budget = 0.5;
    double snapshot_rate_hz = 5.0;
    ControllerConfig controller;
    sim::SimConfig sim;

    /// Throws RangeError when the ports coincide or a rate is not positive.
    void validate() const;
};

void to_json(nlohmann::json& j, const ServerConfig& c);
/// Missing fields keep their defaults; the result is validated.
void from_json(const nlohmann::json& j, ServerConfig& c);

/// A running control server: newline-delimited JSON over TCP, plus an
/// HTTP/WebSocket gateway for consoles.
///
/// One state-machine thread owns the controller and the backend; network
/// sessions run on one I/O thread and hand frames over through an ordered
/// queue, so every state mutation is serialized and each connection gets
/// its responses in request order.
class Server
{
public:
    /// Binds and starts serving. A null backend means the simulator built
    /// from cfg.sim. Throws NetworkError when a port cannot be bound.
    explicit Server(ServerConfig cfg, std::unique_ptr<Backend> backend = nullptr);
    ~Server();

    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    std::uint16_t tcp_port() const noexcept;
    /// Zero when the gateway is disabled.
    std::uint16_t gateway_port() const noexcept;

    /// Same as a shutdown request: answers what is queued, then closes
    /// every connection.
    void stop();
    /// Blocks until the server has stopped.
    void wait();
    bool stopped() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace launcher::net
