#pragma once

// Shared plumbing between the TCP sessions, the gateway and the state
// machine thread. Internal to the server.

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>

#include <boost/asio.hpp>

#include "launcher/net/controller.hpp"

namespace launcher::net::detail {

namespace asio = boost::asio;

/// A connected client as seen by the hub. All methods run on the I/O thread.
class Sink
{
public:
    virtual ~Sink() = default;
    virtual void deliver(std::string frame) = 0;
    /// Finishes pending writes, then closes the connection.
    virtual void close_after_flush() = 0;
    /// Consoles also see other sessions' events and periodic snapshots.
    virtual bool console() const noexcept { return false; }
    /// A response for one of this sink's requests has been delivered.
    virtual void answered() {}
};

class Hub
{
public:
    using SubmitFn = std::function<void(SessionId, std::string)>;

    Hub(asio::io_context& io, SubmitFn submit) : io_(io), submit_(std::move(submit)) {}

    asio::io_context& io() noexcept { return io_; }

    // I/O thread only.
    SessionId attach(std::shared_ptr<Sink> sink)
    {
        const SessionId id = next_id_++;
        sinks_[id] = std::move(sink);
        if (closing_)
            sinks_[id]->close_after_flush();
        return id;
    }
    void detach(SessionId id) { sinks_.erase(id); }
    bool closing() const noexcept { return closing_; }

    /// Hands a frame to the state machine. Any thread.
    void submit(SessionId from, std::string frame) { submit_(from, std::move(frame)); }

    // Called from the state machine thread; the work runs on the I/O thread.
    void post_response(SessionId to, std::string frame)
    {
        asio::post(io_, [this, to, frame = std::move(frame)]() mutable {
            if (const auto it = sinks_.find(to); it != sinks_.end()) {
                auto sink = it->second;
                sink->deliver(std::move(frame));
                sink->answered();
            }
        });
    }

    void post_event(SessionId to, std::string frame)
    {
        asio::post(io_, [this, to, frame = std::move(frame)] {
            // Copy first: a delivery may close and detach a sink.
            auto sinks = sinks_;
            for (auto& [id, sink] : sinks)
                if (to == all_sessions || id == to || sink->console())
                    sink->deliver(frame);
        });
    }

    void broadcast_to_consoles(const std::string& frame)
    {
        auto sinks = sinks_;
        for (auto& [id, sink] : sinks)
            if (sink->console())
                sink->deliver(frame);
    }

    void post_close_all(std::function<void()> then)
    {
        asio::post(io_, [this, then = std::move(then)] {
            closing_ = true;
            auto sinks = sinks_;
            for (auto& [id, sink] : sinks)
                sink->close_after_flush();
            then();
        });
    }

    void set_snapshot(std::string s)
    {
        std::lock_guard lock(snapshot_mutex_);
        snapshot_ = std::move(s);
    }
    std::string snapshot() const
    {
        std::lock_guard lock(snapshot_mutex_);
        return snapshot_;
    }

private:
    asio::io_context& io_;
    SubmitFn submit_;
    std::unordered_map<SessionId, std::shared_ptr<Sink>> sinks_;
    SessionId next_id_ = 1;
    bool closing_ = false;

    mutable std::mutex snapshot_mutex_;
    std::string snapshot_ = "{}";
};

/// Accepts WebSocket and HTTP connections for the console gateway.
class Gateway
{
public:
    Gateway(Hub& hub, const asio::ip::tcp::endpoint& at, std::string static_dir,
            double snapshot_rate_hz);
    ~Gateway();

    std::uint16_t port() const noexcept;
    void start();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace launcher::net::detail
