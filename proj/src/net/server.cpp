#include "launcher/net/server.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <iostream>
#include <limits>
#include <mutex>
#include <thread>

#include "hub.hpp"
#include "launcher/error.hpp"

namespace launcher::net {

namespace {

using detail::Hub;
using detail::Sink;
namespace asio = boost::asio;
using asio::ip::tcp;

double monotonic_now()
{
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
}

double unix_minus_monotonic()
{
    using namespace std::chrono;
    const double wall = duration<double>(system_clock::now().time_since_epoch()).count();
    return wall - monotonic_now();
}

std::chrono::steady_clock::time_point to_steady(double seconds)
{
    using namespace std::chrono;
    return steady_clock::time_point(duration_cast<steady_clock::duration>(duration<double>(seconds)));
}

// One newline-delimited JSON connection.
class TcpSession final : public Sink, public std::enable_shared_from_this<TcpSession>
{
public:
    TcpSession(tcp::socket socket, Hub& hub)
        : socket_(std::move(socket)), hub_(hub), buffer_(max_frame_bytes + 1)
    {
    }

    void start()
    {
        boost::system::error_code ignore;
        socket_.set_option(tcp::no_delay(true), ignore);
        id_ = hub_.attach(shared_from_this());
        if (!closed_)
            read();
    }

    void deliver(std::string frame) override
    {
        if (closed_)
            return;
        frame.push_back('\n');
        queue_.push_back(std::move(frame));
        if (queue_.size() == 1)
            write();
    }

    void close_after_flush() override
    {
        closing_ = true;
        maybe_finish();
    }

    void answered() override
    {
        if (outstanding_ > 0)
            --outstanding_;
        maybe_finish();
    }

private:
    void read()
    {
        asio::async_read_until(socket_, buffer_, '\n',
                               [self = shared_from_this()](boost::system::error_code ec,
                                                           std::size_t n) { self->on_read(ec, n); });
    }

    void on_read(boost::system::error_code ec, std::size_t n)
    {
        if (closed_)
            return;
        if (ec) {
            // A line longer than the frame limit cannot be answered sensibly.
            if (ec == asio::error::not_found) {
                close();
                return;
            }
            read_done_ = true;
            maybe_finish();
            return;
        }
        const auto data = buffer_.data();
        std::string line(asio::buffers_begin(data), asio::buffers_begin(data) + n - 1);
        buffer_.consume(n);
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (closing_)
            return;
        if (line.find_first_not_of(" \t") != std::string::npos) {
            ++outstanding_;
            hub_.submit(id_, std::move(line));
        }
        read();
    }

    void write()
    {
        asio::async_write(socket_, asio::buffer(queue_.front()),
                          [self = shared_from_this()](boost::system::error_code ec, std::size_t) {
                              if (ec) {
                                  self->close();
                                  return;
                              }
                              self->queue_.pop_front();
                              if (!self->queue_.empty())
                                  self->write();
                              else
                                  self->maybe_finish();
                          });
    }

    // Closes once nothing is left to say: after a shutdown, or after the
    // peer stopped sending and every request has been answered.
    void maybe_finish()
    {
        if (closed_ || !queue_.empty())
            return;
        if (closing_ || (read_done_ && outstanding_ == 0))
            close();
    }

    void close()
    {
        if (closed_)
            return;
        closed_ = true;
        boost::system::error_code ignore;
        socket_.shutdown(tcp::socket::shutdown_both, ignore);
        socket_.close(ignore);
        hub_.detach(id_);
    }

    tcp::socket socket_;
    Hub& hub_;
    asio::streambuf buffer_;
    std::deque<std::string> queue_;
    SessionId id_ = 0;
    std::size_t outstanding_ = 0;
    bool read_done_ = false;
    bool closing_ = false;
    bool closed_ = false;
};

tcp::endpoint endpoint_for(const std::string& address, std::uint16_t port)
{
    boost::system::error_code ec;
    const auto ip = asio::ip::make_address(address, ec);
    if (ec)
        throw NetworkError("invalid bind address '" + address + "'");
    return {ip, port};
}

} // namespace

void ServerConfig::validate() const
{
    if (gateway && tcp_port != 0 && tcp_port == gateway_port)
        throw RangeError("tcp_port and gateway_port must differ");
    if (!(max_latency_budget > 0.0))
        throw RangeError("max_latency_budget must be positive");
    if (!(snapshot_rate_hz > 0.0))
        throw RangeError("snapshot_rate_hz must be positive");
    if (!(controller.supervision_period > 0.0))
        throw RangeError("supervision_period must be positive");
}

void to_json(nlohmann::json& j, const ServerConfig& c)
{
    j = {{"bind_address", c.bind_address},
         {"tcp_port", c.tcp_port},
         {"gateway_port", c.gateway_port},
         {"gateway", c.gateway},
         {"static_dir", c.static_dir},
         {"max_latency_budget", c.max_latency_budget},
         {"snapshot_rate_hz", c.snapshot_rate_hz},
         {"supervision",
          {{"mode", to_string(c.controller.supervision)},
           {"period", c.controller.supervision_period},
           {"empty_ticks_before_stir", c.controller.empty_ticks_before_stir},
           {"max_pending_launches", c.controller.max_pending_launches}}},
         {"sim", c.sim}};
}

void from_json(const nlohmann::json& j, ServerConfig& c)
{
    if (!j.is_object())
        throw FormatError("server config must be a JSON object");
    ServerConfig o = c;
    try {
        o.bind_address = j.value("bind_address", o.bind_address);
        o.tcp_port = j.value("tcp_port", o.tcp_port);
        o.gateway_port = j.value("gateway_port", o.gateway_port);
        o.gateway = j.value("gateway", o.gateway);
        o.static_dir = j.value("static_dir", o.static_dir);
        o.max_latency_budget = j.value("max_latency_budget", o.max_latency_budget);
        o.snapshot_rate_hz = j.value("snapshot_rate_hz", o.snapshot_rate_hz);
        if (const auto it = j.find("supervision"); it != j.end()) {
            auto& s = o.controller;
            if (it->contains("mode"))
                s.supervision = parse_supervision_mode(it->at("mode").get<std::string>());
            s.supervision_period = it->value("period", s.supervision_period);
            s.empty_ticks_before_stir = it->value("empty_ticks_before_stir", s.empty_ticks_before_stir);
            s.max_pending_launches = it->value("max_pending_launches", s.max_pending_launches);
        }
        if (const auto it = j.find("sim"); it != j.end())
            from_json(*it, o.sim);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("server config: ") + e.what());
    }
    o.validate();
    c = std::move(o);
}

struct Server::Impl
{
    ServerConfig cfg;
    asio::io_context io;
    tcp::acceptor acceptor{io};
    Hub hub;
    std::unique_ptr<detail::Gateway> gateway;
    std::unique_ptr<Controller> controller;
    std::uint16_t bound_tcp_port = 0;

    std::mutex mutex;
    std::condition_variable wake;
    std::deque<std::pair<SessionId, std::string>> inbox;
    bool stop_requested = false;

    std::thread io_thread;
    std::thread state_thread;
    std::atomic<bool> stopped{false};
    std::once_flag joined;

    Impl(ServerConfig c, std::unique_ptr<Backend> backend)
        : cfg(std::move(c)), hub(io, [this](SessionId from, std::string frame) {
              {
                  std::lock_guard lock(mutex);
                  inbox.emplace_back(from, std::move(frame));
              }
              wake.notify_one();
          })
    {
        cfg.validate();
        if (!backend)
            backend = std::make_unique<SimBackend>(cfg.sim);
        controller = std::make_unique<Controller>(std::move(backend), cfg.controller, monotonic_now());
        hub.set_snapshot(serialize(controller->snapshot(monotonic_now())));

        const auto at = endpoint_for(cfg.bind_address, cfg.tcp_port);
        boost::system::error_code ec;
        acceptor.open(at.protocol(), ec);
        if (!ec)
            acceptor.set_option(tcp::acceptor::reuse_address(true), ec);
        if (!ec)
            acceptor.bind(at, ec);
        if (!ec)
            acceptor.listen(asio::socket_base::max_listen_connections, ec);
        if (ec)
            throw NetworkError("cannot listen on tcp port " + std::to_string(cfg.tcp_port) + ": "
                               + ec.message());
        bound_tcp_port = acceptor.local_endpoint().port();
        if (cfg.gateway)
            gateway = std::make_unique<detail::Gateway>(
                hub, endpoint_for(cfg.bind_address, cfg.gateway_port), cfg.static_dir,
                cfg.snapshot_rate_hz);
    }

    void accept()
    {
        acceptor.async_accept([this](boost::system::error_code ec, tcp::socket socket) {
            if (!acceptor.is_open())
                return;
            if (!ec)
                std::make_shared<TcpSession>(std::move(socket), hub)->start();
            accept();
        });
    }

    void start()
    {
        accept();
        if (gateway)
            gateway->start();
        state_thread = std::thread([this] { run_state_machine(); });
        io_thread = std::thread([this] {
            io.run();
            stopped = true;
        });
    }

    void flush_events()
    {
        for (auto& o : controller->take_outbox())
            hub.post_event(o.to, serialize(o.frame));
    }

    void run_state_machine()
    {
        double last_snapshot = -std::numeric_limits<double>::infinity();
        bool stop = false;
        while (!stop) {
            std::deque<std::pair<SessionId, std::string>> batch;
            {
                std::unique_lock lock(mutex);
                wake.wait_until(lock, to_steady(controller->next_tick_time()),
                                [this] { return !inbox.empty() || stop_requested; });
                batch.swap(inbox);
                stop = stop_requested;
            }
            const double now = monotonic_now();
            try {
                for (auto& [from, frame] : batch) {
                    const auto response =
                        controller->handle_frame(frame, from, now, unix_minus_monotonic());
                    hub.post_response(from, serialize(response));
                    flush_events();
                }
                controller->advance(now);
                flush_events();
            } catch (const std::exception& e) {
                std::cerr << "launcher server: " << e.what() << '\n';
            }
            if (!batch.empty() || now - last_snapshot >= 0.05) {
                hub.set_snapshot(serialize(controller->snapshot(now)));
                last_snapshot = now;
            }
            stop = stop || controller->shutdown_requested();
        }
        hub.post_close_all([this] {
            boost::system::error_code ignore;
            acceptor.close(ignore);
            if (gateway)
                gateway->stop();
        });
    }

    void request_stop()
    {
        {
            std::lock_guard lock(mutex);
            stop_requested = true;
        }
        wake.notify_one();
    }

    void join()
    {
        std::call_once(joined, [this] {
            if (state_thread.joinable())
                state_thread.join();
            if (io_thread.joinable())
                io_thread.join();
        });
    }
};

Server::Server(ServerConfig cfg, std::unique_ptr<Backend> backend)
    : impl_(std::make_unique<Impl>(std::move(cfg), std::move(backend)))
{
    impl_->start();
}

Server::~Server()
{
    stop();
    wait();
}

std::uint16_t Server::tcp_port() const noexcept
{
    return impl_->bound_tcp_port;
}

std::uint16_t Server::gateway_port() const noexcept
{
    return impl_->gateway ? impl_->gateway->port() : 0;
}

void Server::stop()
{
    impl_->request_stop();
}

void Server::wait()
{
    impl_->join();
}

bool Server::stopped() const noexcept
{
    return impl_->stopped;
}

} // namespace launcher::net
