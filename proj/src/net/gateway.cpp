#include <chrono>
#include <deque>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "hub.hpp"
#include "launcher/error.hpp"
#include "launcher/net/protocol.hpp"

namespace launcher::net::detail {

namespace {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

constexpr const char* placeholder_page = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>Ball launcher</title></head>
<body>
<h1>Ball launcher control server</h1>
<p>No console assets are installed. The live state is at <a href="/state">/state</a>;
consoles connect to the WebSocket at <code>/ws</code>.</p>
</body></html>
)";

std::string_view mime_type(const std::filesystem::path& p)
{
    const auto ext = p.extension().string();
    if (ext == ".html" || ext == ".htm")
        return "text/html; charset=utf-8";
    if (ext == ".js" || ext == ".mjs")
        return "text/javascript";
    if (ext == ".css")
        return "text/css";
    if (ext == ".json" || ext == ".map")
        return "application/json";
    if (ext == ".svg")
        return "image/svg+xml";
    if (ext == ".png")
        return "image/png";
    if (ext == ".ico")
        return "image/x-icon";
    if (ext == ".wasm")
        return "application/wasm";
    return "application/octet-stream";
}

// Maps a request target to a file below the asset root. Empty when the
// target tries to leave the root.
std::optional<std::filesystem::path> asset_path(std::string_view target)
{
    const auto q = target.find_first_of("?#");
    if (q != std::string_view::npos)
        target = target.substr(0, q);
    if (target.empty() || target.front() != '/')
        return std::nullopt;
    std::filesystem::path rel;
    std::string_view rest = target.substr(1);
    while (!rest.empty()) {
        const auto slash = rest.find('/');
        const auto part = rest.substr(0, slash);
        if (part == ".." || part.find('\\') != std::string_view::npos)
            return std::nullopt;
        if (!part.empty() && part != ".")
            rel /= std::string(part);
        if (slash == std::string_view::npos)
            break;
        rest = rest.substr(slash + 1);
    }
    if (rel.empty())
        rel = "index.html";
    return rel;
}

class WsSession final : public Sink, public std::enable_shared_from_this<WsSession>
{
public:
    WsSession(beast::tcp_stream stream, Hub& hub) : ws_(std::move(stream)), hub_(hub) {}

    void start(http::request<http::string_body> req)
    {
        beast::get_lowest_layer(ws_).expires_never();
        ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
        ws_.read_message_max(max_frame_bytes);
        ws_.text(true);
        ws_.async_accept(req, [self = shared_from_this()](beast::error_code ec) {
            if (ec)
                return;
            self->id_ = self->hub_.attach(self);
            if (!self->closed_)
                self->read();
        });
    }

    void deliver(std::string frame) override
    {
        if (closed_ || closing_)
            return;
        queue_.push_back(std::move(frame));
        if (queue_.size() == 1)
            write();
    }

    void close_after_flush() override
    {
        closing_ = true;
        if (queue_.empty())
            close();
    }

    bool console() const noexcept override { return true; }

private:
    void read()
    {
        ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) {
                self->finish();
                return;
            }
            auto text = beast::buffers_to_string(self->buffer_.data());
            self->buffer_.consume(self->buffer_.size());
            if (!self->closing_)
                self->hub_.submit(self->id_, std::move(text));
            self->read();
        });
    }

    void write()
    {
        ws_.async_write(asio::buffer(queue_.front()),
                        [self = shared_from_this()](beast::error_code ec, std::size_t) {
                            if (ec) {
                                self->finish();
                                return;
                            }
                            self->queue_.pop_front();
                            if (!self->queue_.empty())
                                self->write();
                            else if (self->closing_)
                                self->close();
                        });
    }

    void close()
    {
        if (closed_ || close_sent_)
            return;
        close_sent_ = true;
        ws_.async_close(websocket::close_code::going_away,
                        [self = shared_from_this()](beast::error_code) { self->finish(); });
    }

    void finish()
    {
        if (closed_)
            return;
        closed_ = true;
        hub_.detach(id_);
    }

    websocket::stream<beast::tcp_stream> ws_;
    beast::flat_buffer buffer_;
    std::deque<std::string> queue_;
    Hub& hub_;
    SessionId id_ = 0;
    bool closing_ = false;
    bool close_sent_ = false;
    bool closed_ = false;
};

class HttpSession final : public std::enable_shared_from_this<HttpSession>
{
public:
    HttpSession(tcp::socket socket, Hub& hub, const std::string& static_dir)
        : stream_(std::move(socket)), hub_(hub), static_dir_(static_dir)
    {
    }

    void read()
    {
        parser_.emplace();
        parser_->body_limit(max_frame_bytes);
        stream_.expires_after(std::chrono::seconds(30));
        http::async_read(stream_, buffer_, *parser_,
                         [self = shared_from_this()](beast::error_code ec, std::size_t) {
                             self->on_read(ec);
                         });
    }

    void close()
    {
        beast::error_code ignore;
        stream_.socket().shutdown(tcp::socket::shutdown_both, ignore);
        stream_.close();
    }

private:
    void on_read(beast::error_code ec)
    {
        if (ec) {
            close();
            return;
        }
        auto req = parser_->release();
        if (websocket::is_upgrade(req) && req.target() == "/ws") {
            if (hub_.closing()) {
                close();
                return;
            }
            std::make_shared<WsSession>(std::move(stream_), hub_)->start(std::move(req));
            return;
        }
        auto res = make_response(req);
        if (req.method() == http::verb::head)
            res.body().clear(); // Content-Length still describes the GET body
        respond(std::move(res));
    }

    http::response<http::string_body> make_response(const http::request<http::string_body>& req)
    {
        const auto reply = [&req](http::status status, std::string_view type, std::string body) {
            http::response<http::string_body> res{status, req.version()};
            res.set(http::field::server, "launcher-gateway");
            res.set(http::field::content_type, beast::string_view(type.data(), type.size()));
            res.keep_alive(req.keep_alive());
            res.body() = std::move(body);
            res.prepare_payload();
            return res;
        };
        if (req.method() != http::verb::get && req.method() != http::verb::head)
            return reply(http::status::method_not_allowed, "text/plain", "method not allowed\n");
        if (req.target() == "/state")
            return reply(http::status::ok, "application/json", hub_.snapshot());

        const auto rel = asset_path(std::string_view(req.target().data(), req.target().size()));
        if (!rel)
            return reply(http::status::bad_request, "text/plain", "bad path\n");
        if (!static_dir_.empty()) {
            const auto file = std::filesystem::path(static_dir_) / *rel;
            std::error_code fs_ec;
            if (std::filesystem::is_regular_file(file, fs_ec)) {
                std::ifstream in(file, std::ios::binary);
                std::ostringstream body;
                body << in.rdbuf();
                return reply(http::status::ok, mime_type(file), std::move(body).str());
            }
        }
        if (*rel == "index.html")
            return reply(http::status::ok, "text/html; charset=utf-8", placeholder_page);
        return reply(http::status::not_found, "text/plain", "not found\n");
    }

    void respond(http::response<http::string_body> res)
    {
        auto msg = std::make_shared<http::response<http::string_body>>(std::move(res));
        http::async_write(stream_, *msg,
                          [self = shared_from_this(), msg](beast::error_code ec, std::size_t) {
                              if (ec || msg->need_eof()) {
                                  self->close();
                                  return;
                              }
                              self->read();
                          });
    }

    beast::tcp_stream stream_;
    beast::flat_buffer buffer_;
    std::optional<http::request_parser<http::string_body>> parser_;
    Hub& hub_;
    const std::string& static_dir_;
};

} // namespace

struct Gateway::Impl
{
    Hub& hub;
    tcp::acceptor acceptor;
    std::string static_dir;
    asio::steady_timer timer;
    std::chrono::nanoseconds period;
    std::uint16_t bound_port = 0;
    std::vector<std::weak_ptr<HttpSession>> http_sessions;
    bool stopped = false;

    Impl(Hub& h, const tcp::endpoint& at, std::string dir, double rate_hz)
        : hub(h), acceptor(h.io()), static_dir(std::move(dir)), timer(h.io()),
          period(std::chrono::duration_cast<std::chrono::nanoseconds>(
              std::chrono::duration<double>(1.0 / rate_hz)))
    {
        beast::error_code ec;
        acceptor.open(at.protocol(), ec);
        if (!ec)
            acceptor.set_option(asio::socket_base::reuse_address(true), ec);
        if (!ec)
            acceptor.bind(at, ec);
        if (!ec)
            acceptor.listen(asio::socket_base::max_listen_connections, ec);
        if (ec)
            throw NetworkError("cannot listen on gateway port " + std::to_string(at.port()) + ": "
                               + ec.message());
        bound_port = acceptor.local_endpoint().port();
    }

    void accept()
    {
        acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
            if (stopped)
                return;
            if (!ec) {
                auto session = std::make_shared<HttpSession>(std::move(socket), hub, static_dir);
                std::erase_if(http_sessions, [](const auto& w) { return w.expired(); });
                http_sessions.push_back(session);
                session->read();
            }
            accept();
        });
    }

    void tick()
    {
        timer.expires_after(period);
        timer.async_wait([this](beast::error_code ec) {
            if (ec || stopped)
                return;
            hub.broadcast_to_consoles(R"({"snapshot":)" + hub.snapshot() + "}");
            tick();
        });
    }
};

Gateway::Gateway(Hub& hub, const tcp::endpoint& at, std::string static_dir, double snapshot_rate_hz)
    : impl_(std::make_unique<Impl>(hub, at, std::move(static_dir), snapshot_rate_hz))
{
}

Gateway::~Gateway() = default;

std::uint16_t Gateway::port() const noexcept
{
    return impl_->bound_port;
}

void Gateway::start()
{
    impl_->accept();
    impl_->tick();
}

void Gateway::stop()
{
    impl_->stopped = true;
    beast::error_code ignore;
    impl_->acceptor.close(ignore);
    impl_->timer.cancel();
    for (auto& w : impl_->http_sessions)
        if (auto s = w.lock())
            s->close();
    impl_->http_sessions.clear();
}

} // namespace launcher::net::detail
