#include "feesh/service/server.hpp"

#include <atomic>
#include <deque>
#include <fstream>
#include <sstream>

#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/steady_timer.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "feesh/service/session.hpp"

namespace feesh::service {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using nlohmann::json;

std::string mime_type(const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    if (ext == ".html" || ext == ".htm") return "text/html; charset=utf-8";
    if (ext == ".js" || ext == ".mjs") return "text/javascript; charset=utf-8";
    if (ext == ".css") return "text/css; charset=utf-8";
    if (ext == ".json" || ext == ".map") return "application/json";
    if (ext == ".svg") return "image/svg+xml";
    if (ext == ".png") return "image/png";
    if (ext == ".ico") return "image/x-icon";
    if (ext == ".txt") return "text/plain; charset=utf-8";
    return "application/octet-stream";
}

std::optional<std::filesystem::path> resolve_static(const std::filesystem::path& root, std::string_view target) {
    if (auto q = target.find_first_of("?#"); q != std::string_view::npos) target = target.substr(0, q);
    if (target.empty() || target.front() != '/' || target.find('\0') != std::string_view::npos) return std::nullopt;
    std::filesystem::path rel;
    std::size_t pos = 1;
    while (pos <= target.size()) {
        auto next = target.find('/', pos);
        if (next == std::string_view::npos) next = target.size();
        const auto part = target.substr(pos, next - pos);
        if (part == "..") return std::nullopt;
        if (!part.empty() && part != ".") rel /= std::string(part);
        pos = next + 1;
    }
    if (rel.empty()) rel = "index.html";
    return root / rel;
}

namespace {

constexpr std::string_view placeholder_page =
    "<!doctype html><title>feesh</title><p>feesh session server. Connect a WebSocket client to this "
    "address and send a <code>hello</code> message to start a game.</p>\n";

struct Shared {
    ServerOptions options;
    std::atomic<std::uint64_t> next_seed;
    std::atomic<std::uint64_t> next_id{1};
};

class WsConnection : public std::enable_shared_from_this<WsConnection> {
public:
    WsConnection(tcp::socket&& socket, std::shared_ptr<Shared> shared)
        : ws_(std::move(socket)), timer_(ws_.get_executor()), shared_(std::move(shared)) {}

    void start(http::request<http::string_body> request) {
        ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
        ws_.async_accept(request, [self = shared_from_this()](beast::error_code ec) {
            if (!ec) self->read();
        });
    }

private:
    void read() {
        ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            self->on_read(ec);
        });
    }

    void on_read(beast::error_code ec) {
        if (ec) {
            close_session();
            return;
        }
        const std::string text = beast::buffers_to_string(buffer_.data());
        buffer_.consume(buffer_.size());
        if (!session_) {
            open_session(text);
        } else if (auto error = session_->handle_text(text)) {
            send_mandatory(error->dump());
        }
        if (!closing_) read();
    }

    void open_session(const std::string& text) {
        try {
            auto message = parse_client_message(text);
            auto* hello = std::get_if<HelloRequest>(&message);
            if (!hello) {
                send_mandatory(error_message(0, "expected a hello message").dump());
                return;
            }
            const auto id = "s" + std::to_string(shared_->next_id++);
            session_ = std::make_unique<Session>(id, *hello, shared_->options.base_config, shared_->next_seed++);
        } catch (const std::exception& e) {
            // No session: reject and close.
            send_mandatory(error_message(0, e.what()).dump());
            closing_ = true;
            close_after_flush();
            return;
        }
        send_mandatory(session_->take_frame().dump());
        last_tick_ = std::chrono::steady_clock::now();
        schedule_tick();
    }

    void schedule_tick() {
        timer_.expires_after(shared_->options.tick_interval);
        timer_.async_wait([self = shared_from_this()](beast::error_code ec) {
            if (!ec) self->on_tick();
        });
    }

    void on_tick() {
        if (!session_ || closing_) return;
        std::optional<double> fps;
        const auto now = std::chrono::steady_clock::now();
        if (shared_->options.real_fps) {
            const double ms = std::chrono::duration<double, std::milli>(now - last_tick_).count();
            fps = ms > 0 ? std::min(60.0, 1000.0 / ms) : 60.0;
        }
        last_tick_ = now;
        session_->tick(fps);
        if (session_->finished()) {
            send_mandatory(session_->take_frame().dump());
            send_mandatory(session_->end_frame().dump());
            closing_ = true;
            close_after_flush();
            return;
        }
        // Droppable: only build a frame when the socket is idle, so pending
        // adaptations stay queued until a frame actually goes out.
        if (!writing_ && queue_.empty()) send_mandatory(session_->take_frame().dump());
        schedule_tick();
    }

    void send_mandatory(std::string text) {
        queue_.push_back(std::move(text));
        if (!writing_) write_next();
    }

    void write_next() {
        if (queue_.empty()) {
            writing_ = false;
            if (close_pending_) do_close();
            return;
        }
        writing_ = true;
        ws_.text(true);
        ws_.async_write(asio::buffer(queue_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
            self->queue_.pop_front();
            if (ec) {
                self->close_session();
                return;
            }
            self->write_next();
        });
    }

    void close_after_flush() {
        close_pending_ = true;
        if (!writing_) do_close();
    }

    void do_close() {
        close_pending_ = false;
        timer_.cancel();
        ws_.async_close(websocket::close_code::normal, [self = shared_from_this()](beast::error_code) {});
    }

    void close_session() {
        closing_ = true;
        timer_.cancel();
        session_.reset();
    }

    websocket::stream<beast::tcp_stream> ws_;
    asio::steady_timer timer_;
    std::shared_ptr<Shared> shared_;
    beast::flat_buffer buffer_;
    std::unique_ptr<Session> session_;
    std::deque<std::string> queue_;
    bool writing_{false};
    bool closing_{false};
    bool close_pending_{false};
    std::chrono::steady_clock::time_point last_tick_;
};

class HttpConnection : public std::enable_shared_from_this<HttpConnection> {
public:
    HttpConnection(tcp::socket&& socket, std::shared_ptr<Shared> shared)
        : stream_(std::move(socket)), shared_(std::move(shared)) {}

    void start() {
        request_ = {};
        stream_.expires_after(std::chrono::seconds(30));
        http::async_read(stream_, buffer_, request_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (!ec) self->on_request();
        });
    }

private:
    void on_request() {
        if (websocket::is_upgrade(request_)) {
            stream_.expires_never();
            std::make_shared<WsConnection>(stream_.release_socket(), shared_)->start(std::move(request_));
            return;
        }
        auto response = std::make_shared<http::response<http::string_body>>(respond());
        http::async_write(stream_, *response, [self = shared_from_this(), response](beast::error_code ec, std::size_t) {
            if (ec) return;
            if (response->need_eof()) {
                beast::error_code ignored;
                self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
            } else {
                self->start();
            }
        });
    }

    http::response<http::string_body> respond() const {
        http::response<http::string_body> res{http::status::ok, request_.version()};
        res.keep_alive(request_.keep_alive());
        res.set(http::field::server, "feesh");
        auto fail = [&](http::status status, std::string_view body) {
            res.result(status);
            res.set(http::field::content_type, "text/plain; charset=utf-8");
            res.body() = std::string(body);
            res.prepare_payload();
            return res;
        };
        if (request_.method() != http::verb::get && request_.method() != http::verb::head) {
            return fail(http::status::method_not_allowed, "method not allowed\n");
        }
        const std::string_view target(request_.target().data(), request_.target().size());
        const auto& root = shared_->options.static_dir;
        if (!root) {
            if (target == "/" || target == "/index.html") {
                res.set(http::field::content_type, "text/html; charset=utf-8");
                res.body() = std::string(placeholder_page);
                res.prepare_payload();
                return res;
            }
            return fail(http::status::not_found, "not found\n");
        }
        auto path = resolve_static(*root, target);
        if (!path) return fail(http::status::bad_request, "bad path\n");
        std::ifstream in(*path, std::ios::binary);
        if (!in || std::filesystem::is_directory(*path)) return fail(http::status::not_found, "not found\n");
        std::ostringstream body;
        body << in.rdbuf();
        res.set(http::field::content_type, mime_type(*path));
        res.body() = body.str();
        res.prepare_payload();
        if (request_.method() == http::verb::head) res.body().clear();
        return res;
    }

    beast::tcp_stream stream_;
    std::shared_ptr<Shared> shared_;
    beast::flat_buffer buffer_;
    http::request<http::string_body> request_;
};

}  // namespace

struct Server::Impl {
    asio::io_context ioc{1};
    tcp::acceptor acceptor{ioc};
    std::shared_ptr<Shared> shared;

    void accept() {
        acceptor.async_accept(ioc, [this](beast::error_code ec, tcp::socket socket) {
            if (ec == asio::error::operation_aborted) return;
            if (!ec) std::make_shared<HttpConnection>(std::move(socket), shared)->start();
            accept();
        });
    }
};

Server::Server(ServerOptions options) : impl_(std::make_unique<Impl>()) {
    options.base_config.validate();
    impl_->shared = std::make_shared<Shared>();
    impl_->shared->next_seed = options.base_seed;
    impl_->shared->options = std::move(options);
    const auto& opts = impl_->shared->options;
    const tcp::endpoint endpoint{asio::ip::make_address(opts.host), opts.port};
    impl_->acceptor.open(endpoint.protocol());
    impl_->acceptor.set_option(asio::socket_base::reuse_address(true));
    impl_->acceptor.bind(endpoint);
    impl_->acceptor.listen(asio::socket_base::max_listen_connections);
    impl_->accept();
}

Server::~Server() = default;

unsigned short Server::port() const { return impl_->acceptor.local_endpoint().port(); }

void Server::run() { impl_->ioc.run(); }

void Server::stop() { impl_->ioc.stop(); }

}  // namespace feesh::service
