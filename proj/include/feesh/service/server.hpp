#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "feesh/config.hpp"

namespace feesh::service {

struct ServerOptions {
    std::string host{"127.0.0.1"};
    /// 0 picks a free port; see Server::port().
    unsigned short port{8080};
    /// Directory served over plain HTTP. Without it "/" returns a short
    /// placeholder page and everything else is 404.
    std::optional<std::filesystem::path> static_dir;
    /// Feed wall-clock frame rate to the monitor instead of the cost model.
    bool real_fps{false};
    std::chrono::microseconds tick_interval{16667};
    /// Sessions whose hello carries no seed get base_seed, base_seed + 1, ...
    std::uint64_t base_seed{1};
    RunConfig base_config;
};

/// WebSocket session server. Single-threaded: every session's tick loop,
/// reads and writes run on one event loop, so sessions never share state
/// across threads. Plain HTTP requests get static files.
class Server {
public:
    /// Binds immediately; throws std::system_error if the address is unusable.
    explicit Server(ServerOptions options);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    unsigned short port() const;
    /// Runs the event loop until stop() is called.
    void run();
    /// Safe to call from any thread.
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// MIME type by file extension, "application/octet-stream" if unknown.
std::string mime_type(const std::filesystem::path& path);

/// Maps a request target onto `root`. Returns nothing for targets that
/// escape the root; any query string is ignored and "/" maps to index.html.
std::optional<std::filesystem::path> resolve_static(const std::filesystem::path& root, std::string_view target);

}  // namespace feesh::service
