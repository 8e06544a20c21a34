#include <doctest.h>

#include <chrono>
#include <thread>

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "feesh/service/protocol.hpp"
#include "feesh/service/server.hpp"
#include "feesh/service/session.hpp"

using namespace feesh;
using namespace feesh::service;
using nlohmann::json;

namespace {

HelloRequest hello_with(json config, bool mapek = true) {
    HelloRequest h;
    h.config = std::move(config);
    h.mapek_enabled = mapek;
    h.seed = 7;
    return h;
}

}  // namespace

TEST_CASE("protocol parsing") {
    SUBCASE("hello") {
        const auto m = parse_client_message(R"({"type":"hello","tick":0,"seed":5,"config":{"game":{"width":900}}})");
        const auto& h = std::get<HelloRequest>(m);
        CHECK(h.seed == 5u);
        CHECK(h.config["game"]["width"] == 900);
        CHECK(h.mapek_enabled);
    }
    SUBCASE("input") {
        const auto m = parse_client_message(R"({"type":"input","tick":3,"dx":0.5,"dy":-0.25})");
        CHECK(std::get<InputMessage>(m).direction == Vec2{0.5, -0.25});
    }
    SUBCASE("toggle") {
        const auto m = parse_client_message(R"({"type":"toggle","tick":3,"targetEnemyCount":4,"mapekEnabled":false})");
        const auto& t = std::get<ToggleMessage>(m);
        CHECK(t.target_enemy_count == 4u);
        CHECK(t.mapek_enabled == false);
        CHECK_FALSE(t.enemy_enemy_collision.has_value());
    }
    SUBCASE("rejections") {
        for (const char* bad : {"not json", "[1,2]", R"({"tick":1})", R"({"type":"input"})",
                                R"({"type":"warp","tick":1})", R"({"type":"input","tick":1,"dx":"left","dy":0})",
                                R"({"type":"toggle","tick":1})", R"({"type":"toggle","tick":1,"mapekEnabled":1})",
                                R"({"type":"input","tick":-1,"dx":0,"dy":0})"}) {
            CHECK_THROWS_AS(parse_client_message(bad), ProtocolError);
        }
    }
    SUBCASE("direction clamping") {
        CHECK(clamp_direction({3, 4}) == Vec2{0.6, 0.8});
        CHECK(clamp_direction({0.3, 0.4}) == Vec2{0.3, 0.4});
    }
}

TEST_CASE("session creation") {
    Session s("s1", hello_with({{"game", {{"enemy_enemy_collision", false}}}}));
    const auto frame = s.take_frame();
    CHECK(frame["type"] == "state");
    CHECK(frame["tick"] == 0);
    CHECK(frame["enemyEnemyCollision"] == false);
    CHECK(frame["mapekEnabled"] == true);
    CHECK(frame["enemies"].size() == 20);
    CHECK(frame["player"]["outline"].size() == 16);
    CHECK(frame["goals"]["A"]["value"] == 1.0);
    CHECK(frame["goals"].size() == 10);
    CHECK_FALSE(frame.contains("outcome"));

    CHECK_THROWS_AS(Session("s2", hello_with({{"game", {{"width", "wide"}}}})), ConfigError);
    CHECK_THROWS_AS(Session("s3", hello_with({{"bogus", 1}})), ConfigError);
    CHECK_THROWS_AS(Session("s4", hello_with({{"game", {{"width", -5}}}})), ConfigError);
}

TEST_CASE("input buffering keeps the latest vector until replaced") {
    Session s("s", hello_with({{"game", {{"target_enemy_count", 0}, {"random_event_probability", 0.0}}}}));
    CHECK_FALSE(s.handle_text(R"({"type":"input","tick":0,"dx":0,"dy":1})"));
    CHECK_FALSE(s.handle_text(R"({"type":"input","tick":0,"dx":3,"dy":0})"));
    const double x0 = s.world().player().position.x;
    s.tick();
    s.tick();
    CHECK(s.world().player().position.x == doctest::Approx(x0 + 6.0));
}

TEST_CASE("toggles apply on the next tick and are logged") {
    Session s("s", hello_with(json::object()));
    CHECK_FALSE(s.handle_text(R"({"type":"toggle","tick":0,"enemyEnemyCollision":false,"targetEnemyCount":12})"));
    CHECK(s.world().config().enemy_enemy_collision);
    s.tick();
    const auto frame = s.take_frame();
    CHECK(frame["enemyEnemyCollision"] == false);
    CHECK(frame["targetEnemyCount"].get<std::uint64_t>() >= 12);
    CHECK(s.knowledge().external_changes().size() == 2);
}

TEST_CASE("malformed messages yield an error frame and the session continues") {
    Session s("s", hello_with(json::object()));
    const auto err = s.handle_text("{oops");
    REQUIRE(err);
    CHECK((*err)["type"] == "error");
    CHECK(err->contains("tick"));
    const auto again = s.handle_text(R"({"type":"hello","tick":0})");
    REQUIRE(again);
    CHECK((*again)["type"] == "error");
    s.tick();
    CHECK(s.take_frame()["tick"] == 1);
}

TEST_CASE("adaptations appear in exactly one frame") {
    // Start oversized so the playability strategy fires on the first tick.
    Session s("s", hello_with({{"game", {{"player_start_radius", 250.0}, {"target_enemy_count", 0},
                                          {"random_event_probability", 0.0}}}}));
    s.take_frame();
    s.tick();
    s.tick();  // frame for tick 1 dropped
    CHECK(s.pending_adaptations() == 1);
    const auto frame = s.take_frame();
    REQUIRE(frame["adaptations"].size() == 1);
    CHECK(frame["adaptations"][0]["action"] == "ReducePlayerSize(0.5)");
    CHECK(frame["adaptations"][0]["tick"] == 1);
    s.tick();
    CHECK(s.take_frame()["adaptations"].empty());
}

TEST_CASE("disabling the feedback loop stops adaptation") {
    Session s("s", hello_with({{"game", {{"player_start_radius", 250.0}, {"target_enemy_count", 0},
                                          {"random_event_probability", 0.0}}}}));
    s.handle_text(R"({"type":"toggle","tick":0,"mapekEnabled":false})");
    for (int i = 0; i < 10; ++i) s.tick();
    CHECK(s.knowledge().log().empty());
    CHECK(s.world().player().diameter() == 500.0);
    const auto frame = s.take_frame();
    CHECK(frame["mapekEnabled"] == false);
    CHECK(frame["goals"]["F"]["value"].get<double>() == doctest::Approx(0.75));
}

TEST_CASE("idle sessions keep moving") {
    Session s("s", hello_with(json::object()));
    const auto before = s.take_frame()["enemies"];
    s.tick();
    CHECK(s.take_frame()["enemies"] != before);
}

TEST_CASE("a terminal tick produces a flagged frame and an end message") {
    Session s("s", hello_with({{"game", {{"player_start_radius", 400.0}}}}, false));
    s.tick();
    REQUIRE(s.finished());
    const auto frame = s.take_frame();
    CHECK(frame["outcome"] == "Won");
    const auto end = s.end_frame();
    CHECK(end["type"] == "end");
    CHECK(end["outcome"] == "Won");
    CHECK(end["tick"] == 1);
    CHECK_THROWS_AS(s.tick(), game::NotRunning);
}

TEST_CASE("static path resolution") {
    const std::filesystem::path root = "/srv/www";
    CHECK(resolve_static(root, "/") == root / "index.html");
    CHECK(resolve_static(root, "/app.js?v=2") == root / "app.js");
    CHECK(resolve_static(root, "/a/./b.css") == root / "a" / "b.css");
    CHECK_FALSE(resolve_static(root, "/../etc/passwd"));
    CHECK_FALSE(resolve_static(root, "relative"));
    CHECK(mime_type("x.js").rfind("text/javascript", 0) == 0);
    CHECK(mime_type("x.bin") == "application/octet-stream");
}

namespace {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
namespace http = beast::http;
using tcp = asio::ip::tcp;

struct RunningServer {
    Server server;
    std::thread thread;

    explicit RunningServer(ServerOptions options) : server(std::move(options)) {
        thread = std::thread([this] { server.run(); });
    }
    ~RunningServer() {
        server.stop();
        thread.join();
    }
};

ServerOptions test_options() {
    ServerOptions o;
    o.port = 0;
    o.tick_interval = std::chrono::milliseconds(2);
    return o;
}

struct Client {
    asio::io_context ioc;
    websocket::stream<tcp::socket> ws{ioc};

    explicit Client(unsigned short port) {
        tcp::resolver resolver(ioc);
        asio::connect(ws.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
        ws.handshake("127.0.0.1", "/");
    }
    void send(const json& j) { ws.write(asio::buffer(j.dump())); }
    void send_raw(const std::string& s) { ws.write(asio::buffer(s)); }
    json read() {
        beast::flat_buffer buf;
        ws.read(buf);
        return json::parse(beast::buffers_to_string(buf.data()));
    }
};

}  // namespace

TEST_CASE("websocket round trip") {
    RunningServer rs(test_options());
    Client c(rs.server.port());
    c.send({{"type", "hello"}, {"tick", 0}, {"seed", 3}});
    const auto first = c.read();
    CHECK(first["type"] == "state");
    CHECK(first["tick"] == 0);
    CHECK(first["enemyEnemyCollision"] == true);

    c.send({{"type", "toggle"}, {"tick", first["tick"]}, {"enemyEnemyCollision", false}});
    c.send_raw("definitely not json");
    bool saw_flag = false, saw_error = false;
    std::uint64_t last_tick = 0;
    for (int i = 0; i < 200 && !(saw_flag && saw_error); ++i) {
        const auto m = c.read();
        if (m["type"] == "error") {
            saw_error = true;
            continue;
        }
        REQUIRE(m["type"] == "state");
        CHECK(m["tick"].get<std::uint64_t>() > last_tick);
        last_tick = m["tick"].get<std::uint64_t>();
        if (m["enemyEnemyCollision"] == false) saw_flag = true;
    }
    CHECK(saw_flag);
    CHECK(saw_error);
    // The stream keeps going after the error.
    CHECK(c.read()["type"] == "state");
}

TEST_CASE("websocket session ends with the outcome") {
    RunningServer rs(test_options());
    Client c(rs.server.port());
    c.send({{"type", "hello"}, {"tick", 0}, {"mapekEnabled", false}, {"config", {{"game", {{"player_start_radius", 400}}}}}});
    CHECK(c.read()["tick"] == 0);
    const auto final_frame = c.read();
    CHECK(final_frame["type"] == "state");
    CHECK(final_frame["outcome"] == "Won");
    const auto end = c.read();
    CHECK(end["type"] == "end");
    CHECK(end["outcome"] == "Won");
    beast::flat_buffer buf;
    beast::error_code ec;
    c.ws.read(buf, ec);
    CHECK(ec == websocket::error::closed);
}

TEST_CASE("a malformed hello is rejected without a session") {
    RunningServer rs(test_options());
    Client c(rs.server.port());
    c.send({{"type", "hello"}, {"tick", 0}, {"config", {{"game", {{"width", "wide"}}}}}});
    const auto m = c.read();
    CHECK(m["type"] == "error");
    beast::flat_buffer buf;
    beast::error_code ec;
    c.ws.read(buf, ec);
    CHECK(ec == websocket::error::closed);
}

TEST_CASE("plain HTTP gets the placeholder or a 404") {
    RunningServer rs(test_options());
    auto get = [&](const std::string& target) {
        asio::io_context ioc;
        tcp::socket sock(ioc);
        tcp::resolver resolver(ioc);
        asio::connect(sock, resolver.resolve("127.0.0.1", std::to_string(rs.server.port())));
        http::request<http::empty_body> req{http::verb::get, target, 11};
        req.set(http::field::host, "127.0.0.1");
        req.keep_alive(false);
        http::write(sock, req);
        beast::flat_buffer buf;
        http::response<http::string_body> res;
        http::read(sock, buf, res);
        return res;
    };
    const auto root = get("/");
    CHECK(root.result() == http::status::ok);
    CHECK(root.body().find("hello") != std::string::npos);
    CHECK(get("/missing.js").result() == http::status::not_found);
}
