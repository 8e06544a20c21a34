#include "feesh/service/session.hpp"

#include <variant>

#include "feesh/goal_file.hpp"

namespace feesh::service {

using nlohmann::json;

namespace {

RunConfig merge(const RunConfig& base, const json& overrides) {
    RunConfig config = base;
    apply_json(config, overrides);
    config.validate();
    return config;
}

json blob_json(const game::Blob& blob, std::uint64_t tick) {
    json outline = json::array();
    for (const auto& p : game::wobble_outline(blob, tick)) outline.push_back({p.x, p.y});
    return {{"x", blob.position.x}, {"y", blob.position.y}, {"r", blob.radius}, {"outline", std::move(outline)}};
}

json applied_json(const mapek::AppliedAction& a) {
    return {{"tick", a.tick},         {"action", a.action.describe()}, {"kind", mapek::to_string(a.action.kind)},
            {"trigger", a.trigger},   {"metric", a.metric},            {"before", a.before},
            {"after", a.after}};
}

}  // namespace

Session::Session(std::string id, const HelloRequest& hello, const RunConfig& base, std::uint64_t default_seed)
    : id_(std::move(id)),
      config_(merge(base, hello.config)),
      world_(config_.game, hello.seed.value_or(default_seed)),
      knowledge_(goals::default_goal_model(), config_.mapek),
      mapek_enabled_(hello.mapek_enabled) {
    auto [snapshot, evaluation] = mapek::observe(world_, knowledge_);
    last_evaluation_ = std::move(evaluation);
    last_fps_ = snapshot.fps;
}

std::optional<json> Session::handle_text(std::string_view text) {
    ClientMessage message;
    try {
        message = parse_client_message(text);
    } catch (const ProtocolError& e) {
        return error_message(world_.tick(), e.what());
    }
    if (std::holds_alternative<HelloRequest>(message)) {
        return error_message(world_.tick(), "session already open");
    }
    if (auto* input = std::get_if<InputMessage>(&message)) handle(*input);
    if (auto* toggle = std::get_if<ToggleMessage>(&message)) handle(*toggle);
    return std::nullopt;
}

void Session::handle(const InputMessage& message) { input_ = clamp_direction(message.direction); }

void Session::handle(const ToggleMessage& message) { queued_toggles_.push_back(message); }

void Session::apply_toggles() {
    const auto tick = world_.tick();
    for (const auto& t : queued_toggles_) {
        if (t.mapek_enabled) {
            mapek_enabled_ = *t.mapek_enabled;
            knowledge_.note_external(tick, std::string("mapekEnabled=") + (mapek_enabled_ ? "true" : "false"));
        }
        if (t.enemy_enemy_collision) {
            world_.set_enemy_enemy_collision(*t.enemy_enemy_collision);
            knowledge_.note_external(tick, std::string("enemyEnemyCollision=") +
                                               (*t.enemy_enemy_collision ? "true" : "false"));
        }
        if (t.target_enemy_count) {
            world_.set_target_enemy_count(*t.target_enemy_count);
            knowledge_.note_external(tick, "targetEnemyCount=" + std::to_string(*t.target_enemy_count));
        }
    }
    queued_toggles_.clear();
}

void Session::tick(std::optional<double> measured_fps) {
    if (!world_.running()) throw game::NotRunning("session " + id_ + " has ended");
    apply_toggles();
    world_.step(input_);
    if (!world_.running()) return;
    if (mapek_enabled_) {
        auto outcome = mapek::mape_tick(world_, knowledge_, measured_fps);
        pending_.insert(pending_.end(), outcome.applied.begin(), outcome.applied.end());
        last_evaluation_ = std::move(outcome.evaluation);
        last_fps_ = outcome.snapshot.fps;
    } else {
        auto [snapshot, evaluation] = mapek::observe(world_, knowledge_, measured_fps);
        last_evaluation_ = std::move(evaluation);
        last_fps_ = snapshot.fps;
    }
}

json Session::take_frame() {
    const auto tick = world_.tick();
    json enemies = json::array();
    for (const auto& e : world_.enemies()) enemies.push_back(blob_json(e, tick));
    json goals = json::object();
    for (const auto& [id, result] : last_evaluation_.results) {
        goals[id] = {{"value", result.value}, {"status", goals::to_string(result.status)}};
    }
    json adaptations = json::array();
    for (const auto& a : pending_) adaptations.push_back(applied_json(a));
    pending_.clear();

    json frame = {{"type", "state"},
                  {"tick", tick},
                  {"session", id_},
                  {"status", game::to_string(world_.status())},
                  {"canvas", {{"width", world_.width()}, {"height", world_.height()}}},
                  {"player", blob_json(world_.player(), tick)},
                  {"enemies", std::move(enemies)},
                  {"score", world_.score()},
                  {"fps", last_fps_},
                  {"goals", std::move(goals)},
                  {"mapekEnabled", mapek_enabled_},
                  {"enemyEnemyCollision", world_.config().enemy_enemy_collision},
                  {"targetEnemyCount", world_.config().target_enemy_count},
                  {"randomEvent", world_.random_event_last_step()},
                  {"adaptations", std::move(adaptations)}};
    if (finished()) frame["outcome"] = outcome();
    return frame;
}

std::string Session::outcome() const {
    return finished() ? std::string(game::to_string(world_.status())) : std::string();
}

json Session::end_frame() const { return end_message(world_.tick(), outcome(), world_.score()); }

}  // namespace feesh::service
