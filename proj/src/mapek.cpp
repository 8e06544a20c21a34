#include "feesh/mapek.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace feesh::mapek {

void MapeConfig::validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("mapek config: " + what); };
    if (!(fps_threshold >= 0.0)) fail("fps_threshold must be non-negative");
    if (!(reduce_enemy_fraction > 0.0 && reduce_enemy_fraction < 1.0)) fail("reduce_enemy_fraction must lie on (0, 1)");
    if (!(shrink_factor > 0.0 && shrink_factor < 1.0)) fail("shrink_factor must lie on (0, 1)");
    if (history == 0) fail("history must be positive");
}

std::string_view to_string(ActionKind kind) {
    switch (kind) {
        case ActionKind::ReduceEnemyCount: return "ReduceEnemyCount";
        case ActionKind::DisableEnemyEnemyCollision: return "DisableEnemyEnemyCollision";
        case ActionKind::ReducePlayerSize: return "ReducePlayerSize";
        case ActionKind::IncreaseEnemyCount: return "IncreaseEnemyCount";
    }
    return "?";
}

Action Action::reduce_enemy_count(double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw std::invalid_argument("ReduceEnemyCount fraction must lie on (0, 1)");
    return {ActionKind::ReduceEnemyCount, fraction};
}

Action Action::reduce_player_size(double factor) {
    if (!(factor > 0.0 && factor < 1.0)) throw std::invalid_argument("ReducePlayerSize factor must lie on (0, 1)");
    return {ActionKind::ReducePlayerSize, factor};
}

std::string Action::describe() const {
    char buf[96];
    switch (kind) {
        case ActionKind::DisableEnemyEnemyCollision:
            return "DisableEnemyEnemyCollision";
        case ActionKind::IncreaseEnemyCount:
            std::snprintf(buf, sizeof buf, "IncreaseEnemyCount(%.0f)", amount);
            return buf;
        default:
            std::snprintf(buf, sizeof buf, "%s(%g)", std::string(to_string(kind)).c_str(), amount);
            return buf;
    }
}

bool AnalysisReport::flags(std::string_view goal) const {
    return std::any_of(findings.begin(), findings.end(), [&](const Finding& f) { return f.goal == goal; });
}

Knowledge::Knowledge(goals::ValidatedGoalModel model, MapeConfig config)
    : model_(std::move(model)), config_(std::move(config)) {
    config_.validate();
}

void Knowledge::record(const MetricsSnapshot& snapshot) {
    snapshots_.push_back(snapshot);
    while (snapshots_.size() > config_.history) snapshots_.pop_front();
}

void Knowledge::record(const goals::GoalEvaluation& evaluation) {
    evaluations_.push_back(evaluation);
    while (evaluations_.size() > config_.history) evaluations_.pop_front();
}

std::int64_t Knowledge::window_start_score(std::int64_t current) const {
    return snapshots_.empty() ? current : snapshots_.front().score;
}

std::size_t Knowledge::applied_action_count() const {
    std::size_t n = 0;
    for (const auto& r : log_) n += r.applied.size();
    return n;
}

MetricsSnapshot monitor(const game::World& world, Knowledge& knowledge, std::optional<double> measured_fps) {
    if (!world.running()) throw game::NotRunning("monitor: world is not running");
    MetricsSnapshot s;
    s.tick = world.tick();
    s.fps = measured_fps ? *measured_fps : game::modeled_fps(world);
    s.player_size = world.player().diameter();
    s.canvas_width = world.width();
    s.playability = goals::util_player_size(s.player_size, s.canvas_width);
    s.score = world.score();
    s.window_start_score = knowledge.window_start_score(world.score());
    s.enemy_count = world.enemies().size();
    s.collision_enabled = world.config().enemy_enemy_collision;
    s.execution_time = world.tick();
    s.random_event_fired = world.random_event_last_step();
    knowledge.record(s);
    return s;
}

AnalysisReport analyze(const MetricsSnapshot& snapshot, const goals::GoalEvaluation& evaluation, Knowledge& knowledge) {
    if (snapshot.tick != evaluation.tick) {
        throw std::invalid_argument("analyze: snapshot tick " + std::to_string(snapshot.tick) +
                                    " does not match evaluation tick " + std::to_string(evaluation.tick));
    }
    const auto& model = knowledge.model().model();
    const auto& cfg = knowledge.config();

    AnalysisReport report;
    report.tick = snapshot.tick;
    report.snapshot = snapshot;

    for (const auto& goal : model.goals()) {
        const auto& result = evaluation.results.at(goal.id);
        if (result.status != goals::Status::Violated) continue;
        char reason[96];
        std::snprintf(reason, sizeof reason, "utility %.4g below threshold %.4g", result.value, goal.threshold);
        report.findings.push_back({goal.id, goal.invariant, result.value, reason});
    }

    auto flag = [&](const std::string& goal_id, std::string reason) {
        const auto* goal = model.find(goal_id);
        if (report.flags(goal_id)) return;
        const double value = evaluation.results.contains(goal_id) ? evaluation.results.at(goal_id).value : 0.0;
        report.findings.push_back({goal_id, goal != nullptr && goal->invariant, value, std::move(reason)});
    };

    if (snapshot.fps < cfg.fps_threshold) {
        report.fps_violation = true;
        char reason[64];
        std::snprintf(reason, sizeof reason, "fps %.4g below %.4g", snapshot.fps, cfg.fps_threshold);
        flag(cfg.fps_goal, reason);
    }
    if (snapshot.player_size > snapshot.canvas_width / 2.0 || report.flags(cfg.playability_goal)) {
        report.playability_violation = true;
        char reason[80];
        std::snprintf(reason, sizeof reason, "player size %.4g above half width %.4g", snapshot.player_size,
                      snapshot.canvas_width / 2.0);
        flag(cfg.playability_goal, reason);
    }

    report.invariant_violation =
        std::any_of(report.findings.begin(), report.findings.end(), [](const Finding& f) { return f.invariant; });
    if (report.invariant_violation) {
        knowledge.advance_grace();
    } else {
        knowledge.reset_grace();
    }
    return report;
}

Plan plan(const AnalysisReport& report, const Knowledge& knowledge) {
    Plan p;
    p.tick = report.tick;
    if (knowledge.halted()) return p;
    const auto& cfg = knowledge.config();

    auto add = [&](Action action, const std::string& trigger) {
        const bool duplicate = std::any_of(p.actions.begin(), p.actions.end(),
                                           [&](const Action& a) { return a.kind == action.kind; });
        if (duplicate) return;
        p.actions.push_back(action);
        p.triggers.push_back(trigger);
    };

    // Within each strategy list, the first applicable entry is the least disruptive.
    if (report.fps_violation && cfg.fps_strategies) {
        if (report.snapshot.collision_enabled) {
            add(Action::disable_enemy_enemy_collision(), cfg.fps_goal);
        } else {
            add(Action::reduce_enemy_count(cfg.reduce_enemy_fraction), cfg.fps_goal);
        }
    }
    if (report.playability_violation && cfg.playability_strategies) {
        add(Action::reduce_player_size(cfg.shrink_factor), cfg.playability_goal);
        const double projected = report.snapshot.player_size * (1.0 - cfg.shrink_factor);
        if (projected > report.snapshot.canvas_width / 2.0) {
            add(Action::reduce_enemy_count(cfg.reduce_enemy_fraction), cfg.playability_goal);
        }
    }
    return p;
}

std::vector<AppliedAction> execute(const Plan& plan, game::World& world, Knowledge& knowledge) {
    if (!world.running()) throw game::NotRunning("execute: world is not running");
    std::vector<AppliedAction> applied;
    for (std::size_t i = 0; i < plan.actions.size(); ++i) {
        const Action& action = plan.actions[i];
        AppliedAction rec;
        rec.tick = world.tick();
        rec.action = action;
        rec.trigger = i < plan.triggers.size() ? plan.triggers[i] : std::string{};
        switch (action.kind) {
            case ActionKind::ReducePlayerSize: {
                rec.metric = "player_size";
                rec.before = world.player().diameter();
                world.set_player_diameter(rec.before * (1.0 - action.amount));
                rec.after = world.player().diameter();
                break;
            }
            case ActionKind::ReduceEnemyCount: {
                rec.metric = "enemy_count";
                const auto n = world.enemies().size();
                rec.before = static_cast<double>(n);
                // The epsilon keeps products such as 0.2 * 100 from rounding up past 20.
                const auto k = static_cast<std::size_t>(std::ceil(action.amount * static_cast<double>(n) - 1e-9));
                world.remove_random_enemies(k);
                rec.after = static_cast<double>(world.enemies().size());
                break;
            }
            case ActionKind::DisableEnemyEnemyCollision: {
                rec.metric = "fps";
                rec.before = game::modeled_fps(world);
                world.set_enemy_enemy_collision(false);
                rec.after = game::modeled_fps(world);
                break;
            }
            case ActionKind::IncreaseEnemyCount: {
                rec.metric = "target_enemy_count";
                rec.before = static_cast<double>(world.config().target_enemy_count);
                world.set_target_enemy_count(world.config().target_enemy_count +
                                             static_cast<std::uint64_t>(action.amount));
                rec.after = static_cast<double>(world.config().target_enemy_count);
                break;
            }
        }
        applied.push_back(std::move(rec));
    }
    if (!applied.empty()) knowledge.append({world.tick(), applied});
    return applied;
}

std::pair<MetricsSnapshot, goals::GoalEvaluation> observe(const game::World& world, Knowledge& knowledge,
                                                          std::optional<double> measured_fps) {
    auto snapshot = monitor(world, knowledge, measured_fps);
    auto evaluation = goals::evaluate(knowledge.model(), snapshot);
    knowledge.record(evaluation);
    return {snapshot, std::move(evaluation)};
}

StepOutcome mape_tick(game::World& world, Knowledge& knowledge, std::optional<double> measured_fps) {
    StepOutcome out;
    std::tie(out.snapshot, out.evaluation) = observe(world, knowledge, measured_fps);
    out.report = analyze(out.snapshot, out.evaluation, knowledge);
    out.plan = plan(out.report, knowledge);
    if (!out.plan.empty()) out.applied = execute(out.plan, world, knowledge);
    if (knowledge.grace_counter() > knowledge.config().grace_window && world.running()) {
        world.fail();
        knowledge.halt();
        out.failed = true;
    }
    return out;
}

std::string_view adaptation_log_header() { return "tick\taction\ttrigger\tmetric\tbefore\tafter"; }

std::string export_adaptation_log(const std::vector<AdaptationRecord>& log) {
    std::ostringstream out;
    out << adaptation_log_header() << '\n';
    char buf[256];
    for (const auto& record : log) {
        for (const auto& a : record.applied) {
            std::snprintf(buf, sizeof buf, "%llu\t%s\t%s\t%s\t%.17g\t%.17g\n", static_cast<unsigned long long>(a.tick),
                          a.action.describe().c_str(), a.trigger.c_str(), a.metric.c_str(), a.before, a.after);
            out << buf;
        }
    }
    return out.str();
}

}  // namespace feesh::mapek
