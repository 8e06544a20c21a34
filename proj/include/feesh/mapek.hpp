#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "feesh/game.hpp"
#include "feesh/goal_model.hpp"
#include "feesh/metrics.hpp"

namespace feesh::mapek {

/// Tuning for the feedback loop. Strategy switches exist so that scenarios can
/// disable a row of reconfiguration strategies while keeping the monitors.
struct MapeConfig {
    /// Below this modeled frame rate the FPS goal (B) is flagged.
    double fps_threshold{30.0};
    bool fps_strategies{true};
    bool playability_strategies{true};
    double reduce_enemy_fraction{0.2};
    /// Fraction of the player diameter removed by ReducePlayerSize.
    double shrink_factor{0.5};
    /// Consecutive ticks an invariant goal may stay violated before the run fails.
    std::uint64_t grace_window{120};
    /// Snapshots/evaluations retained in knowledge; also the score window.
    std::size_t history{120};
    /// Goal flagged by the FPS trigger and the playability trigger respectively.
    std::string fps_goal{"B"};
    std::string playability_goal{"C"};

    void validate() const;
    bool operator==(const MapeConfig&) const = default;
};

enum class ActionKind { ReduceEnemyCount, DisableEnemyEnemyCollision, ReducePlayerSize, IncreaseEnemyCount };
std::string_view to_string(ActionKind kind);

struct Action {
    ActionKind kind;
    /// Fraction for ReduceEnemyCount, factor for ReducePlayerSize, count for
    /// IncreaseEnemyCount, unused for DisableEnemyEnemyCollision.
    double amount{0.0};

    static Action reduce_enemy_count(double fraction);
    static Action disable_enemy_enemy_collision() { return {ActionKind::DisableEnemyEnemyCollision, 0.0}; }
    static Action reduce_player_size(double factor = 0.5);
    static Action increase_enemy_count(std::uint64_t n) { return {ActionKind::IncreaseEnemyCount, static_cast<double>(n)}; }

    /// e.g. "ReducePlayerSize(0.5)".
    std::string describe() const;
    bool operator==(const Action&) const = default;
};

struct Plan {
    std::vector<Action> actions;
    /// Goal that triggered each action; parallel to `actions`.
    std::vector<std::string> triggers;
    std::uint64_t tick{0};

    bool empty() const { return actions.empty(); }
    bool operator==(const Plan&) const = default;
};

struct Finding {
    std::string goal;
    bool invariant{false};
    double value{0.0};
    std::string reason;
    bool operator==(const Finding&) const = default;
};

struct AnalysisReport {
    std::uint64_t tick{0};
    /// The snapshot the report was derived from.
    MetricsSnapshot snapshot;
    std::vector<Finding> findings;
    bool fps_violation{false};
    bool playability_violation{false};
    bool invariant_violation{false};

    bool empty() const { return findings.empty(); }
    bool flags(std::string_view goal) const;
};

struct AppliedAction {
    std::uint64_t tick{0};
    Action action;
    std::string trigger;
    /// Metric the action targets and its value before and after.
    std::string metric;
    double before{0.0};
    double after{0.0};
    bool operator==(const AppliedAction&) const = default;
};

/// One executed, non-empty plan.
struct AdaptationRecord {
    std::uint64_t tick{0};
    std::vector<AppliedAction> applied;
};

/// Knowledge shared by every phase of the loop for one session.
class Knowledge {
public:
    explicit Knowledge(goals::ValidatedGoalModel model, MapeConfig config = {});

    const goals::ValidatedGoalModel& model() const { return model_; }
    const MapeConfig& config() const { return config_; }
    MapeConfig& config() { return config_; }

    void record(const MetricsSnapshot& snapshot);
    void record(const goals::GoalEvaluation& evaluation);
    const std::deque<MetricsSnapshot>& snapshots() const { return snapshots_; }
    const std::deque<goals::GoalEvaluation>& evaluations() const { return evaluations_; }
    const MetricsSnapshot* latest() const { return snapshots_.empty() ? nullptr : &snapshots_.back(); }
    /// Score at the start of the retained window (current score when empty).
    std::int64_t window_start_score(std::int64_t current) const;

    void append(AdaptationRecord record) { log_.push_back(std::move(record)); }
    const std::vector<AdaptationRecord>& log() const { return log_; }
    std::size_t applied_action_count() const;

    /// Changes made from outside the loop (e.g. a player's toggle).
    void note_external(std::uint64_t tick, std::string change) { external_.emplace_back(tick, std::move(change)); }
    const std::vector<std::pair<std::uint64_t, std::string>>& external_changes() const { return external_; }

    std::uint64_t grace_counter() const { return grace_counter_; }
    void advance_grace() { ++grace_counter_; }
    void reset_grace() { grace_counter_ = 0; }

    bool halted() const { return halted_; }
    void halt() { halted_ = true; }

private:
    goals::ValidatedGoalModel model_;
    MapeConfig config_;
    std::deque<MetricsSnapshot> snapshots_;
    std::deque<goals::GoalEvaluation> evaluations_;
    std::vector<AdaptationRecord> log_;
    std::vector<std::pair<std::uint64_t, std::string>> external_;
    std::uint64_t grace_counter_{0};
    bool halted_{false};
};

/// Builds the snapshot from world state and the frame-cost model (or a
/// measured frame rate), and records it. Requires a running world.
MetricsSnapshot monitor(const game::World& world, Knowledge& knowledge,
                        std::optional<double> measured_fps = std::nullopt);

/// Flags goals below threshold plus the two explicit triggers: frame rate
/// under the FPS threshold flags the FPS goal, a player diameter above half
/// the canvas flags the playability goal. Advances or resets the grace counter.
/// Throws std::invalid_argument if snapshot and evaluation ticks differ.
AnalysisReport analyze(const MetricsSnapshot& snapshot, const goals::GoalEvaluation& evaluation, Knowledge& knowledge);

Plan plan(const AnalysisReport& report, const Knowledge& knowledge);

/// Applies every action of the plan and logs the result. Throws
/// game::NotRunning on a terminal world.
std::vector<AppliedAction> execute(const Plan& plan, game::World& world, Knowledge& knowledge);

struct StepOutcome {
    MetricsSnapshot snapshot;
    goals::GoalEvaluation evaluation;
    AnalysisReport report;
    Plan plan;
    std::vector<AppliedAction> applied;
    /// The grace window ran out this tick and the world was failed.
    bool failed{false};
};

/// One full monitor -> evaluate -> analyze -> plan -> execute pass. Run once
/// per tick after game::World::step while the world is running.
StepOutcome mape_tick(game::World& world, Knowledge& knowledge, std::optional<double> measured_fps = std::nullopt);

/// Monitor and evaluate only; for displaying utilities while adaptation is off.
std::pair<MetricsSnapshot, goals::GoalEvaluation> observe(const game::World& world, Knowledge& knowledge,
                                                          std::optional<double> measured_fps = std::nullopt);

/// Header line of the adaptation-log export.
std::string_view adaptation_log_header();
/// One tab-separated line per applied action.
std::string export_adaptation_log(const std::vector<AdaptationRecord>& log);

}  // namespace feesh::mapek
