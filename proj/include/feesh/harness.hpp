#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "feesh/config.hpp"
#include "feesh/stats.hpp"

namespace feesh::harness {

enum class Treatment { MapekOn, Normal };
enum class Outcome { Won, GameOver, Failed, TickLimit };

std::string_view to_string(Treatment treatment);
std::string_view to_string(Outcome outcome);
/// Accepts "mapek" and "normal".
Treatment treatment_from_string(std::string_view text);
Outcome outcome_from_string(std::string_view text);

/// Simulated ticks per second, for converting tick counts to seconds.
inline constexpr double ticks_per_second = 60.0;

struct ReplicateResult {
    std::uint64_t seed{0};
    Treatment treatment{Treatment::Normal};
    std::uint64_t ticks_survived{0};
    /// Mean util_player_size over the ticks the world was running.
    double mean_util_f{1.0};
    std::int64_t final_score{0};
    Outcome outcome{Outcome::TickLimit};
    /// Actions the feedback loop applied (always 0 for Normal).
    std::uint64_t adaptations{0};

    bool operator==(const ReplicateResult&) const = default;
};

/// Receives one line per tick; see TraceWriter for the file layout.
class TraceWriter {
public:
    explicit TraceWriter(std::ostream& out) : out_(out) {}

    void header(std::uint64_t seed, Treatment treatment, const RunConfig& config);
    void record(std::uint64_t tick, Vec2 input, const game::StepEvents& events, std::int64_t score, double fps,
                double player_radius, const std::vector<mapek::AppliedAction>& applied);
    void footer(game::Status status, std::uint64_t ticks, std::uint64_t state_hash);

private:
    std::ostream& out_;
};

/// Runs one replicate: a fresh world from `seed`, the bot steering, the
/// feedback loop active iff `treatment` is MapekOn, until the world is
/// terminal or the tick limit is reached.
ReplicateResult run_replicate(std::uint64_t seed, Treatment treatment, const RunConfig& config,
                              TraceWriter* trace = nullptr);

struct TreatmentSummary {
    Treatment treatment;
    std::size_t replicates{0};
    stats::Summary ticks;
    stats::Summary mean_util_f;
    std::size_t won{0}, game_over{0}, failed{0}, tick_limit{0};
};

struct Comparison {
    std::string metric;
    stats::TestResult test;
    /// p < significance_level.
    bool significant{false};
    /// U of MapekOn exceeds n*m/2, i.e. MapekOn tends to be larger.
    bool mapek_greater{false};
};

inline constexpr double significance_level = 0.05;

struct ExperimentReport {
    /// Sorted by (treatment, seed).
    std::vector<ReplicateResult> replicates;
    std::vector<TreatmentSummary> treatments;
    /// Present only when both treatments were run.
    std::vector<Comparison> comparisons;

    const TreatmentSummary* summary(Treatment t) const;
    const Comparison* comparison(std::string_view metric) const;
    bool any_failed() const;
};

/// Aggregates replicate results; the output does not depend on input order.
ExperimentReport build_report(std::vector<ReplicateResult> replicates);

struct ExperimentOptions {
    std::size_t replicates{50};
    std::uint64_t base_seed{1};
    std::vector<Treatment> treatments{Treatment::MapekOn, Treatment::Normal};
    unsigned jobs{1};
    /// When set, a trace file per replicate is written here.
    std::optional<std::filesystem::path> trace_dir;
};

/// Seeds base_seed .. base_seed + replicates - 1 for every treatment.
ExperimentReport run_experiment(const ExperimentOptions& options, const RunConfig& config);

std::string render_text(const ExperimentReport& report);
std::string render_json(const ExperimentReport& report);

std::string replicates_tsv(const std::vector<ReplicateResult>& replicates);
std::vector<ReplicateResult> parse_replicates_tsv(std::string_view text);

std::string trace_file_name(std::uint64_t seed, Treatment treatment);

struct ReplayResult {
    bool ok{false};
    std::uint64_t ticks{0};
    std::uint64_t expected_hash{0};
    std::uint64_t actual_hash{0};
    /// First divergence, empty when ok.
    std::string mismatch;
};

/// Re-executes a trace with its recorded inputs and checks every tick line
/// and the final state hash.
ReplayResult replay_trace(std::istream& in);
ReplayResult replay_trace_file(const std::filesystem::path& path);

/// Frame-rate sweep over entity counts 1..max_entities.
struct CalibrationPoint {
    std::uint64_t entities;
    double fps_collision;
    double fps_no_collision;
};
std::vector<CalibrationPoint> calibration_sweep(const game::GameConfig& config, std::uint64_t max_entities);
/// First entity count whose modeled frame rate falls below `threshold`.
std::optional<std::uint64_t> fps_crossing(const game::GameConfig& config, bool collision, double threshold = 30.0,
                                          std::uint64_t max_entities = 100000);

}  // namespace feesh::harness
