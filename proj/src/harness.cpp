#include "feesh/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "feesh/bot.hpp"
#include "feesh/goal_file.hpp"
#include "feesh/utility.hpp"

namespace feesh::harness {

std::string_view to_string(Treatment treatment) { return treatment == Treatment::MapekOn ? "mapek" : "normal"; }

std::string_view to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::Won: return "Won";
        case Outcome::GameOver: return "GameOver";
        case Outcome::Failed: return "Failed";
        case Outcome::TickLimit: return "TickLimit";
    }
    return "?";
}

Treatment treatment_from_string(std::string_view text) {
    if (text == "mapek") return Treatment::MapekOn;
    if (text == "normal") return Treatment::Normal;
    throw std::invalid_argument("unknown treatment '" + std::string(text) + "'");
}

Outcome outcome_from_string(std::string_view text) {
    for (auto o : {Outcome::Won, Outcome::GameOver, Outcome::Failed, Outcome::TickLimit}) {
        if (to_string(o) == text) return o;
    }
    throw std::invalid_argument("unknown outcome '" + std::string(text) + "'");
}

namespace {

constexpr std::string_view trace_magic = "# feesh-trace 1";
constexpr std::string_view trace_columns = "tick\tinput_x\tinput_y\tevents\tscore\tfps\tplayer_radius\tadaptations";

std::string format_record(std::uint64_t tick, Vec2 input, const game::StepEvents& events, std::int64_t score,
                          double fps, double player_radius, const std::vector<mapek::AppliedAction>& applied) {
    std::string adaptations;
    for (const auto& a : applied) {
        if (!adaptations.empty()) adaptations += '|';
        adaptations += a.action.describe();
    }
    if (adaptations.empty()) adaptations = "-";
    char buf[160];
    std::snprintf(buf, sizeof buf, "%" PRIu64 "\t%.17g\t%.17g\t", tick, input.x, input.y);
    std::string line = buf;
    line += events.encode();
    std::snprintf(buf, sizeof buf, "\t%" PRId64 "\t%.17g\t%.17g\t", score, fps, player_radius);
    line += buf;
    line += adaptations;
    return line;
}

std::string format_hash(std::uint64_t hash) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, hash);
    return buf;
}

Outcome outcome_of(const game::World& world) {
    switch (world.status()) {
        case game::Status::Won: return Outcome::Won;
        case game::Status::GameOver: return Outcome::GameOver;
        case game::Status::Failed: return Outcome::Failed;
        case game::Status::Running: return Outcome::TickLimit;
    }
    return Outcome::TickLimit;
}

}  // namespace

void TraceWriter::header(std::uint64_t seed, Treatment treatment, const RunConfig& config) {
    out_ << trace_magic << '\n'
         << "# seed " << seed << '\n'
         << "# treatment " << to_string(treatment) << '\n'
         << "# config " << to_json(config).dump() << '\n'
         << trace_columns << '\n';
}

void TraceWriter::record(std::uint64_t tick, Vec2 input, const game::StepEvents& events, std::int64_t score,
                         double fps, double player_radius, const std::vector<mapek::AppliedAction>& applied) {
    out_ << format_record(tick, input, events, score, fps, player_radius, applied) << '\n';
}

void TraceWriter::footer(game::Status status, std::uint64_t ticks, std::uint64_t state_hash) {
    out_ << "# final " << game::to_string(status) << ' ' << ticks << ' ' << format_hash(state_hash) << '\n';
}

ReplicateResult run_replicate(std::uint64_t seed, Treatment treatment, const RunConfig& config, TraceWriter* trace) {
    config.validate();
    game::World world(config.game, seed);
    mapek::Knowledge knowledge(goals::default_goal_model(), config.mapek);
    const bool adaptive = treatment == Treatment::MapekOn;

    if (trace) trace->header(seed, treatment, config);

    double util_sum = 0.0;
    std::uint64_t running_ticks = 0;
    std::uint64_t adaptations = 0;
    const std::vector<mapek::AppliedAction> none;

    while (world.running() && world.tick() < config.tick_limit) {
        const Vec2 input = bot::decide(config.bot, world);
        const auto events = world.step(input);
        const double fps = game::modeled_fps(world);

        mapek::StepOutcome outcome;
        if (world.running()) {
            util_sum += goals::util_player_size(world.player().diameter(), world.width());
            ++running_ticks;
            if (adaptive) {
                outcome = mapek::mape_tick(world, knowledge);
                adaptations += outcome.applied.size();
            }
        }
        if (trace) {
            trace->record(world.tick(), input, events, world.score(), fps, world.player().radius,
                          adaptive ? outcome.applied : none);
        }
    }
    if (trace) trace->footer(world.status(), world.tick(), world.state_hash());

    ReplicateResult r;
    r.seed = seed;
    r.treatment = treatment;
    r.ticks_survived = world.tick();
    r.mean_util_f = running_ticks > 0 ? util_sum / static_cast<double>(running_ticks)
                                      : goals::util_player_size(config.game.player_start_radius * 2.0, config.game.width);
    r.final_score = world.score();
    r.outcome = outcome_of(world);
    r.adaptations = adaptations;
    return r;
}

const TreatmentSummary* ExperimentReport::summary(Treatment t) const {
    auto it = std::find_if(treatments.begin(), treatments.end(), [&](const auto& s) { return s.treatment == t; });
    return it == treatments.end() ? nullptr : &*it;
}

const Comparison* ExperimentReport::comparison(std::string_view metric) const {
    auto it = std::find_if(comparisons.begin(), comparisons.end(), [&](const auto& c) { return c.metric == metric; });
    return it == comparisons.end() ? nullptr : &*it;
}

bool ExperimentReport::any_failed() const {
    return std::any_of(replicates.begin(), replicates.end(), [](const auto& r) { return r.outcome == Outcome::Failed; });
}

ExperimentReport build_report(std::vector<ReplicateResult> replicates) {
    std::sort(replicates.begin(), replicates.end(), [](const auto& a, const auto& b) {
        return std::pair(a.treatment, a.seed) < std::pair(b.treatment, b.seed);
    });

    ExperimentReport report;
    std::vector<double> ticks[2], util[2];
    for (auto t : {Treatment::MapekOn, Treatment::Normal}) {
        TreatmentSummary s;
        s.treatment = t;
        auto& tk = ticks[static_cast<int>(t)];
        auto& ut = util[static_cast<int>(t)];
        for (const auto& r : replicates) {
            if (r.treatment != t) continue;
            ++s.replicates;
            tk.push_back(static_cast<double>(r.ticks_survived));
            ut.push_back(r.mean_util_f);
            switch (r.outcome) {
                case Outcome::Won: ++s.won; break;
                case Outcome::GameOver: ++s.game_over; break;
                case Outcome::Failed: ++s.failed; break;
                case Outcome::TickLimit: ++s.tick_limit; break;
            }
        }
        if (s.replicates == 0) continue;
        s.ticks = stats::describe(tk);
        s.mean_util_f = stats::describe(ut);
        report.treatments.push_back(s);
    }

    if (report.treatments.size() == 2) {
        auto compare = [&](std::string metric, const std::vector<double>* samples) {
            Comparison c;
            c.metric = std::move(metric);
            const auto& mapek = samples[static_cast<int>(Treatment::MapekOn)];
            const auto& normal = samples[static_cast<int>(Treatment::Normal)];
            c.test = stats::mann_whitney_u(mapek, normal);
            c.significant = c.test.p < significance_level;
            c.mapek_greater = c.test.u > static_cast<double>(mapek.size() * normal.size()) / 2.0;
            report.comparisons.push_back(std::move(c));
        };
        compare("ticks_survived", ticks);
        compare("mean_util_f", util);
    }
    report.replicates = std::move(replicates);
    return report;
}

ExperimentReport run_experiment(const ExperimentOptions& options, const RunConfig& config) {
    config.validate();
    struct Task {
        std::uint64_t seed;
        Treatment treatment;
    };
    std::vector<Task> tasks;
    for (auto t : options.treatments) {
        for (std::size_t i = 0; i < options.replicates; ++i) tasks.push_back({options.base_seed + i, t});
    }
    if (options.trace_dir) std::filesystem::create_directories(*options.trace_dir);

    std::vector<ReplicateResult> results(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            const auto& task = tasks[i];
            if (options.trace_dir) {
                std::ofstream out(*options.trace_dir / trace_file_name(task.seed, task.treatment));
                TraceWriter writer(out);
                results[i] = run_replicate(task.seed, task.treatment, config, &writer);
            } else {
                results[i] = run_replicate(task.seed, task.treatment, config);
            }
        }
    };
    const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(tasks.size())));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return build_report(std::move(results));
}

namespace {

void summary_line(std::ostringstream& out, const char* name, const stats::Summary& s, double scale = 1.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "  %-13s median %-10.6g q1 %-10.6g q3 %-10.6g mean %-10.6g min %-10.6g max %.6g\n",
                  name, s.median * scale, s.q1 * scale, s.q3 * scale, s.mean * scale, s.min * scale, s.max * scale);
    out << buf;
}

}  // namespace

std::string render_text(const ExperimentReport& report) {
    std::ostringstream out;
    out << "feesh experiment report\n\n";
    for (const auto& s : report.treatments) {
        out << "treatment " << to_string(s.treatment) << ": " << s.replicates << " replicates (won " << s.won
            << ", game over " << s.game_over << ", failed " << s.failed << ", tick limit " << s.tick_limit << ")\n";
        summary_line(out, "ticks", s.ticks);
        summary_line(out, "seconds", s.ticks, 1.0 / ticks_per_second);
        summary_line(out, "mean util_F", s.mean_util_f);
        out << '\n';
    }
    for (const auto& c : report.comparisons) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "mann-whitney %s (mapek vs normal): U=%.6g z=%.6g p=%.6g [%s]\n", c.metric.c_str(),
                      c.test.u, c.test.z, c.test.p, std::string(stats::to_string(c.test.method)).c_str());
        out << buf;
        out << "  significant at " << significance_level << ": " << (c.significant ? "yes" : "no")
            << "; mapek greater: " << (c.mapek_greater ? "yes" : "no") << '\n';
    }
    return out.str();
}

std::string render_json(const ExperimentReport& report) {
    using nlohmann::json;
    auto summary = [](const stats::Summary& s) {
        return json{{"n", s.n},         {"mean", s.mean}, {"min", s.min}, {"q1", s.q1},
                    {"median", s.median}, {"q3", s.q3},   {"max", s.max}};
    };
    json j;
    j["treatments"] = json::array();
    for (const auto& s : report.treatments) {
        j["treatments"].push_back({
            {"treatment", to_string(s.treatment)},
            {"replicates", s.replicates},
            {"outcomes", {{"Won", s.won}, {"GameOver", s.game_over}, {"Failed", s.failed}, {"TickLimit", s.tick_limit}}},
            {"ticks", summary(s.ticks)},
            {"mean_util_f", summary(s.mean_util_f)},
        });
    }
    j["comparisons"] = json::array();
    for (const auto& c : report.comparisons) {
        j["comparisons"].push_back({
            {"metric", c.metric},
            {"u", c.test.u},
            {"z", c.test.z},
            {"p", c.test.p},
            {"method", stats::to_string(c.test.method)},
            {"significant", c.significant},
            {"mapek_greater", c.mapek_greater},
        });
    }
    j["significance_level"] = significance_level;
    return j.dump(2) + "\n";
}

std::string replicates_tsv(const std::vector<ReplicateResult>& replicates) {
    std::ostringstream out;
    out << "seed\ttreatment\tticks_survived\tmean_util_f\tfinal_score\toutcome\tadaptations\n";
    char buf[256];
    for (const auto& r : replicates) {
        std::snprintf(buf, sizeof buf, "%" PRIu64 "\t%s\t%" PRIu64 "\t%.17g\t%" PRId64 "\t%s\t%" PRIu64 "\n", r.seed,
                      std::string(to_string(r.treatment)).c_str(), r.ticks_survived, r.mean_util_f, r.final_score,
                      std::string(to_string(r.outcome)).c_str(), r.adaptations);
        out << buf;
    }
    return out.str();
}

std::vector<ReplicateResult> parse_replicates_tsv(std::string_view text) {
    std::vector<ReplicateResult> out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 || line.empty()) continue;
        std::istringstream fields(line);
        ReplicateResult r;
        std::string treatment, outcome, util;
        if (!(fields >> r.seed >> treatment >> r.ticks_survived >> util >> r.final_score >> outcome >> r.adaptations)) {
            throw std::runtime_error("replicates line " + std::to_string(line_no) + ": malformed record");
        }
        r.treatment = treatment_from_string(treatment);
        r.outcome = outcome_from_string(outcome);
        r.mean_util_f = std::strtod(util.c_str(), nullptr);
        out.push_back(r);
    }
    return out;
}

std::string trace_file_name(std::uint64_t seed, Treatment treatment) {
    return std::string(to_string(treatment)) + "-" + std::to_string(seed) + ".trace";
}

ReplayResult replay_trace(std::istream& in) {
    ReplayResult result;
    auto fail = [&](std::string why) {
        result.ok = false;
        result.mismatch = std::move(why);
        return result;
    };

    std::string line;
    if (!std::getline(in, line) || line != trace_magic) return fail("not a feesh trace");

    std::uint64_t seed = 0;
    std::optional<Treatment> treatment;
    std::optional<RunConfig> config;
    while (std::getline(in, line) && line.starts_with("# ")) {
        if (line.starts_with("# seed ")) {
            seed = std::stoull(line.substr(7));
        } else if (line.starts_with("# treatment ")) {
            treatment = treatment_from_string(line.substr(12));
        } else if (line.starts_with("# config ")) {
            config = run_config_from_json(nlohmann::json::parse(line.substr(9)));
        }
    }
    if (!treatment || !config) return fail("trace header lacks treatment or config");
    if (line != trace_columns) return fail("unexpected column header");

    game::World world(config->game, seed);
    mapek::Knowledge knowledge(goals::default_goal_model(), config->mapek);
    const bool adaptive = *treatment == Treatment::MapekOn;

    while (std::getline(in, line)) {
        if (line.starts_with("# final ")) {
            std::istringstream footer(line.substr(8));
            std::string status, hash;
            std::uint64_t ticks = 0;
            footer >> status >> ticks >> hash;
            result.expected_hash = std::stoull(hash, nullptr, 16);
            result.actual_hash = world.state_hash();
            result.ticks = world.tick();
            if (status != game::to_string(world.status())) return fail("final status differs: " + status);
            if (ticks != world.tick()) return fail("final tick count differs");
            if (result.expected_hash != result.actual_hash) return fail("final state hash differs");
            result.ok = true;
            return result;
        }
        if (!world.running()) return fail("trace continues after the world became terminal");

        std::istringstream fields(line);
        std::string tick_text, x_text, y_text;
        std::getline(fields, tick_text, '\t');
        std::getline(fields, x_text, '\t');
        std::getline(fields, y_text, '\t');
        const Vec2 input{std::strtod(x_text.c_str(), nullptr), std::strtod(y_text.c_str(), nullptr)};

        const auto events = world.step(input);
        const double fps = game::modeled_fps(world);
        std::vector<mapek::AppliedAction> applied;
        if (world.running() && adaptive) applied = mapek::mape_tick(world, knowledge).applied;

        const auto expected = format_record(world.tick(), input, events, world.score(), fps, world.player().radius, applied);
        if (expected != line) {
            return fail("tick " + std::to_string(world.tick()) + ": recorded '" + line + "' but replay produced '" +
                        expected + "'");
        }
    }
    return fail("trace has no final record");
}

ReplayResult replay_trace_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        ReplayResult r;
        r.mismatch = "cannot open " + path.string();
        return r;
    }
    return replay_trace(in);
}

std::vector<CalibrationPoint> calibration_sweep(const game::GameConfig& config, std::uint64_t max_entities) {
    std::vector<CalibrationPoint> points;
    for (std::uint64_t n = 1; n <= max_entities; ++n) {
        points.push_back({n, game::fps_from_cost(game::frame_cost_ms(config.cost, n, config.wobble_vertices, true)),
                          game::fps_from_cost(game::frame_cost_ms(config.cost, n, config.wobble_vertices, false))});
    }
    return points;
}

std::optional<std::uint64_t> fps_crossing(const game::GameConfig& config, bool collision, double threshold,
                                          std::uint64_t max_entities) {
    for (std::uint64_t n = 1; n <= max_entities; ++n) {
        const double fps = game::fps_from_cost(game::frame_cost_ms(config.cost, n, config.wobble_vertices, collision));
        if (fps < threshold) return n;
    }
    return std::nullopt;
}

}  // namespace feesh::harness
