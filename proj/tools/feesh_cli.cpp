// Command-line front end: headless experiments, cost-model calibration,
// trace replay and the live session server.

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "feesh/config.hpp"
#include "feesh/harness.hpp"
#ifdef FEESH_HAVE_SERVICE
#include "feesh/service/server.hpp"
#endif

namespace fs = std::filesystem;
using namespace feesh;

namespace {

RunConfig load_config(const std::string& path) { return path.empty() ? RunConfig{} : load_run_config(path); }

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

int cmd_run(const std::string& treatment, std::size_t replicates, std::uint64_t seed,
            std::optional<std::uint64_t> tick_limit, const std::string& config_path, const std::string& out_dir,
            bool strict, unsigned jobs, bool traces) {
    RunConfig config = load_config(config_path);
    if (tick_limit) config.tick_limit = *tick_limit;
    config.validate();

    harness::ExperimentOptions options;
    options.replicates = replicates;
    options.base_seed = seed;
    options.jobs = jobs;
    if (treatment == "both") {
        options.treatments = {harness::Treatment::MapekOn, harness::Treatment::Normal};
    } else {
        options.treatments = {harness::treatment_from_string(treatment)};
    }
    const fs::path out(out_dir);
    fs::create_directories(out);
    if (traces) {
        options.trace_dir = out / "traces";
        fs::create_directories(*options.trace_dir);
    }

    const auto report = harness::run_experiment(options, config);
    const auto text = harness::render_text(report);
    write_file(out / "replicates.tsv", harness::replicates_tsv(report.replicates));
    write_file(out / "report.txt", text);
    write_file(out / "report.json", harness::render_json(report));
    write_file(out / "config.json", to_json(config).dump(2) + "\n");
    std::cout << text;
    if (strict && report.any_failed()) {
        std::cerr << "strict: at least one replicate ended Failed\n";
        return 3;
    }
    return 0;
}

int cmd_calibrate(const std::string& config_path, std::uint64_t max_entities, std::uint64_t step) {
    const RunConfig config = load_config(config_path);
    const auto points = harness::calibration_sweep(config.game, max_entities);
    std::printf("entities\tfps_collision\tfps_no_collision\n");
    for (const auto& p : points) {
        if (p.entities % step == 0 || p.entities == 1) {
            std::printf("%llu\t%.3f\t%.3f\n", static_cast<unsigned long long>(p.entities), p.fps_collision,
                        p.fps_no_collision);
        }
    }
    const double threshold = config.mapek.fps_threshold;
    auto report = [&](const char* label, bool collision) {
        if (auto n = harness::fps_crossing(config.game, collision, threshold)) {
            std::printf("# fps < %g %s at %llu entities\n", threshold, label, static_cast<unsigned long long>(*n));
        } else {
            std::printf("# fps never drops below %g %s\n", threshold, label);
        }
    };
    report("with collision", true);
    report("without collision", false);
    return 0;
}

int cmd_replay(const std::string& path) {
    const auto result = harness::replay_trace_file(path);
    if (result.ok) {
        std::printf("ok: %llu ticks, state hash %016llx\n", static_cast<unsigned long long>(result.ticks),
                    static_cast<unsigned long long>(result.actual_hash));
        return 0;
    }
    std::fprintf(stderr, "replay mismatch: %s\n", result.mismatch.c_str());
    return 1;
}

#ifdef FEESH_HAVE_SERVICE
service::Server* running_server = nullptr;

void on_signal(int) {
    if (running_server) running_server->stop();
}

int cmd_serve(const std::string& host, unsigned short port, const std::string& static_dir, bool real_fps,
              const std::string& config_path, std::uint64_t seed) {
    service::ServerOptions options;
    options.host = host;
    options.port = port;
    if (!static_dir.empty()) options.static_dir = static_dir;
    options.real_fps = real_fps;
    options.base_seed = seed;
    options.base_config = load_config(config_path);
    service::Server server(options);
    running_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::printf("listening on %s:%u\n", host.c_str(), static_cast<unsigned>(server.port()));
    std::fflush(stdout);
    server.run();
    running_server = nullptr;
    return 0;
}
#endif

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"feesh: self-adaptive game loop with a MAPE-K feedback loop"};
    app.require_subcommand(1);

    std::string config_path;

    auto* run = app.add_subcommand("run", "Run headless replicates and compare treatments");
    std::string treatment = "both";
    std::size_t replicates = 50;
    std::uint64_t seed = 1;
    std::optional<std::uint64_t> tick_limit;
    std::string out_dir = "results";
    bool strict = false, traces = false;
    unsigned jobs = 1;
    run->add_option("--treatment", treatment, "mapek, normal or both")
        ->check(CLI::IsMember({"mapek", "normal", "both"}))
        ->capture_default_str();
    run->add_option("--replicates", replicates, "Replicates per treatment")->check(CLI::PositiveNumber)->capture_default_str();
    run->add_option("--seed", seed, "First seed")->capture_default_str();
    run->add_option("--tick-limit", tick_limit, "Ticks before a replicate is cut off");
    run->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "Output directory")->capture_default_str();
    run->add_flag("--strict", strict, "Exit nonzero if any replicate ended Failed");
    run->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    run->add_flag("--traces", traces, "Write one replayable trace per replicate");

    auto* calibrate = app.add_subcommand("calibrate", "Sweep the frame-cost model over entity counts");
    std::uint64_t max_entities = 300, step = 10;
    calibrate->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    calibrate->add_option("--max-entities", max_entities)->check(CLI::PositiveNumber)->capture_default_str();
    calibrate->add_option("--step", step, "Print every Nth entity count")->check(CLI::PositiveNumber)->capture_default_str();

    auto* replay = app.add_subcommand("replay", "Re-execute a trace and verify it tick by tick");
    std::string trace_path;
    replay->add_option("--trace", trace_path, "Trace file")->required()->check(CLI::ExistingFile);

#ifdef FEESH_HAVE_SERVICE
    auto* serve = app.add_subcommand("serve", "Serve live sessions over WebSocket");
    std::string host = "127.0.0.1", static_dir;
    unsigned short port = 8080;
    bool real_fps = false;
    serve->add_option("--host", host)->capture_default_str();
    serve->add_option("--port", port)->capture_default_str();
    serve->add_option("--static", static_dir, "Directory of client assets")->check(CLI::ExistingDirectory);
    serve->add_flag("--real-fps", real_fps, "Monitor wall-clock frame rate instead of the cost model");
    serve->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    serve->add_option("--seed", seed, "Seed of the first session")->capture_default_str();
#endif

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            return cmd_run(treatment, replicates, seed, tick_limit, config_path, out_dir, strict, jobs, traces);
        }
        if (*calibrate) return cmd_calibrate(config_path, max_entities, step);
        if (*replay) return cmd_replay(trace_path);
#ifdef FEESH_HAVE_SERVICE
        if (*serve) return cmd_serve(host, port, static_dir, real_fps, config_path, seed);
#endif
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
