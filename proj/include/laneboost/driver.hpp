// driver.hpp
// The command implementations behind the CLI: simulate, replay, calibrate
// and report. Both the laneboost binary and the acceptance suite call these,
// so the on-disk bundle shape is identical either way.

#pragma once

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "laneboost/config.hpp"
#include "laneboost/csv.hpp"
#include "laneboost/dataset.hpp"
#include "laneboost/reports.hpp"
#include "laneboost/reserve_policy.hpp"
#include "laneboost/sha256.hpp"
#include "laneboost/simulation.hpp"

namespace laneboost {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

inline LogLevel log_level() {
    const char* env = std::getenv("LANEBOOST_LOG");
    if (!env) return LogLevel::Warn;
    const std::string s = env;
    if (s == "error") return LogLevel::Error;
    if (s == "warn") return LogLevel::Warn;
    if (s == "info") return LogLevel::Info;
    if (s == "debug") return LogLevel::Debug;
    return LogLevel::Warn;
}

inline void log_line(LogLevel level, const std::string& msg) {
    static const LogLevel active = log_level();
    if (level > active) return;
    const char* tag[] = {"error", "warn", "info", "debug"};
    std::fprintf(stderr, "laneboost [%s] %s\n", tag[static_cast<int>(level)], msg.c_str());
}

enum class OutputFormat { Csv, Json };

inline OutputFormat format_from_name(const std::string& s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    throw std::runtime_error("unknown format '" + s + "' (expected csv or json)");
}

struct RunOptions {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed_override;
    OutputFormat format{OutputFormat::Csv};
    unsigned jobs{1};
};

namespace driver_detail {

inline nlohmann::json base_manifest(const ScenarioConfig& cfg, const RunOptions& opt,
                                    const char* command) {
    nlohmann::json m;
    m["tool"] = kToolVersion;
    m["command"] = command;
    m["scenario"] = cfg.name;
    m["seed"] = cfg.seed;
    m["config_sha256"] = Sha256::of_file(opt.config_path);
    m["schema_notes"]["execution_trace_tie_break"] =
        "executed_ms, then express before regular, then arrival, then tx_id";
    return m;
}

inline void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

// Wall-clock timing lives outside the deterministic bundle on purpose.
inline void write_timing(const std::filesystem::path& dir,
                         std::chrono::system_clock::time_point t0,
                         std::chrono::system_clock::time_point t1) {
    nlohmann::json j;
    j["started_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t0.time_since_epoch()).count();
    j["finished_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1.time_since_epoch()).count();
    j["note"] = "wall-clock metadata; excluded from the byte-determinism contract";
    write_json_file(dir / "timing.json", j);
}

// The CSV tables are the frozen contract and are always written; json format
// adds a consolidated analytics.json on top.
inline void write_bundle_outputs(const std::filesystem::path& dir, const AnalyticsBundle& bundle,
                                 OutputFormat format) {
    write_analytics_csvs(dir, bundle);
    if (format == OutputFormat::Json)
        write_json_file(dir / "analytics.json", bundle_to_json(bundle));
}

} // namespace driver_detail

// Deterministic files of a bundle directory, for hashing/comparing runs.
inline std::vector<std::filesystem::path> bundle_files(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        if (e.path().filename() == "timing.json") continue;
        files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

inline std::string bundle_digest(const std::filesystem::path& dir) {
    Sha256 h;
    for (const auto& f : bundle_files(dir)) {
        h.update(f.filename().string());
        h.update("\0", 1);
        h.update(Sha256::of_file(f.string()));
        h.update("\0", 1);
    }
    return h.hex_digest();
}

inline int cmd_simulate(const RunOptions& opt) {
    const auto t0 = std::chrono::system_clock::now();
    ScenarioConfig cfg = load_scenario_file(opt.config_path);
    if (opt.seed_override) cfg.seed = *opt.seed_override;
    cfg.validate_for_simulation();
    log_line(LogLevel::Info, "simulate: " + cfg.name + ", " + std::to_string(cfg.rounds) +
                                 " rounds, seed " + std::to_string(cfg.seed));

    const SimulationResult sim = run_simulation(cfg);
    const Dataset ds = dataset_from_simulation(cfg, sim);
    const AnalyticsBundle bundle = compute_bundle(ds);

    namespace fs = std::filesystem;
    fs::create_directories(opt.out_dir);
    const fs::path dir(opt.out_dir);
    write_trace_csvs(dir, ds, sim.trace, sim.receipts);
    driver_detail::write_bundle_outputs(dir, bundle, opt.format);

    auto manifest = driver_detail::base_manifest(cfg, opt, "simulate");
    manifest["counts"]["rounds"] = bundle.coverage.rounds;
    manifest["counts"]["bids"] = bundle.coverage.bids;
    manifest["counts"]["trades"] = bundle.coverage.trades_total;
    manifest["counts"]["receipts"] = sim.receipts.size();
    manifest["counts"]["express_rejections"] = sim.express_rejections;
    manifest["counts"]["vol_fallback_rounds"] = sim.vol_fallback_rounds;
    manifest["coverage"] = bundle_to_json(bundle)["coverage"];
    driver_detail::write_json_file(dir / "manifest.json", manifest);
    driver_detail::write_timing(dir, t0, std::chrono::system_clock::now());

    if (sim.express_rejections != 0) {
        log_line(LogLevel::Error, "express lane rejections in a well-formed scenario");
        return 1;
    }
    return 0;
}

struct ReplayOptions {
    RunOptions run;
    ReplayInputs inputs;
};

inline int cmd_replay(const ReplayOptions& opt) {
    const auto t0 = std::chrono::system_clock::now();
    ScenarioConfig cfg = load_scenario_file(opt.run.config_path);
    const Dataset ds = dataset_from_replay(cfg, opt.inputs);
    const AnalyticsBundle bundle = compute_bundle(ds);

    namespace fs = std::filesystem;
    fs::create_directories(opt.run.out_dir);
    const fs::path dir(opt.run.out_dir);
    driver_detail::write_bundle_outputs(dir, bundle, opt.run.format);

    auto manifest = driver_detail::base_manifest(cfg, opt.run, "replay");
    manifest["inputs"]["bids_sha256"] = Sha256::of_file(opt.inputs.bids_csv);
    manifest["inputs"]["trades_sha256"] = Sha256::of_file(opt.inputs.trades_csv);
    manifest["inputs"]["prices_sha256"] = Sha256::of_file(opt.inputs.prices_csv);
    if (!opt.inputs.payments_csv.empty())
        manifest["inputs"]["payments_sha256"] = Sha256::of_file(opt.inputs.payments_csv);
    manifest["coverage"] = bundle_to_json(bundle)["coverage"];
    driver_detail::write_json_file(dir / "manifest.json", manifest);
    driver_detail::write_timing(dir, t0, std::chrono::system_clock::now());
    return 0;
}

struct CalibrateOptions {
    RunOptions run;
    std::string rounds_csv;
    std::string prices_csv;
    std::vector<DurationMs> windows;
    std::vector<double> c_grid;
    Eth floor{Eth::parse("0.001")};
    Eth cap{Eth::parse("1000000")};
};

inline const std::vector<std::string> kRoundsSchema = {"round_start_utc_ms", "top_bid_eth",
                                                       "second_bid_eth"};

inline std::vector<HistoricalRound> load_rounds_csv(const std::string& path,
                                                    const RoundSchedule& sched) {
    CsvReader csv(path, kRoundsSchema);
    std::vector<HistoricalRound> rounds;
    for (std::size_t i = 0; i < csv.size(); ++i) {
        HistoricalRound r;
        const TimeMs start{csv.int_field(i, 0)};
        const auto idx = round_index_at(start, sched);
        if (round_bounds(idx, sched).start != start)
            throw CsvError(path, csv.line_of(i),
                           "round_start_utc_ms is not a round boundary under the schedule");
        r.bounds = round_bounds(idx, sched);
        r.top_bid = dataset_detail::parse_amount_field<Eth>(csv, i, 1);
        r.second_bid = dataset_detail::parse_amount_field<Eth>(csv, i, 2);
        rounds.push_back(std::move(r));
    }
    return rounds;
}

inline int cmd_calibrate(const CalibrateOptions& opt) {
    const auto t0 = std::chrono::system_clock::now();
    ScenarioConfig cfg = load_scenario_file(opt.run.config_path);
    const auto rounds = load_rounds_csv(opt.rounds_csv, cfg.schedule);
    const PriceBook prices = load_prices_csv(opt.prices_csv);
    const PriceSeries* numeraire = prices.series(cfg.analytics.numeraire);
    if (!numeraire)
        throw std::runtime_error("calibrate: no price series for " + cfg.analytics.numeraire);
    const VolProvider vol(*numeraire);

    log_line(LogLevel::Info,
             "calibrate: " + std::to_string(rounds.size()) + " rounds, grid " +
                 std::to_string(opt.windows.size()) + "x" + std::to_string(opt.c_grid.size()));
    const CalibrationReport report = calibrate(rounds, sigma_from_provider(vol), opt.windows,
                                               opt.c_grid, opt.floor, opt.cap, opt.run.jobs);

    namespace fs = std::filesystem;
    fs::create_directories(opt.run.out_dir);
    const fs::path dir(opt.run.out_dir);
    {
        CsvWriter w((dir / "calibration_grid.csv").string(), {"window_s", "c", "recovery_ratio"});
        for (const auto& cell : report.grid)
            w.write_row({std::to_string(cell.window / kSecond), format_double(cell.c),
                         format_double(cell.recovery_ratio)});
    }
    nlohmann::json best;
    best["best"]["window_s"] = report.best.window / kSecond;
    best["best"]["c"] = report.best.c;
    best["best"]["recovery_ratio"] = report.best.recovery_ratio;
    best["benchmark_top_bid_sum_eth"] = report.benchmark.str();
    best["rounds"] = rounds.size();
    best["note"] = "counterfactual replay holds observed bids fixed (no strategic response)";
    driver_detail::write_json_file(dir / "calibration_summary.json", best);

    auto manifest = driver_detail::base_manifest(cfg, opt.run, "calibrate");
    manifest["inputs"]["rounds_sha256"] = Sha256::of_file(opt.rounds_csv);
    manifest["inputs"]["prices_sha256"] = Sha256::of_file(opt.prices_csv);
    driver_detail::write_json_file(dir / "manifest.json", manifest);
    driver_detail::write_timing(dir, t0, std::chrono::system_clock::now());
    return 0;
}

// Recomputes the analytics tables from a previously emitted bundle directory
// by replaying its own trace files through the ingestion path.
struct ReportOptions {
    RunOptions run;
    std::string bundle_dir;
};

inline int cmd_report(const ReportOptions& opt) {
    namespace fs = std::filesystem;
    const fs::path src(opt.bundle_dir);
    ReplayOptions replay;
    replay.run = opt.run;
    replay.inputs.bids_csv = (src / "bids.csv").string();
    replay.inputs.trades_csv = (src / "trades.csv").string();
    replay.inputs.prices_csv = (src / "prices.csv").string();
    if (fs::exists(src / "payments.csv"))
        replay.inputs.payments_csv = (src / "payments.csv").string();
    return cmd_replay(replay);
}

} // namespace laneboost
