// laneboost: deterministic express-lane auction simulator and replay toolkit.
//
//   laneboost simulate  --config scenario.toml --out dir [--seed N] [--format csv|json]
//   laneboost replay    --config scenario.toml --bids bids.csv --trades trades.csv
//                       --prices prices.csv [--payments payments.csv] --out dir
//   laneboost calibrate --config scenario.toml --rounds rounds.csv --prices prices.csv
//                       --windows-s 30,60,... (--c-grid a,b,... | --c-range min:max:steps)
//                       --out dir [--jobs N]
//   laneboost report    --config scenario.toml --bundle dir --out dir

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "laneboost/driver.hpp"

namespace {

std::vector<laneboost::DurationMs> parse_windows(const std::string& csv) {
    std::vector<laneboost::DurationMs> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        std::size_t comma = csv.find(',', pos);
        if (comma == std::string::npos) comma = csv.size();
        out.push_back(std::stoll(csv.substr(pos, comma - pos)) * laneboost::kSecond);
        pos = comma + 1;
    }
    return out;
}

std::vector<double> parse_c_grid(const std::string& list, const std::string& range) {
    std::vector<double> out;
    if (!list.empty()) {
        std::size_t pos = 0;
        while (pos < list.size()) {
            std::size_t comma = list.find(',', pos);
            if (comma == std::string::npos) comma = list.size();
            out.push_back(std::stod(list.substr(pos, comma - pos)));
            pos = comma + 1;
        }
        return out;
    }
    double lo = 0, hi = 0;
    int steps = 0;
    if (std::sscanf(range.c_str(), "%lf:%lf:%d", &lo, &hi, &steps) != 3 || steps < 1)
        throw std::runtime_error("--c-range expects min:max:steps");
    for (int i = 0; i < steps; ++i)
        out.push_back(steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1));
    return out;
}

} // namespace

int main(int argc, char** argv) {
    using namespace laneboost;

    CLI::App app{"deterministic express-lane auction simulator and replay toolkit"};
    app.require_subcommand(1);

    RunOptions run;
    std::string format = "csv";
    std::int64_t seed = -1;

    auto add_common = [&](CLI::App* cmd, bool needs_out = true) {
        cmd->add_option("--config", run.config_path, "scenario config (TOML)")->required();
        auto* out = cmd->add_option("--out", run.out_dir, "output directory");
        if (needs_out) out->required();
        cmd->add_option("--format", format, "csv or json")->default_val("csv");
        cmd->add_option("--jobs", run.jobs, "parallel jobs (calibration grid cells)")
            ->default_val(1);
    };

    auto* sim = app.add_subcommand("simulate", "run a scenario and emit traces + analytics");
    add_common(sim);
    sim->add_option("--seed", seed, "override the config seed");

    ReplayInputs replay_in;
    auto* rep = app.add_subcommand("replay", "ingest dataset CSVs and emit analytics");
    add_common(rep);
    rep->add_option("--bids", replay_in.bids_csv, "bid records CSV")->required();
    rep->add_option("--trades", replay_in.trades_csv, "trade records CSV")->required();
    rep->add_option("--prices", replay_in.prices_csv, "mid-price CSV")->required();
    rep->add_option("--payments", replay_in.payments_csv, "on-chain payments CSV");

    std::string rounds_csv, prices_csv, windows_arg, c_grid_arg, c_range_arg;
    std::string floor_eth = "0.001", cap_eth = "1000000";
    auto* cal = app.add_subcommand("calibrate", "grid-search the volatility-indexed reserve");
    add_common(cal);
    cal->add_option("--rounds", rounds_csv, "historical rounds CSV (top/second bids)")->required();
    cal->add_option("--prices", prices_csv, "mid-price CSV")->required();
    cal->add_option("--windows-s", windows_arg, "vol windows in seconds, comma separated")
        ->required();
    cal->add_option("--c-grid", c_grid_arg, "c values, comma separated");
    cal->add_option("--c-range", c_range_arg, "c values as min:max:steps (linear)");
    cal->add_option("--floor-eth", floor_eth, "reserve floor");
    cal->add_option("--cap-eth", cap_eth, "reserve cap");

    std::string bundle_dir;
    auto* report = app.add_subcommand("report", "recompute analytics from an emitted bundle");
    add_common(report);
    report->add_option("--bundle", bundle_dir, "bundle directory from a previous run")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        run.format = format_from_name(format);
        if (sim->parsed()) {
            if (seed >= 0) run.seed_override = static_cast<std::uint64_t>(seed);
            return cmd_simulate(run);
        }
        if (rep->parsed()) {
            ReplayOptions opt{run, replay_in};
            return cmd_replay(opt);
        }
        if (cal->parsed()) {
            if (c_grid_arg.empty() && c_range_arg.empty())
                throw std::runtime_error("calibrate needs --c-grid or --c-range");
            CalibrateOptions opt;
            opt.run = run;
            opt.rounds_csv = rounds_csv;
            opt.prices_csv = prices_csv;
            opt.windows = parse_windows(windows_arg);
            opt.c_grid = parse_c_grid(c_grid_arg, c_range_arg);
            opt.floor = Eth::parse(floor_eth);
            opt.cap = Eth::parse(cap_eth);
            return cmd_calibrate(opt);
        }
        if (report->parsed()) {
            ReportOptions opt{run, bundle_dir};
            return cmd_report(opt);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "laneboost: %s\n", e.what());
        return 1;
    }
    return 1;
}
