// config.hpp
// Scenario configuration: one TOML file drives simulation, replay and
// calibration. Every section is validated against a closed key set, so a
// typo fails the run with a line-precise message instead of silently using
// a default.

#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "laneboost/agents.hpp"
#include "laneboost/analytics.hpp"
#include "laneboost/market_model.hpp"
#include "laneboost/price_process.hpp"
#include "laneboost/reserve_policy.hpp"
#include "laneboost/sequencer.hpp"
#include "laneboost/toml.hpp"

namespace laneboost {

struct ResaleConfig {
    std::optional<EntityId> reseller;
    DurationMs window_ms{100};
    DurationMs latency_ms{80};
    double payment_frac{0.5};
    Eth subscription_flat_fee;
    int demand_window_rounds{10};
    Eth initial_demand_estimate;
};

struct TradingConfig {
    double trade_size{1.0};
    double edge_vol_mult{1.0};
    double edge_decay_per_ms{5e-4};
    Usd fee_usd{Usd::parse("0.05")};
    DurationMs vol_window{60'000};
    DurationMs markout{5'000};
};

struct PriceConfig {
    std::string asset{"ETH"};
    double initial{3'000.0};
    DurationMs warmup{900'000};
    std::vector<VolRegimeStep> vol_steps;
};

struct AnalyticsConfig {
    std::vector<std::string> tracked;
    std::optional<EntityId> reseller;
    SessionWindow session;
    std::string numeraire{"ETH"};
    ClassifierRules classifier;   // assembled from config or synthesized from agents
    bool classifier_explicit{false};
};

struct ScenarioConfig {
    std::string name{"scenario"};
    std::uint64_t seed{0};
    std::int64_t rounds{0};
    TimeMs start;
    RoundSchedule schedule;
    SequencerConfig sequencer;
    PriceConfig price;
    std::optional<ReservePolicy> reserve;
    ResaleConfig resale;
    TradingConfig trading;
    std::vector<AgentSpec> agents;
    RegimeSegmentation regimes;
    AnalyticsConfig analytics;

    std::int64_t first_round_index() const { return round_index_at(start, schedule); }

    void validate_for_simulation() const {
        if (rounds < 1) throw std::invalid_argument("config: rounds must be >= 1");
        if (agents.empty()) throw std::invalid_argument("config: no agents defined");
        if (!reserve) throw std::invalid_argument("config: no reserve policy");
        std::set<std::string> ids;
        bool any_resale_user = false;
        for (const auto& a : agents) {
            a.validate();
            if (!ids.insert(a.id.id).second)
                throw std::invalid_argument("config: duplicate agent id " + a.id.id);
            if (a.subscribes_to_resale) any_resale_user = true;
        }
        if (any_resale_user && !resale.reseller)
            throw std::invalid_argument("config: agents subscribe to resale but no reseller is set");
        if (resale.reseller) {
            bool found = false;
            for (const auto& a : agents)
                if (a.id == *resale.reseller && a.role == AgentRole::Reseller) found = true;
            if (!found)
                throw std::invalid_argument("config: resale.reseller must name a reseller agent");
        }
        const auto rb = round_bounds(first_round_index(), schedule);
        if (rb.start != start)
            throw std::invalid_argument("config: start must fall on a round boundary (second :" +
                                        std::to_string(((schedule.round_length -
                                                         schedule.wall_clock_shift) %
                                                        schedule.round_length) /
                                                       1000) +
                                        " under this schedule)");
        regimes.validate();
        if (regimes.start() > start)
            throw std::invalid_argument("config: first regime boundary is after the scenario start");
        if (price.vol_steps.empty())
            throw std::invalid_argument("config: price.vol_steps must not be empty");
    }
};

namespace config_detail {

inline Eth toml_eth(const TomlTable& t, const std::string& key) {
    const auto& v = t.at(key);
    if (v.kind == TomlValue::Kind::Str) return Eth::parse(v.s);
    if (v.kind == TomlValue::Kind::Int) return Eth::from_int(v.i);
    if (v.kind == TomlValue::Kind::Float) return Eth::from_double(v.d);
    throw TomlError(v.line, "key '" + key + "' must be an amount (string or number)");
}

inline Eth toml_eth_or(const TomlTable& t, const std::string& key, Eth dflt) {
    return t.has(key) ? toml_eth(t, key) : dflt;
}

inline int parse_minute_of_day(const std::string& s, int line) {
    int h = 0, m = 0;
    if (std::sscanf(s.c_str(), "%d:%d", &h, &m) != 2 || h < 0 || h > 24 || m < 0 || m > 59)
        throw TomlError(line, "expected 'HH:MM', got '" + s + "'");
    return h * 60 + m;
}

inline AgentSpec parse_agent(const TomlTable& t) {
    t.expect_only({"id", "role", "strategy", "value_coeff", "noise_dispersion", "shade",
                   "probe_bid_eth", "fixed_bid_eth", "markup", "opportunity_rate", "sigma_ref",
                   "subscribes", "channel", "contract"});
    AgentSpec a;
    a.id = EntityId{t.get_string("id")};
    const std::string role = t.get_string_or("role", "searcher");
    if (role == "searcher") a.role = AgentRole::Searcher;
    else if (role == "reseller") a.role = AgentRole::Reseller;
    else throw TomlError(t.line, "agent role must be 'searcher' or 'reseller'");
    a.strategy = strategy_from_name(t.get_string("strategy"));
    a.value_coeff = t.get_double_or("value_coeff", 0.0);
    a.noise_dispersion = t.get_double_or("noise_dispersion", 0.0);
    a.shade = t.get_double_or("shade", 1.0);
    a.probe_bid = toml_eth_or(t, "probe_bid_eth", Eth{});
    a.fixed_bid = toml_eth_or(t, "fixed_bid_eth", Eth{});
    a.markup = t.get_double_or("markup", 0.0);
    a.opportunity_rate = t.get_double_or("opportunity_rate", 0.0);
    a.sigma_ref = t.get_double_or("sigma_ref", 2e-4);
    a.subscribes_to_resale = t.get_bool_or("subscribes", false);
    a.resale_channel = channel_from_name(t.get_string_or("channel", "Subscription"));
    a.validate();
    return a;
}

inline ReservePolicy parse_reserve(const TomlTable& t) {
    t.expect_only({"kind", "amount_eth", "c", "window_s", "floor_eth", "cap_eth"}, {}, {"steps"});
    const std::string kind = t.get_string("kind");
    if (kind == "fixed") return ReservePolicy::fixed(toml_eth(t, "amount_eth"));
    if (kind == "schedule") {
        auto it = t.arrays.find("steps");
        if (it == t.arrays.end() || it->second.empty())
            throw TomlError(t.line, "schedule reserve needs [[reserve.steps]]");
        std::vector<std::pair<TimeMs, Eth>> steps;
        for (const auto& step : it->second) {
            step.expect_only({"at", "amount_eth"});
            steps.emplace_back(toml_time(step.at("at")), toml_eth(step, "amount_eth"));
        }
        return ReservePolicy::schedule(std::move(steps));
    }
    if (kind == "vol_indexed") {
        return ReservePolicy::vol_indexed(
            t.get_double("c"), t.get_int("window_s") * kSecond, toml_eth(t, "floor_eth"),
            toml_eth_or(t, "cap_eth", Eth::parse("1000000")));
    }
    throw TomlError(t.line, "reserve kind must be fixed, schedule or vol_indexed");
}

} // namespace config_detail

inline ScenarioConfig parse_scenario(const TomlTable& root) {
    using namespace config_detail;
    root.expect_only({"name", "seed", "rounds", "start"},
                     {"schedule", "sequencer", "price", "reserve", "resale", "trading",
                      "analytics"},
                     {"agents", "regimes"});

    ScenarioConfig cfg;
    cfg.name = root.get_string_or("name", "scenario");
    if (root.has("seed")) {
        const auto s = root.get_int("seed");
        cfg.seed = static_cast<std::uint64_t>(s);
    }
    cfg.rounds = root.get_int_or("rounds", 0);
    if (root.has("start")) cfg.start = toml_time(root.at("start"));

    if (auto it = root.tables.find("schedule"); it != root.tables.end()) {
        const auto& t = it->second;
        t.expect_only({"round_length_ms", "wall_clock_shift_ms", "bid_close_offset_ms"});
        cfg.schedule.round_length = t.get_int_or("round_length_ms", 60'000);
        cfg.schedule.wall_clock_shift = t.get_int_or("wall_clock_shift_ms", 9'000);
        cfg.schedule.bid_close_offset = t.get_int_or("bid_close_offset_ms", 45'000);
        cfg.schedule.validate();
    }

    if (auto it = root.tables.find("sequencer"); it != root.tables.end()) {
        const auto& t = it->second;
        t.expect_only({"regular_delay_ms", "express_base_latency_ms"});
        cfg.sequencer.regular_delay = t.get_int_or("regular_delay_ms", 200);
        cfg.sequencer.express_base_latency = t.get_int_or("express_base_latency_ms", 0);
        cfg.sequencer.validate();
    }

    if (auto it = root.tables.find("price"); it != root.tables.end()) {
        const auto& t = it->second;
        t.expect_only({"asset", "initial", "warmup_s"}, {}, {"vol_steps"});
        cfg.price.asset = t.get_string_or("asset", "ETH");
        cfg.price.initial = t.get_double_or("initial", 3'000.0);
        cfg.price.warmup = t.get_int_or("warmup_s", 900) * kSecond;
        if (auto steps = t.arrays.find("vol_steps"); steps != t.arrays.end()) {
            for (const auto& step : steps->second) {
                step.expect_only({"at", "step_vol"});
                cfg.price.vol_steps.push_back(
                    {toml_time(step.at("at")), step.get_double("step_vol")});
            }
        }
    }

    if (auto it = root.tables.find("reserve"); it != root.tables.end())
        cfg.reserve = parse_reserve(it->second);

    if (auto it = root.tables.find("resale"); it != root.tables.end()) {
        const auto& t = it->second;
        t.expect_only({"reseller", "window_ms", "latency_ms", "payment_frac",
                       "subscription_flat_fee_eth", "demand_window_rounds",
                       "initial_demand_estimate_eth"});
        if (t.has("reseller")) cfg.resale.reseller = EntityId{t.get_string("reseller")};
        cfg.resale.window_ms = t.get_int_or("window_ms", 100);
        cfg.resale.latency_ms = t.get_int_or("latency_ms", 80);
        cfg.resale.payment_frac = t.get_double_or("payment_frac", 0.5);
        cfg.resale.subscription_flat_fee = toml_eth_or(t, "subscription_flat_fee_eth", Eth{});
        cfg.resale.demand_window_rounds =
            static_cast<int>(t.get_int_or("demand_window_rounds", 10));
        cfg.resale.initial_demand_estimate =
            toml_eth_or(t, "initial_demand_estimate_eth", Eth{});
        if (cfg.resale.window_ms <= 0 || cfg.resale.latency_ms < 0)
            throw TomlError(t.line, "resale window/latency out of range");
        if (cfg.resale.payment_frac < 0.0 || cfg.resale.payment_frac > 1.0)
            throw TomlError(t.line, "resale payment_frac outside [0,1]");
    }

    if (auto it = root.tables.find("trading"); it != root.tables.end()) {
        const auto& t = it->second;
        t.expect_only({"trade_size", "edge_vol_mult", "edge_decay_per_ms", "fee_usd",
                       "vol_window_s", "markout_ms"});
        cfg.trading.trade_size = t.get_double_or("trade_size", 1.0);
        cfg.trading.edge_vol_mult = t.get_double_or("edge_vol_mult", 1.0);
        cfg.trading.edge_decay_per_ms = t.get_double_or("edge_decay_per_ms", 5e-4);
        if (t.has("fee_usd")) cfg.trading.fee_usd = Usd::from_double(t.get_double("fee_usd"));
        cfg.trading.vol_window = t.get_int_or("vol_window_s", 60) * kSecond;
        cfg.trading.markout = t.get_int_or("markout_ms", 5'000);
    }

    if (auto it = root.arrays.find("agents"); it != root.arrays.end())
        for (const auto& t : it->second) cfg.agents.push_back(parse_agent(t));

    if (auto it = root.arrays.find("regimes"); it != root.arrays.end()) {
        for (const auto& t : it->second) {
            t.expect_only({"at", "name"});
            cfg.regimes.boundaries.emplace_back(toml_time(t.at("at")),
                                                regime_from_name(t.get_string("name")));
        }
    }
    if (cfg.regimes.boundaries.empty())
        cfg.regimes.boundaries = {{cfg.start, Regime::PreKairos}};

    const auto it = root.tables.find("analytics");
    if (it != root.tables.end()) {
        const auto& t = it->second;
        t.expect_only({"tracked", "reseller", "session_start", "session_end", "numeraire",
                       "liquid_assets", "max_swap_events"},
                      {}, {"contracts"});
        if (t.has("tracked")) {
            for (const auto& v : t.at("tracked").items) {
                if (v.kind != TomlValue::Kind::Str)
                    throw TomlError(v.line, "tracked entries must be strings");
                cfg.analytics.tracked.push_back(v.s);
            }
        }
        if (t.has("reseller")) cfg.analytics.reseller = EntityId{t.get_string("reseller")};
        if (t.has("session_start"))
            cfg.analytics.session.start_minute_of_day =
                parse_minute_of_day(t.get_string("session_start"), t.line);
        if (t.has("session_end"))
            cfg.analytics.session.end_minute_of_day =
                parse_minute_of_day(t.get_string("session_end"), t.line);
        cfg.analytics.numeraire = t.get_string_or("numeraire", cfg.price.asset);
        if (t.has("liquid_assets")) {
            cfg.analytics.classifier.liquid_assets.clear();
            for (const auto& v : t.at("liquid_assets").items)
                cfg.analytics.classifier.liquid_assets.insert(v.s);
        }
        cfg.analytics.classifier.max_swap_events =
            static_cast<int>(t.get_int_or("max_swap_events", 1));
        if (auto cs = t.arrays.find("contracts"); cs != t.arrays.end()) {
            for (const auto& c : cs->second) {
                c.expect_only({"entity", "contract"});
                cfg.analytics.classifier.target_contracts[c.get_string("entity")].insert(
                    c.get_string("contract"));
                cfg.analytics.classifier_explicit = true;
            }
        }
    } else {
        cfg.analytics.numeraire = cfg.price.asset;
    }

    // Defaults derived from the agent list.
    if (!cfg.analytics.reseller && cfg.resale.reseller)
        cfg.analytics.reseller = cfg.resale.reseller;
    if (cfg.analytics.tracked.empty())
        for (const auto& a : cfg.agents) cfg.analytics.tracked.push_back(a.id.id);
    if (!cfg.analytics.classifier_explicit) {
        for (const auto& a : cfg.agents)
            cfg.analytics.classifier.target_contracts[a.id.id].insert("sim:" + a.id.id);
        cfg.analytics.classifier.liquid_assets.insert(cfg.price.asset);
        cfg.analytics.classifier.liquid_assets.insert("USDT");
    }
    return cfg;
}

inline ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_scenario(parse_toml(ss.str()));
    } catch (const TomlError& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

} // namespace laneboost
