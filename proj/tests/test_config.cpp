#include <catch2/catch.hpp>

#include "laneboost/config.hpp"

using namespace laneboost;

namespace {

const char* kMinimalScenario = R"(
name = "mini"
seed = 7
rounds = 5
start = "2026-02-01 00:00:51"

[price]
asset = "ETH"
initial = 3000.0
warmup_s = 300
[[price.vol_steps]]
at = "2026-01-31 00:00:00"
step_vol = 3e-4

[reserve]
kind = "fixed"
amount_eth = "0.001"

[[agents]]
id = "wintermute"
strategy = "Competitive"
value_coeff = 40_000.0
shade = 0.75
noise_dispersion = 0.3
opportunity_rate = 0.05

[[agents]]
id = "selini"
strategy = "Competitive"
value_coeff = 35_000.0
shade = 0.7
noise_dispersion = 0.3
opportunity_rate = 0.04

[[regimes]]
at = "2026-02-01 00:00:51"
name = "Pre-Kairos"
)";

} // namespace

TEST_CASE("toml parser: values, sections, arrays of tables") {
    const auto root = parse_toml(R"(
# comment
top = 1
[a]
s = "hello # not a comment"
f = 2.5
flag = true
nums = [1, 2, 3]
[a.b]
x = 60_000
[[items]]
k = 1
[[items]]
k = 2
)");
    CHECK(root.get_int("top") == 1);
    const auto& a = root.tables.at("a");
    CHECK(a.get_string("s") == "hello # not a comment");
    CHECK(a.get_double("f") == 2.5);
    CHECK(a.get_bool("flag"));
    CHECK(a.at("nums").items.size() == 3);
    CHECK(a.tables.at("b").get_int("x") == 60'000);
    CHECK(root.arrays.at("items").size() == 2);
    CHECK(root.arrays.at("items")[1].get_int("k") == 2);
}

TEST_CASE("toml parser error positions") {
    try {
        parse_toml("a = 1\nb = @bad\n");
        FAIL("expected TomlError");
    } catch (const TomlError& e) {
        CHECK(e.line == 2);
    }
    CHECK_THROWS_AS(parse_toml("a = 1\na = 2\n"), TomlError);
    CHECK_THROWS_AS(parse_toml("just a line\n"), TomlError);
    CHECK_THROWS_AS(parse_toml("x = [1, 2\n"), TomlError);
}

TEST_CASE("timestamps parse from strings and epoch ms") {
    const auto root = parse_toml(R"(
a = "2026-02-12 20:31:51"
b = 1770928311000
c = "2026-02-12"
)");
    CHECK(toml_time(root.at("a")).ms == 1770928311000LL);
    CHECK(toml_time(root.at("b")).ms == 1770928311000LL);
    CHECK(toml_time(root.at("c")).ms == utc_ms(2026, 2, 12).ms);
}

TEST_CASE("scenario config parses and validates") {
    const auto cfg = parse_scenario(parse_toml(kMinimalScenario));
    CHECK(cfg.name == "mini");
    CHECK(cfg.seed == 7);
    CHECK(cfg.rounds == 5);
    CHECK(cfg.start.ms == utc_ms(2026, 2, 1, 0, 0, 51).ms);
    CHECK(cfg.agents.size() == 2);
    CHECK(cfg.agents[0].value_coeff == 40'000.0);
    CHECK_NOTHROW(cfg.validate_for_simulation());

    // Derived defaults: tracked entities and synthesized classifier contracts.
    CHECK(cfg.analytics.tracked == std::vector<std::string>{"wintermute", "selini"});
    CHECK(cfg.analytics.classifier.target_contracts.at("selini").count("sim:selini") == 1);
    CHECK(cfg.analytics.classifier.liquid_assets.count("ETH") == 1);
}

TEST_CASE("unknown keys are rejected with their line") {
    std::string bad = kMinimalScenario;
    bad += "\ntypo_key = 1\n";
    CHECK_THROWS_AS(parse_scenario(parse_toml(bad)), TomlError);

    std::string bad_agent = kMinimalScenario;
    bad_agent += "\n[[agents]]\nid = \"x\"\nstrategy = \"Competitive\"\nshady = 0.5\n";
    CHECK_THROWS_AS(parse_scenario(parse_toml(bad_agent)), TomlError);

    std::string bad_section = kMinimalScenario;
    bad_section += "\n[unknown_section]\nz = 1\n";
    CHECK_THROWS_AS(parse_scenario(parse_toml(bad_section)), TomlError);
}

TEST_CASE("start must sit on a round boundary") {
    std::string bad = kMinimalScenario;
    const std::string from = "start = \"2026-02-01 00:00:51\"";
    bad.replace(bad.find(from), from.size(), "start = \"2026-02-01 00:00:50\"");
    const auto cfg = parse_scenario(parse_toml(bad));
    CHECK_THROWS_WITH(cfg.validate_for_simulation(),
                      Catch::Contains("round boundary"));
}

TEST_CASE("resale subscribers require a reseller") {
    std::string bad = kMinimalScenario;
    bad += "\n[[agents]]\nid = \"u\"\nstrategy = \"ResaleUser\"\nsubscribes = true\n";
    const auto cfg = parse_scenario(parse_toml(bad));
    CHECK_THROWS_WITH(cfg.validate_for_simulation(), Catch::Contains("reseller"));
}

TEST_CASE("schedule reserve policy parses") {
    const auto root = parse_toml(R"(
[reserve]
kind = "schedule"
[[reserve.steps]]
at = "2026-02-01 00:00:00"
amount_eth = "0.001"
[[reserve.steps]]
at = "2026-02-18 20:01:51"
amount_eth = "0.0075"
)");
    const auto cfg = parse_scenario(root);
    REQUIRE(cfg.reserve.has_value());
    const auto rb = round_bounds(round_index_at(utc_ms(2026, 2, 20, 0, 0, 51), RoundSchedule{}),
                                 RoundSchedule{});
    CHECK(reserve_at(*cfg.reserve, rb, nullptr).reserve.str() == "0.0075");
}

TEST_CASE("vol-indexed reserve policy parses") {
    const auto root = parse_toml(R"(
[reserve]
kind = "vol_indexed"
c = 1e5
window_s = 60
floor_eth = "0.001"
cap_eth = "0.05"
)");
    const auto cfg = parse_scenario(root);
    REQUIRE(cfg.reserve.has_value());
    const auto rb = round_bounds(100, RoundSchedule{});
    const auto q = reserve_at(*cfg.reserve, rb,
                              [](TimeMs, DurationMs) { return std::optional<double>{2e-4}; });
    CHECK(q.reserve.str() == "0.004");
}
