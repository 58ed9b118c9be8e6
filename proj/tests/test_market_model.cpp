#include <catch2/catch.hpp>

#include "laneboost/market_model.hpp"

using namespace laneboost;

TEST_CASE("utc_ms matches known epoch timestamps") {
    CHECK(utc_ms(1970, 1, 1).ms == 0);
    CHECK(utc_ms(2026, 1, 1).ms == 1767225600000LL);
    CHECK(utc_ms(2026, 2, 12, 20, 31, 51).ms == 1770928311000LL);
    CHECK(utc_ms(2026, 2, 18, 20, 1, 51).ms == 1771444911000LL);
    CHECK(utc_ms(2026, 2, 25, 19, 49, 51).ms == 1772048991000LL);
}

TEST_CASE("regime_of the study timeline") {
    const auto seg = study_period_segmentation();

    SECTION("just before the first event stays Pre-Kairos") {
        CHECK(regime_of(utc_ms(2026, 2, 12, 20, 31, 50, 999), seg) == Regime::PreKairos);
    }
    SECTION("a boundary timestamp belongs to the regime that starts there") {
        CHECK(regime_of(utc_ms(2026, 2, 12, 20, 31, 51), seg) == Regime::Kairos);
        CHECK(regime_of(utc_ms(2026, 2, 18, 20, 1, 51), seg) == Regime::ReservePriceAdaptation);
    }
    SECTION("the reserve reversion opens SteadyState, which extends forever") {
        CHECK(regime_of(utc_ms(2026, 2, 25, 19, 49, 51), seg) == Regime::SteadyState);
        CHECK(regime_of(utc_ms(2026, 3, 12), seg) == Regime::SteadyState);
        CHECK(regime_of(utc_ms(2031, 1, 1), seg) == Regime::SteadyState);
    }
    SECTION("before the period start is out of range") {
        CHECK_THROWS_AS(regime_of(utc_ms(2026, 1, 31, 23, 59, 59), seg), std::out_of_range);
    }
}

TEST_CASE("regime_of is piecewise constant and total") {
    const auto seg = study_period_segmentation();
    for (std::size_t i = 0; i < seg.boundaries.size(); ++i) {
        const TimeMs b = seg.boundaries[i].first;
        const Regime r = seg.boundaries[i].second;
        CHECK(regime_of(b, seg) == r);
        CHECK(regime_of(b + 1, seg) == r);
        if (i + 1 < seg.boundaries.size())
            CHECK(regime_of(seg.boundaries[i + 1].first - 1, seg) == r);
    }
}

TEST_CASE("regime segmentation rejects unordered boundaries") {
    RegimeSegmentation seg;
    seg.boundaries = {{TimeMs{100}, Regime::PreKairos}, {TimeMs{100}, Regime::Kairos}};
    CHECK_THROWS_AS(seg.validate(), std::invalid_argument);
}

TEST_CASE("round_bounds places rounds on wall-clock second 51") {
    RoundSchedule sched;  // defaults: 60 s rounds, 9 s shift, bid close at 45 s

    // Pick the round starting 2026-02-12 20:31:51.
    const TimeMs start = utc_ms(2026, 2, 12, 20, 31, 51);
    const std::int64_t idx = (start.ms - 51'000) / 60'000;
    const RoundBounds b = round_bounds(idx, sched);

    CHECK(b.start == start);
    CHECK(b.start.ms % 60'000 == 51'000);
    CHECK(b.bid_close == utc_ms(2026, 2, 12, 20, 32, 36));
    CHECK(b.end == utc_ms(2026, 2, 12, 20, 32, 51));
    CHECK(b.end - b.bid_close == 15'000);  // settlement window
}

TEST_CASE("consecutive rounds tile the timeline") {
    RoundSchedule sched;
    for (std::int64_t i : {0LL, 1LL, 7LL, 100'000LL}) {
        const auto a = round_bounds(i, sched);
        const auto b = round_bounds(i + 1, sched);
        CHECK(b.start == a.end);
        CHECK(b.start - a.start == 60'000);
        CHECK(round_index_at(a.start, sched) == i);
        CHECK(round_index_at(a.end - 1, sched) == i);
        CHECK(round_index_at(a.end, sched) == i + 1);
    }
}

TEST_CASE("round_bounds honors a zero shift") {
    RoundSchedule sched;
    sched.wall_clock_shift = 0;
    const auto b = round_bounds(3, sched);
    CHECK(b.start.ms == 180'000);
    CHECK(b.bid_close.ms == 225'000);
    CHECK(b.end.ms == 240'000);
}

TEST_CASE("round schedule validation") {
    RoundSchedule bad;
    bad.bid_close_offset = 60'000;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK_THROWS_AS(round_bounds(-1, RoundSchedule{}), std::invalid_argument);
}
