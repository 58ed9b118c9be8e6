// market_model.hpp
// Core domain types: participant ids, the round clock, and the regime
// segmentation used to slice every metric into analysis zones.

#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "laneboost/amount.hpp"
#include "laneboost/time.hpp"

namespace laneboost {

// Opaque participant label ("wintermute", "selini", "kairos", "arbitrum").
struct EntityId {
    std::string id;

    EntityId() = default;
    explicit EntityId(std::string s) : id(std::move(s)) {
        if (id.empty()) throw std::invalid_argument("EntityId: empty id");
    }

    auto operator<=>(const EntityId&) const = default;
};

enum class Regime { PreKairos, Kairos, ReservePriceAdaptation, SteadyState };

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::PreKairos: return "Pre-Kairos";
        case Regime::Kairos: return "Kairos";
        case Regime::ReservePriceAdaptation: return "ReservePriceAdaptation";
        case Regime::SteadyState: return "SteadyState";
    }
    throw std::logic_error("regime_name: bad regime");
}

inline Regime regime_from_name(const std::string& s) {
    if (s == "Pre-Kairos" || s == "PreKairos") return Regime::PreKairos;
    if (s == "Kairos") return Regime::Kairos;
    if (s == "ReservePriceAdaptation") return Regime::ReservePriceAdaptation;
    if (s == "SteadyState") return Regime::SteadyState;
    throw std::invalid_argument("unknown regime name: " + s);
}

// Ordered boundaries partitioning the timeline into half-open zones
// [b_i, b_{i+1}); the last zone extends to +inf.
struct RegimeSegmentation {
    std::vector<std::pair<TimeMs, Regime>> boundaries;

    void validate() const {
        if (boundaries.empty())
            throw std::invalid_argument("RegimeSegmentation: no boundaries");
        for (std::size_t i = 1; i < boundaries.size(); ++i)
            if (boundaries[i].first <= boundaries[i - 1].first)
                throw std::invalid_argument("RegimeSegmentation: boundaries not strictly increasing");
    }

    TimeMs start() const { return boundaries.front().first; }
};

inline Regime regime_of(TimeMs t, const RegimeSegmentation& seg) {
    seg.validate();
    if (t < seg.boundaries.front().first)
        throw std::out_of_range("regime_of: timestamp before first boundary");
    // Last boundary whose start <= t.
    auto it = std::upper_bound(
        seg.boundaries.begin(), seg.boundaries.end(), t,
        [](TimeMs v, const auto& b) { return v < b.first; });
    return std::prev(it)->second;
}

// The segmentation of the study period: Pre-Kairos from the period start,
// then the three events that reshape the market.
inline RegimeSegmentation study_period_segmentation(TimeMs period_start = utc_ms(2026, 2, 1)) {
    RegimeSegmentation seg;
    seg.boundaries = {
        {period_start, Regime::PreKairos},
        {utc_ms(2026, 2, 12, 20, 31, 51), Regime::Kairos},
        {utc_ms(2026, 2, 18, 20, 1, 51), Regime::ReservePriceAdaptation},
        {utc_ms(2026, 2, 25, 19, 49, 51), Regime::SteadyState},
    };
    return seg;
}

// One-minute rounds, shifted so round boundaries land wall_clock_shift ms
// before the wall-clock minute (second :51 under defaults). The auction for
// the next round's control window closes bid_close_offset into the round;
// the remainder of the round is the settlement window.
struct RoundSchedule {
    DurationMs round_length{60'000};
    DurationMs wall_clock_shift{9'000};
    DurationMs bid_close_offset{45'000};

    void validate() const {
        if (!(bid_close_offset > 0 && bid_close_offset < round_length))
            throw std::invalid_argument("RoundSchedule: need 0 < bid_close_offset < round_length");
        if (!(wall_clock_shift >= 0 && wall_clock_shift < round_length))
            throw std::invalid_argument("RoundSchedule: need 0 <= wall_clock_shift < round_length");
    }
};

struct RoundBounds {
    std::int64_t round_index{0};
    TimeMs start;
    TimeMs bid_close;
    TimeMs end;
};

inline RoundBounds round_bounds(std::int64_t round_index, const RoundSchedule& sched) {
    sched.validate();
    if (round_index < 0) throw std::invalid_argument("round_bounds: negative round index");
    const DurationMs offset =
        (sched.round_length - sched.wall_clock_shift) % sched.round_length;
    RoundBounds b;
    b.round_index = round_index;
    b.start = TimeMs{round_index * sched.round_length + offset};
    b.bid_close = b.start + sched.bid_close_offset;
    b.end = b.start + sched.round_length;
    return b;
}

// Index of the round whose [start, end) window contains t; negative before
// round 0 starts.
inline std::int64_t round_index_at(TimeMs t, const RoundSchedule& sched) {
    sched.validate();
    const DurationMs offset =
        (sched.round_length - sched.wall_clock_shift) % sched.round_length;
    std::int64_t shifted = t.ms - offset;
    std::int64_t idx = shifted / sched.round_length;
    if (shifted < 0 && shifted % sched.round_length != 0) --idx;
    return idx;
}

} // namespace laneboost
