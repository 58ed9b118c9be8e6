// sequencer.hpp
// Sequencer model: two FCFS queues merged by execution time. Regular
// transactions execute a fixed delay after arrival; express transactions
// from the round controller execute (near-)immediately; resale batches
// execute at batch release plus the reseller's latency.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "laneboost/market_model.hpp"
#include "laneboost/time.hpp"

namespace laneboost {

enum class Lane { Express, Regular };

inline const char* lane_name(Lane l) { return l == Lane::Express ? "Express" : "Regular"; }

inline Lane lane_from_name(const std::string& s) {
    if (s == "Express") return Lane::Express;
    if (s == "Regular") return Lane::Regular;
    throw std::invalid_argument("unknown lane: " + s);
}

struct TxEvent {
    std::string tx_id;
    EntityId sender;
    TimeMs arrival;
    Lane lane{Lane::Regular};
    bool via_resale{false};
    DurationMs resale_latency{0};            // meaningful only when via_resale
    std::optional<TimeMs> batch_release;     // set by the resale market
    std::optional<std::size_t> trade_ref;    // index into the run's trade list
    std::int64_t round_index{0};
    TimeMs executed_at;
};

struct SequencerConfig {
    DurationMs regular_delay{200};
    DurationMs express_base_latency{0};

    void validate() const {
        if (regular_delay <= 0)
            throw std::invalid_argument("SequencerConfig: regular_delay must be positive");
        if (express_base_latency < 0)
            throw std::invalid_argument("SequencerConfig: express_base_latency must be non-negative");
    }
};

// Execution time for one transaction. Returns nullopt for an express
// submission from a sender that does not hold express authority; the caller
// re-routes the transaction to the regular lane in the same millisecond.
inline std::optional<TimeMs> assign_execution(const TxEvent& tx, const SequencerConfig& cfg,
                                              bool express_authorized) {
    cfg.validate();
    if (tx.lane == Lane::Regular) return tx.arrival + cfg.regular_delay;
    if (!express_authorized) return std::nullopt;
    if (tx.via_resale) {
        if (!tx.batch_release)
            throw std::invalid_argument("assign_execution: resale tx has no batch release time");
        return *tx.batch_release + tx.resale_latency;
    }
    return tx.arrival + cfg.express_base_latency;
}

// Merged execution order: by executed_at, then express before regular, then
// arrival, then tx_id. The express-first rule for equal execution times is a
// modeling choice recorded in the trace schema notes.
inline std::vector<TxEvent> merged_order(std::span<const TxEvent> events) {
    std::vector<TxEvent> out(events.begin(), events.end());
    for (const TxEvent& e : out)
        if (e.executed_at < e.arrival)
            throw std::invalid_argument("merged_order: executed_at before arrival for " + e.tx_id);
    std::stable_sort(out.begin(), out.end(), [](const TxEvent& a, const TxEvent& b) {
        if (a.executed_at != b.executed_at) return a.executed_at < b.executed_at;
        if (a.lane != b.lane) return a.lane == Lane::Express;
        if (a.arrival != b.arrival) return a.arrival < b.arrival;
        return a.tx_id < b.tx_id;
    });
    return out;
}

} // namespace laneboost
