// dataset.hpp
// The analytics pipeline's common input: settled rounds, raw bids, trades,
// prices and resale accounting. A dataset is built either from a simulation
// result or by ingesting the replay CSVs (schemas in SCHEMAS.md).

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "laneboost/analytics.hpp"
#include "laneboost/auction.hpp"
#include "laneboost/config.hpp"
#include "laneboost/csv.hpp"
#include "laneboost/price_process.hpp"
#include "laneboost/resale.hpp"
#include "laneboost/simulation.hpp"

namespace laneboost {

// Frozen replay schemas (SCHEMAS.md).
inline const std::vector<std::string> kBidsSchema = {"round_start_utc_ms", "bidder", "amount_eth",
                                                     "submitted_utc_ms"};
inline const std::vector<std::string> kTradesSchema = {
    "trade_id", "utc_ms", "buy_asset", "x", "sell_asset", "y", "fees_usd",
    "lane",     "sender", "contract",  "swap_events"};
inline const std::vector<std::string> kPricesSchema = {"utc_ms", "asset", "mid_price"};
inline const std::vector<std::string> kPaymentsSchema = {"tx_hash", "utc_ms", "payment_eth"};
inline const std::vector<std::string> kReceiptsSchema = {"window_start_ms", "tx_id", "channel",
                                                         "payment_eth"};
inline const std::vector<std::string> kTraceSchema = {
    "tx_id", "sender", "lane", "via_resale", "arrival_ms", "executed_ms", "round_index"};
inline const std::vector<std::string> kOutcomesSchema = {
    "round_index", "start_utc_ms", "bid_close_utc_ms", "end_utc_ms", "reserve_eth",
    "winner",      "top_bid_eth",  "paid_eth",         "admissible_bids"};

struct PaymentObs {
    std::string tx_hash;
    TimeMs time;
    Eth amount;
};

namespace dataset_detail {

template <typename AmountT>
AmountT parse_amount_field(const CsvReader& csv, std::size_t row, std::size_t col) {
    try {
        return AmountT::parse(csv.field(row, col));
    } catch (const std::invalid_argument& e) {
        throw CsvError(csv.path(), csv.line_of(row),
                       "column '" + csv.schema()[col] + "': " + e.what());
    }
}

} // namespace dataset_detail

struct Dataset {
    RegimeSegmentation seg;
    RoundSchedule schedule;
    std::vector<RoundRecord> rounds;   // ordered by round index
    std::vector<Bid> bids;
    std::vector<Trade> trades;
    PriceBook prices;
    ResaleLedger resale;
    std::vector<PaymentObs> payments;  // observed on-chain resale payments
    AnalyticsConfig analytics;
    TradingConfig trading;
};

inline Dataset dataset_from_simulation(const ScenarioConfig& cfg, const SimulationResult& sim) {
    Dataset ds;
    ds.seg = cfg.regimes;
    ds.schedule = cfg.schedule;
    ds.rounds = sim.rounds;
    ds.bids = sim.bids;
    ds.trades = sim.trades;
    ds.prices.add(sim.series);
    ds.resale = sim.resale;
    for (const auto& rec : sim.receipts) {
        if (rec.channel != PaymentChannel::OnChain) continue;
        ds.payments.push_back({rec.tx_id, rec.window_start, rec.payment});
    }
    ds.analytics = cfg.analytics;
    ds.trading = cfg.trading;
    return ds;
}

// ---------------------------------------------------------------------------
// Replay ingestion
// ---------------------------------------------------------------------------

struct ReplayInputs {
    std::string bids_csv;
    std::string trades_csv;
    std::string prices_csv;
    std::string payments_csv;  // optional: empty = no payment observations
};

inline std::vector<Bid> load_bids_csv(const std::string& path, const RoundSchedule& sched) {
    CsvReader csv(path, kBidsSchema);
    std::vector<Bid> bids;
    for (std::size_t i = 0; i < csv.size(); ++i) {
        Bid b;
        const TimeMs round_start{csv.int_field(i, 0)};
        const std::int64_t idx = round_index_at(round_start, sched);
        if (round_bounds(idx, sched).start != round_start)
            throw CsvError(path, csv.line_of(i),
                           "round_start_utc_ms is not a round boundary under the schedule");
        b.round_index = idx;
        b.bidder = EntityId{csv.field(i, 1)};
        b.amount = dataset_detail::parse_amount_field<Eth>(csv, i, 2);
        b.submitted_at = TimeMs{csv.int_field(i, 3)};
        bids.push_back(std::move(b));
    }
    return bids;
}

inline std::vector<Trade> load_trades_csv(const std::string& path) {
    CsvReader csv(path, kTradesSchema);
    std::vector<Trade> trades;
    for (std::size_t i = 0; i < csv.size(); ++i) {
        Trade t;
        t.trade_id = csv.field(i, 0);
        t.time = TimeMs{csv.int_field(i, 1)};
        t.buy_asset = csv.field(i, 2);
        t.x = csv.double_field(i, 3);
        t.sell_asset = csv.field(i, 4);
        t.y = csv.double_field(i, 5);
        t.fees = dataset_detail::parse_amount_field<Usd>(csv, i, 6);
        t.lane = lane_from_name(csv.field(i, 7));
        t.sender = EntityId{csv.field(i, 8)};
        t.contract = csv.field(i, 9);
        t.swap_events = static_cast<int>(csv.int_field(i, 10));
        trades.push_back(std::move(t));
    }
    return trades;
}

inline PriceBook load_prices_csv(const std::string& path) {
    CsvReader csv(path, kPricesSchema);
    std::map<std::string, PriceSeries> by_asset;
    for (std::size_t i = 0; i < csv.size(); ++i) {
        auto& s = by_asset[csv.field(i, 1)];
        s.asset = csv.field(i, 1);
        s.times.push_back(TimeMs{csv.int_field(i, 0)});
        s.mids.push_back(csv.double_field(i, 2));
    }
    PriceBook book;
    for (auto& [asset, series] : by_asset) {
        series.validate();  // strictly increasing 1 s spacing
        book.add(std::move(series));
    }
    return book;
}

inline std::vector<PaymentObs> load_payments_csv(const std::string& path) {
    CsvReader csv(path, kPaymentsSchema);
    std::vector<PaymentObs> out;
    for (std::size_t i = 0; i < csv.size(); ++i)
        out.push_back({csv.field(i, 0), TimeMs{csv.int_field(i, 1)},
                       dataset_detail::parse_amount_field<Eth>(csv, i, 2)});
    return out;
}

// Re-settles every round found in the bids file under the configured reserve
// policy, then assembles the same dataset shape a simulation produces. The
// control-window linkage (winner of round r holds round r+1) drives the
// resale ledger's bids-paid column.
inline Dataset dataset_from_replay(const ScenarioConfig& cfg, const ReplayInputs& in) {
    Dataset ds;
    ds.seg = cfg.regimes;
    ds.schedule = cfg.schedule;
    ds.analytics = cfg.analytics;
    ds.trading = cfg.trading;
    if (cfg.analytics.classifier.target_contracts.empty())
        throw std::runtime_error(
            "replay config must define [[analytics.contracts]] or [[agents]]");

    ds.bids = load_bids_csv(in.bids_csv, cfg.schedule);
    ds.trades = load_trades_csv(in.trades_csv);
    ds.prices = load_prices_csv(in.prices_csv);
    if (!in.payments_csv.empty()) ds.payments = load_payments_csv(in.payments_csv);
    if (!cfg.reserve) throw std::runtime_error("replay config must define a reserve policy");

    const VolProvider* vp = nullptr;
    std::optional<VolProvider> storage;
    if (const PriceSeries* s = ds.prices.series(cfg.analytics.numeraire)) {
        storage.emplace(*s);
        vp = &*storage;
    }
    SigmaProvider sigma = [vp](TimeMs end, DurationMs window) -> std::optional<double> {
        return vp ? vp->vol(end, window) : std::nullopt;
    };

    std::map<std::int64_t, std::vector<Bid>> by_round;
    for (const auto& b : ds.bids) by_round[b.round_index].push_back(b);
    for (const auto& [idx, bids] : by_round) {
        const auto rb = round_bounds(idx, cfg.schedule);
        const auto quote = reserve_at(*cfg.reserve, rb, sigma);
        RoundRecord rec{rb, quote.reserve, settle(bids, quote.reserve, rb)};
        ds.rounds.push_back(std::move(rec));
    }

    // Resale ledger: reseller wins fund the next round's control window.
    if (cfg.analytics.reseller) {
        for (const auto& r : ds.rounds) {
            if (!r.outcome.has_winner() || !(*r.outcome.winner == *cfg.analytics.reseller))
                continue;
            const auto nb = round_bounds(r.bounds.round_index + 1, cfg.schedule);
            ds.resale.row(nb.round_index, nb.start).bids_paid_primary += *r.outcome.paid;
        }
        for (const auto& p : ds.payments) {
            const std::int64_t idx = round_index_at(p.time, cfg.schedule);
            const auto rb = round_bounds(idx, cfg.schedule);
            ds.resale.row(idx, rb.start).onchain_receipts += p.amount;
        }
    }
    return ds;
}

} // namespace laneboost
