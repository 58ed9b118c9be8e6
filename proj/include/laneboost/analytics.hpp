// analytics.hpp
// Empirical metrics applied identically to simulated traces and ingested
// datasets: the CEX-DEX classification heuristic, bid-gap statistics, win
// shares, bidder participation combinations, volatility correlations,
// hour-of-day loss profiles, and the surplus decomposition.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "laneboost/amount.hpp"
#include "laneboost/auction.hpp"
#include "laneboost/market_model.hpp"
#include "laneboost/price_process.hpp"
#include "laneboost/stats.hpp"

namespace laneboost {

// One settled (or failed) auction round with its context.
struct RoundRecord {
    RoundBounds bounds;
    Eth reserve;
    AuctionOutcome outcome;

    bool has_bids() const { return !outcome.admissible.empty(); }
};

constexpr std::array<Regime, 4> kAllRegimes = {Regime::PreKairos, Regime::Kairos,
                                               Regime::ReservePriceAdaptation,
                                               Regime::SteadyState};

// ---------------------------------------------------------------------------
// CEX-DEX classification
// ---------------------------------------------------------------------------

struct ClassifierRules {
    // entity id -> known CEX-DEX contracts of that entity
    std::map<std::string, std::set<std::string>> target_contracts;
    std::set<std::string> liquid_assets{"WETH", "WBTC", "ARB", "USDC", "USDT"};
    int max_swap_events{1};

    void validate() const {
        if (target_contracts.empty())
            throw std::invalid_argument("ClassifierRules: no target contracts");
        if (liquid_assets.empty())
            throw std::invalid_argument("ClassifierRules: no liquid assets");
        if (max_swap_events < 1)
            throw std::invalid_argument("ClassifierRules: max_swap_events < 1");
    }

    bool contract_tracked(const std::string& contract) const {
        for (const auto& [entity, contracts] : target_contracts)
            if (contracts.count(contract)) return true;
        return false;
    }
};

// True iff the record targets a tracked contract, emits a single swap-related
// event (up to the configured cap) and trades a liquid pair. Malformed
// records throw; aggregation callers skip and count them.
inline bool classify_cex_dex(const Trade& t, const ClassifierRules& rules) {
    rules.validate();
    if (t.swap_events < 0 || t.buy_asset.empty() || t.sell_asset.empty())
        throw std::invalid_argument("classify_cex_dex: malformed record " + t.trade_id);
    if (!rules.contract_tracked(t.contract)) return false;
    if (t.swap_events < 1 || t.swap_events > rules.max_swap_events) return false;
    return rules.liquid_assets.count(t.buy_asset) > 0 &&
           rules.liquid_assets.count(t.sell_asset) > 0;
}

// ---------------------------------------------------------------------------
// Bid gap
// ---------------------------------------------------------------------------

inline double relative_bid_gap(const AuctionOutcome& outcome) {
    if (!outcome.has_winner())
        throw std::invalid_argument("relative_bid_gap: round has no winner");
    const double top = outcome.top_bid->to_double();
    const double paid = outcome.paid->to_double();
    return (top - paid) / top;
}

inline double median_of(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median_of: empty");
    std::sort(v.begin(), v.end());
    return percentile_sorted(v, 0.5);
}

struct GapSummary {
    std::int64_t settled_rounds{0};
    std::optional<double> median_gap;        // over all settled rounds
    std::optional<double> median_daily_gap;  // median over UTC days of daily medians
    std::optional<double> mean_gap;
};

inline GapSummary gap_summary(std::span<const RoundRecord> rounds) {
    GapSummary out;
    std::vector<double> gaps;
    std::map<std::int64_t, std::vector<double>> by_day;
    for (const auto& r : rounds) {
        if (!r.outcome.has_winner()) continue;
        const double g = relative_bid_gap(r.outcome);
        gaps.push_back(g);
        by_day[utc_day_index(r.bounds.start)].push_back(g);
    }
    out.settled_rounds = static_cast<std::int64_t>(gaps.size());
    if (gaps.empty()) return out;
    double mean = 0;
    for (double g : gaps) mean += g;
    out.mean_gap = mean / static_cast<double>(gaps.size());
    out.median_gap = median_of(gaps);
    std::vector<double> daily;
    daily.reserve(by_day.size());
    for (auto& [day, v] : by_day) daily.push_back(median_of(std::move(v)));
    out.median_daily_gap = median_of(std::move(daily));
    return out;
}

// ---------------------------------------------------------------------------
// Win shares
// ---------------------------------------------------------------------------

struct WinShareCell {
    std::int64_t wins{0};
    std::int64_t rounds{0};  // rounds with >= 1 admissible bid in the zone
    double share() const {
        return rounds == 0 ? 0.0 : static_cast<double>(wins) / static_cast<double>(rounds);
    }
};

struct WinShareTable {
    // entity -> regime cells (index by regime enum) plus overall
    std::map<std::string, std::array<WinShareCell, 4>> per_regime;
    std::map<std::string, WinShareCell> overall;
    std::array<std::int64_t, 4> rounds_per_regime{};
    std::int64_t rounds_total{0};
};

inline WinShareTable win_shares(std::span<const RoundRecord> rounds,
                                const RegimeSegmentation& seg) {
    WinShareTable t;
    for (const auto& r : rounds) {
        if (!r.has_bids()) continue;  // rounds without bids stay out of the table
        const auto reg = regime_of(r.bounds.start, seg);
        const auto ri = static_cast<std::size_t>(reg);
        ++t.rounds_per_regime[ri];
        ++t.rounds_total;
        if (r.outcome.has_winner()) {
            const std::string& who = r.outcome.winner->id;
            ++t.per_regime[who][ri].wins;
            ++t.overall[who].wins;
        }
    }
    for (auto& [who, cells] : t.per_regime)
        for (std::size_t i = 0; i < 4; ++i) cells[i].rounds = t.rounds_per_regime[i];
    for (auto& [who, cell] : t.overall) cell.rounds = t.rounds_total;
    return t;
}

// ---------------------------------------------------------------------------
// Bidder combinations
// ---------------------------------------------------------------------------

struct CombinationTable {
    std::vector<std::string> tracked;              // combination alphabet, in config order
    std::map<std::string, std::array<std::int64_t, 4>> rounds;  // label -> per-regime counts
    std::map<std::string, std::int64_t> rounds_overall;
    std::array<std::int64_t, 4> total_per_regime{};
    std::int64_t total{0};
    std::int64_t rounds_with_untracked{0};  // rounds involving any other bidder
};

// Partitions rounds by which tracked entities participated (other bidders are
// ignored for the label but counted separately). Rounds without any tracked
// participant - including rounds with no bids at all - land in "None".
inline CombinationTable bidder_combinations(std::span<const RoundRecord> rounds,
                                            const RegimeSegmentation& seg,
                                            std::vector<std::string> tracked) {
    if (tracked.empty())
        throw std::invalid_argument("bidder_combinations: no tracked entities");
    CombinationTable t;
    t.tracked = std::move(tracked);
    for (const auto& r : rounds) {
        const auto reg = regime_of(r.bounds.start, seg);
        const auto ri = static_cast<std::size_t>(reg);
        std::string label;
        bool untracked = false;
        for (const auto& name : t.tracked) {
            const bool present =
                std::any_of(r.outcome.admissible.begin(), r.outcome.admissible.end(),
                            [&](const AdmissibleBid& b) { return b.bidder.id == name; });
            if (present) {
                if (!label.empty()) label += "+";
                label += name;
            }
        }
        for (const auto& b : r.outcome.admissible)
            if (std::find(t.tracked.begin(), t.tracked.end(), b.bidder.id) == t.tracked.end())
                untracked = true;
        if (untracked) ++t.rounds_with_untracked;
        if (label.empty()) label = "None";
        ++t.rounds[label][ri];
        ++t.rounds_overall[label];
        ++t.total_per_regime[ri];
        ++t.total;
    }
    return t;
}

// ---------------------------------------------------------------------------
// Bid distribution percentiles
// ---------------------------------------------------------------------------

struct BidDistributionRow {
    std::string bidder;
    Regime regime{Regime::PreKairos};
    std::int64_t n{0};
    double p25{0}, median{0}, p75{0}, p99{0}, mean{0};
};

// Distribution over every submitted bid (not per-round latest), as in the
// bid-level tables.
inline std::vector<BidDistributionRow> bid_distribution(std::span<const Bid> bids,
                                                        const RegimeSegmentation& seg) {
    std::map<std::pair<std::string, int>, std::vector<double>> buckets;
    for (const Bid& b : bids) {
        const auto reg = regime_of(b.submitted_at, seg);
        buckets[{b.bidder.id, static_cast<int>(reg)}].push_back(b.amount.to_double());
    }
    std::vector<BidDistributionRow> rows;
    for (auto& [key, v] : buckets) {
        std::sort(v.begin(), v.end());
        BidDistributionRow row;
        row.bidder = key.first;
        row.regime = static_cast<Regime>(key.second);
        row.n = static_cast<std::int64_t>(v.size());
        row.p25 = percentile_sorted(v, 0.25);
        row.median = percentile_sorted(v, 0.50);
        row.p75 = percentile_sorted(v, 0.75);
        row.p99 = percentile_sorted(v, 0.99);
        double m = 0;
        for (double x : v) m += x;
        row.mean = m / static_cast<double>(v.size());
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Hour-of-day loss profile for the reseller
// ---------------------------------------------------------------------------

struct SessionWindow {
    int start_minute_of_day{14 * 60 + 30};  // 14:30 UTC
    int end_minute_of_day{21 * 60};         // 21:00 UTC

    // Hour bins overlapping the session window.
    bool hour_in_session(int hour) const {
        return hour * 60 < end_minute_of_day && (hour + 1) * 60 > start_minute_of_day;
    }
};

struct HourlyLossCell {
    std::int64_t participated{0};
    std::int64_t lost{0};
    std::vector<double> bids_win;
    std::vector<double> bids_loss;
    double loss_rate() const {
        return participated == 0 ? 0.0
                                 : static_cast<double>(lost) / static_cast<double>(participated);
    }
};

struct HourlyLossProfile {
    std::array<HourlyLossCell, 24> by_hour;
    HourlyLossCell in_session;
    HourlyLossCell out_session;
};

inline HourlyLossProfile hourly_loss_profile(std::span<const RoundRecord> rounds,
                                             const EntityId& reseller,
                                             const SessionWindow& session = {}) {
    HourlyLossProfile out;
    for (const auto& r : rounds) {
        const AdmissibleBid* own = nullptr;
        for (const auto& b : r.outcome.admissible)
            if (b.bidder == reseller) own = &b;
        if (!own) continue;
        const bool lost = !(r.outcome.has_winner() && *r.outcome.winner == reseller);
        const int hour = utc_hour_of_day(r.bounds.start);
        auto apply = [&](HourlyLossCell& cell) {
            ++cell.participated;
            if (lost) {
                ++cell.lost;
                cell.bids_loss.push_back(own->amount.to_double());
            } else {
                cell.bids_win.push_back(own->amount.to_double());
            }
        };
        apply(out.by_hour[static_cast<std::size_t>(hour)]);
        apply(session.hour_in_session(hour) ? out.in_session : out.out_session);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Surplus decomposition
// ---------------------------------------------------------------------------

// One positive-PnL trade contribution, already filtered and quantized at the
// analytics boundary.
struct PnlRow {
    TimeMs time;
    std::string sender;
    Lane lane{Lane::Regular};
    Usd pnl;
    Usd fees;
};

struct SurplusRow {
    std::int64_t trade_count{0};
    Usd total_pnl;
    Usd tx_fees;
    Usd bids_paid;
    Usd top_bids;
    Usd net_surplus;
    bool shares_defined{false};
    double captured_share_paid{0.0};
    double captured_share_top{0.0};

    void finalize() {
        net_surplus = total_pnl - tx_fees - bids_paid;
        shares_defined = !total_pnl.is_zero();
        if (shares_defined) {
            captured_share_paid = bids_paid.to_double() / total_pnl.to_double();
            captured_share_top = top_bids.to_double() / total_pnl.to_double();
        }
    }
};

struct SurplusReport {
    std::array<SurplusRow, 4> per_regime;
    SurplusRow overall;
};

// Net surplus identity per zone and overall: net = pnl - fees - bids, exact
// in fixed point. Paid and top bids convert to USD at the numeraire price of
// the round's bid close. Rows receive positive-PnL trades only; the caller
// applies that filter when assembling them.
inline SurplusReport surplus_decompose(std::span<const PnlRow> pnl_rows,
                                       std::span<const RoundRecord> rounds,
                                       const RegimeSegmentation& seg,
                                       const PriceBook& prices,
                                       const std::string& numeraire_asset) {
    SurplusReport rep;
    for (const PnlRow& row : pnl_rows) {
        const auto ri = static_cast<std::size_t>(regime_of(row.time, seg));
        rep.per_regime[ri].total_pnl += row.pnl;
        rep.per_regime[ri].tx_fees += row.fees;
        ++rep.per_regime[ri].trade_count;
        rep.overall.total_pnl += row.pnl;
        rep.overall.tx_fees += row.fees;
        ++rep.overall.trade_count;
    }
    for (const RoundRecord& r : rounds) {
        if (!r.outcome.has_winner()) continue;
        const auto price = prices.price_at(numeraire_asset, r.bounds.bid_close);
        if (!price)
            throw std::runtime_error("surplus_decompose: no " + numeraire_asset +
                                     " price at round " + std::to_string(r.bounds.round_index));
        const Usd paid = eth_to_usd(*r.outcome.paid, *price);
        const Usd top = eth_to_usd(*r.outcome.top_bid, *price);
        const auto ri = static_cast<std::size_t>(regime_of(r.bounds.start, seg));
        rep.per_regime[ri].bids_paid += paid;
        rep.per_regime[ri].top_bids += top;
        rep.overall.bids_paid += paid;
        rep.overall.top_bids += top;
    }
    for (auto& row : rep.per_regime) row.finalize();
    rep.overall.finalize();
    return rep;
}

} // namespace laneboost
