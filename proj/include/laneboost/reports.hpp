// reports.hpp
// Turns a dataset into the report bundle: per-table CSVs (or one JSON), the
// trace files a simulation emits, and the run manifest. Everything written
// here is deterministic for a fixed (seed, config, inputs); wall-clock
// timing goes to a separate timing.json that is excluded from the
// determinism contract.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "laneboost/analytics.hpp"
#include "laneboost/csv.hpp"
#include "laneboost/dataset.hpp"
#include "laneboost/sha256.hpp"
#include "laneboost/stats.hpp"

namespace laneboost {

constexpr const char* kToolVersion = "laneboost 0.1.0";

// Lossless double formatting: shortest of %.12g / %.17g that round-trips.
inline std::string format_double_exact(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    if (std::stod(buf) == v) return buf;
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct VolCorrRow {
    std::string metric;
    Regime regime{Regime::PreKairos};
    Correlation corr;
};

struct PnlSummaryRow {
    std::string sender;
    std::string regime;  // zone name or "Total"
    Lane lane{Lane::Regular};
    std::int64_t trades{0};
    Usd total;
    double avg{0.0};
};

struct ResaleGapRow {
    std::string regime;  // zone name or "Overall"
    Eth bids_paid;
    Eth onchain;
    Eth subscription;
    Eth gap;
};

struct Coverage {
    std::int64_t rounds{0};
    std::int64_t bids{0};
    std::int64_t trades_total{0};
    std::int64_t trades_malformed{0};
    std::int64_t trades_classified{0};
    std::int64_t trades_missing_price{0};
    std::int64_t trades_positive_pnl{0};
    std::int64_t before_segmentation{0};  // records before the first boundary
    std::int64_t express_rejections{0};
    std::int64_t vol_fallback_rounds{0};
};

struct GapDailyRow {
    std::int64_t utc_day{0};
    std::int64_t settled_rounds{0};
    double median_gap{0.0};
};

struct AnalyticsBundle {
    GapSummary gap_overall;
    std::array<GapSummary, 4> gap_per_regime;
    std::vector<GapDailyRow> gap_daily;
    WinShareTable wins;
    CombinationTable combos;
    std::vector<BidDistributionRow> bid_dist;
    std::vector<VolCorrRow> vol_corr;
    std::vector<PnlSummaryRow> pnl_summary;
    SurplusReport surplus;
    bool has_reseller{false};
    HourlyLossProfile reseller_loss;
    std::vector<ResaleGapRow> resale_gap;
    Coverage coverage;
};

namespace report_detail {

inline std::int64_t hour_index(TimeMs t) { return t.ms / kHour; }

inline std::optional<Regime> regime_or_none(TimeMs t, const RegimeSegmentation& seg) {
    if (t < seg.start()) return std::nullopt;
    return regime_of(t, seg);
}

} // namespace report_detail

inline AnalyticsBundle compute_bundle(const Dataset& ds) {
    using report_detail::hour_index;
    using report_detail::regime_or_none;

    AnalyticsBundle b;
    const auto& seg = ds.seg;
    seg.validate();

    // Records before the segmentation start cannot be zoned; drop and count.
    std::vector<RoundRecord> rounds;
    for (const auto& r : ds.rounds) {
        if (r.bounds.start < seg.start()) {
            ++b.coverage.before_segmentation;
            continue;
        }
        rounds.push_back(r);
    }
    std::vector<Bid> bids;
    for (const auto& bid : ds.bids) {
        if (bid.submitted_at < seg.start()) {
            ++b.coverage.before_segmentation;
            continue;
        }
        bids.push_back(bid);
    }
    b.coverage.rounds = static_cast<std::int64_t>(rounds.size());
    b.coverage.bids = static_cast<std::int64_t>(bids.size());

    // --- classification and markouts ---
    std::vector<PnlRow> pnl_rows;
    std::map<std::string, std::map<std::int64_t, double>> hourly_pnl_tb, hourly_pnl_reg;
    b.coverage.trades_total = static_cast<std::int64_t>(ds.trades.size());
    for (const auto& t : ds.trades) {
        if (t.time < seg.start()) {
            ++b.coverage.before_segmentation;
            continue;
        }
        bool is_cexdex = false;
        try {
            is_cexdex = classify_cex_dex(t, ds.analytics.classifier);
        } catch (const std::invalid_argument&) {
            ++b.coverage.trades_malformed;
            continue;
        }
        if (!is_cexdex) continue;
        ++b.coverage.trades_classified;
        double pnl = 0.0;
        try {
            pnl = markout_pnl(t, ds.prices, ds.trading.markout);
        } catch (const std::runtime_error&) {
            ++b.coverage.trades_missing_price;
            continue;
        }
        if (!(pnl > 0.0)) continue;  // positive-PnL filter for all aggregates
        ++b.coverage.trades_positive_pnl;
        PnlRow row;
        row.time = t.time;
        row.sender = t.sender.id;
        row.lane = t.lane;
        row.pnl = Usd::from_double(pnl);
        row.fees = t.fees;
        pnl_rows.push_back(row);
        auto& bucket = t.lane == Lane::Express ? hourly_pnl_tb[t.sender.id]
                                               : hourly_pnl_reg[t.sender.id];
        bucket[hour_index(t.time)] += pnl;
    }

    // --- bid gap ---
    b.gap_overall = gap_summary(rounds);
    for (std::size_t ri = 0; ri < 4; ++ri) {
        std::vector<RoundRecord> zone;
        for (const auto& r : rounds)
            if (regime_of(r.bounds.start, seg) == static_cast<Regime>(ri)) zone.push_back(r);
        b.gap_per_regime[ri] = gap_summary(zone);
    }
    {
        std::map<std::int64_t, std::vector<double>> by_day;
        for (const auto& r : rounds)
            if (r.outcome.has_winner())
                by_day[utc_day_index(r.bounds.start)].push_back(relative_bid_gap(r.outcome));
        for (auto& [day, gaps] : by_day) {
            GapDailyRow row;
            row.utc_day = day;
            row.settled_rounds = static_cast<std::int64_t>(gaps.size());
            row.median_gap = median_of(std::move(gaps));
            b.gap_daily.push_back(row);
        }
    }

    // --- shares and distributions ---
    b.wins = win_shares(rounds, seg);
    {
        std::vector<RoundRecord> with_bids;
        for (const auto& r : rounds)
            if (r.has_bids()) with_bids.push_back(r);
        std::vector<std::string> tracked = ds.analytics.tracked;
        if (tracked.empty())
            for (const auto& [who, cell] : b.wins.overall) tracked.push_back(who);
        if (!tracked.empty()) b.combos = bidder_combinations(with_bids, seg, tracked);
    }
    b.bid_dist = bid_distribution(bids, seg);

    // --- hourly correlations ---
    const PriceSeries* numeraire = ds.prices.series(ds.analytics.numeraire);
    if (numeraire) {
        const VolProvider vol(*numeraire);
        struct HourMetric {
            std::vector<double> paid, top, gap;
        };
        std::map<std::int64_t, HourMetric> hours;
        for (const auto& r : rounds) {
            if (!r.outcome.has_winner()) continue;
            auto& h = hours[hour_index(r.bounds.start)];
            h.paid.push_back(r.outcome.paid->to_double());
            h.top.push_back(r.outcome.top_bid->to_double());
            h.gap.push_back(r.outcome.top_bid->to_double() - r.outcome.paid->to_double());
        }
        auto mean = [](const std::vector<double>& v) {
            double m = 0;
            for (double x : v) m += x;
            return m / static_cast<double>(v.size());
        };

        auto emit_metric = [&](const std::string& name, auto value_of,
                               const auto& hour_keys) {
            // Collect per zone.
            std::array<std::vector<double>, 4> xs, ys;
            for (const auto& key : hour_keys) {
                const TimeMs hour_start{key * kHour};
                const auto reg = regime_or_none(hour_start, seg);
                if (!reg) continue;
                const auto sigma = vol.vol(TimeMs{(key + 1) * kHour}, kHour);
                if (!sigma) continue;
                const auto v = value_of(key);
                if (!v) continue;
                xs[static_cast<std::size_t>(*reg)].push_back(*sigma);
                ys[static_cast<std::size_t>(*reg)].push_back(*v);
            }
            for (std::size_t ri = 0; ri < 4; ++ri) {
                if (xs[ri].size() < 3) continue;
                try {
                    VolCorrRow row;
                    row.metric = name;
                    row.regime = static_cast<Regime>(ri);
                    row.corr = pearson_with_p(xs[ri], ys[ri]);
                    b.vol_corr.push_back(std::move(row));
                } catch (const std::invalid_argument&) {
                    // degenerate variance: leave the row out
                }
            }
        };

        std::vector<std::int64_t> auction_hours;
        for (const auto& [h, m] : hours) auction_hours.push_back(h);
        emit_metric("paid_bid", [&](std::int64_t h) -> std::optional<double> {
            return mean(hours.at(h).paid);
        }, auction_hours);
        emit_metric("top_bid", [&](std::int64_t h) -> std::optional<double> {
            return mean(hours.at(h).top);
        }, auction_hours);
        emit_metric("abs_gap", [&](std::int64_t h) -> std::optional<double> {
            return mean(hours.at(h).gap);
        }, auction_hours);

        for (const auto& [sender, buckets] : hourly_pnl_tb) {
            std::vector<std::int64_t> hs;
            for (const auto& [h, v] : buckets) hs.push_back(h);
            emit_metric("tb_pnl:" + sender, [&, b2 = &buckets](std::int64_t h) {
                return std::optional<double>{b2->at(h)};
            }, hs);
        }
        for (const auto& [sender, buckets] : hourly_pnl_reg) {
            std::vector<std::int64_t> hs;
            for (const auto& [h, v] : buckets) hs.push_back(h);
            emit_metric("regular_pnl:" + sender, [&, b2 = &buckets](std::int64_t h) {
                return std::optional<double>{b2->at(h)};
            }, hs);
        }
        // Totals across lanes per sender.
        std::map<std::string, std::map<std::int64_t, double>> hourly_total;
        for (const auto& [sender, buckets] : hourly_pnl_tb)
            for (const auto& [h, v] : buckets) hourly_total[sender][h] += v;
        for (const auto& [sender, buckets] : hourly_pnl_reg)
            for (const auto& [h, v] : buckets) hourly_total[sender][h] += v;
        for (const auto& [sender, buckets] : hourly_total) {
            std::vector<std::int64_t> hs;
            for (const auto& [h, v] : buckets) hs.push_back(h);
            emit_metric("total_pnl:" + sender, [&, b2 = &buckets](std::int64_t h) {
                return std::optional<double>{b2->at(h)};
            }, hs);
        }
    }

    // --- PnL summary table ---
    {
        struct Cell {
            std::int64_t n{0};
            Usd total;
        };
        std::map<std::string, std::map<std::string, std::map<int, Cell>>> table;
        for (const auto& row : pnl_rows) {
            const auto reg = regime_of(row.time, seg);
            auto& cell = table[row.sender][regime_name(reg)][row.lane == Lane::Express ? 0 : 1];
            ++cell.n;
            cell.total += row.pnl;
            auto& tot = table[row.sender]["Total"][row.lane == Lane::Express ? 0 : 1];
            ++tot.n;
            tot.total += row.pnl;
        }
        for (const auto& [sender, zones] : table) {
            for (const auto& [zone, lanes] : zones) {
                for (const auto& [lane, cell] : lanes) {
                    PnlSummaryRow row;
                    row.sender = sender;
                    row.regime = zone;
                    row.lane = lane == 0 ? Lane::Express : Lane::Regular;
                    row.trades = cell.n;
                    row.total = cell.total;
                    row.avg = cell.n == 0 ? 0.0
                                          : cell.total.to_double() / static_cast<double>(cell.n);
                    b.pnl_summary.push_back(std::move(row));
                }
            }
        }
    }

    // --- surplus ---
    b.surplus = surplus_decompose(pnl_rows, rounds, seg, ds.prices, ds.analytics.numeraire);

    // --- reseller hour-of-day profile ---
    if (ds.analytics.reseller) {
        b.has_reseller = true;
        b.reseller_loss = hourly_loss_profile(rounds, *ds.analytics.reseller,
                                              ds.analytics.session);
    }

    // --- resale revenue gap ---
    {
        const auto& bounds = seg.boundaries;
        for (std::size_t i = 0; i < bounds.size(); ++i) {
            const TimeMs from = bounds[i].first;
            const TimeMs to = i + 1 < bounds.size()
                                  ? bounds[i + 1].first
                                  : TimeMs{std::numeric_limits<std::int64_t>::max()};
            const auto g = revenue_gap(ds.resale, from, to);
            Eth sub;
            for (const auto& [idx, row] : ds.resale.rounds)
                if (row.round_start >= from && row.round_start < to)
                    sub += row.subscription_receipts;
            b.resale_gap.push_back(
                {regime_name(bounds[i].second), g.bids_paid, g.observable, sub, g.gap});
        }
        const auto g = revenue_gap(ds.resale, seg.start(),
                                   TimeMs{std::numeric_limits<std::int64_t>::max()});
        Eth sub;
        for (const auto& [idx, row] : ds.resale.rounds)
            if (row.round_start >= seg.start()) sub += row.subscription_receipts;
        b.resale_gap.push_back({"Overall", g.bids_paid, g.observable, sub, g.gap});
    }

    return b;
}

// ---------------------------------------------------------------------------
// Writers
// ---------------------------------------------------------------------------

namespace report_detail {

inline std::string opt_metric(std::optional<double> v) {
    return v ? format_double(*v) : "NA";
}

inline std::string regime_or_overall(int i) {
    return i < 4 ? regime_name(static_cast<Regime>(i)) : "Overall";
}

} // namespace report_detail

inline void write_analytics_csvs(const std::filesystem::path& dir, const AnalyticsBundle& b) {
    using report_detail::opt_metric;
    namespace fs = std::filesystem;

    {
        CsvWriter w((dir / "rounds_won.csv").string(),
                    {"entity", "regime", "wins", "rounds", "share"});
        for (const auto& [who, cells] : b.wins.per_regime) {
            for (std::size_t i = 0; i < 4; ++i) {
                if (b.wins.rounds_per_regime[i] == 0) continue;
                w.write_row({who, regime_name(static_cast<Regime>(i)),
                             std::to_string(cells[i].wins), std::to_string(cells[i].rounds),
                             format_double(cells[i].share())});
            }
            const auto& cell = b.wins.overall.at(who);
            w.write_row({who, "Overall", std::to_string(cell.wins), std::to_string(cell.rounds),
                         format_double(cell.share())});
        }
    }
    {
        CsvWriter w((dir / "bidder_combinations.csv").string(),
                    {"combination", "regime", "rounds", "total_rounds", "share"});
        for (const auto& [label, counts] : b.combos.rounds) {
            for (std::size_t i = 0; i < 4; ++i) {
                if (b.combos.total_per_regime[i] == 0) continue;
                const double share = static_cast<double>(counts[i]) /
                                     static_cast<double>(b.combos.total_per_regime[i]);
                w.write_row({label, regime_name(static_cast<Regime>(i)),
                             std::to_string(counts[i]),
                             std::to_string(b.combos.total_per_regime[i]),
                             format_double(share)});
            }
            const auto total = b.combos.rounds_overall.at(label);
            w.write_row({label, "Overall", std::to_string(total), std::to_string(b.combos.total),
                         b.combos.total ? format_double(static_cast<double>(total) /
                                                        static_cast<double>(b.combos.total))
                                        : "NA"});
        }
    }
    {
        CsvWriter w((dir / "bid_distribution.csv").string(),
                    {"bidder", "regime", "n", "p25", "median", "p75", "p99", "mean"});
        for (const auto& row : b.bid_dist)
            w.write_row({row.bidder, regime_name(row.regime), std::to_string(row.n),
                         format_double(row.p25), format_double(row.median),
                         format_double(row.p75), format_double(row.p99),
                         format_double(row.mean)});
    }
    {
        CsvWriter w((dir / "vol_corr.csv").string(), {"metric", "regime", "r", "p", "n"});
        for (const auto& row : b.vol_corr)
            w.write_row({row.metric, regime_name(row.regime), format_double(row.corr.r),
                         format_double(row.corr.p), std::to_string(row.corr.n)});
    }
    {
        CsvWriter w((dir / "pnl_summary.csv").string(),
                    {"sender", "regime", "lane", "trades", "total_pnl_usd", "avg_pnl_usd"});
        for (const auto& row : b.pnl_summary)
            w.write_row({row.sender, row.regime, lane_name(row.lane), std::to_string(row.trades),
                         row.total.str(), format_double(row.avg)});
    }
    {
        CsvWriter w((dir / "surplus.csv").string(),
                    {"regime", "trades", "total_pnl_usd", "tx_fees_usd", "bids_paid_usd",
                     "top_bids_usd", "net_surplus_usd", "captured_share_paid",
                     "captured_share_top"});
        auto emit = [&](const std::string& name, const SurplusRow& row) {
            w.write_row({name, std::to_string(row.trade_count), row.total_pnl.str(),
                         row.tx_fees.str(), row.bids_paid.str(), row.top_bids.str(),
                         row.net_surplus.str(),
                         row.shares_defined ? format_double(row.captured_share_paid) : "NA",
                         row.shares_defined ? format_double(row.captured_share_top) : "NA"});
        };
        for (std::size_t i = 0; i < 4; ++i)
            emit(regime_name(static_cast<Regime>(i)), b.surplus.per_regime[i]);
        emit("Overall", b.surplus.overall);
    }
    {
        CsvWriter w((dir / "gap_summary.csv").string(),
                    {"regime", "settled_rounds", "median_gap", "median_daily_gap", "mean_gap"});
        for (std::size_t i = 0; i < 4; ++i) {
            const auto& g = b.gap_per_regime[i];
            w.write_row({regime_name(static_cast<Regime>(i)), std::to_string(g.settled_rounds),
                         opt_metric(g.median_gap), opt_metric(g.median_daily_gap),
                         opt_metric(g.mean_gap)});
        }
        const auto& g = b.gap_overall;
        w.write_row({"Overall", std::to_string(g.settled_rounds), opt_metric(g.median_gap),
                     opt_metric(g.median_daily_gap), opt_metric(g.mean_gap)});
    }
    {
        CsvWriter w((dir / "gap_daily.csv").string(), {"utc_day", "settled_rounds", "median_gap"});
        for (const auto& row : b.gap_daily)
            w.write_row({std::to_string(row.utc_day), std::to_string(row.settled_rounds),
                         format_double(row.median_gap)});
    }
    if (b.has_reseller) {
        CsvWriter w((dir / "reseller_hourly.csv").string(),
                    {"bucket", "participated", "lost", "loss_rate", "median_bid_win",
                     "median_bid_loss"});
        auto emit = [&](const std::string& bucket, const HourlyLossCell& cell) {
            w.write_row({bucket, std::to_string(cell.participated), std::to_string(cell.lost),
                         cell.participated ? format_double(cell.loss_rate()) : "NA",
                         cell.bids_win.empty() ? "NA" : format_double(median_of(cell.bids_win)),
                         cell.bids_loss.empty() ? "NA" : format_double(median_of(cell.bids_loss))});
        };
        for (int h = 0; h < 24; ++h) {
            char buf[4];
            std::snprintf(buf, sizeof buf, "%02d", h);
            emit(buf, b.reseller_loss.by_hour[static_cast<std::size_t>(h)]);
        }
        emit("in_session", b.reseller_loss.in_session);
        emit("out_session", b.reseller_loss.out_session);
    }
    {
        CsvWriter w((dir / "resale_gap.csv").string(),
                    {"regime", "bids_paid_eth", "onchain_eth", "subscription_eth", "gap_eth"});
        for (const auto& row : b.resale_gap)
            w.write_row({row.regime, row.bids_paid.str(), row.onchain.str(),
                         row.subscription.str(), row.gap.str()});
    }
}

inline nlohmann::json bundle_to_json(const AnalyticsBundle& b) {
    using nlohmann::json;
    json j;
    auto gap_json = [](const GapSummary& g) {
        json o;
        o["settled_rounds"] = g.settled_rounds;
        if (g.median_gap) o["median_gap"] = *g.median_gap;
        if (g.median_daily_gap) o["median_daily_gap"] = *g.median_daily_gap;
        if (g.mean_gap) o["mean_gap"] = *g.mean_gap;
        return o;
    };
    j["gap"]["overall"] = gap_json(b.gap_overall);
    for (std::size_t i = 0; i < 4; ++i)
        j["gap"][regime_name(static_cast<Regime>(i))] = gap_json(b.gap_per_regime[i]);
    for (const auto& [who, cell] : b.wins.overall) {
        j["rounds_won"][who]["wins"] = cell.wins;
        j["rounds_won"][who]["share"] = cell.share();
    }
    for (const auto& [label, n] : b.combos.rounds_overall) j["bidder_combinations"][label] = n;
    for (const auto& row : b.vol_corr) {
        json o;
        o["metric"] = row.metric;
        o["regime"] = regime_name(row.regime);
        o["r"] = row.corr.r;
        o["p"] = row.corr.p;
        o["n"] = row.corr.n;
        j["vol_corr"].push_back(o);
    }
    auto surplus_json = [](const SurplusRow& row) {
        json o;
        o["trades"] = row.trade_count;
        o["total_pnl_usd"] = row.total_pnl.str();
        o["tx_fees_usd"] = row.tx_fees.str();
        o["bids_paid_usd"] = row.bids_paid.str();
        o["net_surplus_usd"] = row.net_surplus.str();
        if (row.shares_defined) {
            o["captured_share_paid"] = row.captured_share_paid;
            o["captured_share_top"] = row.captured_share_top;
        }
        return o;
    };
    j["surplus"]["overall"] = surplus_json(b.surplus.overall);
    for (std::size_t i = 0; i < 4; ++i)
        j["surplus"][regime_name(static_cast<Regime>(i))] = surplus_json(b.surplus.per_regime[i]);
    for (const auto& row : b.resale_gap) {
        j["resale_gap"][row.regime] = {{"bids_paid_eth", row.bids_paid.str()},
                                       {"onchain_eth", row.onchain.str()},
                                       {"gap_eth", row.gap.str()}};
    }
    j["coverage"] = {{"rounds", b.coverage.rounds},
                     {"bids", b.coverage.bids},
                     {"trades_total", b.coverage.trades_total},
                     {"trades_malformed", b.coverage.trades_malformed},
                     {"trades_classified", b.coverage.trades_classified},
                     {"trades_missing_price", b.coverage.trades_missing_price},
                     {"trades_positive_pnl", b.coverage.trades_positive_pnl},
                     {"before_segmentation", b.coverage.before_segmentation}};
    return j;
}

// Trace files in the frozen schemas, emitted by simulate so every run can be
// replayed through the same ingestion path as real data.
inline void write_trace_csvs(const std::filesystem::path& dir, const Dataset& ds,
                             const std::vector<TxEvent>& trace,
                             const std::vector<ReceiptRecord>& receipts) {
    {
        CsvWriter w((dir / "bids.csv").string(), kBidsSchema);
        for (const auto& b : ds.bids) {
            const auto rb = round_bounds(b.round_index, ds.schedule);
            w.write_row({std::to_string(rb.start.ms), b.bidder.id, b.amount.str(),
                         std::to_string(b.submitted_at.ms)});
        }
    }
    {
        CsvWriter w((dir / "auction_outcomes.csv").string(), kOutcomesSchema);
        for (const auto& r : ds.rounds) {
            w.write_row({std::to_string(r.bounds.round_index), std::to_string(r.bounds.start.ms),
                         std::to_string(r.bounds.bid_close.ms), std::to_string(r.bounds.end.ms),
                         r.reserve.str(), r.outcome.winner ? r.outcome.winner->id : "",
                         r.outcome.top_bid ? r.outcome.top_bid->str() : "",
                         r.outcome.paid ? r.outcome.paid->str() : "",
                         std::to_string(r.outcome.admissible_bid_count)});
        }
    }
    {
        CsvWriter w((dir / "rounds.csv").string(),
                    {"round_start_utc_ms", "top_bid_eth", "second_bid_eth"});
        for (const auto& r : ds.rounds) {
            if (r.outcome.admissible.empty()) continue;
            const Eth top = r.outcome.admissible[0].amount;
            const Eth second =
                r.outcome.admissible.size() > 1 ? r.outcome.admissible[1].amount : Eth{};
            w.write_row({std::to_string(r.bounds.start.ms), top.str(), second.str()});
        }
    }
    {
        CsvWriter w((dir / "execution_trace.csv").string(), kTraceSchema);
        for (const auto& t : trace)
            w.write_row({t.tx_id, t.sender.id, lane_name(t.lane), t.via_resale ? "1" : "0",
                         std::to_string(t.arrival.ms), std::to_string(t.executed_at.ms),
                         std::to_string(t.round_index)});
    }
    {
        CsvWriter w((dir / "receipts.csv").string(), kReceiptsSchema);
        for (const auto& r : receipts)
            w.write_row({std::to_string(r.window_start.ms), r.tx_id, channel_name(r.channel),
                         r.payment.str()});
    }
    {
        CsvWriter w((dir / "payments.csv").string(), kPaymentsSchema);
        for (const auto& p : ds.payments)
            w.write_row({p.tx_hash, std::to_string(p.time.ms), p.amount.str()});
    }
    {
        CsvWriter w((dir / "trades.csv").string(), kTradesSchema);
        for (const auto& t : ds.trades)
            w.write_row({t.trade_id, std::to_string(t.time.ms), t.buy_asset,
                         format_double_exact(t.x), t.sell_asset, format_double_exact(t.y),
                         t.fees.str(), lane_name(t.lane), t.sender.id, t.contract,
                         std::to_string(t.swap_events)});
    }
    {
        CsvWriter w((dir / "prices.csv").string(), kPricesSchema);
        for (const auto& [asset, series] : ds.prices.all())
            for (std::size_t i = 0; i < series.times.size(); ++i)
                w.write_row({std::to_string(series.times[i].ms), asset,
                             format_double_exact(series.mids[i])});
    }
}

} // namespace laneboost
