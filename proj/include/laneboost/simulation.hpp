// simulation.hpp
// The scenario event loop: per round, agents value the lane off realized
// volatility and bid; the auction settles at bid close and hands the next
// round's express control to the winner; opportunity processes generate
// trades that route through the express lane, the resale market or the
// regular lane; the sequencer merges everything into one execution trace.
//
// One run is single-threaded and fully deterministic: every random draw
// comes from a named substream of the root seed, so agents never perturb
// each other's randomness.

#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "laneboost/agents.hpp"
#include "laneboost/analytics.hpp"
#include "laneboost/auction.hpp"
#include "laneboost/config.hpp"
#include "laneboost/market_model.hpp"
#include "laneboost/price_process.hpp"
#include "laneboost/reserve_policy.hpp"
#include "laneboost/resale.hpp"
#include "laneboost/rng.hpp"
#include "laneboost/sequencer.hpp"

namespace laneboost {

struct SimulationResult {
    std::vector<RoundRecord> rounds;
    std::vector<Bid> bids;             // every submitted bid
    std::vector<Trade> trades;         // indexed by TxEvent::trade_ref
    std::vector<TxEvent> trace;        // merged execution order
    std::vector<ReceiptRecord> receipts;
    ResaleLedger resale;
    PriceSeries series;
    std::int64_t vol_fallback_rounds{0};
    std::int64_t express_rejections{0};  // stays 0 in well-formed scenarios
};

namespace sim_detail {

inline std::string padded_tx_id(const std::string& agent, std::int64_t n) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%08lld", static_cast<long long>(n));
    return agent + ":" + buf;
}

struct AgentRuntime {
    const AgentSpec* spec;
    Rng valuation_rng;
    Rng opportunity_rng;
    Rng bidtime_rng;
    std::int64_t tx_counter{0};

    AgentRuntime(const AgentSpec& a, std::uint64_t seed)
        : spec(&a),
          valuation_rng(seed, "agent:" + a.id.id + ":valuation"),
          opportunity_rng(seed, "agent:" + a.id.id + ":opportunities"),
          bidtime_rng(seed, "agent:" + a.id.id + ":bidtime") {}
};

} // namespace sim_detail

inline SimulationResult run_simulation(const ScenarioConfig& cfg) {
    using namespace sim_detail;
    cfg.validate_for_simulation();

    const std::int64_t i0 = cfg.first_round_index();
    const auto first = round_bounds(i0, cfg.schedule);
    const auto last = round_bounds(i0 + cfg.rounds - 1, cfg.schedule);

    SimulationResult out;

    // Price series covering warmup before round 0 through the markout
    // horizon after the final round.
    const TimeMs series_start{((first.start - cfg.price.warmup).ms / kSecond) * kSecond};
    const std::size_t samples = static_cast<std::size_t>(
        (last.end + cfg.trading.markout + 10 * kSecond - series_start) / kSecond + 1);
    out.series = generate_series(cfg.seed, cfg.price.asset, cfg.price.initial, series_start,
                                 samples, cfg.price.vol_steps);
    const VolProvider vol(out.series);
    const auto sigma = sigma_from_provider(vol);

    std::vector<AgentRuntime> agents;
    agents.reserve(cfg.agents.size());
    for (const auto& a : cfg.agents) agents.emplace_back(a, cfg.seed);

    // Reseller demand tracking for the ValueTrackingReseller strategy.
    std::deque<Eth> demand_history;
    Eth demand_estimate = cfg.resale.initial_demand_estimate;

    std::optional<EntityId> controller;  // express authority for the current round
    std::optional<EntityId> next_controller;

    const std::int64_t ticks_per_round = cfg.schedule.round_length / kSecond;
    const std::int64_t windows_per_round =
        (cfg.schedule.round_length + cfg.resale.window_ms - 1) / cfg.resale.window_ms;

    std::vector<TxEvent> all_txs;

    for (std::int64_t k = 0; k < cfg.rounds; ++k) {
        const std::int64_t r = i0 + k;
        const auto rb = round_bounds(r, cfg.schedule);
        const bool reseller_controls =
            controller && cfg.resale.reseller && *controller == *cfg.resale.reseller;
        const ControlState control{controller, reseller_controls};

        // --- control-window trading ---
        std::map<std::int64_t, SubAuctionWindow> resale_windows;
        std::map<std::string, double> pending_theta;  // tx id -> instant edge fraction

        auto build_trade = [&](const TxEvent& tx, double theta) -> std::size_t {
            const DurationMs delay = tx.executed_at - tx.arrival;
            const double keep = std::max(0.0, 1.0 - cfg.trading.edge_decay_per_ms *
                                                        static_cast<double>(delay));
            const double theta_eff = theta * keep;
            const auto fill = out.series.price_at_or_before(tx.executed_at);
            if (!fill) throw std::logic_error("simulation: price series does not cover trade");
            Trade t;
            t.trade_id = tx.tx_id;
            t.time = tx.executed_at;
            t.buy_asset = cfg.price.asset;
            t.x = cfg.trading.trade_size;
            t.sell_asset = "USDT";
            t.y = cfg.trading.trade_size * *fill * (1.0 - theta_eff);
            t.fees = cfg.trading.fee_usd;
            t.lane = tx.lane;
            t.sender = tx.sender;
            t.contract = "sim:" + tx.sender.id;
            t.swap_events = 1;
            out.trades.push_back(std::move(t));
            return out.trades.size() - 1;
        };

        for (auto& agent : agents) {
            const AgentSpec& spec = *agent.spec;
            if (spec.opportunity_rate <= 0.0) continue;
            for (std::int64_t tick = 0; tick < ticks_per_round; ++tick) {
                const TimeMs t = rb.start + tick * kSecond;
                const auto s = vol.vol(t, cfg.trading.vol_window);
                if (!s || *s <= 0.0) continue;
                const double lambda = spec.opportunity_rate * *s / spec.sigma_ref;
                const int arrivals = agent.opportunity_rng.poisson(lambda);
                for (int a = 0; a < arrivals; ++a) {
                    const TimeMs at =
                        t + static_cast<DurationMs>(agent.opportunity_rng.next_below(kSecond));
                    const double theta = std::abs(agent.opportunity_rng.normal()) *
                                         cfg.trading.edge_vol_mult * *s;
                    const Opportunity opp{at, cfg.trading.trade_size * theta};

                    TxEvent tx = route_trade(spec, opp, control);
                    tx.tx_id = padded_tx_id(spec.id.id, agent.tx_counter++);
                    tx.round_index = r;

                    if (tx.via_resale) {
                        const std::int64_t w = (at - rb.start) / cfg.resale.window_ms;
                        auto [it, inserted] = resale_windows.try_emplace(w);
                        if (inserted) {
                            it->second.window_start = rb.start + w * cfg.resale.window_ms;
                            it->second.window_length = cfg.resale.window_ms;
                        }
                        ResaleSubmission sub;
                        sub.tx = tx;
                        sub.declared_payment =
                            Eth::from_double(cfg.resale.payment_frac * opp.edge_eth);
                        sub.channel = spec.resale_channel;
                        it->second.submissions.push_back(std::move(sub));
                        pending_theta[tx.tx_id] = theta;
                        continue;
                    }

                    const bool authorized =
                        tx.lane == Lane::Express && controller && *controller == spec.id;
                    auto exec = assign_execution(tx, cfg.sequencer, authorized);
                    if (!exec) {
                        // Unauthorized express falls back to the regular lane
                        // in the same millisecond.
                        ++out.express_rejections;
                        tx.lane = Lane::Regular;
                        tx.via_resale = false;
                        exec = assign_execution(tx, cfg.sequencer, false);
                    }
                    tx.executed_at = *exec;
                    tx.trade_ref = build_trade(tx, theta);
                    all_txs.push_back(std::move(tx));
                }
            }
        }

        // --- resale sub-auctions, in window order ---
        Eth round_demand;
        if (reseller_controls) {
            for (auto& [w, window] : resale_windows) {
                if (w < 0 || w >= windows_per_round)
                    throw std::logic_error("simulation: resale window out of round");
                auto closed = close_window(window, cfg.resale.latency_ms);
                auto& row = out.resale.row(r, rb.start);
                row.onchain_receipts += closed.onchain_receipts;
                row.subscription_receipts += closed.subscription_receipts;
                round_demand += closed.onchain_receipts + closed.subscription_receipts;
                for (auto& rec : closed.receipts) out.receipts.push_back(rec);
                for (auto& tx : closed.batch) {
                    tx.trade_ref = build_trade(tx, pending_theta.at(tx.tx_id));
                    all_txs.push_back(std::move(tx));
                }
            }
            // Flat subscription fees accrue once per controlled round per
            // subscribed agent; they are ledger revenue, not per-tx receipts.
            for (const auto& a : cfg.agents) {
                if (a.subscribes_to_resale && a.resale_channel == PaymentChannel::Subscription &&
                    !cfg.resale.subscription_flat_fee.is_zero()) {
                    out.resale.row(r, rb.start).subscription_receipts +=
                        cfg.resale.subscription_flat_fee;
                    round_demand += cfg.resale.subscription_flat_fee;
                }
            }
            demand_history.push_back(round_demand);
            while (static_cast<int>(demand_history.size()) > cfg.resale.demand_window_rounds)
                demand_history.pop_front();
            Eth sum;
            for (const auto& d : demand_history) sum += d;
            demand_estimate = demand_history.empty()
                                  ? cfg.resale.initial_demand_estimate
                                  : sum.scaled(1.0 / static_cast<double>(demand_history.size()));
        } else if (!resale_windows.empty()) {
            throw std::logic_error("simulation: resale submissions without reseller control");
        }

        // --- the auction held this round, selling next round's control ---
        const ReserveQuote quote = cfg.reserve ? reserve_at(*cfg.reserve, rb, sigma)
                                               : ReserveQuote{Eth::parse("0.001"), false};
        if (quote.vol_fallback) ++out.vol_fallback_rounds;

        std::vector<Bid> round_bids;
        const auto sf = vol.vol(rb.bid_close, cfg.trading.vol_window);
        for (auto& agent : agents) {
            const auto valuation =
                value_round(*agent.spec, r, sf.value_or(0.0), agent.valuation_rng);
            BidContext ctx;
            ctx.round = rb;
            ctx.reserve = quote.reserve;
            ctx.resale_demand_estimate = demand_estimate;
            ctx.submit_at = rb.start + static_cast<DurationMs>(agent.bidtime_rng.next_below(
                                static_cast<std::uint64_t>(cfg.schedule.bid_close_offset)));
            if (auto bid = bid_decision(*agent.spec, valuation, ctx)) {
                round_bids.push_back(*bid);
                out.bids.push_back(*bid);
            }
        }
        AuctionOutcome outcome = settle(round_bids, quote.reserve, rb);
        next_controller = outcome.winner;
        if (outcome.has_winner() && cfg.resale.reseller &&
            *outcome.winner == *cfg.resale.reseller) {
            // The winner's payment buys control of the NEXT round; book it
            // against that round so receipts and bids align.
            const auto nb = round_bounds(r + 1, cfg.schedule);
            out.resale.row(r + 1, nb.start).bids_paid_primary += *outcome.paid;
        }
        out.rounds.push_back(RoundRecord{rb, quote.reserve, std::move(outcome)});

        controller = next_controller;
    }

    out.trace = merged_order(all_txs);
    return out;
}

} // namespace laneboost
