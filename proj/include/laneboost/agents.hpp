// agents.hpp
// Searcher and reseller behavior. Per-round valuations scale with sigma^2
// (consistent with the volatility-indexed reserve rule), bidding strategies
// instantiate the competitive and resale regimes, and lane selection follows
// who controls the express lane.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "laneboost/amount.hpp"
#include "laneboost/auction.hpp"
#include "laneboost/market_model.hpp"
#include "laneboost/resale.hpp"
#include "laneboost/rng.hpp"
#include "laneboost/sequencer.hpp"

namespace laneboost {

enum class AgentRole { Searcher, Reseller };

enum class StrategyKind {
    Competitive,           // bid shade * value when it clears the reserve
    ResaleUser,            // source the lane via the reseller; optional probe bid
    FixedBidReseller,      // constant bid when it clears the reserve
    ValueTrackingReseller, // bid (1 + markup) * estimated resale demand
};

inline const char* strategy_name(StrategyKind s) {
    switch (s) {
        case StrategyKind::Competitive: return "Competitive";
        case StrategyKind::ResaleUser: return "ResaleUser";
        case StrategyKind::FixedBidReseller: return "FixedBidReseller";
        case StrategyKind::ValueTrackingReseller: return "ValueTrackingReseller";
    }
    throw std::logic_error("strategy_name: bad strategy");
}

inline StrategyKind strategy_from_name(const std::string& s) {
    if (s == "Competitive") return StrategyKind::Competitive;
    if (s == "ResaleUser") return StrategyKind::ResaleUser;
    if (s == "FixedBidReseller") return StrategyKind::FixedBidReseller;
    if (s == "ValueTrackingReseller") return StrategyKind::ValueTrackingReseller;
    throw std::invalid_argument("unknown strategy: " + s);
}

struct AgentSpec {
    EntityId id;
    AgentRole role{AgentRole::Searcher};
    StrategyKind strategy{StrategyKind::Competitive};

    // Valuation: v = value_coeff * sigma^2, in ETH, plus zero-mean relative
    // noise with std dev noise_dispersion (seeded per agent).
    double value_coeff{0.0};
    double noise_dispersion{0.0};
    double shade{1.0};  // bid fraction for Competitive, in [0,1]

    Eth probe_bid;      // ResaleUser: token bid near the reserve; zero = none
    Eth fixed_bid;      // FixedBidReseller
    double markup{0.0}; // ValueTrackingReseller

    // Opportunity process: per-second intensity = opportunity_rate * sigma / sigma_ref.
    double opportunity_rate{0.0};
    double sigma_ref{2e-4};

    bool subscribes_to_resale{false};
    PaymentChannel resale_channel{PaymentChannel::Subscription};

    void validate() const {
        if (shade < 0.0 || shade > 1.0)
            throw std::invalid_argument("AgentSpec " + id.id + ": shade outside [0,1]");
        if (value_coeff < 0.0)
            throw std::invalid_argument("AgentSpec " + id.id + ": negative value_coeff");
        if (noise_dispersion < 0.0)
            throw std::invalid_argument("AgentSpec " + id.id + ": negative noise_dispersion");
        if (opportunity_rate < 0.0)
            throw std::invalid_argument("AgentSpec " + id.id + ": negative opportunity_rate");
        if (!(sigma_ref > 0.0))
            throw std::invalid_argument("AgentSpec " + id.id + ": sigma_ref must be positive");
        if (strategy == StrategyKind::FixedBidReseller && !(fixed_bid > Eth{}))
            throw std::invalid_argument("AgentSpec " + id.id + ": FixedBidReseller needs a positive bid");
        if (strategy == StrategyKind::ResaleUser && probe_bid.is_negative())
            throw std::invalid_argument("AgentSpec " + id.id + ": negative probe bid");
    }
};

struct RoundValuation {
    std::int64_t round_index{0};
    EntityId agent;
    Eth v;  // expected edge from controlling the lane, >= 0
};

// v = value_coeff * sigma^2 * (1 + eps), eps ~ N(0, noise_dispersion),
// clamped at zero. sigma_forecast is the realized vol over the window ending
// at the round's bid close.
inline RoundValuation value_round(const AgentSpec& agent, std::int64_t round_index,
                                  double sigma_forecast, Rng& noise) {
    agent.validate();
    if (sigma_forecast < 0.0)
        throw std::invalid_argument("value_round: negative sigma forecast");
    double v = agent.value_coeff * sigma_forecast * sigma_forecast;
    if (agent.noise_dispersion > 0.0)
        v *= 1.0 + agent.noise_dispersion * noise.normal();
    v = std::max(v, 0.0);
    return {round_index, agent.id, Eth::from_double(v)};
}

struct BidContext {
    RoundBounds round;
    Eth reserve;
    // ValueTrackingReseller: current estimate of aggregate per-round resale
    // demand (trailing receipts).
    Eth resale_demand_estimate;
    TimeMs submit_at;  // inside [round.start, round.bid_close)
};

inline std::optional<Bid> bid_decision(const AgentSpec& agent, const RoundValuation& valuation,
                                       const BidContext& ctx) {
    agent.validate();
    if (ctx.submit_at < ctx.round.start || ctx.submit_at >= ctx.round.bid_close)
        throw std::invalid_argument("bid_decision: submit time outside bidding window");

    Eth amount;
    switch (agent.strategy) {
        case StrategyKind::Competitive:
            amount = valuation.v.scaled(agent.shade);
            if (amount < ctx.reserve) return std::nullopt;
            break;
        case StrategyKind::ResaleUser:
            if (agent.probe_bid.is_zero()) return std::nullopt;
            amount = agent.probe_bid;
            break;
        case StrategyKind::FixedBidReseller:
            if (agent.fixed_bid < ctx.reserve) return std::nullopt;
            amount = agent.fixed_bid;
            break;
        case StrategyKind::ValueTrackingReseller:
            amount = ctx.resale_demand_estimate.scaled(1.0 + agent.markup);
            if (amount < ctx.reserve) return std::nullopt;
            break;
    }
    if (!(amount > Eth{})) return std::nullopt;
    return Bid{agent.id, amount, ctx.submit_at, ctx.round.round_index};
}

// An arbitrage opportunity sighted by a searcher at a moment in time.
struct Opportunity {
    TimeMs at;
    double edge_eth{0.0};  // expected edge if captured instantly, in ETH
};

// Who holds express authority for the control window covering a round.
struct ControlState {
    std::optional<EntityId> controller;
    bool controller_is_reseller{false};
};

// Lane selection for a trade triggered by an opportunity. The declared
// resale payment is a configured fraction of the opportunity's edge.
inline TxEvent route_trade(const AgentSpec& agent, const Opportunity& opp,
                           const ControlState& control) {
    TxEvent tx;
    tx.sender = agent.id;
    tx.arrival = opp.at;
    if (control.controller && *control.controller == agent.id) {
        tx.lane = Lane::Express;
        tx.via_resale = false;
    } else if (control.controller && control.controller_is_reseller &&
               agent.subscribes_to_resale) {
        tx.lane = Lane::Express;
        tx.via_resale = true;
    } else {
        tx.lane = Lane::Regular;
        tx.via_resale = false;
    }
    return tx;
}

} // namespace laneboost
