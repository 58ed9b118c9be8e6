// auction.hpp
// Sealed-bid second-price auction with a reserve price, settled once per
// round at bid close. Only a bidder's latest admissible bid counts; ties on
// amount break by earlier submission time, then lexicographic bidder id, so
// settlement is fully deterministic and replayable.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "laneboost/amount.hpp"
#include "laneboost/market_model.hpp"
#include "laneboost/time.hpp"

namespace laneboost {

struct Bid {
    EntityId bidder;
    Eth amount;
    TimeMs submitted_at;
    std::int64_t round_index{0};
};

// Per-bidder latest admissible bid, as considered at settlement.
struct AdmissibleBid {
    EntityId bidder;
    Eth amount;
    TimeMs submitted_at;
};

struct AuctionOutcome {
    std::int64_t round_index{0};
    std::optional<EntityId> winner;
    std::optional<Eth> top_bid;
    std::optional<Eth> paid;
    Eth reserve;
    int admissible_bid_count{0};
    // Latest admissible bid per bidder, in settlement order (amount desc,
    // time asc, id asc). Kept for the participation/bid-level analytics.
    std::vector<AdmissibleBid> admissible;

    bool has_winner() const { return winner.has_value(); }
};

inline AuctionOutcome settle(std::span<const Bid> bids, Eth reserve, const RoundBounds& round) {
    if (!(reserve > Eth{}))
        throw std::invalid_argument("settle: reserve must be positive");
    for (const Bid& b : bids) {
        if (b.round_index != round.round_index)
            throw std::invalid_argument("settle: bid carries a different round index");
        if (!(b.amount > Eth{}))
            throw std::invalid_argument("settle: bid amount must be positive");
    }

    AuctionOutcome out;
    out.round_index = round.round_index;
    out.reserve = reserve;

    // Latest admissible bid per bidder. Later submission supersedes; an exact
    // timestamp duplicate from the same bidder resolves to the larger amount
    // so the result does not depend on input order.
    std::vector<AdmissibleBid> latest;
    for (const Bid& b : bids) {
        if (b.submitted_at < round.start || b.submitted_at >= round.bid_close) continue;
        ++out.admissible_bid_count;
        auto it = std::find_if(latest.begin(), latest.end(),
                               [&](const AdmissibleBid& a) { return a.bidder == b.bidder; });
        if (it == latest.end()) {
            latest.push_back({b.bidder, b.amount, b.submitted_at});
        } else if (b.submitted_at > it->submitted_at ||
                   (b.submitted_at == it->submitted_at && b.amount > it->amount)) {
            it->amount = b.amount;
            it->submitted_at = b.submitted_at;
        }
    }

    std::sort(latest.begin(), latest.end(), [](const AdmissibleBid& a, const AdmissibleBid& b) {
        if (a.amount != b.amount) return a.amount > b.amount;
        if (a.submitted_at != b.submitted_at) return a.submitted_at < b.submitted_at;
        return a.bidder.id < b.bidder.id;
    });
    out.admissible = latest;

    if (latest.empty()) return out;

    out.top_bid = latest.front().amount;
    if (latest.front().amount < reserve) return out;  // sale fails

    out.winner = latest.front().bidder;
    Eth second = latest.size() > 1 ? latest[1].amount : Eth{};
    out.paid = std::max(second, reserve);
    return out;
}

} // namespace laneboost
