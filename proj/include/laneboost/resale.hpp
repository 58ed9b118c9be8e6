// resale.hpp
// Just-in-time resale market: the reseller wins rounds in the primary
// auction, collects subscriber transactions into short sub-auction windows,
// orders each batch by declared payment, and releases the batch through the
// express lane. Payments are accounted per channel; only on-chain receipts
// are observable revenue.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "laneboost/amount.hpp"
#include "laneboost/sequencer.hpp"
#include "laneboost/time.hpp"

namespace laneboost {

enum class PaymentChannel { OnChain, Subscription };

inline const char* channel_name(PaymentChannel c) {
    return c == PaymentChannel::OnChain ? "OnChain" : "Subscription";
}

inline PaymentChannel channel_from_name(const std::string& s) {
    if (s == "OnChain") return PaymentChannel::OnChain;
    if (s == "Subscription") return PaymentChannel::Subscription;
    throw std::invalid_argument("unknown payment channel: " + s);
}

struct ResaleSubmission {
    TxEvent tx;
    Eth declared_payment;
    PaymentChannel channel{PaymentChannel::OnChain};
};

struct SubAuctionWindow {
    TimeMs window_start;
    DurationMs window_length{100};
    std::vector<ResaleSubmission> submissions;

    TimeMs window_end() const { return window_start + window_length; }
};

struct ReceiptRecord {
    TimeMs window_start;
    std::string tx_id;
    PaymentChannel channel;
    Eth payment;
};

struct ClosedBatch {
    TimeMs release;
    std::vector<TxEvent> batch;           // ordered, executed_at assigned
    std::vector<ReceiptRecord> receipts;  // one per released tx
    Eth onchain_receipts;
    Eth subscription_receipts;
};

// Closes an elapsed window: orders submissions by declared payment
// (descending; ties by submission time, then tx_id), releases the batch at
// window end, and stamps each transaction's execution time with the
// reseller's latency. Payments are unconditional on execution priority.
inline ClosedBatch close_window(const SubAuctionWindow& w, DurationMs resale_latency) {
    if (resale_latency < 0)
        throw std::invalid_argument("close_window: negative resale latency");
    for (const ResaleSubmission& s : w.submissions) {
        if (s.tx.arrival < w.window_start || s.tx.arrival >= w.window_end())
            throw std::invalid_argument("close_window: submission outside window: " + s.tx.tx_id);
        if (s.declared_payment.is_negative())
            throw std::invalid_argument("close_window: negative declared payment: " + s.tx.tx_id);
    }

    std::vector<const ResaleSubmission*> order;
    order.reserve(w.submissions.size());
    for (const ResaleSubmission& s : w.submissions) order.push_back(&s);
    std::sort(order.begin(), order.end(), [](const ResaleSubmission* a, const ResaleSubmission* b) {
        if (a->declared_payment != b->declared_payment)
            return a->declared_payment > b->declared_payment;
        if (a->tx.arrival != b->tx.arrival) return a->tx.arrival < b->tx.arrival;
        return a->tx.tx_id < b->tx.tx_id;
    });

    ClosedBatch out;
    out.release = w.window_end();
    for (const ResaleSubmission* s : order) {
        TxEvent tx = s->tx;
        tx.lane = Lane::Express;
        tx.via_resale = true;
        tx.resale_latency = resale_latency;
        tx.batch_release = out.release;
        tx.executed_at = out.release + resale_latency;
        out.batch.push_back(std::move(tx));
        out.receipts.push_back({w.window_start, s->tx.tx_id, s->channel, s->declared_payment});
        if (s->channel == PaymentChannel::OnChain)
            out.onchain_receipts += s->declared_payment;
        else
            out.subscription_receipts += s->declared_payment;
    }
    return out;
}

// Per-round resale accounting. observable revenue is on-chain receipts only.
struct ResaleLedger {
    struct Row {
        TimeMs round_start;
        Eth bids_paid_primary;
        Eth onchain_receipts;
        Eth subscription_receipts;
    };
    std::map<std::int64_t, Row> rounds;  // keyed by round index

    Row& row(std::int64_t round_index, TimeMs round_start) {
        auto [it, inserted] = rounds.try_emplace(round_index);
        if (inserted) it->second.round_start = round_start;
        return it->second;
    }
};

struct RevenueGap {
    Eth bids_paid;
    Eth observable;
    Eth gap;  // bids_paid - observable; negative when receipts exceed bids
};

inline RevenueGap revenue_gap(const ResaleLedger& ledger, TimeMs from, TimeMs to) {
    RevenueGap g;
    for (const auto& [idx, row] : ledger.rounds) {
        if (row.round_start < from || row.round_start >= to) continue;
        g.bids_paid += row.bids_paid_primary;
        g.observable += row.onchain_receipts;
    }
    g.gap = g.bids_paid - g.observable;
    return g;
}

} // namespace laneboost
