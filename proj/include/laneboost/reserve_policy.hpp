// reserve_policy.hpp
// Reserve-price policies: fixed, scheduled step changes, and the
// volatility-indexed rule r = clamp(c * sigma^2, floor, cap) with sigma
// measured over a window ending when the auction closes. Includes the
// counterfactual revenue replay (bids held fixed) and grid calibration.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <thread>
#include <variant>
#include <vector>

#include "laneboost/amount.hpp"
#include "laneboost/market_model.hpp"
#include "laneboost/price_process.hpp"
#include "laneboost/time.hpp"

namespace laneboost {

struct FixedReserve {
    Eth amount;
};

struct ScheduleReserve {
    // (effective-from, amount), strictly increasing timestamps. The first
    // entry must be at or before the first round replayed or simulated.
    std::vector<std::pair<TimeMs, Eth>> steps;
};

struct VolIndexedReserve {
    double c{0.0};
    DurationMs window{60'000};
    Eth floor;
    Eth cap;
};

class ReservePolicy {
public:
    using Variant = std::variant<FixedReserve, ScheduleReserve, VolIndexedReserve>;

    static ReservePolicy fixed(Eth amount) { return ReservePolicy{FixedReserve{amount}}; }
    static ReservePolicy schedule(std::vector<std::pair<TimeMs, Eth>> steps) {
        return ReservePolicy{ScheduleReserve{std::move(steps)}};
    }
    static ReservePolicy vol_indexed(double c, DurationMs window, Eth floor, Eth cap) {
        return ReservePolicy{VolIndexedReserve{c, window, floor, cap}};
    }

    explicit ReservePolicy(Variant v) : v_(std::move(v)) { validate(); }

    void validate() const {
        if (const auto* f = std::get_if<FixedReserve>(&v_)) {
            if (!(f->amount > Eth{}))
                throw std::invalid_argument("ReservePolicy: fixed reserve must be positive");
        } else if (const auto* s = std::get_if<ScheduleReserve>(&v_)) {
            if (s->steps.empty())
                throw std::invalid_argument("ReservePolicy: empty schedule");
            for (std::size_t i = 0; i < s->steps.size(); ++i) {
                if (!(s->steps[i].second > Eth{}))
                    throw std::invalid_argument("ReservePolicy: schedule amount must be positive");
                if (i > 0 && s->steps[i].first <= s->steps[i - 1].first)
                    throw std::invalid_argument("ReservePolicy: schedule timestamps not increasing");
            }
        } else {
            const auto& v = std::get<VolIndexedReserve>(v_);
            if (!(v.c > 0.0)) throw std::invalid_argument("ReservePolicy: c must be positive");
            if (v.window < 2 * kPriceResolution)
                throw std::invalid_argument("ReservePolicy: vol window too short");
            if (!(v.floor > Eth{}) || v.floor > v.cap)
                throw std::invalid_argument("ReservePolicy: need 0 < floor <= cap");
        }
    }

    const Variant& variant() const { return v_; }

private:
    Variant v_;
};

// Realized-vol source for the policy: vol(end, window), nullopt when the
// series does not cover the window.
using SigmaProvider = std::function<std::optional<double>(TimeMs end, DurationMs window)>;

inline SigmaProvider sigma_from_provider(const VolProvider& vp) {
    return [&vp](TimeMs end, DurationMs window) { return vp.vol(end, window); };
}

struct ReserveQuote {
    Eth reserve;
    bool vol_fallback{false};  // VolIndexed had no data and fell back to floor
};

inline ReserveQuote reserve_at(const ReservePolicy& policy, const RoundBounds& round,
                               const SigmaProvider& sigma) {
    return std::visit(
        [&](const auto& p) -> ReserveQuote {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, FixedReserve>) {
                return {p.amount, false};
            } else if constexpr (std::is_same_v<T, ScheduleReserve>) {
                // Latest step at or before round start.
                auto it = std::upper_bound(
                    p.steps.begin(), p.steps.end(), round.start,
                    [](TimeMs t, const auto& step) { return t < step.first; });
                if (it == p.steps.begin())
                    throw std::invalid_argument("reserve_at: round starts before first schedule step");
                return {std::prev(it)->second, false};
            } else {
                // Sigma over the window ending when the auction closes.
                const auto s = sigma ? sigma(round.bid_close, p.window) : std::nullopt;
                if (!s) return {p.floor, true};
                const Eth raw = Eth::from_double(p.c * *s * *s);
                return {std::clamp(raw, p.floor, p.cap), false};
            }
        },
        policy.variant());
}

// One historical round for counterfactual replay: the top and second
// admissible bids with the round timing. second_bid is zero when the round
// had a single admissible bid.
struct HistoricalRound {
    RoundBounds bounds;
    Eth top_bid;
    Eth second_bid;
};

struct ReplayResult {
    Eth revenue;
    Eth benchmark;          // sum of top bids
    double recovery_ratio{0.0};
    std::int64_t sales{0};
    std::int64_t failures{0};
    std::int64_t vol_fallbacks{0};
};

// Counterfactual revenue with bids held fixed: a round sells iff its top bid
// clears the policy reserve, at price max(second bid, reserve).
inline ReplayResult replay_revenue(const ReservePolicy& policy,
                                   std::span<const HistoricalRound> rounds,
                                   const SigmaProvider& sigma) {
    ReplayResult out;
    for (const HistoricalRound& r : rounds) {
        if (r.second_bid > r.top_bid)
            throw std::invalid_argument("replay_revenue: second bid exceeds top bid");
        out.benchmark += r.top_bid;
        const ReserveQuote q = reserve_at(policy, r.bounds, sigma);
        if (q.vol_fallback) ++out.vol_fallbacks;
        if (r.top_bid >= q.reserve && r.top_bid > Eth{}) {
            out.revenue += std::max(r.second_bid, q.reserve);
            ++out.sales;
        } else {
            ++out.failures;
        }
    }
    out.recovery_ratio = out.benchmark.is_zero()
                             ? 0.0
                             : out.revenue.to_double() / out.benchmark.to_double();
    return out;
}

struct CalibrationCell {
    DurationMs window{0};
    double c{0.0};
    double recovery_ratio{0.0};
};

struct CalibrationReport {
    std::vector<CalibrationCell> grid;  // in (window-major, c-minor) grid order
    CalibrationCell best;
    Eth benchmark;  // sum of top bids
};

// Full grid evaluation of the vol-indexed rule. Best cell maximizes the
// recovery ratio; ties prefer the smaller c, then the smaller window.
// Cells are independent; jobs > 1 splits them across threads and the
// reduction order stays deterministic.
inline CalibrationReport calibrate(std::span<const HistoricalRound> rounds,
                                   const SigmaProvider& sigma,
                                   std::span<const DurationMs> window_grid,
                                   std::span<const double> c_grid,
                                   Eth floor, Eth cap, unsigned jobs = 1) {
    if (rounds.empty()) throw std::invalid_argument("calibrate: no rounds");
    if (window_grid.empty() || c_grid.empty())
        throw std::invalid_argument("calibrate: empty grid");

    CalibrationReport report;
    report.grid.resize(window_grid.size() * c_grid.size());

    auto eval_cell = [&](std::size_t flat) {
        const std::size_t wi = flat / c_grid.size();
        const std::size_t ci = flat % c_grid.size();
        const ReservePolicy policy =
            ReservePolicy::vol_indexed(c_grid[ci], window_grid[wi], floor, cap);
        const ReplayResult r = replay_revenue(policy, rounds, sigma);
        report.grid[flat] = {window_grid[wi], c_grid[ci], r.recovery_ratio};
    };

    const std::size_t total = report.grid.size();
    if (jobs <= 1 || total < 2) {
        for (std::size_t i = 0; i < total; ++i) eval_cell(i);
    } else {
        std::vector<std::thread> pool;
        const unsigned n = std::min<unsigned>(jobs, static_cast<unsigned>(total));
        for (unsigned t = 0; t < n; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < total; i += n) eval_cell(i);
            });
        }
        for (auto& th : pool) th.join();
    }

    // Deterministic reduction: scan in grid order, strict improvement only,
    // with ties resolved toward smaller c then smaller window.
    const CalibrationCell* best = &report.grid.front();
    for (const CalibrationCell& cell : report.grid) {
        if (cell.recovery_ratio > best->recovery_ratio) {
            best = &cell;
        } else if (cell.recovery_ratio == best->recovery_ratio) {
            if (cell.c < best->c || (cell.c == best->c && cell.window < best->window))
                best = &cell;
        }
    }
    report.best = *best;

    ReplayResult bench = replay_revenue(
        ReservePolicy::vol_indexed(report.best.c, report.best.window, floor, cap), rounds, sigma);
    report.benchmark = bench.benchmark;
    return report;
}

} // namespace laneboost
