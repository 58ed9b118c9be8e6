// price_process.hpp
// One-second mid-price series: synthetic generation (seeded geometric random
// walk with per-regime step volatility), realized volatility as the standard
// deviation of log returns, and markout PnL for trades.
//
// Volatility uses the population standard deviation; price lookups use the
// last sample at or before the requested time (no interpolation).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "laneboost/amount.hpp"
#include "laneboost/market_model.hpp"
#include "laneboost/rng.hpp"
#include "laneboost/sequencer.hpp"
#include "laneboost/time.hpp"

namespace laneboost {

constexpr DurationMs kPriceResolution = 1'000;

struct PriceSeries {
    std::string asset;
    std::vector<TimeMs> times;     // strictly increasing, fixed 1 s spacing
    std::vector<double> mids;      // > 0

    void validate() const {
        if (times.size() != mids.size())
            throw std::invalid_argument("PriceSeries: times/mids size mismatch");
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (!(mids[i] > 0.0))
                throw std::invalid_argument("PriceSeries: non-positive price in " + asset);
            if (i > 0 && times[i] - times[i - 1] != kPriceResolution)
                throw std::invalid_argument("PriceSeries: spacing must be exactly 1000 ms in " + asset);
        }
    }

    bool empty() const { return times.empty(); }
    TimeMs first_time() const { return times.front(); }
    TimeMs last_time() const { return times.back(); }

    // Sample at the greatest timestamp <= t; nullopt when t precedes the series.
    std::optional<double> price_at_or_before(TimeMs t) const {
        if (times.empty() || t < times.front()) return std::nullopt;
        auto it = std::upper_bound(times.begin(), times.end(), t);
        return mids[static_cast<std::size_t>(std::distance(times.begin(), it)) - 1];
    }
};

// sigma = population std dev of log returns over consecutive samples inside
// [end - window, end].
inline double realized_vol(const PriceSeries& series, TimeMs end, DurationMs window) {
    if (window < 2 * kPriceResolution)
        throw std::invalid_argument("realized_vol: window must cover at least two samples");
    const TimeMs from = end - window;
    auto lo = std::lower_bound(series.times.begin(), series.times.end(), from);
    auto hi = std::upper_bound(series.times.begin(), series.times.end(), end);
    const auto n = static_cast<std::size_t>(std::distance(lo, hi));
    if (n < 2)
        throw std::invalid_argument("realized_vol: fewer than two samples in window");
    const std::size_t i0 = static_cast<std::size_t>(std::distance(series.times.begin(), lo));

    std::vector<double> rets(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double p0 = series.mids[i0 + i];
        const double p1 = series.mids[i0 + i + 1];
        if (!(p0 > 0.0 && p1 > 0.0))
            throw std::invalid_argument("realized_vol: non-positive price");
        rets[i] = std::log(p1 / p0);
    }
    double mean = 0.0;
    for (double r : rets) mean += r;
    mean /= static_cast<double>(rets.size());
    double ss = 0.0;
    for (double r : rets) ss += (r - mean) * (r - mean);
    return std::sqrt(ss / static_cast<double>(rets.size()));
}

// O(1)-per-query realized vol over a fixed series, via prefix sums of log
// returns. Agrees with realized_vol() on every query; the calibration grid
// replay depends on this being cheap.
class VolProvider {
public:
    explicit VolProvider(const PriceSeries& series) : series_(&series) {
        series.validate();
        const std::size_t n = series.mids.size();
        sum_.resize(n, 0.0L);
        sum_sq_.resize(n, 0.0L);
        for (std::size_t i = 1; i < n; ++i) {
            const long double r = std::log(series.mids[i] / series.mids[i - 1]);
            sum_[i] = sum_[i - 1] + r;
            sum_sq_[i] = sum_sq_[i - 1] + r * r;
        }
    }

    // Population std dev of the log returns inside [end - window, end];
    // nullopt when the window holds fewer than two samples.
    std::optional<double> vol(TimeMs end, DurationMs window) const {
        if (window < 2 * kPriceResolution) return std::nullopt;
        const auto& times = series_->times;
        auto lo = std::lower_bound(times.begin(), times.end(), end - window);
        auto hi = std::upper_bound(times.begin(), times.end(), end);
        const auto i0 = static_cast<std::size_t>(std::distance(times.begin(), lo));
        const auto i1 = static_cast<std::size_t>(std::distance(times.begin(), hi));
        if (i1 < i0 + 2) return std::nullopt;
        // Returns at indices (i0+1 .. i1-1) are the in-window consecutive ones.
        const auto cnt = static_cast<long double>(i1 - 1 - i0);
        const long double s = sum_[i1 - 1] - sum_[i0];
        const long double ss = sum_sq_[i1 - 1] - sum_sq_[i0];
        const long double mean = s / cnt;
        long double var = ss / cnt - mean * mean;
        if (var < 0.0L) var = 0.0L;
        return static_cast<double>(std::sqrt(var));
    }

    const PriceSeries& series() const { return *series_; }

private:
    const PriceSeries* series_;
    std::vector<long double> sum_;
    std::vector<long double> sum_sq_;
};

// An on-chain swap: x units of buy_asset received for y units of sell_asset,
// valued later at markout prices.
struct Trade {
    std::string trade_id;
    TimeMs time;
    std::string buy_asset;
    double x{0.0};
    std::string sell_asset;
    double y{0.0};
    Usd fees;
    Lane lane{Lane::Regular};
    EntityId sender;
    // Classification fields (ingestion columns, not decoded on-chain data).
    std::string contract;
    int swap_events{0};

    void validate() const {
        if (x < 0.0 || y < 0.0) throw std::invalid_argument("Trade: negative quantity in " + trade_id);
        if (fees.is_negative()) throw std::invalid_argument("Trade: negative fees in " + trade_id);
    }
};

// Per-asset price lookup. Assets without a series that are pegged
// stablecoins (USDT/USDC/USD) price at exactly 1.
class PriceBook {
public:
    void add(PriceSeries series) {
        series.validate();
        auto key = series.asset;
        book_.insert_or_assign(std::move(key), std::move(series));
    }

    bool has(const std::string& asset) const { return book_.count(asset) > 0; }

    const PriceSeries* series(const std::string& asset) const {
        auto it = book_.find(asset);
        return it == book_.end() ? nullptr : &it->second;
    }

    std::optional<double> price_at(const std::string& asset, TimeMs t) const {
        auto it = book_.find(asset);
        if (it != book_.end()) return it->second.price_at_or_before(t);
        if (asset == "USDT" || asset == "USDC" || asset == "USD") return 1.0;
        return std::nullopt;
    }

    const std::map<std::string, PriceSeries>& all() const { return book_; }

private:
    std::map<std::string, PriceSeries> book_;
};

struct MarkoutError {
    std::string trade_id;
    std::string missing_asset;
};

constexpr DurationMs kDefaultMarkoutHorizon = 5'000;

// PnL = x * P_buy(t+m) - y * P_sell(t+m) - fees, with prices taken from the
// last sample at or before t+m. Missing coverage is an error; callers track
// excluded trades in the coverage report.
inline double markout_pnl(const Trade& trade, const PriceBook& prices,
                          DurationMs m = kDefaultMarkoutHorizon) {
    trade.validate();
    const TimeMs at = trade.time + m;
    const auto pa = prices.price_at(trade.buy_asset, at);
    if (!pa) throw std::runtime_error("markout_pnl: no price for " + trade.buy_asset +
                                      " at markout of trade " + trade.trade_id);
    const auto pb = prices.price_at(trade.sell_asset, at);
    if (!pb) throw std::runtime_error("markout_pnl: no price for " + trade.sell_asset +
                                      " at markout of trade " + trade.trade_id);
    return trade.x * *pa - trade.y * *pb - trade.fees.to_double();
}

// Per-regime step volatility for the synthetic price driver. vol applies to
// 1 s log-return steps starting at `from`.
struct VolRegimeStep {
    TimeMs from;
    double step_vol{0.0};
};

// Seeded geometric random walk at 1 s resolution. Bit-identical per seed.
inline PriceSeries generate_series(std::uint64_t seed, const std::string& asset,
                                   double initial_price, TimeMs start,
                                   std::size_t num_samples,
                                   const std::vector<VolRegimeStep>& regimes) {
    if (!(initial_price > 0.0))
        throw std::invalid_argument("generate_series: initial price must be positive");
    if (regimes.empty())
        throw std::invalid_argument("generate_series: need at least one vol regime");
    for (std::size_t i = 0; i < regimes.size(); ++i) {
        if (!(regimes[i].step_vol > 0.0))
            throw std::invalid_argument("generate_series: step vol must be positive");
        if (i > 0 && regimes[i].from <= regimes[i - 1].from)
            throw std::invalid_argument("generate_series: regime starts not increasing");
    }

    Rng rng(seed, "price:" + asset);
    PriceSeries s;
    s.asset = asset;
    s.times.reserve(num_samples);
    s.mids.reserve(num_samples);

    double log_p = std::log(initial_price);
    std::size_t reg = 0;
    for (std::size_t i = 0; i < num_samples; ++i) {
        const TimeMs t = start + static_cast<DurationMs>(i) * kPriceResolution;
        while (reg + 1 < regimes.size() && t >= regimes[reg + 1].from) ++reg;
        s.times.push_back(t);
        s.mids.push_back(std::exp(log_p));
        log_p += regimes[reg].step_vol * rng.normal();
    }
    return s;
}

} // namespace laneboost
