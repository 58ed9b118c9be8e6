#include <catch2/catch.hpp>

#include "laneboost/dataset.hpp"
#include "laneboost/reports.hpp"

using namespace laneboost;

namespace {

const std::string kFixtures = std::string(LANEBOOST_SOURCE_DIR) + "/tests/fixtures";

Dataset small_dataset() {
    const auto cfg = load_scenario_file(kFixtures + "/replay_small/config.toml");
    ReplayInputs in;
    in.bids_csv = kFixtures + "/replay_small/bids.csv";
    in.trades_csv = kFixtures + "/replay_small/trades.csv";
    in.prices_csv = kFixtures + "/replay_small/prices.csv";
    in.payments_csv = kFixtures + "/replay_small/payments.csv";
    return dataset_from_replay(cfg, in);
}

constexpr auto PK = static_cast<std::size_t>(Regime::PreKairos);
constexpr auto SS = static_cast<std::size_t>(Regime::SteadyState);

} // namespace

// Every expected value below is computed by hand from the committed fixture
// files; the dataset is 10 rounds, 9 trades, flat 2000 USD/ETH prices.
TEST_CASE("replay_small: settlement reproduces the hand-settled rounds") {
    const auto ds = small_dataset();
    REQUIRE(ds.rounds.size() == 10);

    auto round = [&](std::size_t k) -> const RoundRecord& { return ds.rounds[k]; };

    // r0: wm 0.008 vs sel 0.005.
    CHECK(round(0).outcome.winner->id == "wintermute");
    CHECK(round(0).outcome.paid->str() == "0.005");
    // r1: equal 0.004 bids, selini submitted earlier.
    CHECK(round(1).outcome.winner->id == "selini");
    CHECK(round(1).outcome.paid->str() == "0.004");
    // r2: wm's later 0.002 supersedes its 0.01; beats sel's 0.0015.
    CHECK(round(2).outcome.winner->id == "wintermute");
    CHECK(round(2).outcome.top_bid->str() == "0.002");
    CHECK(round(2).outcome.paid->str() == "0.0015");
    // r3: single 0.0009 bid below the reserve.
    CHECK_FALSE(round(3).outcome.has_winner());
    CHECK(round(3).outcome.top_bid->str() == "0.0009");
    // r4: selini's bid lands exactly at bid close and is inadmissible.
    CHECK(round(4).outcome.winner->id == "wintermute");
    CHECK(round(4).outcome.paid->str() == "0.001");
    CHECK(round(4).outcome.admissible.size() == 1);
    // r5: untracked entity wins at the reserve.
    CHECK(round(5).outcome.winner->id == "other");
    CHECK(round(5).outcome.paid->str() == "0.001");
    // r6-r9: resale era.
    CHECK(round(6).outcome.winner->id == "kairos");
    CHECK(round(6).outcome.paid->str() == "0.002");
    CHECK(round(7).outcome.winner->id == "kairos");
    CHECK(round(8).outcome.winner->id == "wintermute");
    CHECK(round(8).outcome.paid->str() == "0.002");
    CHECK(round(9).outcome.winner->id == "kairos");
    CHECK(round(9).outcome.paid->str() == "0.001");
}

TEST_CASE("replay_small: gap metrics match hand computation") {
    const auto b = compute_bundle(small_dataset());

    // Zone gaps: {0.375, 0, 0.25, 5/6, 0.5} -> median 0.375.
    CHECK(b.gap_per_regime[PK].settled_rounds == 5);
    CHECK(*b.gap_per_regime[PK].median_gap == Approx(0.375).margin(1e-12));
    // {0.5, 0.5, 0.5555..., 0.75} -> median = (0.5 + 5/9) / 2 = 19/36.
    CHECK(b.gap_per_regime[SS].settled_rounds == 4);
    CHECK(*b.gap_per_regime[SS].median_gap == Approx(19.0 / 36.0).margin(1e-12));
    // All nine settled gaps sorted:
    // {0, 0.25, 0.375, 0.5, 0.5, 0.5, 5/9, 0.75, 5/6}: the middle is 0.5.
    CHECK(*b.gap_overall.median_gap == Approx(0.5).margin(1e-12));
    // One UTC day, so the daily median equals the overall median.
    REQUIRE(b.gap_daily.size() == 1);
    CHECK(b.gap_daily[0].settled_rounds == 9);
    CHECK(*b.gap_overall.median_daily_gap == *b.gap_overall.median_gap);
}

TEST_CASE("replay_small: win shares match hand counts") {
    const auto b = compute_bundle(small_dataset());
    CHECK(b.wins.rounds_per_regime[PK] == 6);
    CHECK(b.wins.rounds_per_regime[SS] == 4);
    CHECK(b.wins.per_regime.at("wintermute")[PK].wins == 3);
    CHECK(b.wins.per_regime.at("wintermute")[PK].share() == Approx(0.5));
    CHECK(b.wins.per_regime.at("selini")[PK].wins == 1);
    CHECK(b.wins.per_regime.at("other")[PK].wins == 1);
    CHECK(b.wins.per_regime.at("kairos")[SS].wins == 3);
    CHECK(b.wins.per_regime.at("kairos")[SS].share() == Approx(0.75));
    CHECK(b.wins.per_regime.at("wintermute")[SS].wins == 1);
    CHECK(b.wins.overall.at("wintermute").share() == Approx(0.4));
    CHECK(b.wins.overall.at("kairos").share() == Approx(0.3));
}

TEST_CASE("replay_small: bidder combinations match hand counts") {
    const auto b = compute_bundle(small_dataset());
    CHECK(b.combos.rounds.at("wintermute+selini")[PK] == 3);
    CHECK(b.combos.rounds.at("selini")[PK] == 1);
    CHECK(b.combos.rounds.at("wintermute")[PK] == 1);  // r4: selini inadmissible
    CHECK(b.combos.rounds.at("None")[PK] == 1);        // r5: untracked bidder only
    CHECK(b.combos.rounds.at("selini+kairos")[SS] == 1);
    CHECK(b.combos.rounds.at("wintermute+selini+kairos")[SS] == 1);
    CHECK(b.combos.rounds.at("wintermute+kairos")[SS] == 1);
    CHECK(b.combos.rounds.at("kairos")[SS] == 1);
    CHECK(b.combos.rounds_with_untracked == 1);
    CHECK(b.combos.total == 10);
}

TEST_CASE("replay_small: bid distribution percentiles match hand computation") {
    const auto b = compute_bundle(small_dataset());
    auto row = [&](const char* who, Regime reg) -> const BidDistributionRow& {
        for (const auto& r : b.bid_dist)
            if (r.bidder == who && r.regime == reg) return r;
        FAIL("missing row");
        throw std::logic_error("unreachable");
    };

    // wintermute zone A bids {0.002, 0.004, 0.006, 0.008, 0.01}.
    const auto& wm = row("wintermute", Regime::PreKairos);
    CHECK(wm.n == 5);
    CHECK(wm.p25 == Approx(0.004).margin(1e-15));
    CHECK(wm.median == Approx(0.006).margin(1e-15));
    CHECK(wm.p75 == Approx(0.008).margin(1e-15));
    CHECK(wm.p99 == Approx(0.00992).margin(1e-15));
    CHECK(wm.mean == Approx(0.006).margin(1e-15));

    // selini zone A bids {0.0009, 0.0015, 0.003, 0.004, 0.005}.
    const auto& sel = row("selini", Regime::PreKairos);
    CHECK(sel.n == 5);
    CHECK(sel.p25 == Approx(0.0015).margin(1e-15));
    CHECK(sel.median == Approx(0.003).margin(1e-15));
    CHECK(sel.p99 == Approx(0.00496).margin(1e-15));
    CHECK(sel.mean == Approx(0.00288).margin(1e-15));

    // kairos zone B bids {0.002, 0.004, 0.004, 0.004}.
    const auto& kai = row("kairos", Regime::SteadyState);
    CHECK(kai.n == 4);
    CHECK(kai.p25 == Approx(0.0035).margin(1e-15));
    CHECK(kai.median == Approx(0.004).margin(1e-15));
    CHECK(kai.mean == Approx(0.0035).margin(1e-15));
}

TEST_CASE("replay_small: classification, markouts and surplus match hand computation") {
    const auto b = compute_bundle(small_dataset());

    // 9 trade rows; t4 (unknown contract), t5 (2 swaps), t6 (illiquid) fail
    // classification; t3 and t10 have negative markouts.
    CHECK(b.coverage.trades_total == 9);
    CHECK(b.coverage.trades_malformed == 0);
    CHECK(b.coverage.trades_classified == 6);
    CHECK(b.coverage.trades_missing_price == 0);
    CHECK(b.coverage.trades_positive_pnl == 4);

    // Zone A: pnl = 95 + 8, fees = 7; bids paid = 0.0125 ETH * 2000 = 25;
    // tops = 0.022 * 2000 = 44.
    const auto& pk = b.surplus.per_regime[PK];
    CHECK(pk.total_pnl.str() == "103");
    CHECK(pk.tx_fees.str() == "7");
    CHECK(pk.bids_paid.str() == "25");
    CHECK(pk.top_bids.str() == "44");
    CHECK(pk.net_surplus.str() == "71");
    CHECK(pk.captured_share_paid == Approx(25.0 / 103.0).margin(1e-12));
    CHECK(pk.captured_share_top == Approx(44.0 / 103.0).margin(1e-12));

    // Zone B: pnl = 13 + 4, fees = 3; bids paid = 0.007 * 2000 = 14.
    const auto& ss = b.surplus.per_regime[SS];
    CHECK(ss.total_pnl.str() == "17");
    CHECK(ss.tx_fees.str() == "3");
    CHECK(ss.bids_paid.str() == "14");
    CHECK(ss.net_surplus.str() == "0");

    // Overall identity, exact.
    CHECK(b.surplus.overall.total_pnl.str() == "120");
    CHECK(b.surplus.overall.net_surplus.str() == "71");
    CHECK(b.surplus.overall.net_surplus ==
          b.surplus.overall.total_pnl - b.surplus.overall.tx_fees - b.surplus.overall.bids_paid);
}

TEST_CASE("replay_small: pnl summary rows match the four positive trades") {
    const auto b = compute_bundle(small_dataset());
    auto cell = [&](const char* sender, const char* zone, Lane lane) -> const PnlSummaryRow& {
        for (const auto& r : b.pnl_summary)
            if (r.sender == sender && r.regime == zone && r.lane == lane) return r;
        FAIL("missing pnl row");
        throw std::logic_error("unreachable");
    };
    CHECK(cell("wintermute", "Pre-Kairos", Lane::Express).total.str() == "95");
    CHECK(cell("wintermute", "Pre-Kairos", Lane::Express).trades == 1);
    CHECK(cell("selini", "Pre-Kairos", Lane::Regular).total.str() == "8");
    CHECK(cell("wintermute", "SteadyState", Lane::Express).total.str() == "13");
    CHECK(cell("selini", "SteadyState", Lane::Regular).total.str() == "4");
    CHECK(cell("wintermute", "Total", Lane::Express).total.str() == "108");
    CHECK(cell("wintermute", "Total", Lane::Express).avg == Approx(54.0));
}

TEST_CASE("replay_small: resale ledger and hourly loss profile") {
    const auto ds = small_dataset();
    const auto b = compute_bundle(ds);

    // kairos wins r6, r7, r9 funding control of r7, r8, r10; one observed
    // payment of 0.0004 during r7.
    const auto* row_ss = &b.resale_gap[0];
    for (const auto& r : b.resale_gap)
        if (r.regime == std::string("SteadyState")) row_ss = &r;
    CHECK(row_ss->bids_paid.str() == "0.005");
    CHECK(row_ss->onchain.str() == "0.0004");
    CHECK(row_ss->gap.str() == "0.0046");

    // kairos participated in r6..r9 (hour 00 UTC), lost r8 only.
    REQUIRE(b.has_reseller);
    CHECK(b.reseller_loss.by_hour[0].participated == 4);
    CHECK(b.reseller_loss.by_hour[0].lost == 1);
    CHECK(b.reseller_loss.out_session.loss_rate() == Approx(0.25));
    CHECK(b.reseller_loss.in_session.participated == 0);
    CHECK(median_of(b.reseller_loss.by_hour[0].bids_win) == Approx(0.004));
    CHECK(median_of(b.reseller_loss.by_hour[0].bids_loss) == Approx(0.002));
}

TEST_CASE("replay_small: constant prices produce no correlation rows") {
    const auto b = compute_bundle(small_dataset());
    CHECK(b.vol_corr.empty());
}

// The aggregate-engineered fixture: identical per-zone gaps pin the medians
// at the headline numbers, and one large trade pins the captured share.
TEST_CASE("replay_aggregates: 37.3% / 85.2% medians and 7.4% captured share") {
    const auto cfg = load_scenario_file(kFixtures + "/replay_aggregates/config.toml");
    ReplayInputs in;
    in.bids_csv = kFixtures + "/replay_aggregates/bids.csv";
    in.trades_csv = kFixtures + "/replay_aggregates/trades.csv";
    in.prices_csv = kFixtures + "/replay_aggregates/prices.csv";
    const auto b = compute_bundle(dataset_from_replay(cfg, in));

    CHECK(*b.gap_per_regime[PK].median_gap == Approx(0.373).margin(1e-12));
    CHECK(*b.gap_per_regime[PK].median_daily_gap == Approx(0.373).margin(1e-12));
    CHECK(*b.gap_per_regime[SS].median_gap == Approx(0.852).margin(1e-12));

    // bids paid in the first zone: 5 * 0.627 ETH * 1000 = 3135 USD;
    // pnl = 43*1000 - 635 - 0.14 = 42364.86 -> share = 0.0740000...
    CHECK(b.surplus.per_regime[PK].bids_paid.str() == "3135");
    CHECK(b.surplus.per_regime[PK].captured_share_paid == Approx(0.074).margin(0.001));
    CHECK(b.surplus.per_regime[PK].captured_share_paid == Approx(0.074).margin(1e-6));
}
