#include "gasval/market_data.hpp"
#include "gasval/errors.hpp"

#include <doctest.h>

#include <sstream>

using namespace gasval;

namespace {

PriceHistory two_month_history() {
    PriceHistory h;
    // spans the May contract's expiry on 2026-05-01
    for (int d : {28, 29, 30}) {
        h.dates.push_back(Date{2026, 4, d});
        h.spot.push_back(2.0 + 0.01 * d);
        h.curves.push_back({{YearMonth{2026, 5}, 2.5}, {YearMonth{2026, 6}, 2.7},
                            {YearMonth{2026, 7}, 2.9}});
    }
    for (int d : {1, 2}) {
        h.dates.push_back(Date{2026, 5, d});
        h.spot.push_back(2.4);
        h.curves.push_back({{YearMonth{2026, 6}, 2.8}, {YearMonth{2026, 7}, 3.0}});
    }
    return h;
}

} // namespace

TEST_CASE("validate enforces the container invariants") {
    PriceHistory h = two_month_history();
    h.validate();

    PriceHistory bad = h;
    bad.spot[1] = -1.0;
    CHECK_THROWS_AS(bad.validate(), Error);

    bad = h;
    bad.dates[1] = bad.dates[0];
    CHECK_THROWS_AS(bad.validate(), Error);

    bad = h;
    bad.curves[2] = {{YearMonth{2026, 6}, 2.8}}; // single maturity
    CHECK_THROWS_AS(bad.validate(), Error);

    bad = h;
    bad.curves[0] = {{YearMonth{2026, 6}, 2.7}, {YearMonth{2026, 5}, 2.5}};
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("price_at reports missing maturities as negative") {
    PriceHistory h = two_month_history();
    CHECK(h.price_at(0, YearMonth{2026, 6}) == 2.7);
    CHECK(h.price_at(0, YearMonth{2026, 12}) < 0.0);
    CHECK(h.price_at(3, YearMonth{2026, 5}) < 0.0); // expired, no longer quoted
}

TEST_CASE("prompt rolls on the expiry date itself") {
    PriceHistory h = two_month_history();
    auto roll = rolling_series(h);
    REQUIRE(roll.size() == 5);
    // before expiry the May contract is prompt
    CHECK(roll[0].prompt == 2.5);
    CHECK(roll[0].back == 2.7);
    CHECK(roll[0].prompt_index == 0);
    // on 2026-05-01 the May contract has expired; June takes over
    CHECK(roll[3].prompt == 2.8);
    CHECK(roll[3].back == 3.0);
    CHECK(roll[3].prompt_index == 0);
    for (const auto& pt : roll)
        CHECK(pt.x == doctest::Approx((pt.spot - pt.prompt) / pt.prompt).epsilon(1e-15));
}

TEST_CASE("csv loader round trip and failure modes") {
    std::istringstream spot_csv("date,price\n2026-04-28,2.28\n2026-04-29,2.29\n");
    std::istringstream curve_csv("date,maturity_month,price\n"
                                 "2026-04-28,2026-05,2.5\n2026-04-28,2026-06,2.7\n"
                                 "2026-04-29,2026-05,2.6\n2026-04-29,2026-06,2.8\n");
    PriceHistory h = load_price_history(spot_csv, curve_csv);
    CHECK(h.size() == 2);
    CHECK(h.spot[0] == 2.28);
    CHECK(h.price_at(1, YearMonth{2026, 6}) == 2.8);

    std::istringstream bad_spot("date,price\n2026-04-28,-2\n");
    std::istringstream ok_curve("date,maturity_month,price\n2026-04-28,2026-05,2.5\n"
                                "2026-04-28,2026-06,2.7\n");
    CHECK_THROWS_AS(load_price_history(bad_spot, ok_curve), Error);

    std::istringstream sp2("date,price\n2026-04-28,2.28\n");
    std::istringstream no_header("2026-04-28,2026-05,2.5\n");
    CHECK_THROWS_AS(load_price_history(sp2, no_header), Error);
}

TEST_CASE("spike detection splits signs and months") {
    std::vector<RollingPoint> series;
    for (int i = 0; i < 40; ++i) {
        RollingPoint pt;
        pt.date = add_days(Date{2026, 1, 5}, i * 3); // january through april
        pt.spot = 2.0;
        pt.prompt = 2.0;
        pt.x = 0.0;
        series.push_back(pt);
    }
    series[2].x = 0.9;   // january, positive
    series[12].x = -0.8; // february, negative
    SpikeDetection det = detect_spikes(series, 3.0);
    REQUIRE(det.total() == 2);
    CHECK(det.events[0].positive);
    CHECK_FALSE(det.events[1].positive);
    CHECK(det.monthly_counts[0][1] == 1); // january positive bucket
    CHECK(det.monthly_counts[1][0] == 1); // february negative bucket
    CHECK(det.threshold_k == 3.0);

    // quiet series flags nothing
    for (auto& pt : series)
        pt.x = 0.001 * (pt.date.day % 3);
    CHECK(detect_spikes(series, 3.0).total() == 0);
}
