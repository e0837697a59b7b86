#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <sstream>

#include "comfortopt/weather.hpp"

using namespace comfortopt;
using Catch::Approx;

namespace {

std::string valid_csv(int hours) {
    std::ostringstream out;
    out << kWeatherCsvHeader << '\n';
    for (int h = 0; h < hours; ++h)
        out << h << ",26.5,80,0,3\n";
    return out.str();
}

} // namespace

TEST_CASE("weather csv parses a valid day") {
    const WeatherSeries s = parse_weather_csv_text(valid_csv(24), "test");
    CHECK(s.records.size() == 24);
    CHECK(s.days() == 1);
    CHECK(s.latitude_deg == -21.0);
}

TEST_CASE("weather csv rejects malformed input with line numbers") {
    std::string rh_bad = valid_csv(24);
    const auto pos = rh_bad.find("13,26.5,80");
    rh_bad.replace(pos, 10, "13,26.5,105");
    CHECK_THROWS_WITH(parse_weather_csv_text(rh_bad, "test"),
                      Catch::Matchers::ContainsSubstring("test:15") &&
                          Catch::Matchers::ContainsSubstring("[0, 100]"));

    std::string gap;
    {
        std::ostringstream out;
        out << kWeatherCsvHeader << '\n';
        for (int h = 0; h < 24; ++h)
            if (h != 13) out << h << ",26.5,80,0,3\n";
        gap = out.str();
    }
    CHECK_THROWS_WITH(parse_weather_csv_text(gap, "test"),
                      Catch::Matchers::ContainsSubstring("non-hourly spacing"));

    CHECK_THROWS_WITH(parse_weather_csv_text("dry_bulb,rh\n", "test"),
                      Catch::Matchers::ContainsSubstring("expected header"));
    CHECK_THROWS_AS(parse_weather_csv_text(valid_csv(25), "test"), Error);
    CHECK_THROWS_AS(parse_weather_csv_text(kWeatherCsvHeader + std::string("\n"), "test"), Error);
    CHECK_THROWS_WITH(parse_weather_csv_text(std::string(kWeatherCsvHeader) + "\n0,26.5,80,x,3\n", "test"),
                      Catch::Matchers::ContainsSubstring("not a number"));
    CHECK_THROWS_AS(parse_weather_csv("/no/such/file.csv"), Error);
}

TEST_CASE("synthetic generator hits the climate statistics") {
    const WeatherSeries s = synthetic_tropical(365, 1);
    REQUIRE(s.records.size() == 365 * 24);

    double mean = 0.0;
    for (const WeatherRecord& r : s.records) mean += r.dry_bulb_c;
    mean /= s.records.size();
    CHECK(mean >= 26.0);
    CHECK(mean <= 27.0);

    int maxima_in_band = 0;
    for (int d = 0; d < 365; ++d) {
        double day_max = -1e9;
        for (int h = 0; h < 24; ++h) day_max = std::max(day_max, s.records[d * 24 + h].dry_bulb_c);
        if (day_max >= 29.0 && day_max <= 34.0) ++maxima_in_band;
    }
    CHECK(maxima_in_band > 365 * 0.7);

    for (const WeatherRecord& r : s.records) {
        CHECK(r.rh_pct >= 70.0);
        CHECK(r.rh_pct <= 90.0);
        CHECK(r.ghi_wm2 >= 0.0);
        CHECK(r.wind_ms >= 0.0);
    }
}

TEST_CASE("synthetic generator is deterministic per seed") {
    const WeatherSeries a = synthetic_tropical(30, 17);
    const WeatherSeries b = synthetic_tropical(30, 17);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].dry_bulb_c == b.records[i].dry_bulb_c);
        CHECK(a.records[i].rh_pct == b.records[i].rh_pct);
        CHECK(a.records[i].ghi_wm2 == b.records[i].ghi_wm2);
        CHECK(a.records[i].wind_ms == b.records[i].wind_ms);
    }

    // Different seeds perturb the noise but keep the deterministic envelope:
    // nights stay dark and the warmest hour of each day stays put.
    const WeatherSeries c = synthetic_tropical(30, 18);
    bool any_difference = false;
    for (std::size_t i = 0; i < a.records.size(); ++i)
        any_difference |= a.records[i].dry_bulb_c != c.records[i].dry_bulb_c;
    CHECK(any_difference);
    for (int d = 0; d < 30; ++d) {
        auto warmest = [&](const WeatherSeries& s) {
            int best = 0;
            for (int h = 1; h < 24; ++h)
                if (s.records[d * 24 + h].dry_bulb_c > s.records[d * 24 + best].dry_bulb_c) best = h;
            return best;
        };
        CHECK(warmest(a) == warmest(c));
        CHECK(a.records[d * 24].ghi_wm2 == 0.0);
        CHECK(c.records[d * 24].ghi_wm2 == 0.0);
    }

    CHECK_THROWS_AS(synthetic_tropical(0, 1), Error);
}

TEST_CASE("weather csv round-trips exactly") {
    const WeatherSeries s = synthetic_tropical(3, 99);
    std::ostringstream out;
    write_weather_csv(s, out);
    const WeatherSeries back = parse_weather_csv_text(out.str(), "roundtrip");
    REQUIRE(back.records.size() == s.records.size());
    for (std::size_t i = 0; i < s.records.size(); ++i) {
        CHECK(back.records[i].dry_bulb_c == s.records[i].dry_bulb_c);
        CHECK(back.records[i].rh_pct == s.records[i].rh_pct);
        CHECK(back.records[i].ghi_wm2 == s.records[i].ghi_wm2);
        CHECK(back.records[i].wind_ms == s.records[i].wind_ms);
    }
}

TEST_CASE("sol-air temperature") {
    WeatherRecord rec{0, 30.0, 75.0, 1000.0, 3.0};

    SolAirParams params;
    CHECK(sol_air_temperature(rec, 180.0, 0.6, 0.04, params) == Approx(42.0).margin(1e-12));

    rec.ghi_wm2 = 0.0;
    CHECK(sol_air_temperature(rec, 0.0, 0.6, 0.04, params) == 30.0);

    rec.ghi_wm2 = 800.0;
    params.longwave_correction_c = 3.9;
    CHECK(sol_air_temperature(rec, 0.0, 0.0, 0.04, params) == Approx(30.0 - 3.9).margin(1e-12));

    // Never below dry bulb minus the longwave correction.
    for (double ghi : {0.0, 100.0, 600.0, 1000.0})
        for (double alpha : {0.0, 0.3, 0.9}) {
            rec.ghi_wm2 = ghi;
            const double t = sol_air_temperature(rec, 90.0, alpha, 0.04, params);
            CHECK(t >= 30.0 - params.longwave_correction_c - 1e-12);
            if (ghi * alpha == 0.0) CHECK(t == Approx(30.0 - params.longwave_correction_c).margin(1e-12));
        }
}
