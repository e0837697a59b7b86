#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "comfortopt/common.hpp"

namespace comfortopt {

struct WeatherRecord {
    int hour = 0;           // index from series start
    double dry_bulb_c = 0.0;
    double rh_pct = 0.0;
    double ghi_wm2 = 0.0;   // global horizontal irradiance
    double wind_ms = 0.0;
};

struct WeatherSeries {
    std::vector<WeatherRecord> records;
    double latitude_deg = -21.0; // Reunion by default

    void validate() const {
        if (records.empty()) throw Error("weather series is empty");
        if (records.size() % 24 != 0)
            throw Error("weather series length " + std::to_string(records.size()) + " is not a multiple of 24");
        for (std::size_t i = 0; i < records.size(); ++i) {
            const WeatherRecord& r = records[i];
            if (r.hour != static_cast<int>(i))
                throw Error("non-hourly spacing at record " + std::to_string(i) + " (hour=" + std::to_string(r.hour) + ")");
            if (r.rh_pct < 0.0 || r.rh_pct > 100.0)
                throw Error("relative humidity out of [0, 100] at hour " + std::to_string(r.hour));
            if (r.ghi_wm2 < 0.0) throw Error("negative irradiance at hour " + std::to_string(r.hour));
            if (r.wind_ms < 0.0) throw Error("negative wind speed at hour " + std::to_string(r.hour));
        }
    }

    int days() const { return static_cast<int>(records.size() / 24); }
};

inline constexpr char kWeatherCsvHeader[] = "hour,dry_bulb_c,rh_pct,ghi_wm2,wind_ms";

namespace detail {

inline double parse_number(const std::string& tok, int line, const std::string& origin) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw Error(origin + ":" + std::to_string(line) + ": not a number: '" + tok + "'");
    }
    if (pos != tok.size())
        throw Error(origin + ":" + std::to_string(line) + ": trailing characters in number: '" + tok + "'");
    return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

inline std::string strip(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == '\n' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
    std::size_t b = 0;
    while (b < s.size() && (s[b] == ' ' || s[b] == '\t')) ++b;
    return s.substr(b);
}

} // namespace detail

inline WeatherSeries parse_weather_csv_text(std::string_view text, const std::string& origin) {
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;

    if (!std::getline(in, line)) throw Error(origin + ": empty file");
    ++lineno;
    if (detail::strip(line) != kWeatherCsvHeader)
        throw Error(origin + ":1: expected header '" + std::string(kWeatherCsvHeader) + "'");

    WeatherSeries series;
    int expected_hour = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = detail::strip(line);
        if (stripped.empty()) continue;
        const auto cols = detail::split(stripped, ',');
        if (cols.size() != 5)
            throw Error(origin + ":" + std::to_string(lineno) + ": expected 5 columns, got " + std::to_string(cols.size()));
        WeatherRecord r;
        const double hour = detail::parse_number(cols[0], lineno, origin);
        r.hour = static_cast<int>(hour);
        if (hour != r.hour || r.hour != expected_hour)
            throw Error(origin + ":" + std::to_string(lineno) + ": non-hourly spacing (expected hour " +
                        std::to_string(expected_hour) + ", got " + cols[0] + ")");
        r.dry_bulb_c = detail::parse_number(cols[1], lineno, origin);
        r.rh_pct = detail::parse_number(cols[2], lineno, origin);
        if (r.rh_pct < 0.0 || r.rh_pct > 100.0)
            throw Error(origin + ":" + std::to_string(lineno) + ": relative humidity " + cols[2] + " outside [0, 100]");
        r.ghi_wm2 = detail::parse_number(cols[3], lineno, origin);
        if (r.ghi_wm2 < 0.0)
            throw Error(origin + ":" + std::to_string(lineno) + ": negative irradiance");
        r.wind_ms = detail::parse_number(cols[4], lineno, origin);
        if (r.wind_ms < 0.0)
            throw Error(origin + ":" + std::to_string(lineno) + ": negative wind speed");
        series.records.push_back(r);
        ++expected_hour;
    }
    series.validate();
    return series;
}

inline WeatherSeries parse_weather_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open weather file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_weather_csv_text(buf.str(), path.string());
}

inline void write_weather_csv(const WeatherSeries& series, std::ostream& out) {
    out << kWeatherCsvHeader << '\n';
    for (const WeatherRecord& r : series.records) {
        out << r.hour << ',' << format_full(r.dry_bulb_c) << ',' << format_full(r.rh_pct) << ','
            << format_full(r.ghi_wm2) << ',' << format_full(r.wind_ms) << '\n';
    }
}

// Synthetic Reunion-like forcing: a seasonal cycle, warm tropical nights
// with a daytime temperature pulse (peak around 13:00), a solar sine from
// 06:00 to 18:00, and seeded per-day perturbations. Over a full year the
// mean dry bulb sits between 26 and 27 degC, daily maxima mostly fall in
// 29..34 degC and RH stays inside 70..90 %. Same (days, seed) gives a
// bit-identical series.
inline WeatherSeries synthetic_tropical(int days, std::uint64_t seed) {
    if (days < 1) throw Error("synthetic weather needs days >= 1");

    constexpr double kPi = 3.14159265358979323846;
    constexpr double kNightLevelC = 25.3;  // annual-mean nighttime level
    constexpr double kAnnualAmpC = 1.2;
    constexpr int kWarmestDay = 40;        // southern-hemisphere summer
    constexpr double kDayPulseC = 4.6;     // daytime rise above the night level

    // Raw 53-bit uniforms from a fixed-layout generator keep the series
    // reproducible independently of standard-library distribution details.
    std::uint64_t state = seed ? seed : 0x9e3779b97f4a7c15ULL;
    auto next_u01 = [&state]() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return static_cast<double>(state >> 11) * 0x1.0p-53;
    };

    WeatherSeries series;
    series.records.reserve(static_cast<std::size_t>(days) * 24);
    for (int d = 0; d < days; ++d) {
        const double season = std::cos(2.0 * kPi * (d - kWarmestDay) / 365.0);
        const double pulse_noise = (next_u01() * 2.0 - 1.0) * 0.5;
        const double rh_noise = (next_u01() * 2.0 - 1.0) * 2.0;
        const double ghi_noise = (next_u01() * 2.0 - 1.0) * 50.0;
        const double wind_noise = (next_u01() * 2.0 - 1.0) * 0.5;

        const double night_level = kNightLevelC + kAnnualAmpC * season;
        const double day_pulse = kDayPulseC + pulse_noise;
        const double ghi_peak = 1000.0 + 100.0 * season + ghi_noise;

        for (int h = 0; h < 24; ++h) {
            // Daytime pulse between 08:00 and 18:00, peaking at 13:00.
            const double lift = (h >= 8 && h <= 18) ? std::sin(kPi * (h - 8) / 10.0) : 0.0;
            WeatherRecord r;
            r.hour = d * 24 + h;
            r.dry_bulb_c = night_level + day_pulse * lift;
            r.rh_pct = 83.0 - 9.0 * lift + rh_noise;
            const double sun = std::sin(kPi * (h - 6) / 12.0);
            r.ghi_wm2 = (h >= 6 && h <= 18 && sun > 0.0) ? ghi_peak * sun : 0.0;
            r.wind_ms = 3.0 + 1.0 * std::sin(2.0 * kPi * (h - 10) / 24.0) + wind_noise;
            series.records.push_back(r);
        }
    }
    series.validate();
    return series;
}

struct SolAirParams {
    // Incident irradiance on a vertical wall as a fraction of global
    // horizontal; no solar-geometry engine, so the azimuth does not enter.
    double incident_factor = 0.5;
    double longwave_correction_c = 0.0; // 0 for vertical surfaces
};

inline double sol_air_temperature(const WeatherRecord& record, double /*azimuth_deg*/, double solar_absorptance,
                                  double exterior_film_m2kw, const SolAirParams& params = {}) {
    const double incident = params.incident_factor * record.ghi_wm2;
    return record.dry_bulb_c + solar_absorptance * incident * exterior_film_m2kw - params.longwave_correction_c;
}

} // namespace comfortopt
