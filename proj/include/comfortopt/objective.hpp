#pragma once

#include <cmath>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "comfortopt/building.hpp"
#include "comfortopt/comfort.hpp"
#include "comfortopt/thermal.hpp"

namespace comfortopt {

struct ZoneWeights {
    std::vector<std::pair<std::string, double>> entries;

    void validate() const {
        double sum = 0.0;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (entries[i].second < 0.0) throw Error("zone weight must be >= 0");
            for (std::size_t j = i + 1; j < entries.size(); ++j)
                if (entries[i].first == entries[j].first)
                    throw Error("duplicate zone in weights: '" + entries[i].first + "'");
            sum += entries[i].second;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw Error("zone weights sum to " + format_full(sum) + ", expected 1");
    }
};

// The published occupied-time coefficients; the toilet carries none.
inline ZoneWeights paper_weights() {
    ZoneWeights w;
    w.entries = {{"main_room", 0.4169}, {"kitchen", 0.3533}, {"bedroom1", 0.1896}, {"bedroom2", 0.0402}};
    return w;
}

enum class ObjectiveMode { Signed, Absolute };
enum class HourFilter { OccupiedOnly, AllHours };

inline const char* to_string(ObjectiveMode m) { return m == ObjectiveMode::Signed ? "signed" : "absolute"; }

struct ZoneMeanPMV {
    double mean_pmv = 0.0;
    double mean_ppd = 0.0;
    long hours = 0;
};

inline ZoneMeanPMV zone_mean_pmv(const ZoneConditionSeries& series, const OccupancySchedule& schedule,
                                 const std::string& zone, const ComfortParams& params,
                                 HourFilter filter = HourFilter::OccupiedOnly) {
    const ZoneHourly& zh = series.zone(zone);
    ZoneMeanPMV out;
    double pmv_sum = 0.0, ppd_sum = 0.0;
    for (std::size_t h = 0; h < zh.air_c.size(); ++h) {
        if (filter == HourFilter::OccupiedOnly) {
            const int how = static_cast<int>((series.start_hour_of_week + h) % OccupancySchedule::kHoursPerWeek);
            if (schedule.count(zone, how) <= 0) continue;
        }
        const PMVResult r = pmv({zh.air_c[h], zh.mrt_c[h], zh.rh_pct[h], zh.vel_ms[h]}, params);
        pmv_sum += r.pmv;
        ppd_sum += r.ppd;
        ++out.hours;
    }
    if (out.hours == 0)
        throw Error("zone '" + zone + "' has no " +
                    (filter == HourFilter::OccupiedOnly ? std::string("occupied") : std::string("")) + " hours to average");
    out.mean_pmv = pmv_sum / out.hours;
    out.mean_ppd = ppd_sum / out.hours;
    return out;
}

// Weighted combination of per-zone means. Signed follows the published
// objective; absolute guards against rewarding overcooling in cold climates.
inline double total_pmv(const std::vector<std::pair<std::string, double>>& zone_means, const ZoneWeights& weights,
                        ObjectiveMode mode) {
    weights.validate();
    double total = 0.0;
    for (const auto& [zone, coeff] : weights.entries) {
        if (coeff == 0.0) continue;
        bool found = false;
        for (const auto& [name, mean] : zone_means) {
            if (name == zone) {
                total += coeff * (mode == ObjectiveMode::Absolute ? std::abs(mean) : mean);
                found = true;
                break;
            }
        }
        if (!found) throw Error("missing zone mean for weighted zone '" + zone + "'");
    }
    return total;
}

struct ObjectiveReport {
    struct Row {
        std::string zone;
        double weight = 0.0;
        long occupied_hours = 0;
        double mean_pmv = 0.0;
        double mean_ppd = 0.0;
    };
    std::vector<Row> rows;
    double total = 0.0;
    ObjectiveMode mode = ObjectiveMode::Signed;

    void write_csv(std::ostream& out) const {
        out << "zone,weight,occupied_hours,mean_pmv,mean_ppd\n";
        long hours = 0;
        for (const Row& r : rows) {
            out << r.zone << ',' << format_full(r.weight) << ',' << r.occupied_hours << ','
                << format_full(r.mean_pmv) << ',' << format_full(r.mean_ppd) << '\n';
            hours += r.occupied_hours;
        }
        out << "TOTAL,1," << hours << ',' << format_full(total) << ",\n";
    }
};

inline ObjectiveReport evaluate_objective(const ZoneConditionSeries& series, const OccupancySchedule& schedule,
                                          const ZoneWeights& weights, const ComfortParams& params,
                                          ObjectiveMode mode = ObjectiveMode::Signed,
                                          HourFilter filter = HourFilter::OccupiedOnly) {
    weights.validate();
    ObjectiveReport report;
    report.mode = mode;
    std::vector<std::pair<std::string, double>> means;
    for (const auto& [zone, coeff] : weights.entries) {
        const ZoneMeanPMV m = zone_mean_pmv(series, schedule, zone, params, filter);
        means.emplace_back(zone, m.mean_pmv);
        report.rows.push_back({zone, coeff, m.hours, m.mean_pmv, m.mean_ppd});
    }
    report.total = total_pmv(means, weights, mode);
    return report;
}

} // namespace comfortopt
