#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "comfortopt/materials.hpp"

namespace comfortopt {

struct Surface {
    std::string assembly;   // key into Building::assemblies
    double area_m2 = 0.0;
    double azimuth_deg = 0.0;
};

struct Zone {
    std::string name;
    double floor_area_m2 = 0.0;
    double volume_m3 = 0.0;
    double infiltration_ach = 0.0;
    std::vector<Surface> surfaces;
    int max_occupants = 0;

    void validate() const {
        if (floor_area_m2 <= 0.0) throw Error("zone '" + name + "': floor area must be > 0");
        if (volume_m3 <= 0.0) throw Error("zone '" + name + "': volume must be > 0");
        if (infiltration_ach < 0.0) throw Error("zone '" + name + "': infiltration must be >= 0");
        for (const Surface& s : surfaces) {
            if (s.area_m2 <= 0.0) throw Error("zone '" + name + "': surface area must be > 0");
            if (s.azimuth_deg < 0.0 || s.azimuth_deg >= 360.0)
                throw Error("zone '" + name + "': azimuth must be in [0, 360)");
        }
        if (max_occupants < 0) throw Error("zone '" + name + "': max occupants must be >= 0");
    }
};

// Occupant counts on a fixed 7x24 weekly grid (day 0 = Monday). The grid is
// total: absent zones simply read as zero.
class OccupancySchedule {
public:
    static constexpr int kHoursPerWeek = 7 * 24;

    double sensible_w_per_occupant = 70.0;
    double latent_w_per_occupant = 45.0;

    void set(const std::string& zone, int day_first, int day_last, int hour_first, int hour_last, int count) {
        if (day_first < 0 || day_last > 6 || day_first > day_last)
            throw Error("schedule: day range " + std::to_string(day_first) + ".." + std::to_string(day_last) + " invalid");
        if (hour_first < 0 || hour_last > 23 || hour_first > hour_last)
            throw Error("schedule: hour range " + std::to_string(hour_first) + ".." + std::to_string(hour_last) + " invalid");
        if (count < 0) throw Error("schedule: occupant count must be >= 0");
        auto& grid = grids_[zone];
        for (int d = day_first; d <= day_last; ++d)
            for (int h = hour_first; h <= hour_last; ++h)
                grid[d * 24 + h] = count;
    }

    int count(const std::string& zone, int hour_of_week) const {
        if (hour_of_week < 0 || hour_of_week >= kHoursPerWeek)
            throw Error("hour of week " + std::to_string(hour_of_week) + " out of range");
        auto it = grids_.find(zone);
        return it == grids_.end() ? 0 : it->second[hour_of_week];
    }

    long person_hours(const std::string& zone) const {
        auto it = grids_.find(zone);
        if (it == grids_.end()) return 0;
        long total = 0;
        for (int c : it->second) total += c;
        return total;
    }

    long total_person_hours() const {
        long total = 0;
        for (const auto& [zone, grid] : grids_)
            for (int c : grid) total += c;
        return total;
    }

    const std::map<std::string, std::array<int, kHoursPerWeek>>& grids() const { return grids_; }

private:
    std::map<std::string, std::array<int, kHoursPerWeek>> grids_;
};

struct Building {
    std::map<std::string, WallAssembly> assemblies;
    std::vector<Zone> zones;
    OccupancySchedule schedule;

    const Zone& zone(const std::string& name) const {
        for (const Zone& z : zones)
            if (z.name == name) return z;
        throw Error("unknown zone: '" + name + "'");
    }

    void validate() const {
        if (zones.empty()) throw Error("building has no zones");
        for (std::size_t i = 0; i < zones.size(); ++i) {
            zones[i].validate();
            for (std::size_t j = i + 1; j < zones.size(); ++j)
                if (zones[i].name == zones[j].name)
                    throw Error("duplicate zone name: '" + zones[i].name + "'");
            for (const Surface& s : zones[i].surfaces)
                if (!assemblies.count(s.assembly))
                    throw Error("zone '" + zones[i].name + "' references unknown assembly '" + s.assembly + "'");
        }
        for (const auto& [name, a] : assemblies) a.validate();
    }
};

// The five-zone 162 m2 Reunion house. Zone splits, wall areas and the weekly
// grid are model choices; the grid follows the paper's family narrative
// (parents out 8:00-18:30 with a 12:00-13:30 lunch at home, children at
// school 8:00-17:30, everyone home on weekends, half hours snapped up) and
// is calibrated so each zone's share of weekly person-hours lands within
// 0.01 of the objective weights. The toilet participates in the thermal
// model but carries no scheduled occupancy.
inline Building default_reunion_house() {
    Building b;
    b.assemblies["exterior_wall"] = baseline_reunion_wall();

    constexpr double kHeight = 2.7;
    auto zone = [](std::string name, double area, std::vector<Surface> surfaces, int max_occ) {
        Zone z;
        z.name = std::move(name);
        z.floor_area_m2 = area;
        z.volume_m3 = area * kHeight;
        z.infiltration_ach = 0.5;
        z.surfaces = std::move(surfaces);
        z.max_occupants = max_occ;
        return z;
    };
    // The kitchen occupies an exposed corner with three free sides. The main
    // room opens onto the enclosed varangue that wraps the street side of
    // the house, so it exchanges with outside through infiltration only and
    // carries no direct exterior opaque wall.
    b.zones.push_back(zone("main_room", 60.0, {}, 4));
    b.zones.push_back(zone("kitchen", 30.0,
                           {{"exterior_wall", 16.2, 0.0}, {"exterior_wall", 13.5, 90.0}, {"exterior_wall", 16.2, 180.0}},
                           4));
    b.zones.push_back(zone("bedroom1", 25.0, {{"exterior_wall", 16.2, 90.0}}, 2));
    b.zones.push_back(zone("bedroom2", 25.0, {{"exterior_wall", 18.9, 0.0}}, 2));
    b.zones.push_back(zone("toilet", 22.0, {{"exterior_wall", 5.4, 270.0}}, 1));

    OccupancySchedule& s = b.schedule;
    // Weekdays (Mon..Fri).
    s.set("bedroom1", 0, 4, 0, 5, 2);    // parents overnight
    s.set("main_room", 0, 4, 0, 6, 2);   // children overnight
    s.set("kitchen", 0, 4, 6, 6, 2);     // parents up first
    s.set("kitchen", 0, 4, 7, 7, 4);     // breakfast
    s.set("kitchen", 0, 4, 12, 13, 2);   // parents' lunch break
    s.set("bedroom2", 0, 4, 18, 18, 2);  // children back from school
    s.set("kitchen", 0, 4, 19, 20, 4);   // dinner
    s.set("main_room", 0, 4, 21, 23, 4);
    // Saturday: long breakfast, the family spreads around the house through
    // the afternoon (parent siesta, children in their room), dinner in the
    // kitchen, evening together in the main room.
    s.set("bedroom1", 5, 5, 0, 5, 2);
    s.set("main_room", 5, 5, 0, 5, 2);
    s.set("kitchen", 5, 5, 6, 8, 4);
    s.set("kitchen", 5, 5, 9, 12, 3);
    s.set("main_room", 5, 5, 9, 12, 1);
    s.set("kitchen", 5, 5, 13, 16, 2);
    s.set("bedroom1", 5, 5, 13, 16, 1);  // siesta
    s.set("bedroom2", 5, 5, 13, 16, 1);
    s.set("kitchen", 5, 5, 17, 20, 2);
    s.set("main_room", 5, 5, 17, 20, 2);
    s.set("main_room", 5, 5, 21, 23, 4);
    // Sunday: as Saturday with small drifts in the early afternoon.
    s.set("bedroom1", 6, 6, 0, 5, 2);
    s.set("main_room", 6, 6, 0, 5, 2);
    s.set("kitchen", 6, 6, 6, 8, 4);
    s.set("kitchen", 6, 6, 9, 11, 3);
    s.set("main_room", 6, 6, 9, 11, 1);
    s.set("kitchen", 6, 6, 12, 12, 3);
    s.set("bedroom2", 6, 6, 12, 12, 1);
    s.set("kitchen", 6, 6, 13, 16, 2);
    s.set("bedroom1", 6, 6, 13, 16, 1);
    s.set("bedroom2", 6, 6, 13, 16, 1);
    s.set("kitchen", 6, 6, 17, 20, 2);
    s.set("main_room", 6, 6, 17, 20, 2);
    s.set("main_room", 6, 6, 21, 23, 4);

    b.validate();
    return b;
}

// Share of weekly person-hours spent in one zone; shares over all zones
// sum to 1 by construction.
inline double occupied_fraction(const Building& b, const std::string& zone_name) {
    b.zone(zone_name); // existence check
    const long total = b.schedule.total_person_hours();
    if (total == 0) throw Error("schedule has no occupancy at all");
    return static_cast<double>(b.schedule.person_hours(zone_name)) / static_cast<double>(total);
}

inline double internal_gains_w(const Building& b, const std::string& zone_name, int hour_of_week) {
    b.zone(zone_name);
    return b.schedule.count(zone_name, hour_of_week) * b.schedule.sensible_w_per_occupant;
}

inline double latent_gains_w(const Building& b, const std::string& zone_name, int hour_of_week) {
    b.zone(zone_name);
    return b.schedule.count(zone_name, hour_of_week) * b.schedule.latent_w_per_occupant;
}

} // namespace comfortopt
