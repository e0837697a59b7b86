#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "comfortopt/building.hpp"
#include "comfortopt/materials.hpp"
#include "comfortopt/weather.hpp"

namespace comfortopt {

inline constexpr double kAirDensityKgM3 = 1.2;
inline constexpr double kAirSpecificHeatJKgK = 1005.0;

struct SimConfig {
    double timestep_s = 3600.0;   // effective step divides the hour exactly
    int nodes_per_layer = 4;
    int warmup_days = 7;
    double indoor_air_velocity_ms = 0.15;
    std::optional<double> initial_temperature_c; // default: first weather record
    SolAirParams sol_air;

    void validate() const {
        if (!(timestep_s > 0.0) || timestep_s > 3600.0) throw Error("timestep must be in (0, 3600] s");
        if (nodes_per_layer < 2) throw Error("nodes_per_layer must be >= 2");
        if (warmup_days < 0) throw Error("warmup_days must be >= 0");
        if (indoor_air_velocity_ms < 0.0) throw Error("indoor air velocity must be >= 0");
    }
};

// 1-D cell-centred finite-volume grid through a wall assembly. Cell widths
// partition the total thickness exactly and interface conductances combine
// the adjacent half-cells in series, so the steady flux reproduces the
// series resistance of the stack for any node count.
struct DiscretizedWall {
    std::vector<double> temp_c;        // one per node (cell centre)
    std::vector<double> width_m;       // control-volume widths
    std::vector<double> capacity;      // rho*c*width per node, J/(m2 K)
    std::vector<double> conductance;   // size n+1: [0] sol-air -> node 0 (incl.
                                       // exterior film), [n] node n-1 -> zone
                                       // air (incl. interior film), W/(m2 K)
    double interior_film_m2kw = 0.0;
    double inner_half_resistance = 0.0; // innermost half cell, m2K/W

    std::size_t nodes() const { return temp_c.size(); }

    // Inside surface temperature consistent with the current flux into the
    // zone; used for the mean radiant temperature.
    double inside_surface_c(double zone_air_c) const {
        const double q = conductance.back() * (temp_c.back() - zone_air_c);
        return temp_c.back() - q * inner_half_resistance;
    }
};

inline DiscretizedWall discretize(const WallAssembly& assembly, int nodes_per_layer, double initial_temp_c = 20.0) {
    assembly.validate();
    if (nodes_per_layer < 2) throw Error("nodes_per_layer must be >= 2");

    DiscretizedWall w;
    std::vector<double> conductivity;
    for (const Layer& layer : assembly.layers) {
        const double width = layer.thickness_m / nodes_per_layer;
        for (int i = 0; i < nodes_per_layer; ++i) {
            w.width_m.push_back(width);
            w.capacity.push_back(layer.material.density_kg_m3 * layer.material.specific_heat_j_kgk * width);
            conductivity.push_back(layer.material.conductivity_w_mk);
            w.temp_c.push_back(initial_temp_c);
        }
    }

    const std::size_t n = w.temp_c.size();
    w.conductance.resize(n + 1);
    w.conductance[0] = 1.0 / (assembly.exterior_film_m2kw + 0.5 * w.width_m[0] / conductivity[0]);
    for (std::size_t i = 1; i < n; ++i)
        w.conductance[i] = 1.0 / (0.5 * w.width_m[i - 1] / conductivity[i - 1] + 0.5 * w.width_m[i] / conductivity[i]);
    w.inner_half_resistance = 0.5 * w.width_m[n - 1] / conductivity[n - 1];
    w.conductance[n] = 1.0 / (assembly.interior_film_m2kw + w.inner_half_resistance);
    w.interior_film_m2kw = assembly.interior_film_m2kw;
    return w;
}

namespace detail {

// Thomas algorithm; diag/rhs are overwritten.
inline void solve_tridiagonal(std::vector<double>& lower, std::vector<double>& diag, std::vector<double>& upper,
                              std::vector<double>& rhs, std::vector<double>& out) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double m = lower[i] / diag[i - 1];
        diag[i] -= m * upper[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    out.resize(n);
    out[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        out[i] = (rhs[i] - upper[i] * out[i + 1]) / diag[i];
}

// Backward-Euler wall step split against the (possibly unknown) zone air
// temperature: T_new = base + response * T_zone.
struct WallStepSolution {
    std::vector<double> base;
    std::vector<double> response;
};

inline WallStepSolution solve_wall_step(const DiscretizedWall& w, double sol_air_c, double dt_s) {
    const std::size_t n = w.nodes();
    std::vector<double> lower(n), diag(n), upper(n), rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double c = w.capacity[i] / dt_s;
        diag[i] = c + w.conductance[i] + w.conductance[i + 1];
        lower[i] = i > 0 ? -w.conductance[i] : 0.0;
        upper[i] = i + 1 < n ? -w.conductance[i + 1] : 0.0;
        rhs[i] = c * w.temp_c[i];
    }
    rhs[0] += w.conductance[0] * sol_air_c;

    WallStepSolution s;
    {
        auto lo = lower, di = diag, up = upper, r = rhs;
        solve_tridiagonal(lo, di, up, r, s.base);
    }
    {
        auto lo = lower, di = diag, up = upper;
        std::vector<double> r(n, 0.0);
        r[n - 1] = w.conductance[n];
        solve_tridiagonal(lo, di, up, r, s.response);
    }
    return s;
}

} // namespace detail

// One implicit step with both boundary temperatures known. Returns the heat
// flux into the zone, W/m2 (positive = heating the zone).
inline double step_wall(DiscretizedWall& w, double sol_air_c, double zone_air_c, double dt_s) {
    if (!(dt_s > 0.0)) throw Error("wall step needs dt > 0");
    const detail::WallStepSolution s = detail::solve_wall_step(w, sol_air_c, dt_s);
    for (std::size_t i = 0; i < w.nodes(); ++i)
        w.temp_c[i] = s.base[i] + s.response[i] * zone_air_c;
    return w.conductance.back() * (w.temp_c.back() - zone_air_c);
}

// Lumped zone-air balance, implicit in the infiltration coupling; surface
// fluxes and gains enter as given flows.
inline double zone_balance(const Zone& zone, const std::vector<double>& surface_flux_w, double outdoor_c,
                           double gains_w, double air_c, double dt_s) {
    if (!(dt_s > 0.0)) throw Error("zone balance needs dt > 0");
    const double cap = kAirDensityKgM3 * kAirSpecificHeatJKgK * zone.volume_m3; // J/K
    const double h_inf = zone.infiltration_ach / 3600.0 * zone.volume_m3 * kAirDensityKgM3 * kAirSpecificHeatJKgK;
    double flows = gains_w;
    for (double q : surface_flux_w) flows += q;
    return (cap / dt_s * air_c + flows + h_inf * outdoor_c) / (cap / dt_s + h_inf);
}

struct ZoneHourly {
    std::vector<double> air_c, mrt_c, rh_pct, vel_ms;
};

struct ZoneConditionSeries {
    std::vector<std::string> zones; // building order
    std::vector<ZoneHourly> data;   // parallel to zones
    int start_hour_of_week = 0;     // phase of hour 0 within the weekly grid

    std::size_t hours() const { return data.empty() ? 0 : data.front().air_c.size(); }

    const ZoneHourly& zone(const std::string& name) const {
        for (std::size_t i = 0; i < zones.size(); ++i)
            if (zones[i] == name) return data[i];
        throw Error("unknown zone in condition series: '" + name + "'");
    }

    void write_csv(std::ostream& out) const {
        out << "hour,zone,air_c,mrt_c,rh_pct,vel_ms\n";
        for (std::size_t h = 0; h < hours(); ++h)
            for (std::size_t z = 0; z < zones.size(); ++z)
                out << h << ',' << zones[z] << ',' << format_full(data[z].air_c[h]) << ','
                    << format_full(data[z].mrt_c[h]) << ',' << format_full(data[z].rh_pct[h]) << ','
                    << format_full(data[z].vel_ms[h]) << '\n';
    }
};

struct SimDiagnostics {
    double max_rel_energy_residual = 0.0;
};

// Free-running multi-zone march. Each zone couples its walls and air node in
// one backward-Euler solve per step (Schur complement on the air node), so
// the scheme is unconditionally stable for any dt <= 3600 s. Indoor RH is
// outdoor RH passed through; air velocity is the configured constant;
// partitions, roof and floor are adiabatic.
inline ZoneConditionSeries simulate(const Building& building, const WeatherSeries& weather, const SimConfig& config,
                                    SimDiagnostics* diagnostics = nullptr) {
    building.validate();
    weather.validate();
    config.validate();

    const int total_hours = static_cast<int>(weather.records.size());
    const int warmup_hours = config.warmup_days * 24;
    if (warmup_hours >= total_hours)
        throw Error("warmup (" + std::to_string(warmup_hours) + " h) consumes the whole weather series (" +
                    std::to_string(total_hours) + " h)");

    const int substeps = static_cast<int>(std::ceil(3600.0 / config.timestep_s - 1e-9));
    const double dt = 3600.0 / substeps;

    const double init_c = config.initial_temperature_c ? *config.initial_temperature_c
                                                       : weather.records.front().dry_bulb_c;

    struct ZoneState {
        const Zone* zone = nullptr;
        std::vector<DiscretizedWall> walls;
        std::vector<double> areas;
        std::vector<double> absorptance;
        std::vector<double> azimuth;
        double air_c = 0.0;
        double h_inf = 0.0; // W/K
        double air_capacity = 0.0; // J/K
    };

    std::vector<ZoneState> states;
    states.reserve(building.zones.size());
    for (const Zone& z : building.zones) {
        ZoneState st;
        st.zone = &z;
        for (const Surface& s : z.surfaces) {
            const WallAssembly& a = building.assemblies.at(s.assembly);
            st.walls.push_back(discretize(a, config.nodes_per_layer, init_c));
            st.areas.push_back(s.area_m2);
            st.absorptance.push_back(a.solar_absorptance);
            st.azimuth.push_back(s.azimuth_deg);
        }
        st.air_c = init_c;
        st.air_capacity = kAirDensityKgM3 * kAirSpecificHeatJKgK * z.volume_m3;
        st.h_inf = z.infiltration_ach / 3600.0 * z.volume_m3 * kAirDensityKgM3 * kAirSpecificHeatJKgK;
        states.push_back(std::move(st));
    }

    // Exterior film per assembly is baked into the wall conductances; fetch
    // it again per surface for the sol-air computation.
    std::vector<std::vector<double>> ext_films(states.size());
    for (std::size_t zi = 0; zi < states.size(); ++zi)
        for (const Surface& s : states[zi].zone->surfaces)
            ext_films[zi].push_back(building.assemblies.at(s.assembly).exterior_film_m2kw);

    ZoneConditionSeries out;
    out.start_hour_of_week = warmup_hours % OccupancySchedule::kHoursPerWeek;
    for (const Zone& z : building.zones) out.zones.push_back(z.name);
    out.data.resize(building.zones.size());

    double max_residual = 0.0;

    for (int h = 0; h < total_hours; ++h) {
        const WeatherRecord& rec = weather.records[h];
        const int hour_of_week = h % OccupancySchedule::kHoursPerWeek;

        for (int sub = 0; sub < substeps; ++sub) {
            for (ZoneState& st : states) {
                const std::size_t zi = static_cast<std::size_t>(&st - states.data());
                const double gains = building.schedule.count(st.zone->name, hour_of_week) *
                                     building.schedule.sensible_w_per_occupant;

                std::vector<detail::WallStepSolution> sols;
                sols.reserve(st.walls.size());
                double coupling = 0.0, known = 0.0;
                for (std::size_t wi = 0; wi < st.walls.size(); ++wi) {
                    const double t_sa = sol_air_temperature(rec, st.azimuth[wi], st.absorptance[wi],
                                                            ext_films[zi][wi], config.sol_air);
                    sols.push_back(detail::solve_wall_step(st.walls[wi], t_sa, dt));
                    const double g = st.walls[wi].conductance.back() * st.areas[wi];
                    coupling += g * (1.0 - sols.back().response.back());
                    known += g * sols.back().base.back();
                }

                const double c_dt = st.air_capacity / dt;
                const double t_old = st.air_c;
                const double t_new = (c_dt * t_old + known + gains + st.h_inf * rec.dry_bulb_c) /
                                     (c_dt + coupling + st.h_inf);

                double flow_sum = gains + st.h_inf * (rec.dry_bulb_c - t_new);
                double max_flow = std::abs(gains);
                for (std::size_t wi = 0; wi < st.walls.size(); ++wi) {
                    DiscretizedWall& w = st.walls[wi];
                    for (std::size_t i = 0; i < w.nodes(); ++i)
                        w.temp_c[i] = sols[wi].base[i] + sols[wi].response[i] * t_new;
                    const double q = w.conductance.back() * (w.temp_c.back() - t_new) * st.areas[wi];
                    flow_sum += q;
                    if (std::abs(q) > max_flow) max_flow = std::abs(q);
                }
                const double h_flow = std::abs(st.h_inf * (rec.dry_bulb_c - t_new));
                if (h_flow > max_flow) max_flow = h_flow;

                const double storage = c_dt * (t_new - t_old);
                if (std::abs(storage) > max_flow) max_flow = std::abs(storage);
                // Floor keeps the relative residual meaningful when the zone
                // sits at equilibrium and every flow is numerically zero.
                const double res = std::abs(storage - flow_sum) / std::max(max_flow, 1e-2);
                if (res > max_residual) max_residual = res;

                st.air_c = t_new;
                if (!std::isfinite(st.air_c))
                    throw Error("simulation produced a non-finite zone temperature at hour " + std::to_string(h));
            }
        }

        if (h >= warmup_hours) {
            for (std::size_t zi = 0; zi < states.size(); ++zi) {
                const ZoneState& st = states[zi];
                // Area-weighted inside surface temperatures. Adiabatic
                // enclosure surfaces (floor, ceiling, partitions) carry no
                // flux and sit at the zone air temperature; they enter the
                // weighting with their areas so a small exterior wall does
                // not dominate the radiant field.
                double area = 2.0 * st.zone->floor_area_m2;
                double weighted = area * st.air_c;
                for (std::size_t wi = 0; wi < st.walls.size(); ++wi) {
                    area += st.areas[wi];
                    weighted += st.areas[wi] * st.walls[wi].inside_surface_c(st.air_c);
                }
                const double mrt = area > 0.0 ? weighted / area : st.air_c;
                out.data[zi].air_c.push_back(st.air_c);
                out.data[zi].mrt_c.push_back(mrt);
                out.data[zi].rh_pct.push_back(rec.rh_pct);
                out.data[zi].vel_ms.push_back(config.indoor_air_velocity_ms);
            }
        }
    }

    if (diagnostics) diagnostics->max_rel_energy_residual = max_residual;
    return out;
}

} // namespace comfortopt
