#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "comfortopt/bridge.hpp"
#include "comfortopt/building.hpp"

namespace comfortopt {

// Flat sectioned key-value text: `[section]` headers, `key = value` lines,
// `#` or `;` comments. Keys may repeat within a section (order preserved).
struct ConfigEntry {
    std::string key;
    std::string value;
    int line = 0;
};

struct ConfigSection {
    std::string kind;  // first word of the header
    std::string name;  // remainder, may be empty
    int line = 0;
    std::vector<ConfigEntry> entries;

    const std::string* find(const std::string& key) const {
        for (const ConfigEntry& e : entries)
            if (e.key == key) return &e.value;
        return nullptr;
    }

    std::string require(const std::string& key, const std::string& origin) const {
        if (const std::string* v = find(key)) return *v;
        throw Error(origin + ":" + std::to_string(line) + ": section [" + kind + (name.empty() ? "" : " " + name) +
                    "] is missing key '" + key + "'");
    }
};

namespace detail {

inline std::string config_strip(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' || s[e - 1] == '\n')) --e;
    return s.substr(b, e - b);
}

inline double config_number(const std::string& v, int line, const std::string& origin) {
    std::size_t pos = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw Error(origin + ":" + std::to_string(line) + ": not a number: '" + v + "'");
    }
    if (pos != v.size()) throw Error(origin + ":" + std::to_string(line) + ": trailing characters in '" + v + "'");
    return out;
}

inline std::vector<std::string> config_split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(config_strip(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(config_strip(cur));
    return out;
}

} // namespace detail

inline std::vector<ConfigSection> parse_config_text(const std::string& text, const std::string& origin) {
    std::vector<ConfigSection> sections;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = detail::config_strip(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw Error(origin + ":" + std::to_string(lineno) + ": unterminated section header");
            const std::string header = detail::config_strip(line.substr(1, line.size() - 2));
            if (header.empty()) throw Error(origin + ":" + std::to_string(lineno) + ": empty section header");
            ConfigSection sec;
            sec.line = lineno;
            const std::size_t sp = header.find(' ');
            sec.kind = header.substr(0, sp);
            if (sp != std::string::npos) sec.name = detail::config_strip(header.substr(sp + 1));
            sections.push_back(std::move(sec));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(origin + ":" + std::to_string(lineno) + ": expected 'key = value' or '[section]'");
        if (sections.empty())
            throw Error(origin + ":" + std::to_string(lineno) + ": key outside any section");
        ConfigEntry e;
        e.key = detail::config_strip(line.substr(0, eq));
        e.value = detail::config_strip(line.substr(eq + 1));
        e.line = lineno;
        if (e.key.empty()) throw Error(origin + ":" + std::to_string(lineno) + ": empty key");
        sections.back().entries.push_back(std::move(e));
    }
    return sections;
}

namespace detail {

inline int day_index(const std::string& token, int line, const std::string& origin) {
    static const std::map<std::string, int> days = {{"mon", 0}, {"tue", 1}, {"wed", 2}, {"thu", 3},
                                                    {"fri", 4}, {"sat", 5}, {"sun", 6}};
    auto it = days.find(token);
    if (it == days.end()) throw Error(origin + ":" + std::to_string(line) + ": unknown day '" + token + "'");
    return it->second;
}

} // namespace detail

// Building file schema:
//   [material <name>]   conductivity / density / specific_heat
//   [assembly <name>]   layers = mat:thickness, ... (outside -> inside)
//                       exterior_film / interior_film / solar_absorptance
//   [zone <name>]       floor_area / volume / infiltration_ach /
//                       max_occupants / surfaces = assembly:area:azimuth, ...
//   [schedule]          sensible_per_occupant / latent_per_occupant
//                       set = <zone> <days> <hours> <count>
//                       (days: mon-fri, sat, all; hours: 0-6, 18)
inline Building load_building_config(const std::string& text, const std::string& origin) {
    Building b;
    std::map<std::string, Material> materials;

    for (const ConfigSection& sec : parse_config_text(text, origin)) {
        const auto num = [&](const std::string& key) {
            return detail::config_number(sec.require(key, origin), sec.line, origin);
        };
        if (sec.kind == "material") {
            if (sec.name.empty()) throw Error(origin + ":" + std::to_string(sec.line) + ": material needs a name");
            Material m{sec.name, num("conductivity"), num("density"), num("specific_heat")};
            m.validate();
            materials[m.name] = m;
        } else if (sec.kind == "assembly") {
            if (sec.name.empty()) throw Error(origin + ":" + std::to_string(sec.line) + ": assembly needs a name");
            WallAssembly a;
            for (const std::string& part : detail::config_split(sec.require("layers", origin), ',')) {
                const auto bits = detail::config_split(part, ':');
                if (bits.size() != 2)
                    throw Error(origin + ":" + std::to_string(sec.line) + ": layer '" + part + "' is not mat:thickness");
                auto it = materials.find(bits[0]);
                if (it == materials.end())
                    throw Error(origin + ":" + std::to_string(sec.line) + ": unknown material '" + bits[0] + "'");
                a.layers.push_back({it->second, detail::config_number(bits[1], sec.line, origin)});
            }
            if (const std::string* v = sec.find("exterior_film")) a.exterior_film_m2kw = detail::config_number(*v, sec.line, origin);
            if (const std::string* v = sec.find("interior_film")) a.interior_film_m2kw = detail::config_number(*v, sec.line, origin);
            if (const std::string* v = sec.find("solar_absorptance")) a.solar_absorptance = detail::config_number(*v, sec.line, origin);
            a.validate();
            b.assemblies[sec.name] = a;
        } else if (sec.kind == "zone") {
            if (sec.name.empty()) throw Error(origin + ":" + std::to_string(sec.line) + ": zone needs a name");
            Zone z;
            z.name = sec.name;
            z.floor_area_m2 = num("floor_area");
            z.volume_m3 = num("volume");
            z.infiltration_ach = num("infiltration_ach");
            z.max_occupants = static_cast<int>(num("max_occupants"));
            // Zones without exterior exposure (buffered rooms) simply omit
            // the surfaces key.
            if (const std::string* v = sec.find("surfaces"); v && !v->empty()) {
                for (const std::string& part : detail::config_split(*v, ',')) {
                    const auto bits = detail::config_split(part, ':');
                    if (bits.size() != 3)
                        throw Error(origin + ":" + std::to_string(sec.line) + ": surface '" + part +
                                    "' is not assembly:area:azimuth");
                    z.surfaces.push_back({bits[0], detail::config_number(bits[1], sec.line, origin),
                                          detail::config_number(bits[2], sec.line, origin)});
                }
            }
            b.zones.push_back(std::move(z));
        } else if (sec.kind == "schedule") {
            for (const ConfigEntry& e : sec.entries) {
                if (e.key == "sensible_per_occupant") {
                    b.schedule.sensible_w_per_occupant = detail::config_number(e.value, e.line, origin);
                } else if (e.key == "latent_per_occupant") {
                    b.schedule.latent_w_per_occupant = detail::config_number(e.value, e.line, origin);
                } else if (e.key == "set") {
                    std::istringstream parts(e.value);
                    std::string zone, days, hours, count;
                    if (!(parts >> zone >> days >> hours >> count))
                        throw Error(origin + ":" + std::to_string(e.line) + ": set needs '<zone> <days> <hours> <count>'");
                    int d0 = 0, d1 = 6;
                    if (days != "all") {
                        const auto dr = detail::config_split(days, '-');
                        d0 = detail::day_index(dr[0], e.line, origin);
                        d1 = dr.size() > 1 ? detail::day_index(dr[1], e.line, origin) : d0;
                    }
                    const auto hr = detail::config_split(hours, '-');
                    const int h0 = static_cast<int>(detail::config_number(hr[0], e.line, origin));
                    const int h1 = hr.size() > 1 ? static_cast<int>(detail::config_number(hr[1], e.line, origin)) : h0;
                    b.schedule.set(zone, d0, d1, h0, h1, static_cast<int>(detail::config_number(count, e.line, origin)));
                } else {
                    throw Error(origin + ":" + std::to_string(e.line) + ": unknown schedule key '" + e.key + "'");
                }
            }
        } else {
            throw Error(origin + ":" + std::to_string(sec.line) + ": unknown section kind '" + sec.kind + "'");
        }
    }
    b.validate();
    return b;
}

inline Building load_building_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open building file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_building_config(buf.str(), path.string());
}

inline std::string write_building_config(const Building& b) {
    std::ostringstream out;
    std::map<std::string, Material> materials;
    for (const auto& [name, a] : b.assemblies)
        for (const Layer& l : a.layers) materials[l.material.name] = l.material;

    for (const auto& [name, m] : materials) {
        out << "[material " << name << "]\n";
        out << "conductivity = " << format_full(m.conductivity_w_mk) << '\n';
        out << "density = " << format_full(m.density_kg_m3) << '\n';
        out << "specific_heat = " << format_full(m.specific_heat_j_kgk) << "\n\n";
    }
    for (const auto& [name, a] : b.assemblies) {
        out << "[assembly " << name << "]\n";
        out << "layers = ";
        for (std::size_t i = 0; i < a.layers.size(); ++i) {
            if (i) out << ", ";
            out << a.layers[i].material.name << ':' << format_full(a.layers[i].thickness_m);
        }
        out << '\n';
        out << "exterior_film = " << format_full(a.exterior_film_m2kw) << '\n';
        out << "interior_film = " << format_full(a.interior_film_m2kw) << '\n';
        out << "solar_absorptance = " << format_full(a.solar_absorptance) << "\n\n";
    }
    for (const Zone& z : b.zones) {
        out << "[zone " << z.name << "]\n";
        out << "floor_area = " << format_full(z.floor_area_m2) << '\n';
        out << "volume = " << format_full(z.volume_m3) << '\n';
        out << "infiltration_ach = " << format_full(z.infiltration_ach) << '\n';
        out << "max_occupants = " << z.max_occupants << '\n';
        if (!z.surfaces.empty()) {
            out << "surfaces = ";
            for (std::size_t i = 0; i < z.surfaces.size(); ++i) {
                if (i) out << ", ";
                out << z.surfaces[i].assembly << ':' << format_full(z.surfaces[i].area_m2) << ':'
                    << format_full(z.surfaces[i].azimuth_deg);
            }
            out << '\n';
        }
        out << '\n';
    }
    out << "[schedule]\n";
    out << "sensible_per_occupant = " << format_full(b.schedule.sensible_w_per_occupant) << '\n';
    out << "latent_per_occupant = " << format_full(b.schedule.latent_w_per_occupant) << '\n';
    static const char* kDays[] = {"mon", "tue", "wed", "thu", "fri", "sat", "sun"};
    for (const auto& [zone, grid] : b.schedule.grids()) {
        for (int d = 0; d < 7; ++d) {
            int h = 0;
            while (h < 24) {
                const int count = grid[d * 24 + h];
                int h2 = h;
                while (h2 + 1 < 24 && grid[d * 24 + h2 + 1] == count) ++h2;
                if (count > 0) {
                    out << "set = " << zone << ' ' << kDays[d] << ' ' << h;
                    if (h2 > h) out << '-' << h2;
                    out << ' ' << count << '\n';
                }
                h = h2 + 1;
            }
        }
    }
    return out.str();
}

// Coupling spec file: one [bridge] section with keys template, input,
// command, output, objective_key, timeout_s, unused_parameter (warn|error).
inline CouplingSpec load_coupling_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open coupling spec: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    const auto sections = parse_config_text(buf.str(), path.string());
    if (sections.size() != 1 || sections.front().kind != "bridge")
        throw Error(path.string() + ": expected exactly one [bridge] section");
    const ConfigSection& sec = sections.front();

    CouplingSpec spec;
    spec.template_path = sec.require("template", path.string());
    if (spec.template_path.is_relative()) spec.template_path = path.parent_path() / spec.template_path;
    if (const std::string* v = sec.find("input")) spec.rendered_input_name = *v;
    spec.command = sec.require("command", path.string());
    if (const std::string* v = sec.find("output")) spec.output_name = *v;
    if (const std::string* v = sec.find("objective_key")) spec.objective_key = *v;
    if (const std::string* v = sec.find("timeout_s")) spec.timeout_s = detail::config_number(*v, sec.line, path.string());
    if (const std::string* v = sec.find("unused_parameter")) {
        if (*v == "error") spec.error_on_unused_parameter = true;
        else if (*v != "warn") throw Error(path.string() + ": unused_parameter must be 'warn' or 'error'");
    }
    spec.validate();
    return spec;
}

} // namespace comfortopt
