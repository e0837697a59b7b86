#pragma once

#include <string>
#include <vector>

#include "comfortopt/common.hpp"

namespace comfortopt {

// Optimization domain for any layer thickness, metres.
inline constexpr double kThicknessLower = 0.001;
inline constexpr double kThicknessUpper = 1.0;

struct Material {
    std::string name;
    double conductivity_w_mk = 0.0;
    double density_kg_m3 = 0.0;
    double specific_heat_j_kgk = 0.0;

    void validate() const {
        if (conductivity_w_mk <= 0.0 || density_kg_m3 <= 0.0 || specific_heat_j_kgk <= 0.0)
            throw Error("material '" + name + "': conductivity, density and specific heat must be > 0");
    }
};

struct Layer {
    Material material;
    double thickness_m = 0.0;

    void validate() const {
        material.validate();
        if (thickness_m < kThicknessLower || thickness_m > kThicknessUpper)
            throw Error("layer '" + material.name + "': thickness " + format_full(thickness_m) +
                        " outside [" + format_full(kThicknessLower) + ", " + format_full(kThicknessUpper) + "] m");
    }
};

// Ordered outside -> inside. Film resistances sit outside the layer stack
// and are excluded from conduction_resistance but included in u_value.
struct WallAssembly {
    std::vector<Layer> layers;
    double exterior_film_m2kw = 0.04;
    double interior_film_m2kw = 0.13;
    double solar_absorptance = 0.6;

    void validate() const {
        if (layers.empty())
            throw Error("wall assembly needs at least one layer");
        for (const Layer& l : layers) l.validate();
        if (exterior_film_m2kw < 0.0 || interior_film_m2kw < 0.0)
            throw Error("film resistances must be >= 0");
        if (solar_absorptance < 0.0 || solar_absorptance > 1.0)
            throw Error("solar absorptance must be in [0, 1]");
    }
};

inline double total_thickness(const WallAssembly& a) {
    double t = 0.0;
    for (const Layer& l : a.layers) t += l.thickness_m;
    return t;
}

// The customary Reunion wall: wood / glass wool / concrete block,
// outside -> inside.
inline WallAssembly baseline_reunion_wall() {
    WallAssembly a;
    a.layers = {
        {{"wood", 0.15, 608.0, 1630.0}, 0.025},
        {{"glass_wool", 0.04, 11.0, 800.0}, 0.025},
        {{"concrete_block", 1.11, 800.0, 920.0}, 0.2032},
    };
    a.validate();
    return a;
}

// Series resistance of the layer stack alone, m2K/W.
inline double conduction_resistance(const WallAssembly& a) {
    a.validate();
    double r = 0.0;
    for (const Layer& l : a.layers) r += l.thickness_m / l.material.conductivity_w_mk;
    return r;
}

inline double u_value(const WallAssembly& a) {
    const double r = a.exterior_film_m2kw + conduction_resistance(a) + a.interior_film_m2kw;
    if (r <= 0.0) throw Error("total wall resistance is zero");
    return 1.0 / r;
}

// Copy with a single layer's thickness replaced; everything else is
// bit-identical to the input.
inline WallAssembly with_layer_thickness(const WallAssembly& a, std::size_t layer_index, double thickness_m) {
    if (layer_index >= a.layers.size())
        throw Error("layer index " + std::to_string(layer_index) + " out of range (assembly has " +
                    std::to_string(a.layers.size()) + " layers)");
    if (thickness_m < kThicknessLower || thickness_m > kThicknessUpper)
        throw Error("thickness " + format_full(thickness_m) + " outside [" + format_full(kThicknessLower) +
                    ", " + format_full(kThicknessUpper) + "] m");
    WallAssembly out = a;
    out.layers[layer_index].thickness_m = thickness_m;
    return out;
}

} // namespace comfortopt
