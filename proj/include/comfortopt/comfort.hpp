#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "comfortopt/common.hpp"

namespace comfortopt {

inline constexpr double kMetToWPerM2 = 58.15;   // 1 met
inline constexpr double kCloToM2KW = 0.155;     // 1 clo

// Fixed per run; the simulated occupants wear the same clothing and do the
// same activity all year.
struct ComfortParams {
    double metabolic_rate_w_m2 = 1.2 * kMetToWPerM2;
    double external_work_w_m2 = 0.0;
    double clothing_clo = 0.5;

    void validate() const {
        if (metabolic_rate_w_m2 <= 0.0) throw Error("metabolic rate must be > 0");
        if (external_work_w_m2 < 0.0) throw Error("external work must be >= 0");
        if (clothing_clo < 0.0) throw Error("clothing insulation must be >= 0");
    }
};

struct IndoorCondition {
    double air_c = 0.0;
    double mrt_c = 0.0;
    double rh_pct = 50.0;
    double air_velocity_ms = 0.1;

    void validate() const {
        if (rh_pct < 0.0 || rh_pct > 100.0) throw Error("relative humidity must be in [0, 100] %");
        if (air_velocity_ms < 0.0) throw Error("air velocity must be >= 0");
    }
};

enum class Sensation { Cold = -3, Cool = -2, SlightlyCool = -1, Neutral = 0, SlightlyWarm = 1, Warm = 2, Hot = 3 };

inline const char* to_string(Sensation s) {
    switch (s) {
        case Sensation::Cold: return "cold";
        case Sensation::Cool: return "cool";
        case Sensation::SlightlyCool: return "slightly cool";
        case Sensation::Neutral: return "neutral";
        case Sensation::SlightlyWarm: return "slightly warm";
        case Sensation::Warm: return "warm";
        case Sensation::Hot: return "hot";
    }
    return "?";
}

// Round half away from zero, clamp to the seven-point scale. The raw PMV is
// never clamped; only the label is.
inline Sensation sensation(double pmv_value) {
    long r = std::lround(pmv_value);
    if (r < -3) r = -3;
    if (r > 3) r = 3;
    return static_cast<Sensation>(r);
}

// 100 - 95*exp(-0.03353*pmv^4 - 0.2179*pmv^2); 5 % at neutral.
inline double ppd(double pmv_value) {
    const double p2 = pmv_value * pmv_value;
    return 100.0 - 95.0 * std::exp(-0.03353 * p2 * p2 - 0.2179 * p2);
}

struct PMVResult {
    double pmv = 0.0;
    double ppd = 5.0;
    Sensation sensation = Sensation::Neutral;
    double clothing_surface_c = 0.0;
    int iterations = 0;
};

// Fanger heat-balance PMV (ISO 7730 / ASHRAE Fundamentals formulation).
//
// The clothing surface temperature is solved with the standard damped fixed
// point; the convective coefficient takes max(natural, forced) each sweep.
// PMV = (0.303*exp(-0.036*M) + 0.028) * L with L the thermal load: metabolic
// heat minus skin diffusion, sweat evaporation, latent and dry respiration,
// and clothed-body radiation and convection.
//
// clothing_temp_guess_c overrides the standard initial guess; the fixed
// point is unique, so any reasonable guess converges to the same surface
// temperature (this is exercised by the tests).
inline PMVResult pmv(const IndoorCondition& c, const ComfortParams& p = {},
                     std::optional<double> clothing_temp_guess_c = std::nullopt) {
    c.validate();
    p.validate();

    const double pa = c.rh_pct * 10.0 * std::exp(16.6536 - 4030.183 / (c.air_c + 235.0));

    const double icl = kCloToM2KW * p.clothing_clo;
    const double m = p.metabolic_rate_w_m2;
    const double w = p.external_work_w_m2;
    const double mw = m - w;

    const double fcl = icl <= 0.078 ? 1.0 + 1.29 * icl : 1.05 + 0.645 * icl;

    const double hcf = 12.1 * std::sqrt(c.air_velocity_ms);
    const double taa = c.air_c + 273.0;
    const double tra = c.mrt_c + 273.0;

    const double tcla = clothing_temp_guess_c ? *clothing_temp_guess_c + 273.0
                                              : taa + (35.5 - c.air_c) / (3.5 * icl + 0.1);

    const double p1 = icl * fcl;
    const double p2 = p1 * 3.96;
    const double p3 = p1 * 100.0;
    const double p4 = p1 * taa;
    const double tra4 = std::pow(tra / 100.0, 4);
    const double p5 = 308.7 - 0.028 * mw + p2 * tra4;

    double xn = tcla / 100.0;
    double xf = tcla / 50.0;
    double hc = hcf;
    constexpr double kEps = 1e-7; // 1e-5 degC on the clothing temperature
    constexpr int kMaxIter = 300;
    int n = 0;
    while (std::abs(xn - xf) > kEps) {
        xf = (xf + xn) / 2.0;
        const double hcn = 2.38 * std::pow(std::abs(100.0 * xf - taa), 0.25);
        hc = hcf > hcn ? hcf : hcn;
        xn = (p5 + p4 * hc - p2 * xf * xf * xf * xf) / (100.0 + p3 * hc);
        if (++n > kMaxIter)
            throw Error("clothing temperature iteration did not converge (ta=" + format_full(c.air_c) +
                        " tr=" + format_full(c.mrt_c) + " rh=" + format_full(c.rh_pct) +
                        " v=" + format_full(c.air_velocity_ms) + " M=" + format_full(m) +
                        " clo=" + format_full(p.clothing_clo) + ")");
    }
    const double tcl = 100.0 * xn - 273.0;

    const double hl1 = 3.05e-3 * (5733.0 - 6.99 * mw - pa);
    const double hl2 = mw > kMetToWPerM2 ? 0.42 * (mw - kMetToWPerM2) : 0.0;
    const double hl3 = 1.7e-5 * m * (5867.0 - pa);
    const double hl4 = 0.0014 * m * (34.0 - c.air_c);
    const double hl5 = 3.96 * fcl * (xn * xn * xn * xn - tra4);
    const double hl6 = fcl * hc * (tcl - c.air_c);

    const double ts = 0.303 * std::exp(-0.036 * m) + 0.028;
    const double load = mw - hl1 - hl2 - hl3 - hl4 - hl5 - hl6;

    PMVResult r;
    r.pmv = ts * load;
    if (!std::isfinite(r.pmv))
        throw Error("PMV evaluation produced a non-finite value");
    r.ppd = ppd(r.pmv);
    r.sensation = sensation(r.pmv);
    r.clothing_surface_c = tcl;
    r.iterations = n;
    return r;
}

} // namespace comfortopt
