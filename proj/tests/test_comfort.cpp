#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "comfortopt/comfort.hpp"

using namespace comfortopt;
using Catch::Approx;

namespace {

struct RefCase {
    double ta, tr, vel, rh, met, clo;
    double pmv_ref; // frozen from tests/oracle/fanger_reference.py
};

// The first six rows reproduce published ISO 7730 validation conditions;
// the reference values were generated by the independent oracle script and
// cross-checked against the published (2-decimal) table values.
constexpr RefCase kReference[] = {
    {22.0, 22.0, 0.10, 60.0, 1.2, 0.5, -0.7530503294},
    {27.0, 27.0, 0.10, 60.0, 1.2, 0.5, 0.7639118024},
    {27.0, 27.0, 0.30, 60.0, 1.2, 0.5, 0.4327632745},
    {23.5, 25.5, 0.10, 60.0, 1.2, 0.5, -0.0143726799},
    {19.0, 19.0, 0.10, 40.0, 1.2, 1.0, -0.6006248403},
    {23.5, 23.5, 0.10, 40.0, 1.2, 1.0, 0.3613813231},
    {16.0, 16.0, 0.15, 50.0, 1.2, 0.5, -2.8172625252},
    {18.0, 18.0, 0.15, 50.0, 1.2, 0.5, -2.2186081150},
    {24.0, 24.0, 0.15, 60.0, 1.2, 0.5, -0.3097842717},
    {26.0, 26.0, 0.15, 70.0, 1.2, 0.5, 0.4043412729},
    {28.0, 28.0, 0.15, 75.0, 1.2, 0.5, 1.1049931744},
    {30.0, 30.0, 0.15, 75.0, 1.2, 0.5, 1.7802066103},
    {31.0, 31.0, 0.15, 80.0, 1.2, 0.5, 2.1725596225},
    {29.0, 31.0, 0.20, 80.0, 1.2, 0.5, 1.7013239673},
    {25.0, 25.0, 0.10, 50.0, 1.6, 0.5, 0.6583809684},
};

ComfortParams params(double met, double clo) {
    ComfortParams p;
    p.metabolic_rate_w_m2 = met * kMetToWPerM2;
    p.clothing_clo = clo;
    return p;
}

} // namespace

TEST_CASE("pmv reproduces the reference table") {
    for (const RefCase& c : kReference) {
        const PMVResult r = pmv({c.ta, c.tr, c.rh, c.vel}, params(c.met, c.clo));
        INFO("ta=" << c.ta << " tr=" << c.tr << " vel=" << c.vel << " rh=" << c.rh);
        CHECK(r.pmv == Approx(c.pmv_ref).margin(1e-6));
    }
}

TEST_CASE("pmv matches the published rounded validation values") {
    struct Published {
        double ta, tr, vel, rh, met, clo, pmv_published;
    };
    constexpr Published kPublished[] = {
        {22.0, 22.0, 0.10, 60.0, 1.2, 0.5, -0.75}, {27.0, 27.0, 0.10, 60.0, 1.2, 0.5, 0.77},
        {27.0, 27.0, 0.30, 60.0, 1.2, 0.5, 0.44},  {23.5, 25.5, 0.10, 60.0, 1.2, 0.5, -0.01},
        {19.0, 19.0, 0.10, 40.0, 1.2, 1.0, -0.60}, {23.5, 23.5, 0.10, 40.0, 1.2, 1.0, 0.36},
    };
    for (const Published& c : kPublished) {
        const PMVResult r = pmv({c.ta, c.tr, c.rh, c.vel}, params(c.met, c.clo));
        CHECK(r.pmv == Approx(c.pmv_published).margin(0.015));
    }
}

TEST_CASE("tropical condition lands on the warm side") {
    const PMVResult r = pmv({30.0, 30.0, 75.0, 0.15}, params(1.2, 0.5));
    CHECK(r.pmv > 0.0);
    CHECK((r.sensation == Sensation::SlightlyWarm || r.sensation == Sensation::Warm));
}

TEST_CASE("zero thermal load gives a neutral vote") {
    // Bracket the root of pmv(t) with ta = tr and bisect.
    const ComfortParams p = params(1.2, 0.5);
    auto at = [&](double t) { return pmv({t, t, 55.0, 0.12}, p).pmv; };
    double lo = 18.0, hi = 30.0;
    REQUIRE(at(lo) < 0.0);
    REQUIRE(at(hi) > 0.0);
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (at(mid) < 0.0 ? lo : hi) = mid;
    }
    const PMVResult r = pmv({0.5 * (lo + hi), 0.5 * (lo + hi), 55.0, 0.12}, p);
    CHECK(std::abs(r.pmv) < 1e-6);
    CHECK(r.sensation == Sensation::Neutral);
}

TEST_CASE("ppd curve") {
    CHECK(ppd(0.0) == 5.0);
    CHECK(ppd(1.0) == Approx(26.1196500836).margin(1e-9));
    for (double p : {0.3, 0.9, 1.7, 2.4}) {
        CHECK(std::abs(ppd(p) - ppd(-p)) < 1e-12);
        CHECK(ppd(p + 0.1) > ppd(p));
    }
}

TEST_CASE("sensation labels follow the seven-point scale") {
    CHECK(sensation(0.0) == Sensation::Neutral);
    CHECK(sensation(2.10) == Sensation::Warm);
    CHECK(sensation(1.45) == Sensation::SlightlyWarm);
    CHECK(sensation(-3.4) == Sensation::Cold);
    CHECK(sensation(9.0) == Sensation::Hot);
    CHECK(std::string(to_string(sensation(-1.2))) == "slightly cool");

    // Label changes happen only at half-integer boundaries.
    for (double v = -3.5; v <= 3.5; v += 0.01) {
        const double vr = std::round(v * 100.0) / 100.0;
        const Sensation here = sensation(vr);
        const Sensation next = sensation(vr + 0.004);
        CHECK(here == next);
    }
    CHECK(sensation(0.49) == Sensation::Neutral);
    CHECK(sensation(0.51) == Sensation::SlightlyWarm);
    CHECK(sensation(-0.51) == Sensation::SlightlyCool);
}

TEST_CASE("pmv is non-decreasing in air and radiant temperature") {
    const ComfortParams p = params(1.2, 0.5);
    double prev = -10.0;
    for (double t = 15.0; t <= 40.0; t += 0.5) {
        const double v = pmv({t, t, 60.0, 0.15}, p).pmv;
        CHECK(v >= prev);
        prev = v;
    }
    prev = -10.0;
    for (double tr = 15.0; tr <= 40.0; tr += 0.5) {
        const double v = pmv({25.0, tr, 60.0, 0.15}, p).pmv;
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("clothing solve converges to the same fixed point from perturbed guesses") {
    const ComfortParams p = params(1.2, 0.5);
    const IndoorCondition c{28.0, 29.0, 75.0, 0.15};
    const PMVResult base = pmv(c, p);
    const PMVResult lo = pmv(c, p, base.clothing_surface_c - 5.0);
    const PMVResult hi = pmv(c, p, base.clothing_surface_c + 5.0);
    CHECK(std::abs(lo.clothing_surface_c - base.clothing_surface_c) < 1e-4);
    CHECK(std::abs(hi.clothing_surface_c - base.clothing_surface_c) < 1e-4);
}

TEST_CASE("pathological inputs are rejected rather than returning garbage") {
    CHECK_THROWS_AS(pmv({25.0, 25.0, 150.0, 0.1}), Error);
    CHECK_THROWS_AS(pmv({25.0, 25.0, 50.0, -0.1}), Error);
    CHECK_THROWS_AS(pmv({25.0, 1e6, 50.0, 0.1}), Error);
    ComfortParams p;
    p.metabolic_rate_w_m2 = -5.0;
    CHECK_THROWS_AS(pmv({25.0, 25.0, 50.0, 0.1}, p), Error);
}
