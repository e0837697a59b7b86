#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace comfortopt {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Rendering used on every wire format that must round-trip a double
// exactly (trace CSV, weather CSV, bridge input files).
inline std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

} // namespace comfortopt
