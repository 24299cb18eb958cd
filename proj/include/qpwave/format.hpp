#ifndef QPWAVE_FORMAT_HPP
#define QPWAVE_FORMAT_HPP

#include <cmath>
#include <cstdio>
#include <string>

namespace qpwave::io {

/// 17-significant-digit decimal form, round-trip safe for 64-bit floats.
inline std::string float17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

/// float17, but empty for non-finite values (CSV cells).
inline std::string float17_or_empty(double v) {
    return std::isfinite(v) ? float17(v) : std::string();
}

/// float17, but "null" for non-finite values (JSON).
inline std::string float17_or_null(double v) {
    return std::isfinite(v) ? float17(v) : std::string("null");
}

}  // namespace qpwave::io

#endif  // QPWAVE_FORMAT_HPP
