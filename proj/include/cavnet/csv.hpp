#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace cavnet {

// Fixed formatting so that identical runs produce byte-identical files.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::string csv_line(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += fields[i];
    }
    return out;
}

} // namespace cavnet
