#include "core/io.hpp"

#include <cstdio>

namespace fuelstop::io {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace fuelstop::io
