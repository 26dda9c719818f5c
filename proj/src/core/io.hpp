#pragma once

#include <string>

namespace fuelstop::io {

// 17 significant digits: enough for exact double round-trips.
std::string fmt17(double v);

}  // namespace fuelstop::io
