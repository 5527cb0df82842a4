#pragma once

#include <string>

namespace liemax {

/// Round-trip decimal form with 17 significant digits; infinities as "inf" / "-inf".
std::string format_double(double v);

}  // namespace liemax
