#pragma once

#include <string>

namespace rgdc::detail {

// Shortest round-trippable decimal form (%.17g) for byte-stable CSV output.
std::string g17(double value);

}  // namespace rgdc::detail
