#ifndef NEDIFF_CORE_FORMAT_HPP
#define NEDIFF_CORE_FORMAT_HPP

#include <string>

namespace nediff {

/// Shortest-safe text form of a double (%.17g); round-trips exactly.
std::string format_double(double value);

}  // namespace nediff

#endif  // NEDIFF_CORE_FORMAT_HPP
