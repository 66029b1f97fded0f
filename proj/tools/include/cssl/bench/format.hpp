#pragma once

#include <string>

namespace cssl::bench {

/// Compact scientific notation "m.mmm±e" with `digits` significant digits,
/// e.g. format_sci(9.8e-7, 2) == "9.8-7", format_sci(326.01, 5) == "3.2601+2".
std::string format_sci(double value, int digits);

/// Parses the compact form back (accepts plain numbers too).
double parse_sci(const std::string& text);

/// hours:minutes:seconds with leading zero parts dropped: "03", "54:47",
/// "2:11", "4:00:09". Rounds to whole seconds.
std::string format_time(double seconds);

/// Shortest decimal string that round-trips to the same double.
std::string format_exact(double value);

}  // namespace cssl::bench
