#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

namespace sgw::cli {

/// Seconds from "200us", "0.4ms", "5ns", "1.5s" or a bare number of seconds.
/// Throws InvalidParameter on anything else.
double parse_time(std::string_view text);

/// Comma-separated times, each as in parse_time.
std::vector<double> parse_time_list(std::string_view text);

/// Entry point of the sgw tool. Returns 0 on success, 1 for invalid
/// arguments and 2 when the library reports a failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sgw::cli
