#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mgplan {

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

// Strict: the whole field must be a finite number. Returns false otherwise.
bool parse_double(std::string_view text, double& out);
bool parse_int(std::string_view text, long long& out);

std::vector<std::string_view> split(std::string_view text, char sep);
std::string_view trim(std::string_view text);

// Lines without their terminators; a trailing newline does not produce an
// empty final line. '\r' before '\n' is dropped.
std::vector<std::string_view> lines_of(std::string_view text);

}  // namespace mgplan
