#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace virtperm {

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

// Strict parsers; throw std::invalid_argument on malformed input.
double parse_double(std::string_view s);
long long parse_int(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);

std::vector<double> parse_double_list(std::string_view csv);
std::vector<long long> parse_int_list(std::string_view csv);

std::string join_doubles(const std::vector<double>& v);
std::string join_ints(const std::vector<long long>& v);

}  // namespace virtperm
