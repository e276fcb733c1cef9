#pragma once

#include <optional>
#include <string>

namespace psn {

/// Shortest text that round-trips the double ("%.17g"); "nan"/"inf" spelled lowercase.
std::string csv_number(double value);
/// Empty field when absent.
std::string csv_number(const std::optional<double>& value);

}  // namespace psn
