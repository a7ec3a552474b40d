#pragma once

#include <string>

#include "advreg/linear_model.hpp"

namespace advreg {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

/// theta serialized as a single CSV field: entries joined with ';'.
std::string format_vector(const Vector& v);

}  // namespace advreg
