#pragma once

#include <iosfwd>
#include <string>

#include "gibbspp/geometry.hpp"

namespace gibbspp {

/// Point-pattern text format: header "x,y[,...]" then one point per line.
/// Values round-trip to full double precision.
Configuration read_point_pattern(std::istream& in);
Configuration read_point_pattern_file(const std::string& path);

void write_point_pattern(std::ostream& out, const Configuration& config);
void write_point_pattern_file(const std::string& path, const Configuration& config);

}  // namespace gibbspp
