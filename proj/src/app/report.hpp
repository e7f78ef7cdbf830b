#pragma once

#include "experiment.hpp"

#include <ostream>
#include <string>

namespace fdstab::app {

/// Shortest round-trip decimal form.
std::string format_double(double v);

/// "# generated <UTC timestamp>" and "# command ..." comments, then the body.
void write_csv(std::ostream& os, const Outcome& outcome, const std::string& timestamp);
void write_json(std::ostream& os, const Outcome& outcome, const std::string& timestamp);

std::string utc_timestamp();

} // namespace fdstab::app
