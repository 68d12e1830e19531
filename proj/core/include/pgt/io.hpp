#pragma once

#include <string>

#include <json.hpp>

#include "pgt/dynamics.hpp"
#include "pgt/pgtlab.hpp"

namespace pgt {
namespace io {

using nlohmann::json;

// Accepts "12pi", "12pi/2", "q=408" (a bare lattice index), or "8" (pi units).
TimePoint parse_time(const std::string& s);

// RFC-4180 style field quoting.
std::string csv_field(const std::string& s);

json to_json(const TimePoint& t, unsigned digits = 24);
TimePoint time_from_json(const json& j);

json to_json(const PgtRecord& r, unsigned digits = 24);
PgtRecord record_from_json(const json& j);

json to_json(const PgtCurve& c, unsigned digits = 24);
json to_json(const PeriodicityReport& r, unsigned digits = 24);
PeriodicityReport periodicity_from_json(const json& j);

}  // namespace io
}  // namespace pgt
