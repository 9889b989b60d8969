#pragma once

#include <string>

#include "uavplan/mission.hpp"

namespace uavplan {

// JSON document mirroring the Scenario record; round-trips bit-exactly.
std::string scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const std::string& text);

void save_scenario(const Scenario& s, const std::string& path);
Scenario load_scenario(const std::string& path);

}  // namespace uavplan
