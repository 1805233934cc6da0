#pragma once

#include <string>

#include "json.hpp"
#include "kppopt/profile.hpp"

namespace kppopt {

/// Fixed scientific notation with 17 significant digits.
std::string format_number(double x);

nlohmann::json to_json(const ResourceProfile& m);
/// Expects {"kappa": k, "breakpoints": [...], "values": [...]}.
ResourceProfile profile_from_json(const nlohmann::json& j);

}  // namespace kppopt
